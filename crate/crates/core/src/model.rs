//! Instruction alphabet, memory-model relaxation matrices and the global
//! generation/settling parameters.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

/// Type of a memory operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstructionType {
    Load,
    Store,
}

impl InstructionType {
    pub const ALL: [InstructionType; 2] = [InstructionType::Load, InstructionType::Store];

    #[inline]
    pub(crate) fn index(self) -> usize {
        match self {
            InstructionType::Load => 0,
            InstructionType::Store => 1,
        }
    }

    pub fn is_store(self) -> bool {
        self == InstructionType::Store
    }
}

impl fmt::Display for InstructionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstructionType::Load => "ld",
            InstructionType::Store => "st",
        })
    }
}

/// Matrix indexed by `(earlier, later)` instruction types.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairMatrix<T>([[T; 2]; 2]);

impl<T: Clone> PairMatrix<T> {
    pub fn splat(value: T) -> Self {
        PairMatrix([[value.clone(), value.clone()], [value.clone(), value]])
    }

    /// Builds a matrix from a function of `(earlier, later)`.
    pub fn from_fn(mut f: impl FnMut(InstructionType, InstructionType) -> T) -> Self {
        use InstructionType::*;
        PairMatrix([[f(Load, Load), f(Load, Store)], [f(Store, Load), f(Store, Store)]])
    }

    #[inline]
    pub fn get(&self, earlier: InstructionType, later: InstructionType) -> T {
        self.0[earlier.index()][later.index()].clone()
    }

    #[inline]
    pub fn get_ref(&self, earlier: InstructionType, later: InstructionType) -> &T {
        &self.0[earlier.index()][later.index()]
    }

    pub fn set(&mut self, earlier: InstructionType, later: InstructionType, value: T) {
        self.0[earlier.index()][later.index()] = value;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModelName {
    #[serde(rename = "sc")]
    Sc,
    #[serde(rename = "tso")]
    Tso,
    #[serde(rename = "pso")]
    Pso,
    #[serde(rename = "wo")]
    Wo,
    #[serde(rename = "custom")]
    Custom,
}

impl ModelName {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Sc => "sc",
            ModelName::Tso => "tso",
            ModelName::Pso => "pso",
            ModelName::Wo => "wo",
            ModelName::Custom => "custom",
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A memory consistency model, described by which ordered type pairs may
/// be reordered.
///
/// `relax.get(earlier, later)` answers: may an instruction of type `later`
/// settle past a preceding instruction of type `earlier`?
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryModel {
    name: ModelName,
    relax: PairMatrix<bool>,
}

impl MemoryModel {
    pub const SC: MemoryModel = MemoryModel {
        name: ModelName::Sc,
        relax: PairMatrix([[false, false], [false, false]]),
    };
    /// Loads may complete before earlier stores.
    pub const TSO: MemoryModel = MemoryModel {
        name: ModelName::Tso,
        relax: PairMatrix([[false, false], [true, false]]),
    };
    /// TSO plus store/store reordering.
    pub const PSO: MemoryModel = MemoryModel {
        name: ModelName::Pso,
        relax: PairMatrix([[false, false], [true, true]]),
    };
    pub const WO: MemoryModel = MemoryModel {
        name: ModelName::Wo,
        relax: PairMatrix([[true, true], [true, true]]),
    };

    pub const PRESETS: [MemoryModel; 4] = [Self::SC, Self::TSO, Self::PSO, Self::WO];

    pub fn custom(relax: PairMatrix<bool>) -> Self {
        MemoryModel {
            name: ModelName::Custom,
            relax,
        }
    }

    pub fn name(&self) -> ModelName {
        self.name
    }

    pub fn relaxations(&self) -> PairMatrix<bool> {
        self.relax
    }

    /// Whether `later` may settle past a preceding `earlier`.
    #[inline]
    pub fn allows_swap(&self, earlier: InstructionType, later: InstructionType) -> bool {
        self.relax.get(earlier, later)
    }

    /// Probability that a single swap attempt of `later` past `earlier`
    /// succeeds: zero when the model forbids the pair, the configured
    /// success probability otherwise.
    #[inline]
    pub fn swap_probability(
        &self,
        params: &ModelParams,
        earlier: InstructionType,
        later: InstructionType,
    ) -> f64 {
        if self.allows_swap(earlier, later) {
            params.swap_prob.get(earlier, later)
        } else {
            0.0
        }
    }

    /// The full per-pair swap table for `params`.
    pub fn swap_table(&self, params: &ModelParams) -> PairMatrix<f64> {
        PairMatrix::from_fn(|e, l| self.swap_probability(params, e, l))
    }
}

impl FromStr for MemoryModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(Self::SC),
            "tso" => Ok(Self::TSO),
            "pso" => Ok(Self::PSO),
            "wo" => Ok(Self::WO),
            other => Err(Error::Usage(format!(
                "unknown memory model `{other}` (expected sc, tso, pso or wo)"
            ))),
        }
    }
}

impl fmt::Display for MemoryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.name.fmt(f)
    }
}

pub const DEFAULT_PROGRAM_LEN: usize = 64;

/// Program-generation and settling parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    /// Probability that a body instruction is a store.
    pub store_prob: f64,
    /// Per-pair swap success probability, indexed `(earlier, later)`.
    pub swap_prob: PairMatrix<f64>,
    /// Number of non-critical instructions preceding the critical pair.
    pub program_len: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            store_prob: 0.5,
            swap_prob: PairMatrix::splat(0.5),
            program_len: DEFAULT_PROGRAM_LEN,
        }
    }
}

impl ModelParams {
    pub fn with_program_len(program_len: usize) -> Self {
        ModelParams {
            program_len,
            ..Self::default()
        }
    }

    /// Checks that every probability lies in `[0, 1]`.
    pub fn validate(&self) -> Result<(), Error> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !ok(self.store_prob) {
            return Err(Error::Usage(format!(
                "store probability {} outside [0, 1]",
                self.store_prob
            )));
        }
        for e in InstructionType::ALL {
            for l in InstructionType::ALL {
                let s = self.swap_prob.get(e, l);
                if !ok(s) {
                    return Err(Error::Usage(format!(
                        "swap probability {s} for ({e}, {l}) outside [0, 1]"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::InstructionType::{Load as Ld, Store as St};
    use super::*;

    #[test]
    fn preset_matrices() {
        // (model, [ld/ld, ld/st, st/ld, st/st]) as (earlier, later)
        let table = [
            (MemoryModel::SC, [false, false, false, false]),
            (MemoryModel::TSO, [false, false, true, false]),
            (MemoryModel::PSO, [false, false, true, true]),
            (MemoryModel::WO, [true, true, true, true]),
        ];
        for (model, expect) in table {
            let got = [
                model.allows_swap(Ld, Ld),
                model.allows_swap(Ld, St),
                model.allows_swap(St, Ld),
                model.allows_swap(St, St),
            ];
            assert_eq!(got, expect, "{model}");
        }
    }

    #[test]
    fn allows_swap_examples() {
        assert!(!MemoryModel::SC.allows_swap(St, Ld));
        assert!(MemoryModel::TSO.allows_swap(St, Ld));
        assert!(!MemoryModel::TSO.allows_swap(Ld, St));
        assert!(MemoryModel::WO.allows_swap(Ld, Ld));
    }

    #[test]
    fn swap_probability_examples() {
        let d = ModelParams::default();
        assert_eq!(MemoryModel::SC.swap_probability(&d, St, Ld), 0.0);
        assert_eq!(MemoryModel::TSO.swap_probability(&d, St, Ld), 0.5);
        let mut p = d;
        p.swap_prob.set(Ld, Ld, 0.3);
        assert_eq!(MemoryModel::WO.swap_probability(&p, Ld, Ld), 0.3);
    }

    #[test]
    fn zero_probability_iff_disallowed() {
        let d = ModelParams::default();
        for model in MemoryModel::PRESETS {
            for e in InstructionType::ALL {
                for l in InstructionType::ALL {
                    assert_eq!(model.swap_probability(&d, e, l) == 0.0, !model.allows_swap(e, l));
                }
            }
        }
    }

    #[test]
    fn custom_matrix_round_trips() {
        let m = MemoryModel::custom(PairMatrix::from_fn(|e, l| e == Ld && l == St));
        assert_eq!(m.name(), ModelName::Custom);
        assert!(m.allows_swap(Ld, St));
        assert!(!m.allows_swap(St, Ld));
    }

    #[test]
    fn parses_case_insensitively() {
        assert_eq!("TSO".parse::<MemoryModel>().unwrap(), MemoryModel::TSO);
        assert_eq!("Wo".parse::<MemoryModel>().unwrap(), MemoryModel::WO);
        assert!("rc".parse::<MemoryModel>().is_err());
    }

    #[test]
    fn rejects_bad_probabilities() {
        let p = ModelParams {
            store_prob: 1.5,
            ..ModelParams::default()
        };
        assert!(p.validate().is_err());
        let mut p = ModelParams::default();
        p.swap_prob.set(St, Ld, -0.1);
        assert!(p.validate().is_err());
        assert!(ModelParams::default().validate().is_ok());
    }
}

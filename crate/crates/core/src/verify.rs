//! Cross-checks between the closed forms, the brute-force oracles and the
//! sampling engine.

use serde::Serialize;

use crate::analytic::{
    bottom_store_limit, bottom_store_prob, disjoint_probability, partition_count, pr_l_lower, sc_pr_a,
    two_thread_pr_a, window_law, window_pmf_bounds, ExactValue, TwoThreadValue,
};
use crate::error::Result;
use crate::model::{MemoryModel, ModelName, ModelParams};
use crate::montecarlo::{
    estimate_bottom_store, estimate_disjoint_fixed, estimate_l_mu, estimate_pr_a, estimate_window_pmf,
    PrAOptions, Sampling,
};
use crate::oracle::{brute_partition_count, exact_disjoint, exact_window_pmf};
use crate::shift::{Overlap, SegmentLengths};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub sampling: Sampling,
    /// Body length used for the exact window enumeration.
    pub oracle_len: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            sampling: Sampling::new(1_000_000, crate::DEFAULT_SEED),
            oracle_len: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

const K_SIGMA: f64 = 3.0;

/// Runs every check in order. Errors from the underlying routines are
/// reported as failed checks rather than aborting the suite.
pub fn run_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    type Check = fn(&VerifyConfig) -> Result<(bool, String)>;
    let checks: [(&'static str, Check); 11] = [
        ("two-thread-exact", two_thread_exact),
        ("sym-sum-vs-sc-closed-form", sym_vs_sc),
        ("partition-dp-vs-enumeration", partitions),
        ("oracle-window-vs-closed-form", oracle_window),
        ("oracle-disjoint-brackets", oracle_disjoint),
        ("mc-pr-a-two-threads", mc_pr_a),
        ("mc-window-wo", mc_window_wo),
        ("mc-window-tso-envelope", mc_window_tso),
        ("mc-shift-only", mc_shift_only),
        ("mc-bottom-store", mc_bottom_store),
        ("mc-store-run-above-load", mc_l_mu),
    ];
    checks
        .iter()
        .map(|(name, f)| match f(config) {
            Ok((passed, detail)) => CheckOutcome::new(name, passed, detail),
            Err(e) => CheckOutcome::new(name, false, format!("error: {e}")),
        })
        .collect()
}

fn two_thread_exact(_: &VerifyConfig) -> Result<(bool, String)> {
    let sc = two_thread_pr_a(ModelName::Sc)? == TwoThreadValue::Exact(ExactValue::new(1, 6));
    let wo = two_thread_pr_a(ModelName::Wo)? == TwoThreadValue::Exact(ExactValue::new(7, 54));
    let tso = match two_thread_pr_a(ModelName::Tso)? {
        TwoThreadValue::Bounded(b) => {
            b.lower() == &ExactValue::new(58, 441)
                && b.upper() == &(ExactValue::new(58, 441) + ExactValue::new(1, 189))
        }
        TwoThreadValue::Exact(_) => false,
    };
    Ok((sc && wo && tso, format!("sc={sc} wo={wo} tso={tso}")))
}

fn sym_vs_sc(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 2..=7 {
        if sc_pr_a(n)? != disjoint_probability(&SegmentLengths::uniform(n, 2)?)? {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("n=2..7, mismatches {bad:?}")))
}

fn partitions(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut checked = 0;
    for x in 0..=20 {
        for y in 0..=8 {
            for z in 0..=10 {
                checked += 1;
                if partition_count(x, y, z) != brute_partition_count(x, y, z).into() {
                    return Ok((false, format!("phi({x},{y},{z}) differs")));
                }
            }
        }
    }
    Ok((true, format!("{checked} triples")))
}

fn oracle_window(config: &VerifyConfig) -> Result<(bool, String)> {
    let m = config.oracle_len;
    let params = ModelParams::with_program_len(m);
    let tol = 2f64.powi(-(m as i32) + 2);
    let (wo_law, _) = window_law(ModelName::Wo)?;
    let wo = exact_window_pmf(&MemoryModel::WO, &params)?;
    let mut worst_wo: f64 = 0.0;
    for (&g, v) in &wo {
        worst_wo = worst_wo.max((v.to_f64() - wo_law.pmf(g as u32).to_f64()).abs());
    }
    let tso = exact_window_pmf(&MemoryModel::TSO, &params)?;
    let tso_ok = tso.iter().all(|(&g, v)| {
        let b = window_pmf_bounds(g as u32);
        let x = v.to_f64();
        x >= b.lower().to_f64() - tol && x <= b.upper().to_f64() + tol
    });
    let ok = worst_wo <= tol && tso_ok;
    Ok((
        ok,
        format!("m={m}: wo max error {worst_wo:.3e} (tol {tol:.3e}), tso in envelope {tso_ok}"),
    ))
}

fn oracle_disjoint(_: &VerifyConfig) -> Result<(bool, String)> {
    let cases: [&[usize]; 6] = [
        &[2, 2],
        &[2, 2, 2],
        &[0, 5],
        &[1, 3, 2],
        &[4, 0, 2, 1],
        &[3, 3, 3, 3],
    ];
    for lens in cases {
        let lengths = SegmentLengths::new(lens.to_vec())?;
        let exact = disjoint_probability(&lengths)?;
        if !exact_disjoint(&lengths, 24)?.contains(&exact) {
            return Ok((false, format!("({lengths}) not bracketed")));
        }
    }
    Ok((true, format!("{} vectors, cap 24", cases.len())))
}

fn mc_pr_a(config: &VerifyConfig) -> Result<(bool, String)> {
    let params = ModelParams::default();
    let opts = PrAOptions::default();
    let s = &config.sampling;
    let sc = estimate_pr_a(&MemoryModel::SC, 2, &params, s, &opts)?;
    let wo = estimate_pr_a(&MemoryModel::WO, 2, &params, s, &opts)?;
    let tso = estimate_pr_a(&MemoryModel::TSO, 2, &params, s, &opts)?;
    let TwoThreadValue::Bounded(b) = two_thread_pr_a(ModelName::Tso)? else {
        unreachable!("tso two-thread value is an envelope")
    };
    let ok = sc.within(1.0 / 6.0, K_SIGMA, 0.0)
        && wo.within(7.0 / 54.0, K_SIGMA, 0.0)
        && tso.within_range(b.lower().to_f64(), b.upper().to_f64(), K_SIGMA);
    Ok((
        ok,
        format!("sc={:.5} tso={:.5} wo={:.5}", sc.mean, tso.mean, wo.mean),
    ))
}

fn mc_window_wo(config: &VerifyConfig) -> Result<(bool, String)> {
    let (law, _) = window_law(ModelName::Wo)?;
    let h = estimate_window_pmf(&MemoryModel::WO, &ModelParams::default(), &config.sampling)?;
    let slack = 2f64.powi(-60);
    let bad: Vec<usize> = (0..=8)
        .filter(|&g| !h.estimate(g).within(law.pmf(g as u32).to_f64(), K_SIGMA, slack))
        .collect();
    Ok((bad.is_empty(), format!("gamma 0..=8, outside 3 sigma: {bad:?}")))
}

fn mc_window_tso(config: &VerifyConfig) -> Result<(bool, String)> {
    let h = estimate_window_pmf(&MemoryModel::TSO, &ModelParams::default(), &config.sampling)?;
    let bad: Vec<usize> = (0..=6)
        .filter(|&g| {
            let b = window_pmf_bounds(g as u32);
            !h.estimate(g)
                .within_range(b.lower().to_f64(), b.upper().to_f64(), K_SIGMA)
        })
        .collect();
    Ok((bad.is_empty(), format!("gamma 0..=6, outside envelope: {bad:?}")))
}

fn mc_shift_only(config: &VerifyConfig) -> Result<(bool, String)> {
    let cases: [&[usize]; 4] = [&[2, 2], &[2, 2, 2], &[1, 4], &[0, 3, 1, 2]];
    for lens in cases {
        let lengths = SegmentLengths::new(lens.to_vec())?;
        let exact = disjoint_probability(&lengths)?.to_f64();
        let e = estimate_disjoint_fixed(&lengths, &config.sampling, Overlap::Closed)?;
        if !e.within_target_sigma(exact, K_SIGMA) {
            return Ok((false, format!("({lengths}): {:.6} vs {exact:.6}", e.mean)));
        }
    }
    Ok((true, format!("{} vectors", cases.len())))
}

fn mc_bottom_store(config: &VerifyConfig) -> Result<(bool, String)> {
    let s = &config.sampling;
    let mut bad = Vec::new();
    for m in 1..=6u32 {
        let e = estimate_bottom_store(&MemoryModel::TSO, &ModelParams::with_program_len(m as usize), s)?;
        if !e.within(bottom_store_prob(m)?.to_f64(), K_SIGMA, 0.0) {
            bad.push(m as usize);
        }
    }
    let e = estimate_bottom_store(&MemoryModel::TSO, &ModelParams::default(), s)?;
    if !e.within(bottom_store_limit().to_f64(), K_SIGMA, 0.0) {
        bad.push(ModelParams::default().program_len);
    }
    Ok((bad.is_empty(), format!("m=1..6 and 64, failing m: {bad:?}")))
}

fn mc_l_mu(config: &VerifyConfig) -> Result<(bool, String)> {
    let h = estimate_l_mu(&ModelParams::default(), &config.sampling)?;
    let zero = h.estimate(0).within(pr_l_lower(0).to_f64(), K_SIGMA, 0.0);
    let tail = (1..=5u32).all(|mu| {
        let e = h.estimate(mu as usize);
        e.mean >= pr_l_lower(mu).to_f64() - K_SIGMA * e.stderr
    });
    Ok((
        zero && tail,
        format!("mu=0 exact {zero}, mu=1..5 lower bounds {tail}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_checks_pass() {
        let c = VerifyConfig {
            oracle_len: 6,
            ..VerifyConfig::default()
        };
        for f in [
            two_thread_exact,
            sym_vs_sc,
            partitions,
            oracle_window,
            oracle_disjoint,
        ] {
            let (ok, detail) = f(&c).unwrap();
            assert!(ok, "{detail}");
        }
    }
}

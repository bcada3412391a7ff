#[allow(dead_code)]
#[path = "../examples/asymptotics.rs"]
mod asymptotics;

#[test]
fn asymptotics_runs() {
    asymptotics::run_example().expect("asymptotics example should run");
}

#[allow(dead_code)]
#[path = "../examples/exact_window_oracle.rs"]
mod exact_window_oracle;

#[test]
fn exact_window_oracle_runs() {
    exact_window_oracle::run_example().expect("exact_window_oracle example should run");
}

#[allow(dead_code)]
#[path = "../examples/settle_program.rs"]
mod settle_program;

#[test]
fn settle_program_runs() {
    settle_program::run_example().expect("settle_program example should run");
}

#[allow(dead_code)]
#[path = "../examples/shift_process.rs"]
mod shift_process;

#[test]
fn shift_process_runs() {
    shift_process::run_example().expect("shift_process example should run");
}

#[allow(dead_code)]
#[path = "../examples/simulate_pr_a.rs"]
mod simulate_pr_a;

#[test]
fn simulate_pr_a_runs() {
    simulate_pr_a::run_example().expect("simulate_pr_a example should run");
}

#[allow(dead_code)]
#[path = "../examples/sweep_csv.rs"]
mod sweep_csv;

#[test]
fn sweep_csv_runs() {
    sweep_csv::run_example().expect("sweep_csv example should run");
}

#[allow(dead_code)]
#[path = "../examples/tso_envelope.rs"]
mod tso_envelope;

#[test]
fn tso_envelope_runs() {
    tso_envelope::run_example().expect("tso_envelope example should run");
}

#[allow(dead_code)]
#[path = "../examples/two_thread_exact.rs"]
mod two_thread_exact;

#[test]
fn two_thread_exact_runs() {
    two_thread_exact::run_example().expect("two_thread_exact example should run");
}

#[allow(dead_code)]
#[path = "../examples/window_pmf.rs"]
mod window_pmf;

#[test]
fn window_pmf_runs() {
    window_pmf::run_example().expect("window_pmf example should run");
}

//! Drive the command-line front end in-process: a small sweep as CSV and
//! one analytic query as JSON.
//!
//! ```bash
//! cargo run --release --example sweep_csv
//! ```

use mcvuln::cli::run_with;

pub fn run_example() -> mcvuln::Result<()> {
    run("5000")
}

fn call(args: &[&str]) -> mcvuln::Result<String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(
        std::iter::once("mcvuln").chain(args.iter().copied()),
        None,
        &mut out,
        &mut err,
    );
    if code != 0 {
        return Err(mcvuln::Error::Usage(String::from_utf8_lossy(&err).into_owned()));
    }
    Ok(String::from_utf8_lossy(&out).into_owned())
}

fn run(samples: &str) -> mcvuln::Result<()> {
    print!(
        "{}",
        call(&[
            "sweep",
            "--models",
            "sc,tso,wo",
            "--threads",
            "2..4",
            "--samples",
            samples
        ])?
    );
    print!("{}", call(&["analytic", "two-thread", "--model", "wo"])?);
    Ok(())
}

fn main() -> mcvuln::Result<()> {
    run("200000")
}

fn main() {
    std::process::exit(mcvuln::cli::run(std::env::args_os()));
}

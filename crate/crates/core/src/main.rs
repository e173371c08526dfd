fn main() {
    std::process::exit(hitchin_cubic::cli::run_cli(std::env::args_os()));
}

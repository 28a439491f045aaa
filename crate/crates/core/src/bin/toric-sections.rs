fn main() {
    std::process::exit(toric_sections::cli::run_cli(std::env::args_os()));
}

fn main() {
    std::process::exit(glasd_cli::run_from_env());
}

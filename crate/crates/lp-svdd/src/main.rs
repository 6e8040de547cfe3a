fn main() {
    std::process::exit(lp_svdd::cli::run_from_env());
}

fn main() {
    std::process::exit(bernstein_cli::run());
}

fn main() {
    std::process::exit(transference::cli::run());
}

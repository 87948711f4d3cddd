fn main() {
    std::process::exit(bncert::cli::run());
}

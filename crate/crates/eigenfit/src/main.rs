fn main() {
    std::process::exit(eigenfit::cli::run());
}

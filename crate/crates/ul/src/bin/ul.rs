fn main() {
    std::process::exit(ul::cli::run());
}

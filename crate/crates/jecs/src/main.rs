fn main() {
    std::process::exit(jecs::cli::run());
}

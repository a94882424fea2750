fn main() {
    std::process::exit(genebench::cli::run());
}

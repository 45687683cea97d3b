fn main() {
    std::process::exit(hnm::cli::run(std::env::args_os()));
}

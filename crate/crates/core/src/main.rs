fn main() {
    std::process::exit(hopfkit::cli::run(std::env::args_os()));
}

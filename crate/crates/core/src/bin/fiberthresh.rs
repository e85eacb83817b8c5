fn main() {
    std::process::exit(fiberthresh::cli::run(std::env::args_os()));
}

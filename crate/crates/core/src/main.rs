fn main() {
    std::process::exit(stroketrap::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(cmik::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(exciton::cli::run(std::env::args_os()));
}

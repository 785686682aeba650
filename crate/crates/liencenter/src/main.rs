fn main() {
    std::process::exit(liencenter::cli::run(std::env::args_os()));
}

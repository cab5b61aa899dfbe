fn main() {
    std::process::exit(monosum::cli::run(std::env::args_os()));
}

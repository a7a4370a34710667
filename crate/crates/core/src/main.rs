fn main() {
    std::process::exit(torcov::cli::run(std::env::args_os()));
}

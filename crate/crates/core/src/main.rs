fn main() {
    std::process::exit(wavecoef::cli::run(std::env::args_os()));
}

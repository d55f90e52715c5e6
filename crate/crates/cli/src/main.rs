fn main() {
    std::process::exit(spectral_jumps_cli::run(std::env::args_os()));
}

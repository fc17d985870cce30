fn main() {
    std::process::exit(phaseslope::cli::run(std::env::args_os()));
}

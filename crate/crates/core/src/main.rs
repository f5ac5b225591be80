fn main() {
    std::process::exit(cycle_sieve::cli::run(std::env::args_os()));
}

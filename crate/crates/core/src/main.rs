fn main() {
    std::process::exit(barrier_occupation::cli::run(std::env::args_os()));
}

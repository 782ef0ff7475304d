fn main() {
    std::process::exit(bvjunta::cli::run(std::env::args_os()));
}

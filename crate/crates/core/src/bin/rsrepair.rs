fn main() {
    std::process::exit(rsrepair::cli::run(std::env::args_os()));
}

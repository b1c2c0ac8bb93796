fn main() {
    std::process::exit(beltrami_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(gaussapprox_cli::run(std::env::args_os()));
}

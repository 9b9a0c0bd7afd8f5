fn main() {
    std::process::exit(twins_cli::run(std::env::args_os()));
}

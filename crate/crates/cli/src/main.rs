fn main() {
    std::process::exit(ffsum_cli::run(std::env::args_os()));
}

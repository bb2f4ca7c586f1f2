fn main() {
    std::process::exit(nfdiv_cli::run(std::env::args_os()));
}

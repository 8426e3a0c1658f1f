fn main() {
    std::process::exit(cqie_cli::run(std::env::args_os()));
}

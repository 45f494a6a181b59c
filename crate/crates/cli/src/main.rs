fn main() {
    std::process::exit(dca_forge_cli::run(std::env::args_os()));
}

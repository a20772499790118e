fn main() {
    std::process::exit(isbci_cli::run(std::env::args_os()));
}

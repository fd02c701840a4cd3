fn main() {
    std::process::exit(biphase_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(chac::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(fourbessel::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(tenseig::cli::run(std::env::args_os()));
}

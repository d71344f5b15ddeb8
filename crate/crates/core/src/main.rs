fn main() {
    std::process::exit(ramdeg::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(closurestab::cli::run(std::env::args_os()));
}

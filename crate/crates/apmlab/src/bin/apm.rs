fn main() {
    std::process::exit(apmlab::cli::run(std::env::args_os()));
}

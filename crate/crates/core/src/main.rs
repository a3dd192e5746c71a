fn main() {
    std::process::exit(matchdyn::cli::run(std::env::args_os()));
}

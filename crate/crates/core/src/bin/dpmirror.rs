fn main() {
    std::process::exit(dpmirror::cli::run(std::env::args_os()));
}

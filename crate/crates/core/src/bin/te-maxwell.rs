fn main() {
    std::process::exit(te_maxwell::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(hqc::cli::main_with_args(std::env::args_os()));
}

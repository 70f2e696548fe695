fn main() {
    std::process::exit(nnrep::cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(kdiff::cli::main_with_args(std::env::args_os()));
}

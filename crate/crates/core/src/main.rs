fn main() {
    std::process::exit(loras::cli::main_with_args(std::env::args_os()));
}

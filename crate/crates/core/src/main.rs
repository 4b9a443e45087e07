fn main() {
    std::process::exit(divfree_core::cli::main_with_args(std::env::args_os()));
}

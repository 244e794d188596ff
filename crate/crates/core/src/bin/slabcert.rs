fn main() {
    std::process::exit(slabcert::cli::main_with_args(std::env::args_os()));
}

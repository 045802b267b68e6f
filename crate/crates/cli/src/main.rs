fn main() {
    std::process::exit(hyperorbit_cli::main_with_args(std::env::args_os()));
}

fn main() {
    std::process::exit(fingeo::cli::main_with(std::env::args_os()));
}

fn main() {
    std::process::exit(jointmaj::cli::main_from(std::env::args_os()));
}

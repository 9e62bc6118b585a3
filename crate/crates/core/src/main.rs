fn main() {
    std::process::exit(fatcut::cli::main_with_env());
}

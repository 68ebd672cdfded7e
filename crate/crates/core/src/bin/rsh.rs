fn main() {
    std::process::exit(rsh_core::cli::main_with_env());
}

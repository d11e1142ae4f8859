fn main() {
    std::process::exit(funcount::cli::main());
}

fn main() {
    std::process::exit(skeleta::cli::main());
}

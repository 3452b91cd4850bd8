fn main() {
    std::process::exit(amo::cli::main());
}

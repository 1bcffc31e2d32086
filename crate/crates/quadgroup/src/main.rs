fn main() {
    std::process::exit(quadgroup::cli::main());
}

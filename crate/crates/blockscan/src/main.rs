fn main() {
    std::process::exit(blockscan::cli::main());
}

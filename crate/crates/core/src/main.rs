fn main() {
    std::process::exit(ekm::cli::main_entry());
}

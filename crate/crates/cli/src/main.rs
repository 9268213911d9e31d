fn main() {
    std::process::exit(sl2sheaf_cli::run());
}

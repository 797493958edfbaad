fn main() {
    std::process::exit(gdconj::cli::run());
}

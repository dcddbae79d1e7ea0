fn main() {
    std::process::exit(lcmac::cli::run());
}

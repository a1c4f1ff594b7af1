fn main() {
    std::process::exit(qlat::cli::run(std::env::args().skip(1)));
}

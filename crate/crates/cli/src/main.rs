fn main() {
    std::process::exit(pdrank::run(std::env::args_os()));
}

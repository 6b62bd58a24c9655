fn main() {
    std::process::exit(arlab::main_with(std::env::args_os()));
}

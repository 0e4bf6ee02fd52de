fn main() {
    std::process::exit(sphereheat::run(std::env::args_os()));
}

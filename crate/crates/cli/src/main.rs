fn main() {
    std::process::exit(uwstbc_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(quolab_cli::run(std::env::args_os()));
}

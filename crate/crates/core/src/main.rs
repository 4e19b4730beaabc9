fn main() {
    bodi_kit::cli::init_logging();
    std::process::exit(bodi_kit::cli::main_with_args(std::env::args_os()));
}

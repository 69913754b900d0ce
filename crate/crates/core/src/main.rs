fn main() {
    env_logger::init();
    std::process::exit(hde_core::cli::main_with(std::env::args_os()));
}

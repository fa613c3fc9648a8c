fn main() {
    std::process::exit(platform_mfe::cli::main_with_args(std::env::args_os()));
}

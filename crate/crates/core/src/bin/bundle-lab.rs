fn main() {
    std::process::exit(bundle_lab::cli::main_with_args(std::env::args_os()));
}

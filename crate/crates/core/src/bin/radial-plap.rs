fn main() {
    std::process::exit(radial_plap::cli::main_with_args(std::env::args_os()));
}

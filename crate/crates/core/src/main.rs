fn main() {
    std::process::exit(smacofss::cli::main_with_args(std::env::args_os()));
}

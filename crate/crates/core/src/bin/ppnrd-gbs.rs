fn main() {
    std::process::exit(ppnrd_gbs::cli::main_with_args(std::env::args_os()));
}

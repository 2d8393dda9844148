fn main() {
    std::process::exit(nomhol::frontend::cli::run(std::env::args_os()));
}

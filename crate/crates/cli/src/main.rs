fn main() {
    std::process::exit(besov_orlicz_cli::dispatch(std::env::args_os()));
}

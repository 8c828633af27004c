fn main() {
    std::process::exit(stabmagic::cli::dispatch(std::env::args_os()));
}

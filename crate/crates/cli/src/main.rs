fn main() {
    std::process::exit(smod_cli::run());
}

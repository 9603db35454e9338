fn main() {
    std::process::exit(pathway_cli::run(std::env::args_os()));
}

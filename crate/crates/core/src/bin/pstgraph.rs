fn main() {
    std::process::exit(pstgraph::cli::run(std::env::args_os()));
}

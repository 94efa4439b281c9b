fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(submax_lie::cli::run(&argv));
}

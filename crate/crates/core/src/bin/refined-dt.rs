fn main() {
    std::process::exit(refined_dt::cli::run(std::env::args_os()));
}

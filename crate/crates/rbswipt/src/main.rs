fn main() {
    std::process::exit(rbswipt::cli::run_cli(std::env::args_os()) as i32);
}

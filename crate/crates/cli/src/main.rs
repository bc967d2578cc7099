fn main() {
    std::process::exit(tailavg_cli::cli_main(std::env::args_os()));
}

fn main() {
    std::process::exit(nanoheat::cli::run_command(std::env::args_os()));
}

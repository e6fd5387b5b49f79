fn main() -> std::process::ExitCode {
    raag_cli::main_with_args(std::env::args_os())
}

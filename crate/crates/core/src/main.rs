fn main() -> std::process::ExitCode {
    sonine::cli::run(std::env::args_os())
}

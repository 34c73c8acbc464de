fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(cpx_cli::run(std::env::args()))
}

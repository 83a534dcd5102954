fn main() -> std::process::ExitCode {
    let code = netload_bench::cli::run_cli(std::env::args_os());
    std::process::ExitCode::from(code as u8)
}

fn main() -> std::process::ExitCode {
    stationary::cli::main()
}

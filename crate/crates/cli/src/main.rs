fn main() -> std::process::ExitCode {
    stasheff::cli::main()
}

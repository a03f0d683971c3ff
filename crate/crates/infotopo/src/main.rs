fn main() -> std::process::ExitCode {
    infotopo::cli::main()
}

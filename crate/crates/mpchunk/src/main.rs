use std::process::ExitCode;

fn main() -> ExitCode {
    mpchunk::cli::main_entry()
}

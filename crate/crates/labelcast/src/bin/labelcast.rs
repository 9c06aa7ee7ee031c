use std::process::ExitCode;

use labelcast::cli::{run_cli, EXIT_OK};

fn main() -> ExitCode {
    let result = run_cli(std::env::args_os());
    if result.status == EXIT_OK || result.status == labelcast::cli::EXIT_CHECK_FAILED {
        print!("{}", result.report);
    } else {
        eprint!("{}", result.report);
    }
    ExitCode::from(result.status as u8)
}

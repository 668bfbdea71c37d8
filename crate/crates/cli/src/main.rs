use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use sepshort::{run, Cli, EXIT_IO};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share the I/O code so 2 stays reserved for cycles
            return ExitCode::from(if e.use_stderr() { EXIT_IO as u8 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let res = run(cli, &mut out);
    let _ = out.flush();
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sepshort: {}", f.msg);
            ExitCode::from(f.code as u8)
        }
    }
}

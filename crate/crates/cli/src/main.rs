use std::io::Write;

use ppdual_cli::{run_command, Session};

fn main() {
    let mut session = match Session::new(ppdual_core::DEFAULT_BOUND) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let (code, text) = run_command(&mut session, std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    if code == 2 {
        eprint!("{text}");
    } else {
        let _ = stdout.write_all(text.as_bytes());
    }
    let _ = stdout.flush();
    std::process::exit(code);
}

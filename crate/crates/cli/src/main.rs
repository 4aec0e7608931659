use std::io::Write;

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = learncheck::run_cli(std::env::args_os(), &mut out, &mut err);
    let _ = std::io::stdout().lock().write_all(&out);
    let _ = std::io::stderr().lock().write_all(&err);
    std::process::exit(code);
}

use std::io::Write;

fn main() {
    let outcome = posetnet::cli::run(std::env::args_os());
    // a closed pipe downstream is not an error of ours
    let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
    std::process::exit(outcome.code);
}

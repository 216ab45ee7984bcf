use std::io::Write;

fn main() {
    let out = fmac_cli::run(std::env::args());
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}

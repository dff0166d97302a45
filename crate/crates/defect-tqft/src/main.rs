use std::io::Write;

fn main() {
    let (outcome, format) = defect_tqft::cli::run(std::env::args_os());
    let mut out = outcome.rendered(format);
    if !out.ends_with('\n') {
        out.push('\n');
    }
    // a closed pipe downstream is not an error of ours
    let _ = if outcome.code == 2 {
        std::io::stderr().write_all(out.as_bytes())
    } else {
        std::io::stdout().write_all(out.as_bytes())
    };
    std::process::exit(outcome.code);
}

use std::io::Write;

fn main() {
    let out = capelli::cli::run(std::env::args_os());
    if let Some(text) = &out.stdout {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{}", text.trim_end());
    }
    if let Some(text) = &out.stderr {
        eprint!("{text}");
    }
    std::process::exit(out.code);
}

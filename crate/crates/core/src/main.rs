use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = swapdist::cli::run(std::env::args_os(), &mut out);
    let _ = out.flush();
    if let Err(e) = result {
        eprintln!("swapdist: {}", e.message.trim_end());
        std::process::exit(e.code);
    }
}

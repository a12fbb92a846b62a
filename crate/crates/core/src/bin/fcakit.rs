use std::io;

fn main() {
    let stdin = io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = io::stdout();
    let mut stderr = io::stderr();
    let code = fcakit::cli::run(
        std::env::args_os(),
        &mut fcakit::cli::Io {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
        },
    );
    let _ = io::Write::flush(&mut stdout);
    std::process::exit(code);
}

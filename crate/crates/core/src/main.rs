use std::io::Write;

fn main() {
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    let code = morphkit::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}

use std::io::Write;

fn main() {
    let env = std::env::var("EFGC_THREADS").ok();
    if let Err(e) = efgc_cli::configure_threads(env.as_deref()) {
        let _ = writeln!(std::io::stderr(), "error: {e:#}");
        std::process::exit(efgc_cli::EXIT_ERROR);
    }
    let code = efgc_cli::run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}

use std::io::Write;

fn main() {
    if let Some(n) = std::env::var("LAMBDAK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: LAMBDAK_THREADS ignored: {e}");
        }
    }
    let result = lambdak::cli::run(std::env::args_os());
    std::io::stdout().write_all(result.stdout.as_bytes()).ok();
    std::io::stderr().write_all(result.stderr.as_bytes()).ok();
    std::process::exit(result.code);
}

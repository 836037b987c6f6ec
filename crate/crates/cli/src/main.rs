use tracing_subscriber::EnvFilter;

fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_env("SRS_LOG").unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .init();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let code = srs_cli::run(std::env::args_os(), &mut out, &mut err);
    std::process::exit(code);
}

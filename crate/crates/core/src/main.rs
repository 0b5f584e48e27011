use std::io::IsTerminal;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let stdout = std::io::stdout();
    let tty = stdout.is_terminal();
    let code = biquat::cli::run(std::env::args_os(), &mut stdout.lock(), &mut std::io::stderr(), tty);
    std::process::exit(code);
}

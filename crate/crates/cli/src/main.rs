use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = std::env::var(fracstable_cli::SEED_ENV).ok();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = fracstable_cli::run(std::env::args_os(), env_seed.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code)
}

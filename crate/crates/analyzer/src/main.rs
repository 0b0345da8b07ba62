use std::net::ToSocketAddrs;
use std::process::ExitCode;

use sla4oai_analyzer::cli::{parse_args, run, EXIT_IO};
use sla4oai_analyzer::service::{serve, ServiceConfig};

fn main() -> ExitCode {
    let cli = match parse_args(std::env::args_os()) {
        Ok(cli) => cli,
        Err((message, code)) => {
            if code == 0 {
                print!("{message}");
            } else {
                eprint!("{message}");
            }
            return ExitCode::from(code as u8);
        }
    };

    if let Some(bind) = &cli.serve {
        let Some(addr) = bind.to_socket_addrs().ok().and_then(|mut a| a.next()) else {
            eprintln!("cannot resolve bind address `{bind}`");
            return ExitCode::from(EXIT_IO as u8);
        };
        let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
        return match runtime.block_on(serve(addr, ServiceConfig { allow_fetch: cli.allow_fetch })) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("server error: {e}");
                ExitCode::from(EXIT_IO as u8)
            }
        };
    }

    let result = run(&cli);
    print!("{}", result.stdout);
    eprint!("{}", result.stderr);
    ExitCode::from(result.exit_code as u8)
}

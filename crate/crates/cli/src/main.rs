use clap::Parser;
use iwagrowth_cli::{assert_oracle, exit, persist, run, Cli};

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
        let _ = e.print();
        std::process::exit(code);
    });
    let outcome = run(&cli).and_then(|o| {
        persist(&cli.global, &o.record)?;
        assert_oracle(&o.record)?;
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            if cli.global.json.as_deref().is_none_or(|p| p.as_os_str() != "-") {
                for l in o.lines {
                    println!("{l}");
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.code);
        }
    }
}

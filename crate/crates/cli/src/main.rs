use leaky_gap_cli::{config, exit_code, run, write_report};

fn usage() -> ! {
    eprintln!("usage: leaky-gap <geometry|solve|certify|asymptotics|oracle|diagnostics> --config <path> [--out <prefix>]");
    std::process::exit(1);
}

fn main() {
    // Worker cap; falls back to the machine parallelism.
    if let Ok(threads) = std::env::var("LEAKY_GAP_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }

    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        usage();
    }
    let command_word = args[0].clone();
    let mut config_path: Option<String> = None;
    let mut out_prefix: Option<String> = None;
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--config" => config_path = it.next().cloned(),
            "--out" => out_prefix = it.next().cloned(),
            other => {
                eprintln!("unknown argument: {other}");
                usage();
            }
        }
    }
    let Some(config_path) = config_path else { usage() };

    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {config_path}: {e}");
            std::process::exit(1);
        }
    };
    // The positional command word overrides the config's command field.
    let word: Result<config::Command, _> =
        serde_json::from_value(serde_json::Value::String(command_word.clone()));
    let Ok(cmd) = word else {
        eprintln!("unknown command: {command_word}");
        usage();
    };
    let cfg = match config::parse_config(&text) {
        Ok(mut cfg) => {
            cfg.command = cmd;
            cfg
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };

    let outcome = run(&cfg);
    let code = exit_code(&outcome);
    match outcome {
        Ok(report) => {
            let prefix = out_prefix
                .or_else(|| cfg.output.clone())
                .unwrap_or_else(|| "leaky-gap-report".into());
            match write_report(&report, &prefix) {
                Ok(paths) => {
                    for p in paths {
                        println!("{p}");
                    }
                }
                Err(e) => {
                    eprintln!("write failed: {e}");
                    std::process::exit(1);
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
        }
    }
    std::process::exit(code);
}

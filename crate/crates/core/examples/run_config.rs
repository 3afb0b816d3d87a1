//! cargo run --example run_config -- [config.toml] [out dir]
use std::path::PathBuf;

use graded_shift::report::{run, RunConfig, RunOptions};

fn main() -> graded_shift::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/principal.toml"));
    let cfg = RunConfig::load(&path)?;
    for w in cfg.validate()? {
        eprintln!("warning: {w}");
    }
    let opts = RunOptions {
        out: args.next().map(PathBuf::from),
        ..Default::default()
    };
    let (report, dir) = run(&cfg, &opts)?;
    for e in &report.experiments {
        println!("{:<12} {:<10} {:?} -> {}", e.id, e.kind, e.status, e.series.join(", "));
    }
    println!("report in {}", dir.display());
    Ok(())
}

mod options;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qembed::bench::{render, run_grid};
use qembed::{Error, Result};

use options::Options;

const EXIT_CELL_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn resolve() -> Result<Options> {
    let flags = Options::parse();
    match flags.config.clone() {
        Some(path) => Ok(flags.over(Options::load_file(&path)?)),
        None => Ok(flags),
    }
}

fn main() -> ExitCode {
    let opts = match resolve() {
        Ok(o) => o,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let (spec, format) = match opts.grid().and_then(|g| Ok((g, opts.output_format()?))) {
        Ok(v) => v,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    eprintln!("running {} cells", spec.num_cells());

    let records = match run_grid(&spec) {
        Ok(r) => r,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let mut failed = 0;
    for r in &records {
        match &r.error {
            Some(err) => {
                failed += 1;
                eprintln!("FAILED {} {} {}F/{}L: {err}", r.dataset, r.encoding_label(), r.n, r.m);
            }
            None => eprintln!(
                "{} {} {}F/{}L test={:.4} f1={:.4} ({:.1}s)",
                r.dataset,
                r.encoding_label(),
                r.n,
                r.m,
                r.test_accuracy,
                r.f1,
                r.wall_time_s
            ),
        }
    }

    let written = render(&records, format).and_then(|text| match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Output(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Output(e.to_string())),
    });
    if let Err(e) = written {
        return fail(&e, EXIT_CELL_FAILED);
    }
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", records.len());
        return ExitCode::from(EXIT_CELL_FAILED);
    }
    ExitCode::SUCCESS
}

fn fail(e: &Error, code: u8) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(code)
}

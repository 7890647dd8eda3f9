use serde_json::json;
use smalldev::composition::IterationChain;
use smalldev::estimator::{Target, TargetSampler};
use smalldev::report::path_csv;

use crate::config::DEFAULT_PROCESS_GRID;
use crate::error::CliError;
use crate::output::{to_json, Sink};
use crate::{Common, Format, Outcome, SimulateArgs};

pub fn run(args: &SimulateArgs, common: &Common) -> Result<Outcome, CliError> {
    let target = match args.process.as_slice() {
        [] => return Err(CliError::Usage("--process is empty".into())),
        [spec] => Target::process(*spec, args.points.unwrap_or(DEFAULT_PROCESS_GRID)),
        specs => {
            let chain = IterationChain::new(specs.to_vec())?;
            let inner = args.points.unwrap_or(chain.grid_inner);
            let outer = args.grid_outer.unwrap_or(chain.grid_outer_per_unit);
            Target::Chain(chain.with_grids(inner, outer)?)
        }
    };
    let sampler = TargetSampler::new(&target, args.seed)?;
    let composed = sampler.composer().compose(&sampler.streams(0))?;
    let path = composed.base;
    let csv = path_csv(&path);
    let value = json!({ "t": path.times(), "x": path.values, "degenerate": composed.degenerate });
    match &common.out_dir {
        Some(dir) => {
            let mut sink = Sink::new(Some(dir), common.format)?;
            sink.table("path", csv, &value)?;
            for p in sink.written() {
                eprintln!("wrote {}", p.display());
            }
        }
        None => match common.format {
            Format::Csv => print!("{csv}"),
            Format::Json => print!("{}", to_json(&value)),
        },
    }
    Ok(Outcome::Pass)
}

//! CSV time series of a flow run.

use std::io::Write;

use crate::error::{Error, Result};
use crate::flowcore::run::FlowRun;

/// Header: `t, area, volume, W_0..W_{n+1}, phi, minKappa, maxF, rhoMinus, rhoPlus, sphereDev`.
pub fn header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = ["t", "area", "volume"].iter().map(|s| s.to_string()).collect();
    h.extend((0..=n + 1).map(|k| format!("W_{k}")));
    h.extend(
        ["phi", "minKappa", "maxF", "rhoMinus", "rhoPlus", "sphereDev"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

/// One row per output time, starting with t = 0.
pub fn write_series<W: Write>(run: &FlowRun, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let to_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header(run.config.n)).map_err(to_err)?;
    for rec in std::iter::once(&run.initial).chain(&run.outputs) {
        let m = &rec.measures;
        let mut row = vec![m.t, m.area, m.volume];
        row.extend(&m.w);
        row.extend([rec.phi, rec.min_kappa, rec.max_f, m.rho_minus, m.rho_plus, rec.sphere_dev_linf]);
        w.write_record(row.iter().map(|x| format!("{x:e}"))).map_err(to_err)?;
    }
    w.flush()?;
    Ok(())
}

//! Columnar text snapshots.
//!
//! ```text
//! n 1
//! mode full_circle
//! nodes 256
//! time 0.5
//! columns theta r
//! 0e0 1.1e0
//! ...
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hsurface::grid::{Grid, GridMode};
use crate::hsurface::radial::RadialGraphState;
use crate::hsurface::support::SupportState;
use crate::hsurface::SurfaceState;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub state: SurfaceState,
}

pub fn write_snapshot(state: &SurfaceState, time: f64) -> String {
    let g = state.grid();
    let mut out = String::new();
    let _ = writeln!(out, "n {}", g.n);
    let _ = writeln!(out, "mode {}", g.mode.as_str());
    let _ = writeln!(out, "nodes {}", g.len());
    let _ = writeln!(out, "time {time:e}");
    let _ = writeln!(out, "columns theta {}", state.column_name());
    for (t, v) in g.nodes.iter().zip(state.values()) {
        let _ = writeln!(out, "{t:e} {v:e}");
    }
    out
}

fn header<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<&'a str> {
    let line = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("missing header line `{key}`")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .map(str::trim)
        .ok_or_else(|| Error::Parse(format!("expected `{key} ...`, found `{line}`")))
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("invalid {what}: `{s}`")))
}

pub fn read_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let n: usize = number(header(&mut lines, "n")?, "dimension")?;
    let mode = match header(&mut lines, "mode")? {
        "axisymmetric" => GridMode::Axisymmetric,
        "full_circle" => GridMode::FullCircle,
        other => return Err(Error::Parse(format!("unknown mode `{other}`"))),
    };
    let count: usize = number(header(&mut lines, "nodes")?, "node count")?;
    let time: f64 = number(header(&mut lines, "time")?, "time")?;
    let column = match header(&mut lines, "columns")? {
        "theta r" => "r",
        "theta s" => "s",
        other => return Err(Error::Parse(format!("unknown columns `{other}`"))),
    };
    let grid = Grid::new(n, mode, count)?;
    let mut values = Vec::with_capacity(count);
    for (j, line) in lines.enumerate() {
        let mut it = line.split_whitespace();
        let (Some(t), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse(format!("row {j}: expected two columns")));
        };
        let t: f64 = number(t, "angle")?;
        if j >= count || (t - grid.nodes[j]).abs() > 1e-9 {
            return Err(Error::Parse(format!("row {j}: angle {t} is not on the grid")));
        }
        values.push(number::<f64>(v, "value")?);
    }
    if values.len() != count {
        return Err(Error::Parse(format!("expected {count} rows, found {}", values.len())));
    }
    let state = if column == "r" {
        SurfaceState::Graph(RadialGraphState::new(grid, values)?)
    } else {
        SurfaceState::Support(SupportState::new(grid, values)?)
    };
    Ok(Snapshot { time, state })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let grid = Grid::new(2, GridMode::Axisymmetric, 17).unwrap();
        let st = RadialGraphState::from_fn(grid, |t| 1.0 + 0.1 * t.cos().powi(2) / 3.0).unwrap();
        let text = write_snapshot(&st.clone().into(), 0.125);
        let back = read_snapshot(&text).unwrap();
        assert_eq!(back.time, 0.125);
        assert_eq!(back.state, SurfaceState::Graph(st));
    }

    #[test]
    fn malformed_rows_rejected() {
        let text = "n 1\nmode full_circle\nnodes 8\ntime 0\ncolumns theta r\n0 1\n";
        assert!(matches!(read_snapshot(text), Err(Error::Parse(_))));
    }
}

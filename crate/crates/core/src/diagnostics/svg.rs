//! Klein-model pictures of planar curves.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::hsurface::{GridMode, SurfaceState};

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Renders closed curves as polylines in the viewport `[-1, 1]^2`, with the
/// ideal boundary drawn as the unit circle. Later curves are drawn on top.
pub fn render_svg(states: &[SurfaceState], size: u32) -> Result<String> {
    let mut out = String::new();
    let s = size as f64;
    let px = |x: f64| (x + 1.0) * 0.5 * s;
    let py = |y: f64| (1.0 - y) * 0.5 * s;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(
        out,
        r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#888" stroke-width="1"/>"##,
        s / 2.0,
        s / 2.0,
        s / 2.0
    )
    .unwrap();
    for (i, st) in states.iter().enumerate() {
        let g = st.to_graph()?;
        if g.grid.mode != GridMode::FullCircle {
            return Err(Error::ModeMismatch("only planar curves can be rendered".into()));
        }
        let pts: Vec<String> = g
            .grid
            .nodes
            .iter()
            .zip(&g.r)
            .map(|(&t, &r)| {
                let rho = r.tanh();
                format!("{:.3},{:.3}", px(rho * t.cos()), py(rho * t.sin()))
            })
            .collect();
        writeln!(
            out,
            r##"<polygon points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"##,
            pts.join(" "),
            PALETTE[i % PALETTE.len()]
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

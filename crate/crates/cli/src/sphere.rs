//! Unit-sphere geometry of a computed norm: a CSV table and an SVG drawing.
//!
//! For a gauge `R` the unit sphere is the curve `r = 1/R(φ)`. The level set
//! `‖A_i x‖ = ρ` is the curve `r = ρ / (H_i(φ) R(Φ_i(φ)))`; it is unbounded
//! where `A_i` kills the direction, and those radii are written as `inf`.

use std::f64::consts::PI;
use std::fmt::Write;

use jsr_core::{Lookup, MatrixSet, PolarNorm, TransformTables};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereData {
    pub phi: Vec<f64>,
    pub gauge: Vec<f64>,
    pub radius: Vec<f64>,
    /// One radius list per matrix.
    pub levels: Vec<Vec<f64>>,
    pub rho: f64,
}

impl SphereData {
    pub fn new(
        set: &MatrixSet<f64>,
        norm: &PolarNorm<f64>,
        rho: f64,
        lookup: Lookup,
    ) -> Result<Self, CliError> {
        let n = norm.nodes();
        let tables = TransformTables::build(set, n)?;
        let levels = (0..set.len())
            .map(|i| {
                let g = tables.image_gauge(i, norm, lookup)?;
                Ok(g.iter()
                    .map(|&v| if v > 0.0 { rho / v } else { f64::INFINITY })
                    .collect())
            })
            .collect::<Result<Vec<Vec<f64>>, CliError>>()?;
        Ok(SphereData {
            phi: (0..=n).map(|k| norm.angle(k)).collect(),
            gauge: norm.values().to_vec(),
            radius: norm.sphere_radii(),
            levels,
            rho,
        })
    }

    pub fn nodes(&self) -> usize {
        self.phi.len() - 1
    }

    /// Largest deviation of the unit-sphere radius from its mean.
    pub fn roundness_defect(&self) -> f64 {
        let r = &self.radius[..self.nodes()];
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        r.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,R,invR");
        for i in 1..=self.levels.len() {
            let _ = write!(out, ",level_{i}");
        }
        out.push('\n');
        for k in 0..self.phi.len() {
            let _ = write!(out, "{:e},{:e},{:e}", self.phi[k], self.gauge[k], self.radius[k]);
            for level in &self.levels {
                let _ = write!(out, ",{:e}", level[k]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        render_svg(self)
    }
}

/// Cyclic sign changes of `a - b` over one turn (the last grid node repeats
/// the first and is skipped). Nodes where either side is infinite or the two
/// agree exactly carry no sign.
pub fn crossings(a: &[f64], b: &[f64]) -> usize {
    let n = a.len().min(b.len()).saturating_sub(1);
    let signs: Vec<bool> = (0..n)
        .filter_map(|k| {
            let d = a[k] - b[k];
            (d.is_finite() && d != 0.0).then_some(d > 0.0)
        })
        .collect();
    if signs.len() < 2 {
        return 0;
    }
    (0..signs.len())
        .filter(|&k| signs[k] != signs[(k + 1) % signs.len()])
        .count()
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;
const DASHES: [&str; 5] = ["10 5", "10 4 2 4", "3 3", "14 4 2 4 2 4", "6 2"];
const COLOURS: [&str; 5] = ["#1f4e9c", "#b03a2e", "#2e7d32", "#7b3fa0", "#a65e00"];

fn render_svg(d: &SphereData) -> String {
    // Half-width of the plotted square, in norm units. Level curves may run
    // off to infinity, so they only widen the frame up to 3x the sphere.
    let sphere_max = d.radius.iter().cloned().fold(0.0, f64::max);
    let level_max = d
        .levels
        .iter()
        .flatten()
        .filter(|v| v.is_finite())
        .cloned()
        .fold(0.0, f64::max);
    let extent = 1.1 * sphere_max.max(level_max.min(3.0 * sphere_max));
    let scale = (SIZE / 2.0 - MARGIN) / extent;
    let to_px = |x: f64, y: f64| (SIZE / 2.0 + x * scale, SIZE / 2.0 - y * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="gray" stroke-width="1" stroke-dasharray="1 3"><line x1="0" y1="{h}" x2="{SIZE}" y2="{h}"/><line x1="{h}" y1="0" x2="{h}" y2="{SIZE}"/></g>"#,
        h = SIZE / 2.0
    );

    for (i, level) in d.levels.iter().enumerate() {
        let style = format!(
            r#"fill="none" stroke="{}" stroke-width="1.2" stroke-dasharray="{}""#,
            COLOURS[i % COLOURS.len()],
            DASHES[i % DASHES.len()]
        );
        for piece in pieces(&d.phi, level) {
            polyline(&mut s, &piece, &style, to_px);
        }
    }
    let closed: Vec<(f64, f64)> = d
        .phi
        .iter()
        .zip(&d.radius)
        .map(|(&p, &r)| (p, r))
        .collect();
    polyline(&mut s, &closed, r#"fill="none" stroke="black" stroke-width="2.5""#, to_px);

    let mut y = 24.0;
    for i in 0..d.levels.len() {
        let _ = writeln!(
            s,
            r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="{}" stroke-width="1.2" stroke-dasharray="{}"/><text x="{xt}" y="{yt}" font-family="sans-serif" font-size="13">‖A{}x‖ = ρ</text>"#,
            COLOURS[i % COLOURS.len()],
            DASHES[i % DASHES.len()],
            i + 1,
            x0 = SIZE - 170.0,
            x1 = SIZE - 130.0,
            xt = SIZE - 122.0,
            yt = y + 4.0,
        );
        y += 18.0;
    }
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="black" stroke-width="2.5"/><text x="{xt}" y="{yt}" font-family="sans-serif" font-size="13">‖x‖ = 1</text>"#,
        x0 = SIZE - 170.0,
        x1 = SIZE - 130.0,
        xt = SIZE - 122.0,
        yt = y + 4.0,
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" font-family="sans-serif" font-size="13">ρ ≈ {:.6}</text>"#,
        SIZE - 12.0,
        d.rho
    );
    s.push_str("</svg>\n");
    s
}

/// Splits a polar curve at infinite radii. A curve with no gaps comes back
/// whole, ending on its first point.
fn pieces(phi: &[f64], r: &[f64]) -> Vec<Vec<(f64, f64)>> {
    let n = phi.len() - 1;
    let Some(start) = (0..n).find(|&k| !r[k].is_finite()) else {
        return vec![phi.iter().cloned().zip(r.iter().cloned()).collect()];
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for j in 1..=n {
        let k = (start + j) % n;
        if r[k].is_finite() {
            let turn = if start + j >= n { 2.0 * PI } else { 0.0 };
            cur.push((phi[k] + turn, r[k]));
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn polyline(
    s: &mut String,
    points: &[(f64, f64)],
    style: &str,
    to_px: impl Fn(f64, f64) -> (f64, f64),
) {
    s.push_str("<polyline points=\"");
    for (j, &(phi, r)) in points.iter().enumerate() {
        let (x, y) = to_px(r * phi.cos(), r * phi.sin());
        if j > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.3},{y:.3}");
    }
    let _ = writeln!(s, "\" {style}/>");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossings_count_cyclic_sign_changes() {
        // + + - - + with the repeated endpoint: changes at 1→2 and 3→0.
        let a = [1.0, 1.0, 0.0, 0.0, 1.0, 1.0];
        let b = [0.5; 6];
        assert_eq!(crossings(&a, &b), 2);
        assert_eq!(crossings(&[1.0, 2.0, 1.0], &[0.0, 0.0, 0.0]), 0);
    }

    #[test]
    fn crossings_skip_ties_and_infinities() {
        let a = [1.0, 0.5, f64::INFINITY, 0.0, 1.0];
        let b = [0.5; 5];
        assert_eq!(crossings(&a, &b), 2);
    }

    #[test]
    fn pieces_split_at_gaps() {
        let phi: Vec<f64> = (0..=8).map(|k| -PI + k as f64 * PI / 4.0).collect();
        let mut r = vec![1.0; 9];
        assert_eq!(pieces(&phi, &r).len(), 1);
        r[2] = f64::INFINITY;
        r[6] = f64::INFINITY;
        let p = pieces(&phi, &r);
        assert_eq!(p.len(), 2);
        assert_eq!(p.iter().map(Vec::len).sum::<usize>(), 6);
    }
}

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::RunRecord;
use crate::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Band {
    label: String,
    mean: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    runs: usize,
}

/// Linear interpolation of a piecewise-linear curve, flat beyond its ends.
fn interpolate(curve: &[(f64, f64)], x: f64) -> f64 {
    let i = curve.partition_point(|p| p.0 < x);
    if i == 0 {
        return curve[0].1;
    }
    if i == curve.len() {
        return curve[i - 1].1;
    }
    let (x0, y0) = curve[i - 1];
    let (x1, y1) = curve[i];
    if x1 == x0 { y1 } else { y0 + (y1 - y0) * (x - x0) / (x1 - x0) }
}

/// Renders evaluation return against environment steps, one mean curve and
/// min-max band per agent name. Runs whose evaluation steps differ are
/// interpolated onto the union of all evaluation steps.
pub fn render_curves(records: &[RunRecord]) -> Result<String> {
    let curves: Vec<(String, Vec<(f64, f64)>)> = records
        .iter()
        .map(|r| (r.meta.agent.clone(), r.eval_curve()))
        .filter(|(_, c)| !c.is_empty())
        .collect();
    if curves.is_empty() {
        return Err(Error::Usage("no evaluated runs to plot".into()));
    }
    let mut grid: Vec<f64> = curves.iter().flat_map(|(_, c)| c.iter().map(|p| p.0)).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    // BTreeMap keeps the legend order independent of record order.
    let mut groups: BTreeMap<&str, Vec<Vec<f64>>> = BTreeMap::new();
    for (label, curve) in &curves {
        let ys = grid.iter().map(|&x| interpolate(curve, x)).collect();
        groups.entry(label.as_str()).or_default().push(ys);
    }
    let bands: Vec<Band> = groups
        .into_iter()
        .map(|(label, runs)| {
            let n = runs.len() as f64;
            let col = |i: usize| runs.iter().map(move |r| r[i]);
            Band {
                label: label.to_string(),
                mean: (0..grid.len()).map(|i| col(i).sum::<f64>() / n).collect(),
                lo: (0..grid.len()).map(|i| col(i).fold(f64::INFINITY, f64::min)).collect(),
                hi: (0..grid.len()).map(|i| col(i).fold(f64::NEG_INFINITY, f64::max)).collect(),
                runs: runs.len(),
            }
        })
        .collect();

    let (x_min, x_max) = (0.0_f64.min(grid[0]), grid[grid.len() - 1]);
    let mut y_min = bands.iter().flat_map(|b| b.lo.iter()).copied().fold(f64::INFINITY, f64::min);
    let mut y_max = bands.iter().flat_map(|b| b.hi.iter()).copied().fold(f64::NEG_INFINITY, f64::max);
    if y_max - y_min < 1e-9 {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_min, y_max) = (y_min - pad, y_max + pad);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + plot_w * if x_max > x_min { (x - x_min) / (x_max - x_min) } else { 0.5 };
    let sy = |y: f64| TOP + plot_h * (1.0 - (y - y_min) / (y_max - y_min));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (xv, yv) = (x_min + t * (x_max - x_min), y_min + t * (y_max - y_min));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(xv),
            TOP + plot_h + 18.0,
            xv.round()
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.2}</text>"#,
            LEFT - 6.0,
            sy(yv) + 4.0,
            yv
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">environment steps</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">mean eval return</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, band) in bands.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(svg, r#"<g class="agent" data-label="{}">"#, band.label);
        if band.runs > 1 {
            let mut pts: Vec<String> = grid.iter().zip(&band.hi).map(|(&x, &y)| point(sx(x), sy(y))).collect();
            pts.extend(grid.iter().zip(&band.lo).rev().map(|(&x, &y)| point(sx(x), sy(y))));
            let _ = writeln!(
                svg,
                r#"<polygon class="band" points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                pts.join(" ")
            );
        }
        let pts: Vec<String> = grid.iter().zip(&band.mean).map(|(&x, &y)| point(sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="mean" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 20.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text class="legend" x="{}" y="{}">{} (n={})</text>"#,
            lx + 26.0,
            ly + 4.0,
            band.label,
            band.runs
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn point(x: f64, y: f64) -> String {
    format!("{x:.2},{y:.2}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_linear_and_flat_outside() {
        let c = [(0.0, 0.0), (10.0, 5.0)];
        assert_eq!(interpolate(&c, 4.0), 2.0);
        assert_eq!(interpolate(&c, -1.0), 0.0);
        assert_eq!(interpolate(&c, 20.0), 5.0);
    }
}

//! Grid classification of the `(g, c)` plane with CSV and SVG output.

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{classify, Curve, EnergyMomentum, Region, RegionLabel};
use crate::error::{Error, Result};
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagramWindow {
    pub g_min: f64,
    pub g_max: f64,
    pub c_min: f64,
    pub c_max: f64,
}

impl Default for DiagramWindow {
    fn default() -> Self {
        Self { g_min: -3.0, g_max: 3.0, c_min: -3.0, c_max: -0.05 }
    }
}

impl DiagramWindow {
    pub fn validate(&self) -> Result<()> {
        let ok = self.g_min < self.g_max
            && self.c_min < self.c_max
            && self.c_max < 0.0
            && [self.g_min, self.g_max, self.c_min].iter().all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "diagram window needs g_min < g_max and c_min < c_max < 0, got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagramCell {
    pub g: f64,
    pub c: f64,
    pub label: RegionLabel,
}

/// Classifies cell centres of an `ng x nc` grid, row-major from the lowest
/// energy upwards.
pub fn classify_grid(
    params: &SystemParams,
    window: &DiagramWindow,
    ng: usize,
    nc: usize,
) -> Result<Vec<DiagramCell>> {
    window.validate()?;
    if ng == 0 || nc == 0 {
        return Err(Error::Validation("grid resolution must be positive".into()));
    }
    let dg = (window.g_max - window.g_min) / ng as f64;
    let dc = (window.c_max - window.c_min) / nc as f64;
    Ok((0..nc * ng)
        .into_par_iter()
        .map(|k| {
            let (j, i) = (k / ng, k % ng);
            let g = window.g_min + (i as f64 + 0.5) * dg;
            let c = window.c_min + (j as f64 + 0.5) * dc;
            DiagramCell { g, c, label: classify(&EnergyMomentum { g, c }, params) }
        })
        .collect())
}

/// Writes `mu,g,c,label` rows.
pub fn write_csv<W: Write>(mut out: W, params: &SystemParams, cells: &[DiagramCell]) -> std::io::Result<()> {
    writeln!(out, "mu,g,c,label")?;
    for cell in cells {
        writeln!(out, "{},{},{},{}", params.mu(), cell.g, cell.c, cell.label.name())?;
    }
    Ok(())
}

fn region_color(label: &RegionLabel) -> &'static str {
    match label.kind {
        Region::Forbidden => "#e8e8e8",
        Region::SPrime => "#f4c27a",
        Region::S => "#9fd39a",
        Region::L => "#8fb8e8",
        Region::P => "#d6a4e0",
        Region::OnCurve(_) | Region::SaddleValue => "#404040",
    }
}

/// Renders the classified grid as an SVG of `size x size` pixels with the
/// five critical curves overlaid.
pub fn render_svg(
    params: &SystemParams,
    window: &DiagramWindow,
    cells: &[DiagramCell],
    ng: usize,
    nc: usize,
    size: u32,
) -> String {
    let s = size as f64;
    let px = |g: f64| (g - window.g_min) / (window.g_max - window.g_min) * s;
    let py = |c: f64| (window.c_max - c) / (window.c_max - window.c_min) * s;
    let (w, h) = (s / ng as f64, s / nc as f64);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, r#"<g shape-rendering="crispEdges">"#);
    // One rect per horizontal run of equal labels.
    for row in cells.chunks(ng) {
        let mut start = 0;
        while start < row.len() {
            let mut end = start + 1;
            while end < row.len() && region_color(&row[end].label) == region_color(&row[start].label) {
                end += 1;
            }
            let y = py(row[start].c) - 0.5 * h;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                start as f64 * w,
                y,
                (end - start) as f64 * w,
                h,
                region_color(&row[start].label)
            );
            start = end;
        }
    }
    let _ = writeln!(svg, "</g>");

    let samples = 400;
    for curve in Curve::ALL {
        let (lo, hi) = match curve {
            Curve::L4 => (params.c_j(), params.c_h()),
            Curve::L5 => (params.c_e(), 0.0),
            _ => (f64::NEG_INFINITY, 0.0),
        };
        let (lo, hi) = (lo.max(window.c_min), hi.min(window.c_max));
        if lo >= hi {
            continue;
        }
        let points: Vec<String> = (0..=samples)
            .filter_map(|k| {
                let c = lo + (hi - lo) * k as f64 / samples as f64;
                let g = curve.g_at(c, params).or_else(|| {
                    // endpoints of the open c-range
                    let eps = 1e-12 * (1.0 + c.abs());
                    curve.g_at(c.clamp(lo + eps, hi - eps), params)
                })?;
                (window.g_min..=window.g_max)
                    .contains(&g)
                    .then(|| format!("{:.3},{:.3}", px(g), py(c)))
            })
            .collect();
        if points.len() < 2 {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<polyline id="{}" fill="none" stroke="black" stroke-width="2" points="{}"/>"#,
            curve.name(),
            points.join(" ")
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="10" y="24" font-family="sans-serif" font-size="18">mu = {}</text>"#,
        params.mu()
    );
    svg.push_str("</svg>\n");
    svg
}

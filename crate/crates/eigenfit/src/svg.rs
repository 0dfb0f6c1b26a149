//! Tiny SVG plot emitter: median lines with quantile bands for error curves,
//! mean polynomials with standard-deviation bands for bias studies. No axes
//! frills; the figures are generated data views, not a plotting library.

use crate::experiments::{BiasStudy, ErrorCurves, Method};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN: f64 = 52.0;

fn color(method: Method) -> &'static str {
    match method {
        Method::Debiased => "#c62828",
        Method::LeverageOnly => "#1565c0",
        Method::PhaseGrid => "#2e7d32",
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn polyline(frame: &Frame, pts: &[(f64, f64)], stroke: &str, dash: bool) -> String {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
        .collect();
    let dash_attr = if dash { " stroke-dasharray=\"6,4\"" } else { "" };
    format!(
        "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.8\"{dash_attr} points=\"{}\"/>\n",
        coords.join(" ")
    )
}

fn band(frame: &Frame, xs: &[f64], lo: &[f64], hi: &[f64], fill: &str) -> String {
    let mut pts: Vec<String> = xs
        .iter()
        .zip(hi)
        .map(|(&x, &y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
        .collect();
    pts.extend(
        xs.iter()
            .zip(lo)
            .rev()
            .map(|(&x, &y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y))),
    );
    format!(
        "<polygon fill=\"{fill}\" fill-opacity=\"0.18\" stroke=\"none\" points=\"{}\"/>\n",
        pts.join(" ")
    )
}

fn document(title: &str, body: String) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n\
         <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n\
         {body}</svg>\n",
        WIDTH / 2.0,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN,
    )
}

/// Error curves: log10 relative error vs n, one median line and one
/// 10%-90% band per method.
pub fn curves_svg(curves: &ErrorCurves) -> String {
    let log = |v: f64| v.max(1e-12).log10();
    let mut xs_all = Vec::new();
    let mut ys_all = Vec::new();
    for p in &curves.points {
        xs_all.push(p.n as f64);
        ys_all.push(log(p.q10));
        ys_all.push(log(p.q90));
    }
    let frame = Frame {
        x0: xs_all.iter().copied().fold(f64::INFINITY, f64::min),
        x1: xs_all.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        y0: ys_all.iter().copied().fold(f64::INFINITY, f64::min) - 0.2,
        y1: ys_all.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 0.2,
    };
    let mut body = String::new();
    for &method in &curves.config.methods {
        let pts: Vec<_> = curves
            .points
            .iter()
            .filter(|p| p.method == method)
            .collect();
        if pts.is_empty() {
            continue;
        }
        let xs: Vec<f64> = pts.iter().map(|p| p.n as f64).collect();
        let lo: Vec<f64> = pts.iter().map(|p| log(p.q10)).collect();
        let hi: Vec<f64> = pts.iter().map(|p| log(p.q90)).collect();
        let med: Vec<(f64, f64)> = pts.iter().map(|p| (p.n as f64, log(p.median))).collect();
        body.push_str(&band(&frame, &xs, &lo, &hi, color(method)));
        body.push_str(&polyline(&frame, &med, color(method), false));
        body.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>\n",
            frame.x(*xs.last().unwrap()) - 60.0,
            frame.y(*med.last().map(|(_, y)| y).unwrap()) - 6.0,
            color(method),
            method.name()
        ));
    }
    body.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">n</text>\n\
         <text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">log10 rel. error</text>\n",
        WIDTH / 2.0,
        HEIGHT - 18.0,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
    ));
    document("relative error vs sample count", body)
}

/// Bias study: the best approximation, each method's mean fit, and one
/// standard-deviation bands on the plotting grid.
pub fn bias_svg(study: &BiasStudy) -> String {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for mb in &study.per_method {
        for (m, b) in mb.mean_grid.iter().zip(&mb.band_grid) {
            lo = lo.min(m - b);
            hi = hi.max(m + b);
        }
    }
    for &v in &study.oracle_grid {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let pad = 0.05 * (hi - lo).max(1e-9);
    let frame = Frame {
        x0: study.grid[0],
        x1: *study.grid.last().unwrap(),
        y0: lo - pad,
        y1: hi + pad,
    };
    let mut body = String::new();
    for mb in &study.per_method {
        let lo_band: Vec<f64> = mb.mean_grid.iter().zip(&mb.band_grid).map(|(m, b)| m - b).collect();
        let hi_band: Vec<f64> = mb.mean_grid.iter().zip(&mb.band_grid).map(|(m, b)| m + b).collect();
        body.push_str(&band(&frame, &study.grid, &lo_band, &hi_band, color(mb.method)));
    }
    let oracle_pts: Vec<(f64, f64)> = study
        .grid
        .iter()
        .zip(&study.oracle_grid)
        .map(|(&x, &y)| (x, y))
        .collect();
    body.push_str(&polyline(&frame, &oracle_pts, "#000000", false));
    for mb in &study.per_method {
        let pts: Vec<(f64, f64)> = study
            .grid
            .iter()
            .zip(&mb.mean_grid)
            .map(|(&x, &y)| (x, y))
            .collect();
        body.push_str(&polyline(&frame, &pts, color(mb.method), true));
    }
    document("mean fitted polynomial vs best approximation", body)
}

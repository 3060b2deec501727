//! Single-path traces of `f_t`, `theta_t` and the `g` residual, as CSV rows and SVG.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use super::{g_from_f, step_f_theta, DirectG, LaurentState, NoisePath};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceConfig {
    pub n: usize,
    pub kappa0: f64,
    /// One variance per orthonormal generator.
    pub kappa: Vec<f64>,
    pub t_final: f64,
    pub dt: f64,
    pub depth: usize,
    pub seed: u64,
    /// Keep every `stride`-th step.
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub b0: f64,
    pub f: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
    /// Largest coefficient gap between `f^n + n B0` and the directly integrated `g`.
    pub g_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub config: TraceConfig,
    pub rows: Vec<TraceRow>,
    /// Time at which `|a1|` fell below the threshold, if it did.
    pub censored_at: Option<f64>,
}

impl Trace {
    /// CSV with columns `t,B0,f0..f{D},theta{r}_0..theta{r}_{D},g_residual`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let d = self.config.depth;
        let mut header = vec!["t".to_string(), "B0".to_string()];
        header.extend((0..=d).map(|j| format!("f{j}")));
        for r in 0..self.config.kappa.len() {
            header.extend((0..=d).map(|k| format!("theta{}_{k}", r + 1)));
        }
        header.push("g_residual".into());
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            let mut cells = vec![row.t.to_string(), row.b0.to_string()];
            cells.extend(row.f.iter().map(f64::to_string));
            for th in &row.theta {
                cells.extend(th.iter().map(f64::to_string));
            }
            cells.push(row.g_residual.to_string());
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

pub fn run_trace(cfg: &TraceConfig) -> Result<Trace> {
    if cfg.stride == 0 || !(cfg.t_final >= 0.0) {
        return Err(Error::Config("need stride >= 1 and T >= 0".into()));
    }
    let steps = (cfg.t_final / cfg.dt).round() as usize;
    let kappa: Vec<f64> = std::iter::once(cfg.kappa0).chain(cfg.kappa.iter().cloned()).collect();
    let path = NoisePath::generate(cfg.seed, cfg.dt, steps, &kappa)?;
    let mut s = LaurentState::initial(cfg.n, cfg.depth, cfg.kappa.len())?;
    let mut direct = DirectG::initial(cfg.n, cfg.depth);
    let row = |s: &LaurentState, direct: &DirectG| TraceRow {
        t: s.t,
        b0: s.b[0],
        f: s.f.clone(),
        theta: s.theta.clone(),
        g_residual: g_from_f(s).iter().zip(&direct.g).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
    };
    let mut rows = vec![row(&s, &direct)];
    let mut censored_at = None;
    for k in 0..steps {
        direct.step(s.b[0], cfg.dt);
        match step_f_theta(&mut s, &path.step(k), cfg.dt, cfg.kappa0) {
            Ok(()) => {}
            Err(Error::BlowUp { t, .. }) => {
                censored_at = Some(t);
                break;
            }
            Err(e) => return Err(e),
        }
        if (k + 1) % cfg.stride == 0 || k + 1 == steps {
            rows.push(row(&s, &direct));
        }
    }
    Ok(Trace { config: cfg.clone(), rows, censored_at })
}

/// Line plot of `n B0` and the first few coefficients of `f` below the leading one.
pub fn svg_plot(trace: &Trace, coefficients: usize) -> String {
    let (w, h, pad) = (800.0, 480.0, 40.0);
    let n = trace.config.n as f64;
    let mut series: Vec<(String, Vec<(f64, f64)>)> =
        vec![("n B0".into(), trace.rows.iter().map(|r| (r.t, n * r.b0)).collect())];
    for j in 1..=coefficients.min(trace.config.depth) {
        series.push((format!("f{j}"), trace.rows.iter().map(|r| (r.t, r.f[j])).collect()));
    }
    let pts = series.iter().flat_map(|(_, p)| p.iter());
    let (mut tmax, mut ymin, mut ymax) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for &(t, y) in pts {
        tmax = tmax.max(t);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if !(ymax > ymin) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    let tmax = if tmax > 0.0 { tmax } else { 1.0 };
    let sx = |t: f64| pad + t / tmax * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - ymin) / (ymax - ymin) * (h - 2.0 * pad);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<line x1="{pad}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#999"/>"##,
        y0 = sy(0.0f64.clamp(ymin, ymax)),
        x1 = w - pad
    );
    for (i, (label, p)) in series.iter().enumerate() {
        let c = colors[i % colors.len()];
        let coords: Vec<String> = p.iter().map(|&(t, y)| format!("{:.2},{:.2}", sx(t), sy(y))).collect();
        let _ = writeln!(svg, r##"<polyline fill="none" stroke="{c}" stroke-width="1" points="{}"/>"##, coords.join(" "));
        let _ = writeln!(svg, r#"<text x="{}" y="{}" fill="{c}">{label}</text>"#, pad + 10.0 + 70.0 * i as f64, pad - 15.0);
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}">t = {tmax}</text>"#, w - pad - 60.0, h - 10.0);
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> TraceConfig {
        TraceConfig {
            n: 2,
            kappa0: 8.0 / 3.0,
            kappa: vec![1.0; 3],
            t_final: 0.1,
            dt: 1e-3,
            depth: 6,
            seed: 5,
            stride: 10,
        }
    }

    #[test]
    fn trace_rows_and_csv() {
        let tr = run_trace(&cfg()).unwrap();
        assert_eq!(tr.rows.len(), 11);
        assert_eq!(tr.censored_at, None);
        assert_eq!(tr.rows[0].f[0], 1.0);
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 2 + 7 + 3 * 7 + 1);
        assert_eq!(text.lines().count(), 12);
        assert_eq!(tr, run_trace(&cfg()).unwrap());
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = svg_plot(&run_trace(&cfg()).unwrap(), 3);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 4);
    }
}

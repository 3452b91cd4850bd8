//! Artifact writers: CSV tables, canonical JSON and static SVG line plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Header row plus one record per row; floats use shortest round-trip decimals.
pub fn write_csv<P: AsRef<Path>>(path: P, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref()).map_err(|e| Error::Io(e.into()))?;
    w.write_record(header).map_err(|e| Error::Io(e.into()))?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Usage(format!(
                "csv row has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row.iter().map(|v| format!("{v:?}")))
            .map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with keys sorted at every level.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<P: AsRef<Path>, T: Serialize + ?Sized>(path: P, value: &T) -> Result<()> {
    fs::write(path, canonical_json(value)?)?;
    Ok(())
}

/// SHA-256 of the compact sorted-key JSON form, so field order does not matter.
pub fn config_hash<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let bytes = serde_json::to_vec(&v)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<[f64; 2]>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<[f64; 2]>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const W: f64 = 720.0;
const H: f64 = 480.0;
const MARGIN: [f64; 4] = [60.0, 20.0, 40.0, 70.0];

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Default::default()
        }
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn tx(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let f = |v: f64, log: bool| if log { (v > 0.0).then(|| v.log10()) } else { Some(v) };
        let x = f(p[0], self.log_x)?;
        let y = f(p[1], self.log_y)?;
        (x.is_finite() && y.is_finite()).then_some([x, y])
    }

    /// Render as a standalone SVG document with no timestamp or random ids.
    pub fn render(&self) -> String {
        let pts: Vec<Vec<[f64; 2]>> = self
            .series
            .iter()
            .map(|s| s.points.iter().filter_map(|&p| self.tx(p)).collect())
            .collect();
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in pts.iter().flatten() {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            lo = [0.0, 0.0];
            hi = [1.0, 1.0];
        }
        for k in 0..2 {
            if hi[k] - lo[k] <= f64::EPSILON * hi[k].abs().max(1.0) {
                lo[k] -= 0.5;
                hi[k] += 0.5;
            }
        }
        let [ml, mr, mt, mb] = MARGIN;
        let (pw, ph) = (W - ml - mr, H - mt - mb);
        let sx = |x: f64| ml + (x - lo[0]) / (hi[0] - lo[0]) * pw;
        let sy = |y: f64| mt + ph - (y - lo[1]) / (hi[1] - lo[1]) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = lo[0] + f * (hi[0] - lo[0]);
            let yv = lo[1] + f * (hi[1] - lo[1]);
            let (x, y) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                mt + ph,
                mt + ph + 5.0,
                mt + ph + 18.0,
                tick(xv, self.log_x)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{ml}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                ml - 5.0,
                ml - 8.0,
                y + 4.0,
                tick(yv, self.log_y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ml + pw / 2.0,
            H - 30.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            mt + ph / 2.0,
            mt + ph / 2.0,
            escape(&self.y_label)
        );
        for (i, (series, p)) in self.series.iter().zip(&pts).enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            if !p.is_empty() {
                let path: Vec<String> = p.iter().map(|q| format!("{:.2},{:.2}", sx(q[0]), sy(q[1]))).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
                    path.join(" ")
                );
            }
            let ly = mt + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                ml + pw - 150.0,
                ml + pw - 125.0,
                ml + pw - 120.0,
                ly + 4.0,
                escape(&series.name)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

fn tick(v: f64, log: bool) -> String {
    let v = if log { 10f64.powf(v) } else { v };
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_field_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"a": 1, "b": {"x": 2, "y": 3}}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"b": {"y": 3, "x": 2}, "a": 1}"#).unwrap();
        assert_eq!(config_hash(&a).unwrap(), config_hash(&b).unwrap());
    }

    #[test]
    fn csv_round_trips_floats() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let x = 0.1 + 0.2;
        write_csv(&p, &["a", "b"], &[vec![x, 1e-300]]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let row = text.lines().nth(1).unwrap();
        let back: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(back, vec![x, 1e-300]);
    }

    #[test]
    fn svg_is_deterministic() {
        let p = Plot::new("t", "x", "y").with(Series::new("s", vec![[0.0, 1.0], [1.0, 2.0]]));
        assert_eq!(p.render(), p.render());
        assert!(p.render().starts_with("<svg"));
    }
}

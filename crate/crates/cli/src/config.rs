//! Experiment configuration: JSON file, command-line overrides and the
//! list grammar `2,3` / `0.5:1.5:0.25`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use ptone_core::radial::DEFAULT_GRID;
use ptone_core::surfaces::SurfaceKind;

use crate::acceptance::Fixtures;
use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_TOL: f64 = 1e-10;

/// A parameter list as written in a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ListSpec {
    One(f64),
    Many(Vec<f64>),
    Text(String),
}

impl ListSpec {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        match self {
            ListSpec::One(v) => Ok(vec![*v]),
            ListSpec::Many(v) => Ok(v.clone()),
            ListSpec::Text(s) => parse_list(s),
        }
    }
}

/// Parses comma-separated items, each a number or an inclusive range
/// `start:stop:step`.
pub fn parse_list(text: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(CliError::Input(format!("empty item in list `{text}`")));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [one] => out.push(number(one)?),
            [a, b, step] => {
                let (a, b, step) = (number(a)?, number(b)?, number(step)?);
                if !(step > 0.0) || !(b >= a) {
                    return Err(CliError::Input(format!("range `{item}` needs step > 0 and stop >= start")));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize + 1;
                if count > 100_000 {
                    return Err(CliError::Input(format!("range `{item}` has too many points")));
                }
                // rounding keeps 0.1-style steps free of binary noise
                out.extend((0..count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12));
            }
            _ => return Err(CliError::Input(format!("cannot parse list item `{item}`"))),
        }
    }
    Ok(out)
}

fn number(s: &str) -> CliResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Input(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Input(format!("`{s}` is not finite")));
    }
    Ok(v)
}

/// Every setting is optional here; missing ones fall back to command defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub p: Option<ListSpec>,
    pub m: Option<ListSpec>,
    pub c: Option<ListSpec>,
    pub r: Option<ListSpec>,
    pub eps: Option<ListSpec>,
    pub n: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    /// Mean-curvature bound for the annulus-free certificate table.
    pub h: Option<f64>,
    pub surfaces: Option<Vec<String>>,
    pub profile_csv: Option<PathBuf>,
    pub filter: Option<String>,
    pub fixtures: Option<Fixtures>,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Values set in `top` win.
    pub fn overlay(self, top: ConfigFile) -> ConfigFile {
        ConfigFile {
            p: top.p.or(self.p),
            m: top.m.or(self.m),
            c: top.c.or(self.c),
            r: top.r.or(self.r),
            eps: top.eps.or(self.eps),
            n: top.n.or(self.n),
            tol: top.tol.or(self.tol),
            seed: top.seed.or(self.seed),
            h: top.h.or(self.h),
            surfaces: top.surfaces.or(self.surfaces),
            profile_csv: top.profile_csv.or(self.profile_csv),
            filter: top.filter.or(self.filter),
            fixtures: top.fixtures.or(self.fixtures),
            out: top.out.or(self.out),
            json: top.json.or(self.json),
        }
    }
}

/// Command-specific fallbacks.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub p: &'static [f64],
    pub m: &'static [u32],
    pub c: &'static [f64],
    pub r: &'static [f64],
}

/// Fully resolved configuration of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub p: Vec<f64>,
    pub m: Vec<u32>,
    pub c: Vec<f64>,
    pub r: Vec<f64>,
    pub eps: Vec<f64>,
    pub n: usize,
    pub tol: f64,
    pub seed: u64,
    pub h: f64,
    pub surfaces: Vec<SurfaceKind>,
    pub profile_csv: Option<PathBuf>,
    pub filter: Option<String>,
    pub fixtures: Fixtures,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

fn list_or(spec: &Option<ListSpec>, fallback: &[f64], name: &str) -> CliResult<Vec<f64>> {
    let v = match spec {
        Some(s) => s.values()?,
        None => fallback.to_vec(),
    };
    if v.is_empty() {
        return Err(CliError::Input(format!("parameter list `{name}` is empty")));
    }
    Ok(v)
}

impl ExperimentConfig {
    pub fn resolve(file: ConfigFile, d: Defaults) -> CliResult<Self> {
        let m_default: Vec<f64> = d.m.iter().map(|&m| m as f64).collect();
        let m = list_or(&file.m, &m_default, "m")?
            .into_iter()
            .map(|v| {
                if v >= 1.0 && v.fract() == 0.0 && v <= 64.0 {
                    Ok(v as u32)
                } else {
                    Err(CliError::Input(format!("dimension m = {v} must be a positive integer")))
                }
            })
            .collect::<CliResult<Vec<u32>>>()?;
        let surfaces = match &file.surfaces {
            Some(names) => names
                .iter()
                .map(|s| s.parse::<SurfaceKind>().map_err(CliError::from))
                .collect::<CliResult<Vec<_>>>()?,
            None => vec![SurfaceKind::Plane, SurfaceKind::Catenoid],
        };
        let tol = file.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(CliError::Input(format!("tolerance {tol} must be positive")));
        }
        let n = file.n.unwrap_or(DEFAULT_GRID);
        if n < 16 {
            return Err(CliError::Input(format!("grid size n = {n} is too small")));
        }
        if surfaces.is_empty() {
            return Err(CliError::Input("surface list is empty".into()));
        }
        Ok(Self {
            p: list_or(&file.p, d.p, "p")?,
            m,
            c: list_or(&file.c, d.c, "c")?,
            r: list_or(&file.r, d.r, "r")?,
            eps: list_or(&file.eps, &[0.1], "eps")?,
            n,
            tol,
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            h: file.h.unwrap_or(0.0),
            surfaces,
            profile_csv: file.profile_csv,
            filter: file.filter,
            fixtures: file.fixtures.unwrap_or_default(),
            out: file.out,
            json: file.json,
        })
    }

    /// Every `(p, m, c, r)` combination in sorted key order.
    pub fn points(&self) -> Vec<(f64, u32, f64, f64)> {
        let mut pts = Vec::new();
        for &p in &self.p {
            for &m in &self.m {
                for &c in &self.c {
                    for &r in &self.r {
                        pts.push((p, m, c, r));
                    }
                }
            }
        }
        pts.sort_by(|a, b| {
            a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)).then(a.3.total_cmp(&b.3))
        });
        pts.dedup();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_grammar() {
        assert_eq!(parse_list("2,3").unwrap(), vec![2.0, 3.0]);
        assert_eq!(parse_list("0.5:1.5:0.25").unwrap(), vec![0.5, 0.75, 1.0, 1.25, 1.5]);
        assert_eq!(parse_list("0.1:0.3:0.1").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(parse_list("1, 2:3:1").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_list("1,,2").is_err());
        assert!(parse_list("2:1:0.5").is_err());
        assert!(parse_list("1:2:0").is_err());
        assert!(parse_list("x").is_err());
        assert!(parse_list("1:2").is_err());
    }

    #[test]
    fn overlay_prefers_flags() {
        let file: ConfigFile = serde_json::from_str(r#"{"p": [2, 3], "n": 500, "r": "1:2:1"}"#).unwrap();
        let flags = ConfigFile { p: Some(ListSpec::Text("4".into())), ..Default::default() };
        let merged = file.overlay(flags);
        let d = Defaults { p: &[2.0], m: &[2], c: &[0.0], r: &[1.0] };
        let cfg = ExperimentConfig::resolve(merged, d).unwrap();
        assert_eq!(cfg.p, vec![4.0]);
        assert_eq!(cfg.r, vec![1.0, 2.0]);
        assert_eq!(cfg.n, 500);
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn rejects_bad_dimension_and_unknown_keys() {
        let d = Defaults { p: &[2.0], m: &[2], c: &[0.0], r: &[1.0] };
        let file = ConfigFile { m: Some(ListSpec::One(1.5)), ..Default::default() };
        assert!(ExperimentConfig::resolve(file, d).is_err());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"pp": 1}"#).is_err());
    }
}

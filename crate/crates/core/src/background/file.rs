//! Background definition files.
//!
//! ```toml
//! # either a named preset
//! preset = "space_form(1)"
//! # or explicit data: upper triangle of Ric (11 12 13 22 23 33) and
//! # ∇Ric pair-major with the derivative index innermost
//! ric = [2.0, 0.0, 0.0, 2.0, 0.0, 2.0]
//! dric = [0.0, 0.0, 0.0,  0.0, 0.0, 0.0,  0.0, 0.0, 0.0,
//!         0.0, 0.0, 0.0,  0.0, 0.0, 0.0,  0.0, 0.0, 0.0]
//! scal_check = 6.0
//! ```

use super::{CurvatureBackground, Sym3, Tensor3};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundSpec {
    pub preset: Option<String>,
    pub ric: Option<Vec<f64>>,
    pub dric: Option<Vec<f64>>,
    pub scal_check: Option<f64>,
}

impl BackgroundSpec {
    pub fn preset(name: &str) -> Self {
        BackgroundSpec { preset: Some(name.to_string()), ..Default::default() }
    }

    pub fn build(&self) -> Result<CurvatureBackground> {
        let bg = match (&self.preset, &self.ric, &self.dric) {
            (Some(p), None, None) => parse_preset(p)?,
            (Some(_), _, _) => {
                return Err(Error::Parse("give either `preset` or explicit `ric`/`dric`, not both".into()))
            }
            (None, None, None) => return Err(Error::Parse("background needs `preset` or `ric`".into())),
            (None, ric, dric) => {
                let ric = ric.as_deref().unwrap_or(&[0.0; 6]);
                let dric = dric.as_deref().unwrap_or(&[0.0; 18]);
                CurvatureBackground::from_ricci(unpack_ric(ric)?, unpack_dric(dric)?)?
            }
        };
        if let Some(s) = self.scal_check {
            if (s - bg.scal).abs() > 1e-12 * (1.0 + s.abs()) {
                return Err(Error::Validation(format!("scal_check = {s} disagrees with trace(ric) = {}", bg.scal)));
            }
        }
        Ok(bg)
    }
}

/// Parses a background definition file.
pub fn parse_background(text: &str) -> Result<CurvatureBackground> {
    let spec: BackgroundSpec = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build()
}

fn unpack_ric(v: &[f64]) -> Result<Sym3> {
    if v.len() != 6 {
        return Err(Error::Parse(format!("ric needs 6 components, got {}", v.len())));
    }
    let mut m = [[0.0; 3]; 3];
    for (k, &(a, b)) in UPPER.iter().enumerate() {
        m[a][b] = v[k];
        m[b][a] = v[k];
    }
    Ok(m)
}

fn unpack_dric(v: &[f64]) -> Result<Tensor3> {
    if v.len() != 18 {
        return Err(Error::Parse(format!("dric needs 18 components, got {}", v.len())));
    }
    let mut t = [[[0.0; 3]; 3]; 3];
    for (k, &(a, b)) in UPPER.iter().enumerate() {
        for c in 0..3 {
            t[a][b][c] = v[3 * k + c];
            t[b][a][c] = v[3 * k + c];
        }
    }
    Ok(t)
}

/// `flat`, `space_form(k)` or `gradient(s1,s2,s3)`.
pub fn parse_preset(name: &str) -> Result<CurvatureBackground> {
    let name = name.trim();
    let args = |prefix: &str| -> Result<Option<Vec<f64>>> {
        let Some(rest) = name.strip_prefix(prefix) else { return Ok(None) };
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("malformed preset `{name}`")))?;
        inner
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("preset `{name}`: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    };
    if name == "flat" {
        return Ok(CurvatureBackground::flat());
    }
    if let Some(a) = args("space_form")? {
        return match a.as_slice() {
            [k] => Ok(CurvatureBackground::space_form(*k)),
            _ => Err(Error::Parse("space_form takes one argument".into())),
        };
    }
    if let Some(a) = args("gradient")? {
        return match a.as_slice() {
            [x, y, z] => Ok(CurvatureBackground::gradient([*x, *y, *z])),
            _ => Err(Error::Parse("gradient takes three arguments".into())),
        };
    }
    Err(Error::Parse(format!("unknown preset `{name}`")))
}

/// Inverse of the file layout; used when echoing a configuration.
pub fn pack(bg: &CurvatureBackground) -> (Vec<f64>, Vec<f64>) {
    let ric = UPPER.iter().map(|&(a, b)| bg.ric[a][b]).collect();
    let dric = UPPER.iter().flat_map(|&(a, b)| (0..3).map(move |c| bg.dric[a][b][c])).collect();
    (ric, dric)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!(parse_preset("flat").unwrap(), CurvatureBackground::flat());
        assert_eq!(parse_preset("space_form(0.5)").unwrap(), CurvatureBackground::space_form(0.5));
        assert_eq!(parse_preset("gradient(1, 0, 0)").unwrap(), CurvatureBackground::gradient([1.0, 0.0, 0.0]));
        assert!(parse_preset("space_form(1,2)").is_err());
        assert!(parse_preset("torus").is_err());
    }

    #[test]
    fn explicit_file_round_trips() {
        let bg = CurvatureBackground::gradient([0.2, -0.1, 0.4]);
        let (ric, dric) = pack(&bg);
        let text = format!("ric = {ric:?}\ndric = {dric:?}\nscal_check = 0.0\n");
        assert_eq!(parse_background(&text).unwrap(), bg);
    }

    #[test]
    fn scal_check_mismatch_is_rejected() {
        let text = "ric = [1.0, 0.0, 0.0, 1.0, 0.0, 1.0]\nscal_check = 2.0\n";
        assert!(matches!(parse_background(text), Err(Error::Validation(_))));
        assert!(parse_background("ric = [1.0, 0.0]\n").is_err());
    }
}

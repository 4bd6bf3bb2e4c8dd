//! Initial-state specifications and the JSON blocked-density format.
//!
//! ```text
//! dressed:n=2
//! superposition:n=2,alpha=0.785398
//! fock:photons=1,atom=0
//! file:state.json
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    initial_dressed, initial_fock, initial_superposition, BlockedDensity, DEFAULT_ALPHA,
};
use crate::error::{Error, Result};
use crate::liouville::{BlockIndex, DensityBlock};
use crate::smallmat::{c, CMat};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BlockJson {
    pub n: usize,
    pub m: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateJson {
    pub blocks: Vec<BlockJson>,
}

/// Real and imaginary parts as nested rows.
pub fn split_matrix(m: &CMat) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = |f: fn(&crate::C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(f).collect())
            .collect()
    };
    (rows(|z| z.re), rows(|z| z.im))
}

impl StateJson {
    pub fn from_state(rho: &BlockedDensity) -> Self {
        let blocks = rho
            .blocks()
            .map(|b| {
                let (re, im) = split_matrix(b.matrix());
                BlockJson {
                    n: b.index().n,
                    m: b.index().m,
                    re,
                    im,
                }
            })
            .collect();
        Self { blocks }
    }

    pub fn to_state(&self) -> Result<BlockedDensity> {
        let mut out = BlockedDensity::new();
        for b in &self.blocks {
            let index = BlockIndex::new(b.n, b.m);
            if out.get(index).is_some() {
                return Err(Error::Parse(format!("block {index} listed twice")));
            }
            if b.re.len() != index.dim_left()
                || b.im.len() != index.dim_left()
                || b.re
                    .iter()
                    .chain(&b.im)
                    .any(|r| r.len() != index.dim_right())
            {
                return Err(Error::Parse(format!(
                    "block {index} must be {}x{}",
                    index.dim_left(),
                    index.dim_right()
                )));
            }
            let mat = CMat::from_fn(index.dim_left(), index.dim_right(), |i, j| {
                c(b.re[i][j], b.im[i][j])
            });
            if mat
                .as_slice()
                .iter()
                .any(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(Error::Parse(format!(
                    "block {index} has non-finite entries"
                )));
            }
            out.insert(DensityBlock::new(index, mat)?);
        }
        Ok(out)
    }
}

pub fn load_state(path: &Path) -> Result<BlockedDensity> {
    let text = std::fs::read_to_string(path)?;
    let doc: StateJson = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    doc.to_state()
}

fn parse_fields(body: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    if body.is_empty() {
        return Ok(out);
    }
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{part}'")))?;
        if out
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(Error::Parse(format!("key '{k}' given twice")));
        }
    }
    Ok(out)
}

fn take<T: std::str::FromStr>(
    fields: &mut BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    match fields.remove(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("invalid value '{v}' for {key}"))),
    }
}

fn required<T: std::str::FromStr>(fields: &mut BTreeMap<String, String>, key: &str) -> Result<T> {
    take(fields, key)?.ok_or_else(|| Error::Parse(format!("missing {key}=")))
}

/// Builds the state described by `spec`; the result is validated.
pub fn parse_initial(spec: &str) -> Result<BlockedDensity> {
    let (kind, body) = spec.split_once(':').unwrap_or((spec, ""));
    let state = if kind == "file" {
        if body.is_empty() {
            return Err(Error::Parse("file: needs a path".into()));
        }
        load_state(Path::new(body))?
    } else {
        let mut fields = parse_fields(body)?;
        let state = match kind {
            "dressed" => initial_dressed(required(&mut fields, "n")?)?,
            "superposition" => {
                let n = required(&mut fields, "n")?;
                let alpha = take(&mut fields, "alpha")?.unwrap_or(DEFAULT_ALPHA);
                initial_superposition(n, alpha)?
            }
            "fock" => {
                let photons = required(&mut fields, "photons")?;
                let atom = required(&mut fields, "atom")?;
                initial_fock(photons, atom)?
            }
            other => {
                return Err(Error::Parse(format!(
                    "unknown initial state kind '{other}'"
                )))
            }
        };
        if let Some(k) = fields.keys().next() {
            return Err(Error::Parse(format!("unknown key '{k}' for {kind}")));
        }
        state
    };
    state.validate()?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_states() {
        assert_eq!(
            parse_initial("dressed:n=2").unwrap(),
            initial_dressed(2).unwrap()
        );
        assert_eq!(
            parse_initial("superposition:n=2,alpha=0.3").unwrap(),
            initial_superposition(2, 0.3).unwrap()
        );
        assert_eq!(
            parse_initial("superposition:n=1").unwrap(),
            initial_superposition(1, DEFAULT_ALPHA).unwrap()
        );
        assert_eq!(
            parse_initial("fock:photons=1,atom=0").unwrap(),
            initial_fock(1, 0).unwrap()
        );
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in [
            "dressed",
            "dressed:n=0",
            "dressed:n=x",
            "dressed:n=2,m=3",
            "fock:photons=1,atom=2",
            "coherent:n=1",
            "superposition:alpha=1",
            "file:",
            "dressed:n=1,n=2",
        ] {
            assert!(parse_initial(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_round_trip() {
        let rho = initial_superposition(2, 0.4).unwrap();
        let text = serde_json::to_string(&StateJson::from_state(&rho)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, &text).unwrap();
        let back = parse_initial(&format!("file:{}", path.display())).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn json_validation() {
        let doc = r#"{"blocks":[{"n":1,"m":1,"re":[[1,0]],"im":[[0,0]]}]}"#;
        let parsed: StateJson = serde_json::from_str(doc).unwrap();
        assert!(matches!(parsed.to_state(), Err(Error::Parse(_))));
        let doc = r#"{"blocks":[{"n":0,"m":0,"re":[[0.5]],"im":[[0]]}]}"#;
        let parsed: StateJson = serde_json::from_str(doc).unwrap();
        assert!(parsed.to_state().unwrap().validate().is_err());
    }
}

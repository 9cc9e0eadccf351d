//! Flat key-value model documents.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys:
//!
//! | key | meaning |
//! |-----|---------|
//! | `family` | `none`, `merton`, `cgmy` or `meixner` |
//! | `sigma` | diffusion volatility (default 0) |
//! | `lambda`, `mu`, `delta_j` | Merton jump intensity, mean and std of log-jumps |
//! | `c`, `g`, `m`, `y` | CGMY parameters |
//! | `a_m`, `b_m`, `d_m` | Meixner parameters |
//! | `r`, `delta` | risk-free and dividend rates (optional) |
//!
//! The drift is never read: it is always set by mean correction.

use std::collections::BTreeMap;

use crate::error::{invalid, LevyError, Result};
use crate::levy_models::{JumpFamily, LevyModel};
use crate::numfmt::fmt_sig;

pub const MODEL_KEYS: &[&str] = &[
    "family", "sigma", "lambda", "mu", "delta_j", "c", "g", "m", "y", "a_m", "b_m", "d_m", "r",
    "delta",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub model: LevyModel,
    pub r: Option<f64>,
    pub delta: Option<f64>,
}

pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| LevyError::Format {
            line: i + 1,
            message: format!("expected key = value, got {line:?}"),
        })?;
        let key = k.trim().to_string();
        if !MODEL_KEYS.contains(&key.as_str()) {
            return Err(LevyError::Format {
                line: i + 1,
                message: format!("unknown key {key:?}"),
            });
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(LevyError::Format {
                line: i + 1,
                message: format!("duplicate key {key:?}"),
            });
        }
    }
    Ok(map)
}

/// Builds a model from already-split key-value pairs.
pub fn spec_from_map(map: &BTreeMap<String, String>) -> Result<ModelSpec> {
    let num = |key: &str| -> Result<Option<f64>> {
        map.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| invalid(format!("{key}: cannot parse {v:?} as a number")))
            })
            .transpose()
    };
    let req = |key: &str| -> Result<f64> {
        num(key)?.ok_or_else(|| invalid(format!("missing required key {key:?}")))
    };
    let family = map
        .get("family")
        .ok_or_else(|| invalid("missing required key \"family\""))?;
    let jumps = match family.as_str() {
        "none" => JumpFamily::None,
        "merton" => JumpFamily::Merton {
            lambda: req("lambda")?,
            mu: req("mu")?,
            delta_j: req("delta_j")?,
        },
        "cgmy" => JumpFamily::Cgmy {
            c: req("c")?,
            g: req("g")?,
            m: req("m")?,
            y_exp: req("y")?,
        },
        "meixner" => JumpFamily::Meixner {
            a_m: req("a_m")?,
            b_m: req("b_m")?,
            d_m: req("d_m")?,
        },
        other => return Err(invalid(format!("unknown family {other:?}"))),
    };
    let sigma = num("sigma")?.unwrap_or(0.0);
    Ok(ModelSpec {
        model: LevyModel::new(0.0, sigma, jumps)?,
        r: num("r")?,
        delta: num("delta")?,
    })
}

pub fn parse_model_spec(text: &str) -> Result<ModelSpec> {
    spec_from_map(&parse_kv(text)?)
}

/// Writes the model (drift omitted) in the same key-value format.
pub fn model_to_kv(model: &LevyModel) -> String {
    let mut out = format!("family = {}\nsigma = {}\n", model.jumps.name(), fmt_sig(model.sigma, 10));
    for (k, v) in model.jumps.params() {
        out.push_str(&format!("{k} = {}\n", fmt_sig(v, 10)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_merton_file() {
        let text = "# symmetric Merton\nfamily = merton\nsigma=0.2\nlambda = 1\nmu = -0.01125\ndelta_j = 0.15\nr = 0.05 # annual\ndelta = 0.05\n";
        let spec = parse_model_spec(text).unwrap();
        assert_eq!(
            spec.model.jumps,
            JumpFamily::Merton { lambda: 1.0, mu: -0.01125, delta_j: 0.15 }
        );
        assert_eq!(spec.model.sigma, 0.2);
        assert_eq!((spec.r, spec.delta), (Some(0.05), Some(0.05)));
    }

    #[test]
    fn round_trips_through_text() {
        let m = LevyModel::meixner(0.1, 0.3, -0.15, 1.2).unwrap();
        let back = parse_model_spec(&model_to_kv(&m)).unwrap();
        assert_eq!(back.model, m);
    }

    #[test]
    fn reports_problems() {
        assert!(matches!(
            parse_model_spec("family = cgmy\nc = 1\ng = 5\nm = 10\n"),
            Err(LevyError::InvalidInput(msg)) if msg.contains("\"y\"")
        ));
        assert!(matches!(
            parse_model_spec("family = merton\nfoo = 1\n"),
            Err(LevyError::Format { line: 2, .. })
        ));
        assert!(parse_model_spec("family = heston\n").is_err());
        assert!(parse_model_spec("family = none\nsigma = abc\n").is_err());
        assert!(parse_model_spec("sigma = 0.2\n").is_err());
    }
}

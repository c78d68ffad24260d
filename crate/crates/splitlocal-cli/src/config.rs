//! `key = value` session files.
//!
//! ```text
//! # comments run to end of line
//! q = 3
//! N = 5
//! c_exp = 1
//! alpha_exp = 2
//! box = 1 : ball:0 ball:0 ball:0
//! box = -2*z^1 : ball:1 shell:0 ball:-1
//! ```
//!
//! `box` may repeat; each record is `coefficient : kind:level ...` with one
//! box per coordinate.  Coefficients are rationals, optionally times `z^k`
//! (ζ_N^k).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { field: field.to_string(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coef {
    pub ratio: String,
    pub zeta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxRecord {
    pub coef: Coef,
    pub boxes: Vec<String>,
    #[serde(skip)]
    pub parsed: Vec<(bool, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DmSource {
    Macdonald,
    Explicit { c1: String, c2: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionConfig {
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u32,
    pub c_exp: i64,
    pub alpha_exp: i64,
    pub beta_exp: Option<i64>,
    pub boxes: Vec<BoxRecord>,
    pub dm_source: DmSource,
    /// ζ-exponents of the Satake list at s = 1/2 (None: {αc, (αc)⁻¹})
    pub satake_half: Option<Vec<i64>>,
    /// ζ-exponents of the Satake list at s = 3/2 (None: {1, 1})
    pub satake_three_half: Option<Vec<i64>>,
    pub t0: Option<f64>,
    pub radii: Option<Vec<i64>>,
    pub tolerance: Option<f64>,
    pub mode: Option<String>,
}

impl SessionConfig {
    pub fn dim(&self) -> Option<usize> {
        self.boxes.first().map(|b| b.parsed.len())
    }
}

/// Partial settings, merged from a file and then from flags.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub entries: BTreeMap<String, String>,
    pub boxes: Vec<String>,
}

const KNOWN: &[&str] = &[
    "q",
    "N",
    "c_exp",
    "alpha_exp",
    "beta_exp",
    "dm_source",
    "c1",
    "c2",
    "satake_half",
    "satake_three_half",
    "t0",
    "radii",
    "tolerance",
    "mode",
];

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(err(&format!("line {}", i + 1), "expected `key = value`"));
            };
            let (k, v) = (k.trim(), v.trim());
            if k == "box" {
                raw.boxes.push(v.to_string());
            } else if KNOWN.contains(&k) {
                if raw.entries.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(err(k, "given more than once"));
                }
            } else {
                return Err(err(k, "unknown key"));
            }
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| err(key, format!("cannot parse `{v}`"))),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.get(key)?.ok_or_else(|| err(key, "missing"))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
        let Some(v) = self.entries.get(key) else { return Ok(None) };
        v.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| err(key, format!("cannot parse `{x}`"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn validate(&self) -> Result<SessionConfig, ConfigError> {
        let q: u64 = self.required("q")?;
        if q < 2 {
            return Err(err("q", "must be a prime power >= 2"));
        }
        let n: u32 = self.get("N")?.unwrap_or(1);
        if n == 0 {
            return Err(err("N", "must be >= 1"));
        }
        let dm_source = match self.entries.get("dm_source").map(String::as_str) {
            None | Some("macdonald") => DmSource::Macdonald,
            Some("explicit") => {
                let c1: String = self.required("c1")?;
                let c2: String = self.required("c2")?;
                parse_ratio(&c1).ok_or_else(|| err("c1", "expected a rational a/b"))?;
                parse_ratio(&c2).ok_or_else(|| err("c2", "expected a rational a/b"))?;
                DmSource::Explicit { c1, c2 }
            }
            Some(other) => return Err(err("dm_source", format!("`{other}` is not macdonald|explicit"))),
        };
        let mut boxes = Vec::new();
        for (i, b) in self.boxes.iter().enumerate() {
            let rec = parse_box(b).map_err(|m| err(&format!("box[{i}]"), m))?;
            if let Some(first) = boxes.first() {
                let first: &BoxRecord = first;
                if first.parsed.len() != rec.parsed.len() {
                    return Err(err(&format!("box[{i}]"), "dimension differs from box[0]"));
                }
            }
            boxes.push(rec);
        }
        let tolerance: Option<f64> = self.get("tolerance")?;
        if tolerance.is_some_and(|t| !(t > 0.0)) {
            return Err(err("tolerance", "must be positive"));
        }
        let t0: Option<f64> = self.get("t0")?;
        if t0.is_some_and(|t| !(t > 0.0 && t < 1.0)) {
            return Err(err("t0", "must lie in (0, 1)"));
        }
        let radii: Option<Vec<i64>> = self.list("radii")?;
        if radii.as_ref().is_some_and(|r| r.is_empty() || r.iter().any(|&x| x < 0)) {
            return Err(err("radii", "need a non-empty list of non-negative radii"));
        }
        let mode: Option<String> = self.get("mode")?;
        if mode.as_deref().is_some_and(|m| m != "pieces" && m != "subpieces") {
            return Err(err("mode", "must be pieces|subpieces"));
        }
        Ok(SessionConfig {
            q,
            n,
            c_exp: self.get("c_exp")?.unwrap_or(0),
            alpha_exp: self.get("alpha_exp")?.unwrap_or(0),
            beta_exp: self.get("beta_exp")?,
            boxes,
            dm_source,
            satake_half: self.list("satake_half")?,
            satake_three_half: self.list("satake_three_half")?,
            t0,
            radii,
            tolerance,
            mode,
        })
    }
}

pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let b: num_bigint::BigInt = b.trim().parse().ok()?;
            if b == 0.into() {
                return None;
            }
            Some(BigRational::new(a.trim().parse().ok()?, b))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_coef(s: &str) -> Result<Coef, String> {
    let s = s.trim();
    let bad = || format!("bad coefficient `{s}`");
    let (r, z) = if let Some(rest) = s.strip_prefix("z^") {
        ("1", rest)
    } else if let Some((r, z)) = s.split_once("*z^") {
        (r, z)
    } else {
        (s, "0")
    };
    let ratio = parse_ratio(r).ok_or_else(bad)?;
    let zeta: i64 = z.trim().parse().map_err(|_| bad())?;
    Ok(Coef { ratio: ratio.to_string(), zeta })
}

fn parse_box(s: &str) -> Result<BoxRecord, String> {
    let Some((c, rest)) = s.split_once(':') else {
        return Err("expected `coefficient : kind:level ...`".into());
    };
    let coef = parse_coef(c)?;
    let mut boxes = Vec::new();
    let mut parsed = Vec::new();
    for tok in rest.split_whitespace() {
        let (kind, level) = tok.split_once(':').ok_or_else(|| format!("bad box `{tok}`"))?;
        let level: i64 = level.parse().map_err(|_| format!("bad level in `{tok}`"))?;
        let ball = match kind {
            "ball" => true,
            "shell" => false,
            _ => return Err(format!("unknown box kind `{kind}` (ball|shell)")),
        };
        boxes.push(format!("{kind}:{level}"));
        parsed.push((ball, level));
    }
    if parsed.is_empty() {
        return Err("no boxes".into());
    }
    Ok(BoxRecord { coef, boxes, parsed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sample() {
        let raw = RawConfig::parse(
            "q = 3 # residue field\nN = 5\nc_exp = 1\nalpha_exp = 2\nbox = 1 : ball:0 ball:0 ball:0\nbox = -2/3*z^1 : ball:1 shell:0 ball:-1\n",
        )
        .unwrap();
        let cfg = raw.validate().unwrap();
        assert_eq!((cfg.q, cfg.n, cfg.c_exp, cfg.alpha_exp), (3, 5, 1, 2));
        assert_eq!(cfg.boxes.len(), 2);
        assert_eq!(cfg.boxes[1].coef, Coef { ratio: "-2/3".into(), zeta: 1 });
        assert_eq!(cfg.boxes[1].parsed, vec![(true, 1), (false, 0), (true, -1)]);
        assert_eq!(cfg.dim(), Some(3));
    }

    #[test]
    fn field_level_errors() {
        let e = RawConfig::parse("q = 3\nfoo = 1\n").unwrap_err();
        assert_eq!(e.field, "foo");
        let e = RawConfig::parse("q = x\n").unwrap().validate().unwrap_err();
        assert_eq!(e.field, "q");
        let e = RawConfig::parse("q = 3\nbox = 1 : ball:0\nbox = 1 : ball:0 ball:1\n").unwrap().validate().unwrap_err();
        assert_eq!(e.field, "box[1]");
        let e = RawConfig::parse("q = 3\ndm_source = explicit\nc1 = 1/2\n").unwrap().validate().unwrap_err();
        assert_eq!(e.field, "c2");
        let e = RawConfig::parse("q = 3\nt0 = 1.5\n").unwrap().validate().unwrap_err();
        assert_eq!(e.field, "t0");
    }
}

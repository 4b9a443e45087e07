//! JSON variety descriptors and the named standard catalog.

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rings::{make_ring, rational_string, univariate, Ring, RingKind};
use crate::Rational;

/// `{"kind", "n", "p_coefficients", "lines"}`; rationals as `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<[String; 2]>>,
}

fn rational(s: &str) -> Result<Rational> {
    s.trim().parse().map_err(|_| Error::InvalidDescriptor(format!("`{s}` is not a rational number")))
}

fn strings(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(rational_string).collect()
}

impl Descriptor {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidDescriptor(e.to_string()))
    }

    pub fn to_kind(&self) -> Result<RingKind> {
        let need_n = || self.n.ok_or_else(|| Error::InvalidDescriptor(format!("kind `{}` needs \"n\"", self.kind)));
        match self.kind.as_str() {
            "affine_space" => Ok(RingKind::AffineSpace { n: need_n()? }),
            "torus" => Ok(RingKind::Torus { n: need_n()? }),
            "danielewski" => {
                let p = self
                    .p_coefficients
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDescriptor("danielewski needs \"p_coefficients\"".into()))?;
                Ok(RingKind::Danielewski { p: p.iter().map(|c| rational(c)).collect::<Result<_>>()? })
            }
            "line_complement" => {
                let ls = self
                    .lines
                    .as_ref()
                    .ok_or_else(|| Error::InvalidDescriptor("line_complement needs \"lines\"".into()))?;
                let lines = ls.iter().map(|[a, b]| Ok([rational(a)?, rational(b)?])).collect::<Result<_>>()?;
                Ok(RingKind::LineComplement { lines })
            }
            other => Err(Error::InvalidDescriptor(format!("unknown kind `{other}`"))),
        }
    }

    pub fn ring(&self) -> Result<Ring> {
        make_ring(self.to_kind()?)
    }

    pub fn from_kind(kind: &RingKind) -> Self {
        let base = |k: &str| Descriptor { kind: k.into(), n: None, p_coefficients: None, lines: None };
        match kind {
            RingKind::AffineSpace { n } => Descriptor { n: Some(*n), ..base("affine_space") },
            RingKind::Torus { n } => Descriptor { n: Some(*n), ..base("torus") },
            RingKind::Danielewski { p } => Descriptor { p_coefficients: Some(strings(p)), ..base("danielewski") },
            RingKind::LineComplement { lines } => Descriptor {
                lines: Some(lines.iter().map(|[a, b]| [rational_string(a), rational_string(b)]).collect()),
                ..base("line_complement")
            },
        }
    }

    pub fn affine_space(n: usize) -> Self {
        Self::from_kind(&RingKind::AffineSpace { n })
    }

    pub fn torus(n: usize) -> Self {
        Self::from_kind(&RingKind::Torus { n })
    }

    /// `uv = z(z − 1)…(z − d + 1)`.
    pub fn danielewski(d: usize) -> Self {
        let mut p = vec![Rational::one()];
        for r in 0..d {
            p = univariate::mul(&p, &[Rational::from_integer(num::BigInt::from(-(r as i64))), Rational::one()]);
        }
        Self::from_kind(&RingKind::Danielewski { p })
    }

    /// The first `k` of the lines `x, y, x + y, x − y, x + 2y, …`.
    pub fn line_complement(k: usize) -> Self {
        let q = |n: i64| Rational::from_integer(n.into());
        let mut lines = vec![[q(1), q(0)], [q(0), q(1)]];
        let mut s = 1;
        while lines.len() < k {
            lines.push([q(1), q(s)]);
            if lines.len() < k && s > 0 {
                lines.push([q(1), q(-s)]);
            }
            s += 1;
        }
        lines.truncate(k);
        Self::from_kind(&RingKind::LineComplement { lines })
    }
}

/// Names accepted by [`catalog_entry`].
pub fn catalog_names() -> Vec<String> {
    let mut out = vec!["affine2".to_string(), "affine3".into(), "torus2".into()];
    out.extend((1..=5).map(|d| format!("danielewski{d}")));
    out.extend((2..=4).map(|k| format!("lines{k}")));
    out
}

pub fn catalog_entry(name: &str) -> Option<Descriptor> {
    let split = name.find(|c: char| c.is_ascii_digit())?;
    let (stem, num) = name.split_at(split);
    let k: usize = num.parse().ok()?;
    match stem {
        "affine" if k >= 1 => Some(Descriptor::affine_space(k)),
        "torus" if k >= 1 => Some(Descriptor::torus(k)),
        "danielewski" if k >= 1 => Some(Descriptor::danielewski(k)),
        "lines" if k >= 1 => Some(Descriptor::line_complement(k)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for name in catalog_names() {
            let d = catalog_entry(&name).unwrap();
            let ring = d.ring().unwrap();
            assert_eq!(Descriptor::from_kind(ring.kind()), d);
            let s = serde_json::to_string(&d).unwrap();
            assert_eq!(Descriptor::from_json_str(&s).unwrap(), d);
        }
    }

    #[test]
    fn parses_documented_format() {
        let d = Descriptor::from_json_str(r#"{"kind":"danielewski","p_coefficients":["0","-1/2","1"]}"#).unwrap();
        assert_eq!(d.ring().unwrap().danielewski_p().unwrap().len(), 3);
        let d = Descriptor::from_json_str(r#"{"kind":"line_complement","lines":[["1","0"],["0","1"],["1","1"]]}"#).unwrap();
        assert_eq!(d, Descriptor::line_complement(3));
    }

    #[test]
    fn rejects_bad_descriptors() {
        for s in [
            r#"{"kind":"sphere","n":2}"#,
            r#"{"kind":"torus"}"#,
            r#"{"kind":"danielewski","p_coefficients":["0","0","1"]}"#,
            r#"{"kind":"line_complement","lines":[["1","1"],["2","2"]]}"#,
            r#"{"kind":"torus","n":2,"colour":"red"}"#,
            r#"{"kind":"danielewski","p_coefficients":["x"]}"#,
        ] {
            let r = Descriptor::from_json_str(s).and_then(|d| d.ring());
            assert!(r.is_err(), "{s}");
        }
    }
}

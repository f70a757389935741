//! Ring and field specifications as accepted on the command line.

use std::fmt;
use std::str::FromStr;

use discval::rings::{is_prime, DvrDescriptor};
use discval::Error;

/// `Z`, `Q`, `Zp:p`, `Fpt:p`, `Fq:p` or `Fq:p^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Rationals,
    Dvr(DvrDescriptor),
    Prime(u64),
    Extension(u64, usize),
}

impl RingSpec {
    pub fn dvr(self) -> Option<DvrDescriptor> {
        match self {
            RingSpec::Dvr(d) => Some(d),
            _ => None,
        }
    }

    /// The prime of a finite field or of a residue field.
    pub fn prime(self) -> Option<u64> {
        match self {
            RingSpec::Dvr(d) => Some(d.prime()),
            RingSpec::Prime(p) | RingSpec::Extension(p, _) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("Z"),
            RingSpec::Rationals => f.write_str("Q"),
            RingSpec::Dvr(d) => write!(f, "{d}"),
            RingSpec::Prime(p) => write!(f, "Fq:{p}"),
            RingSpec::Extension(p, m) => write!(f, "Fq:{p}^{m}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "Z" | "ZZ" => return Ok(RingSpec::Integers),
            "Q" | "QQ" => return Ok(RingSpec::Rationals),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("Fq:") {
            let bad = || Error::InvalidInput(format!("field spec {s:?} is not Fq:p or Fq:p^m"));
            let (p, m) = match rest.split_once('^') {
                Some((p, m)) => (p.parse::<u64>().map_err(|_| bad())?, m.parse::<usize>().map_err(|_| bad())?),
                None => (rest.parse::<u64>().map_err(|_| bad())?, 1),
            };
            if !is_prime(p) || m == 0 {
                return Err(bad());
            }
            return Ok(if m == 1 { RingSpec::Prime(p) } else { RingSpec::Extension(p, m) });
        }
        s.parse::<DvrDescriptor>().map(RingSpec::Dvr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["Z", "Q", "Zp:5", "Fpt:3", "Fq:7", "Fq:2^3"] {
            assert_eq!(s.parse::<RingSpec>().unwrap().to_string(), s);
        }
        for s in ["Fq:6", "Zp:4", "Fq:2^0", "R", "Fq:"] {
            assert!(s.parse::<RingSpec>().is_err(), "{s}");
        }
    }
}

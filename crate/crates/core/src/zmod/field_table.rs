use std::collections::BTreeMap;
use std::path::Path;

use super::GaloisField;
use crate::error::{Error, Result};

/// Environment variable naming a replacement modulus table.
pub const FIELD_TABLE_ENV: &str = "MUBFORGE_FIELD_TABLE";

const BUILTIN: &str = include_str!("../../data/field_moduli.txt");

/// Fixed modulus polynomials keyed by `(p, n)`.
///
/// The format is documented in `data/field_moduli.txt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    entries: BTreeMap<(u32, usize), Vec<u32>>,
}

impl FieldTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("shipped field table parses")
    }

    /// The table named by `MUBFORGE_FIELD_TABLE`, or the builtin one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(FIELD_TABLE_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::FieldTableParse {
            line: 0,
            reason: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::FieldTableParse {
                line: lineno + 1,
                reason,
            };
            let nums: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| err(format!("{t:?}: {e}"))))
                .collect::<Result<_>>()?;
            let [p, n, coeffs @ ..] = nums.as_slice() else {
                return Err(err("expected `p n c_0 ... c_n`".into()));
            };
            let n = *n as usize;
            if coeffs.len() != n + 1 {
                return Err(err(format!(
                    "expected {} coefficients, found {}",
                    n + 1,
                    coeffs.len()
                )));
            }
            if entries.insert((*p, n), coeffs.to_vec()).is_some() {
                return Err(err(format!("duplicate entry for GF({p}^{n})")));
            }
        }
        Ok(Self { entries })
    }

    pub fn set(&mut self, p: u32, modulus: Vec<u32>) {
        let n = modulus.len().saturating_sub(1);
        self.entries.insert((p, n), modulus);
    }

    pub fn fields(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.entries.keys().copied()
    }

    /// Builds GF(p^n). Only the shape of the modulus is validated here.
    pub fn field(&self, p: u32, n: usize) -> Result<GaloisField> {
        let modulus = self
            .entries
            .get(&(p, n))
            .ok_or(Error::MissingField { p, n })?;
        GaloisField::new(p, modulus.clone())
    }
}

impl Default for FieldTable {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_covers_required_fields() {
        let table = FieldTable::builtin();
        for p in [2, 3, 5, 7] {
            for n in 1..=6 {
                let f = table.field(p, n).unwrap();
                assert_eq!(f.order(), (p as usize).pow(n as u32));
            }
        }
        assert!(table.field(2, 8).is_ok());
        assert_eq!(table.field(11, 1), Err(Error::MissingField { p: 11, n: 1 }));
    }

    #[test]
    fn every_builtin_modulus_is_primitive() {
        // x generates the multiplicative group, which forces irreducibility.
        let table = FieldTable::builtin();
        for (p, n) in table.fields() {
            let f = table.field(p, n).unwrap();
            let q = f.order() as u64;
            let x = f.generator();
            assert_eq!(f.pow(&x, q - 1), f.one(), "{f}");
            let mut m = q - 1;
            let mut d = 2;
            while m > 1 {
                if m.is_multiple_of(d) {
                    assert_ne!(
                        f.pow(&x, (q - 1) / d),
                        f.one(),
                        "{f}: order divides (q-1)/{d}"
                    );
                    while m.is_multiple_of(d) {
                        m /= d;
                    }
                }
                d += 1;
            }
        }
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = FieldTable::parse("# header\n2 2 1 1\n").unwrap_err();
        assert!(matches!(err, Error::FieldTableParse { line: 2, .. }));
        assert!(FieldTable::parse("2 1 1 1\n2 1 0 1\n").is_err());
        assert!(FieldTable::parse("2 x 1\n").is_err());
    }
}

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpoly::MPoly;

/// `X_i -> X_i + X1^{d^{i-1}}` for `i >= 2`, and its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KroneckerMap {
    pub arity: usize,
    pub d: u32,
}

impl KroneckerMap {
    pub fn new(arity: usize, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("Kronecker parameter d must be at least 2"));
        }
        if arity == 0 {
            return Err(Error::invalid("Kronecker map needs at least one variable"));
        }
        let top = u64::from(d).checked_pow(arity as u32 - 1);
        if top.is_none_or(|t| t > u64::from(u32::MAX)) {
            return Err(Error::DeskScale(
                "Kronecker exponents exceed 32 bits".into(),
            ));
        }
        Ok(KroneckerMap { arity, d })
    }

    fn shift(&self, var: usize, sign: i64) -> MPoly {
        let mut e = vec![0u32; self.arity];
        e[0] = self.d.pow(var as u32);
        let x1_pow = MPoly::from_terms(self.arity, [(e, crate::rat::int(sign))]);
        &MPoly::var(self.arity, var) + &x1_pow
    }

    fn apply(&self, f: &MPoly, sign: i64) -> Result<MPoly> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: f.arity(),
            });
        }
        let mut out = f.clone();
        for var in 1..self.arity {
            out = out.substitute(var, &self.shift(var, sign))?;
        }
        Ok(out)
    }

    pub fn forward(&self, f: &MPoly) -> Result<MPoly> {
        self.apply(f, 1)
    }

    pub fn backward(&self, f: &MPoly) -> Result<MPoly> {
        self.apply(f, -1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_mpoly;

    fn m(s: &str) -> MPoly {
        parse_mpoly(s, Some(2)).unwrap()
    }

    #[test]
    fn examples() {
        let k = KroneckerMap::new(2, 2).unwrap();
        assert_eq!(k.forward(&m("X2")).unwrap(), m("X2 + X1^2"));
        let f = k.forward(&m("X1*X2")).unwrap();
        assert_eq!(f, m("X1*X2 + X1^3"));
        assert_eq!(f.total_degree(), Some(3));
        assert_eq!(k.backward(&f).unwrap(), m("X1*X2"));
        assert!(KroneckerMap::new(2, 1).is_err());
    }

    #[test]
    fn three_variables() {
        let k = KroneckerMap::new(3, 3).unwrap();
        let x3 = parse_mpoly("X3", Some(3)).unwrap();
        assert_eq!(
            k.forward(&x3).unwrap(),
            parse_mpoly("X3 + X1^9", Some(3)).unwrap()
        );
    }
}

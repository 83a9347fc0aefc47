use std::fmt;

use smallvec::SmallVec;

/// A power product `x0^a0 * ... * x{n-1}^a{n-1}` of fixed arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    exps: SmallVec<[u32; 6]>,
    deg: u32,
}

impl Term {
    pub fn new<I: IntoIterator<Item = u32>>(exps: I) -> Self {
        let exps: SmallVec<[u32; 6]> = exps.into_iter().collect();
        let deg = exps.iter().sum();
        Self { exps, deg }
    }

    /// The term 1.
    pub fn one(nvars: usize) -> Self {
        Self {
            exps: SmallVec::from_elem(0, nvars),
            deg: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, e: u32) -> Self {
        assert!(i < nvars, "variable x{i} out of range for {nvars} variables");
        let mut exps = SmallVec::from_elem(0, nvars);
        exps[i] = e;
        Self { exps, deg: e }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Term) -> Term {
        debug_assert_eq!(self.arity(), other.arity());
        Term {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            deg: self.deg + other.deg,
        }
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Term) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Term) -> Option<Term> {
        if !self.divides(other) {
            return None;
        }
        Some(Term {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            deg: other.deg - self.deg,
        })
    }

    pub fn lcm(&self, other: &Term) -> Term {
        Term::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)))
    }

    pub fn is_coprime(&self, other: &Term) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_and_lcm() {
        let a = Term::new([1, 2, 0]);
        let b = Term::new([2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), Some(Term::new([1, 0, 1])));
        assert_eq!(a.lcm(&Term::new([0, 3, 1])), Term::new([1, 3, 1]));
        assert!(Term::new([2, 0]).is_coprime(&Term::new([0, 2])));
        assert!(!a.is_coprime(&b));
        assert_eq!(b.to_string(), "x0^2*x1^2*x2");
        assert_eq!(Term::one(2).to_string(), "1");
    }
}

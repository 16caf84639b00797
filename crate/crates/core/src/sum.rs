//! Finite linear combinations with rational coefficients over canonical keys.
//!
//! Carries coproduct outputs (tensor terms) and the workspace sums produced
//! by Merge, assembly, and the Distributed Morphology rewrites. Zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::tree::Forest;

/// A finite linear combination of `K`-terms with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum<K: Ord + Clone>(BTreeMap<K, Rational64>);

impl<K: Ord + Clone> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum(BTreeMap::new())
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn singleton(key: K) -> Self {
        let mut s = Self::zero();
        s.add_term(key, Rational64::from_integer(1));
        s
    }

    pub fn add_term(&mut self, key: K, coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let new = self.coeff(&key) + coeff;
        if new.is_zero() {
            self.0.remove(&key);
        } else {
            self.0.insert(key, new);
        }
    }

    pub fn add_one(&mut self, key: K) {
        self.add_term(key, Rational64::from_integer(1));
    }

    pub fn add(&mut self, other: &FormalSum<K>) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), *c);
        }
    }

    pub fn scaled(&self, by: Rational64) -> FormalSum<K> {
        let mut out = FormalSum::zero();
        for (k, c) in self.iter() {
            out.add_term(k.clone(), *c * by);
        }
        out
    }

    pub fn coeff(&self, key: &K) -> Rational64 {
        self.0.get(key).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational64)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> Vec<&K> {
        self.0.keys().collect()
    }

    /// Same support, every coefficient 1.
    pub fn support_sum(&self) -> FormalSum<K> {
        let mut out = FormalSum::zero();
        for k in self.0.keys() {
            out.add_term(k.clone(), Rational64::from_integer(1));
        }
        out
    }

    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> FormalSum<L> {
        let mut out = FormalSum::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), *c);
        }
        out
    }

    /// Bilinear product: combines every pair of terms with `f` and
    /// multiplies coefficients.
    pub fn product_with<K2: Ord + Clone, L: Ord + Clone>(
        &self,
        other: &FormalSum<K2>,
        f: impl Fn(&K, &K2) -> L,
    ) -> FormalSum<L> {
        let mut out = FormalSum::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(f(a, b), *ca * *cb);
            }
        }
        out
    }

    /// Monadic extension: replaces each term by a whole sum, scaled by the
    /// term's coefficient.
    pub fn flat_map<L: Ord + Clone>(&self, f: impl Fn(&K) -> FormalSum<L>) -> FormalSum<L> {
        let mut out = FormalSum::zero();
        for (k, c) in self.iter() {
            out.add(&f(k).scaled(*c));
        }
        out
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            if *c == Rational64::from_integer(1) {
                write!(f, "{k}")?;
            } else {
                write!(f, "{c}·{k}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// A tensor term `left ⊗ right` of a workspace coproduct.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tensor {
    pub left: Forest,
    pub right: Forest,
}

impl Tensor {
    pub fn new(left: Forest, right: Forest) -> Self {
        Tensor { left, right }
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.left, self.right)
    }
}

/// A sum of workspaces.
pub type WorkspaceSum = FormalSum<Forest>;

/// A sum of coproduct tensor terms.
pub type TensorSum = FormalSum<Tensor>;

/// A triple tensor, used by the coassociativity and comodule law checks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tensor3(pub Forest, pub Forest, pub Forest);

impl fmt::Display for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {} ⊗ {}", self.0, self.1, self.2)
    }
}

pub type Tensor3Sum = FormalSum<Tensor3>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Tree;

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = Forest::singleton(Tree::atom("a"));
        let mut s = WorkspaceSum::zero();
        s.add_term(a.clone(), Rational64::from_integer(2));
        s.add_term(a.clone(), Rational64::from_integer(-2));
        assert!(s.is_zero());
        assert_eq!(s.coeff(&a), Rational64::zero());
    }

    #[test]
    fn product_multiplies_coefficients() {
        let a = Forest::singleton(Tree::atom("a"));
        let b = Forest::singleton(Tree::atom("b"));
        let mut s = WorkspaceSum::zero();
        s.add_term(a.clone(), Rational64::from_integer(2));
        let mut t = WorkspaceSum::zero();
        t.add_term(b.clone(), Rational64::from_integer(3));
        let p = s.product_with(&t, |x, y| x.union(y));
        assert_eq!(p.coeff(&a.union(&b)), Rational64::from_integer(6));
    }
}

//! Leaf and internal-vertex label vocabulary shared by every tree flavor.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A lexical item or syntactic feature drawn from the configured inventory.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SynAtom(pub String);

impl SynAtom {
    pub fn new(name: impl Into<String>) -> Self {
        SynAtom(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for SynAtom {
    fn from(s: &str) -> Self {
        SynAtom(s.to_string())
    }
}

/// Valuation of a morphological feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Plus,
    Minus,
    Unvalued,
}

impl Valuation {
    pub fn suffix(self) -> char {
        match self {
            Valuation::Plus => '+',
            Valuation::Minus => '-',
            Valuation::Unvalued => 'u',
        }
    }

    pub fn from_suffix(c: char) -> Option<Self> {
        match c {
            '+' => Some(Valuation::Plus),
            '-' => Some(Valuation::Minus),
            'u' => Some(Valuation::Unvalued),
            _ => None,
        }
    }
}

/// A single morphological feature: a category plus its valuation.
///
/// `[+PL]` and `[uPL]` are distinct features; equality is on the pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Feature {
    pub category: String,
    pub valuation: Valuation,
}

impl Feature {
    pub fn new(category: impl Into<String>, valuation: Valuation) -> Self {
        Feature { category: category.into(), valuation }
    }

    /// Shorthand for a plus-valued feature, the default in worked examples.
    pub fn plus(category: impl Into<String>) -> Self {
        Feature::new(category, Valuation::Plus)
    }

    pub fn unvalued(category: impl Into<String>) -> Self {
        Feature::new(category, Valuation::Unvalued)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.category, self.valuation.suffix())
    }
}

/// A finite set of features labeling a morphological vertex.
///
/// Set semantics: combining two bundles takes the union, not the disjoint
/// union, so shared features are absorbed.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureBundle(pub BTreeSet<Feature>);

impl FeatureBundle {
    pub fn new() -> Self {
        FeatureBundle(BTreeSet::new())
    }

    pub fn singleton(f: Feature) -> Self {
        FeatureBundle(BTreeSet::from([f]))
    }

    pub fn from_features<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        FeatureBundle(iter.into_iter().collect())
    }

    pub fn union(&self, other: &FeatureBundle) -> FeatureBundle {
        FeatureBundle(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &FeatureBundle) -> FeatureBundle {
        FeatureBundle(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &FeatureBundle) -> FeatureBundle {
        FeatureBundle(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &FeatureBundle) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &FeatureBundle) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn contains(&self, f: &Feature) -> bool {
        self.0.contains(f)
    }

    pub fn insert(&mut self, f: Feature) {
        self.0.insert(f);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Feature> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Feature> for FeatureBundle {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        FeatureBundle(iter.into_iter().collect())
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for feat in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{feat}")?;
            first = false;
        }
        Ok(())
    }
}

/// Label of a leaf vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LeafLabel {
    /// A lexical item or syntactic feature.
    Atom { atom: SynAtom },
    /// A morphological feature.
    Feature { feature: Feature },
    /// A syntax-morphology boundary vertex whose morphological content is a
    /// single feature (the root bundle is then a singleton).
    Boundary { bundle: FeatureBundle, atom: SynAtom },
    /// An unlabeled operad input.
    Hole,
    /// The trace of an extracted subtree; the payload is the canonical
    /// encoding of what was removed.
    Trace { origin: String },
}

/// Label of an internal (unary or binary) vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InternalLabel {
    /// A morphological feature bundle.
    Bundle { bundle: FeatureBundle },
    /// A syntax-morphology boundary vertex with morphological structure below.
    Boundary { bundle: FeatureBundle, atom: SynAtom },
}

impl InternalLabel {
    pub fn bundle(&self) -> &FeatureBundle {
        match self {
            InternalLabel::Bundle { bundle } | InternalLabel::Boundary { bundle, .. } => bundle,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_equality_distinguishes_valuations() {
        let plus = Feature::plus("PL");
        let unvalued = Feature::unvalued("PL");
        assert_ne!(plus, unvalued);
        let b = FeatureBundle::from_features([plus.clone(), unvalued.clone()]);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn bundle_union_absorbs_shared_features() {
        let a = FeatureBundle::from_features([Feature::plus("alpha"), Feature::plus("phi")]);
        let b = FeatureBundle::from_features([Feature::plus("beta"), Feature::plus("phi")]);
        let u = a.union(&b);
        assert_eq!(u.len(), 3);
        assert_eq!(u.to_string(), "alpha+,beta+,phi+");
    }
}

//! Morphological features and bundles, the bundle-labeled magma, extended
//! morphological objects with non-branching vertices, and the morphological
//! workspace coproduct with its comodule laws.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use crate::label::{Feature, FeatureBundle, Valuation};
use crate::label::{InternalLabel, LeafLabel};
use crate::sum::{Tensor, Tensor3, Tensor3Sum, TensorSum};
use crate::tree::{
    nonoverlapping_vertex_sets, quotient, Forest, QuotientMode, Tree, TreeError, VertexId,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphError {
    #[error("unknown feature: {0}")]
    UnknownFeature(String),
    #[error("not a morphological object: {0}")]
    NotMorphological(String),
    #[error("invalid extended morphological object:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A magma term over features, used to spell out object constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphTerm {
    Feature(Feature),
    Merge(Box<MorphTerm>, Box<MorphTerm>),
}

impl MorphTerm {
    pub fn feature(f: Feature) -> Self {
        MorphTerm::Feature(f)
    }

    pub fn merge(a: MorphTerm, b: MorphTerm) -> Self {
        MorphTerm::Merge(Box::new(a), Box::new(b))
    }
}

/// An element of the morphological magma: a full binary tree with feature
/// leaves whose internal vertices carry the unions of their children's
/// bundles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphObject {
    tree: Tree,
}

impl MorphObject {
    pub fn leaf(f: Feature) -> Self {
        MorphObject { tree: Tree::feature_leaf(f) }
    }

    /// The magma operation: union labeling applied by the merge itself.
    pub fn merge(a: &MorphObject, b: &MorphObject) -> MorphObject {
        let bundle = a.root_bundle().union(&b.root_bundle());
        MorphObject {
            tree: Tree::binary(
                Some(InternalLabel::Bundle { bundle }),
                a.tree.clone(),
                b.tree.clone(),
            ),
        }
    }

    /// Right-comb object over plus-valued features, a convenience for
    /// single-hierarchy bundles.
    pub fn from_nested(categories: &[&str]) -> MorphObject {
        assert!(!categories.is_empty());
        let mut it = categories.iter().rev();
        let mut obj = MorphObject::leaf(Feature::plus(*it.next().unwrap()));
        for c in it {
            obj = MorphObject::merge(&MorphObject::leaf(Feature::plus(*c)), &obj);
        }
        obj
    }

    /// Validate a raw tree as a magma element: full binary, feature leaves,
    /// every internal label the exact union of its children's.
    pub fn from_tree(tree: Tree) -> Result<Self, MorphError> {
        let tree = tree.canonicalize();
        if !tree.is_full_binary() {
            return Err(MorphError::NotMorphological(tree.to_string()));
        }
        fn check(t: &Tree) -> Result<FeatureBundle, MorphError> {
            match t {
                Tree::Leaf(LeafLabel::Feature { feature }) => {
                    Ok(FeatureBundle::singleton(feature.clone()))
                }
                Tree::Leaf(_) => Err(MorphError::NotMorphological(t.to_string())),
                Tree::Binary { label: Some(InternalLabel::Bundle { bundle }), left, right } => {
                    let u = check(left)?.union(&check(right)?);
                    if &u != bundle {
                        return Err(MorphError::NotMorphological(format!(
                            "vertex labeled {{{bundle}}} should carry {{{u}}}"
                        )));
                    }
                    Ok(u)
                }
                _ => Err(MorphError::NotMorphological(t.to_string())),
            }
        }
        check(&tree)?;
        Ok(MorphObject { tree })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root_bundle(&self) -> FeatureBundle {
        root_bundle(&self.tree)
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    pub fn as_extended(&self) -> ExtMorphObject {
        ExtMorphObject { tree: self.tree.clone() }
    }
}

impl fmt::Display for MorphObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tree)
    }
}

/// Build a morphological object from a magma term, computing bundle labels
/// bottom-up. Unknown features are rejected against `inventory` when given.
pub fn build_morph(term: &MorphTerm, inventory: Option<&BTreeSet<Feature>>) -> Result<MorphObject, MorphError> {
    match term {
        MorphTerm::Feature(f) => {
            if let Some(inv) = inventory {
                if !inv.contains(f) {
                    return Err(MorphError::UnknownFeature(f.to_string()));
                }
            }
            Ok(MorphObject::leaf(f.clone()))
        }
        MorphTerm::Merge(a, b) => {
            let a = build_morph(a, inventory)?;
            let b = build_morph(b, inventory)?;
            Ok(MorphObject::merge(&a, &b))
        }
    }
}

/// Root bundle of any bundle-labeled tree; a leaf counts as its singleton.
pub fn root_bundle(t: &Tree) -> FeatureBundle {
    match t {
        Tree::Leaf(LeafLabel::Feature { feature }) => FeatureBundle::singleton(feature.clone()),
        Tree::Leaf(LeafLabel::Boundary { bundle, .. }) => bundle.clone(),
        _ => t.label().map(|l| l.bundle().clone()).unwrap_or_default(),
    }
}

/// A binary-branching tree with feature leaves and bundle labels at every
/// internal vertex, satisfying monotonicity, covering and tightness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtMorphObject {
    tree: Tree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A vertex below another carries a bundle that is not contained in it.
    Monotonicity,
    /// A bundle misses a feature contributed by a leaf below it.
    Covering,
    /// A fully branching subtree carries extra features in its bundle.
    Tightness,
    /// Wrong label shape: non-feature leaf or unlabeled internal vertex.
    Shape,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::Monotonicity => write!(f, "monotonicity"),
            ViolationKind::Covering => write!(f, "covering"),
            ViolationKind::Tightness => write!(f, "tightness"),
            ViolationKind::Shape => write!(f, "shape"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub vertex: VertexId,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f,"{} at {}: {}", v.kind, v.vertex, v.detail)?;
        }
        Ok(())
    }
}

/// Check the three extended-object conditions vertex by vertex.
pub fn validate_ext(t: &Tree) -> ValidationReport {
    let mut report = ValidationReport::default();
    fn leaf_union(t: &Tree) -> FeatureBundle {
        match t {
            Tree::Leaf(LeafLabel::Feature { feature }) => FeatureBundle::singleton(feature.clone()),
            Tree::Leaf(_) => FeatureBundle::new(),
            _ => t
                .children()
                .iter()
                .fold(FeatureBundle::new(), |acc, c| acc.union(&leaf_union(c))),
        }
    }
    fn go(t: &Tree, at: &VertexId, report: &mut ValidationReport) {
        match t {
            Tree::Leaf(LeafLabel::Feature { .. }) => {}
            Tree::Leaf(_) => report.violations.push(Violation {
                vertex: at.clone(),
                kind: ViolationKind::Shape,
                detail: format!("leaf '{t}' is not a morphological feature"),
            }),
            _ => {
                let bundle = match t.label() {
                    Some(InternalLabel::Bundle { bundle }) => bundle.clone(),
                    _ => {
                        report.violations.push(Violation {
                            vertex: at.clone(),
                            kind: ViolationKind::Shape,
                            detail: "internal vertex lacks a feature bundle".into(),
                        });
                        FeatureBundle::new()
                    }
                };
                for (i, c) in t.children().into_iter().enumerate() {
                    let child_bundle = root_bundle(c);
                    if !child_bundle.is_subset(&bundle) {
                        report.violations.push(Violation {
                            vertex: at.child(i as u8),
                            kind: ViolationKind::Monotonicity,
                            detail: format!("{{{child_bundle}}} ⊄ {{{bundle}}}"),
                        });
                    }
                    go(c, &at.child(i as u8), report);
                }
                let union = leaf_union(t);
                if !union.is_subset(&bundle) {
                    report.violations.push(Violation {
                        vertex: at.clone(),
                        kind: ViolationKind::Covering,
                        detail: format!("leaf features {{{union}}} ⊄ {{{bundle}}}"),
                    });
                } else if !t.contains_unary() && bundle != union {
                    report.violations.push(Violation {
                        vertex: at.clone(),
                        kind: ViolationKind::Tightness,
                        detail: format!("fully branching subtree labeled {{{bundle}}} ≠ {{{union}}}"),
                    });
                }
            }
        }
    }
    go(t, &VertexId::root(), &mut report);
    report
}

impl ExtMorphObject {
    pub fn from_tree(tree: Tree) -> Result<Self, MorphError> {
        let tree = tree.canonicalize();
        let report = validate_ext(&tree);
        if !report.is_valid() {
            return Err(MorphError::Invalid(report));
        }
        Ok(ExtMorphObject { tree })
    }

    /// A single feature leaf, the smallest extended object.
    pub fn leaf(f: Feature) -> Self {
        ExtMorphObject { tree: Tree::feature_leaf(f) }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root_bundle(&self) -> FeatureBundle {
        root_bundle(&self.tree)
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    /// True when the object is also a magma element (full binary).
    pub fn is_plain(&self) -> bool {
        self.tree.is_full_binary()
    }
}

impl fmt::Display for ExtMorphObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tree)
    }
}

/// A forest of extended morphological objects.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphWorkspace {
    components: Vec<ExtMorphObject>,
}

impl MorphWorkspace {
    pub fn unit() -> Self {
        MorphWorkspace::default()
    }

    pub fn from_objects<I: IntoIterator<Item = ExtMorphObject>>(iter: I) -> Self {
        let mut components: Vec<ExtMorphObject> = iter.into_iter().collect();
        components.sort_by(|a, b| a.tree.cmp(&b.tree));
        MorphWorkspace { components }
    }

    pub fn from_forest(f: &Forest) -> Result<Self, MorphError> {
        let objs: Result<Vec<ExtMorphObject>, MorphError> =
            f.components().iter().map(|t| ExtMorphObject::from_tree(t.clone())).collect();
        Ok(MorphWorkspace::from_objects(objs?))
    }

    pub fn components(&self) -> &[ExtMorphObject] {
        &self.components
    }

    pub fn to_forest(&self) -> Forest {
        Forest::from_trees(self.components.iter().map(|o| o.tree.clone()))
    }

    pub fn total_leaves(&self) -> usize {
        self.components.iter().map(|c| c.leaf_count()).sum()
    }
}

impl fmt::Display for MorphWorkspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_forest())
    }
}

/// The ρ-admissible extraction sets of one component: non-overlapping vertex
/// sets whose removal leaves every internal vertex with at least one child.
pub(crate) fn rho_extractions(t: &Tree) -> Vec<(std::collections::BTreeSet<VertexId>, Forest, Option<Tree>)> {
    let mut out = Vec::new();
    for set in nonoverlapping_vertex_sets(t) {
        match quotient(t, &set, QuotientMode::Rho) {
            Ok(right) => {
                let left = Forest::from_trees(
                    set.iter().map(|v| t.subtree(v).expect("enumerated").clone()),
                );
                out.push((set, left, right));
            }
            Err(TreeError::WouldOrphan(_)) => {}
            Err(e) => panic!("unexpected quotient failure: {e}"),
        }
    }
    out
}

/// The coproduct `Δ^ρ` on morphological workspaces: extracted forest on the
/// left, the unary-keeping quotient on the right, multiplicative across
/// components.
pub fn coproduct_rho(ws: &MorphWorkspace) -> TensorSum {
    coproduct_rho_forest(&ws.to_forest())
}

/// `Δ^ρ` on a raw forest of bundle-labeled trees.
pub fn coproduct_rho_forest(ws: &Forest) -> TensorSum {
    let mut sum = TensorSum::singleton(Tensor::new(Forest::unit(), Forest::unit()));
    for comp in ws.components() {
        let mut comp_sum = TensorSum::zero();
        for (_, left, right) in rho_extractions(comp) {
            let right_forest = match right {
                Some(t) => Forest::singleton(t),
                None => Forest::unit(),
            };
            comp_sum.add_one(Tensor::new(left, right_forest));
        }
        sum = sum.product_with(&comp_sum, |a, b| {
            Tensor::new(a.left.union(&b.left), a.right.union(&b.right))
        });
    }
    sum
}

/// Outcome of the comodule law checks on a sample workspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleReport {
    pub right_comodule: bool,
    pub counit: bool,
    pub bicomodule: bool,
    pub left_channels_plain: bool,
}

impl ComoduleReport {
    pub fn all_hold(&self) -> bool {
        self.right_comodule && self.counit && self.bicomodule && self.left_channels_plain
    }
}

/// Verify the right-comodule law, the counit law, and the bicomodule
/// compatibility with `ρ_L = 1 ⊗ id` on a sample workspace by term-by-term
/// expansion.
pub fn check_comodule(sample: &MorphWorkspace) -> ComoduleReport {
    let f = sample.to_forest();
    let rho = coproduct_rho_forest(&f);

    // left channels of Δ^ρ on magma elements stay in the magma
    let plain_input = f.components().iter().all(|t| t.is_full_binary());
    let left_channels_plain = !plain_input
        || rho.iter().all(|(t, _)| t.left.components().iter().all(|c| c.is_full_binary()));

    // (ρ_R ⊗ id) ∘ ρ_R
    let mut lhs = Tensor3Sum::zero();
    for (t, c) in rho.iter() {
        for (t2, c2) in coproduct_rho_forest(&t.left).iter() {
            lhs.add_term(Tensor3(t2.left.clone(), t2.right.clone(), t.right.clone()), *c * *c2);
        }
    }
    // (id ⊗ Δ^ρ) ∘ ρ_R
    let mut rhs = Tensor3Sum::zero();
    for (t, c) in rho.iter() {
        for (t2, c2) in coproduct_rho_forest(&t.right).iter() {
            rhs.add_term(Tensor3(t.left.clone(), t2.left.clone(), t2.right.clone()), *c * *c2);
        }
    }
    let right_comodule = lhs == rhs;

    // (id ⊗ ε) ∘ ρ_R = id
    let mut counit_sum = crate::sum::WorkspaceSum::zero();
    for (t, c) in rho.iter() {
        if t.right.is_unit() {
            counit_sum.add_term(t.left.clone(), *c);
        }
    }
    let counit = counit_sum == crate::sum::WorkspaceSum::singleton(f.clone());

    // (id_C ⊗ ρ_R) ∘ ρ_L = (ρ_L ⊗ id_C) ∘ ρ_R, with ρ_L = 1 ⊗ id
    let mut left_path = Tensor3Sum::zero();
    for (t, c) in rho.iter() {
        left_path.add_term(Tensor3(Forest::unit(), t.left.clone(), t.right.clone()), *c);
    }
    let mut right_path = Tensor3Sum::zero();
    for (t, c) in rho.iter() {
        right_path.add_term(Tensor3(Forest::unit(), t.left.clone(), t.right.clone()), *c);
    }
    let bicomodule = left_path == right_path;

    ComoduleReport { right_comodule, counit, bicomodule, left_channels_plain }
}

/// Contract every unary vertex that adds nothing: its bundle equals the
/// child's bundle (a leaf counts as its singleton). Idempotent.
pub fn simplify_unary(obj: &ExtMorphObject) -> ExtMorphObject {
    fn go(t: &Tree) -> Tree {
        match t {
            Tree::Leaf(_) => t.clone(),
            Tree::Unary { label, child } => {
                let c = go(child);
                let child_bundle = root_bundle(&c);
                match label {
                    Some(InternalLabel::Bundle { bundle }) if *bundle == child_bundle => c,
                    _ => Tree::unary(label.clone(), c),
                }
            }
            Tree::Binary { label, left, right } => {
                Tree::binary(label.clone(), go(left), go(right))
            }
        }
    }
    ExtMorphObject { tree: go(&obj.tree) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_tree, LeafContext};

    fn feat(c: &str) -> Feature {
        Feature::plus(c)
    }

    fn ext(text: &str) -> ExtMorphObject {
        ExtMorphObject::from_tree(parse_tree(text, LeafContext::Morphology).unwrap()).unwrap()
    }

    #[test]
    fn build_morph_union_labels() {
        // eq-style golden: alpha merged over (beta, phi)
        let t = build_morph(
            &MorphTerm::merge(
                MorphTerm::feature(feat("alpha")),
                MorphTerm::merge(MorphTerm::feature(feat("beta")), MorphTerm::feature(feat("phi"))),
            ),
            None,
        )
        .unwrap();
        assert_eq!(t.to_string(), "{alpha+,beta+,phi+| alpha+ {beta+,phi+| beta+ phi+}}");

        // the shared phi is absorbed by the union
        let t2 = build_morph(
            &MorphTerm::merge(
                MorphTerm::merge(MorphTerm::feature(feat("alpha")), MorphTerm::feature(feat("phi"))),
                MorphTerm::merge(MorphTerm::feature(feat("beta")), MorphTerm::feature(feat("phi"))),
            ),
            None,
        )
        .unwrap();
        assert_eq!(t2.root_bundle().to_string(), "alpha+,beta+,phi+");

        // single feature
        let leaf = build_morph(&MorphTerm::feature(feat("phi")), None).unwrap();
        assert_eq!(leaf.to_string(), "phi+");

        // unknown feature rejected
        let inv = BTreeSet::from([feat("alpha")]);
        assert!(matches!(
            build_morph(&MorphTerm::feature(feat("zeta")), Some(&inv)),
            Err(MorphError::UnknownFeature(_))
        ));
    }

    #[test]
    fn validate_ext_conditions() {
        // quotient of the worked four-feature example is valid
        let q = parse_tree(
            "{alpha+,beta+,gamma+,delta+| alpha+ {beta+,gamma+,delta+| {gamma+,delta+| gamma+ delta+}}}",
            LeafContext::Morphology,
        )
        .unwrap();
        assert!(validate_ext(&q).is_valid());

        // full binary tree with an extra root feature violates tightness
        let t = parse_tree("{alpha+,beta+,zeta+| alpha+ beta+}", LeafContext::Morphology).unwrap();
        let report = validate_ext(&t);
        assert!(report.violations.iter().any(|v| v.kind == ViolationKind::Tightness));

        // unary vertex with a bundle smaller than its child's
        let t = parse_tree("{alpha+| {alpha+,beta+| alpha+ beta+}}", LeafContext::Morphology).unwrap();
        let report = validate_ext(&t);
        assert!(report.violations.iter().any(|v| v.kind == ViolationKind::Monotonicity));
    }

    #[test]
    fn rho_coproduct_of_leaf() {
        let ws = MorphWorkspace::from_objects([ExtMorphObject::leaf(feat("phi"))]);
        let sum = coproduct_rho(&ws);
        assert_eq!(sum.len(), 2);
    }

    #[test]
    fn rho_left_channels_stay_in_the_magma() {
        let obj = MorphObject::from_nested(&["alpha", "beta", "gamma"]);
        let ws = MorphWorkspace::from_objects([obj.as_extended()]);
        for (t, _) in coproduct_rho(&ws).iter() {
            for comp in t.left.components() {
                assert!(comp.is_full_binary());
            }
        }
    }

    #[test]
    fn comodule_laws_on_samples() {
        assert!(check_comodule(&MorphWorkspace::unit()).all_hold());
        for obj in [
            MorphObject::from_nested(&["alpha", "beta"]),
            MorphObject::from_nested(&["alpha", "beta", "gamma", "delta"]),
        ] {
            let ws = MorphWorkspace::from_objects([obj.as_extended()]);
            let report = check_comodule(&ws);
            assert!(report.all_hold(), "{report:?}");
        }
    }

    #[test]
    fn simplify_unary_examples() {
        let a = ext("{phi+,gamma+| {phi+| phi+} {gamma+| gamma+}}");
        assert_eq!(simplify_unary(&a).to_string(), "{gamma+,phi+| gamma+ phi+}");

        let b = ext("{phi+,alpha+,beta+| {phi+,alpha+| phi+ alpha+} {beta+| beta+}}");
        assert_eq!(
            simplify_unary(&b).to_string(),
            "{alpha+,beta+,phi+| beta+ {alpha+,phi+| alpha+ phi+}}"
        );

        // no unary vertices: unchanged; idempotent
        let c = ext("{alpha+,beta+| alpha+ beta+}");
        assert_eq!(simplify_unary(&c), c);
        assert_eq!(simplify_unary(&simplify_unary(&a)), simplify_unary(&a));

        // a unary vertex that adds features is kept
        let d = ext("{alpha+,phi+| alpha+}");
        assert_eq!(simplify_unary(&d), d);
        // but a nested no-op below it is still contracted
        let e = ext("{alpha+,phi+| {alpha+| alpha+}}");
        assert_eq!(simplify_unary(&e), d);
    }

    #[test]
    fn simplify_preserves_root_bundle_and_leaves() {
        let a = ext("{phi+,gamma+| {phi+| phi+} {gamma+| gamma+}}");
        let s = simplify_unary(&a);
        assert_eq!(a.root_bundle(), s.root_bundle());
        assert_eq!(a.leaf_count(), s.leaf_count());
    }
}

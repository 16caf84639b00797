//! The Merge operad, its algebra actions on syntactic and morphosyntactic
//! objects, the head-colored insertion operad, and the colored
//! correspondence that inserts morphological trees at syntactic leaves.
//!
//! Operad elements keep their construction (planar) child order internally:
//! leaf positions in depth-first order carry the argument assignment, which
//! is what makes the composition laws hold on the nose. Canonicalization
//! happens when elements or action results are compared.

use std::fmt;

use thiserror::Error;

use crate::label::{FeatureBundle, InternalLabel, LeafLabel, SynAtom};
use crate::morphosyntax::{Insertion, MorphoSynTree};
use crate::syntax::{head_atom, label_by_head, HeadFunction, SyntacticObject, SyntaxError};
use crate::tree::{Tree, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("arity mismatch: operation takes {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("input index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("color mismatch at leaf {leaf}: expected {expected}, found {found}")]
    ColorMismatch { leaf: VertexId, expected: SynAtom, found: SynAtom },
    #[error("feature correspondence violated at leaf {leaf}: ({bundle}, {atom}) is not licensed")]
    Match { leaf: VertexId, bundle: FeatureBundle, atom: SynAtom },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// An abstract `n`-ary Merge operation: a full binary tree with `n` hole
/// leaves. The unit is the single hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadElement {
    tree: Tree,
}

impl OperadElement {
    pub fn unit() -> Self {
        OperadElement { tree: Tree::hole() }
    }

    /// The binary generator: one vertex over two holes.
    pub fn pairing() -> Self {
        OperadElement { tree: Tree::binary_planar(None, Tree::hole(), Tree::hole()) }
    }

    /// Accepts a full binary tree whose leaves are all holes.
    pub fn from_tree(tree: Tree) -> Result<Self, OperadError> {
        fn ok(t: &Tree) -> bool {
            match t {
                Tree::Leaf(LeafLabel::Hole) => true,
                Tree::Binary { label: None, left, right } => ok(left) && ok(right),
                _ => false,
            }
        }
        if !ok(&tree) {
            return Err(OperadError::ArityMismatch { expected: 0, got: 0 });
        }
        Ok(OperadElement { tree })
    }

    pub fn arity(&self) -> usize {
        self.tree.leaf_count()
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// The underlying non-planar shape.
    pub fn shape(&self) -> Tree {
        self.tree.canonicalize()
    }

    pub fn same_shape(&self, other: &OperadElement) -> bool {
        self.shape() == other.shape()
    }
}

impl fmt::Display for OperadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tree)
    }
}

/// Replace the `index`-th (1-based, depth-first) leaf satisfying `pick`.
fn substitute_leaf(
    t: &Tree,
    index: &mut usize,
    pick: &impl Fn(&LeafLabel) -> bool,
    replacement: &Tree,
    done: &mut bool,
) -> Tree {
    if *done {
        return t.clone();
    }
    match t {
        Tree::Leaf(l) if pick(l) => {
            *index -= 1;
            if *index == 0 {
                *done = true;
                replacement.clone()
            } else {
                t.clone()
            }
        }
        Tree::Leaf(_) => t.clone(),
        Tree::Unary { label, child } => Tree::Unary {
            label: label.clone(),
            child: Box::new(substitute_leaf(child, index, pick, replacement, done)),
        },
        Tree::Binary { label, left, right } => {
            let l = substitute_leaf(left, index, pick, replacement, done);
            let r = substitute_leaf(right, index, pick, replacement, done);
            Tree::Binary { label: label.clone(), left: Box::new(l), right: Box::new(r) }
        }
    }
}

fn is_hole(l: &LeafLabel) -> bool {
    matches!(l, LeafLabel::Hole)
}

/// Saturating composition `γ`: feed the output of `parts[j]` into the `j`-th
/// input of `t`.
pub fn operad_compose(
    t: &OperadElement,
    parts: &[OperadElement],
) -> Result<OperadElement, OperadError> {
    if parts.len() != t.arity() {
        return Err(OperadError::ArityMismatch { expected: t.arity(), got: parts.len() });
    }
    // substitute right-to-left so earlier hole indices stay valid
    let mut tree = t.tree.clone();
    for (j, part) in parts.iter().enumerate().rev() {
        let mut index = j + 1;
        let mut done = false;
        tree = substitute_leaf(&tree, &mut index, &is_hole, &part.tree, &mut done);
        debug_assert!(done);
    }
    Ok(OperadElement { tree })
}

/// Single insertion `∘_i`: graft the root of `y` at the `i`-th input of `x`.
pub fn operad_insert(
    x: &OperadElement,
    i: usize,
    y: &OperadElement,
) -> Result<OperadElement, OperadError> {
    if i == 0 || i > x.arity() {
        return Err(OperadError::IndexOutOfRange { index: i, arity: x.arity() });
    }
    let mut index = i;
    let mut done = false;
    let tree = substitute_leaf(&x.tree, &mut index, &is_hole, &y.tree, &mut done);
    debug_assert!(done);
    Ok(OperadElement { tree })
}

/// The algebra action on syntactic objects: plug the root of `args[j]` into
/// the `j`-th input.
pub fn act_so(
    t: &OperadElement,
    args: &[SyntacticObject],
) -> Result<SyntacticObject, OperadError> {
    if args.len() != t.arity() {
        return Err(OperadError::ArityMismatch { expected: t.arity(), got: args.len() });
    }
    let mut tree = t.tree.clone();
    for (j, arg) in args.iter().enumerate().rev() {
        let mut index = j + 1;
        let mut done = false;
        tree = substitute_leaf(&tree, &mut index, &is_hole, arg.tree(), &mut done);
        debug_assert!(done);
    }
    Ok(SyntacticObject::from_tree(tree)?)
}

/// The algebra action on morphosyntactic trees, induced by the action on
/// their syntactic skeletons. Head functions are auxiliary data and are not
/// carried through.
pub fn act_ms(t: &OperadElement, args: &[MorphoSynTree]) -> Result<MorphoSynTree, OperadError> {
    if args.len() != t.arity() {
        return Err(OperadError::ArityMismatch { expected: t.arity(), got: args.len() });
    }
    let mut tree = t.tree.clone();
    for (j, arg) in args.iter().enumerate().rev() {
        let combined = arg.to_tree();
        let mut index = j + 1;
        let mut done = false;
        tree = substitute_leaf(&tree, &mut index, &is_hole, &combined, &mut done);
        debug_assert!(done);
    }
    MorphoSynTree::from_tree(tree.canonicalize())
        .map_err(|e| OperadError::Syntax(SyntaxError::NotSyntactic(e.to_string())))
}

/// A partially saturated operation: some inputs already filled with labeled
/// syntactic material, the rest still holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTree {
    tree: Tree,
}

impl MixedTree {
    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn holes(&self) -> usize {
        self.tree.leaves().iter().filter(|(_, l)| is_hole(l)).count()
    }

    pub fn labeled_leaves(&self) -> usize {
        self.tree.leaf_count() - self.holes()
    }

    pub fn shape(&self) -> Tree {
        self.tree.canonicalize()
    }

    /// Fill the `i`-th remaining hole with another syntactic object.
    pub fn insert_so(&self, i: usize, s: &SyntacticObject) -> Result<MixedTree, OperadError> {
        let arity = self.holes();
        if i == 0 || i > arity {
            return Err(OperadError::IndexOutOfRange { index: i, arity });
        }
        let mut index = i;
        let mut done = false;
        let tree = substitute_leaf(&self.tree, &mut index, &is_hole, s.tree(), &mut done);
        Ok(MixedTree { tree })
    }

    /// Once no holes remain, the result is a syntactic object.
    pub fn into_syntactic(self) -> Result<SyntacticObject, OperadError> {
        if self.holes() != 0 {
            return Err(OperadError::ArityMismatch { expected: 0, got: self.holes() });
        }
        Ok(SyntacticObject::from_tree(self.tree)?)
    }
}

impl fmt::Display for MixedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tree)
    }
}

/// Single insertion of a syntactic object at the `i`-th input: the filled
/// leaves are no longer open, so the result has `n − 1` holes and `m`
/// labeled leaves.
pub fn insert_so_at_leaf(
    t: &OperadElement,
    i: usize,
    s: &SyntacticObject,
) -> Result<MixedTree, OperadError> {
    if i == 0 || i > t.arity() {
        return Err(OperadError::IndexOutOfRange { index: i, arity: t.arity() });
    }
    let mut index = i;
    let mut done = false;
    let tree = substitute_leaf(&t.tree, &mut index, &is_hole, s.tree(), &mut done);
    Ok(MixedTree { tree })
}

/// The Syntax-Morphology feature correspondence: the set of licensed
/// (bundle, atom) pairs that gates every insertion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaSM {
    pairs: std::collections::BTreeSet<(FeatureBundle, SynAtom)>,
    pub surjectivity_required: bool,
}

impl GammaSM {
    pub fn new<I: IntoIterator<Item = (FeatureBundle, SynAtom)>>(
        pairs: I,
        surjectivity_required: bool,
    ) -> Self {
        GammaSM { pairs: pairs.into_iter().collect(), surjectivity_required }
    }

    /// A correspondence that licenses everything; sampling harnesses use it
    /// to isolate the algebra from the gating.
    pub fn permissive() -> Self {
        GammaSM { pairs: Default::default(), surjectivity_required: false }
    }

    fn is_permissive(&self) -> bool {
        self.pairs.is_empty() && !self.surjectivity_required
    }

    pub fn licenses(&self, bundle: &FeatureBundle, atom: &SynAtom) -> bool {
        self.is_permissive() || self.pairs.contains(&(bundle.clone(), atom.clone()))
    }

    pub fn insert(&mut self, bundle: FeatureBundle, atom: SynAtom) {
        self.pairs.insert((bundle, atom));
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(FeatureBundle, SynAtom)> {
        self.pairs.iter()
    }

    /// Atoms reachable by the second projection.
    pub fn licensed_atoms(&self) -> std::collections::BTreeSet<SynAtom> {
        self.pairs.iter().map(|(_, a)| a.clone()).collect()
    }

    /// Atoms licensed for a given root bundle.
    pub fn atoms_for(&self, bundle: &FeatureBundle) -> Vec<SynAtom> {
        self.pairs.iter().filter(|(b, _)| b == bundle).map(|(_, a)| a.clone()).collect()
    }
}

/// Attach a morphological tree below an atom leaf: the leaf and the root are
/// identified into one boundary vertex carrying the pair.
pub(crate) fn attach_insertion(atom: &SynAtom, ins: &Insertion) -> Tree {
    match ins {
        Insertion::Unit => Tree::atom(atom.name()),
        Insertion::Morph(s) => {
            let bundle = s.root_bundle();
            match s.tree() {
                Tree::Leaf(_) => Tree::leaf(LeafLabel::Boundary { bundle, atom: atom.clone() }),
                Tree::Unary { child, .. } => Tree::Unary {
                    label: Some(InternalLabel::Boundary { bundle, atom: atom.clone() }),
                    child: child.clone(),
                },
                Tree::Binary { left, right, .. } => Tree::Binary {
                    label: Some(InternalLabel::Boundary { bundle, atom: atom.clone() }),
                    left: left.clone(),
                    right: right.clone(),
                },
            }
        }
    }
}

/// Insert morphological trees at every leaf of a syntactic tree, gated by
/// the feature correspondence. Arguments align with the planar depth-first
/// leaf order of `tree`; pass the magma unit to leave a leaf bare.
pub(crate) fn gamma_insert_planar(
    tree: &Tree,
    args: &[Insertion],
    gamma: &GammaSM,
) -> Result<Tree, OperadError> {
    fn go(
        t: &Tree,
        at: &VertexId,
        args: &[Insertion],
        next: &mut usize,
        gamma: &GammaSM,
    ) -> Result<Tree, OperadError> {
        match t {
            Tree::Leaf(LeafLabel::Atom { atom }) => {
                let ins = &args[*next];
                *next += 1;
                if let Insertion::Morph(s) = ins {
                    let bundle = s.root_bundle();
                    if !gamma.licenses(&bundle, atom) {
                        return Err(OperadError::Match {
                            leaf: at.clone(),
                            bundle,
                            atom: atom.clone(),
                        });
                    }
                }
                Ok(attach_insertion(atom, ins))
            }
            Tree::Leaf(_) => Ok(t.clone()),
            Tree::Unary { label, child } => Ok(Tree::Unary {
                label: label.clone(),
                child: Box::new(go(child, &at.child(0), args, next, gamma)?),
            }),
            Tree::Binary { label, left, right } => {
                let l = go(left, &at.child(0), args, next, gamma)?;
                let r = go(right, &at.child(1), args, next, gamma)?;
                Ok(Tree::Binary { label: label.clone(), left: Box::new(l), right: Box::new(r) })
            }
        }
    }
    let n = tree
        .leaves()
        .iter()
        .filter(|(_, l)| matches!(l, LeafLabel::Atom { .. }))
        .count();
    if args.len() != n {
        return Err(OperadError::ArityMismatch { expected: n, got: args.len() });
    }
    let mut next = 0;
    go(tree, &VertexId::root(), args, &mut next, gamma)
}

/// `γ_{SO,MO}`: assemble a morphosyntactic tree from a syntactic object and
/// one insertion per leaf (canonical depth-first leaf order).
pub fn gamma_so_mo(
    t: &SyntacticObject,
    args: &[Insertion],
    gamma: &GammaSM,
) -> Result<MorphoSynTree, OperadError> {
    let combined = gamma_insert_planar(t.tree(), args, gamma)?.canonicalize();
    MorphoSynTree::from_tree(combined)
        .map_err(|e| OperadError::Syntax(SyntaxError::NotSyntactic(e.to_string())))
}

/// The forgetful morphism to syntactic objects: shrink each morphological
/// subtree to its boundary vertex and drop the bundle part of the label.
pub fn forget_morphology(ms: &MorphoSynTree) -> SyntacticObject {
    ms.skeleton()
}

/// A syntactic object with a head function: an element of the head-colored
/// insertion operad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadedObject {
    pub object: SyntacticObject,
    pub head: HeadFunction,
}

impl HeadedObject {
    pub fn new(object: SyntacticObject, head: HeadFunction) -> Result<Self, SyntaxError> {
        // totality check
        label_by_head(&object, &head)?;
        Ok(HeadedObject { object, head })
    }

    pub fn root_color(&self) -> Result<SynAtom, SyntaxError> {
        head_atom(&self.object, &self.head)
    }
}

/// Colored insertion: graft `y` at leaf `leaf` of `x`, allowed only when the
/// root label of `y` matches the leaf's atom. Head functions merge.
pub fn colored_insert_domh(
    x: &HeadedObject,
    leaf: &VertexId,
    y: &HeadedObject,
) -> Result<HeadedObject, OperadError> {
    let leaf_atom = match x.object.tree().subtree(leaf).and_then(|t| t.leaf_label()) {
        Some(LeafLabel::Atom { atom }) => atom.clone(),
        _ => {
            return Err(OperadError::Syntax(SyntaxError::Tree(
                crate::tree::TreeError::VertexNotFound(leaf.clone()),
            )))
        }
    };
    let y_color = y.root_color()?;
    if y_color != leaf_atom {
        return Err(OperadError::ColorMismatch {
            leaf: leaf.clone(),
            expected: leaf_atom,
            found: y_color,
        });
    }
    // the colored unit: inserting a bare leaf of the same color is identity
    if y.object.tree().is_leaf() {
        return Ok(x.clone());
    }
    let (tree, map) = x
        .object
        .tree()
        .replace_at(leaf, y.object.tree().clone())
        .map_err(SyntaxError::Tree)?;
    let remapped = crate::syntax::remap_head(&x.head, &map);
    let mut choices = remapped.choices;
    let anchor = map.get(leaf).expect("replaced vertex is tracked").clone();
    for (v, side) in &y.head.choices {
        let mut path = anchor.0.clone();
        path.extend_from_slice(&v.0);
        // y was already canonical; grafting cannot reorder inside it, but the
        // whole subtree may have moved, so recompute sides from the map of x
        // only. Inside y the relative order is preserved by replace_at.
        choices.insert(VertexId(path), *side);
    }
    let object = SyntacticObject::from_tree(tree).map_err(OperadError::Syntax)?;
    HeadedObject::new(object, HeadFunction::new(choices)).map_err(OperadError::Syntax)
}

/// Check the colored-correspondence square on one instance:
/// compose-then-insert equals insert-then-act.
///
/// `morph_args` aligns with the concatenated leaf lists of `syn_parts`
/// (block order).
pub fn verify_correspondence(
    t_op: &OperadElement,
    syn_parts: &[SyntacticObject],
    morph_args: &[Insertion],
    gamma: &GammaSM,
) -> Result<bool, OperadError> {
    if syn_parts.len() != t_op.arity() {
        return Err(OperadError::ArityMismatch { expected: t_op.arity(), got: syn_parts.len() });
    }
    let total: usize = syn_parts.iter().map(|p| p.leaf_count()).sum();
    if morph_args.len() != total {
        return Err(OperadError::ArityMismatch { expected: total, got: morph_args.len() });
    }

    // compose first, then insert morphology along the planar composite
    let composed = act_so_planar(t_op, syn_parts);
    let lhs = gamma_insert_planar(&composed, morph_args, gamma)?.canonicalize();

    // insert morphology into each part, then act on the results
    let mut ms_parts = Vec::with_capacity(syn_parts.len());
    let mut offset = 0;
    for part in syn_parts {
        let k = part.leaf_count();
        let ms = gamma_so_mo(part, &morph_args[offset..offset + k], gamma)?;
        offset += k;
        ms_parts.push(ms);
    }
    let rhs = act_ms(t_op, &ms_parts)?;

    Ok(lhs == rhs.to_tree())
}

/// Planar composite of an operad element with syntactic parts: keeps block
/// leaf order, no canonicalization.
fn act_so_planar(t: &OperadElement, parts: &[SyntacticObject]) -> Tree {
    let mut tree = t.tree.clone();
    for (j, arg) in parts.iter().enumerate().rev() {
        let mut index = j + 1;
        let mut done = false;
        tree = substitute_leaf(&tree, &mut index, &is_hole, arg.tree(), &mut done);
        debug_assert!(done);
    }
    tree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Feature;
    use crate::morph::MorphObject;
    use crate::notation::{parse_tree, LeafContext};
    use crate::syntax::Side;
    use std::collections::BTreeMap;

    fn op(text: &str) -> OperadElement {
        OperadElement::from_tree(parse_tree(text, LeafContext::Syntax).unwrap()).unwrap()
    }

    fn so(text: &str) -> SyntacticObject {
        SyntacticObject::from_tree(parse_tree(text, LeafContext::Syntax).unwrap()).unwrap()
    }

    #[test]
    fn unit_laws() {
        let x = op("(* (* *))");
        let units: Vec<OperadElement> = (0..3).map(|_| OperadElement::unit()).collect();
        assert!(operad_compose(&x, &units).unwrap().same_shape(&x));
        assert!(operad_compose(&OperadElement::unit(), &[x.clone()]).unwrap().same_shape(&x));
        assert!(operad_insert(&x, 1, &OperadElement::unit()).unwrap().same_shape(&x));
    }

    #[test]
    fn compose_builds_combs() {
        let two = OperadElement::pairing();
        let comb = operad_insert(&two, 1, &OperadElement::pairing()).unwrap();
        assert_eq!(comb.arity(), 3);
        assert_eq!(comb.shape().to_string(), "(* (* *))");
    }

    #[test]
    fn arity_errors() {
        let two = OperadElement::pairing();
        assert!(matches!(
            operad_compose(&two, &[OperadElement::unit()]),
            Err(OperadError::ArityMismatch { .. })
        ));
        assert!(matches!(
            operad_insert(&two, 3, &OperadElement::unit()),
            Err(OperadError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn act_so_examples() {
        let two = OperadElement::pairing();
        let r = act_so(&two, &[so("a"), so("b")]).unwrap();
        assert_eq!(r.tree().to_string(), "(a b)");

        let t = op("(* (* *))");
        let r = act_so(&t, &[so("(a1 a2)"), so("a3"), so("(a4 a5)")]).unwrap();
        assert_eq!(r, so("((a1 a2) (a3 (a4 a5)))"));
    }

    #[test]
    fn insert_so_bookkeeping() {
        let two = OperadElement::pairing();
        let m = insert_so_at_leaf(&two, 1, &so("a")).unwrap();
        assert_eq!(m.holes(), 1);
        assert_eq!(m.labeled_leaves(), 1);
        let m2 = insert_so_at_leaf(&two, 1, &so("(a b)")).unwrap();
        assert_eq!(m2.holes(), 1);
        assert_eq!(m2.labeled_leaves(), 2);
    }

    #[test]
    fn saturating_insertions_equal_action() {
        let t = op("((* *) *)");
        let args = [so("(a b)"), so("c"), so("(d (e f))")];
        let direct = act_so(&t, &args).unwrap();
        // fill right-to-left so remaining hole indices stay stable
        let mut mixed = insert_so_at_leaf(&t, 3, &args[2]).unwrap();
        mixed = mixed.insert_so(2, &args[1]).unwrap();
        mixed = mixed.insert_so(1, &args[0]).unwrap();
        assert_eq!(mixed.into_syntactic().unwrap(), direct);
    }

    #[test]
    fn gamma_so_mo_gates_insertions() {
        let t = so("(N V)");
        let s = MorphObject::from_nested(&["phi", "psi"]).as_extended();
        let mut gamma = GammaSM::new([], false);
        gamma.insert(s.root_bundle(), SynAtom::new("N"));
        // canonical leaf order of (N V): N first
        let args = [Insertion::Morph(s.clone()), Insertion::Unit];
        let ms = gamma_so_mo(&t, &args, &gamma).unwrap();
        assert_eq!(ms.to_tree().to_string(), "(V {phi+,psi+ @ N| phi+ psi+})");

        // inserting at the unlicensed V leaf fails
        let bad = [Insertion::Unit, Insertion::Morph(s)];
        assert!(matches!(gamma_so_mo(&t, &bad, &gamma), Err(OperadError::Match { .. })));
    }

    #[test]
    fn forget_is_a_section() {
        let t = so("(N V)");
        let s = MorphObject::from_nested(&["phi", "psi"]).as_extended();
        let gamma = GammaSM::permissive();
        let ms = gamma_so_mo(&t, &[Insertion::Morph(s), Insertion::Unit], &gamma).unwrap();
        assert_eq!(forget_morphology(&ms), t);
    }

    #[test]
    fn colored_insertion_checks_colors() {
        let x = HeadedObject::new(
            so("(a b)"),
            HeadFunction::new(BTreeMap::from([(VertexId::root(), Side::Left)])),
        )
        .unwrap();
        let leaf_a = x
            .object
            .tree()
            .leaves()
            .into_iter()
            .find(|(_, l)| matches!(l, LeafLabel::Atom { atom } if atom.name() == "a"))
            .unwrap()
            .0;
        let y = HeadedObject::new(
            so("(a c)"),
            HeadFunction::new(BTreeMap::from([(VertexId::root(), Side::Left)])),
        )
        .unwrap();
        let z = colored_insert_domh(&x, &leaf_a, &y).unwrap();
        assert_eq!(z.object, so("((a c) b)"));

        // mismatched root color
        let w = HeadedObject::new(
            so("(c d)"),
            HeadFunction::new(BTreeMap::from([(VertexId::root(), Side::Left)])),
        )
        .unwrap();
        assert!(matches!(
            colored_insert_domh(&x, &leaf_a, &w),
            Err(OperadError::ColorMismatch { .. })
        ));

        // per-color unit acts as identity
        let unit_a = HeadedObject::new(so("a"), HeadFunction::default()).unwrap();
        let same = colored_insert_domh(&x, &leaf_a, &unit_a).unwrap();
        assert_eq!(same.object, x.object);
    }

    #[test]
    fn correspondence_on_a_small_instance() {
        let t_op = op("(* *)");
        let parts = [so("(N V)"), so("D")];
        let s1 = MorphObject::from_nested(&["phi"]).as_extended();
        let s2 = MorphObject::from_nested(&["psi", "chi"]).as_extended();
        let args = [
            Insertion::Morph(s1),
            Insertion::Unit,
            Insertion::Morph(s2),
        ];
        let gamma = GammaSM::permissive();
        assert!(verify_correspondence(&t_op, &parts, &args, &gamma).unwrap());
    }
}

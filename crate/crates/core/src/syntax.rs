//! The free magma of syntactic objects, syntactic workspaces, the extraction
//! coproduct with copy cancellation, the Merge operators, and head-function
//! labeling.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use thiserror::Error;

pub use crate::label::SynAtom;
use crate::label::LeafLabel;
use crate::sum::{Tensor, TensorSum, WorkspaceSum};
use crate::tree::{
    graft, nonoverlapping_vertex_sets, quotient, Forest, QuotientMode, Tree, TreeError, VertexId,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("not a syntactic object: {0}")]
    NotSyntactic(String),
    #[error("head function is missing a choice at vertex {0}")]
    PartialHead(VertexId),
    #[error("witness does not produce the given term: {0}")]
    NotASuccessor(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// An element of the free non-associative commutative magma over the atom
/// inventory: a non-planar full binary tree with atom-labeled leaves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyntacticObject {
    tree: Tree,
}

impl SyntacticObject {
    pub fn atom(name: impl Into<String>) -> Self {
        SyntacticObject { tree: Tree::atom(name) }
    }

    /// Validates full-binariness and atom leaves (traces are admitted, since
    /// copy cancellation writes them into derived workspaces).
    pub fn from_tree(tree: Tree) -> Result<Self, SyntaxError> {
        let tree = tree.canonicalize();
        if !is_syntactic_tree(&tree) {
            return Err(SyntaxError::NotSyntactic(tree.to_string()));
        }
        Ok(SyntacticObject { tree })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn into_tree(self) -> Tree {
        self.tree
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    /// Leaf atoms in canonical depth-first order.
    pub fn leaf_atoms(&self) -> Vec<(VertexId, SynAtom)> {
        self.tree
            .leaves()
            .into_iter()
            .filter_map(|(v, l)| match l {
                LeafLabel::Atom { atom } => Some((v, atom.clone())),
                _ => None,
            })
            .collect()
    }
}

pub(crate) fn is_syntactic_tree(t: &Tree) -> bool {
    match t {
        Tree::Leaf(LeafLabel::Atom { .. }) | Tree::Leaf(LeafLabel::Trace { .. }) => true,
        Tree::Binary { label: None, left, right } => {
            is_syntactic_tree(left) && is_syntactic_tree(right)
        }
        _ => false,
    }
}

/// The binary magma operation: graft two objects under a fresh root.
pub fn magma_merge(a: &SyntacticObject, b: &SyntacticObject) -> SyntacticObject {
    let f = Forest::from_trees([a.tree.clone(), b.tree.clone()]);
    SyntacticObject { tree: graft(&f).expect("two components") }
}

/// Whether the coproduct cancels deeper copies of extracted material.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CopyCancellation {
    /// Pure extraction: the quotient removes exactly the chosen subtrees.
    Off,
    /// Canonically equal occurrences of an extracted subtree that lie
    /// strictly deeper in the same component (and are disjoint from every
    /// chosen vertex) shrink to trace leaves in the quotient.
    #[default]
    CanonicalEquality,
}

/// Mode-D extraction quotient under the given cancellation setting.
pub(crate) fn extraction_quotient(
    t: &Tree,
    set: &BTreeSet<VertexId>,
    cancellation: CopyCancellation,
) -> Result<Option<Tree>, TreeError> {
    match cancellation {
        CopyCancellation::Off => quotient(t, set, QuotientMode::D),
        CopyCancellation::CanonicalEquality => {
            // reuse the plain quotient for validation
            quotient(t, set, QuotientMode::D)?;
            let cancelled = deeper_copies(t, set);
            Ok(quotient_with_traces(t, set, &cancelled))
        }
    }
}

fn component_coproduct(t: &Tree, cancellation: CopyCancellation) -> Vec<(Forest, Option<Tree>)> {
    let mut terms = Vec::new();
    for set in nonoverlapping_vertex_sets(t) {
        let extracted = Forest::from_trees(
            set.iter().map(|v| t.subtree(v).expect("enumerated vertex").clone()),
        );
        let right = extraction_quotient(t, &set, cancellation).expect("enumerated set");
        terms.push((extracted, right));
    }
    terms
}

/// Vertices disjoint from the extraction whose subtree canonically equals an
/// extracted one rooted strictly higher. Only outermost occurrences count.
fn deeper_copies(t: &Tree, extracted: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut targets: Vec<(usize, Tree)> = Vec::new();
    for v in extracted {
        let sub = t.subtree(v).expect("extracted vertex");
        targets.push((v.depth(), sub.clone()));
    }
    let mut cancelled: BTreeSet<VertexId> = BTreeSet::new();
    for w in t.vertices() {
        if extracted.iter().any(|v| v.overlaps(&w)) {
            continue;
        }
        if cancelled.iter().any(|c| c.contains(&w)) {
            continue;
        }
        let sub = t.subtree(&w).expect("enumerated vertex");
        if targets.iter().any(|(d, s)| w.depth() > *d && s == sub) {
            cancelled.insert(w);
        }
    }
    cancelled
}

/// Mode-D quotient of the extracted set after shrinking each cancelled
/// occurrence to a trace leaf.
fn quotient_with_traces(
    t: &Tree,
    extracted: &BTreeSet<VertexId>,
    cancelled: &BTreeSet<VertexId>,
) -> Option<Tree> {
    fn go(t: &Tree, at: &VertexId, extracted: &BTreeSet<VertexId>, cancelled: &BTreeSet<VertexId>) -> Option<Tree> {
        if extracted.contains(at) {
            return None;
        }
        if cancelled.contains(at) {
            return Some(Tree::Leaf(LeafLabel::Trace { origin: t.encoding().0 }));
        }
        match t {
            Tree::Leaf(_) => Some(t.clone()),
            Tree::Unary { child, .. } => go(child, &at.child(0), extracted, cancelled),
            Tree::Binary { label, left, right } => {
                let l = go(left, &at.child(0), extracted, cancelled);
                let r = go(right, &at.child(1), extracted, cancelled);
                match (l, r) {
                    (Some(l), Some(r)) => Some(Tree::binary(label.clone(), l, r)),
                    (Some(c), None) | (None, Some(c)) => Some(c),
                    (None, None) => None,
                }
            }
        }
    }
    if extracted.iter().any(|v| v.is_root()) {
        return None;
    }
    go(t, &VertexId::root(), extracted, cancelled)
}

/// The workspace coproduct: per component, a sum over all non-overlapping
/// vertex sets, extracted material on the left and the mode-D quotient on
/// the right; multiplicative across components.
pub fn coproduct_syn_with(ws: &Forest, cancellation: CopyCancellation) -> TensorSum {
    let mut sum = TensorSum::singleton(Tensor::new(Forest::unit(), Forest::unit()));
    for comp in ws.components() {
        let mut comp_sum = TensorSum::zero();
        for (left, right) in component_coproduct(comp, cancellation) {
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

/// Coproduct with the default copy-cancellation setting.
pub fn coproduct_syn(ws: &Forest) -> TensorSum {
    coproduct_syn_with(ws, CopyCancellation::default())
}

/// `𝔐_{S,S'}`: keep the coproduct terms whose left channel is exactly
/// `s ⊔ s'`, graft the pair, and reassemble. The empty sum signals that no
/// extraction matches.
pub fn merge_pair(ws: &Forest, s: &SyntacticObject, s2: &SyntacticObject) -> WorkspaceSum {
    merge_pair_with(ws, s, s2, CopyCancellation::default())
}

pub fn merge_pair_with(
    ws: &Forest,
    s: &SyntacticObject,
    s2: &SyntacticObject,
    cancellation: CopyCancellation,
) -> WorkspaceSum {
    let wanted = Forest::from_trees([s.tree.clone(), s2.tree.clone()]);
    let merged = magma_merge(s, s2);
    let mut out = WorkspaceSum::zero();
    for (tensor, coeff) in coproduct_syn_with(ws, cancellation).iter() {
        if tensor.left == wanted {
            out.add_term(Forest::singleton(merged.tree.clone()).union(&tensor.right), *coeff);
        }
    }
    out
}

/// `𝔐_{S,1}`: extract one occurrence of `s` and deposit it as a component.
pub fn merge_with_unit(ws: &Forest, s: &SyntacticObject) -> WorkspaceSum {
    merge_with_unit_with(ws, s, CopyCancellation::default())
}

pub fn merge_with_unit_with(
    ws: &Forest,
    s: &SyntacticObject,
    cancellation: CopyCancellation,
) -> WorkspaceSum {
    let wanted = Forest::singleton(s.tree.clone());
    let mut out = WorkspaceSum::zero();
    for (tensor, coeff) in coproduct_syn_with(ws, cancellation).iter() {
        if tensor.left == wanted {
            out.add_term(wanted.union(&tensor.right), *coeff);
        }
    }
    out
}

/// Internal Merge as the composite `𝔐_{S,T/S} ∘ 𝔐_{S,1}` targeted at one
/// accessible term.
pub fn merge_internal(ws: &Forest, component: usize, v: &VertexId) -> Result<WorkspaceSum, SyntaxError> {
    let comp = ws
        .components()
        .get(component)
        .ok_or_else(|| SyntaxError::NotASuccessor(format!("no component {component}")))?;
    let sub = comp
        .subtree(v)
        .ok_or_else(|| SyntaxError::Tree(TreeError::VertexNotFound(v.clone())))?
        .clone();
    let s = SyntacticObject::from_tree(sub)?;
    let remainder = quotient(comp, &BTreeSet::from([v.clone()]), QuotientMode::D)?
        .ok_or_else(|| SyntaxError::NotASuccessor("extraction removed the whole component".into()))?;
    let s2 = SyntacticObject::from_tree(remainder)?;
    let step1 = merge_with_unit(ws, &s);
    let mut out = WorkspaceSum::zero();
    for (mid, c) in step1.iter() {
        out.add(&merge_pair(mid, &s, &s2).scaled(*c));
    }
    Ok(out)
}

/// `𝒦`: the sum of `𝔐_{S,S'}` over all ordered pairs, assembled from the
/// coproduct terms with two components in the left channel. A term whose two
/// extracted trees differ is hit by two ordered pairs and counts twice.
pub fn merge_all(ws: &Forest) -> WorkspaceSum {
    merge_all_with(ws, CopyCancellation::default())
}

pub fn merge_all_with(ws: &Forest, cancellation: CopyCancellation) -> WorkspaceSum {
    let mut out = WorkspaceSum::zero();
    for (tensor, coeff) in coproduct_syn_with(ws, cancellation).iter() {
        if tensor.left.len() != 2 {
            continue;
        }
        let comps = tensor.left.components();
        let grafted = graft(&tensor.left).expect("two components");
        let weight = if comps[0] == comps[1] { 1 } else { 2 };
        out.add_term(
            Forest::singleton(grafted).union(&tensor.right),
            *coeff * Rational64::from_integer(weight),
        );
    }
    out
}

/// Where a Merge operand came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSide {
    /// A full component of the workspace.
    Component(usize),
    /// The accessible term at a proper vertex of a component.
    Subtree(usize, VertexId),
    /// The remainder `T/T_v` of a component after extracting the other side.
    Remainder(usize, VertexId),
}

/// The pair of operands justifying one summand of a Merge action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeWitness {
    pub first: WitnessSide,
    pub second: WitnessSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MergeKind {
    Em,
    Im,
    SmA,
    SmB,
    SmC,
}

impl std::fmt::Display for MergeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MergeKind::Em => write!(f, "EM"),
            MergeKind::Im => write!(f, "IM"),
            MergeKind::SmA => write!(f, "SM_a"),
            MergeKind::SmB => write!(f, "SM_b"),
            MergeKind::SmC => write!(f, "SM_c"),
        }
    }
}

fn side_subtree(ws: &Forest, side: &WitnessSide) -> Result<Tree, SyntaxError> {
    let get = |c: usize, v: &VertexId| -> Result<Tree, SyntaxError> {
        let comp = ws
            .components()
            .get(c)
            .ok_or_else(|| SyntaxError::NotASuccessor(format!("no component {c}")))?;
        comp.subtree(v)
            .cloned()
            .ok_or_else(|| SyntaxError::Tree(TreeError::VertexNotFound(v.clone())))
    };
    match side {
        WitnessSide::Component(c) => get(*c, &VertexId::root()),
        WitnessSide::Subtree(c, v) => get(*c, v),
        WitnessSide::Remainder(c, v) => {
            let comp = ws
                .components()
                .get(*c)
                .ok_or_else(|| SyntaxError::NotASuccessor(format!("no component {c}")))?;
            extraction_quotient(comp, &BTreeSet::from([v.clone()]), CopyCancellation::default())?
                .ok_or_else(|| SyntaxError::NotASuccessor("empty remainder".into()))
        }
    }
}

/// Recompute the successor named by a witness and classify it.
///
/// Classification follows the enumerated cases: both operands components
/// (External Merge); an accessible term merged with its own remainder
/// (Internal Merge); and the three Sideward cases.
pub fn classify_merge(
    before: &Forest,
    term: &Forest,
    witness: &MergeWitness,
) -> Result<MergeKind, SyntaxError> {
    // operands are unordered, so normalize both orientations
    match classify_oriented(before, term, &witness.first, &witness.second) {
        Err(SyntaxError::NotASuccessor(_)) => {
            classify_oriented(before, term, &witness.second, &witness.first)
        }
        other => other,
    }
}

fn classify_oriented(
    before: &Forest,
    term: &Forest,
    first: &WitnessSide,
    second: &WitnessSide,
) -> Result<MergeKind, SyntaxError> {
    let witness = MergeWitness { first: first.clone(), second: second.clone() };
    let s1 = side_subtree(before, &witness.first)?;
    let s2 = side_subtree(before, &witness.second)?;
    let merged = Tree::binary(None, s1, s2);

    // Rebuild the successor the witness describes.
    let rebuilt = match (&witness.first, &witness.second) {
        (WitnessSide::Component(i), WitnessSide::Component(j)) if i != j => {
            let rest = Forest::from_trees(
                before
                    .components()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k != i && k != j)
                    .map(|(_, t)| t.clone()),
            );
            Some((Forest::singleton(merged.clone()).union(&rest), MergeKind::Em))
        }
        (WitnessSide::Subtree(c, v), WitnessSide::Remainder(c2, v2)) if c == c2 && v == v2 => {
            let rest = drop_component(before, &[*c]);
            Some((Forest::singleton(merged.clone()).union(&rest), MergeKind::Im))
        }
        (WitnessSide::Subtree(c, v), WitnessSide::Component(j)) if c != j && !v.is_root() => {
            let comp = &before.components()[*c];
            let remainder =
                extraction_quotient(comp, &BTreeSet::from([v.clone()]), CopyCancellation::default())?;
            let mut parts = vec![merged.clone()];
            parts.extend(remainder);
            let rest = drop_component(before, &[*c, *j]);
            Some((Forest::from_trees(parts).union(&rest), MergeKind::SmA))
        }
        (WitnessSide::Subtree(c, v), WitnessSide::Subtree(c2, w)) if c == c2 => {
            if v.overlaps(w) || v.is_root() || w.is_root() {
                None
            } else {
                let comp = &before.components()[*c];
                let remainder = extraction_quotient(
                    comp,
                    &BTreeSet::from([v.clone(), w.clone()]),
                    CopyCancellation::default(),
                )?;
                let mut parts = vec![merged.clone()];
                parts.extend(remainder);
                let rest = drop_component(before, &[*c]);
                Some((Forest::from_trees(parts).union(&rest), MergeKind::SmB))
            }
        }
        (WitnessSide::Subtree(c, v), WitnessSide::Subtree(c2, w)) => {
            if v.is_root() || w.is_root() {
                None
            } else {
                let comp1 = &before.components()[*c];
                let comp2 = &before.components()[*c2];
                let r1 =
                    extraction_quotient(comp1, &BTreeSet::from([v.clone()]), CopyCancellation::default())?;
                let r2 =
                    extraction_quotient(comp2, &BTreeSet::from([w.clone()]), CopyCancellation::default())?;
                let mut parts = vec![merged.clone()];
                parts.extend(r1);
                parts.extend(r2);
                let rest = drop_component(before, &[*c, *c2]);
                Some((Forest::from_trees(parts).union(&rest), MergeKind::SmC))
            }
        }
        _ => None,
    };

    match rebuilt {
        Some((expected, kind)) if &expected == term => Ok(kind),
        Some((expected, _)) => Err(SyntaxError::NotASuccessor(format!(
            "witness yields {expected}, not {term}"
        ))),
        None => Err(SyntaxError::NotASuccessor("inconsistent witness".into())),
    }
}

fn drop_component(ws: &Forest, indices: &[usize]) -> Forest {
    Forest::from_trees(
        ws.components()
            .iter()
            .enumerate()
            .filter(|(k, _)| !indices.contains(k))
            .map(|(_, t)| t.clone()),
    )
}

/// One summand of the single-step Merge action with its witnessing pair of
/// extraction positions.
#[derive(Clone, Debug)]
pub struct MergeSuccessor {
    pub term: Forest,
    pub witness: MergeWitness,
    pub kind: MergeKind,
}

/// Enumerate the single-step successors of `merge_all` with witnesses: all
/// unordered pairs of disjoint extraction positions across the workspace.
pub fn merge_successors(ws: &Forest) -> Vec<MergeSuccessor> {
    merge_successors_with(ws, CopyCancellation::default())
}

pub fn merge_successors_with(ws: &Forest, cancellation: CopyCancellation) -> Vec<MergeSuccessor> {
    let mut positions: Vec<(usize, VertexId)> = Vec::new();
    for (c, t) in ws.components().iter().enumerate() {
        for v in t.vertices() {
            positions.push((c, v));
        }
    }
    let mut out = Vec::new();
    for (i, (c1, v1)) in positions.iter().enumerate() {
        for (c2, v2) in positions.iter().skip(i + 1) {
            if c1 == c2 && v1.overlaps(v2) {
                continue;
            }
            let t1 = ws.components()[*c1].subtree(v1).unwrap().clone();
            let t2 = ws.components()[*c2].subtree(v2).unwrap().clone();
            let merged = Tree::binary(None, t1.clone(), t2.clone());
            // Quotient every touched component with cancellation applied.
            let mut parts = vec![merged];
            for (c, t) in ws.components().iter().enumerate() {
                let mut set = BTreeSet::new();
                if c == *c1 {
                    set.insert(v1.clone());
                }
                if c == *c2 {
                    set.insert(v2.clone());
                }
                if set.is_empty() {
                    parts.push(t.clone());
                    continue;
                }
                let rem = extraction_quotient(t, &set, cancellation).expect("disjoint positions");
                parts.extend(rem);
            }
            let term = Forest::from_trees(parts);
            let side = |c: usize, v: &VertexId| {
                if v.is_root() {
                    WitnessSide::Component(c)
                } else {
                    WitnessSide::Subtree(c, v.clone())
                }
            };
            let witness = MergeWitness { first: side(*c1, v1), second: side(*c2, v2) };
            let kind = match (&witness.first, &witness.second) {
                (WitnessSide::Component(_), WitnessSide::Component(_)) => MergeKind::Em,
                (WitnessSide::Subtree(a, _), WitnessSide::Subtree(b, _)) if a == b => MergeKind::SmB,
                (WitnessSide::Subtree(_, _), WitnessSide::Subtree(_, _)) => MergeKind::SmC,
                _ => MergeKind::SmA,
            };
            out.push(MergeSuccessor { term, witness, kind });
        }
    }
    out
}

/// A per-tree choice of projecting child at every internal vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeadFunction {
    pub choices: BTreeMap<VertexId, Side>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl HeadFunction {
    pub fn new(choices: BTreeMap<VertexId, Side>) -> Self {
        HeadFunction { choices }
    }

    /// The leaf reached from `v` by following projecting children.
    pub fn head_leaf(&self, t: &Tree, v: &VertexId) -> Result<VertexId, SyntaxError> {
        let mut cur = v.clone();
        loop {
            let sub = t
                .subtree(&cur)
                .ok_or_else(|| SyntaxError::Tree(TreeError::VertexNotFound(cur.clone())))?;
            match sub {
                Tree::Leaf(_) => return Ok(cur),
                Tree::Unary { .. } => cur = cur.child(0),
                Tree::Binary { .. } => {
                    let side = self
                        .choices
                        .get(&cur)
                        .copied()
                        .ok_or_else(|| SyntaxError::PartialHead(cur.clone()))?;
                    cur = cur.child(match side {
                        Side::Left => 0,
                        Side::Right => 1,
                    });
                }
            }
        }
    }
}

/// Carry head choices across a tree surgery: dropped vertices disappear and
/// the choice flips wherever the canonical order swapped the children.
pub fn remap_head(head: &HeadFunction, map: &crate::tree::VertexMap) -> HeadFunction {
    let mut choices = BTreeMap::new();
    for (v, side) in &head.choices {
        let Some(nv) = map.get(v) else { continue };
        let flipped = match map.get(&v.child(0)) {
            Some(new_left) => {
                new_left.0.len() == nv.0.len() + 1 && new_left.0[nv.0.len()] == 1
            }
            None => false,
        };
        let new_side = if flipped {
            match side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            }
        } else {
            *side
        };
        choices.insert(nv.clone(), new_side);
    }
    HeadFunction::new(choices)
}

/// The head-function labeling algorithm: every internal vertex receives the
/// atom at the leaf its projection path reaches.
pub fn label_by_head(
    s: &SyntacticObject,
    h: &HeadFunction,
) -> Result<BTreeMap<VertexId, SynAtom>, SyntaxError> {
    let mut out = BTreeMap::new();
    for v in s.tree().vertices() {
        let sub = s.tree().subtree(&v).unwrap();
        if sub.is_leaf() {
            continue;
        }
        let leaf = h.head_leaf(s.tree(), &v)?;
        match s.tree().subtree(&leaf).and_then(|t| t.leaf_label()) {
            Some(LeafLabel::Atom { atom }) => {
                out.insert(v, atom.clone());
            }
            _ => return Err(SyntaxError::NotSyntactic(format!("leaf {leaf} has no atom"))),
        }
    }
    Ok(out)
}

/// The atom projected to the root (the head of the whole structure).
pub fn head_atom(s: &SyntacticObject, h: &HeadFunction) -> Result<SynAtom, SyntaxError> {
    let root = VertexId::root();
    if s.tree().is_leaf() {
        match s.tree().leaf_label() {
            Some(LeafLabel::Atom { atom }) => return Ok(atom.clone()),
            _ => return Err(SyntaxError::NotSyntactic("headless leaf".into())),
        }
    }
    let leaf = h.head_leaf(s.tree(), &root)?;
    match s.tree().subtree(&leaf).and_then(|t| t.leaf_label()) {
        Some(LeafLabel::Atom { atom }) => Ok(atom.clone()),
        _ => Err(SyntaxError::NotSyntactic(format!("leaf {leaf} has no atom"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_forest, parse_tree, LeafContext};

    fn so(text: &str) -> SyntacticObject {
        SyntacticObject::from_tree(parse_tree(text, LeafContext::Syntax).unwrap()).unwrap()
    }

    fn ws(text: &str) -> Forest {
        parse_forest(text, LeafContext::Syntax).unwrap()
    }

    #[test]
    fn magma_merge_is_commutative_and_nonassociative() {
        let a = so("a");
        let b = so("b");
        let c = so("c");
        assert_eq!(magma_merge(&a, &b), magma_merge(&b, &a));
        let l = magma_merge(&magma_merge(&a, &b), &c);
        let r = magma_merge(&a, &magma_merge(&b, &c));
        assert_ne!(l, r);
        // repeated atoms are fine
        let aa = magma_merge(&a, &a);
        assert_eq!(aa.tree().to_string(), "(a a)");
    }

    #[test]
    fn coproduct_of_single_leaf() {
        let sum = coproduct_syn(&ws("a"));
        assert_eq!(sum.len(), 2);
        assert_eq!(
            sum.coeff(&Tensor::new(Forest::unit(), ws("a"))),
            Rational64::from_integer(1)
        );
        assert_eq!(
            sum.coeff(&Tensor::new(ws("a"), Forest::unit())),
            Rational64::from_integer(1)
        );
    }

    #[test]
    fn coproduct_of_cherry_has_five_terms() {
        let sum = coproduct_syn(&ws("(a b)"));
        assert_eq!(sum.len(), 5);
        for (l, r) in [
            ("1", "(a b)"),
            ("(a b)", "1"),
            ("a", "b"),
            ("b", "a"),
            ("a ⊔ b", "1"),
        ] {
            let t = Tensor::new(
                parse_forest(l, LeafContext::Syntax).unwrap(),
                parse_forest(r, LeafContext::Syntax).unwrap(),
            );
            assert_eq!(sum.coeff(&t), Rational64::from_integer(1), "term {l} ⊗ {r}");
        }
    }

    #[test]
    fn coproduct_term_count_matches_antichains() {
        let t = parse_tree("(a (b c))", LeafContext::Syntax).unwrap();
        let sets = nonoverlapping_vertex_sets(&t);
        let sum = coproduct_syn_with(&Forest::singleton(t), CopyCancellation::Off);
        let total: Rational64 = sum.iter().map(|(_, c)| *c).sum();
        assert_eq!(total, Rational64::from_integer(sets.len() as i64));
    }

    #[test]
    fn merge_pair_external() {
        let sum = merge_pair(&ws("a ⊔ b"), &so("a"), &so("b"));
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.coeff(&ws("(a b)")), Rational64::from_integer(1));
        // absent operand gives the empty sum
        assert!(merge_pair(&ws("a ⊔ b"), &so("a"), &so("c")).is_zero());
    }

    #[test]
    fn internal_merge_is_the_composite() {
        let sum = merge_internal(&ws("(a b)"), 0, &VertexId(vec![0])).unwrap();
        assert!(!sum.is_zero());
        assert_eq!(sum.coeff(&ws("(a b)")), Rational64::from_integer(1));
        // explicit two-step composite gives the same workspace sum
        let step1 = merge_with_unit(&ws("(a b)"), &so("a"));
        let mut composite = WorkspaceSum::zero();
        for (mid, c) in step1.iter() {
            composite.add(&merge_pair(mid, &so("a"), &so("b")).scaled(*c));
        }
        assert_eq!(sum, composite);
    }

    #[test]
    fn merge_all_examples() {
        let sum = merge_all(&ws("a ⊔ b"));
        assert_eq!(sum.coeff(&ws("(a b)")), Rational64::from_integer(2));
        assert!(merge_all(&ws("a")).is_zero());
        let three = merge_all(&ws("a ⊔ b ⊔ c"));
        for succ in ["(a b) ⊔ c", "(a c) ⊔ b", "(b c) ⊔ a"] {
            assert_eq!(three.coeff(&ws(succ)), Rational64::from_integer(2), "{succ}");
        }
    }

    #[test]
    fn classify_em_im_sm() {
        // EM
        let before = ws("a ⊔ b");
        let witness = MergeWitness {
            first: WitnessSide::Component(0),
            second: WitnessSide::Component(1),
        };
        assert_eq!(classify_merge(&before, &ws("(a b)"), &witness).unwrap(), MergeKind::Em);

        // IM: S = (a b) inside ((a b) c), S' = remainder c
        let before = ws("((a b) c)");
        let v = before.components()[0]
            .vertices()
            .into_iter()
            .find(|v| before.components()[0].subtree(v).unwrap().to_string() == "(a b)")
            .unwrap();
        let witness = MergeWitness {
            first: WitnessSide::Subtree(0, v.clone()),
            second: WitnessSide::Remainder(0, v),
        };
        assert_eq!(classify_merge(&before, &ws("((a b) c)"), &witness).unwrap(), MergeKind::Im);

        // SM_a: accessible a inside (a b), component c
        let before = ws("(a b) ⊔ c");
        let (ci, comp) = before
            .components()
            .iter()
            .enumerate()
            .find(|(_, t)| t.to_string() == "(a b)")
            .unwrap();
        let other = 1 - ci;
        let va = comp
            .vertices()
            .into_iter()
            .find(|v| comp.subtree(v).unwrap().to_string() == "a")
            .unwrap();
        let witness = MergeWitness {
            first: WitnessSide::Subtree(ci, va),
            second: WitnessSide::Component(other),
        };
        assert_eq!(classify_merge(&before, &ws("(a c) ⊔ b"), &witness).unwrap(), MergeKind::SmA);

        // inconsistent witness
        let bad = MergeWitness {
            first: WitnessSide::Component(0),
            second: WitnessSide::Component(1),
        };
        assert!(classify_merge(&ws("a ⊔ b"), &ws("(a c)"), &bad).is_err());
    }

    #[test]
    fn label_by_head_projects() {
        let s = so("(a b)");
        let h = HeadFunction::new(BTreeMap::from([(VertexId::root(), Side::Left)]));
        let labels = label_by_head(&s, &h).unwrap();
        assert_eq!(labels[&VertexId::root()].name(), "a");

        let s = so("((a b) c)");
        let tree = s.tree().clone();
        let inner = tree
            .vertices()
            .into_iter()
            .find(|v| !v.is_root() && !tree.subtree(v).unwrap().is_leaf())
            .unwrap();
        // project the root toward the cherry and the cherry toward its left
        // leaf: composition of choices labels both vertices alike
        let toward_inner = if inner.0[0] == 0 { Side::Left } else { Side::Right };
        let h = HeadFunction::new(BTreeMap::from([
            (VertexId::root(), toward_inner),
            (inner.clone(), Side::Left),
        ]));
        let labels = label_by_head(&s, &h).unwrap();
        assert_eq!(labels[&inner], labels[&VertexId::root()]);
        assert_eq!(labels[&inner].name(), "a");

        // chain of right projections on (a (b c)) labels the root by the
        // deepest right leaf
        let s = so("(a (b c))");
        let tree = s.tree().clone();
        let inner = tree
            .vertices()
            .into_iter()
            .find(|v| !v.is_root() && !tree.subtree(v).unwrap().is_leaf())
            .unwrap();
        let h = HeadFunction::new(BTreeMap::from([
            (VertexId::root(), Side::Right),
            (inner.clone(), Side::Right),
        ]));
        let labels = label_by_head(&s, &h).unwrap();
        let expected = tree.subtree(&inner).unwrap().leaves().last().unwrap().1.clone();
        match expected {
            LeafLabel::Atom { atom } => assert_eq!(labels[&VertexId::root()], atom),
            _ => panic!(),
        }

        // partial head errors
        let h = HeadFunction::default();
        assert!(matches!(label_by_head(&s, &h), Err(SyntaxError::PartialHead(_))));
    }

    #[test]
    fn head_label_stable_under_nonancestral_changes() {
        let s = so("((a b) (c d))");
        let tree = s.tree().clone();
        let internals: Vec<VertexId> = tree
            .vertices()
            .into_iter()
            .filter(|v| !tree.subtree(v).unwrap().is_leaf())
            .collect();
        let mut base = BTreeMap::new();
        for v in &internals {
            base.insert(v.clone(), Side::Left);
        }
        let h = HeadFunction::new(base.clone());
        let labels = label_by_head(&s, &h).unwrap();
        // flipping the choice at the 1-side cherry cannot change the label of
        // the 0-side cherry
        let zero_side = VertexId(vec![0]);
        let one_side = VertexId(vec![1]);
        let mut alt = base;
        alt.insert(one_side, Side::Right);
        let h2 = HeadFunction::new(alt);
        let labels2 = label_by_head(&s, &h2).unwrap();
        assert_eq!(labels[&zero_side], labels2[&zero_side]);
    }
}

//! Morphosyntactic trees and workspaces, the assembly operators, and the
//! four Distributed Morphology rewrites (fusion, fission, obliteration,
//! impoverishment) with their commutative-diagram laws and the semigroup
//! they generate on assembly operators.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::label::{Feature, FeatureBundle, InternalLabel, LeafLabel, SynAtom};
use crate::morph::{root_bundle, validate_ext, ExtMorphObject, MorphError, MorphWorkspace};
use crate::operad::{attach_insertion, gamma_so_mo, GammaSM, OperadError};
use crate::sum::WorkspaceSum;
use crate::syntax::{label_by_head, remap_head, HeadFunction, SyntacticObject, SyntaxError};
use crate::tree::{Forest, Tree, TreeError, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DmError {
    #[error("vertex {0} is not a cherry with morphological insertions at both leaves")]
    NotACherry(VertexId),
    #[error("feature correspondence rejects ({bundle}, {atom})")]
    Gamma { bundle: FeatureBundle, atom: SynAtom },
    #[error("fusion needs a head function to label the fused vertex")]
    NoHead,
    #[error("leaf {0} carries no morphological insertion")]
    NoInsertion(VertexId),
    #[error("not a proper nonempty subbundle: {0}")]
    NotSubset(String),
    #[error("not a partition: {0}")]
    Partition(String),
    #[error("split target shares no features with the tree")]
    EmptySplit,
    #[error("not a morphosyntactic tree: {0}")]
    NotMs(String),
    #[error("generator {index} inadmissible: {message}")]
    Generator { index: usize, message: String },
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Morph(#[from] MorphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// What sits below a syntactic leaf: nothing (the magma unit) or an extended
/// morphological object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Insertion {
    Unit,
    Morph(ExtMorphObject),
}

impl Insertion {
    pub fn as_morph(&self) -> Option<&ExtMorphObject> {
        match self {
            Insertion::Unit => None,
            Insertion::Morph(s) => Some(s),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Insertion::Unit)
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Insertion::Unit => write!(f, "1"),
            Insertion::Morph(s) => write!(f, "{s}"),
        }
    }
}

/// A syntactic skeleton with morphological trees inserted at (some of) its
/// leaves. Boundary vertices carry the (bundle, atom) pair. Equality is
/// equality of the combined canonical tree; the optional head function on
/// the skeleton is auxiliary data.
#[derive(Clone, Debug)]
pub struct MorphoSynTree {
    skeleton: SyntacticObject,
    insertions: BTreeMap<VertexId, Insertion>,
    head: Option<HeadFunction>,
}

impl PartialEq for MorphoSynTree {
    fn eq(&self, other: &Self) -> bool {
        self.to_tree() == other.to_tree()
    }
}

impl Eq for MorphoSynTree {}

impl fmt::Display for MorphoSynTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_tree())
    }
}

impl MorphoSynTree {
    pub(crate) fn from_parts(
        skeleton: SyntacticObject,
        insertions: BTreeMap<VertexId, Insertion>,
        head: Option<HeadFunction>,
    ) -> Self {
        MorphoSynTree { skeleton, insertions, head }
    }

    /// Decompose a combined tree: boundary vertices mark the frontier; the
    /// syntactic part lies above, morphological trees below.
    pub fn from_tree(tree: Tree) -> Result<Self, DmError> {
        let tree = tree.canonicalize();
        fn split(
            t: &Tree,
            raw: &mut Vec<(VertexId, Insertion)>,
            at: &VertexId,
        ) -> Result<Tree, DmError> {
            match t {
                Tree::Leaf(LeafLabel::Atom { atom }) => {
                    raw.push((at.clone(), Insertion::Unit));
                    Ok(Tree::atom(atom.name()))
                }
                Tree::Leaf(LeafLabel::Trace { .. }) => Ok(t.clone()),
                Tree::Leaf(LeafLabel::Boundary { bundle, atom }) => {
                    let mut it = bundle.iter();
                    match (it.next(), it.next()) {
                        (Some(f), None) => {
                            let s = ExtMorphObject::leaf(f.clone());
                            raw.push((at.clone(), Insertion::Morph(s)));
                            Ok(Tree::atom(atom.name()))
                        }
                        _ => Err(DmError::NotMs(format!(
                            "boundary leaf {{{bundle} @ {atom}}} has no morphological content"
                        ))),
                    }
                }
                Tree::Unary { label: Some(InternalLabel::Boundary { bundle, atom }), child } => {
                    let morph = Tree::unary(
                        Some(InternalLabel::Bundle { bundle: bundle.clone() }),
                        (**child).clone(),
                    );
                    let s = ExtMorphObject::from_tree(morph)?;
                    raw.push((at.clone(), Insertion::Morph(s)));
                    Ok(Tree::atom(atom.name()))
                }
                Tree::Binary {
                    label: Some(InternalLabel::Boundary { bundle, atom }),
                    left,
                    right,
                } => {
                    let morph = Tree::binary(
                        Some(InternalLabel::Bundle { bundle: bundle.clone() }),
                        (**left).clone(),
                        (**right).clone(),
                    );
                    let s = ExtMorphObject::from_tree(morph)?;
                    raw.push((at.clone(), Insertion::Morph(s)));
                    Ok(Tree::atom(atom.name()))
                }
                Tree::Binary { label: None, left, right } => {
                    let l = split(left, raw, &at.child(0))?;
                    let r = split(right, raw, &at.child(1))?;
                    Ok(Tree::binary_planar(None, l, r))
                }
                other => Err(DmError::NotMs(other.to_string())),
            }
        }
        let mut raw = Vec::new();
        let skeleton_raw = split(&tree, &mut raw, &VertexId::root())?;
        let (skeleton_tree, map) = skeleton_raw.canonicalize_with_map();
        let skeleton =
            SyntacticObject::from_tree(skeleton_tree).map_err(|e| DmError::NotMs(e.to_string()))?;
        let mut insertions = BTreeMap::new();
        for (old, ins) in raw {
            let new = map.get(&old).expect("leaf survives canonicalization").clone();
            insertions.insert(new, ins);
        }
        Ok(MorphoSynTree { skeleton, insertions, head: None })
    }

    /// The combined canonical tree with boundary vertices in place.
    pub fn to_tree(&self) -> Tree {
        fn go(t: &Tree, at: &VertexId, ins: &BTreeMap<VertexId, Insertion>) -> Tree {
            match t {
                Tree::Leaf(LeafLabel::Atom { atom }) => match ins.get(at) {
                    Some(i) => attach_insertion(atom, i),
                    None => Tree::atom(atom.name()),
                },
                Tree::Leaf(_) => t.clone(),
                Tree::Unary { label, child } => {
                    Tree::unary(label.clone(), go(child, &at.child(0), ins))
                }
                Tree::Binary { label, left, right } => Tree::binary(
                    label.clone(),
                    go(left, &at.child(0), ins),
                    go(right, &at.child(1), ins),
                ),
            }
        }
        go(self.skeleton.tree(), &VertexId::root(), &self.insertions)
    }

    pub fn skeleton(&self) -> SyntacticObject {
        self.skeleton.clone()
    }

    pub fn insertions(&self) -> &BTreeMap<VertexId, Insertion> {
        &self.insertions
    }

    pub fn insertion_at(&self, leaf: &VertexId) -> Option<&Insertion> {
        self.insertions.get(leaf)
    }

    pub fn head(&self) -> Option<&HeadFunction> {
        self.head.as_ref()
    }

    pub fn with_head(mut self, head: HeadFunction) -> Result<Self, DmError> {
        label_by_head(&self.skeleton, &head)?;
        self.head = Some(head);
        Ok(self)
    }

    /// Insertions in canonical leaf order, units included.
    pub fn args_in_leaf_order(&self) -> Vec<Insertion> {
        self.skeleton
            .leaf_atoms()
            .iter()
            .map(|(v, _)| self.insertions.get(v).cloned().unwrap_or(Insertion::Unit))
            .collect()
    }

    /// Round-trip invariant: reassembling the parts reproduces the tree.
    pub fn reassembles_under(&self, gamma: &GammaSM) -> bool {
        match gamma_so_mo(&self.skeleton, &self.args_in_leaf_order(), gamma) {
            Ok(ms) => ms == *self,
            Err(_) => false,
        }
    }
}

/// A morphosyntax-assembly recipe: a syntactic skeleton with one insertion
/// slot per leaf, optionally headed. Equality disregards no-op unary
/// vertices in the arguments and the head.
#[derive(Clone, Debug)]
pub struct AssemblyOp {
    pub skeleton: SyntacticObject,
    pub args: Vec<Insertion>,
    pub head: Option<HeadFunction>,
}

impl AssemblyOp {
    pub fn new(
        skeleton: SyntacticObject,
        args: Vec<Insertion>,
        gamma: &GammaSM,
    ) -> Result<Self, DmError> {
        let leaves = skeleton.leaf_atoms();
        if leaves.len() != args.len() {
            return Err(DmError::NotMs(format!(
                "{} insertion slots for {} leaves",
                args.len(),
                leaves.len()
            )));
        }
        for ((_, atom), ins) in leaves.iter().zip(&args) {
            if let Insertion::Morph(s) = ins {
                let bundle = s.root_bundle();
                if !gamma.licenses(&bundle, atom) {
                    return Err(DmError::Gamma { bundle, atom: atom.clone() });
                }
            }
        }
        Ok(AssemblyOp { skeleton, args, head: None })
    }

    pub fn with_head(mut self, head: HeadFunction) -> Result<Self, DmError> {
        label_by_head(&self.skeleton, &head)?;
        self.head = Some(head);
        Ok(self)
    }

    /// The morphological material the operator extracts (units skipped).
    pub fn extraction_pattern(&self) -> Forest {
        Forest::from_trees(self.args.iter().filter_map(|i| i.as_morph()).map(|s| s.tree().clone()))
    }

    /// The morphosyntactic tree this recipe assembles.
    pub fn assembled(&self, gamma: &GammaSM) -> Result<MorphoSynTree, DmError> {
        let ms = gamma_so_mo(&self.skeleton, &self.args, gamma)?;
        match &self.head {
            Some(h) => ms.with_head(h.clone()),
            None => Ok(ms),
        }
    }

    fn normal_form(&self) -> Tree {
        let simplified: Vec<Insertion> = self
            .args
            .iter()
            .map(|i| match i {
                Insertion::Unit => Insertion::Unit,
                Insertion::Morph(s) => Insertion::Morph(crate::morph::simplify_unary(s)),
            })
            .collect();
        let leaves = self.skeleton.leaf_atoms();
        let map: BTreeMap<VertexId, Insertion> =
            leaves.iter().map(|(v, _)| v.clone()).zip(simplified).collect();
        MorphoSynTree::from_parts(self.skeleton.clone(), map, None).to_tree()
    }
}

impl PartialEq for AssemblyOp {
    fn eq(&self, other: &Self) -> bool {
        self.skeleton == other.skeleton && self.normal_form() == other.normal_form()
    }
}

impl Eq for AssemblyOp {}

impl fmt::Display for AssemblyOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M^[{}]_[", self.skeleton.tree())?;
        let mut first = true;
        for a in &self.args {
            if !first {
                write!(f, "; ")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        write!(f, "]")
    }
}

/// Parameters of one fission: the targeted leaf, the shared bundle copied
/// into both halves, the two-way partition of the rest, and the partner atom
/// labeling the new syntactic leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FissionSpec {
    pub leaf: VertexId,
    pub shared: FeatureBundle,
    pub parts: (FeatureBundle, FeatureBundle),
    pub partner_atom: SynAtom,
}

// ---------------------------------------------------------------------------
// Assembly operators acting on morphological workspaces.

/// `𝔐^T_{S_1..S_n}`: for every coproduct term whose left channel equals the
/// operator's extraction pattern, assemble the morphosyntactic tree and
/// reattach the remainder. The empty sum signals that no extraction matches.
pub fn assemble_mt(
    op: &AssemblyOp,
    ws: &MorphWorkspace,
    gamma: &GammaSM,
) -> Result<WorkspaceSum, DmError> {
    let wanted = op.extraction_pattern();
    let ms_tree = op.assembled(gamma)?.to_tree();
    let mut out = WorkspaceSum::zero();
    for (tensor, coeff) in crate::morph::coproduct_rho(ws).iter() {
        if tensor.left == wanted {
            out.add_term(Forest::singleton(ms_tree.clone()).union(&tensor.right), *coeff);
        }
    }
    Ok(out)
}

/// `𝒦_T`: the sum of `𝔐^T_{S_1..S_n}` over every admissible tuple
/// extractable from the workspace. Each coproduct term contributes once per
/// distinct licensed assignment of its components to the leaves of `T`.
pub fn assemble_kt(
    t: &SyntacticObject,
    ws: &MorphWorkspace,
    gamma: &GammaSM,
) -> Result<WorkspaceSum, DmError> {
    let leaves = t.leaf_atoms();
    let n = leaves.len();
    let mut out = WorkspaceSum::zero();
    for (tensor, coeff) in crate::morph::coproduct_rho(ws).iter() {
        if tensor.left.len() != n {
            continue;
        }
        for tuple in licensed_tuples(tensor.left.components(), &leaves, gamma) {
            let args: Vec<Insertion> = tuple
                .iter()
                .map(|tree| {
                    Insertion::Morph(
                        ExtMorphObject::from_tree((*tree).clone()).expect("coproduct channel"),
                    )
                })
                .collect();
            let ms = gamma_so_mo(t, &args, gamma)?;
            out.add_term(Forest::singleton(ms.to_tree()).union(&tensor.right), *coeff);
        }
    }
    Ok(out)
}

/// Distinct assignments of the component multiset to the leaves such that
/// every pair is licensed. Assignments that permute equal components count
/// once.
pub(crate) fn licensed_tuples<'a>(
    components: &'a [Tree],
    leaves: &[(VertexId, SynAtom)],
    gamma: &GammaSM,
) -> Vec<Vec<&'a Tree>> {
    let mut uniques: Vec<(&Tree, usize)> = Vec::new();
    for c in components {
        match uniques.iter_mut().find(|(t, _)| *t == c) {
            Some((_, k)) => *k += 1,
            None => uniques.push((c, 1)),
        }
    }
    fn go<'a>(
        uniques: &mut Vec<(&'a Tree, usize)>,
        leaves: &[(VertexId, SynAtom)],
        gamma: &GammaSM,
        current: &mut Vec<&'a Tree>,
        out: &mut Vec<Vec<&'a Tree>>,
    ) {
        let slot = current.len();
        if slot == leaves.len() {
            out.push(current.clone());
            return;
        }
        let atom = &leaves[slot].1;
        for i in 0..uniques.len() {
            if uniques[i].1 == 0 {
                continue;
            }
            let tree = uniques[i].0;
            if !gamma.licenses(&root_bundle(tree), atom) {
                continue;
            }
            uniques[i].1 -= 1;
            current.push(tree);
            go(uniques, leaves, gamma, current, out);
            current.pop();
            uniques[i].1 += 1;
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<&Tree> = Vec::new();
    go(&mut uniques, leaves, gamma, &mut current, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Fusion.

/// Skeleton cherries whose two leaves both carry morphological insertions.
pub fn cherries(ms: &MorphoSynTree) -> Vec<VertexId> {
    let skeleton = ms.skeleton.tree();
    skeleton
        .vertices()
        .into_iter()
        .filter(|v| {
            let sub = skeleton.subtree(v).unwrap();
            match sub {
                Tree::Binary { left, right, .. } => {
                    left.is_leaf()
                        && right.is_leaf()
                        && ms.insertions.get(&v.child(0)).map_or(false, |i| !i.is_unit())
                        && ms.insertions.get(&v.child(1)).map_or(false, |i| !i.is_unit())
                }
                _ => false,
            }
        })
        .collect()
}

fn cherry_parts(
    ms: &MorphoSynTree,
    v: &VertexId,
) -> Result<((SynAtom, ExtMorphObject), (SynAtom, ExtMorphObject)), DmError> {
    let skeleton = ms.skeleton.tree();
    let sub = skeleton.subtree(v).ok_or_else(|| TreeError::VertexNotFound(v.clone()))?;
    let (l, r) = match sub {
        Tree::Binary { left, right, .. } if left.is_leaf() && right.is_leaf() => (left, right),
        _ => return Err(DmError::NotACherry(v.clone())),
    };
    let atom = |t: &Tree| match t.leaf_label() {
        Some(LeafLabel::Atom { atom }) => Ok(atom.clone()),
        _ => Err(DmError::NotACherry(v.clone())),
    };
    let ins = |child: &VertexId| match ms.insertions.get(child) {
        Some(Insertion::Morph(s)) => Ok(s.clone()),
        _ => Err(DmError::NotACherry(v.clone())),
    };
    Ok(((atom(l)?, ins(&v.child(0))?), (atom(r)?, ins(&v.child(1))?)))
}

/// The fused insertion: a fresh morphological root carrying the union over
/// the two subtrees.
pub(crate) fn fused_insertion(s1: &ExtMorphObject, s2: &ExtMorphObject) -> ExtMorphObject {
    let bundle = s1.root_bundle().union(&s2.root_bundle());
    let tree = Tree::binary(
        Some(InternalLabel::Bundle { bundle }),
        s1.tree().clone(),
        s2.tree().clone(),
    );
    debug_assert!(validate_ext(&tree).is_valid());
    ExtMorphObject::from_tree(tree).expect("union label over valid subtrees")
}

/// Fuse the cherry at `v` with an explicitly supplied label for the fused
/// vertex.
pub(crate) fn fusion_at_with_label(
    ms: &MorphoSynTree,
    v: &VertexId,
    alpha_v: &SynAtom,
    gamma: &GammaSM,
) -> Result<MorphoSynTree, DmError> {
    let ((_, s1), (_, s2)) = cherry_parts(ms, v)?;
    let fused = fused_insertion(&s1, &s2);
    let bundle = fused.root_bundle();
    if !gamma.licenses(&bundle, alpha_v) {
        return Err(DmError::Gamma { bundle, atom: alpha_v.clone() });
    }
    let (skeleton_tree, map) = ms.skeleton.tree().replace_at(v, Tree::atom(alpha_v.name()))?;
    let skeleton = SyntacticObject::from_tree(skeleton_tree).map_err(DmError::Syntax)?;
    let mut insertions = BTreeMap::new();
    for (leaf, ins) in &ms.insertions {
        if v.contains(leaf) {
            continue;
        }
        insertions.insert(map.get(leaf).expect("surviving leaf").clone(), ins.clone());
    }
    insertions.insert(map.get(v).expect("fused vertex").clone(), Insertion::Morph(fused));
    let head = ms.head.as_ref().map(|h| {
        let mut kept = h.clone();
        kept.choices.retain(|w, _| !v.contains(w));
        remap_head(&kept, &map)
    });
    let out = MorphoSynTree { skeleton, insertions, head };
    debug_assert_eq!(out.skeleton.leaf_count() + 1, ms.skeleton.leaf_count());
    Ok(out)
}

/// Fusion at one cherry: the cherry shrinks to a leaf labeled by the head
/// projection, and the two insertions merge under a fresh morphological
/// root; the boundary moves up one vertex.
pub fn fusion_at(
    ms: &MorphoSynTree,
    v: &VertexId,
    gamma: &GammaSM,
) -> Result<MorphoSynTree, DmError> {
    let head = ms.head.as_ref().ok_or(DmError::NoHead)?;
    let labels = label_by_head(&ms.skeleton, head)?;
    let alpha_v = labels.get(v).ok_or_else(|| DmError::NotACherry(v.clone()))?.clone();
    fusion_at_with_label(ms, v, &alpha_v, gamma)
}

/// All admissible single fusions, as a workspace sum.
pub fn fusion_all(ms: &MorphoSynTree, gamma: &GammaSM) -> WorkspaceSum {
    let mut out = WorkspaceSum::zero();
    for v in cherries(ms) {
        if let Ok(fused) = fusion_at(ms, &v, gamma) {
            out.add_one(Forest::singleton(fused.to_tree()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Fission.

/// Intersection table: every internal vertex's bundle intersected with the
/// target, in depth-first order.
pub fn fission_intersection_table(
    s: &ExtMorphObject,
    target: &FeatureBundle,
) -> Vec<(VertexId, FeatureBundle)> {
    s.tree()
        .vertices()
        .into_iter()
        .filter_map(|v| {
            let sub = s.tree().subtree(&v).unwrap();
            sub.label().map(|l| (v.clone(), l.bundle().intersection(target)))
        })
        .collect()
}

/// The split tree before unary simplification: bundles intersected with the
/// target, empty-intersection subtrees cut off behind unary vertices, root
/// relabeled to the target.
pub fn fission_split_raw(
    s: &ExtMorphObject,
    target: &FeatureBundle,
) -> Result<ExtMorphObject, DmError> {
    fn go(t: &Tree, target: &FeatureBundle) -> Option<Tree> {
        match t {
            Tree::Leaf(LeafLabel::Feature { feature }) => {
                if target.contains(feature) {
                    Some(t.clone())
                } else {
                    None
                }
            }
            Tree::Leaf(_) => None,
            Tree::Unary { label, child } => {
                let bundle =
                    label.as_ref().map(|l| l.bundle().intersection(target)).unwrap_or_default();
                if bundle.is_empty() {
                    return None;
                }
                let c = go(child, target)?;
                Some(Tree::unary(Some(InternalLabel::Bundle { bundle }), c))
            }
            Tree::Binary { label, left, right } => {
                let bundle =
                    label.as_ref().map(|l| l.bundle().intersection(target)).unwrap_or_default();
                if bundle.is_empty() {
                    return None;
                }
                let l = go(left, target);
                let r = go(right, target);
                let node = match (l, r) {
                    (Some(l), Some(r)) => {
                        Tree::binary(Some(InternalLabel::Bundle { bundle }), l, r)
                    }
                    (Some(c), None) | (None, Some(c)) => {
                        Tree::unary(Some(InternalLabel::Bundle { bundle }), c)
                    }
                    (None, None) => return None,
                };
                Some(node)
            }
        }
    }
    if let Tree::Leaf(LeafLabel::Feature { feature }) = s.tree() {
        if target.contains(feature) {
            return Ok(s.clone());
        }
        return Err(DmError::EmptySplit);
    }
    let cut = go(s.tree(), target).ok_or(DmError::EmptySplit)?;
    // the root is relabeled with the full target
    let relabeled = match cut {
        Tree::Unary { child, .. } => {
            Tree::unary(Some(InternalLabel::Bundle { bundle: target.clone() }), *child)
        }
        Tree::Binary { left, right, .. } => {
            Tree::binary(Some(InternalLabel::Bundle { bundle: target.clone() }), *left, *right)
        }
        leaf => leaf,
    };
    ExtMorphObject::from_tree(relabeled).map_err(DmError::Morph)
}

/// The split tree with no-op unary vertices contracted.
pub fn fission_split(
    s: &ExtMorphObject,
    target: &FeatureBundle,
) -> Result<ExtMorphObject, DmError> {
    Ok(crate::morph::simplify_unary(&fission_split_raw(s, target)?))
}

fn check_partition(spec: &FissionSpec, root: &FeatureBundle) -> Result<(), DmError> {
    if !spec.shared.is_subset(root) {
        return Err(DmError::Partition(format!(
            "shared part {{{}}} not inside the root bundle {{{root}}}",
            spec.shared
        )));
    }
    let rest = root.difference(&spec.shared);
    let (b1, b2) = &spec.parts;
    if !b1.is_disjoint(b2) {
        return Err(DmError::Partition(format!("parts {{{b1}}} and {{{b2}}} overlap")));
    }
    if b1.union(b2) != rest {
        return Err(DmError::Partition(format!("parts {{{b1}}} ⊔ {{{b2}}} ≠ remainder {{{rest}}}")));
    }
    Ok(())
}

/// Fission at a leaf: the leaf grows into a syntactic cherry over the two
/// split trees, with the shared bundle copied into both; both placements of
/// the split trees on the (non-planar) cherry are summed when licensed; the
/// boundary moves down one vertex.
pub fn fission(
    ms: &MorphoSynTree,
    spec: &FissionSpec,
    gamma: &GammaSM,
) -> Result<WorkspaceSum, DmError> {
    let terms = fission_terms(ms, spec, gamma)?;
    let mut out = WorkspaceSum::zero();
    for t in terms {
        out.add_one(Forest::singleton(t.to_tree()));
    }
    Ok(out)
}

/// The admissible fission results (one per licensed placement).
pub(crate) fn fission_terms(
    ms: &MorphoSynTree,
    spec: &FissionSpec,
    gamma: &GammaSM,
) -> Result<Vec<MorphoSynTree>, DmError> {
    let s = match ms.insertions.get(&spec.leaf) {
        Some(Insertion::Morph(s)) => s.clone(),
        _ => return Err(DmError::NoInsertion(spec.leaf.clone())),
    };
    let alpha_l = match ms.skeleton.tree().subtree(&spec.leaf).and_then(|t| t.leaf_label()) {
        Some(LeafLabel::Atom { atom }) => atom.clone(),
        _ => return Err(DmError::NoInsertion(spec.leaf.clone())),
    };
    let root = s.root_bundle();
    check_partition(spec, &root)?;
    let t1 = spec.parts.0.union(&spec.shared);
    let t2 = spec.parts.1.union(&spec.shared);
    let s1 = fission_split(&s, &t1)?;
    let s2 = fission_split(&s, &t2)?;

    let alpha = &spec.partner_atom;
    let cherry = Tree::binary(None, Tree::atom(alpha_l.name()), Tree::atom(alpha.name()));
    let (skeleton_tree, map) = ms.skeleton.tree().replace_at(&spec.leaf, cherry)?;
    let skeleton = SyntacticObject::from_tree(skeleton_tree.clone()).map_err(DmError::Syntax)?;
    let cherry_root = map.get(&spec.leaf).expect("replaced vertex").clone();
    let leaf0 = cherry_root.child(0);
    let leaf1 = cherry_root.child(1);
    let atom_at = |leaf: &VertexId| match skeleton_tree.subtree(leaf).and_then(|t| t.leaf_label()) {
        Some(LeafLabel::Atom { atom }) => atom.clone(),
        _ => unreachable!("cherry leaves are atoms"),
    };
    let atom0 = atom_at(&leaf0);
    let atom1 = atom_at(&leaf1);

    // base insertions, remapped around the new cherry
    let mut base = BTreeMap::new();
    for (leaf, ins) in &ms.insertions {
        if leaf == &spec.leaf {
            continue;
        }
        base.insert(map.get(leaf).expect("surviving leaf").clone(), ins.clone());
    }
    // head: surviving choices plus the new cherry vertex projecting to the
    // original atom's leaf
    let head = ms.head.as_ref().map(|h| {
        let mut remapped = remap_head(h, &map);
        let side = if atom0 == alpha_l {
            crate::syntax::Side::Left
        } else {
            crate::syntax::Side::Right
        };
        remapped.choices.insert(cherry_root.clone(), side);
        remapped
    });

    let mut results = Vec::new();
    for (sa, sb) in [(&s1, &s2), (&s2, &s1)] {
        // sa sits at leaf0, sb at leaf1
        if !gamma.licenses(&sa.root_bundle(), &atom0) || !gamma.licenses(&sb.root_bundle(), &atom1)
        {
            continue;
        }
        let mut insertions = base.clone();
        insertions.insert(leaf0.clone(), Insertion::Morph(sa.clone()));
        insertions.insert(leaf1.clone(), Insertion::Morph(sb.clone()));
        results.push(MorphoSynTree { skeleton: skeleton.clone(), insertions, head: head.clone() });
    }
    if results.is_empty() {
        return Err(DmError::Gamma { bundle: t1, atom: alpha_l });
    }
    for r in &results {
        debug_assert_eq!(r.skeleton.leaf_count(), ms.skeleton.leaf_count() + 1);
    }
    Ok(results)
}

// ---------------------------------------------------------------------------
// Obliteration and impoverishment.

/// Replace the insertion at `leaf` by the magma unit. The skeleton and the
/// leaf's atom are untouched.
pub fn obliterate(ms: &MorphoSynTree, leaf: &VertexId) -> Result<MorphoSynTree, DmError> {
    match ms.insertions.get(leaf) {
        Some(Insertion::Morph(_)) => {}
        _ => return Err(DmError::NoInsertion(leaf.clone())),
    }
    let mut out = ms.clone();
    out.insertions.insert(leaf.clone(), Insertion::Unit);
    Ok(out)
}

fn removed_subbundle(
    root: &FeatureBundle,
    removed: &FeatureBundle,
) -> Result<FeatureBundle, DmError> {
    if removed.is_empty() {
        return Err(DmError::NotSubset("nothing to impoverish".into()));
    }
    if !removed.is_subset(root) || removed == root {
        return Err(DmError::NotSubset(format!(
            "{{{removed}}} is not a proper subbundle of {{{root}}}"
        )));
    }
    Ok(root.difference(removed))
}

/// Impoverishment without a trace: the insertion is replaced by its fission
/// split along the kept subbundle.
pub fn impoverish_subset(
    ms: &MorphoSynTree,
    leaf: &VertexId,
    removed: &FeatureBundle,
    gamma: &GammaSM,
    default_feature: Option<&Feature>,
) -> Result<MorphoSynTree, DmError> {
    let s = match ms.insertions.get(leaf) {
        Some(Insertion::Morph(s)) => s.clone(),
        _ => return Err(DmError::NoInsertion(leaf.clone())),
    };
    let alpha = match ms.skeleton.tree().subtree(leaf).and_then(|t| t.leaf_label()) {
        Some(LeafLabel::Atom { atom }) => atom.clone(),
        _ => return Err(DmError::NoInsertion(leaf.clone())),
    };
    let kept = removed_subbundle(&s.root_bundle(), removed)?;
    let mut replacement = fission_split(&s, &kept)?;
    if let Some(f) = default_feature {
        if !replacement.root_bundle().contains(f) {
            let mut bundle = replacement.root_bundle();
            bundle.insert(f.clone());
            let tree =
                Tree::unary(Some(InternalLabel::Bundle { bundle }), replacement.tree().clone());
            replacement = ExtMorphObject::from_tree(tree)?;
        }
    }
    let bundle = replacement.root_bundle();
    if !gamma.licenses(&bundle, &alpha) {
        return Err(DmError::Gamma { bundle, atom: alpha });
    }
    let mut out = ms.clone();
    out.insertions.insert(leaf.clone(), Insertion::Morph(replacement));
    Ok(out)
}

/// Impoverishment keeping a trace: fission along the spec, fuse back at the
/// new vertex, and cut away the removed half; a unary vertex carrying the
/// full fused bundle survives above the kept split tree.
pub fn impoverish_trace(
    ms: &MorphoSynTree,
    leaf: &VertexId,
    spec: &FissionSpec,
    gamma: &GammaSM,
    default_feature: Option<&Feature>,
) -> Result<MorphoSynTree, DmError> {
    let s = match ms.insertions.get(leaf) {
        Some(Insertion::Morph(s)) => s.clone(),
        _ => return Err(DmError::NoInsertion(leaf.clone())),
    };
    let alpha = match ms.skeleton.tree().subtree(leaf).and_then(|t| t.leaf_label()) {
        Some(LeafLabel::Atom { atom }) => atom.clone(),
        _ => return Err(DmError::NoInsertion(leaf.clone())),
    };
    let root = s.root_bundle();
    check_partition(spec, &root)?;
    let keep_target = spec.parts.1.union(&spec.shared);
    let drop_target = spec.parts.0.union(&spec.shared);
    // both fission halves must be constructible
    let _dropped = fission_split(&s, &drop_target)?;
    let kept = fission_split(&s, &keep_target)?;
    // the fused bundle is the original root bundle
    let mut trace_bundle = root.clone();
    if let Some(f) = default_feature {
        trace_bundle.insert(f.clone());
    }
    if !gamma.licenses(&trace_bundle, &alpha) {
        return Err(DmError::Gamma { bundle: trace_bundle, atom: alpha });
    }
    let tree =
        Tree::unary(Some(InternalLabel::Bundle { bundle: trace_bundle }), kept.tree().clone());
    let replacement = ExtMorphObject::from_tree(tree)?;
    let mut out = ms.clone();
    out.insertions.insert(leaf.clone(), Insertion::Morph(replacement));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Derived-operation pipelines.

/// Output of a derived-impoverishment pipeline: the full workspace, its
/// morphosyntactic component, and the discarded morphological material that
/// stays available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOutcome {
    pub workspace: Forest,
    pub ms: MorphoSynTree,
    pub discarded: Forest,
}

fn pipeline_parts(
    op: &AssemblyOp,
    leaf: &VertexId,
) -> Result<(ExtMorphObject, SynAtom, usize), DmError> {
    let leaves = op.skeleton.leaf_atoms();
    let idx = leaves
        .iter()
        .position(|(v, _)| v == leaf)
        .ok_or_else(|| DmError::NoInsertion(leaf.clone()))?;
    let s = match &op.args[idx] {
        Insertion::Morph(s) => s.clone(),
        Insertion::Unit => return Err(DmError::NoInsertion(leaf.clone())),
    };
    Ok((s, leaves[idx].1.clone(), idx))
}

/// Subtree-impoverishment as a workspace pipeline: fission the targeted
/// component into a two-leaf morphosyntactic cherry, move the kept half
/// through the coproduct, and assemble. The morphosyntactic component of the
/// result equals `impoverish_subset` applied directly.
pub fn oblit_pipeline(
    op: &AssemblyOp,
    extra: &Forest,
    leaf: &VertexId,
    removed: &FeatureBundle,
    partner: &SynAtom,
    gamma: &GammaSM,
) -> Result<PipelineOutcome, DmError> {
    let (s, alpha, idx) = pipeline_parts(op, leaf)?;
    let kept_bundle = removed_subbundle(&s.root_bundle(), removed)?;
    let s_removed = fission_split(&s, removed)?;
    let s_kept = fission_split(&s, &kept_bundle)?;

    // fission the workspace component into a morphosyntactic cherry
    let cherry_skeleton = SyntacticObject::from_tree(Tree::binary(
        None,
        Tree::atom(alpha.name()),
        Tree::atom(partner.name()),
    ))
    .map_err(DmError::Syntax)?;
    let order = cherry_skeleton.leaf_atoms();
    let cherry_args: Vec<Insertion> = order
        .iter()
        .map(|(_, a)| {
            if *a == alpha {
                Insertion::Morph(s_removed.clone())
            } else {
                Insertion::Morph(s_kept.clone())
            }
        })
        .collect();
    let cherry_ms = gamma_so_mo(&cherry_skeleton, &cherry_args, gamma)?;

    // extract the kept half back into the workspace; the cherry remnant
    // keeps a non-branching vertex where the cut happened
    let kept_boundary = order.iter().position(|(_, a)| *a == *partner).expect("partner leaf");
    let remnant = {
        let combined = cherry_ms.to_tree();
        // remove the boundary subtree of the partner leaf
        let boundary_vertex = combined
            .vertices()
            .into_iter()
            .find(|v| {
                matches!(
                    combined.subtree(v),
                    Some(t) if boundary_atom(t).map_or(false, |a| a == *partner)
                )
            })
            .ok_or_else(|| DmError::NotMs("missing partner boundary".into()))?;
        let set = std::collections::BTreeSet::from([boundary_vertex]);
        crate::tree::quotient(&combined, &set, crate::tree::QuotientMode::Rho)?
            .ok_or_else(|| DmError::NotMs("cherry collapsed".into()))?
    };
    let _ = kept_boundary;

    // reassemble at the original skeleton with the kept half at the leaf
    let mut args = op.args.clone();
    args[idx] = Insertion::Morph(s_kept.clone());
    let final_op = AssemblyOp::new(op.skeleton.clone(), args, gamma)?;
    let ms = final_op.assembled(gamma)?;

    let discarded = Forest::singleton(remnant).union(extra);
    let workspace = Forest::singleton(ms.to_tree()).union(&discarded);
    Ok(PipelineOutcome { workspace, ms, discarded })
}

fn boundary_atom(t: &Tree) -> Option<SynAtom> {
    match t {
        Tree::Leaf(LeafLabel::Boundary { atom, .. }) => Some(atom.clone()),
        _ => match t.label() {
            Some(InternalLabel::Boundary { atom, .. }) => Some(atom.clone()),
            _ => None,
        },
    }
}

/// Trace-impoverishment as a workspace pipeline: fission, fuse back at the
/// new vertex, cut away the removed half through the coproduct, and
/// assemble. The morphosyntactic component equals `impoverish_trace`.
pub fn impov_pipeline(
    op: &AssemblyOp,
    extra: &Forest,
    spec: &FissionSpec,
    gamma: &GammaSM,
) -> Result<PipelineOutcome, DmError> {
    let (s, alpha, idx) = pipeline_parts(op, &spec.leaf)?;
    check_partition(spec, &s.root_bundle())?;
    let drop_target = spec.parts.0.union(&spec.shared);
    let keep_target = spec.parts.1.union(&spec.shared);
    let s_drop = fission_split(&s, &drop_target)?;
    let s_keep = fission_split(&s, &keep_target)?;

    // fission then fusion at the new vertex: a single-leaf morphosyntactic
    // tree whose insertion is the re-merged pair
    let fused = fused_insertion(&s_drop, &s_keep);
    let fused_bundle = fused.root_bundle();
    if !gamma.licenses(&fused_bundle, &alpha) {
        return Err(DmError::Gamma { bundle: fused_bundle, atom: alpha.clone() });
    }

    // ⊔ ∘ Δ^ρ moves the dropped half into the workspace, leaving the trace
    // vertex above the kept half
    let remnant_tree = Tree::unary(
        Some(InternalLabel::Bundle { bundle: fused.root_bundle() }),
        s_keep.tree().clone(),
    );
    let remnant = ExtMorphObject::from_tree(remnant_tree)?;

    // the remnant is what gets inserted at the original leaf
    let mut args = op.args.clone();
    args[idx] = Insertion::Morph(remnant);
    let final_op = AssemblyOp::new(op.skeleton.clone(), args, gamma)?;
    let ms = final_op.assembled(gamma)?;

    let discarded = Forest::singleton(s_drop.tree().clone()).union(extra);
    let workspace = Forest::singleton(ms.to_tree()).union(&discarded);
    Ok(PipelineOutcome { workspace, ms, discarded })
}

// ---------------------------------------------------------------------------
// The rewrite semigroup on assembly operators.

/// Generators of the rewrite semigroup acting on assembly operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Fuse the skeleton cherry at this vertex.
    Fuse { vertex: VertexId },
    /// Fission the insertion at the spec's leaf.
    Fission { spec: FissionSpec },
    /// Replace the insertion at `leaf` by its root child carrying `keep`.
    Impoverish { leaf: VertexId, keep: FeatureBundle },
}

/// Apply a sequence of generators to an assembly operator. The empty
/// sequence is the identity. Fission applies the placement that keeps the
/// first split half at the original atom's leaf.
pub fn semigroup_apply(
    gens: &[Generator],
    op: &AssemblyOp,
    gamma: &GammaSM,
) -> Result<AssemblyOp, DmError> {
    let mut current = op.clone();
    for (index, gen) in gens.iter().enumerate() {
        current = apply_generator(gen, &current, gamma)
            .map_err(|e| DmError::Generator { index, message: e.to_string() })?;
    }
    Ok(current)
}

fn op_from_ms(ms: &MorphoSynTree) -> AssemblyOp {
    AssemblyOp {
        skeleton: ms.skeleton(),
        args: ms.args_in_leaf_order(),
        head: ms.head().cloned(),
    }
}

fn apply_generator(
    gen: &Generator,
    op: &AssemblyOp,
    gamma: &GammaSM,
) -> Result<AssemblyOp, DmError> {
    match gen {
        Generator::Fuse { vertex } => {
            let ms = op.assembled(gamma)?;
            let fused = fusion_at(&ms, vertex, gamma)?;
            Ok(op_from_ms(&fused))
        }
        Generator::Fission { spec } => {
            let ms = op.assembled(gamma)?;
            let terms = fission_terms(&ms, spec, gamma)?;
            Ok(op_from_ms(&terms[0]))
        }
        Generator::Impoverish { leaf, keep } => {
            let leaves = op.skeleton.leaf_atoms();
            let idx = leaves
                .iter()
                .position(|(v, _)| v == leaf)
                .ok_or_else(|| DmError::NoInsertion(leaf.clone()))?;
            let s = match &op.args[idx] {
                Insertion::Morph(s) => s.clone(),
                Insertion::Unit => return Err(DmError::NoInsertion(leaf.clone())),
            };
            let child = s
                .tree()
                .children()
                .into_iter()
                .find(|c| root_bundle(c) == *keep)
                .cloned()
                .ok_or_else(|| {
                    DmError::NotSubset(format!(
                        "no accessible term immediately below the root carries {{{keep}}}"
                    ))
                })?;
            let atom = &leaves[idx].1;
            if !gamma.licenses(keep, atom) {
                return Err(DmError::Gamma { bundle: keep.clone(), atom: atom.clone() });
            }
            let mut args = op.args.clone();
            args[idx] = Insertion::Morph(ExtMorphObject::from_tree(child)?);
            Ok(AssemblyOp { skeleton: op.skeleton.clone(), args, head: op.head.clone() })
        }
    }
}

// ---------------------------------------------------------------------------
// Commutative-diagram checks for the rewrites.

/// Result of a two-path diagram comparison. A vacuous outcome means both
/// paths produced the zero sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagramOutcome {
    Commutes,
    Vacuous,
    Fails { via_rewrite: String, via_recipe: String },
}

impl DiagramOutcome {
    pub fn holds(&self) -> bool {
        !matches!(self, DiagramOutcome::Fails { .. })
    }
}

/// Targeted fusion on a workspace sum: fuse every cherry matching the given
/// atoms, insertions and fused label.
fn fusion_targeted(
    sum: &WorkspaceSum,
    atoms: (&SynAtom, &SynAtom),
    parts: (&ExtMorphObject, &ExtMorphObject),
    alpha_v: &SynAtom,
    gamma: &GammaSM,
) -> WorkspaceSum {
    let mut out = WorkspaceSum::zero();
    for (forest, coeff) in sum.iter() {
        for (i, comp) in forest.components().iter().enumerate() {
            let Ok(ms) = MorphoSynTree::from_tree(comp.clone()) else { continue };
            for v in cherries(&ms) {
                let Ok(((a1, s1), (a2, s2))) = cherry_parts(&ms, &v) else { continue };
                let atoms_match = (a1 == *atoms.0 && a2 == *atoms.1)
                    || (a1 == *atoms.1 && a2 == *atoms.0);
                let parts_match = (s1 == *parts.0 && s2 == *parts.1)
                    || (s1 == *parts.1 && s2 == *parts.0);
                if !atoms_match || !parts_match {
                    continue;
                }
                if let Ok(fused) = fusion_at_with_label(&ms, &v, alpha_v, gamma) {
                    let mut comps: Vec<Tree> = forest.components().to_vec();
                    comps[i] = fused.to_tree();
                    out.add_term(Forest::from_trees(comps), *coeff);
                }
            }
        }
    }
    out
}

/// The magma operation lifted to morphological workspaces for the fusion
/// diagram: find the pair in the coproduct and merge it under a fresh
/// bundle-labeled root.
fn morph_merge_pair(ws: &MorphWorkspace, s1: &ExtMorphObject, s2: &ExtMorphObject) -> WorkspaceSum {
    let wanted = Forest::from_trees([s1.tree().clone(), s2.tree().clone()]);
    let merged = fused_insertion(s1, s2);
    let mut out = WorkspaceSum::zero();
    for (tensor, coeff) in crate::morph::coproduct_rho(ws).iter() {
        if tensor.left == wanted {
            out.add_term(
                Forest::singleton(merged.tree().clone()).union(&tensor.right),
                *coeff,
            );
        }
    }
    out
}

/// Check the fusion square: rewriting after assembly equals assembling with
/// the fused recipe after merging the morphology in the workspace.
pub fn verify_fusion_diagram(
    op: &AssemblyOp,
    cherry: &VertexId,
    ws: &MorphWorkspace,
    gamma: &GammaSM,
) -> Result<DiagramOutcome, DmError> {
    let head = op.head.as_ref().ok_or(DmError::NoHead)?;
    let labels = label_by_head(&op.skeleton, head)?;
    let alpha_v = labels.get(cherry).ok_or_else(|| DmError::NotACherry(cherry.clone()))?.clone();
    let ms = op.assembled(gamma)?;
    let ((a1, s1), (a2, s2)) = cherry_parts(&ms, cherry)?;

    // rewrite path: assemble, then fuse the targeted pattern
    let assembled = assemble_mt(op, ws, gamma)?;
    let via_rewrite = fusion_targeted(&assembled, (&a1, &a2), (&s1, &s2), &alpha_v, gamma);

    // recipe path: merge the pair in the workspace, then assemble with the
    // fused recipe
    let fused_op = apply_generator(&Generator::Fuse { vertex: cherry.clone() }, op, gamma);
    let via_recipe = match fused_op {
        Ok(op2) => {
            let mut acc = WorkspaceSum::zero();
            for (mid, coeff) in morph_merge_pair(ws, &s1, &s2).iter() {
                let mid_ws = MorphWorkspace::from_forest(mid)?;
                acc.add(&assemble_mt(&op2, &mid_ws, gamma)?.scaled(*coeff));
            }
            acc
        }
        Err(DmError::Gamma { .. }) => WorkspaceSum::zero(),
        Err(e) => return Err(e),
    };

    Ok(compare_paths(via_rewrite, via_recipe))
}

/// The cut map of the fission diagram: replace one occurrence of the
/// component by its two split halves.
pub fn fission_cut_workspace(
    ws: &MorphWorkspace,
    s: &ExtMorphObject,
    spec: &FissionSpec,
) -> Result<MorphWorkspace, DmError> {
    check_partition(spec, &s.root_bundle())?;
    let s1 = fission_split(s, &spec.parts.0.union(&spec.shared))?;
    let s2 = fission_split(s, &spec.parts.1.union(&spec.shared))?;
    let forest = ws.to_forest();
    let removed = forest
        .remove_multiset(&Forest::singleton(s.tree().clone()))
        .ok_or_else(|| DmError::NotMs(format!("workspace has no component {s}")))?;
    let out = removed
        .union(&Forest::from_trees([s1.tree().clone(), s2.tree().clone()]));
    MorphWorkspace::from_forest(&out).map_err(DmError::Morph)
}

/// Targeted fission on a workspace sum: fission every leaf carrying the
/// given atom and insertion.
fn fission_targeted(
    sum: &WorkspaceSum,
    alpha: &SynAtom,
    s: &ExtMorphObject,
    spec: &FissionSpec,
    gamma: &GammaSM,
) -> WorkspaceSum {
    let mut out = WorkspaceSum::zero();
    for (forest, coeff) in sum.iter() {
        for (i, comp) in forest.components().iter().enumerate() {
            let Ok(ms) = MorphoSynTree::from_tree(comp.clone()) else { continue };
            for (leaf, atom) in ms.skeleton().leaf_atoms() {
                if atom != *alpha {
                    continue;
                }
                if ms.insertion_at(&leaf).and_then(|i| i.as_morph()) != Some(s) {
                    continue;
                }
                let local = FissionSpec { leaf: leaf.clone(), ..spec.clone() };
                if let Ok(terms) = fission_terms(&ms, &local, gamma) {
                    for term in terms {
                        let mut comps: Vec<Tree> = forest.components().to_vec();
                        comps[i] = term.to_tree();
                        out.add_term(Forest::from_trees(comps), *coeff);
                    }
                }
            }
        }
    }
    out
}

/// Check the fission square: rewriting after assembly equals assembling the
/// grown recipe on the cut workspace (summing over licensed placements).
pub fn verify_fission_diagram(
    op: &AssemblyOp,
    spec: &FissionSpec,
    ws: &MorphWorkspace,
    gamma: &GammaSM,
) -> Result<DiagramOutcome, DmError> {
    let (s, alpha, idx) = pipeline_parts(op, &spec.leaf)?;
    check_partition(spec, &s.root_bundle())?;

    // rewrite path
    let assembled = assemble_mt(op, ws, gamma)?;
    let via_rewrite = fission_targeted(&assembled, &alpha, &s, spec, gamma);

    // recipe path: cut the component, then assemble with each licensed
    // placement of the grown recipe
    let cut = fission_cut_workspace(ws, &s, spec)?;
    let s1 = fission_split(&s, &spec.parts.0.union(&spec.shared))?;
    let s2 = fission_split(&s, &spec.parts.1.union(&spec.shared))?;
    let grown = grow_op(op, idx, spec, &s1, &s2, gamma)?;
    let mut via_recipe = WorkspaceSum::zero();
    for op2 in grown {
        via_recipe.add(&assemble_mt(&op2, &cut, gamma)?);
    }

    Ok(compare_paths(via_rewrite, via_recipe))
}

/// The assembly recipes produced by fission: the skeleton grows a cherry at
/// the leaf and the split halves fill its slots, one recipe per licensed
/// placement.
fn grow_op(
    op: &AssemblyOp,
    idx: usize,
    spec: &FissionSpec,
    s1: &ExtMorphObject,
    s2: &ExtMorphObject,
    gamma: &GammaSM,
) -> Result<Vec<AssemblyOp>, DmError> {
    let leaves = op.skeleton.leaf_atoms();
    let (leaf, alpha_l) = leaves[idx].clone();
    let cherry =
        Tree::binary(None, Tree::atom(alpha_l.name()), Tree::atom(spec.partner_atom.name()));
    let (skeleton_tree, map) = op.skeleton.tree().replace_at(&leaf, cherry)?;
    let skeleton = SyntacticObject::from_tree(skeleton_tree).map_err(DmError::Syntax)?;
    // rebuild argument assignment against the grown skeleton's leaf order
    let cherry_root = map.get(&leaf).expect("replaced leaf").clone();
    let mut by_vertex: BTreeMap<VertexId, Insertion> = BTreeMap::new();
    for (i, (v, _)) in leaves.iter().enumerate() {
        if i == idx {
            continue;
        }
        by_vertex.insert(map.get(v).expect("surviving leaf").clone(), op.args[i].clone());
    }
    let mut out = Vec::new();
    for (sa, sb) in [(s1, s2), (s2, s1)] {
        let mut assignment = by_vertex.clone();
        assignment.insert(cherry_root.child(0), Insertion::Morph(sa.clone()));
        assignment.insert(cherry_root.child(1), Insertion::Morph(sb.clone()));
        let args: Vec<Insertion> = skeleton
            .leaf_atoms()
            .iter()
            .map(|(v, _)| assignment.get(v).cloned().unwrap_or(Insertion::Unit))
            .collect();
        // both placements count, mirroring the two-term rewrite sum
        match AssemblyOp::new(skeleton.clone(), args, gamma) {
            Ok(op2) => out.push(op2),
            Err(DmError::Gamma { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn compare_paths(via_rewrite: WorkspaceSum, via_recipe: WorkspaceSum) -> DiagramOutcome {
    if via_rewrite == via_recipe {
        if via_rewrite.is_zero() {
            DiagramOutcome::Vacuous
        } else {
            DiagramOutcome::Commutes
        }
    } else {
        DiagramOutcome::Fails {
            via_rewrite: via_rewrite.to_string(),
            via_recipe: via_recipe.to_string(),
        }
    }
}

//! Non-planar labeled rooted trees with at most binary branching, and the
//! surgery they support: canonical forms, subtree extraction, quotients,
//! grafting and root cuts.
//!
//! Non-planarity is realized by a canonical form: the two children of every
//! binary vertex are stored in the order induced by the total order on
//! canonical encodings, so structural equality coincides with equality up to
//! child swaps. The operad engine keeps planar (construction-ordered) trees
//! internally and canonicalizes at comparison boundaries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::label::{InternalLabel, LeafLabel};

/// Address of a vertex: the sequence of child indices from the root, in
/// canonical order. The root has the empty path.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub Vec<u8>);

impl VertexId {
    pub fn root() -> Self {
        VertexId(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u8) -> VertexId {
        let mut path = self.0.clone();
        path.push(i);
        VertexId(path)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// True when `self` is an ancestor of `other` or equal to it.
    pub fn contains(&self, other: &VertexId) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// True when the two subtrees at these vertices share a vertex.
    pub fn overlaps(&self, other: &VertexId) -> bool {
        self.contains(other) || other.contains(self)
    }

    pub fn parent(&self) -> Option<VertexId> {
        if self.0.is_empty() {
            None
        } else {
            Some(VertexId(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn parse(text: &str) -> Option<VertexId> {
        if text.is_empty() || text == "e" {
            return Some(VertexId::root());
        }
        let mut path = Vec::new();
        for part in text.split('.') {
            match part {
                "0" => path.push(0),
                "1" => path.push(1),
                _ => return None,
            }
        }
        Some(VertexId(path))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Map from old vertex addresses to new ones across a tree surgery.
pub type VertexMap = BTreeMap<VertexId, VertexId>;

/// A finite rooted tree in which every vertex has 0, 1, or 2 children.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(LeafLabel),
    Unary { label: Option<InternalLabel>, child: Box<Tree> },
    Binary { label: Option<InternalLabel>, left: Box<Tree>, right: Box<Tree> },
}

/// Total-order-comparable canonical encoding of a tree; equal up to child
/// swaps if and only if the encodings are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalEncoding(pub String);

impl fmt::Display for CanonicalEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("extraction vertices overlap: {0} and {1}")]
    Overlap(VertexId, VertexId),
    #[error("root mixed with other extraction vertices")]
    RootMix,
    #[error("vertex not found: {0}")]
    VertexNotFound(VertexId),
    #[error("rho-quotient would leave vertex {0} with no children")]
    WouldOrphan(VertexId),
    #[error("cannot root-cut a single leaf")]
    LeafCut,
    #[error("cannot graft a forest with {0} components under a binary discipline")]
    GraftArity(usize),
    #[error("cannot graft an empty forest")]
    EmptyForest,
}

/// Which quotient to take when removing extracted subtrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientMode {
    /// Shrink each extracted subtree to its vertex, relabeled as a trace.
    C,
    /// Delete each extracted subtree; its parent becomes a unary vertex and
    /// keeps its internal label.
    Rho,
    /// As `Rho`, then contract every unary vertex (the child replaces the
    /// parent, whose label is discarded).
    D,
}

impl Tree {
    pub fn leaf(label: LeafLabel) -> Tree {
        Tree::Leaf(label)
    }

    pub fn atom(name: impl Into<String>) -> Tree {
        Tree::Leaf(LeafLabel::Atom { atom: crate::label::SynAtom::new(name) })
    }

    pub fn feature_leaf(f: crate::label::Feature) -> Tree {
        Tree::Leaf(LeafLabel::Feature { feature: f })
    }

    pub fn hole() -> Tree {
        Tree::Leaf(LeafLabel::Hole)
    }

    pub fn unary(label: Option<InternalLabel>, child: Tree) -> Tree {
        Tree::Unary { label, child: Box::new(child) }
    }

    /// Binary vertex in canonical child order.
    pub fn binary(label: Option<InternalLabel>, a: Tree, b: Tree) -> Tree {
        if a.canonical_key() <= b.canonical_key() {
            Tree::Binary { label, left: Box::new(a), right: Box::new(b) }
        } else {
            Tree::Binary { label, left: Box::new(b), right: Box::new(a) }
        }
    }

    /// Sort key for canonical child order: smaller trees first, ties broken
    /// by the encoding string.
    fn canonical_key(&self) -> (usize, CanonicalEncoding) {
        (self.leaf_count(), self.encoding())
    }

    /// Binary vertex that keeps the given child order. Used by the operad
    /// engine, where leaf positions carry the argument assignment.
    pub fn binary_planar(label: Option<InternalLabel>, left: Tree, right: Tree) -> Tree {
        Tree::Binary { label, left: Box::new(left), right: Box::new(right) }
    }

    pub fn label(&self) -> Option<&InternalLabel> {
        match self {
            Tree::Leaf(_) => None,
            Tree::Unary { label, .. } | Tree::Binary { label, .. } => label.as_ref(),
        }
    }

    pub fn leaf_label(&self) -> Option<&LeafLabel> {
        match self {
            Tree::Leaf(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn children(&self) -> Vec<&Tree> {
        match self {
            Tree::Leaf(_) => Vec::new(),
            Tree::Unary { child, .. } => vec![child],
            Tree::Binary { left, right, .. } => vec![left, right],
        }
    }

    /// Number of leaves.
    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Unary { child, .. } => child.leaf_count(),
            Tree::Binary { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.vertex_count()).sum::<usize>()
    }

    /// True when no vertex is unary.
    pub fn is_full_binary(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Unary { .. } => false,
            Tree::Binary { left, right, .. } => left.is_full_binary() && right.is_full_binary(),
        }
    }

    pub fn contains_unary(&self) -> bool {
        match self {
            Tree::Leaf(_) => false,
            Tree::Unary { .. } => true,
            Tree::Binary { left, right, .. } => left.contains_unary() || right.contains_unary(),
        }
    }

    pub fn subtree(&self, v: &VertexId) -> Option<&Tree> {
        let mut cur = self;
        for &i in &v.0 {
            cur = match (cur, i) {
                (Tree::Unary { child, .. }, 0) => child,
                (Tree::Binary { left, .. }, 0) => left,
                (Tree::Binary { right, .. }, 1) => right,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// All vertex addresses in depth-first pre-order.
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        self.collect_vertices(&VertexId::root(), &mut out);
        out
    }

    fn collect_vertices(&self, at: &VertexId, out: &mut Vec<VertexId>) {
        out.push(at.clone());
        for (i, c) in self.children().into_iter().enumerate() {
            c.collect_vertices(&at.child(i as u8), out);
        }
    }

    /// Leaf addresses with their labels, in depth-first order.
    pub fn leaves(&self) -> Vec<(VertexId, &LeafLabel)> {
        let mut out = Vec::new();
        self.collect_leaves(&VertexId::root(), &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, at: &VertexId, out: &mut Vec<(VertexId, &'a LeafLabel)>) {
        match self {
            Tree::Leaf(l) => out.push((at.clone(), l)),
            _ => {
                for (i, c) in self.children().into_iter().enumerate() {
                    c.collect_leaves(&at.child(i as u8), out);
                }
            }
        }
    }

    /// True when the stored child order is already canonical everywhere.
    pub fn is_canonical(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Unary { child, .. } => child.is_canonical(),
            Tree::Binary { left, right, .. } => {
                left.is_canonical()
                    && right.is_canonical()
                    && left.canonical_key() <= right.canonical_key()
            }
        }
    }

    /// Rebuild with children sorted into canonical order.
    pub fn canonicalize(&self) -> Tree {
        match self {
            Tree::Leaf(_) => self.clone(),
            Tree::Unary { label, child } => Tree::unary(label.clone(), child.canonicalize()),
            Tree::Binary { label, left, right } => {
                Tree::binary(label.clone(), left.canonicalize(), right.canonicalize())
            }
        }
    }

    /// Canonical encoding: the text form of the canonical tree.
    pub fn encoding(&self) -> CanonicalEncoding {
        if self.is_canonical() {
            CanonicalEncoding(self.to_string())
        } else {
            CanonicalEncoding(self.canonicalize().to_string())
        }
    }

    /// Canonicalize while tracking where every vertex ends up.
    pub fn canonicalize_with_map(&self) -> (Tree, VertexMap) {
        fn go(t: &Tree) -> (Tree, Vec<(VertexId, VertexId)>) {
            match t {
                Tree::Leaf(_) => (t.clone(), vec![(VertexId::root(), VertexId::root())]),
                Tree::Unary { label, child } => {
                    let (c, m) = go(child);
                    let mut map = vec![(VertexId::root(), VertexId::root())];
                    for (o, n) in m {
                        map.push((prefix(0, &o), prefix(0, &n)));
                    }
                    (Tree::Unary { label: label.clone(), child: Box::new(c) }, map)
                }
                Tree::Binary { label, left, right } => {
                    let (l, ml) = go(left);
                    let (r, mr) = go(right);
                    let swap = l.canonical_key() > r.canonical_key();
                    let (new_l, new_r) = if swap { (r, l) } else { (l, r) };
                    let mut map = vec![(VertexId::root(), VertexId::root())];
                    let (side_l, side_r) = if swap { (1, 0) } else { (0, 1) };
                    for (o, n) in ml {
                        map.push((prefix(0, &o), prefix(side_l, &n)));
                    }
                    for (o, n) in mr {
                        map.push((prefix(1, &o), prefix(side_r, &n)));
                    }
                    (
                        Tree::Binary {
                            label: label.clone(),
                            left: Box::new(new_l),
                            right: Box::new(new_r),
                        },
                        map,
                    )
                }
            }
        }
        fn prefix(i: u8, v: &VertexId) -> VertexId {
            let mut path = Vec::with_capacity(v.0.len() + 1);
            path.push(i);
            path.extend_from_slice(&v.0);
            VertexId(path)
        }
        let (t, pairs) = go(self);
        (t, pairs.into_iter().collect())
    }

    /// Replace the subtree at `at` and re-canonicalize, returning the new
    /// tree together with the address map for every surviving vertex.
    /// `at` itself maps to the root of the replacement.
    pub fn replace_at(&self, at: &VertexId, replacement: Tree) -> Result<(Tree, VertexMap), TreeError> {
        fn splice(t: &Tree, path: &[u8], replacement: &Tree) -> Option<Tree> {
            if path.is_empty() {
                return Some(replacement.clone());
            }
            match (t, path[0]) {
                (Tree::Unary { label, child }, 0) => Some(Tree::Unary {
                    label: label.clone(),
                    child: Box::new(splice(child, &path[1..], replacement)?),
                }),
                (Tree::Binary { label, left, right }, 0) => Some(Tree::Binary {
                    label: label.clone(),
                    left: Box::new(splice(left, &path[1..], replacement)?),
                    right: right.clone(),
                }),
                (Tree::Binary { label, left, right }, 1) => Some(Tree::Binary {
                    label: label.clone(),
                    left: left.clone(),
                    right: Box::new(splice(right, &path[1..], replacement)?),
                }),
                _ => None,
            }
        }
        let spliced = splice(self, &at.0, &replacement)
            .ok_or_else(|| TreeError::VertexNotFound(at.clone()))?;
        let (canon, full_map) = spliced.canonicalize_with_map();
        let map = full_map
            .into_iter()
            .filter(|(old, _)| !at.contains(old) || old == at)
            .collect();
        Ok((canon, map))
    }

    /// Relabel the internal vertex at `at` in place (leaves are rejected).
    pub fn relabel_at(&self, at: &VertexId, label: Option<InternalLabel>) -> Result<Tree, TreeError> {
        let target = self.subtree(at).ok_or_else(|| TreeError::VertexNotFound(at.clone()))?;
        let replacement = match target {
            Tree::Leaf(_) => return Err(TreeError::VertexNotFound(at.clone())),
            Tree::Unary { child, .. } => Tree::Unary { label, child: child.clone() },
            Tree::Binary { left, right, .. } => {
                Tree::Binary { label, left: left.clone(), right: right.clone() }
            }
        };
        Ok(self.replace_at(at, replacement)?.0)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(l) => match l {
                LeafLabel::Atom { atom } => write!(f, "{atom}"),
                LeafLabel::Feature { feature } => write!(f, "{feature}"),
                LeafLabel::Boundary { bundle, atom } => write!(f, "{{{bundle} @ {atom}}}"),
                LeafLabel::Hole => write!(f, "*"),
                LeafLabel::Trace { origin } => write!(f, "~[{origin}]"),
            },
            Tree::Unary { label, child } => match label {
                None => write!(f, "({child})"),
                Some(InternalLabel::Bundle { bundle }) => write!(f, "{{{bundle}| {child}}}"),
                Some(InternalLabel::Boundary { bundle, atom }) => {
                    write!(f, "{{{bundle} @ {atom}| {child}}}")
                }
            },
            Tree::Binary { label, left, right } => match label {
                None => write!(f, "({left} {right})"),
                Some(InternalLabel::Bundle { bundle }) => write!(f, "{{{bundle}| {left} {right}}}"),
                Some(InternalLabel::Boundary { bundle, atom }) => {
                    write!(f, "{{{bundle} @ {atom}| {left} {right}}}")
                }
            },
        }
    }
}

/// A finite multiset of trees. The empty forest is the unit of `⊔`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest(Vec<Tree>);

impl Forest {
    pub fn unit() -> Forest {
        Forest(Vec::new())
    }

    pub fn singleton(t: Tree) -> Forest {
        Forest(vec![t])
    }

    /// Build from components, sorting them into canonical order.
    pub fn from_trees<I: IntoIterator<Item = Tree>>(iter: I) -> Forest {
        let mut v: Vec<Tree> = iter.into_iter().collect();
        v.sort();
        Forest(v)
    }

    pub fn components(&self) -> &[Tree] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_leaves(&self) -> usize {
        self.0.iter().map(|t| t.leaf_count()).sum()
    }

    /// Disjoint union of two workspaces.
    pub fn union(&self, other: &Forest) -> Forest {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        Forest(v)
    }

    /// Remove one occurrence of each tree in `other`, if present.
    pub fn remove_multiset(&self, other: &Forest) -> Option<Forest> {
        let mut v = self.0.clone();
        for t in other.components() {
            let idx = v.iter().position(|x| x == t)?;
            v.remove(idx);
        }
        Some(Forest(v))
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for t in &self.0 {
            if !first {
                write!(f, " ⊔ ")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromIterator<Tree> for Forest {
    fn from_iter<I: IntoIterator<Item = Tree>>(iter: I) -> Self {
        Forest::from_trees(iter)
    }
}

/// Every accessible term of `t`: the pairs `(v, T_v)` with `T_v` the full
/// subtree below `v`, including the root pair.
pub fn accessible_terms(t: &Tree) -> Vec<(VertexId, Tree)> {
    t.vertices()
        .into_iter()
        .map(|v| {
            let sub = t.subtree(&v).expect("vertex from enumeration").clone();
            (v, sub)
        })
        .collect()
}

/// All sets of vertices with pairwise disjoint subtrees, including the empty
/// set and the root singleton, in deterministic canonical order.
pub fn nonoverlapping_vertex_sets(t: &Tree) -> Vec<BTreeSet<VertexId>> {
    fn go(t: &Tree, at: &VertexId) -> Vec<BTreeSet<VertexId>> {
        let mut out = vec![BTreeSet::from([at.clone()])];
        // Antichains avoiding this vertex: one independent choice per child.
        let mut partial: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new()];
        for (i, c) in t.children().into_iter().enumerate() {
            let child_sets = go(c, &at.child(i as u8));
            let mut next = Vec::with_capacity(partial.len() * child_sets.len());
            for base in &partial {
                for cs in &child_sets {
                    let mut s = base.clone();
                    s.extend(cs.iter().cloned());
                    next.push(s);
                }
            }
            partial = next;
        }
        out.extend(partial);
        out
    }
    let mut sets = go(t, &VertexId::root());
    sets.sort_by(|a, b| (a.len(), a.iter().collect::<Vec<_>>()).cmp(&(b.len(), b.iter().collect::<Vec<_>>())));
    sets
}

fn validate_extraction(t: &Tree, extracted: &BTreeSet<VertexId>) -> Result<(), TreeError> {
    let verts: Vec<&VertexId> = extracted.iter().collect();
    for v in &verts {
        if t.subtree(v).is_none() {
            return Err(TreeError::VertexNotFound((*v).clone()));
        }
    }
    if extracted.iter().any(|v| v.is_root()) && extracted.len() > 1 {
        return Err(TreeError::RootMix);
    }
    for (i, v) in verts.iter().enumerate() {
        for w in &verts[i + 1..] {
            if v.overlaps(w) {
                return Err(TreeError::Overlap((*v).clone(), (*w).clone()));
            }
        }
    }
    Ok(())
}

/// Quotient `t` by a non-overlapping set of extracted vertices.
///
/// Returns `None` for the empty-tree marker (the forest unit), which arises
/// when the extraction is `{root}` or, in mode `D`, covers every leaf.
pub fn quotient(
    t: &Tree,
    extracted: &BTreeSet<VertexId>,
    mode: QuotientMode,
) -> Result<Option<Tree>, TreeError> {
    validate_extraction(t, extracted)?;
    if extracted.is_empty() {
        return Ok(Some(t.clone()));
    }
    if extracted.iter().any(|v| v.is_root()) {
        return Ok(None);
    }

    fn go(
        t: &Tree,
        at: &VertexId,
        extracted: &BTreeSet<VertexId>,
        mode: QuotientMode,
    ) -> Result<Option<Tree>, TreeError> {
        if extracted.contains(at) {
            return match mode {
                QuotientMode::C => Ok(Some(Tree::Leaf(LeafLabel::Trace {
                    origin: t.encoding().0,
                }))),
                QuotientMode::Rho | QuotientMode::D => Ok(None),
            };
        }
        match t {
            Tree::Leaf(_) => Ok(Some(t.clone())),
            Tree::Unary { label, child } => {
                match go(child, &at.child(0), extracted, mode)? {
                    Some(c) => Ok(Some(match mode {
                        QuotientMode::D => c,
                        _ => Tree::unary(label.clone(), c),
                    })),
                    None => match mode {
                        QuotientMode::Rho => Err(TreeError::WouldOrphan(at.clone())),
                        // Mode D prunes the emptied chain entirely.
                        _ => Ok(None),
                    },
                }
            }
            Tree::Binary { label, left, right } => {
                let l = go(left, &at.child(0), extracted, mode)?;
                let r = go(right, &at.child(1), extracted, mode)?;
                match (l, r) {
                    (Some(l), Some(r)) => Ok(Some(Tree::binary(label.clone(), l, r))),
                    (Some(c), None) | (None, Some(c)) => Ok(Some(match mode {
                        QuotientMode::D => c,
                        _ => Tree::unary(label.clone(), c),
                    })),
                    (None, None) => match mode {
                        QuotientMode::Rho => Err(TreeError::WouldOrphan(at.clone())),
                        _ => Ok(None),
                    },
                }
            }
        }
    }
    go(t, &VertexId::root(), extracted, mode)
}

/// Graft a forest to a common (unlabeled) root.
pub fn graft(f: &Forest) -> Result<Tree, TreeError> {
    match f.components() {
        [] => Err(TreeError::EmptyForest),
        [t] => Ok(Tree::unary(None, t.clone())),
        [a, b] => Ok(Tree::binary(None, a.clone(), b.clone())),
        comps => Err(TreeError::GraftArity(comps.len())),
    }
}

/// Cut all edges below the root, returning the forest of child subtrees.
pub fn root_cut(t: &Tree) -> Result<Forest, TreeError> {
    match t {
        Tree::Leaf(_) => Err(TreeError::LeafCut),
        Tree::Unary { child, .. } => Ok(Forest::singleton((**child).clone())),
        Tree::Binary { left, right, .. } => {
            Ok(Forest::from_trees([(**left).clone(), (**right).clone()]))
        }
    }
}

/// Contract every unary vertex, discarding its label. Shared by the `D`
/// quotient law checks.
pub fn contract_unary(t: &Tree) -> Tree {
    match t {
        Tree::Leaf(_) => t.clone(),
        Tree::Unary { child, .. } => contract_unary(child),
        Tree::Binary { label, left, right } => {
            Tree::binary(label.clone(), contract_unary(left), contract_unary(right))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Feature;

    fn so(text: &str) -> Tree {
        crate::notation::parse_tree(text, crate::notation::LeafContext::Syntax).unwrap()
    }

    #[test]
    fn canonicalize_commutative() {
        let ab = Tree::binary(None, Tree::atom("a"), Tree::atom("b"));
        let ba = Tree::binary(None, Tree::atom("b"), Tree::atom("a"));
        assert_eq!(ab.encoding(), ba.encoding());
        assert_eq!(ab, ba);
    }

    #[test]
    fn canonicalize_nonassociative() {
        let l = Tree::binary(None, Tree::atom("a"), Tree::binary(None, Tree::atom("b"), Tree::atom("c")));
        let r = Tree::binary(None, Tree::binary(None, Tree::atom("a"), Tree::atom("b")), Tree::atom("c"));
        assert_ne!(l.encoding(), r.encoding());
    }

    #[test]
    fn four_leaf_planar_trees_give_fifteen_classes() {
        // Oracle: enumerate all planar binary trees on the ordered leaves of
        // each permutation of {a,b,c,d} and count canonical classes.
        fn planar_trees(leaves: &[Tree]) -> Vec<Tree> {
            if leaves.len() == 1 {
                return vec![leaves[0].clone()];
            }
            let mut out = Vec::new();
            for split in 1..leaves.len() {
                for l in planar_trees(&leaves[..split]) {
                    for r in planar_trees(&leaves[split..]) {
                        out.push(Tree::binary_planar(None, l.clone(), r.clone()));
                    }
                }
            }
            out
        }
        fn permutations(items: &[Tree]) -> Vec<Vec<Tree>> {
            if items.len() <= 1 {
                return vec![items.to_vec()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                for mut p in permutations(&rest) {
                    p.insert(0, x.clone());
                    out.push(p);
                }
            }
            out
        }
        let leaves: Vec<Tree> = ["a", "b", "c", "d"].iter().map(|s| Tree::atom(*s)).collect();
        let mut all = Vec::new();
        for p in permutations(&leaves) {
            all.extend(planar_trees(&p));
        }
        assert_eq!(all.len(), 120);
        let classes: BTreeSet<CanonicalEncoding> = all.iter().map(|t| t.encoding()).collect();
        assert_eq!(classes.len(), 15);

        // All child-swap variants of a single labeled shape collapse to one class.
        let base = so("(((a b) c) d)");
        let mut variants = BTreeSet::new();
        for mask in 0..8u8 {
            fn build(t: &Tree, mask: u8, idx: &mut u8) -> Tree {
                match t {
                    Tree::Binary { label, left, right } => {
                        let bit = *idx;
                        *idx += 1;
                        let l = build(left, mask, idx);
                        let r = build(right, mask, idx);
                        if mask & (1 << bit) != 0 {
                            Tree::binary_planar(label.clone(), r, l)
                        } else {
                            Tree::binary_planar(label.clone(), l, r)
                        }
                    }
                    _ => t.clone(),
                }
            }
            let mut idx = 0;
            variants.insert(build(&base, mask, &mut idx).encoding());
        }
        assert_eq!(variants.len(), 1);
    }

    #[test]
    fn accessible_terms_listing() {
        let t = so("(a (b c))");
        let terms = accessible_terms(&t);
        assert_eq!(terms.len(), 5);
        let subs: BTreeSet<String> = terms.iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(
            subs,
            BTreeSet::from([
                "(a (b c))".to_string(),
                "a".to_string(),
                "(b c)".to_string(),
                "b".to_string(),
                "c".to_string()
            ])
        );
        let leaf = Tree::atom("a");
        assert_eq!(accessible_terms(&leaf).len(), 1);
    }

    #[test]
    fn accessible_term_count_matches_vertex_formula() {
        // 2n - 1 vertices for a full binary tree with n leaves, n <= 6.
        let mut trees: Vec<Vec<Tree>> = vec![vec![], vec![Tree::atom("a")]];
        for n in 2..=6usize {
            let mut level = Vec::new();
            for i in 1..n {
                for l in &trees[i] {
                    for r in &trees[n - i] {
                        level.push(Tree::binary(None, l.clone(), r.clone()));
                    }
                }
            }
            level.sort();
            level.dedup();
            trees.push(level);
        }
        for n in 1..=6usize {
            for t in &trees[n] {
                assert_eq!(accessible_terms(t).len(), 2 * n - 1);
            }
        }
    }

    #[test]
    fn nonoverlapping_sets_for_cherry() {
        let t = so("(a b)");
        let sets = nonoverlapping_vertex_sets(&t);
        assert_eq!(sets.len(), 5);
        let leaf = Tree::atom("a");
        assert_eq!(nonoverlapping_vertex_sets(&leaf).len(), 2);
        // descendants are excluded
        for s in &sets {
            let v: Vec<&VertexId> = s.iter().collect();
            for (i, a) in v.iter().enumerate() {
                for b in &v[i + 1..] {
                    assert!(!a.overlaps(b));
                }
            }
        }
    }

    #[test]
    fn quotient_modes() {
        let t = so("(a b)");
        let a = VertexId(vec![0]);
        // empty extraction is the identity
        assert_eq!(quotient(&t, &BTreeSet::new(), QuotientMode::D).unwrap(), Some(t.clone()));
        // D contracts the surviving unary chain
        let q = quotient(&t, &BTreeSet::from([a.clone()]), QuotientMode::D).unwrap();
        assert_eq!(q.unwrap().to_string(), "b");
        // root extraction yields the unit
        assert_eq!(quotient(&t, &BTreeSet::from([VertexId::root()]), QuotientMode::D).unwrap(), None);
        // overlap is rejected
        let err = quotient(&t, &BTreeSet::from([VertexId::root(), a.clone()]), QuotientMode::D);
        assert!(matches!(err, Err(TreeError::RootMix)));
    }

    #[test]
    fn quotient_rho_keeps_bundle_at_unary_vertex() {
        // {alpha,beta,gamma,delta| alpha {beta,gamma,delta| beta {gamma,delta| gamma delta}}}
        let t = crate::morph::MorphObject::from_nested(&[
            "alpha", "beta", "gamma", "delta",
        ])
        .tree()
        .clone();
        let beta = t
            .leaves()
            .into_iter()
            .find(|(_, l)| matches!(l, LeafLabel::Feature { feature } if feature.category == "beta"))
            .unwrap()
            .0;
        let q = quotient(&t, &BTreeSet::from([beta]), QuotientMode::Rho).unwrap().unwrap();
        assert_eq!(
            q.to_string(),
            "{alpha+,beta+,delta+,gamma+| alpha+ {beta+,delta+,gamma+| {delta+,gamma+| delta+ gamma+}}}"
        );
    }

    #[test]
    fn quotient_rho_refuses_to_orphan() {
        let t = so("(a b)");
        let both = BTreeSet::from([VertexId(vec![0]), VertexId(vec![1])]);
        assert!(matches!(
            quotient(&t, &both, QuotientMode::Rho),
            Err(TreeError::WouldOrphan(_))
        ));
        // mode D handles the same set by pruning to the unit
        assert_eq!(quotient(&t, &both, QuotientMode::D).unwrap(), None);
    }

    #[test]
    fn quotient_c_leaves_trace() {
        let t = so("(a (b c))");
        let inner = VertexId(vec![1]);
        let q = quotient(&t, &BTreeSet::from([inner]), QuotientMode::C).unwrap().unwrap();
        assert_eq!(q.to_string(), "(a ~[(b c)])");
    }

    #[test]
    fn graft_and_root_cut() {
        let a = Tree::atom("a");
        let b = Tree::atom("b");
        let f = Forest::from_trees([a.clone(), b.clone()]);
        let g = graft(&f).unwrap();
        assert_eq!(g.to_string(), "(a b)");
        assert_eq!(root_cut(&g).unwrap(), f);

        let single = Forest::singleton(a.clone());
        let g1 = graft(&single).unwrap();
        assert_eq!(root_cut(&g1).unwrap(), single);

        let three = Forest::from_trees([a.clone(), b.clone(), Tree::atom("c")]);
        assert!(matches!(graft(&three), Err(TreeError::GraftArity(3))));
        assert!(matches!(graft(&Forest::unit()), Err(TreeError::EmptyForest)));
        assert!(matches!(root_cut(&a), Err(TreeError::LeafCut)));
    }

    #[test]
    fn rho_then_contraction_equals_d() {
        // brute force over all admissible extractions of trees up to 7 leaves
        let feats = [Feature::plus("f"), Feature::plus("g")];
        let mut trees: Vec<Vec<Tree>> = vec![vec![], feats.iter().map(|f| Tree::feature_leaf(f.clone())).collect()];
        for n in 2..=4usize {
            let mut level = Vec::new();
            for i in 1..n {
                for l in &trees[i] {
                    for r in &trees[n - i] {
                        level.push(Tree::binary(None, l.clone(), r.clone()));
                    }
                }
            }
            level.sort();
            level.dedup();
            trees.push(level);
        }
        let mut checked = 0;
        for n in 1..=4usize {
            for t in &trees[n] {
                for set in nonoverlapping_vertex_sets(t) {
                    if let Ok(rho) = quotient(t, &set, QuotientMode::Rho) {
                        let d = quotient(t, &set, QuotientMode::D).unwrap();
                        let contracted = rho.map(|x| contract_unary(&x));
                        assert_eq!(contracted, d);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn d_quotient_preserves_surviving_leaves() {
        let t = so("((a b) (c d))");
        for set in nonoverlapping_vertex_sets(&t) {
            let removed: usize = set
                .iter()
                .map(|v| t.subtree(v).unwrap().leaf_count())
                .sum();
            let q = quotient(&t, &set, QuotientMode::D).unwrap();
            let left = q.map(|x| x.leaf_count()).unwrap_or(0);
            assert_eq!(left, t.leaf_count() - removed);
        }
    }

    #[test]
    fn replace_at_tracks_vertices() {
        let t = so("(a (b c))");
        // replace leaf c with (x y); children of the inner vertex re-sort
        let target = VertexId(vec![1, 1]);
        let (new, map) = t.replace_at(&target, so("(x y)")).unwrap();
        assert_eq!(new.to_string(), "(a (b (x y)))");
        // the surviving leaf b keeps a valid address under the map
        let new_b = map.get(&VertexId(vec![1, 0])).unwrap();
        assert_eq!(new.subtree(new_b).unwrap().to_string(), "b");
        // the replaced vertex maps to the root of the replacement
        let new_target = map.get(&target).unwrap();
        assert_eq!(new.subtree(new_target).unwrap().to_string(), "(x y)");
    }
}

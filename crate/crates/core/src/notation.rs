//! Text and JSON formats for trees, forests and sums.
//!
//! Text grammar (the module-wide notation):
//!
//! ```text
//! leaf      = identifier                      an atom (syntactic context)
//!           | identifier ('+'|'-'|'u')        a feature (morphological context)
//!           | '*'                             an operad hole
//!           | '~[' encoding ']'               a trace
//!           | '{' bundle '@' atom '}'         a boundary leaf
//! tree      = leaf
//!           | '(' tree ')'                    unlabeled unary vertex
//!           | '(' tree tree ')'               unlabeled binary vertex
//!           | '{' bundle '|' tree [tree] '}'          bundle-labeled vertex
//!           | '{' bundle '@' atom '|' tree [tree] '}' boundary vertex
//! forest    = '1' | tree ('⊔' tree)*
//! bundle    = feature (',' feature)*
//! ```
//!
//! JSON uses `{kind, label, children}` objects and round-trips bit-exactly.

use serde_json::{json, Value};
use thiserror::Error;

use crate::label::{Feature, FeatureBundle, InternalLabel, LeafLabel, SynAtom, Valuation};
use crate::tree::{Forest, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotationError {
    #[error("syntax error at byte {at}: {message}")]
    Syntax { at: usize, message: String },
    #[error("malformed json value: {0}")]
    Json(String),
}

/// What a bare or suffixed identifier at a leaf denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafContext {
    /// Bare identifiers are atoms; feature suffixes are rejected.
    Syntax,
    /// Identifiers must carry a valuation suffix and denote features.
    Morphology,
    /// Decided per leaf: suffixed identifiers are features, bare ones atoms.
    Mixed,
}

struct Parser<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    ctx: LeafContext,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, ctx: LeafContext) -> Self {
        Parser { text, chars: text.char_indices().collect(), pos: 0, ctx }
    }

    fn err(&self, message: impl Into<String>) -> NotationError {
        let at = self.chars.get(self.pos).map(|(i, _)| *i).unwrap_or(self.text.len());
        NotationError::Syntax { at, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), NotationError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String, NotationError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '\'') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().map(|(_, c)| c).collect())
    }

    /// An identifier whose final character is a valuation suffix.
    fn feature(&mut self) -> Result<Feature, NotationError> {
        let word = self.ident()?;
        let mut it = word.chars();
        let last = it.next_back().ok_or_else(|| self.err("empty feature"))?;
        let category: String = it.collect();
        // '+' and '-' terminate the identifier scan, so only 'u' arrives here.
        if last == 'u' && !category.is_empty() {
            return Ok(Feature::new(category, Valuation::Unvalued));
        }
        match self.peek() {
            Some(c @ ('+' | '-')) => {
                self.pos += 1;
                Ok(Feature::new(word, Valuation::from_suffix(c).unwrap()))
            }
            _ => Err(self.err(format!("feature '{word}' needs a valuation suffix (+, - or u)"))),
        }
    }

    fn bundle(&mut self) -> Result<FeatureBundle, NotationError> {
        let mut bundle = FeatureBundle::new();
        self.skip_ws();
        // an empty bundle is written as nothing before '|' or '@'
        if matches!(self.peek(), Some('|') | Some('@')) {
            return Ok(bundle);
        }
        loop {
            bundle.insert(self.feature()?);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(bundle)
    }

    fn leaf_ident(&mut self) -> Result<LeafLabel, NotationError> {
        match self.ctx {
            LeafContext::Syntax => Ok(LeafLabel::Atom { atom: SynAtom::new(self.ident()?) }),
            LeafContext::Morphology => Ok(LeafLabel::Feature { feature: self.feature()? }),
            LeafContext::Mixed => {
                let save = self.pos;
                match self.feature() {
                    Ok(f) => Ok(LeafLabel::Feature { feature: f }),
                    Err(_) => {
                        self.pos = save;
                        Ok(LeafLabel::Atom { atom: SynAtom::new(self.ident()?) })
                    }
                }
            }
        }
    }

    fn trace(&mut self) -> Result<LeafLabel, NotationError> {
        self.expect('~')?;
        self.expect('[')?;
        let start = self.pos;
        let mut depth = 1usize;
        while depth > 0 {
            match self.bump() {
                Some('[') => depth += 1,
                Some(']') => depth -= 1,
                Some(_) => {}
                None => return Err(self.err("unterminated trace")),
            }
        }
        let origin: String = self.chars[start..self.pos - 1].iter().map(|(_, c)| c).collect();
        Ok(LeafLabel::Trace { origin })
    }

    fn tree(&mut self) -> Result<Tree, NotationError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let first = self.tree()?;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Tree::unary(None, first));
                }
                let second = self.tree()?;
                self.expect(')')?;
                Ok(Tree::binary(None, first, second))
            }
            Some('{') => {
                self.pos += 1;
                let prev = self.ctx;
                self.ctx = LeafContext::Mixed;
                let bundle = self.bundle()?;
                self.skip_ws();
                let atom = if self.peek() == Some('@') {
                    self.pos += 1;
                    Some(SynAtom::new(self.ident()?))
                } else {
                    None
                };
                self.skip_ws();
                match self.peek() {
                    Some('}') => {
                        self.pos += 1;
                        self.ctx = prev;
                        match atom {
                            Some(atom) => Ok(Tree::leaf(LeafLabel::Boundary { bundle, atom })),
                            None => Err(self.err("a bundle label needs children; write {b| ...}")),
                        }
                    }
                    Some('|') => {
                        self.pos += 1;
                        let label = match atom {
                            Some(atom) => InternalLabel::Boundary { bundle, atom },
                            None => InternalLabel::Bundle { bundle },
                        };
                        let first = self.tree()?;
                        self.skip_ws();
                        let node = if self.peek() == Some('}') {
                            Tree::unary(Some(label), first)
                        } else {
                            let second = self.tree()?;
                            Tree::binary(Some(label), first, second)
                        };
                        self.expect('}')?;
                        self.ctx = prev;
                        Ok(node)
                    }
                    _ => Err(self.err("expected '|' or '}' in labeled vertex")),
                }
            }
            Some('*') => {
                self.pos += 1;
                Ok(Tree::leaf(LeafLabel::Hole))
            }
            Some('~') => Ok(Tree::leaf(self.trace()?)),
            Some(_) => Ok(Tree::leaf(self.leaf_ident()?)),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn forest(&mut self) -> Result<Forest, NotationError> {
        self.skip_ws();
        if self.peek() == Some('1') {
            // lone '1' is the unit; '1' followed by ident chars is an identifier
            if !matches!(self.chars.get(self.pos + 1), Some((_, c)) if c.is_alphanumeric() || *c == '_') {
                self.pos += 1;
                self.skip_ws();
                if self.peek().is_none() {
                    return Ok(Forest::unit());
                }
                return Err(self.err("the unit forest stands alone"));
            }
        }
        let mut trees = vec![self.tree()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('⊔') => {
                    self.pos += 1;
                    trees.push(self.tree()?);
                }
                None => break,
                Some(_) => return Err(self.err("expected '⊔' between forest components")),
            }
        }
        Ok(Forest::from_trees(trees))
    }

    fn finish(&mut self) -> Result<(), NotationError> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

/// Parse a single tree, canonicalizing child order.
pub fn parse_tree(text: &str, ctx: LeafContext) -> Result<Tree, NotationError> {
    let mut p = Parser::new(text, ctx);
    let t = p.tree()?;
    p.finish()?;
    Ok(t.canonicalize())
}

/// Parse a forest (`1` for the unit).
pub fn parse_forest(text: &str, ctx: LeafContext) -> Result<Forest, NotationError> {
    let mut p = Parser::new(text, ctx);
    let f = p.forest()?;
    p.finish()?;
    Ok(Forest::from_trees(f.components().iter().map(|t| t.canonicalize())))
}

fn leaf_label_json(l: &LeafLabel) -> Value {
    match l {
        LeafLabel::Atom { atom } => json!({"type": "atom", "name": atom.0}),
        LeafLabel::Feature { feature } => json!({
            "type": "feature",
            "category": feature.category,
            "valuation": valuation_str(feature.valuation),
        }),
        LeafLabel::Boundary { bundle, atom } => json!({
            "type": "boundary",
            "bundle": bundle_json(bundle),
            "atom": atom.0,
        }),
        LeafLabel::Hole => json!({"type": "hole"}),
        LeafLabel::Trace { origin } => json!({"type": "trace", "origin": origin}),
    }
}

fn internal_label_json(l: &InternalLabel) -> Value {
    match l {
        InternalLabel::Bundle { bundle } => json!({"type": "bundle", "bundle": bundle_json(bundle)}),
        InternalLabel::Boundary { bundle, atom } => json!({
            "type": "boundary",
            "bundle": bundle_json(bundle),
            "atom": atom.0,
        }),
    }
}

fn bundle_json(b: &FeatureBundle) -> Value {
    Value::Array(
        b.iter()
            .map(|f| json!({"category": f.category, "valuation": valuation_str(f.valuation)}))
            .collect(),
    )
}

fn valuation_str(v: Valuation) -> &'static str {
    match v {
        Valuation::Plus => "plus",
        Valuation::Minus => "minus",
        Valuation::Unvalued => "unvalued",
    }
}

fn valuation_from_str(s: &str) -> Option<Valuation> {
    match s {
        "plus" => Some(Valuation::Plus),
        "minus" => Some(Valuation::Minus),
        "unvalued" => Some(Valuation::Unvalued),
        _ => None,
    }
}

/// Serialize a tree as a `{kind, label, children}` JSON value.
pub fn tree_to_json(t: &Tree) -> Value {
    match t {
        Tree::Leaf(l) => json!({"kind": "leaf", "label": leaf_label_json(l), "children": []}),
        Tree::Unary { label, child } => json!({
            "kind": "unary",
            "label": label.as_ref().map(internal_label_json).unwrap_or(Value::Null),
            "children": [tree_to_json(child)],
        }),
        Tree::Binary { label, left, right } => json!({
            "kind": "binary",
            "label": label.as_ref().map(internal_label_json).unwrap_or(Value::Null),
            "children": [tree_to_json(left), tree_to_json(right)],
        }),
    }
}

pub fn forest_to_json(f: &Forest) -> Value {
    json!({
        "kind": "forest",
        "components": f.components().iter().map(tree_to_json).collect::<Vec<_>>(),
    })
}

fn bundle_from_json(v: &Value) -> Result<FeatureBundle, NotationError> {
    let arr = v.as_array().ok_or_else(|| NotationError::Json("bundle must be an array".into()))?;
    let mut b = FeatureBundle::new();
    for f in arr {
        let category = f["category"]
            .as_str()
            .ok_or_else(|| NotationError::Json("feature category must be a string".into()))?;
        let valuation = f["valuation"]
            .as_str()
            .and_then(valuation_from_str)
            .ok_or_else(|| NotationError::Json("bad feature valuation".into()))?;
        b.insert(Feature::new(category, valuation));
    }
    Ok(b)
}

fn leaf_label_from_json(v: &Value) -> Result<LeafLabel, NotationError> {
    match v["type"].as_str() {
        Some("atom") => Ok(LeafLabel::Atom {
            atom: SynAtom::new(
                v["name"].as_str().ok_or_else(|| NotationError::Json("atom name".into()))?,
            ),
        }),
        Some("feature") => {
            let category = v["category"]
                .as_str()
                .ok_or_else(|| NotationError::Json("feature category".into()))?;
            let valuation = v["valuation"]
                .as_str()
                .and_then(valuation_from_str)
                .ok_or_else(|| NotationError::Json("feature valuation".into()))?;
            Ok(LeafLabel::Feature { feature: Feature::new(category, valuation) })
        }
        Some("boundary") => Ok(LeafLabel::Boundary {
            bundle: bundle_from_json(&v["bundle"])?,
            atom: SynAtom::new(
                v["atom"].as_str().ok_or_else(|| NotationError::Json("boundary atom".into()))?,
            ),
        }),
        Some("hole") => Ok(LeafLabel::Hole),
        Some("trace") => Ok(LeafLabel::Trace {
            origin: v["origin"]
                .as_str()
                .ok_or_else(|| NotationError::Json("trace origin".into()))?
                .to_string(),
        }),
        _ => Err(NotationError::Json("unknown leaf label type".into())),
    }
}

fn internal_label_from_json(v: &Value) -> Result<InternalLabel, NotationError> {
    match v["type"].as_str() {
        Some("bundle") => Ok(InternalLabel::Bundle { bundle: bundle_from_json(&v["bundle"])? }),
        Some("boundary") => Ok(InternalLabel::Boundary {
            bundle: bundle_from_json(&v["bundle"])?,
            atom: SynAtom::new(
                v["atom"].as_str().ok_or_else(|| NotationError::Json("boundary atom".into()))?,
            ),
        }),
        _ => Err(NotationError::Json("unknown internal label type".into())),
    }
}

pub fn tree_from_json(v: &Value) -> Result<Tree, NotationError> {
    let kind = v["kind"].as_str().ok_or_else(|| NotationError::Json("missing kind".into()))?;
    let children = v["children"]
        .as_array()
        .ok_or_else(|| NotationError::Json("missing children".into()))?;
    match kind {
        "leaf" => {
            if !children.is_empty() {
                return Err(NotationError::Json("leaf with children".into()));
            }
            Ok(Tree::leaf(leaf_label_from_json(&v["label"])?))
        }
        "unary" => {
            if children.len() != 1 {
                return Err(NotationError::Json("unary vertex needs one child".into()));
            }
            let label = if v["label"].is_null() {
                None
            } else {
                Some(internal_label_from_json(&v["label"])?)
            };
            Ok(Tree::unary(label, tree_from_json(&children[0])?))
        }
        "binary" => {
            if children.len() != 2 {
                return Err(NotationError::Json("binary vertex needs two children".into()));
            }
            let label = if v["label"].is_null() {
                None
            } else {
                Some(internal_label_from_json(&v["label"])?)
            };
            Ok(Tree::binary(label, tree_from_json(&children[0])?, tree_from_json(&children[1])?))
        }
        "forest" => Err(NotationError::Json("expected a tree, found a forest".into())),
        _ => Err(NotationError::Json(format!("unknown kind '{kind}'"))),
    }
}

pub fn forest_from_json(v: &Value) -> Result<Forest, NotationError> {
    if v["kind"].as_str() == Some("forest") {
        let comps = v["components"]
            .as_array()
            .ok_or_else(|| NotationError::Json("forest components".into()))?;
        let trees: Result<Vec<Tree>, NotationError> = comps.iter().map(tree_from_json).collect();
        Ok(Forest::from_trees(trees?))
    } else {
        Ok(Forest::singleton(tree_from_json(v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_syntactic_trees() {
        let t = parse_tree("(a (b c))", LeafContext::Syntax).unwrap();
        assert_eq!(t.to_string(), "(a (b c))");
        let swapped = parse_tree("((c b) a)", LeafContext::Syntax).unwrap();
        assert_eq!(t, swapped);
    }

    #[test]
    fn parses_bundles_and_boundaries() {
        let t = parse_tree("{alpha+,beta+| alpha+ beta+}", LeafContext::Morphology).unwrap();
        assert_eq!(t.to_string(), "{alpha+,beta+| alpha+ beta+}");
        let b = parse_tree("{phi+ @ N| phi+}", LeafContext::Mixed).unwrap();
        assert_eq!(b.to_string(), "{phi+ @ N| phi+}");
        let leafb = parse_tree("{phi+ @ N}", LeafContext::Mixed).unwrap();
        assert_eq!(leafb.to_string(), "{phi+ @ N}");
    }

    #[test]
    fn unvalued_suffix_and_unary() {
        let t = parse_tree("{PLu,PL+| (PLu)}", LeafContext::Morphology);
        // unlabeled unary inside a labeled vertex
        assert!(t.is_ok());
        let f = parse_tree("PLu", LeafContext::Morphology).unwrap();
        assert_eq!(f.to_string(), "PLu");
    }

    #[test]
    fn forest_notation() {
        let f = parse_forest("a ⊔ (b c)", LeafContext::Syntax).unwrap();
        assert_eq!(f.to_string(), "a ⊔ (b c)");
        assert_eq!(parse_forest("1", LeafContext::Syntax).unwrap(), Forest::unit());
    }

    #[test]
    fn rejects_unknown_garbage() {
        assert!(parse_tree("(a", LeafContext::Syntax).is_err());
        assert!(parse_tree("a)", LeafContext::Syntax).is_err());
        assert!(parse_tree("alpha", LeafContext::Morphology).is_err());
    }

    #[test]
    fn json_round_trip() {
        for text in [
            "(a (b c))",
            "{alpha+,beta+| alpha+ {beta+| beta+}}",
            "{phi+,gamma- @ T| phi+ gamma-}",
            "(* (a *))",
        ] {
            let t = parse_tree(text, LeafContext::Mixed).unwrap();
            let v = tree_to_json(&t);
            let back = tree_from_json(&v).unwrap();
            assert_eq!(t, back);
        }
    }
}

//! Labeled ordered forests and their parentheses representation.
//!
//! Nodes are identified by dense integers assigned in pre-order, so the
//! opening parenthesis of node `u` sits at position `2u - depth(u)` of the
//! parentheses sequence and its closing parenthesis `2 * size(u) - 1`
//! positions later.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a node within its forest (pre-order rank).
pub type NodeId = usize;

/// Interned node label.
///
/// Labels produced by an [`Interner`] are below [`FRESH_LABEL_BASE`]; labels at
/// or above it are reserved for synthetic nodes created by reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

/// First label of the namespace reserved for synthetic nodes.
pub const FRESH_LABEL_BASE: u32 = 1 << 31;

impl Label {
    pub fn is_fresh(self) -> bool {
        self.0 >= FRESH_LABEL_BASE
    }
}

/// Maps label texts to [`Label`] symbols and back.
#[derive(Clone, Debug, Default)]
pub struct Interner {
    map: HashMap<String, Label>,
    texts: Vec<String>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, text: &str) -> Label {
        if let Some(&label) = self.map.get(text) {
            return label;
        }
        let id = self.texts.len() as u32;
        assert!(id < FRESH_LABEL_BASE, "interner exhausted");
        let label = Label(id);
        self.texts.push(text.to_owned());
        self.map.insert(text.to_owned(), label);
        label
    }

    pub fn get(&self, text: &str) -> Option<Label> {
        self.map.get(text).copied()
    }

    pub fn text(&self, label: Label) -> Option<&str> {
        self.texts.get(label.0 as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }

    /// Renders a label for output; labels without text use `_<symbol>`.
    pub fn display(&self, label: Label) -> String {
        match self.text(label) {
            Some(text) => text.to_owned(),
            None => format!("_{}", label.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Open,
    Close,
}

/// One character of a parentheses sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Paren {
    pub side: Side,
    pub label: Label,
}

impl Paren {
    pub fn open(label: Label) -> Self {
        Paren { side: Side::Open, label }
    }

    pub fn close(label: Label) -> Self {
        Paren { side: Side::Close, label }
    }
}

/// Packs a parenthesis side and a class into one comparable symbol.
///
/// Opening and closing characters never compare equal.
#[inline]
pub fn symbol(side: Side, class: u32) -> u64 {
    ((class as u64) << 1) | (side == Side::Close) as u64
}

#[inline]
pub fn symbol_is_open(s: u64) -> bool {
    s & 1 == 0
}

#[inline]
pub fn symbol_class(s: u64) -> u32 {
    (s >> 1) as u32
}

/// An ordered forest with labeled nodes.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Forest {
    label: Vec<Label>,
    parent: Vec<Option<NodeId>>,
    size: Vec<usize>,
    depth: Vec<usize>,
    roots: Vec<NodeId>,
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.parens() {
            match p.side {
                Side::Open => write!(f, "({}", p.label.0)?,
                Side::Close => write!(f, ")")?,
            }
        }
        Ok(())
    }
}

impl Forest {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Single-node forest.
    pub fn leaf(label: Label) -> Self {
        Forest {
            label: vec![label],
            parent: vec![None],
            size: vec![1],
            depth: vec![0],
            roots: vec![0],
        }
    }

    /// Builds a forest from a parentheses sequence, validating balance and
    /// label consistency.
    pub fn from_parens(parens: &[Paren]) -> Result<Self> {
        let n = parens.len() / 2;
        let mut f = Forest {
            label: Vec::with_capacity(n),
            parent: Vec::with_capacity(n),
            size: Vec::with_capacity(n),
            depth: Vec::with_capacity(n),
            roots: Vec::new(),
        };
        let mut stack: Vec<NodeId> = Vec::new();
        for (pos, p) in parens.iter().enumerate() {
            match p.side {
                Side::Open => {
                    let id = f.label.len();
                    let parent = stack.last().copied();
                    f.label.push(p.label);
                    f.parent.push(parent);
                    f.size.push(1);
                    f.depth.push(stack.len());
                    if parent.is_none() {
                        f.roots.push(id);
                    }
                    stack.push(id);
                }
                Side::Close => {
                    let Some(id) = stack.pop() else {
                        return Err(Error::Unbalanced { pos });
                    };
                    if f.label[id] != p.label {
                        return Err(Error::LabelMismatch {
                            pos,
                            open: f.label[id].0.to_string(),
                            close: p.label.0.to_string(),
                        });
                    }
                    f.size[id] = f.label.len() - id;
                }
            }
        }
        if !stack.is_empty() {
            return Err(Error::Unbalanced { pos: parens.len() });
        }
        Ok(f)
    }

    /// Builds a forest from a parent array; siblings keep index order.
    pub fn from_parents(parents: &[Option<usize>], labels: &[Label]) -> Self {
        assert_eq!(parents.len(), labels.len());
        let n = parents.len();
        // Children in index order, stored contiguously per parent.
        let mut start = vec![0usize; n + 1];
        for p in parents.iter().flatten() {
            start[*p + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut children = vec![0usize; start[n]];
        let mut roots = Vec::new();
        for (v, p) in parents.iter().enumerate() {
            match p {
                Some(p) => {
                    children[fill[*p]] = v;
                    fill[*p] += 1;
                }
                None => roots.push(v),
            }
        }
        let mut parens = Vec::with_capacity(2 * n);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for &r in roots.iter() {
            parens.push(Paren::open(labels[r]));
            stack.push((r, start[r]));
            while let Some(top) = stack.last_mut() {
                let (v, i) = *top;
                if i < start[v + 1] {
                    top.1 += 1;
                    let c = children[i];
                    parens.push(Paren::open(labels[c]));
                    stack.push((c, start[c]));
                } else {
                    parens.push(Paren::close(labels[v]));
                    stack.pop();
                }
            }
        }
        Self::from_parens(&parens).expect("parent array describes a forest")
    }

    /// Horizontal concatenation.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Forest>) -> Self {
        let mut parens = Vec::new();
        for f in parts {
            parens.extend(f.parens());
        }
        Self::from_parens(&parens).expect("concatenation of forests is balanced")
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    pub fn label(&self, u: NodeId) -> Label {
        self.label[u]
    }

    pub fn labels(&self) -> &[Label] {
        &self.label
    }

    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.parent[u]
    }

    /// Number of nodes in the subtree rooted at `u`.
    pub fn size(&self, u: NodeId) -> usize {
        self.size[u]
    }

    /// Distance from `u` to the root of its tree (roots have depth 0).
    pub fn depth(&self, u: NodeId) -> usize {
        self.depth[u]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn children(&self, u: NodeId) -> Children<'_> {
        Children {
            forest: self,
            next: u + 1,
            end: u + self.size[u],
        }
    }

    pub fn is_leaf(&self, u: NodeId) -> bool {
        self.size[u] == 1
    }

    /// Whether `a` is an ancestor of `u` (or `u` itself).
    pub fn is_ancestor(&self, a: NodeId, u: NodeId) -> bool {
        a <= u && u < a + self.size[a]
    }

    /// Position of the opening parenthesis of `u` in the parentheses sequence.
    #[inline]
    pub fn open(&self, u: NodeId) -> usize {
        2 * u - self.depth[u]
    }

    /// Position of the closing parenthesis of `u`.
    #[inline]
    pub fn close(&self, u: NodeId) -> usize {
        self.open(u) + 2 * self.size[u] - 1
    }

    /// Maximum number of nodes on a root-to-leaf path; 0 for the empty forest.
    pub fn height(&self) -> usize {
        self.depth.iter().map(|d| d + 1).max().unwrap_or(0)
    }

    /// The parentheses representation under the forest's own labels.
    pub fn parens(&self) -> Vec<Paren> {
        let mut out = Vec::with_capacity(2 * self.len());
        let mut stack: Vec<NodeId> = Vec::new();
        for u in 0..self.len() {
            while let Some(&top) = stack.last() {
                if self.is_ancestor(top, u) {
                    break;
                }
                out.push(Paren::close(self.label[top]));
                stack.pop();
            }
            out.push(Paren::open(self.label[u]));
            stack.push(u);
        }
        while let Some(top) = stack.pop() {
            out.push(Paren::close(self.label[top]));
        }
        out
    }

    /// Parentheses sequence packed into symbols, with node classes given by
    /// `class` (indexed by node id).
    pub fn symbols_with(&self, class: &[u32]) -> Vec<u64> {
        debug_assert_eq!(class.len(), self.len());
        let mut out = vec![0u64; 2 * self.len()];
        for u in 0..self.len() {
            out[self.open(u)] = symbol(Side::Open, class[u]);
            out[self.close(u)] = symbol(Side::Close, class[u]);
        }
        out
    }

    /// Parentheses sequence packed into symbols under the forest's labels.
    pub fn symbols(&self) -> Vec<u64> {
        let class: Vec<u32> = self.label.iter().map(|l| l.0).collect();
        self.symbols_with(&class)
    }

    pub fn position_index(&self) -> PositionIndex {
        let len = 2 * self.len();
        let mut node_at = vec![0; len];
        let mut depth_at = vec![0; len];
        for u in 0..self.len() {
            let (o, c) = (self.open(u), self.close(u));
            node_at[o] = u;
            node_at[c] = u;
            depth_at[o] = self.depth[u];
            depth_at[c] = self.depth[u];
        }
        PositionIndex {
            o: (0..self.len()).map(|u| self.open(u)).collect(),
            c: (0..self.len()).map(|u| self.close(u)).collect(),
            depth_at,
            node_at,
        }
    }

    /// The subtree of `v` restricted to nodes at distance less than `d` from `v`.
    pub fn subtree_trimmed(&self, v: NodeId, d: usize) -> Forest {
        assert!(d >= 1, "trim depth must be positive");
        let base = self.depth[v];
        let keep: Vec<NodeId> = (v..v + self.size[v])
            .filter(|&u| self.depth[u] - base < d)
            .collect();
        self.induced(&keep)
    }

    /// The forest obtained by deleting every node not listed in `keep`
    /// (which must be sorted); children of deleted nodes move up.
    pub fn induced(&self, keep: &[NodeId]) -> Forest {
        let mut parens = Vec::with_capacity(2 * keep.len());
        let mut stack: Vec<NodeId> = Vec::new();
        for &u in keep {
            while let Some(&top) = stack.last() {
                if self.is_ancestor(top, u) {
                    break;
                }
                parens.push(Paren::close(self.label[top]));
                stack.pop();
            }
            parens.push(Paren::open(self.label[u]));
            stack.push(u);
        }
        while let Some(top) = stack.pop() {
            parens.push(Paren::close(self.label[top]));
        }
        Forest::from_parens(&parens).expect("induced subforest is balanced")
    }

    /// Largest label symbol in use, if any.
    pub fn max_label(&self) -> Option<u32> {
        self.label.iter().map(|l| l.0).max()
    }
}

pub struct Children<'a> {
    forest: &'a Forest,
    next: NodeId,
    end: NodeId,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.next >= self.end {
            return None;
        }
        let c = self.next;
        self.next += self.forest.size[c];
        Some(c)
    }
}

/// Parenthesis positions of every node and node depth at every position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionIndex {
    pub o: Vec<usize>,
    pub c: Vec<usize>,
    /// Depth of the node owning each position (the `D` array).
    pub depth_at: Vec<usize>,
    /// Node owning each position.
    pub node_at: Vec<NodeId>,
}

fn is_label_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Parses the parenthesized text format, e.g. `(a(b)(c)) (d)`.
///
/// A closing parenthesis may repeat its label (`(a(b)b)a`); a repeated label
/// that differs from the opening one is reported as a label mismatch.
pub fn parse_paren_text(text: &str, interner: &mut Interner) -> Result<Forest> {
    let bytes = text.as_bytes();
    let mut parens = Vec::new();
    let mut open_stack: Vec<Label> = Vec::new();
    let mut i = 0;
    let read_label = |i: &mut usize| -> &str {
        let start = *i;
        while *i < bytes.len() && is_label_byte(bytes[*i]) {
            *i += 1;
        }
        &text[start..*i]
    };
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b'(' => {
                let pos = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let token = read_label(&mut i);
                if token.is_empty() {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected a label after `(`".into(),
                    });
                }
                let label = interner.intern(token);
                open_stack.push(label);
                parens.push(Paren::open(label));
            }
            b')' => {
                let pos = i;
                i += 1;
                let Some(label) = open_stack.pop() else {
                    return Err(Error::Unbalanced { pos });
                };
                let token = read_label(&mut i);
                if !token.is_empty() && interner.get(token) != Some(label) {
                    return Err(Error::LabelMismatch {
                        pos,
                        open: interner.display(label),
                        close: token.to_owned(),
                    });
                }
                parens.push(Paren::close(label));
            }
            _ if b.is_ascii_whitespace() => i += 1,
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    if !open_stack.is_empty() {
        return Err(Error::Unbalanced { pos: bytes.len() });
    }
    Forest::from_parens(&parens)
}

/// Serializes a forest in the normalized parenthesized text format.
pub fn to_paren_text(forest: &Forest, interner: &Interner) -> String {
    let mut out = String::with_capacity(4 * forest.len());
    for p in forest.parens() {
        match p.side {
            Side::Open => {
                out.push('(');
                out.push_str(&interner.display(p.label));
            }
            Side::Close => out.push(')'),
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonTree {
    label: String,
    #[serde(default)]
    children: Vec<JsonTree>,
}

/// Parses a JSON array of `{"label": ..., "children": [...]}` trees.
pub fn parse_json(text: &str, interner: &mut Interner) -> Result<Forest> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let trees: Vec<JsonTree> =
        Deserialize::deserialize(&mut de).map_err(|e| Error::Json(e.to_string()))?;
    de.end().map_err(|e| Error::Json(e.to_string()))?;
    let mut parens = Vec::new();
    let mut stack: Vec<(&JsonTree, usize, Label)> = Vec::new();
    for root in &trees {
        let l = intern_checked(&root.label, interner)?;
        parens.push(Paren::open(l));
        stack.push((root, 0, l));
        while let Some(top) = stack.last_mut() {
            let (t, i, l) = *top;
            if i < t.children.len() {
                top.1 += 1;
                let c = &t.children[i];
                let cl = intern_checked(&c.label, interner)?;
                parens.push(Paren::open(cl));
                stack.push((c, 0, cl));
            } else {
                parens.push(Paren::close(l));
                stack.pop();
            }
        }
    }
    let forest = Forest::from_parens(&parens)?;
    // Deep documents would overflow the stack in the derived recursive drop.
    let mut pending = trees;
    while let Some(mut t) = pending.pop() {
        pending.append(&mut t.children);
    }
    Ok(forest)
}

fn intern_checked(text: &str, interner: &mut Interner) -> Result<Label> {
    if text.is_empty() || !text.bytes().all(is_label_byte) {
        return Err(Error::Json(format!("label `{text}` is not a [A-Za-z0-9_]+ token")));
    }
    Ok(interner.intern(text))
}

/// Serializes a forest as a JSON array of trees.
pub fn to_json(forest: &Forest, interner: &Interner) -> String {
    let mut out = String::from("[");
    let mut first_stack: Vec<bool> = vec![true];
    for p in forest.parens() {
        match p.side {
            Side::Open => {
                let first = first_stack.last_mut().unwrap();
                if !*first {
                    out.push(',');
                }
                *first = false;
                out.push_str("{\"label\":");
                out.push_str(&serde_json::to_string(&interner.display(p.label)).unwrap());
                out.push_str(",\"children\":[");
                first_stack.push(true);
            }
            Side::Close => {
                out.push_str("]}");
                first_stack.pop();
            }
        }
    }
    out.push(']');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> (Forest, Interner) {
        let mut i = Interner::new();
        let f = parse_paren_text(s, &mut i).unwrap();
        (f, i)
    }

    #[test]
    fn parses_single_node_and_children() {
        let (f, i) = parse("(a)");
        assert_eq!(f.len(), 1);
        assert_eq!(i.text(f.label(0)), Some("a"));

        let (f, i) = parse("(a(b)(c))");
        assert_eq!(f.len(), 3);
        let kids: Vec<_> = f.children(0).collect();
        assert_eq!(kids, vec![1, 2]);
        assert_eq!(i.text(f.label(2)), Some("c"));
    }

    #[test]
    fn rejects_unbalanced_and_mismatched() {
        let mut i = Interner::new();
        assert!(matches!(parse_paren_text("(a))", &mut i), Err(Error::Unbalanced { .. })));
        assert!(matches!(parse_paren_text("((a)", &mut i), Err(Error::Syntax { .. })));
        assert!(matches!(parse_paren_text("(a(b)", &mut i), Err(Error::Unbalanced { .. })));
        assert!(matches!(
            parse_paren_text("(a(b)c)a", &mut i),
            Err(Error::LabelMismatch { .. })
        ));
        assert!(parse_paren_text("(a(b)b)a", &mut i).is_ok());
    }

    #[test]
    fn positions_follow_the_recursion() {
        let (f, _) = parse("(a(b)(c))");
        assert_eq!((f.open(0), f.close(0)), (0, 5));
        assert_eq!((f.open(1), f.close(1)), (1, 2));
        assert_eq!((f.open(2), f.close(2)), (3, 4));
        let p = f.parens();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], Paren::open(f.label(0)));
        assert_eq!(p[5], Paren::close(f.label(0)));

        let (f, _) = parse("(a(b))");
        assert_eq!(f.position_index().depth_at, vec![0, 1, 1, 0]);
        let (f, _) = parse("(a)(b)");
        let idx = f.position_index();
        assert_eq!((idx.o[1], idx.c[1]), (2, 3));
        assert_eq!(idx.depth_at, vec![0, 0, 0, 0]);
    }

    #[test]
    fn heights() {
        assert_eq!(Forest::empty().height(), 0);
        assert_eq!(parse("(a)(b)(c)").0.height(), 1);
        assert_eq!(parse("(a(b(c)))").0.height(), 3);
        assert!(Forest::empty().parens().is_empty());
    }

    #[test]
    fn trimming() {
        let (f, mut i) = parse("(a(b(c))(e))");
        let t = f.subtree_trimmed(0, 2);
        let (expect, _) = (parse_paren_text("(a(b)(e))", &mut i).unwrap(), ());
        assert_eq!(t, expect);
        assert_eq!(f.subtree_trimmed(1, 1).len(), 1);
        assert_eq!(f.subtree_trimmed(0, 10), f);
    }

    #[test]
    fn text_and_json_round_trip() {
        let (f, mut i) = parse("(a (b) (c (d)))  (e)");
        let text = to_paren_text(&f, &i);
        assert_eq!(text, "(a(b)(c(d)))(e)");
        assert_eq!(parse_paren_text(&text, &mut i).unwrap(), f);
        let json = to_json(&f, &i);
        assert_eq!(parse_json(&json, &mut i).unwrap(), f);
        assert_eq!(parse_json("[]", &mut i).unwrap(), Forest::empty());
        assert!(parse_json("[{\"label\":\"a b\"}]", &mut i).is_err());
    }

    #[test]
    fn from_parents_keeps_sibling_order() {
        let mut i = Interner::new();
        let l: Vec<Label> = ["r", "x", "y", "z"].iter().map(|s| i.intern(s)).collect();
        let f = Forest::from_parents(&[None, Some(0), Some(0), Some(1)], &l);
        assert_eq!(to_paren_text(&f, &i), "(r(x(z))(y))");
    }
}

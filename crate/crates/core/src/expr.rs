//! Implicative expressions, tree shapes, restricted growth strings and their
//! text/JSON encodings.
//!
//! An expression of size `n` has `n` variable occurrences (leaves) and
//! `n - 1` implications. A *canonical* expression names its variables right
//! to left: the rightmost leaf is `a0`, and every new variable met while
//! scanning leftwards takes the next unused index.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Variable index. `a0` is the rightmost variable of a canonical expression.
pub type Var = u32;

/// Unlabelled binary tree: the skeleton of an implication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeShape {
    Leaf,
    Node(Box<TreeShape>, Box<TreeShape>),
}

impl TreeShape {
    pub fn node(left: TreeShape, right: TreeShape) -> Self {
        TreeShape::Node(Box::new(left), Box::new(right))
    }

    /// Number of leaves.
    pub fn leaves(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn internal_nodes(&self) -> usize {
        self.leaves() - 1
    }

    /// Balanced-paren encoding: `L` for a leaf, `(XY)` for a node.
    pub fn to_paren_string(&self) -> String {
        let mut out = String::new();
        self.write_paren(&mut out);
        out
    }

    fn write_paren(&self, out: &mut String) {
        match self {
            TreeShape::Leaf => out.push('L'),
            TreeShape::Node(l, r) => {
                out.push('(');
                l.write_paren(out);
                r.write_paren(out);
                out.push(')');
            }
        }
    }

    pub fn from_paren_string(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let shape = Self::read_paren(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Syntax {
                pos,
                msg: "trailing characters after shape".into(),
            });
        }
        Ok(shape)
    }

    fn read_paren(bytes: &[u8], pos: &mut usize) -> Result<Self> {
        match bytes.get(*pos) {
            Some(b'L') => {
                *pos += 1;
                Ok(TreeShape::Leaf)
            }
            Some(b'(') => {
                *pos += 1;
                let l = Self::read_paren(bytes, pos)?;
                let r = Self::read_paren(bytes, pos)?;
                if bytes.get(*pos) != Some(&b')') {
                    return Err(Error::Syntax {
                        pos: *pos,
                        msg: "expected ')'".into(),
                    });
                }
                *pos += 1;
                Ok(TreeShape::node(l, r))
            }
            _ => Err(Error::Syntax {
                pos: *pos,
                msg: "expected 'L' or '('".into(),
            }),
        }
    }

    /// Attach variables to the leaves in left-to-right order.
    fn label(&self, vars: &mut impl Iterator<Item = Var>) -> Expr {
        match self {
            TreeShape::Leaf => Expr::Var(vars.next().expect("one variable per leaf")),
            TreeShape::Node(l, r) => {
                let l = l.label(vars);
                let r = r.label(vars);
                Expr::imp(l, r)
            }
        }
    }
}

/// An implicative expression with explicit variable indices.
///
/// Unlike [`CanonicalExpression`], the numbering is not required to be
/// canonical; cleaned or collapsed expressions live here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(Var),
    Imp(Box<Expr>, Box<Expr>),
}

/// An expression read along its right spine: `p1 -> p2 -> ... -> goal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spine<'a> {
    pub premises: Vec<&'a Expr>,
    pub goal: Var,
}

impl<'a> Spine<'a> {
    /// Rebuild `premises[0] -> (premises[1] -> ... -> goal)`.
    pub fn reassemble(&self) -> Expr {
        self.premises
            .iter()
            .rev()
            .fold(Expr::Var(self.goal), |acc, p| Expr::imp((*p).clone(), acc))
    }
}

impl Expr {
    pub fn imp(premise: Expr, conclusion: Expr) -> Self {
        Expr::Imp(Box::new(premise), Box::new(conclusion))
    }

    /// Number of variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Imp(l, r) => l.size() + r.size(),
        }
    }

    /// The rightmost variable.
    pub fn goal(&self) -> Var {
        let mut e = self;
        loop {
            match e {
                Expr::Var(v) => return *v,
                Expr::Imp(_, r) => e = r,
            }
        }
    }

    pub fn spine(&self) -> Spine<'_> {
        let mut premises = Vec::new();
        let mut e = self;
        loop {
            match e {
                Expr::Var(v) => return Spine { premises, goal: *v },
                Expr::Imp(l, r) => {
                    premises.push(l.as_ref());
                    e = r;
                }
            }
        }
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Expr::Var(v) => Some(*v),
            Expr::Imp(..) => None,
        }
    }

    pub fn shape(&self) -> TreeShape {
        match self {
            Expr::Var(_) => TreeShape::Leaf,
            Expr::Imp(l, r) => TreeShape::node(l.shape(), r.shape()),
        }
    }

    /// Variables in left-to-right leaf order.
    pub fn leaf_vars(&self) -> Vec<Var> {
        let mut out = Vec::with_capacity(self.size());
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Var(v) => out.push(*v),
            Expr::Imp(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Sorted, deduplicated variable indices.
    pub fn distinct_vars(&self) -> Vec<Var> {
        let mut vars = self.leaf_vars();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn max_var(&self) -> Var {
        match self {
            Expr::Var(v) => *v,
            Expr::Imp(l, r) => l.max_var().max(r.max_var()),
        }
    }

    /// Apply `f` to every variable.
    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Expr {
        match self {
            Expr::Var(v) => Expr::Var(f(*v)),
            Expr::Imp(l, r) => Expr::imp(l.map_vars(f), r.map_vars(f)),
        }
    }

    /// Renumber variables canonically (right to left from 0).
    pub fn canonicalized(&self) -> CanonicalExpression {
        let vars = canonicalize(&self.leaf_vars()).expect("expressions have at least one leaf");
        CanonicalExpression {
            shape: self.shape(),
            vars,
        }
    }

    fn write_text(&self, out: &mut String) {
        match self {
            Expr::Var(v) => {
                out.push('a');
                out.push_str(&v.to_string());
            }
            Expr::Imp(l, r) => {
                if matches!(**l, Expr::Imp(..)) {
                    out.push('(');
                    l.write_text(out);
                    out.push(')');
                } else {
                    l.write_text(out);
                }
                out.push_str("->");
                r.write_text(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_text(&mut s);
        f.write_str(&s)
    }
}

impl FromStr for Expr {
    type Err = Error;

    /// Parses `expr := term | term "->" expr ; term := var | "(" expr ")" ;
    /// var := "a" digits`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    // Right spine is parsed iteratively so long chains do not recurse.
    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.peek() == Some(b'-') {
                if self.src.get(self.pos + 1) != Some(&b'>') {
                    return Err(self.error("expected '->'"));
                }
                self.pos += 2;
                terms.push(self.term()?);
            } else {
                break;
            }
        }
        let last = terms.pop().expect("at least one term");
        Ok(terms.into_iter().rev().fold(last, |acc, t| Expr::imp(t, acc)))
    }

    fn term(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'a') => {
                self.pos += 1;
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected digits after 'a'"));
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                digits.parse::<Var>().map(Expr::Var).map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "variable index out of range".into(),
                })
            }
            Some(_) => Err(self.error("expected variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Right-to-left restricted growth string, written left to right in leaf
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GrowthString(pub Vec<Var>);

impl GrowthString {
    /// Wrap `classes`, rejecting anything that is not a restricted growth
    /// string.
    pub fn new(classes: Vec<Var>) -> Result<Self> {
        let s = GrowthString(classes);
        if s.is_valid() {
            Ok(s)
        } else {
            Err(Error::NonCanonical(format!("{:?} is not a restricted growth string", s.0)))
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Var] {
        &self.0
    }

    /// Number of classes (distinct variables).
    pub fn classes(&self) -> usize {
        self.0.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Non-empty, rightmost entry 0, and every entry at most one more than
    /// the maximum strictly to its right.
    pub fn is_valid(&self) -> bool {
        is_valid_growth_string(&self.0)
    }
}

pub fn is_valid_growth_string(s: &[Var]) -> bool {
    let Some(&last) = s.last() else {
        return false;
    };
    if last != 0 {
        return false;
    }
    let mut max = 0;
    for &c in s.iter().rev() {
        if c > max + 1 {
            return false;
        }
        max = max.max(c);
    }
    true
}

/// Number tokens right to left: the rightmost gets 0, each new token the
/// next unused integer.
pub fn canonicalize<T: Eq + Hash>(tokens: &[T]) -> Result<GrowthString> {
    if tokens.is_empty() {
        return Err(Error::Argument("cannot canonicalize an empty sequence".into()));
    }
    let mut names: HashMap<&T, Var> = HashMap::new();
    let mut out = vec![0; tokens.len()];
    for (slot, tok) in out.iter_mut().zip(tokens).rev() {
        let next = names.len() as Var;
        *slot = *names.entry(tok).or_insert(next);
    }
    Ok(GrowthString(out))
}

/// A tree shape matched with a restricted growth string: the `i`-th leaf in
/// left-to-right order carries variable `vars[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalExpression {
    shape: TreeShape,
    vars: GrowthString,
}

#[derive(Serialize, Deserialize)]
struct CanonicalJson {
    rgs: Vec<Var>,
    shape: String,
}

impl CanonicalExpression {
    pub fn new(shape: TreeShape, vars: GrowthString) -> Result<Self> {
        if shape.leaves() != vars.len() {
            return Err(Error::Argument(format!(
                "shape has {} leaves but growth string has length {}",
                shape.leaves(),
                vars.len()
            )));
        }
        if !vars.is_valid() {
            return Err(Error::NonCanonical(format!("{:?}", vars.0)));
        }
        Ok(CanonicalExpression { shape, vars })
    }

    /// Accept `e` only if its numbering is already canonical.
    pub fn from_expr(e: &Expr) -> Result<Self> {
        let leaf_vars = e.leaf_vars();
        let canon = canonicalize(&leaf_vars)?;
        if canon.0 != leaf_vars {
            return Err(Error::NonCanonical(format!(
                "variables {} should be numbered {}",
                render_vars(&leaf_vars),
                render_vars(&canon.0)
            )));
        }
        Ok(CanonicalExpression {
            shape: e.shape(),
            vars: canon,
        })
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn vars(&self) -> &GrowthString {
        &self.vars
    }

    pub fn size(&self) -> usize {
        self.vars.len()
    }

    pub fn to_expr(&self) -> Expr {
        self.shape.label(&mut self.vars.0.iter().copied())
    }

    pub fn render(&self) -> String {
        self.to_expr().to_string()
    }

    /// Parse text, rejecting non-canonical numbering.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_expr(&text.parse::<Expr>()?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CanonicalJson {
            rgs: self.vars.0.clone(),
            shape: self.shape.to_paren_string(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: CanonicalJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::Syntax { pos: 0, msg: e.to_string() })?;
        let shape = TreeShape::from_paren_string(&raw.shape)?;
        Self::new(shape, GrowthString(raw.rgs))
    }
}

impl fmt::Display for CanonicalExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn render_vars(vars: &[Var]) -> String {
    vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Flat encoding of a binary tree used by Rémy's algorithm.
///
/// A tree with `n` leaves uses labels `0..2n-1`: internal nodes are odd,
/// leaves even. `entries[0]` is the root label and the children of the
/// internal node labelled `k` are `entries[k]` (left) and `entries[k+1]`
/// (right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemyVector(pub Vec<usize>);

impl RemyVector {
    pub fn leaves(&self) -> usize {
        self.0.len().div_ceil(2)
    }
}

/// Decode a Rémy vector for a tree of `n` leaves.
pub fn decode_remy_vector(v: &RemyVector, n: usize) -> Result<TreeShape> {
    Ok(decode_remy_labels(v, n)?.0)
}

/// Decode and also report the leaf labels in left-to-right order.
pub fn decode_remy_labels(v: &RemyVector, n: usize) -> Result<(TreeShape, Vec<usize>)> {
    if n == 0 {
        return Err(Error::Argument("a tree has at least one leaf".into()));
    }
    let len = 2 * n - 1;
    if v.0.len() != len {
        return Err(Error::Structural(format!(
            "vector for {n} leaves must have {len} entries, got {}",
            v.0.len()
        )));
    }
    let mut seen = vec![false; len];
    for &label in &v.0 {
        if label >= len {
            return Err(Error::Structural(format!("label {label} out of range 0..{len}")));
        }
        if std::mem::replace(&mut seen[label], true) {
            return Err(Error::Structural(format!("label {label} repeated")));
        }
    }

    // Explicit stack: every label occurs exactly once, so a walk from the
    // root visits each node at most once and a cycle shows up as unvisited
    // labels.
    enum Step {
        Visit(usize),
        Join,
    }
    let mut visited = 0;
    let mut leaf_labels = Vec::with_capacity(n);
    let mut built: Vec<TreeShape> = Vec::new();
    let mut stack = vec![Step::Visit(v.0[0])];
    while let Some(step) = stack.pop() {
        match step {
            Step::Visit(label) => {
                visited += 1;
                if visited > len {
                    return Err(Error::Structural("cycle in label graph".into()));
                }
                if label % 2 == 0 {
                    leaf_labels.push(label);
                    built.push(TreeShape::Leaf);
                } else {
                    stack.push(Step::Join);
                    stack.push(Step::Visit(v.0[label + 1]));
                    stack.push(Step::Visit(v.0[label]));
                }
            }
            Step::Join => {
                let r = built.pop().expect("right child built");
                let l = built.pop().expect("left child built");
                built.push(TreeShape::node(l, r));
            }
        }
    }
    if visited != len {
        return Err(Error::Structural(format!(
            "only {visited} of {len} labels reachable from the root"
        )));
    }
    let shape = built.pop().expect("root built");
    Ok((shape, leaf_labels))
}

//! Classical tautology decision for implicative expressions.
//!
//! The pipeline removes easy premises, rejects simple antilogies, and only
//! then searches for a falsifying valuation. Expressions with more than
//! `max_vars` distinct variables are searched after collapsing all large
//! indices onto one.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Var};
use crate::intuition::{clean, is_simple};

/// Default cap on distinct variables for the valuation search.
pub const DEFAULT_MAX_VARS: usize = 32;

/// Assignment of booleans to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(pub BTreeMap<Var, bool>);

impl Valuation {
    pub fn get(&self, v: Var) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.0.insert(v, value);
    }

    /// `{"a0": false, "a1": true, ...}`
    pub fn to_json(&self) -> serde_json::Value {
        self.0
            .iter()
            .map(|(v, b)| (format!("a{v}"), serde_json::Value::Bool(*b)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    }

    /// The valuation that refutes simple antilogies: `goal` false, every
    /// other variable of `e` true.
    pub fn goal_false(e: &Expr, goal: Var) -> Self {
        Valuation(e.distinct_vars().into_iter().map(|v| (v, v != goal)).collect())
    }
}

/// Truth value of `e` under `rho`; `a -> b` is `b or not a`.
pub fn evaluate(e: &Expr, rho: &Valuation) -> Result<bool> {
    match e {
        Expr::Var(v) => rho
            .get(*v)
            .ok_or_else(|| Error::Argument(format!("valuation does not assign a{v}"))),
        Expr::Imp(a, b) => {
            let premise = evaluate(a, rho)?;
            Ok(evaluate(b, rho)? || !premise)
        }
    }
}

/// Every top-level premise either has a goal other than the expression's
/// goal, or is simple with that goal. Such expressions are falsified by
/// [`Valuation::goal_false`].
pub fn is_simple_antilogy(e: &Expr) -> bool {
    let s = e.spine();
    s.premises.iter().all(|p| p.goal() != s.goal || is_simple(p))
}

/// Every top-level premise has a goal other than the expression's goal.
pub fn is_simple_non_tautology_gkz(e: &Expr) -> bool {
    let s = e.spine();
    s.premises.iter().all(|p| p.goal() != s.goal)
}

/// Replace every variable index above `bound` by `bound`.
pub fn collapse_high_variables(e: &Expr, bound: Var) -> Expr {
    e.map_vars(&|v| v.min(bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Simple antilogy after cleaning.
    Antilogy,
    /// Found by valuation search.
    Search,
    /// Found on the collapsed expression and lifted back.
    Collapse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TautologyStatus {
    Tautology,
    NotTautology { kind: CertificateKind, witness: Valuation },
    /// Too many variables and the collapsed expression is a tautology.
    Unknown(String),
}

impl TautologyStatus {
    pub fn is_tautology(&self) -> bool {
        matches!(self, TautologyStatus::Tautology)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TautologyStatus::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            TautologyStatus::Tautology => "tautology",
            TautologyStatus::NotTautology { .. } => "not-tautology",
            TautologyStatus::Unknown(_) => "unknown",
        }
    }

    pub fn certificate(&self) -> Option<CertificateKind> {
        match self {
            TautologyStatus::NotTautology { kind, .. } => Some(*kind),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Valuation> {
        match self {
            TautologyStatus::NotTautology { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// Decide whether `e` is a classical tautology.
pub fn is_tautology(e: &Expr, max_vars: usize) -> TautologyStatus {
    assert!(max_vars >= 1, "max_vars must be at least 1");
    let cleaned = clean(e);
    decide_cleaned(e, &cleaned, max_vars)
}

/// Same pipeline, reusing an already cleaned form of `e`.
pub(crate) fn decide_cleaned(e: &Expr, cleaned: &Expr, max_vars: usize) -> TautologyStatus {
    if is_simple_antilogy(cleaned) {
        return TautologyStatus::NotTautology {
            kind: CertificateKind::Antilogy,
            witness: Valuation::goal_false(e, cleaned.goal()),
        };
    }
    let extend = |found: Valuation| {
        let mut rho = Valuation(e.distinct_vars().into_iter().map(|v| (v, true)).collect());
        rho.0.extend(found.0);
        rho
    };
    if cleaned.distinct_vars().len() <= max_vars {
        return match falsify_search(cleaned) {
            Some(rho) => TautologyStatus::NotTautology {
                kind: CertificateKind::Search,
                witness: extend(rho),
            },
            None => TautologyStatus::Tautology,
        };
    }
    let bound = (max_vars - 1) as Var;
    let collapsed = collapse_high_variables(cleaned, bound);
    match falsify_search(&collapsed) {
        Some(rho) => {
            let shared = rho.get(bound).unwrap_or(true);
            let mut lifted = extend(rho);
            for (v, b) in lifted.0.iter_mut() {
                if *v > bound {
                    *b = shared;
                }
            }
            TautologyStatus::NotTautology {
                kind: CertificateKind::Collapse,
                witness: lifted,
            }
        }
        None => TautologyStatus::Unknown(format!(
            "{} distinct variables exceed the cap of {max_vars} and the collapsed expression is a tautology",
            cleaned.distinct_vars().len()
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    True,
    False,
    Open,
}

/// A literal that moves an undetermined node towards true or towards false.
#[derive(Debug, Clone, Copy)]
struct Hints {
    to_true: (usize, bool),
    to_false: (usize, bool),
}

// Dense copy of the expression so that partial evaluation indexes a slice.
enum Node {
    Var(usize),
    Imp(Box<Node>, Box<Node>),
}

fn densify(e: &Expr, index: &BTreeMap<Var, usize>) -> Node {
    match e {
        Expr::Var(v) => Node::Var(index[v]),
        Expr::Imp(a, b) => Node::Imp(Box::new(densify(a, index)), Box::new(densify(b, index))),
    }
}

fn eval_partial(node: &Node, asg: &[Option<bool>]) -> (Tri, Option<Hints>) {
    match node {
        Node::Var(v) => match asg[*v] {
            Some(true) => (Tri::True, None),
            Some(false) => (Tri::False, None),
            None => (
                Tri::Open,
                Some(Hints {
                    to_true: (*v, true),
                    to_false: (*v, false),
                }),
            ),
        },
        Node::Imp(a, b) => {
            let (vb, hb) = eval_partial(b, asg);
            if vb == Tri::True {
                return (Tri::True, None);
            }
            let (va, ha) = eval_partial(a, asg);
            match (va, vb) {
                (Tri::False, _) => (Tri::True, None),
                (Tri::True, Tri::False) => (Tri::False, None),
                _ => {
                    // false needs a true and b false; true needs a false or b true
                    let hint = |h: Option<Hints>| h.expect("open nodes carry hints");
                    let to_false = if vb == Tri::Open { hint(hb).to_false } else { hint(ha).to_true };
                    let to_true = if vb == Tri::Open { hint(hb).to_true } else { hint(ha).to_false };
                    (Tri::Open, Some(Hints { to_true, to_false }))
                }
            }
        }
    }
}

fn search(node: &Node, asg: &mut [Option<bool>]) -> bool {
    match eval_partial(node, asg) {
        (Tri::True, _) => false,
        (Tri::False, _) => true,
        (Tri::Open, hints) => {
            let (v, value) = hints.expect("open nodes carry hints").to_false;
            for b in [value, !value] {
                asg[v] = Some(b);
                if search(node, asg) {
                    return true;
                }
            }
            asg[v] = None;
            false
        }
    }
}

/// A falsifying valuation of `e`, if one exists.
///
/// Backtracks over variables, evaluating `e` three-valued under the partial
/// assignment and cutting as soon as the value is fixed. The next variable
/// is the one the evaluation points at when trying to make `e` false.
pub fn falsify_search(e: &Expr) -> Option<Valuation> {
    let vars = e.distinct_vars();
    let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let node = densify(e, &index);
    let mut asg = vec![None; vars.len()];
    if !search(&node, &mut asg) {
        return None;
    }
    Some(Valuation(
        vars.iter().zip(&asg).map(|(&v, b)| (v, b.unwrap_or(true))).collect(),
    ))
}

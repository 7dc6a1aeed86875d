//! Reference machinery: exhaustive enumeration, a complete intuitionistic
//! prover, a bit-parallel truth table and a chi-square statistic.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::expr::{CanonicalExpression, Expr, GrowthString, TreeShape, Var};

/// Largest size accepted by [`enumerate_canonical`].
pub const ENUMERATION_CAP: usize = 9;

/// Largest number of distinct variables accepted by
/// [`truth_table_tautology`].
pub const TRUTH_TABLE_CAP: usize = 20;

/// All tree shapes with `n` leaves: left subtree size ascending, then
/// recursively in the same order.
pub fn enumerate_shapes(n: usize) -> Vec<TreeShape> {
    let mut memo: Vec<Vec<TreeShape>> = vec![Vec::new(), vec![TreeShape::Leaf]];
    for size in 2..=n {
        let mut all = Vec::new();
        for left in 1..size {
            for l in &memo[left] {
                for r in &memo[size - left] {
                    all.push(TreeShape::node(l.clone(), r.clone()));
                }
            }
        }
        memo.push(all);
    }
    memo.swap_remove(n)
}

/// All restricted growth strings of length `n`, in lexicographic order.
pub fn enumerate_growth_strings(n: usize) -> Vec<GrowthString> {
    fn fill(pos: usize, max: Var, buf: &mut [Var], out: &mut Vec<GrowthString>) {
        if pos == 0 {
            out.push(GrowthString(buf.to_vec()));
            return;
        }
        for c in 0..=max + 1 {
            buf[pos - 1] = c;
            fill(pos - 1, max.max(c), buf, out);
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut buf = vec![0; n];
    let mut out = Vec::new();
    fill(n - 1, 0, &mut buf, &mut out);
    out.sort();
    out
}

/// Walks the cross product of shapes and growth strings.
#[derive(Debug, Clone)]
pub struct EnumerationCursor {
    shapes: Vec<TreeShape>,
    strings: Vec<GrowthString>,
    tree: usize,
    partition: usize,
}

impl EnumerationCursor {
    pub fn len(&self) -> usize {
        self.shapes.len() * self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Iterator for EnumerationCursor {
    type Item = CanonicalExpression;

    fn next(&mut self) -> Option<Self::Item> {
        let shape = self.shapes.get(self.tree)?;
        let vars = self.strings[self.partition].clone();
        let item = CanonicalExpression::new(shape.clone(), vars).expect("sizes agree");
        self.partition += 1;
        if self.partition == self.strings.len() {
            self.partition = 0;
            self.tree += 1;
        }
        Some(item)
    }
}

/// Every canonical expression with `n` leaves, exactly once.
pub fn enumerate_canonical(n: usize) -> Result<EnumerationCursor> {
    if n == 0 {
        return Err(Error::Argument("size must be at least 1".into()));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::Refused(format!(
            "enumeration is capped at size {ENUMERATION_CAP}; size {n} is too large"
        )));
    }
    Ok(EnumerationCursor {
        shapes: enumerate_shapes(n),
        strings: enumerate_growth_strings(n),
        tree: 0,
        partition: 0,
    })
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Form {
    Atom(Var),
    Imp(F, F),
}

type F = Rc<Form>;

fn to_form(e: &Expr) -> F {
    Rc::new(match e {
        Expr::Var(v) => Form::Atom(*v),
        Expr::Imp(a, b) => Form::Imp(to_form(a), to_form(b)),
    })
}

/// Intuitionistic provability, by proof search in the contraction-free
/// sequent calculus for implication. Every left rule shrinks the sequent,
/// so the search terminates without loop checking.
pub fn prove_intuitionistic(e: &Expr) -> bool {
    ljt(Vec::new(), to_form(e), &mut HashMap::new())
}

type Sequent = (Vec<F>, F);

fn ljt(mut ctx: Vec<F>, mut goal: F, memo: &mut HashMap<Sequent, bool>) -> bool {
    while let Form::Imp(a, b) = &*goal {
        ctx.push(a.clone());
        goal = b.clone();
    }
    let Form::Atom(g) = *goal else { unreachable!() };

    // atoms in context, then p -> B with p present rewrites to B
    let mut atoms: HashSet<Var> = HashSet::new();
    loop {
        atoms.extend(ctx.iter().filter_map(|f| match **f {
            Form::Atom(p) => Some(p),
            Form::Imp(..) => None,
        }));
        if atoms.contains(&g) {
            return true;
        }
        let mut changed = false;
        for f in ctx.iter_mut() {
            if let Form::Imp(a, b) = &**f {
                if let Form::Atom(p) = **a {
                    if atoms.contains(&p) {
                        *f = b.clone();
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    ctx.sort();
    ctx.dedup();
    let key = (ctx, goal);
    if let Some(&known) = memo.get(&key) {
        return known;
    }
    let found = left_implication(&key.0, &key.1, memo);
    memo.insert(key, found);
    found
}

// (C -> D) -> B:  Γ, D -> B, C ⊢ D  and  Γ, B ⊢ goal.
// The right premise is invertible, so its failure ends the search.
fn left_implication(ctx: &[F], goal: &F, memo: &mut HashMap<Sequent, bool>) -> bool {
    for i in 0..ctx.len() {
        let Form::Imp(cd, b) = &*ctx[i] else { continue };
        let Form::Imp(c, d) = &**cd else { continue };
        let mut rest = ctx.to_vec();
        rest.remove(i);
        let mut right = rest.clone();
        right.push(b.clone());
        if !ljt(right, goal.clone(), memo) {
            return false;
        }
        rest.push(Rc::new(Form::Imp(d.clone(), b.clone())));
        rest.push(c.clone());
        if ljt(rest, d.clone(), memo) {
            return true;
        }
    }
    false
}

/// Second, independent prover: search for normal natural-deduction proofs
/// (introductions, then a hypothesis `c1 -> ... -> ck -> goal` eliminated
/// against proofs of every `ci`), cutting repeated sequents on the current
/// branch. Only meant for small expressions.
pub fn prove_natural_deduction(e: &Expr) -> bool {
    nd(&BTreeSet::new(), e, &mut Vec::new())
}

fn nd(ctx: &BTreeSet<Expr>, goal: &Expr, path: &mut Vec<(BTreeSet<Expr>, Var)>) -> bool {
    if let Expr::Imp(a, b) = goal {
        let mut ctx = ctx.clone();
        ctx.insert((**a).clone());
        return nd(&ctx, b, path);
    }
    let g = goal.goal();
    if path.iter().any(|(c, h)| *h == g && c == ctx) {
        return false;
    }
    path.push((ctx.clone(), g));
    let found = ctx.iter().any(|h| {
        let s = h.spine();
        s.goal == g && s.premises.iter().all(|p| nd(ctx, p, path))
    });
    path.pop();
    found
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Evaluate `e` on 64 valuations at once: bit `i` of each word is the value
/// of that variable in valuation `i`.
pub fn evaluate_lanes(e: &Expr, words: &BTreeMap<Var, u64>) -> Result<u64> {
    match e {
        Expr::Var(v) => words
            .get(v)
            .copied()
            .ok_or_else(|| Error::Argument(format!("no lane word for a{v}"))),
        Expr::Imp(a, b) => Ok(!evaluate_lanes(a, words)? | evaluate_lanes(b, words)?),
    }
}

/// Exhaustive check of all `2^m` valuations, 64 per pass.
pub fn truth_table_tautology(e: &Expr) -> Result<bool> {
    let vars = e.distinct_vars();
    if vars.len() > TRUTH_TABLE_CAP {
        return Err(Error::Refused(format!(
            "{} distinct variables exceed the truth-table cap of {TRUTH_TABLE_CAP}",
            vars.len()
        )));
    }
    let high = vars.len().saturating_sub(6);
    let mut words: BTreeMap<Var, u64> = BTreeMap::new();
    for pass in 0u64..1 << high {
        for (i, &v) in vars.iter().enumerate() {
            let w = if i < 6 {
                LANE_PATTERNS[i]
            } else if pass >> (i - 6) & 1 == 1 {
                !0
            } else {
                0
            };
            words.insert(v, w);
        }
        // with fewer than six variables the patterns repeat across the word
        if evaluate_lanes(e, &words)? != !0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pearson statistic `Σ (o - e)² / e`.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() {
        return Err(Error::Argument(format!(
            "{} observed bins but {} expected",
            observed.len(),
            expected.len()
        )));
    }
    if expected.iter().any(|&x| x <= 0.0) {
        return Err(Error::Argument("expected counts must be positive".into()));
    }
    Ok(observed
        .iter()
        .zip(expected)
        .map(|(&o, &x)| {
            let d = o as f64 - x;
            d * d / x
        })
        .sum())
}

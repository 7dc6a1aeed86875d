//! Cheap certificates of intuitionistic provability.
//!
//! Every test here is sound but incomplete: a positive answer means the
//! expression is an intuitionistic theorem, a negative one means nothing.

use serde::Serialize;

use crate::expr::Expr;

/// Switches for the cascade. The default uses the literal modus-ponens pattern.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CascadeOptions {
    /// Accept any premise `A` together with a premise `A -> goal`, not only
    /// a variable `A`.
    pub broad_mp: bool,
}

/// Goal occurs as a top-level premise: `... -> a -> ... -> a`.
pub fn is_simple(e: &Expr) -> bool {
    let s = e.spine();
    s.premises.iter().any(|p| p.as_var() == Some(s.goal))
}

/// Premises `v` and `v -> goal` both present, `v` a variable.
pub fn is_mp(e: &Expr) -> bool {
    let s = e.spine();
    s.premises.iter().any(|p| match p {
        Expr::Imp(a, b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Var(v), Expr::Var(g)) if *g == s.goal => s.premises.iter().any(|q| q.as_var() == Some(*v)),
            _ => false,
        },
        Expr::Var(_) => false,
    })
}

/// Premises `A` and `A -> goal` both present, `A` arbitrary.
pub fn is_mp_broad(e: &Expr) -> bool {
    let s = e.spine();
    s.premises.iter().any(|p| match p {
        Expr::Imp(a, b) => b.as_var() == Some(s.goal) && s.premises.iter().any(|q| *q == a.as_ref()),
        Expr::Var(_) => false,
    })
}

pub fn is_easy(e: &Expr) -> bool {
    is_easy_with(e, CascadeOptions::default())
}

pub fn is_easy_with(e: &Expr, opts: CascadeOptions) -> bool {
    is_simple(e) || if opts.broad_mp { is_mp_broad(e) } else { is_mp(e) }
}

/// Remove easy premises bottom-up, repeating until nothing changes.
pub fn clean(e: &Expr) -> Expr {
    clean_with(e, CascadeOptions::default())
}

pub fn clean_with(e: &Expr, opts: CascadeOptions) -> Expr {
    let (mut cur, mut changed) = clean_pass(e, opts);
    while changed {
        (cur, changed) = clean_pass(&cur, opts);
    }
    cur
}

fn clean_pass(e: &Expr, opts: CascadeOptions) -> (Expr, bool) {
    match e {
        Expr::Var(_) => (e.clone(), false),
        Expr::Imp(l, r) => {
            let (l, cl) = clean_pass(l, opts);
            let (r, cr) = clean_pass(r, opts);
            if is_easy_with(&l, opts) {
                (r, true)
            } else {
                (Expr::imp(l, r), cl || cr)
            }
        }
    }
}

/// Some premise equals a later tail of the spine: `... -> p -> ... -> p`.
pub fn is_minor(e: &Expr) -> bool {
    let mut premises: Vec<(&Expr, usize)> = Vec::new();
    let mut node = e;
    loop {
        let size = node.size();
        if premises.iter().any(|&(p, ps)| ps == size && p == node) {
            return true;
        }
        match node {
            Expr::Var(_) => return false,
            Expr::Imp(l, r) => {
                premises.push((l, l.size()));
                node = r;
            }
        }
    }
}

/// Outcome of the cascade for one expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntuitVerdict {
    pub simple: bool,
    pub mp: bool,
    pub easy: bool,
    pub minor_after_clean: bool,
    pub cheap: bool,
    pub cleaned_size: usize,
    #[serde(skip)]
    pub cleaned: Expr,
}

/// Easy or minor once easy premises have been removed.
pub fn is_cheap(e: &Expr) -> IntuitVerdict {
    is_cheap_with(e, CascadeOptions::default())
}

pub fn is_cheap_with(e: &Expr, opts: CascadeOptions) -> IntuitVerdict {
    let simple = is_simple(e);
    let mp = if opts.broad_mp { is_mp_broad(e) } else { is_mp(e) };
    let cleaned = clean_with(e, opts);
    let minor_after_clean = is_minor(&cleaned);
    let cheap = is_easy_with(&cleaned, opts) || minor_after_clean;
    IntuitVerdict {
        simple,
        mp,
        easy: simple || mp,
        minor_after_clean,
        cheap,
        cleaned_size: cleaned.size(),
        cleaned,
    }
}

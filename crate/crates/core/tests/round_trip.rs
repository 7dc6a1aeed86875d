use canex_core::expr::{canonicalize, is_valid_growth_string};
use canex_core::oracle::{enumerate_canonical, enumerate_growth_strings};
use canex_core::{CanonicalExpression, Expr, Var};
use proptest::prelude::*;

// membership in W by the recursive definition: W_0 = 0+ (the rightmost
// entry is a 0), and W_{k+1} = [0..k+1]* (k+1) W_k
fn in_w(s: &[Var]) -> bool {
    fn rec(s: &[Var], k: Var) -> bool {
        if k == 0 {
            return !s.is_empty() && s.iter().all(|&x| x == 0);
        }
        (0..s.len()).any(|cut| {
            s[cut] == k && s[..cut].iter().all(|&x| x <= k) && rec(&s[cut + 1..], k - 1)
        })
    }
    !s.is_empty() && (0..=s.len() as Var).any(|k| rec(s, k))
}

fn all_strings(len: usize, alphabet: Var) -> Vec<Vec<Var>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| (0..alphabet).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

#[test]
fn validity_matches_the_recursive_definition() {
    for len in 1..=7 {
        for s in all_strings(len, len as Var + 1) {
            assert_eq!(is_valid_growth_string(&s), in_w(&s), "{s:?}");
        }
    }
}

#[test]
fn enumerated_growth_strings_are_exactly_the_valid_ones() {
    for len in 1..=6 {
        let valid: Vec<Vec<Var>> = all_strings(len, len as Var).into_iter().filter(|s| in_w(s)).collect();
        let mut listed: Vec<Vec<Var>> = enumerate_growth_strings(len).iter().map(|g| g.as_slice().to_vec()).collect();
        listed.sort();
        assert_eq!(listed, valid);
    }
}

#[test]
fn text_and_json_round_trip_exhaustively() {
    for n in 1..=6 {
        for c in enumerate_canonical(n).unwrap() {
            let text = c.render();
            assert_eq!(CanonicalExpression::parse(&text).unwrap(), c);
            assert_eq!(CanonicalExpression::from_json(&c.to_json()).unwrap(), c);
            assert_eq!(text.parse::<Expr>().unwrap(), c.to_expr());
        }
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = (0u32..6).prop_map(Expr::Var);
    leaf.prop_recursive(5, 32, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Expr::imp(a, b)))
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(tokens in prop::collection::vec(0u8..5, 1..12)) {
        let g = canonicalize(&tokens).unwrap();
        prop_assert!(g.is_valid());
        prop_assert_eq!(canonicalize(g.as_slice()).unwrap(), g);
    }

    #[test]
    fn canonicalize_preserves_the_partition(tokens in prop::collection::vec(0u8..5, 1..12)) {
        let g = canonicalize(&tokens).unwrap();
        for i in 0..tokens.len() {
            for j in 0..tokens.len() {
                prop_assert_eq!(tokens[i] == tokens[j], g.as_slice()[i] == g.as_slice()[j]);
            }
        }
    }

    #[test]
    fn display_parses_back(e in arb_expr()) {
        prop_assert_eq!(e.to_string().parse::<Expr>().unwrap(), e);
    }

    #[test]
    fn canonical_form_is_a_renaming(e in arb_expr()) {
        let c = e.canonicalized();
        prop_assert_eq!(c.to_expr().canonicalized(), c.clone());
        prop_assert_eq!(c.to_expr().shape(), e.shape());
        prop_assert_eq!(c.to_expr().spine().reassemble(), c.to_expr());
    }
}

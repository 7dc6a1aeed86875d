//! Seeded uniform sampling of tree shapes (Rémy), set partitions (Stam) and
//! canonical expressions.
//!
//! Every sample index gets its own ChaCha8 stream: the key is expanded from
//! the 64-bit base seed with `SeedableRng::seed_from_u64` and the stream id
//! is the sample index. Results therefore do not depend on the order in
//! which samples are drawn.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::count::StamTable;
use crate::error::{Error, Result};
use crate::expr::{canonicalize, decode_remy_vector, CanonicalExpression, GrowthString, RemyVector, TreeShape, Var};

/// Deterministic random source with unbiased integer and real draws.
#[derive(Debug, Clone)]
pub struct RngState {
    inner: ChaCha8Rng,
    draws: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self::for_sample(seed, 0)
    }

    /// Stream for sample `index` under `base_seed`.
    pub fn for_sample(base_seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(base_seed);
        inner.set_stream(index);
        RngState { inner, draws: 0 }
    }

    /// Number of logical draws (`below` or `unit`) so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform integer in `0..bound`, by multiply-and-reject.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        self.draws += 1;
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = u128::from(self.inner.next_u64()) * u128::from(bound);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform real in `[0, 1)` from the 53 high bits of one word.
    pub fn unit(&mut self) -> f64 {
        self.draws += 1;
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// One Rémy insertion into a tree that currently has `v.leaves()` leaves.
///
/// With `L` leaves, `x` ranges over `0..=4L-3` and `k = x / 2` selects one
/// of the `2L - 1` nodes. The node at position `k` moves under a new
/// internal node `2L - 1`; the new leaf `2L` goes on the right when `x` is
/// even and on the left when `x` is odd.
pub fn remy_step(v: &RemyVector, x: usize) -> Result<RemyVector> {
    let leaves = v.leaves();
    if x > 4 * leaves - 3 {
        return Err(Error::Argument(format!(
            "insertion draw {x} outside 0..={} for a tree of {leaves} leaves",
            4 * leaves - 3
        )));
    }
    let mut buf = v.0.clone();
    buf.resize(v.0.len() + 2, 0);
    insert_in_place(&mut buf, leaves, x);
    Ok(RemyVector(buf))
}

fn insert_in_place(buf: &mut [usize], leaves: usize, x: usize) {
    let k = x / 2;
    let node = 2 * leaves - 1;
    let leaf = 2 * leaves;
    let old = buf[k];
    buf[k] = node;
    if x.is_multiple_of(2) {
        buf[node] = old;
        buf[leaf] = leaf;
    } else {
        buf[node] = leaf;
        buf[leaf] = old;
    }
}

/// Uniform Rémy vector for `n` leaves, using exactly `n - 1` draws.
pub fn random_remy_vector(rng: &mut RngState, n: usize) -> RemyVector {
    assert!(n >= 1, "a tree has at least one leaf");
    let mut buf = vec![0; 2 * n - 1];
    for leaves in 1..n {
        let x = rng.below(4 * leaves as u64 - 2) as usize;
        insert_in_place(&mut buf, leaves, x);
    }
    RemyVector(buf)
}

/// Uniform binary tree with `n` leaves.
pub fn random_tree(rng: &mut RngState, n: usize) -> TreeShape {
    decode_remy_vector(&random_remy_vector(rng, n), n).expect("Rémy vectors are well formed")
}

/// Elements `0..n` distributed over `m` classes; classes may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDescription {
    pub labels: Vec<Var>,
    pub m: usize,
}

impl ClassDescription {
    pub fn to_growth_string(&self) -> GrowthString {
        canonicalize(&self.labels).expect("class descriptions are non-empty")
    }
}

/// Stam's sampler: draw `M` from the table, then label each element
/// uniformly in `0..M`. The induced partition is uniform.
pub fn random_partition(rng: &mut RngState, table: &StamTable) -> ClassDescription {
    let m = table.class_count_for(rng.unit());
    let labels = (0..table.n()).map(|_| rng.below(m as u64) as Var).collect();
    ClassDescription { labels, m }
}

/// Uniform canonical expression with `n` leaves.
pub fn random_canonical(rng: &mut RngState, n: usize, table: &StamTable) -> CanonicalExpression {
    assert_eq!(table.n(), n, "class-count table built for a different size");
    let shape = random_tree(rng, n);
    let vars = random_partition(rng, table).to_growth_string();
    CanonicalExpression::new(shape, vars).expect("tree and partition sizes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::stam_table;
    use crate::expr::is_valid_growth_string;

    fn before() -> RemyVector {
        RemyVector(vec![1, 13, 0, 2, 5, 9, 7, 8, 4, 11, 6, 12, 10, 15, 3, 16, 14])
    }

    #[test]
    fn remy_step_odd_draw() {
        let v = remy_step(&before(), 21).unwrap();
        assert_eq!(v.0, vec![1, 13, 0, 2, 5, 9, 7, 8, 4, 11, 17, 12, 10, 15, 3, 16, 14, 18, 6]);
    }

    #[test]
    fn remy_step_even_draw() {
        let v = remy_step(&before(), 8).unwrap();
        assert_eq!(v.0[4], 17);
        assert_eq!(v.0[17], 5);
        assert_eq!(v.0[18], 18);
        assert_eq!(decode_remy_vector(&v, 10).unwrap().leaves(), 10);
    }

    #[test]
    fn remy_step_base_and_range() {
        let v = remy_step(&RemyVector(vec![0]), 0).unwrap();
        assert_eq!(v.0, vec![1, 0, 2]);
        assert_eq!(decode_remy_vector(&v, 2).unwrap(), TreeShape::node(TreeShape::Leaf, TreeShape::Leaf));
        assert!(remy_step(&RemyVector(vec![0]), 1).is_ok());
        assert!(matches!(remy_step(&RemyVector(vec![0]), 2), Err(Error::Argument(_))));
        assert!(remy_step(&before(), 33).is_ok());
        assert!(remy_step(&before(), 34).is_err());
    }

    #[test]
    fn tree_sizes_and_draw_count() {
        let mut rng = RngState::new(7);
        assert_eq!(random_tree(&mut rng, 1), TreeShape::Leaf);
        assert_eq!(rng.draws(), 0);
        for n in [2usize, 10, 100, 1000] {
            let mut rng = RngState::for_sample(7, n as u64);
            let t = random_tree(&mut rng, n);
            assert_eq!(t.leaves(), n);
            assert_eq!(t.internal_nodes(), n - 1);
            assert_eq!(rng.draws(), n as u64 - 1);
        }
    }

    #[test]
    fn partition_labelling() {
        let t = stam_table(1);
        let mut rng = RngState::new(3);
        for _ in 0..100 {
            assert_eq!(random_partition(&mut rng, &t).to_growth_string().0, vec![0]);
        }
        let a = ClassDescription { labels: vec![2, 2, 0], m: 3 };
        let b = ClassDescription { labels: vec![1, 1, 0], m: 2 };
        assert_eq!(a.to_growth_string(), b.to_growth_string());
    }

    #[test]
    fn class_description_to_growth_string() {
        let c = ClassDescription { labels: vec![5, 9, 9, 5, 9, 5, 2, 5, 5, 5], m: 10 };
        assert_eq!(c.to_growth_string().0, vec![0, 2, 2, 0, 2, 0, 1, 0, 0, 0]);
        let c = ClassDescription { labels: vec![0, 0, 0], m: 1 };
        assert_eq!(c.to_growth_string().0, vec![0, 0, 0]);
        let c = ClassDescription { labels: vec![0, 1], m: 2 };
        assert_eq!(c.to_growth_string().0, vec![1, 0]);
    }

    #[test]
    fn canonical_samples() {
        let t1 = stam_table(1);
        let mut rng = RngState::new(11);
        assert_eq!(random_canonical(&mut rng, 1, &t1).render(), "a0");
        let t = stam_table(100);
        for i in 0..20 {
            let mut rng = RngState::for_sample(11, i);
            let e = random_canonical(&mut rng, 100, &t);
            assert_eq!(e.size(), 100);
            assert!(is_valid_growth_string(e.vars().as_slice()));
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let t = stam_table(30);
        let a: Vec<_> = (0..5).map(|i| random_canonical(&mut RngState::for_sample(99, i), 30, &t)).collect();
        let b: Vec<_> = (0..5).rev().map(|i| random_canonical(&mut RngState::for_sample(99, i), 30, &t)).collect();
        assert!(a.iter().eq(b.iter().rev()));
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn below_is_in_range() {
        let mut rng = RngState::new(5);
        for bound in [1u64, 2, 3, 7, 1 << 40, u64::MAX] {
            for _ in 0..100 {
                assert!(rng.below(bound) < bound);
            }
        }
        for _ in 0..1000 {
            let u = rng.unit();
            assert!((0.0..1.0).contains(&u));
        }
    }
}

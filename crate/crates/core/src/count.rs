//! Exact and asymptotic counts of canonical expressions, and the class-count
//! distribution used by Stam's partition sampler.

use std::collections::HashMap;
use std::f64::consts::{LN_10, LN_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Catalan number `C_n`: binary trees with `n` internal nodes.
pub fn catalan(n: usize) -> BigUint {
    // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step.
    let mut c = BigUint::one();
    for k in 0..n {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

/// Bell number `ϖ_n` via the Bell triangle.
pub fn bell(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let mut row = vec![BigUint::one()];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("non-empty row").clone());
        for x in &row {
            let v = next.last().expect("seeded") + x;
            next.push(v);
        }
        row = next;
    }
    row.pop().expect("non-empty row")
}

/// `K_n = C_{n-1} ϖ_n`, the number of canonical expressions with `n` leaves.
pub fn count_canonical(n: usize) -> BigUint {
    assert!(n >= 1, "canonical expressions have at least one leaf");
    catalan(n - 1) * bell(n)
}

/// Natural logarithm of a positive big integer.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64 bits fit in f64");
    top.ln() + shift as f64 * LN_2
}

pub fn big_log10(x: &BigUint) -> f64 {
    big_ln(x) / LN_10
}

/// Positive root of `r e^r = n + 1`, by Newton iteration from `ln(n+1)`.
pub fn lambert_root(n: usize) -> f64 {
    let target = n as f64 + 1.0;
    let mut r = target.ln();
    for _ in 0..200 {
        let er = r.exp();
        let residual = r * er - target;
        if residual.abs() <= 1e-12 * target {
            break;
        }
        r -= residual / ((r + 1.0) * er);
    }
    r
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `log10` of the asymptotic estimate of `K_n`, the product of
/// `C_{n-1} ~ 4^(n-1) / sqrt(π (n-1)^3)` and
/// `ϖ_n ~ n! e^(e^r - 1) / (r^n sqrt(2π r (r+1) e^r))`:
///
/// `n! 4^(n-1) e^(e^r - 1) / (π r^n sqrt(2 (n-1)^3 r (r+1) e^r))`.
pub fn asymptotic_canonical_log10(n: usize) -> f64 {
    assert!(n >= 2, "the estimate needs n >= 2");
    let r = lambert_root(n);
    let m = (n - 1) as f64;
    let ln = ln_factorial(n) + m * 4f64.ln() + (r.exp() - 1.0)
        - PI.ln()
        - n as f64 * r.ln()
        - 0.5 * (2f64.ln() + 3.0 * m.ln() + r.ln() + (r + 1.0).ln() + r);
    ln / LN_10
}

/// Distribution of the number of classes `M` in Stam's sampler:
/// `p_m = m^n / (e m! ϖ_n)` for `m = 1, 2, ...`, truncated once the
/// cumulative sum reaches `1 - 1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct StamTable {
    n: usize,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

pub const STAM_TRUNCATION: f64 = 1e-12;

impl StamTable {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "partitions of an empty set are not sampled");
        let ln_bell = big_ln(&bell(n));
        let exp = u32::try_from(n).expect("size fits in u32");
        let cap = 10 * n + 100;
        let mut factorial = BigUint::one();
        let mut probs = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0.0;
        for m in 1..=cap {
            factorial *= BigUint::from(m);
            let ln_p = big_ln(&BigUint::from(m).pow(exp)) - 1.0 - big_ln(&factorial) - ln_bell;
            let p = ln_p.exp();
            total += p;
            probs.push(p);
            cumulative.push(total);
            if total >= 1.0 - STAM_TRUNCATION {
                break;
            }
        }
        StamTable { n, probs, cumulative }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p_m` for `m >= 1`; zero past the truncation point.
    pub fn prob(&self, m: usize) -> f64 {
        m.checked_sub(1).and_then(|i| self.probs.get(i)).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Largest class count in the table.
    pub fn m_max(&self) -> usize {
        self.probs.len()
    }

    /// Invert the cumulative distribution at `u ∈ [0, 1)`. Draws past the
    /// truncated tail clamp to `m_max`.
    pub fn class_count_for(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= u);
        (i + 1).min(self.m_max())
    }
}

/// Shared, lazily built table for `n`.
pub fn stam_table(n: usize) -> Arc<StamTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<StamTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&n) {
        return Arc::clone(t);
    }
    let table = Arc::new(StamTable::new(n));
    Arc::clone(cache.lock().expect("cache lock").entry(n).or_insert(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent references: the convolution recurrence for Catalan
    // numbers and Stirling numbers of the second kind for Bell numbers.
    fn catalan_by_convolution(n: usize) -> Vec<BigUint> {
        let mut c = vec![BigUint::one()];
        for k in 0..n {
            let next = (0..=k).map(|i| &c[i] * &c[k - i]).sum();
            c.push(next);
        }
        c
    }

    fn bell_by_stirling(n: usize) -> BigUint {
        let mut s = vec![vec![BigUint::zero(); n + 1]; n + 1];
        s[0][0] = BigUint::one();
        for i in 1..=n {
            for k in 1..=i {
                s[i][k] = BigUint::from(k) * &s[i - 1][k] + &s[i - 1][k - 1];
            }
        }
        s[n].iter().sum()
    }

    fn bisect(target: f64) -> f64 {
        let (mut lo, mut hi) = (0.0f64, target.max(1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigUint::from(1u32));
        assert_eq!(catalan(2), BigUint::from(2u32));
        assert_eq!(catalan(9), BigUint::from(4862u32));
        let reference = catalan_by_convolution(40);
        for (n, c) in reference.iter().enumerate() {
            assert_eq!(&catalan(n), c, "C_{n}");
        }
    }

    #[test]
    fn bell_values() {
        assert_eq!(bell(0), BigUint::from(1u32));
        assert_eq!(bell(1), BigUint::from(1u32));
        assert_eq!(bell(3), BigUint::from(5u32));
        assert_eq!(bell(10), BigUint::from(115975u32));
        for n in 1..40 {
            assert_eq!(bell(n), bell_by_stirling(n), "B_{n}");
        }
    }

    #[test]
    fn canonical_counts() {
        let expected = [1u64, 2, 10, 75, 728, 8526, 115764, 1776060, 30240210];
        for (i, &k) in expected.iter().enumerate() {
            assert_eq!(count_canonical(i + 1), BigUint::from(k));
        }
        assert_eq!(count_canonical(4), BigUint::from(5u32 * 15));
        // 1.08e172 and 1.51e880, checked against an independent
        // arbitrary-precision computation
        let k100 = count_canonical(100).to_string();
        assert_eq!(k100.len(), 173);
        assert!(k100.starts_with("10826"));
        let k400 = count_canonical(400).to_string();
        assert_eq!(k400.len(), 881);
        assert!(k400.starts_with("15093"));
    }

    #[test]
    fn lambert_root_matches_bisection() {
        assert!((lambert_root(0) - bisect(1.0)).abs() < 1e-12);
        assert!((lambert_root(0) - 0.567143).abs() < 1e-6);
        assert!((lambert_root(100) - bisect(101.0)).abs() < 1e-10);
        assert!((lambert_root(100) - 3.3933).abs() < 1e-4);
        assert!((lambert_root(99) - 3.3856).abs() < 1e-4);
        for &n in &[10usize, 100, 1000] {
            let r = lambert_root(n);
            assert!((r * r.exp() - (n as f64 + 1.0)).abs() <= 1e-10 * (n as f64 + 1.0));
        }
    }

    #[test]
    fn lambert_root_residual_over_log_range() {
        let mut n = 1.0f64;
        while n <= 1e6 {
            let k = n as usize;
            let r = lambert_root(k);
            let t = k as f64 + 1.0;
            assert!((r * r.exp() - t).abs() <= 1e-10 * t, "n={k}");
            n *= 1.37;
        }
    }

    #[test]
    fn asymptotic_estimate() {
        assert!((asymptotic_canonical_log10(100) - 172.039).abs() < 0.01);
        assert!((asymptotic_canonical_log10(400) - 880.18).abs() < 0.01);
        let gaps: Vec<f64> = [50usize, 100, 200, 400]
            .iter()
            .map(|&n| (asymptotic_canonical_log10(n) - big_log10(&count_canonical(n))).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn big_ln_precision() {
        let x = BigUint::from(10u32).pow(300);
        assert!((big_log10(&x) - 300.0).abs() < 1e-12);
        assert!((big_ln(&BigUint::from(7u32)) - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn stam_table_small() {
        let t = StamTable::new(1);
        assert!((t.prob(1) - (-1f64).exp()).abs() < 1e-15);
        assert!((t.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(t.prob(0), 0.0);

        // direct evaluation p_m = m^4 / (e m! 15)
        let t = StamTable::new(4);
        let mut fact = 1.0;
        for m in 1..=10usize {
            fact *= m as f64;
            let direct = (m as f64).powi(4) / (std::f64::consts::E * fact * 15.0);
            assert!((t.prob(m) - direct).abs() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn stam_table_cumulative() {
        for &n in &[1usize, 2, 5, 10, 25, 100, 1000] {
            let t = stam_table(n);
            let c = t.cumulative();
            assert!(c.windows(2).all(|w| w[0] <= w[1]));
            let last = *c.last().unwrap();
            assert!((1.0 - STAM_TRUNCATION..=1.0 + STAM_TRUNCATION).contains(&last), "n={n}: {last}");
            assert!(t.probs().iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }

    #[test]
    fn class_count_inversion() {
        let t = StamTable::new(10);
        assert_eq!(t.class_count_for(0.0), 1);
        assert_eq!(t.class_count_for(t.cumulative()[0]), 2);
        assert_eq!(t.class_count_for(0.999_999_999_999_999), t.m_max());
    }
}

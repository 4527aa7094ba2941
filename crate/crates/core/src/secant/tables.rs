//! Closed-form secant dimensions and the recorded exceptions.

use super::engine::{secant_dim, SecantConfig};
use super::variety::VarietySpec;
use crate::error::{Error, Result};
use crate::monomial::binomial;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Theorem,
    Conjecture,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnownDefect {
    /// `None` when the variety is known to be defective but the value is not tabulated.
    pub defect: Option<u64>,
    pub source: Source,
    pub result: &'static str,
}

fn c(a: u64, b: u64) -> u64 {
    binomial(a as i64, b as i64)
}

/// Alexander-Hirschowitz: `(dim sigma_s(X_{n,d}), defect)`.
///
/// Quadrics use the rank-at-most-`s` symmetric matrix locus,
/// `min{C(n+2,2), s(n+1) - C(s,2)} - 1`.
pub fn ah_oracle(n: u64, d: u32, s: u64) -> Result<(u64, u64)> {
    if d < 2 {
        return Err(Error::Argument("the oracle needs d >= 2".into()));
    }
    let big_n = c(n + u64::from(d), n) - 1;
    let expected = (s * (n + 1)).saturating_sub(1).min(big_n);
    let dim = if d == 2 {
        let matrices = (s * (n + 1)).saturating_sub(c(s, 2));
        let full = c(n + 2, 2);
        if s > n { full - 1 } else { matrices.min(full) - 1 }
    } else if matches!((n, d, s), (4, 3, 7) | (2, 4, 5) | (3, 4, 9) | (4, 4, 14)) {
        expected - 1
    } else {
        expected
    };
    Ok((dim, expected - dim))
}

/// Turns a formula defect relative to `s (dim X + 1) - 1` into a defect
/// relative to the capped expected dimension. Sporadic entries are already
/// relative to the capped value.
fn capped(spec: &VarietySpec, s: u64, formula_defect: u64) -> u64 {
    let naive = (s * (spec.dim() + 1)).saturating_sub(1);
    let actual = naive.saturating_sub(formula_defect).min(spec.ambient_dim());
    spec.expected_secant_dim(s) - actual
}

fn entry(defect: u64, source: Source, result: &'static str) -> Option<KnownDefect> {
    (defect > 0).then_some(KnownDefect { defect: Some(defect), source, result })
}

/// Unbalanced products: `P^{n_1} x ... x P^{n_t} x P^n` whose last factor
/// carries degree one and dominates the others.
fn unbalanced(small: &[(u64, u64)], n: u64, s: u64) -> Option<u64> {
    if small.is_empty() {
        return None;
    }
    let big_n = small.iter().map(|&(ni, di)| c(ni + di, ni)).product::<u64>() - 1;
    let sum: u64 = small.iter().map(|p| p.0).sum();
    let threshold = (big_n + 1).checked_sub(sum)?;
    (threshold < s && s <= n.min(big_n)).then(|| s * s - s * threshold)
}

fn segre_entry(spec: &VarietySpec, dims: &[usize], s: u64) -> Option<KnownDefect> {
    let mut v: Vec<u64> = dims.iter().map(|&n| n as u64).collect();
    v.sort_unstable();
    let (&n, rest) = v.split_last()?;
    let small: Vec<(u64, u64)> = rest.iter().map(|&ni| (ni, 1)).collect();
    if let Some(d) = unbalanced(&small, n, s) {
        return entry(capped(spec, s, d), Source::Theorem, "unbalanced Segre products");
    }
    let one = |cond: bool, name| if cond { entry(1, Source::Theorem, name) } else { None };
    match v.as_slice() {
        [1, 1, 1, 1] => one(s == 3, "four copies of P^1"),
        [2, 2, 2] => one(s == 4, "P^2 x P^2 x P^2"),
        [2, 3, 3] => one(s == 5, "P^2 x P^3 x P^3"),
        [2, a, b] if a == b && a % 2 == 0 => one(s == 3 * a / 2 + 1, "P^2 x P^n x P^n, n even"),
        [1, 1, a, b] if a == b => one(s == 2 * a + 1, "P^1 x P^1 x P^n x P^n"),
        _ => None,
    }
}

fn segre_veronese_entry(spec: &VarietySpec, dims: &[usize], degrees: &[u32], s: u64) -> Option<KnownDefect> {
    if degrees.iter().all(|&d| d == 1) {
        return segre_entry(spec, dims, s);
    }
    if dims.len() == 1 {
        return veronese_entry(dims[0] as u64, degrees[0], s);
    }
    let pairs: Vec<(u64, u64)> = dims.iter().zip(degrees).map(|(&n, &d)| (n as u64, u64::from(d))).collect();
    // unbalanced case: a degree-one factor dominating the rest
    if let Some(pos) = (0..pairs.len()).filter(|&i| pairs[i].1 == 1).max_by_key(|&i| pairs[i].0) {
        let (n, _) = pairs[pos];
        let small: Vec<(u64, u64)> = pairs.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, &p)| p).collect();
        if let Some(d) = unbalanced(&small, n, s) {
            return entry(capped(spec, s, d), Source::Theorem, "unbalanced Segre-Veronese products");
        }
    }
    if pairs.iter().all(|p| p.0 == 1) {
        let mut ds: Vec<u64> = pairs.iter().map(|p| p.1).collect();
        ds.sort_unstable();
        let one = |cond: bool| if cond { entry(1, Source::Theorem, "products of P^1") } else { None };
        return match ds.as_slice() {
            [2, b] if b % 2 == 0 => one(s == b + 1),
            [1, 1, c2] if c2 % 2 == 0 => one(s == c2 + 1),
            [2, 2, 2] => one(s == 7),
            [1, 1, 1, 1] => one(s == 3),
            _ => None,
        };
    }
    None
}

fn veronese_entry(n: u64, d: u32, s: u64) -> Option<KnownDefect> {
    if d < 2 {
        return None;
    }
    let (_, defect) = ah_oracle(n, d, s).ok()?;
    entry(defect, Source::Theorem, "Alexander-Hirschowitz")
}

fn grassmannian_entry(spec: &VarietySpec, k: usize, n: usize, s: u64) -> Option<KnownDefect> {
    let k = k.min(n - 1 - k);
    if k == 0 {
        return None;
    }
    if k == 1 {
        let n = n as u64;
        return if s >= 2 && s < (n + 1) / 2 {
            entry(capped(spec, s, 2 * s * (s - 1)), Source::Theorem, "secants of Grassmannians of lines")
        } else {
            None
        };
    }
    let defect = match (k, n, s) {
        (2, 6, 3) => 1,
        (3, 7, 3) => 1,
        (3, 7, 4) => 4,
        (2, 8, 4) => 2,
        _ => return None,
    };
    entry(defect, Source::Theorem, "Grassmannian exceptions, proved for n <= 15")
}

fn tangential_entry(spec: &VarietySpec, n: u64, d: u32, s: u64) -> Option<KnownDefect> {
    if d == 2 && 2 <= 2 * s && 2 * s < n {
        let span = 2 * s * (n + 1) - c(2 * s, 2);
        let actual = (span - 1).min(spec.ambient_dim());
        return entry(spec.expected_secant_dim(s) - actual, Source::Theorem, "secants of tangential varieties");
    }
    if d == 3 && (2..=4).contains(&n) && s == c(n + 3, 3).div_ceil(2 * n + 1) {
        return Some(KnownDefect { defect: None, source: Source::Theorem, result: "secants of tangential varieties" });
    }
    None
}

fn powers_entry(spec: &VarietySpec, n: u64, k: u32, d: u32, s: u64) -> Option<KnownDefect> {
    if k != 2 {
        return None;
    }
    let dd = c(n + u64::from(d / 2), n);
    let conj = (s * dd).saturating_sub(c(s, 2)).saturating_sub(1).min(spec.ambient_dim());
    let source = if n == 1 { Source::Theorem } else { Source::Conjecture };
    entry(spec.expected_secant_dim(s).saturating_sub(conj), source, "sums of squares of forms")
}

/// Recorded defect of `sigma_s(X)`, or `None` when nothing is recorded.
pub fn known_defect_table(spec: &VarietySpec, s: u64) -> Option<KnownDefect> {
    match spec {
        VarietySpec::Veronese { n, d } => veronese_entry(*n as u64, *d, s),
        VarietySpec::Segre { dims } => segre_entry(spec, dims, s),
        VarietySpec::SegreVeronese { dims, degrees } => segre_veronese_entry(spec, dims, degrees, s),
        VarietySpec::Grassmannian { k, n } => grassmannian_entry(spec, *k, *n, s),
        VarietySpec::TangentialVeronese { n, d } => tangential_entry(spec, *n as u64, *d, s),
        VarietySpec::Chow { n, partition } => match partition.as_slice() {
            [d] => veronese_entry(*n as u64, *d, s),
            [d, 1] => tangential_entry(spec, *n as u64, d + 1, s),
            _ => None,
        },
        VarietySpec::Powers { n, k, d } => powers_entry(spec, *n as u64, *k, *d, s),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericRankReport {
    pub spec: String,
    pub rank: u64,
    pub oracle: Option<u64>,
    pub oracle_source: Option<Source>,
}

/// Closed-form generic rank where one is known.
pub fn generic_rank_oracle(spec: &VarietySpec) -> Option<(u64, Source)> {
    let big_n = spec.ambient_dim();
    let first = |pred: &dyn Fn(u64) -> bool| (1..=big_n + 1).find(|&s| pred(s));
    match spec {
        VarietySpec::Veronese { n, d } if *d >= 2 => {
            first(&|s| ah_oracle(*n as u64, *d, s).map(|r| r.0 == big_n).unwrap_or(false)).map(|s| (s, Source::Theorem))
        }
        VarietySpec::Powers { n, k, d } => {
            let n = *n as u64;
            let dd = c(n + u64::from(d / k), n);
            let target = big_n + 1;
            let s = if *k == 2 {
                first(&|s| (s * dd).saturating_sub(c(s, 2)) >= target)
            } else {
                first(&|s| s * dd >= target)
            }?;
            Some((s, if n == 1 { Source::Theorem } else { Source::Conjecture }))
        }
        _ => None,
    }
}

/// Smallest `s` whose secant variety fills the ambient space, by the engine.
pub fn generic_rank(spec: &VarietySpec, cfg: &SecantConfig) -> Result<GenericRankReport> {
    spec.validate()?;
    let big_n = spec.ambient_dim();
    let mut s = (big_n + 1).div_ceil(spec.dim() + 1).max(1);
    loop {
        if secant_dim(spec, s, cfg)?.actual == big_n {
            break;
        }
        s += 1;
        if s > big_n + 1 {
            return Err(Error::Numeric("secant varieties never filled the ambient space".into()));
        }
    }
    let oracle = generic_rank_oracle(spec);
    Ok(GenericRankReport {
        spec: spec.to_string(),
        rank: s,
        oracle: oracle.map(|o| o.0),
        oracle_source: oracle.map(|o| o.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(t: &str) -> VarietySpec {
        t.parse().unwrap()
    }

    #[test]
    fn ah_values() {
        assert_eq!(ah_oracle(2, 4, 5).unwrap(), (13, 1));
        assert_eq!(ah_oracle(5, 3, 10).unwrap(), (55, 0));
        assert_eq!(ah_oracle(3, 2, 2).unwrap().0, 6);
        assert_eq!(ah_oracle(2, 2, 2).unwrap(), (4, 1));
        assert!(ah_oracle(2, 1, 1).is_err());
    }

    #[test]
    fn recorded_exceptions() {
        assert_eq!(known_defect_table(&spec("grass:2,6"), 3).unwrap().defect, Some(1));
        assert_eq!(known_defect_table(&spec("grass:3,7"), 4).unwrap().defect, Some(4));
        assert_eq!(known_defect_table(&spec("grass:1,7"), 2).unwrap().defect, Some(4));
        assert_eq!(known_defect_table(&spec("segre:2x2x2"), 4).unwrap().defect, Some(1));
        assert_eq!(known_defect_table(&spec("segre:2x2x2"), 3), None);
        assert_eq!(known_defect_table(&spec("segre:1x1x1x1"), 3).unwrap().defect, Some(1));
        assert_eq!(known_defect_table(&spec("segre:2x5"), 2).unwrap().defect, Some(2));
        let t = known_defect_table(&spec("tangential:2,3"), 2).unwrap();
        assert_eq!((t.defect, t.source), (None, Source::Theorem));
        assert_eq!(known_defect_table(&spec("segre-veronese:1,1;2,2"), 3).unwrap().defect, Some(1));
        assert_eq!(known_defect_table(&spec("powers:1,2,4"), 2), None);
    }

    #[test]
    fn generic_ranks() {
        let cfg = SecantConfig::default();
        for t in 1..5 {
            let r = generic_rank(&VarietySpec::Veronese { n: 1, d: 2 * t + 1 }, &cfg).unwrap();
            assert_eq!((r.rank, r.oracle), (u64::from(t) + 1, Some(u64::from(t) + 1)));
        }
        assert_eq!(generic_rank(&spec("veronese:2,5"), &cfg).unwrap().rank, 7);
        let p = generic_rank(&spec("powers:1,2,4"), &cfg).unwrap();
        assert_eq!((p.rank, p.oracle), (2, Some(2)));
    }
}

//! Terracini-style dimension counts over prime fields.
//!
//! The rank of the stacked affine tangent spaces at `s` random points of `X`
//! is the affine dimension of `sigma_s(X)` at a generic point. Over `F_p` a
//! random sample can only undershoot, so the maximum over trials is taken.

use super::tables::{known_defect_table, KnownDefect};
use super::variety::VarietySpec;
use crate::error::{Error, Result};
use crate::modp::{PrimeField, DEFAULT_PRIMES};
use crate::monomial::{self, MonomialBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct SecantConfig {
    pub trials: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
}

impl Default for SecantConfig {
    fn default() -> Self {
        SecantConfig {
            trials: 3,
            primes: DEFAULT_PRIMES.to_vec(),
            seed: crate::binary::DEFAULT_SEED,
        }
    }
}

impl SecantConfig {
    fn fields(&self) -> Result<Vec<PrimeField>> {
        if self.primes.is_empty() {
            return Err(Error::Argument("at least one prime is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::Argument("at least one trial is required".into()));
        }
        self.primes.iter().map(|&p| PrimeField::new(p)).collect()
    }
}

/// Which linear-algebra model computes the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TangentSpans,
    FatPoints,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecantDimReport {
    pub spec: String,
    pub s: u64,
    pub ambient_dim: u64,
    pub variety_dim: u64,
    pub expected: u64,
    pub actual: u64,
    pub defect: u64,
    pub trials: usize,
    pub primes: Vec<u64>,
    /// Dimension found for each prime; a defect is only trusted when they agree.
    pub per_prime: Vec<u64>,
    pub primes_agree: bool,
    pub method: Method,
    pub recorded: Option<KnownDefect>,
}

/// Stable per-cell seed from the global seed, spec, `s`, trial and prime.
fn cell_seed(seed: u64, spec: &str, s: u64, trial: usize, prime: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let bytes = spec
        .bytes()
        .chain(seed.to_le_bytes())
        .chain(s.to_le_bytes())
        .chain((trial as u64).to_le_bytes())
        .chain(prime.to_le_bytes());
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Dense forms over `F_p` in a fixed number of variables.
struct Ring<'a> {
    f: &'a PrimeField,
    nvars: usize,
    bases: Vec<MonomialBasis>,
}

impl<'a> Ring<'a> {
    fn new(f: &'a PrimeField, nvars: usize, max_degree: u32) -> Self {
        Ring {
            f,
            nvars,
            bases: (0..=max_degree).map(|d| MonomialBasis::new(nvars, d)).collect(),
        }
    }

    fn basis(&self, d: u32) -> &MonomialBasis {
        &self.bases[d as usize]
    }

    fn one(&self) -> Vec<u64> {
        vec![1]
    }

    fn mul(&self, a: &[u64], da: u32, b: &[u64], db: u32) -> Vec<u64> {
        let out_basis = self.basis(da + db);
        let mut out = vec![0u64; out_basis.len()];
        for (i, ea) in self.basis(da).list.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            for (j, eb) in self.basis(db).list.iter().enumerate() {
                if b[j] == 0 {
                    continue;
                }
                let k = out_basis.index_of(&monomial::add(ea, eb)).expect("degree matches");
                out[k] = self.f.add(out[k], self.f.mul(a[i], b[j]));
            }
        }
        out
    }

    fn pow(&self, g: &[u64], dg: u32, e: u32) -> Vec<u64> {
        let mut acc = self.one();
        for k in 0..e {
            acc = self.mul(&acc, k * dg, g, dg);
        }
        acc
    }

    fn times_monomial(&self, p: &[u64], dp: u32, m: &[u32]) -> Vec<u64> {
        let dm = monomial::degree(m);
        let out_basis = self.basis(dp + dm);
        let mut out = vec![0u64; out_basis.len()];
        for (i, e) in self.basis(dp).list.iter().enumerate() {
            if p[i] != 0 {
                out[out_basis.index_of(&monomial::add(e, m)).expect("degree matches")] = p[i];
            }
        }
        out
    }

    fn times_variables(&self, p: &[u64], dp: u32) -> Vec<Vec<u64>> {
        (0..self.nvars)
            .map(|j| self.times_monomial(p, dp, &monomial::unit(self.nvars, j)))
            .collect()
    }
}

fn draw(len: usize, params: &mut dyn FnMut() -> u64) -> Vec<u64> {
    (0..len).map(|_| params()).collect()
}

fn kron(f: &PrimeField, factors: &[Vec<u64>]) -> Vec<u64> {
    factors.iter().fold(vec![1u64], |acc, v| {
        acc.iter().flat_map(|&a| v.iter().map(move |&b| f.mul(a, b))).collect()
    })
}

fn det(f: &PrimeField, mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    let mut result = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            result = f.sub(0, result);
        }
        result = f.mul(result, m[c][c]);
        let inv = f.inv(m[c][c]).expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let factor = f.mul(m[r][c], inv);
            for k in c..n {
                let t = f.mul(factor, m[c][k]);
                m[r][k] = f.sub(m[r][k], t);
            }
        }
    }
    result
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn plucker(f: &PrimeField, rows: &[Vec<u64>], cols: &[Vec<usize>]) -> Vec<u64> {
    cols.iter()
        .map(|c| det(f, rows.iter().map(|r| c.iter().map(|&j| r[j]).collect()).collect()))
        .collect()
}

/// Affine-cone tangent space of `X` at the point described by the drawn
/// parameters, as vectors in ambient coordinates.
pub fn tangent_span_basis(spec: &VarietySpec, f: &PrimeField, params: &mut dyn FnMut() -> u64) -> Vec<Vec<u64>> {
    match spec {
        VarietySpec::Veronese { n, d } => {
            let r = Ring::new(f, n + 1, *d);
            let l = draw(n + 1, params);
            r.times_variables(&r.pow(&l, 1, d - 1), d - 1)
        }
        VarietySpec::Segre { dims } => {
            let vs: Vec<Vec<u64>> = dims.iter().map(|&n| draw(n + 1, params)).collect();
            let mut out = Vec::new();
            for (i, &n) in dims.iter().enumerate() {
                for j in 0..=n {
                    let mut factors = vs.clone();
                    factors[i] = (0..=n).map(|k| u64::from(k == j)).collect();
                    out.push(kron(f, &factors));
                }
            }
            out
        }
        VarietySpec::SegreVeronese { dims, degrees } => {
            let rings: Vec<Ring> = dims.iter().zip(degrees).map(|(&n, &d)| Ring::new(f, n + 1, d)).collect();
            let ls: Vec<Vec<u64>> = dims.iter().map(|&n| draw(n + 1, params)).collect();
            let powers: Vec<Vec<u64>> = rings.iter().zip(&ls).zip(degrees).map(|((r, l), &d)| r.pow(l, 1, d)).collect();
            let mut out = Vec::new();
            for (i, r) in rings.iter().enumerate() {
                let d = degrees[i];
                for v in r.times_variables(&r.pow(&ls[i], 1, d - 1), d - 1) {
                    let mut factors = powers.clone();
                    factors[i] = v;
                    out.push(kron(f, &factors));
                }
            }
            out
        }
        VarietySpec::Grassmannian { k, n } => {
            let rows: Vec<Vec<u64>> = (0..=*k).map(|_| draw(n + 1, params)).collect();
            let cols = subsets(n + 1, k + 1);
            let mut out = Vec::new();
            for i in 0..=*k {
                for j in 0..=*n {
                    let mut m = rows.clone();
                    m[i] = (0..=*n).map(|c| u64::from(c == j)).collect();
                    out.push(plucker(f, &m, &cols));
                }
            }
            out
        }
        VarietySpec::Chow { n, partition } => {
            let d: u32 = partition.iter().sum();
            let r = Ring::new(f, n + 1, d);
            let ls: Vec<Vec<u64>> = partition.iter().map(|_| draw(n + 1, params)).collect();
            let mut out = Vec::new();
            for i in 0..partition.len() {
                let mut g = r.one();
                let mut dg = 0;
                for (k, (l, &dk)) in ls.iter().zip(partition).enumerate() {
                    let e = if k == i { dk - 1 } else { dk };
                    g = r.mul(&g, dg, &r.pow(l, 1, e), e);
                    dg += e;
                }
                out.extend(r.times_variables(&g, dg));
            }
            out
        }
        VarietySpec::Powers { n, k, d } => {
            let e = d / k;
            let r = Ring::new(f, n + 1, *d);
            let g = draw(r.basis(e).len(), params);
            let p = r.pow(&g, e, k - 1);
            r.basis(e).list.iter().map(|m| r.times_monomial(&p, d - e, m)).collect()
        }
        VarietySpec::TangentialVeronese { n, d } => {
            let r = Ring::new(f, n + 1, *d);
            let l = draw(n + 1, params);
            let m = draw(n + 1, params);
            let base = r.pow(&l, 1, d - 2);
            let mut out = r.times_variables(&r.mul(&base, d - 2, &l, 1), d - 1);
            out.extend(r.times_variables(&r.mul(&base, d - 2, &m, 1), d - 1));
            out
        }
    }
}

/// Nonzero uniform draws, so no sampled factor is ever the zero vector.
fn random_params<'a>(f: &'a PrimeField, rng: &'a mut ChaCha8Rng) -> impl FnMut() -> u64 + 'a {
    let p = f.modulus();
    move || rng.gen_range(1..p)
}

fn tangent_rank(spec: &VarietySpec, s: u64, f: &PrimeField, rng: &mut ChaCha8Rng) -> usize {
    let mut rows = Vec::new();
    let mut params = random_params(f, rng);
    for _ in 0..s {
        rows.extend(tangent_span_basis(spec, f, &mut params));
    }
    f.rank_in_place(&mut rows)
}

/// Points with multiplicities `m_i` in `P^n`, coordinates in `F_p`.
#[derive(Clone, Debug)]
pub struct FatPointScheme {
    pub n: usize,
    pub points: Vec<Vec<u64>>,
    pub multiplicities: Vec<u32>,
}

fn proportional(f: &PrimeField, a: &[u64], b: &[u64]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| f.mul(a[i], b[j]) == f.mul(a[j], b[i])))
}

/// `HF(R/I_Z, d)`: rank of the conditions `∂^γ(x^β)(P)` for `|γ| < m_P`.
pub fn fat_point_hf(d: u32, scheme: &FatPointScheme, f: &PrimeField) -> Result<usize> {
    if d == 0 {
        return Err(Error::Argument("degree must be positive".into()));
    }
    let n = scheme.n;
    if scheme.points.len() != scheme.multiplicities.len() {
        return Err(Error::Argument("one multiplicity per point is required".into()));
    }
    for (i, p) in scheme.points.iter().enumerate() {
        if p.len() != n + 1 || p.iter().all(|&c| c % f.modulus() == 0) {
            return Err(Error::Argument(format!("point {i} is not a point of P^{n}")));
        }
        if scheme.points[..i].iter().any(|q| proportional(f, p, q)) {
            return Err(Error::Argument(format!("point {i} coincides with an earlier point")));
        }
    }
    let basis = MonomialBasis::new(n + 1, d);
    let mut rows = Vec::new();
    for (p, &m) in scheme.points.iter().zip(&scheme.multiplicities) {
        let powers: Vec<Vec<u64>> = p
            .iter()
            .map(|&c| (0..=d).scan(1u64, |acc, _| { let v = *acc; *acc = f.mul(*acc, c); Some(v) }).collect())
            .collect();
        for order in 0..m.min(d + 1) {
            for g in monomial::monomials(n + 1, order) {
                let row: Vec<u64> = basis
                    .list
                    .iter()
                    .map(|b| {
                        if !monomial::divides(&g, b) {
                            return 0;
                        }
                        let mut v = 1u64;
                        for i in 0..=n {
                            for t in 0..g[i] {
                                v = f.mul(v, u64::from(b[i] - t));
                            }
                            v = f.mul(v, powers[i][(b[i] - g[i]) as usize]);
                        }
                        v
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    Ok(f.rank_in_place(&mut rows))
}

fn random_scheme(n: usize, mults: &[u32], f: &PrimeField, rng: &mut ChaCha8Rng) -> FatPointScheme {
    let mut params = random_params(f, rng);
    FatPointScheme {
        n,
        points: mults.iter().map(|_| draw(n + 1, &mut params)).collect(),
        multiplicities: mults.to_vec(),
    }
}

/// Hilbert function in degree `d` of fat points with generic support.
pub fn generic_fat_point_hf(n: usize, d: u32, mults: &[u32], cfg: &SecantConfig) -> Result<usize> {
    let mut best = 0;
    let key = format!("fat:{n},{d},{mults:?}");
    for f in cfg.fields()? {
        for t in 0..cfg.trials {
            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(cfg.seed, &key, mults.len() as u64, t, f.modulus()));
            let scheme = random_scheme(n, mults, &f, &mut rng);
            match fat_point_hf(d, &scheme, &f) {
                Ok(h) => best = best.max(h),
                Err(Error::Argument(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(best)
}

fn rank_for_prime(spec: &VarietySpec, s: u64, method: Method, f: &PrimeField, cfg: &SecantConfig) -> usize {
    let key = spec.to_string();
    let cap = (spec.expected_secant_dim(s) + 1) as usize;
    let mut best = 0;
    for t in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(cfg.seed, &key, s, t, f.modulus()));
        let r = match (method, spec) {
            (Method::FatPoints, VarietySpec::Veronese { n, d }) => {
                let scheme = random_scheme(*n, &vec![2; s as usize], f, &mut rng);
                fat_point_hf(*d, &scheme, f).unwrap_or(0)
            }
            _ => tangent_rank(spec, s, f, &mut rng),
        };
        best = best.max(r);
        if best >= cap {
            break;
        }
    }
    best
}

/// Secant dimension with an explicit method; fat points only model Veronese varieties.
pub fn secant_dim_with(spec: &VarietySpec, s: u64, method: Method, cfg: &SecantConfig) -> Result<SecantDimReport> {
    spec.validate()?;
    if s == 0 {
        return Err(Error::Argument("s must be at least 1".into()));
    }
    if method == Method::FatPoints && !matches!(spec, VarietySpec::Veronese { .. }) {
        return Err(Error::MethodInapplicable("fat points model only Veronese varieties".into()));
    }
    let fields = cfg.fields()?;
    let per_prime: Vec<u64> = fields
        .iter()
        .map(|f| (rank_for_prime(spec, s, method, f, cfg) as u64).saturating_sub(1))
        .collect();
    let actual = per_prime.iter().copied().max().unwrap_or(0);
    let expected = spec.expected_secant_dim(s);
    Ok(SecantDimReport {
        spec: spec.to_string(),
        s,
        ambient_dim: spec.ambient_dim(),
        variety_dim: spec.dim(),
        expected,
        actual,
        defect: expected.saturating_sub(actual),
        trials: cfg.trials,
        primes: cfg.primes.clone(),
        primes_agree: per_prime.iter().all(|&a| a == actual),
        per_prime,
        method,
        recorded: known_defect_table(spec, s),
    })
}

/// Veronese varieties go through fat points, everything else through tangent spans.
pub fn secant_dim(spec: &VarietySpec, s: u64, cfg: &SecantConfig) -> Result<SecantDimReport> {
    let method = match spec {
        VarietySpec::Veronese { .. } => Method::FatPoints,
        _ => Method::TangentSpans,
    };
    secant_dim_with(spec, s, method, cfg)
}

/// Reports for every `s` in the range, computed in parallel, in order.
pub fn defect_scan(spec: &VarietySpec, s_range: std::ops::RangeInclusive<u64>, cfg: &SecantConfig) -> Result<Vec<SecantDimReport>> {
    s_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| secant_dim(spec, s, cfg))
        .collect()
}

pub fn reports_to_csv(reports: &[SecantDimReport]) -> String {
    let mut out = String::from("spec,s,ambient_dim,variety_dim,expected,actual,defect,primes_agree,recorded_defect\n");
    for r in reports {
        let recorded = match &r.recorded {
            Some(k) => k.defect.map_or("unspecified".to_string(), |d| d.to_string()),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.spec, r.s, r.ambient_dim, r.variety_dim, r.expected, r.actual, r.defect, r.primes_agree, recorded
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> PrimeField {
        PrimeField::new(DEFAULT_PRIMES[0]).unwrap()
    }

    fn fixed(values: Vec<u64>) -> impl FnMut() -> u64 {
        let mut it = values.into_iter();
        move || it.next().expect("enough parameters")
    }

    #[test]
    fn tangent_spaces_at_special_points() {
        let f = field();
        let v: VarietySpec = "veronese:1,3".parse().unwrap();
        let span = tangent_span_basis(&v, &f, &mut fixed(vec![1, 0]));
        assert_eq!(span, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let s: VarietySpec = "segre:1x1x1".parse().unwrap();
        let span = tangent_span_basis(&s, &f, &mut fixed(vec![1, 0, 1, 0, 1, 0]));
        assert_eq!((span.len(), f.rank(&span)), (6, 4));
        let g: VarietySpec = "grass:1,3".parse().unwrap();
        let span = tangent_span_basis(&g, &f, &mut fixed(vec![1, 0, 0, 0, 0, 1, 0, 0]));
        assert_eq!(f.rank(&span), 5);
    }

    #[test]
    fn fat_point_examples() {
        let cfg = SecantConfig::default();
        assert_eq!(generic_fat_point_hf(2, 2, &[2, 2], &cfg).unwrap(), 5);
        assert_eq!(generic_fat_point_hf(3, 3, &[2; 5], &cfg).unwrap(), 20);
        assert_eq!(generic_fat_point_hf(1, 3, &[2], &cfg).unwrap(), 2);
        let f = field();
        let twice = FatPointScheme { n: 1, points: vec![vec![1, 2], vec![2, 4]], multiplicities: vec![1, 1] };
        assert!(matches!(fat_point_hf(3, &twice, &f), Err(Error::Argument(_))));
    }

    #[test]
    fn classical_defects() {
        let cfg = SecantConfig::default();
        let r = secant_dim(&"veronese:2,2".parse().unwrap(), 2, &cfg).unwrap();
        assert_eq!((r.actual, r.expected, r.defect), (4, 5, 1));
        assert!(r.primes_agree);
        let r = secant_dim(&"segre:1x1x1x1".parse().unwrap(), 3, &cfg).unwrap();
        assert_eq!((r.actual, r.expected), (13, 14));
        let r = secant_dim(&"veronese:3,4".parse().unwrap(), 9, &cfg).unwrap();
        assert_eq!(r.defect, 1);
        let r = secant_dim(&"grass:1,7".parse().unwrap(), 2, &cfg).unwrap();
        assert_eq!((r.actual, r.defect), (21, 4));
    }

    #[test]
    fn both_paths_agree_on_veronese() {
        let cfg = SecantConfig { trials: 1, primes: vec![DEFAULT_PRIMES[0]], ..Default::default() };
        for (n, d, s) in [(2, 4, 5), (3, 3, 5), (4, 3, 7), (2, 3, 3)] {
            let spec = VarietySpec::Veronese { n, d };
            let a = secant_dim_with(&spec, s, Method::FatPoints, &cfg).unwrap();
            let b = secant_dim_with(&spec, s, Method::TangentSpans, &cfg).unwrap();
            assert_eq!(a.actual, b.actual, "{spec} s={s}");
        }
    }

    #[test]
    fn reproducible_and_csv() {
        let cfg = SecantConfig::default();
        let spec: VarietySpec = "veronese:2,4".parse().unwrap();
        let scan = defect_scan(&spec, 1..=6, &cfg).unwrap();
        assert_eq!(scan.iter().map(|r| r.defect).collect::<Vec<_>>(), vec![0, 0, 0, 0, 1, 0]);
        let csv = reports_to_csv(&scan);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.contains("veronese:2,4,5,14,2,14,13,1,true,1"));
    }
}

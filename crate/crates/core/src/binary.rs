//! Rank, border rank and minimal decompositions of forms with at most two
//! essential variables.

use crate::apolarity::{apolar_slice, catalecticant_rank, essential_variables, EssentialVariables};
use crate::decomposition::{from_linear_forms, WaringDecomposition};
use crate::error::{Error, Result};
use crate::field::{Field, Rational, C64};
use crate::form::Form;
use crate::roots::{binary_squarefree, univariate_complex_roots};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub border_rank: usize,
    pub rank: usize,
    /// Kernel element tested for distinct roots, in the essential variables.
    pub witness: Option<Form>,
    pub witness_squarefree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificateReport {
    pub border_rank: usize,
    pub rank: usize,
    pub witness: Option<String>,
    pub witness_squarefree: bool,
}

impl RankCertificate {
    pub fn report(&self) -> RankCertificateReport {
        RankCertificateReport {
            border_rank: self.border_rank,
            rank: self.rank,
            witness: self.witness.as_ref().map(|g| g.format_with('y', crate::form::format_rational)),
            witness_squarefree: self.witness_squarefree,
        }
    }
}

/// Essential-variable reduction that insists on at most two variables.
fn reduce(f: &Form) -> Result<EssentialVariables<Rational>> {
    if f.is_zero() {
        return Err(Error::Argument("the zero form has no rank".into()));
    }
    let ev = essential_variables(f)?;
    if ev.m > 2 {
        return Err(Error::MethodInapplicable(format!(
            "form has {} essential variables, the binary suite needs at most 2",
            ev.m
        )));
    }
    Ok(ev)
}

/// Rank of the most square catalecticant.
pub fn binary_border_rank(f: &Form) -> Result<usize> {
    let ev = reduce(f)?;
    let d = f.degree();
    if ev.m == 1 {
        return Ok(1);
    }
    catalecticant_rank(&ev.reduced, d / 2)
}

/// A square-free element of the span of `basis`: random integer combinations
/// first, then each basis element and pairwise sums and differences.
pub fn squarefree_element(basis: &[Form], rng: &mut ChaCha8Rng) -> Result<Option<Form>> {
    if basis.is_empty() {
        return Ok(None);
    }
    for _ in 0..5 {
        let g = random_combination(basis, rng);
        if !g.is_zero() && binary_squarefree(&g)? {
            return Ok(Some(g));
        }
    }
    for g in basis {
        if binary_squarefree(g)? {
            return Ok(Some(g.clone()));
        }
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            for g in [a.add(b)?, a.sub(b)?] {
                if !g.is_zero() && binary_squarefree(&g)? {
                    return Ok(Some(g));
                }
            }
        }
    }
    Ok(None)
}

fn random_combination(basis: &[Form], rng: &mut ChaCha8Rng) -> Form {
    let mut g = Form::zero(basis[0].nvars(), basis[0].degree());
    for b in basis {
        let c = Rational::from_i64(rng.gen_range(-10..=10));
        g = g.add(&b.scale(&c)).expect("same space");
    }
    g
}

pub fn binary_rank(f: &Form) -> Result<RankCertificate> {
    binary_rank_seeded(f, DEFAULT_SEED)
}

/// Rank `r` when a generic element of `F^⊥_r` has distinct roots, otherwise
/// `d - r + 2`, where `r` is the border rank.
pub fn binary_rank_seeded(f: &Form, seed: u64) -> Result<RankCertificate> {
    let ev = reduce(f)?;
    let d = f.degree() as usize;
    if ev.m == 1 {
        return Ok(RankCertificate {
            border_rank: 1,
            rank: 1,
            witness: None,
            witness_squarefree: true,
        });
    }
    let g = &ev.reduced;
    let r = catalecticant_rank(g, (d / 2) as u32)?;
    let slice = apolar_slice(g, r as u32)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match squarefree_element(&slice.basis, &mut rng)? {
        Some(w) => Ok(RankCertificate {
            border_rank: r,
            rank: r,
            witness: Some(w),
            witness_squarefree: true,
        }),
        None => Ok(RankCertificate {
            border_rank: r,
            rank: d - r + 2,
            witness: slice.basis.first().cloned(),
            witness_squarefree: false,
        }),
    }
}

/// Minimal Waring decomposition of a form with at most two essential variables.
pub fn binary_decompose(f: &Form, tol: f64) -> Result<WaringDecomposition> {
    binary_decompose_seeded(f, tol, DEFAULT_SEED)
}

pub fn binary_decompose_seeded(f: &Form, tol: f64, seed: u64) -> Result<WaringDecomposition> {
    let ev = reduce(f)?;
    let lift = |l: &[C64]| ev.lift_linear(l, |c: &Rational| c.to_c64());
    if ev.m == 1 {
        let form = lift(&[C64::new(1.0, 0.0)]);
        return from_linear_forms(f, vec![form], tol);
    }
    let cert = binary_rank_seeded(f, seed)?;
    let g = &ev.reduced;
    let slice = apolar_slice(g, cert.rank as u32)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdec0);
    let mut last_err = Error::Numeric("no square-free kernel element".into());
    let mut candidates: Vec<Form> = cert.witness.iter().filter(|_| cert.witness_squarefree).cloned().collect();
    for attempt in 0..12 {
        if attempt >= candidates.len() {
            match squarefree_element(&slice.basis, &mut rng)? {
                Some(w) => candidates.push(w),
                None => break,
            }
        }
        let w = &candidates[attempt];
        let roots = univariate_complex_roots(w, tol.min(1e-12))?;
        let forms: Vec<Vec<C64>> = roots
            .iter()
            .map(|&(a, b)| {
                let s = a.norm().max(b.norm());
                lift(&[a / s, b / s])
            })
            .collect();
        match from_linear_forms(f, forms, tol) {
            Ok(dec) => return Ok(dec),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Rank of a form on the second secant variety of the Veronese variety.
pub fn sigma2_rank(f: &Form) -> Result<RankCertificate> {
    let ev = essential_variables(f)?;
    match ev.m {
        1 => Ok(RankCertificate {
            border_rank: 1,
            rank: 1,
            witness: None,
            witness_squarefree: true,
        }),
        2 => binary_rank(f),
        m => Err(Error::MethodInapplicable(format!(
            "not on the second secant variety: {m} essential variables"
        ))),
    }
}

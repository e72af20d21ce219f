//! Screening operators on the Y-monomial algebra and kernel membership.
//!
//! For each node i the operator S_i maps the algebra into a module with
//! generators S_{i,n} (one per lattice position) subject to
//! `S_{i,n+2r_i} = A_{i,n+r_i} S_{i,n}`.  After reduction every element is a
//! sum of polynomial coefficients attached to the finitely many residues
//! ρ ∈ [0, 2r_i).  Characters of finite-dimensional modules lie in the common
//! kernel of all S_i, and for rank one the kernel is spanned by products of
//! the two-term sums t_n = Y_{1,n} + Y_{1,n+2}^{-1}.

use std::collections::{BTreeMap, BTreeSet};

use qc_cartan::CartanData;
use qc_ypoly::{a_monomial, YMono, YPoly};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod linalg;

#[derive(Debug, Error)]
pub enum ScreenError {
    #[error("node index {node} out of range 1..={rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("kernel window computation supports rank one only, got rank {0}")]
    RankOneOnly(usize),
    #[error("empty window [{0}, {1}]")]
    BadWindow(i64, i64),
    #[error("invalid screened-element JSON: {0}")]
    Json(String),
}

fn check_node(cd: &CartanData, i: usize) -> Result<(), ScreenError> {
    if i == 0 || i > cd.rank {
        return Err(ScreenError::NodeOutOfRange {
            node: i,
            rank: cd.rank,
        });
    }
    Ok(())
}

/// Element of the screening module: finitely many parts p_{i,ρ} ⊗ S_{i,ρ}
/// with ρ in the canonical residue window [0, 2r_i).  Zero parts are never
/// stored.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ScreenedElement {
    parts: BTreeMap<(usize, i64), YPoly>,
}

impl ScreenedElement {
    pub fn zero() -> ScreenedElement {
        ScreenedElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, i: usize, rho: i64) -> YPoly {
        self.parts.get(&(i, rho)).cloned().unwrap_or_else(YPoly::zero)
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, i64, &YPoly)> + '_ {
        self.parts.iter().map(|(&(i, rho), p)| (i, rho, p))
    }

    pub fn add_part(&mut self, i: usize, rho: i64, p: &YPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.parts.entry((i, rho)).or_default();
        *slot = slot.add(p);
        if slot.is_zero() {
            self.parts.remove(&(i, rho));
        }
    }

    pub fn add(&self, other: &ScreenedElement) -> ScreenedElement {
        let mut out = self.clone();
        for (i, rho, p) in other.parts() {
            out.add_part(i, rho, p);
        }
        out
    }

    /// Multiply every coefficient polynomial by q (the module is a module
    /// over the Y-algebra).
    pub fn mul_poly(&self, q: &YPoly) -> ScreenedElement {
        let mut out = ScreenedElement::zero();
        for (i, rho, p) in self.parts() {
            out.add_part(i, rho, &p.mul(q));
        }
        out
    }

    /// Translate all coefficient polynomials by d, leaving the generator
    /// residues untouched.
    pub fn shift(&self, d: i64) -> ScreenedElement {
        let mut out = ScreenedElement::zero();
        for (i, rho, p) in self.parts() {
            out.add_part(i, rho, &p.shift(d));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let repr = ScreenedRepr {
            parts: self
                .parts()
                .map(|(i, rho, p)| PartRepr {
                    i,
                    rho,
                    poly: serde_json::from_str(&p.to_json()).expect("poly json"),
                })
                .collect(),
        };
        serde_json::to_string(&repr).expect("screened-element serialization")
    }

    pub fn from_json(s: &str) -> Result<ScreenedElement, ScreenError> {
        let repr: ScreenedRepr =
            serde_json::from_str(s).map_err(|e| ScreenError::Json(e.to_string()))?;
        let mut out = ScreenedElement::zero();
        for part in repr.parts {
            let poly_text =
                serde_json::to_string(&part.poly).map_err(|e| ScreenError::Json(e.to_string()))?;
            let p = YPoly::from_json(&poly_text).map_err(|e| ScreenError::Json(e.to_string()))?;
            out.add_part(part.i, part.rho, &p);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PartRepr {
    i: usize,
    rho: i64,
    poly: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct ScreenedRepr {
    parts: Vec<PartRepr>,
}

/// Express the generator S_{i,n} as F · S_{i,ρ} with ρ = n mod 2r_i in
/// [0, 2r_i).  Returns (ρ, F, direction) where direction is +1 when the
/// reduction multiplied by A-monomials (n ≥ ρ) and -1 when it divided.
///
/// ```
/// # use qc_cartan::{CartanData, Series};
/// # use qc_ypoly::YMono;
/// # use qc_screening::reduce_generator;
/// let a1 = CartanData::build(Series::A, 1).unwrap();
/// let (rho, f, dir) = reduce_generator(&a1, 1, 2).unwrap();
/// assert_eq!((rho, dir), (0, 1));
/// assert_eq!(f, YMono::from_pairs(&[(1, 0, 1), (1, 2, 1)]));
/// ```
pub fn reduce_generator(
    cd: &CartanData,
    i: usize,
    n: i64,
) -> Result<(i64, YMono, i8), ScreenError> {
    check_node(cd, i)?;
    let r = cd.sym(i);
    let rho = n.rem_euclid(2 * r);
    let k = (n - rho) / (2 * r);
    let mut f = YMono::one();
    if k >= 0 {
        for t in 0..k {
            let a = a_monomial(cd, i, rho + (2 * t + 1) * r).expect("node checked");
            f = f.mul(&a);
        }
    } else {
        for t in 1..=-k {
            let a = a_monomial(cd, i, rho - (2 * t - 1) * r).expect("node checked");
            f = f.mul(&a.inv());
        }
    }
    Ok((rho, f, if k >= 0 { 1 } else { -1 }))
}

/// Apply the screening operator S_i to p.  Each term c·M contributes
/// c · e · M ⊗ S_{i,n} for every factor Y_{i,n}^e of M (the Leibniz rule on
/// Y_{i,n} ↦ Y_{i,n} S_{i,n}, hence the factor e, negative for inverse
/// powers), reduced to canonical residues.
pub fn apply_screening(
    cd: &CartanData,
    i: usize,
    p: &YPoly,
) -> Result<ScreenedElement, ScreenError> {
    check_node(cd, i)?;
    let mut out = ScreenedElement::zero();
    for (m, c) in p.terms() {
        for ((j, n), e) in m.iter() {
            if j != i {
                continue;
            }
            let (rho, f, _) = reduce_generator(cd, i, n)?;
            let coeff = c.checked_mul(e).expect("integer overflow in screening");
            let mut contribution = YPoly::zero();
            contribution.add_term(m.mul(&f), coeff);
            out.add_part(i, rho, &contribution);
        }
    }
    Ok(out)
}

/// Whether p lies in the kernel of every screening operator — the membership
/// test for the image of the q-character homomorphism.
pub fn in_kernel_all(cd: &CartanData, p: &YPoly) -> Result<bool, ScreenError> {
    for i in 1..=cd.rank {
        if !apply_screening(cd, i, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn window_monomials(lo: i64, hi: i64, degree: u32) -> Vec<YMono> {
    // exponent vectors over positions lo..=hi with Σ|e| ≤ degree
    let mut partial: Vec<(YMono, i64)> = vec![(YMono::one(), degree as i64)];
    for pos in lo..=hi {
        let mut next = Vec::with_capacity(partial.len());
        for (m, budget) in &partial {
            for e in -*budget..=*budget {
                let mut m2 = m.clone();
                m2.mul_var(1, pos, e);
                next.push((m2, budget - e.abs()));
            }
        }
        partial = next;
    }
    let mut out: Vec<YMono> = partial.into_iter().map(|(m, _)| m).collect();
    out.sort();
    out
}

/// Exact basis (primitive integer vectors) of the kernel of the rank-one
/// screening operator intersected with the space of polynomials supported on
/// Y_{1,lo}..Y_{1,hi} with absolute total degree Σ|e| ≤ degree.
pub fn kernel_basis_bounded(
    cd: &CartanData,
    window: (i64, i64),
    degree: u32,
) -> Result<Vec<YPoly>, ScreenError> {
    if cd.rank != 1 {
        return Err(ScreenError::RankOneOnly(cd.rank));
    }
    let (lo, hi) = window;
    if lo > hi {
        return Err(ScreenError::BadWindow(lo, hi));
    }
    let candidates = window_monomials(lo, hi, degree);
    // equation rows indexed by (residue, image monomial)
    let mut row_index: BTreeMap<(i64, YMono), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for (col, m) in candidates.iter().enumerate() {
        let mut p = YPoly::zero();
        p.add_term(m.clone(), 1);
        let image = apply_screening(cd, 1, &p)?;
        for (_, rho, poly) in image.parts() {
            for (im, c) in poly.terms() {
                let next = row_index.len();
                let row = *row_index.entry((rho, im.clone())).or_insert(next);
                entries.push((row, col, c));
            }
        }
    }
    let mut matrix = vec![vec![0i64; candidates.len()]; row_index.len()];
    for (r, c, v) in entries {
        matrix[r][c] += v;
    }
    let basis = linalg::nullspace_primitive(&matrix, candidates.len());
    Ok(basis
        .into_iter()
        .map(|v| {
            let mut p = YPoly::zero();
            for (col, &coeff) in v.iter().enumerate() {
                if coeff != 0 {
                    p.add_term(candidates[col].clone(), coeff);
                }
            }
            p
        })
        .collect())
}

/// The two-term kernel generator t_n = Y_{1,n} + Y_{1,n+2}^{-1}.
pub fn t_poly(n: i64) -> YPoly {
    let mut p = YPoly::zero();
    p.add_term(YMono::var(1, n, 1), 1);
    p.add_term(YMono::var(1, n + 2, -1), 1);
    p
}

/// All products of at most `degree` generators t_n whose support fits in the
/// window: the reference spanning family for [`kernel_basis_bounded`].
pub fn t_products(window: (i64, i64), degree: u32) -> Vec<YPoly> {
    let (lo, hi) = window;
    let centers: Vec<i64> = (lo..=hi).filter(|n| n + 2 <= hi).collect();
    let mut out = vec![YPoly::one()];
    let mut layer = vec![(YPoly::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (p, start) in &layer {
            for (idx, &n) in centers.iter().enumerate().skip(*start) {
                let q = p.mul(&t_poly(n));
                out.push(q.clone());
                next.push((q, idx));
            }
        }
        layer = next;
    }
    out
}

/// Whether two families of polynomials span the same rational subspace.
pub fn same_span(xs: &[YPoly], ys: &[YPoly]) -> bool {
    let mut columns: BTreeSet<YMono> = BTreeSet::new();
    for p in xs.iter().chain(ys) {
        for m in p.monomials() {
            columns.insert(m.clone());
        }
    }
    let order: Vec<&YMono> = columns.iter().collect();
    let to_row = |p: &YPoly| -> Vec<i64> { order.iter().map(|m| p.coeff(m)).collect() };
    let rows_x: Vec<Vec<i64>> = xs.iter().map(to_row).collect();
    let rows_y: Vec<Vec<i64>> = ys.iter().map(to_row).collect();
    let rank_x = linalg::row_rank(&rows_x);
    let rank_y = linalg::row_rank(&rows_y);
    if rank_x != rank_y {
        return false;
    }
    let mut all = rows_x;
    all.extend(rows_y);
    linalg::row_rank(&all) == rank_x
}

//! Field-generic Bethe systems for arbitrary type.  Equations are built from
//! Cartan data and site highest weights and can be evaluated exactly over
//! the rationals or numerically over the complex numbers.

use std::ops::{Div, Neg, Sub};

use num_traits::{One, Zero};
use qc_cartan::CartanData;
use qc_charbuild::HighestWeightData;

use crate::BetheError;

/// Normalization of the right-hand scalar.
///
/// `Standard` carries -q^{-N} on every node, the choice under which the
/// general system specializes on rank one to the standard printed rank-one
/// equations.  `PoleCancellation` carries +q^{2 m_i}; on rank one this is the
/// residue-cancellation condition of the two-term eigenvalue, which is the
/// form the numeric solver can validate against a transfer matrix.  Beyond
/// rank one the pole-cancellation scalar is an untested extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaeForm {
    Standard,
    PoleCancellation,
}

/// A Bethe system: Cartan data, the tensor factors (as highest weights on
/// the position lattice, so the j-th site's node-i polynomial has roots
/// q^n over its stored positions n), and the unknown count per node.
#[derive(Clone, Debug)]
pub struct BetheSystem {
    cd: CartanData,
    sites: Vec<HighestWeightData>,
    m: Vec<usize>,
}

/// Minimal field interface the equations are evaluated over.
pub trait Field:
    Clone + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Div<Output = Self> + PartialEq
{
}

impl<T> Field for T where
    T: Clone + Zero + One + Neg<Output = T> + Sub<Output = T> + Div<Output = T> + PartialEq
{
}

fn powi<T: Field>(x: &T, n: i64) -> T {
    if n < 0 {
        return T::one() / powi(x, -n);
    }
    let mut out = T::one();
    for _ in 0..n {
        out = out * x.clone();
    }
    out
}

pub fn generate_bethe(
    cd: &CartanData,
    sites: &[HighestWeightData],
    m: Vec<usize>,
) -> Result<BetheSystem, BetheError> {
    BetheSystem::new(cd, sites, m)
}

impl BetheSystem {
    pub fn new(
        cd: &CartanData,
        sites: &[HighestWeightData],
        m: Vec<usize>,
    ) -> Result<Self, BetheError> {
        if m.len() != cd.rank {
            return Err(BetheError::BadUnknownCounts {
                rank: cd.rank,
                got: m.len(),
            });
        }
        Ok(BetheSystem {
            cd: cd.clone(),
            sites: sites.to_vec(),
            m,
        })
    }

    pub fn unknown_count(&self) -> usize {
        self.m.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.m
    }

    /// (node, root index) of each equation, in evaluation order.
    pub fn equation_labels(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (idx, &mi) in self.m.iter().enumerate() {
            for k in 0..mi {
                out.push((idx + 1, k));
            }
        }
        out
    }

    /// All node-i Drinfeld root exponents across the sites (β = q^n per
    /// entry), site by site.
    fn node_roots(&self, i: usize) -> Vec<i64> {
        let mut out = Vec::new();
        for s in &self.sites {
            out.extend_from_slice(s.roots(i));
        }
        out
    }

    /// The four polynomial pieces of one equation at the given point:
    /// (lhs numerator, lhs denominator, rhs numerator including the scalar,
    /// rhs denominator).  The left side is
    /// ∏_{j,β} (w q_i - β)/(w - β q_i), the telescoped Drinfeld ratio; the
    /// right side carries the same-node q_i^{∓2} pair products and the
    /// cross-node q^{∓C_li} products.
    fn equation_parts<T: Field>(
        &self,
        q: &T,
        w: &[Vec<T>],
        i: usize,
        k: usize,
        form: BaeForm,
    ) -> (T, T, T, T) {
        let qi = powi(q, self.cd.sym(i));
        let wk = w[i - 1][k].clone();

        let mut lhs_num = T::one();
        let mut lhs_den = T::one();
        for n in self.node_roots(i) {
            let beta = powi(q, n);
            lhs_num = lhs_num * (wk.clone() * qi.clone() - beta.clone());
            lhs_den = lhs_den * (wk.clone() - beta * qi.clone());
        }

        let mut rhs_num = match form {
            BaeForm::Standard => -powi(q, -(self.sites.len() as i64)),
            BaeForm::PoleCancellation => powi(q, 2 * self.m[i - 1] as i64),
        };
        let mut rhs_den = T::one();
        let qi2 = qi.clone() * qi.clone();
        for (s, ws) in w[i - 1].iter().enumerate() {
            if s == k {
                continue;
            }
            rhs_num = rhs_num * (wk.clone() - ws.clone() / qi2.clone());
            rhs_den = rhs_den * (wk.clone() - ws.clone() * qi2.clone());
        }
        for l in 1..=self.cd.rank {
            if l == i {
                continue;
            }
            let c_li = self.cd.cartan(l, i);
            if c_li == 0 {
                continue;
            }
            let qc = powi(q, c_li);
            for ws in &w[l - 1] {
                rhs_num = rhs_num * (wk.clone() - ws.clone() / qc.clone());
                rhs_den = rhs_den * (wk.clone() - ws.clone() * qc.clone());
            }
        }
        (lhs_num, lhs_den, rhs_num, rhs_den)
    }

    /// Equation sides as field values (lhs, rhs); panics on division by an
    /// exact zero, so sample points must avoid the pole locus.
    pub fn equation_sides<T: Field>(&self, q: &T, w: &[Vec<T>], form: BaeForm) -> Vec<(T, T)> {
        self.equation_labels()
            .iter()
            .map(|&(i, k)| {
                let (ln, ld, rn, rd) = self.equation_parts(q, w, i, k, form);
                (ln / ld, rn / rd)
            })
            .collect()
    }

    /// Denominator-cleared residuals lhs_num·rhs_den - rhs_num·lhs_den,
    /// one per unknown; all zero exactly when the w's solve the system.
    pub fn residuals<T: Field>(&self, q: &T, w: &[Vec<T>], form: BaeForm) -> Vec<T> {
        self.equation_labels()
            .iter()
            .map(|&(i, k)| {
                let (ln, ld, rn, rd) = self.equation_parts(q, w, i, k, form);
                ln * rd - rn * ld
            })
            .collect()
    }
}

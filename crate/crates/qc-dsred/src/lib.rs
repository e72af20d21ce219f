//! Canonical-form coefficients of the type-A difference operator reduction.
//!
//! A diagonal first-order difference operator with entries λ_i(sq^{-2i+2})
//! reduces to a canonical row whose coefficients t_i(s) are shifted
//! elementary symmetric sums of the λ's.  Replacing each λ_i by the Y-pair
//! Λ_{i,a} = Y_{i,a+i-1} Y_{i-1,a+i}^{-1} turns t_i into the q-character of
//! the i-th fundamental representation of sl_N; this crate implements the
//! symbols, the sums, the substitution, and the character comparison.

use std::collections::BTreeMap;

use qc_cartan::{CartanData, Series};
use qc_charbuild::{fm_expand, FmFailure, FmLimits, HighestWeightData};
use qc_ypoly::{YMono, YPoly};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DsError {
    #[error("component index must satisfy 1 <= i <= N-1 with N >= 2, got N={n}, i={i}")]
    IndexOutOfRange { n: usize, i: usize },
    #[error("no aligning shift: dominant part is not a single fundamental variable ({0})")]
    NoAlignment(String),
    #[error("character completion failed: {0}")]
    Char(#[from] FmFailure),
}

/// λ_{index}(s q^{2 shift}), abelianized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LambdaSymbol {
    pub index: usize,
    pub shift: i64,
}

/// Laurent monomial in the λ symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct LambdaMono {
    exps: BTreeMap<LambdaSymbol, i64>,
}

impl LambdaMono {
    pub fn one() -> Self {
        LambdaMono::default()
    }

    pub fn var(index: usize, shift: i64) -> Self {
        let mut m = LambdaMono::one();
        m.mul_var(index, shift, 1);
        m
    }

    pub fn mul_var(&mut self, index: usize, shift: i64, e: i64) {
        let sym = LambdaSymbol { index, shift };
        let cur = self.exps.entry(sym).or_insert(0);
        *cur = cur.checked_add(e).expect("lambda exponent overflow");
        if *cur == 0 {
            self.exps.remove(&sym);
        }
    }

    pub fn mul(&self, other: &LambdaMono) -> LambdaMono {
        let mut out = self.clone();
        for (&sym, &e) in &other.exps {
            out.mul_var(sym.index, sym.shift, e);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (LambdaSymbol, i64)> + '_ {
        self.exps.iter().map(|(&s, &e)| (s, e))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.exps.keys().map(|s| s.index).max()
    }
}

/// Integer combination of λ monomials for a fixed sl_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoly {
    pub n: usize,
    terms: BTreeMap<LambdaMono, i64>,
}

impl LambdaPoly {
    pub fn zero(n: usize) -> Self {
        LambdaPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, m: LambdaMono, c: i64) {
        let cur = self.terms.entry(m).or_insert(0);
        *cur = cur.checked_add(c).expect("lambda coefficient overflow");
        if *cur == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LambdaMono, i64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Rewrites every λ_N occurrence through the determinant constraint
    /// λ_N(sq^{2m}) = ∏_{i<N} λ_i(sq^{2(m+N-i)})^{-1}, leaving a polynomial
    /// in λ_1..λ_{N-1} only.
    pub fn eliminate_top(&self) -> LambdaPoly {
        let n = self.n;
        let mut out = LambdaPoly::zero(n);
        for (mono, c) in self.terms() {
            let mut rewritten = LambdaMono::one();
            for (sym, e) in mono.iter() {
                if sym.index == n {
                    for i in 1..n {
                        rewritten.mul_var(i, sym.shift + (n as i64 - i as i64), -e);
                    }
                } else {
                    rewritten.mul_var(sym.index, sym.shift, e);
                }
            }
            out.add_term(rewritten, c);
        }
        out
    }
}

/// The constrained product ∏_{i=1}^{N} λ_i(sq^{-2i+2}).
pub fn constraint_monomial(n: usize) -> LambdaMono {
    let mut m = LambdaMono::one();
    for i in 1..=n {
        m.mul_var(i, 1 - i as i64, 1);
    }
    m
}

/// Canonical-form coefficient t_i(s) = Σ_{j_1<…<j_i} ∏_t λ_{j_t}(sq^{-2(t-1)}):
/// the t-th factor of every product is stepped down by q^2, regardless of
/// which index it carries.
pub fn mu_q_component(n: usize, i: usize) -> Result<LambdaPoly, DsError> {
    if n < 2 || i == 0 || i >= n {
        return Err(DsError::IndexOutOfRange { n, i });
    }
    let mut out = LambdaPoly::zero(n);
    let mut subset: Vec<usize> = (1..=i).collect();
    loop {
        let mut m = LambdaMono::one();
        for (t, &j) in subset.iter().enumerate() {
            m.mul_var(j, -(t as i64), 1);
        }
        out.add_term(m, 1);
        // next i-subset of {1..n} in lexicographic order
        let mut pos = i;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if subset[pos] < n - (i - 1 - pos) {
                subset[pos] += 1;
                for t in pos + 1..i {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The Y-monomial of Λ_{i, c} for sl_N: Y_{i,c+i-1}·Y_{i-1,c+i}^{-1} with
/// the boundary rows Y_0 and Y_N read as 1.
pub fn lambda_y_factor(n: usize, i: usize, c: i64) -> YMono {
    let mut m = YMono::one();
    if i < n {
        m.mul_var(i, c + i as i64 - 1, 1);
    }
    if i > 1 {
        m.mul_var(i - 1, c + i as i64, -1);
    }
    m
}

/// Sends each λ_i(sq^{2k}) to Λ_{i, a+2k} and expands.
pub fn substitute_lambda(p: &LambdaPoly, a: i64) -> YPoly {
    let mut out = YPoly::zero();
    for (mono, c) in p.terms() {
        let mut y = YMono::one();
        for (sym, e) in mono.iter() {
            y = y.mul(&lambda_y_factor(p.n, sym.index, a + 2 * sym.shift).pow(e));
        }
        out.add_term(y, c);
    }
    out
}

/// Position of the aligned fundamental: the unique dominant monomial of `p`
/// must be a first power of Y_{i,c}; returns c.
pub fn align_shift(p: &YPoly, i: usize) -> Result<i64, DsError> {
    let doms = p.dominant_monomials();
    if doms.len() != 1 {
        return Err(DsError::NoAlignment(format!(
            "{} dominant monomials",
            doms.len()
        )));
    }
    let pairs: Vec<((usize, i64), i64)> = doms[0].iter().collect();
    match pairs.as_slice() {
        [((node, c), 1)] if *node == i => Ok(*c),
        _ => Err(DsError::NoAlignment(format!("{:?}", doms[0]))),
    }
}

/// Outcome of matching a substituted canonical-form coefficient against the
/// completed fundamental character: `shift` is the global lattice offset d
/// with χ(ω_i at a+d) equal to the substituted t_i at a.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DsComparison {
    pub matches: bool,
    pub shift: i64,
    pub terms: usize,
}

pub fn compare_with_qcharacter(n: usize, i: usize, a: i64) -> Result<DsComparison, DsError> {
    let lhs = substitute_lambda(&mu_q_component(n, i)?, a);
    let c = align_shift(&lhs, i)?;
    let cd = CartanData::build(Series::A, n - 1).expect("type A cartan data");
    let mut hw = HighestWeightData::new();
    hw.add_root(i, c);
    let rhs = fm_expand(&cd, &hw, FmLimits::default())?;
    Ok(DsComparison {
        matches: lhs == rhs,
        shift: c - a,
        terms: lhs.num_terms(),
    })
}

//! Laurent monomials and integer polynomials in the variables Y_{i,n}
//! (node i, lattice position n), together with weights, dominance, the
//! root monomials A_{i,n}, restriction to node subsets and classical
//! (weight-space) characters.
//!
//! All spectral parameters live on one lattice coset: a = q^n with n an
//! integer. Coefficient arithmetic is checked; overflow panics rather than
//! wrapping.

use qc_cartan::CartanData;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum YError {
    #[error("node index {node} out of range 1..={rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in coefficient")
}

fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in coefficient")
}

/// Laurent monomial ∏ Y_{i,n}^{e}. No zero exponents are stored; the empty
/// map is the unit monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct YMono {
    exps: BTreeMap<(usize, i64), i64>,
}

impl YMono {
    pub fn one() -> YMono {
        YMono::default()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn var(i: usize, n: i64, e: i64) -> YMono {
        let mut m = YMono::one();
        if e != 0 {
            m.exps.insert((i, n), e);
        }
        m
    }

    pub fn from_pairs(pairs: &[(usize, i64, i64)]) -> YMono {
        let mut m = YMono::one();
        for &(i, n, e) in pairs {
            m.mul_var(i, n, e);
        }
        m
    }

    /// Exponent of Y_{i,n}.
    pub fn exp(&self, i: usize, n: i64) -> i64 {
        *self.exps.get(&(i, n)).unwrap_or(&0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, i64), i64)> + '_ {
        self.exps.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Multiply by Y_{i,n}^e in place.
    pub fn mul_var(&mut self, i: usize, n: i64, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry((i, n)).or_insert(0);
        *slot = cadd(*slot, e);
        if *slot == 0 {
            self.exps.remove(&(i, n));
        }
    }

    pub fn mul(&self, other: &YMono) -> YMono {
        let mut m = self.clone();
        for ((i, n), e) in other.iter() {
            m.mul_var(i, n, e);
        }
        m
    }

    pub fn inv(&self) -> YMono {
        self.pow(-1)
    }

    pub fn pow(&self, k: i64) -> YMono {
        if k == 0 {
            return YMono::one();
        }
        let mut m = YMono::one();
        for ((i, n), e) in self.iter() {
            m.exps.insert((i, n), cmul(e, k));
        }
        m
    }

    /// All stored exponents non-negative (the unit monomial is dominant).
    pub fn is_dominant(&self) -> bool {
        self.exps.values().all(|&e| e > 0)
    }

    /// Translate every lattice position by d.
    pub fn shift(&self, d: i64) -> YMono {
        let mut m = YMono::one();
        for ((i, n), e) in self.iter() {
            m.exps.insert((i, n + d), e);
        }
        m
    }

    /// Drop every factor Y_{i,·} with i not in `keep`.
    pub fn restrict<F: Fn(usize) -> bool>(&self, keep: F) -> YMono {
        let mut m = YMono::one();
        for ((i, n), e) in self.iter() {
            if keep(i) {
                m.exps.insert((i, n), e);
            }
        }
        m
    }

    /// Sum of exponents (the classical total degree).
    pub fn total_degree(&self) -> i64 {
        self.exps.values().fold(0, |a, &e| cadd(a, e))
    }
}

// Display is the canonical label used in DOT exports and CLI output, so it
// must be deterministic; BTreeMap iteration order provides that.
impl fmt::Display for YMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for ((i, n), e) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "Y_{{{},{}}}", i, n)?;
            } else {
                write!(f, "Y_{{{},{}}}^{}", i, n, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for YMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integer-coefficient polynomial in the Y-monomials. No zero coefficients
/// are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct YPoly {
    terms: BTreeMap<YMono, i64>,
}

impl YPoly {
    pub fn zero() -> YPoly {
        YPoly::default()
    }

    pub fn one() -> YPoly {
        YPoly::from_mono(YMono::one())
    }

    pub fn from_mono(m: YMono) -> YPoly {
        let mut p = YPoly::zero();
        p.terms.insert(m, 1);
        p
    }

    pub fn constant(c: i64) -> YPoly {
        let mut p = YPoly::zero();
        if c != 0 {
            p.terms.insert(YMono::one(), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &YMono) -> i64 {
        *self.terms.get(m).unwrap_or(&0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&YMono, i64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &YMono> + '_ {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: YMono, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = cadd(*o.get(), c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &YPoly) -> YPoly {
        let mut p = self.clone();
        for (m, c) in other.terms() {
            p.add_term(m.clone(), c);
        }
        p
    }

    pub fn sub(&self, other: &YPoly) -> YPoly {
        let mut p = self.clone();
        for (m, c) in other.terms() {
            p.add_term(m.clone(), -c);
        }
        p
    }

    pub fn scale(&self, k: i64) -> YPoly {
        let mut p = YPoly::zero();
        if k != 0 {
            for (m, c) in self.terms() {
                p.terms.insert(m.clone(), cmul(c, k));
            }
        }
        p
    }

    pub fn mul_mono(&self, m: &YMono) -> YPoly {
        let mut p = YPoly::zero();
        for (t, c) in self.terms() {
            p.terms.insert(t.mul(m), c);
        }
        p
    }

    pub fn mul(&self, other: &YPoly) -> YPoly {
        let mut p = YPoly::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                p.add_term(m1.mul(m2), cmul(c1, c2));
            }
        }
        p
    }

    pub fn shift(&self, d: i64) -> YPoly {
        let mut p = YPoly::zero();
        for (m, c) in self.terms() {
            p.terms.insert(m.shift(d), c);
        }
        p
    }

    /// Value at Y_{i,n} = 1 for all i, n (dimension for a character).
    pub fn eval_ones(&self) -> i64 {
        self.terms.values().fold(0, |a, &c| cadd(a, c))
    }

    pub fn dominant_monomials(&self) -> Vec<&YMono> {
        self.terms.keys().filter(|m| m.is_dominant()).collect()
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let a = c.abs();
            if a != 1 {
                write!(f, "{} ", a)?;
            } else if m.is_one() {
                write!(f, "1")?;
                continue;
            }
            if !m.is_one() {
                write!(f, "{}", m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Weight in the fundamental-weight basis: coordinate i is the sum of
/// exponents of Y_{i,n} over all n.
pub fn weight_of(m: &YMono, cd: &CartanData) -> Result<Vec<i64>, YError> {
    let mut w = vec![0i64; cd.rank];
    for ((i, _), e) in m.iter() {
        if i < 1 || i > cd.rank {
            return Err(YError::NodeOutOfRange {
                node: i,
                rank: cd.rank,
            });
        }
        w[i - 1] = cadd(w[i - 1], e);
    }
    Ok(w)
}

/// Simple root α_i in the fundamental-weight basis (column i of the Cartan
/// matrix); equals weight_of(a_monomial(cd, i, n)).
pub fn alpha(cd: &CartanData, i: usize) -> Vec<i64> {
    (1..=cd.rank).map(|j| cd.cartan(j, i)).collect()
}

/// The monomial A_{i,n}:
/// Y_{i,n+r_i} Y_{i,n−r_i} ∏_{j:I_ji=1} Y_{j,n}^{-1}
/// ∏_{j:I_ji=2} Y_{j,n+1}^{-1} Y_{j,n−1}^{-1}
/// ∏_{j:I_ji=3} Y_{j,n+2}^{-1} Y_{j,n}^{-1} Y_{j,n−2}^{-1}.
pub fn a_monomial(cd: &CartanData, i: usize, n: i64) -> Result<YMono, YError> {
    if i < 1 || i > cd.rank {
        return Err(YError::NodeOutOfRange {
            node: i,
            rank: cd.rank,
        });
    }
    let r = cd.sym(i);
    let mut m = YMono::one();
    m.mul_var(i, n + r, 1);
    m.mul_var(i, n - r, 1);
    for j in 1..=cd.rank {
        if j == i {
            continue;
        }
        match cd.incidence(j, i) {
            0 => {}
            1 => m.mul_var(j, n, -1),
            2 => {
                m.mul_var(j, n + 1, -1);
                m.mul_var(j, n - 1, -1);
            }
            3 => {
                m.mul_var(j, n + 2, -1);
                m.mul_var(j, n, -1);
                m.mul_var(j, n - 2, -1);
            }
            other => panic!("incidence entry {other} out of range"),
        }
    }
    Ok(m)
}

/// Ring homomorphism sending Y_{i,n} to itself for i ∈ J and to 1 otherwise.
pub fn beta_restrict(p: &YPoly, j_set: &[usize]) -> YPoly {
    let mut out = YPoly::zero();
    for (m, c) in p.terms() {
        out.add_term(m.restrict(|i| j_set.contains(&i)), c);
    }
    out
}

/// Group terms by weight; the coefficient sum equals the value at Y = 1.
pub fn classical_character(
    p: &YPoly,
    cd: &CartanData,
) -> Result<BTreeMap<Vec<i64>, i64>, YError> {
    use std::collections::btree_map::Entry;
    let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (m, c) in p.terms() {
        match out.entry(weight_of(m, cd)?) {
            Entry::Occupied(mut o) => {
                let v = cadd(*o.get(), c);
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }
    Ok(out)
}

// --- JSON interchange ---------------------------------------------------
//
// {"terms":[{"mono":[[i,n,e],...],"coef":c},...]} with mono keys ascending
// by (i,n) and terms ascending by monomial. This is the interchange format
// for all CLI subcommands.

#[derive(Serialize, Deserialize)]
struct TermRepr {
    mono: Vec<(usize, i64, i64)>,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

impl YPoly {
    pub fn to_json(&self) -> String {
        let repr = PolyRepr {
            terms: self
                .terms()
                .map(|(m, c)| TermRepr {
                    mono: m.iter().map(|((i, n), e)| (i, n, e)).collect(),
                    coef: c,
                })
                .collect(),
        };
        serde_json::to_string(&repr).expect("poly serialization")
    }

    pub fn from_json(s: &str) -> Result<YPoly, YError> {
        let repr: PolyRepr =
            serde_json::from_str(s).map_err(|e| YError::Json(e.to_string()))?;
        let mut p = YPoly::zero();
        for t in repr.terms {
            let mut m = YMono::one();
            for (i, n, e) in t.mono {
                m.mul_var(i, n, e);
            }
            p.add_term(m, t.coef);
        }
        Ok(p)
    }
}

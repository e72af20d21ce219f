//! Higher-rank q-character construction: completion of a highest weight to
//! the full character, closed-form first-fundamental tables for the classical
//! series, monomial-shape checks against the A-lattice, and the colored
//! oriented graph carried by a character.

use std::collections::BTreeMap;

use qc_cartan::{CartanData, Series};
use qc_sl2::string_patterns;
use qc_ypoly::{a_monomial, beta_restrict, YError, YMono, YPoly};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CharError {
    #[error(transparent)]
    Y(#[from] YError),
    #[error("invalid highest-weight JSON: {0}")]
    Json(String),
    #[error("polynomial is not a sum of A^-1-products over its highest monomial (offender {0})")]
    ShapeCheckFailed(YMono),
    #[error("restriction to node {node} does not decompose into strings with non-negative multiplicities (remainder term {remainder})")]
    RestrictionNotDecomposable { node: usize, remainder: YMono },
    #[error("declared highest monomial {0} does not occur in the polynomial")]
    MissingHighest(YMono),
}

/// Completion failure report: the fixed-point iteration either ran into its
/// limits or produced a dominant monomial besides the highest one.
#[derive(Debug, Error)]
pub enum FmFailure {
    #[error("completion exceeded limits after {iterations} sweeps at {terms} terms (growing at {frontier})")]
    LimitExceeded {
        iterations: usize,
        terms: usize,
        frontier: YMono,
    },
    #[error("completion stabilized but contains the unexpected dominant monomial {0}")]
    ExtraDominant(YMono),
    #[error(transparent)]
    Char(#[from] CharError),
}

/// Drinfeld-type highest weight: per node, the multiset of lattice positions
/// of the inverse roots of P_i(u).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HighestWeightData {
    roots: BTreeMap<usize, Vec<i64>>,
}

impl HighestWeightData {
    pub fn new() -> Self {
        HighestWeightData::default()
    }

    /// The weight of the first fundamental representation placed at
    /// position a: a single inverse root at node 1.
    pub fn first_fundamental(a: i64) -> Self {
        let mut hw = HighestWeightData::new();
        hw.add_root(1, a);
        hw
    }

    pub fn add_root(&mut self, i: usize, n: i64) {
        let v = self.roots.entry(i).or_default();
        v.push(n);
        v.sort_unstable();
    }

    pub fn roots(&self, i: usize) -> &[i64] {
        self.roots.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.roots.iter().filter(|(_, v)| !v.is_empty()).map(|(&i, _)| i)
    }

    pub fn is_empty(&self) -> bool {
        self.roots.values().all(Vec::is_empty)
    }

    pub fn shift(&self, d: i64) -> Self {
        let mut out = HighestWeightData::new();
        for (&i, v) in &self.roots {
            for &n in v {
                out.add_root(i, n + d);
            }
        }
        out
    }

    pub fn highest_monomial(&self) -> YMono {
        let mut m = YMono::one();
        for (&i, v) in &self.roots {
            for &n in v {
                m.mul_var(i, n, 1);
            }
        }
        m
    }

    pub fn to_json(&self) -> String {
        let repr = HwRepr {
            roots: self
                .roots
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(i, v)| (i.to_string(), v.clone()))
                .collect(),
        };
        serde_json::to_string(&repr).expect("highest-weight serialization")
    }

    pub fn from_json(s: &str) -> Result<Self, CharError> {
        let repr: HwRepr = serde_json::from_str(s).map_err(|e| CharError::Json(e.to_string()))?;
        let mut hw = HighestWeightData::new();
        for (key, v) in repr.roots {
            let i: usize = key
                .parse()
                .map_err(|_| CharError::Json(format!("bad node key {key:?}")))?;
            for n in v {
                hw.add_root(i, n);
            }
        }
        Ok(hw)
    }
}

#[derive(Serialize, Deserialize)]
struct HwRepr {
    roots: BTreeMap<String, Vec<i64>>,
}

/// The color-i expansion of a multiset of node-i positions: the rank-one
/// irreducible character on the r_i-scaled lattice, with each rank-one
/// generator A_c^{-1} replaced by the full A_{i,c}^{-1} of the ambient
/// algebra.
pub fn chi_i_expand(cd: &CartanData, i: usize, positions: &[i64]) -> Result<YPoly, CharError> {
    let step = cd.sym(i);
    let (highest, patterns) = string_patterns(positions, step);
    let mut top = YMono::one();
    for &p in &highest {
        top.mul_var(i, p, 1);
    }
    let mut out = YPoly::zero();
    for pat in &patterns {
        let mut m = top.clone();
        for &c in pat {
            m = m.mul(&a_monomial(cd, i, c)?.inv());
        }
        out.add_term(m, 1);
    }
    Ok(out)
}

/// Limits for the fixed-point completion.
#[derive(Clone, Copy, Debug)]
pub struct FmLimits {
    pub max_terms: usize,
    pub max_iterations: usize,
}

impl Default for FmLimits {
    fn default() -> Self {
        FmLimits {
            max_terms: 200_000,
            max_iterations: 10_000,
        }
    }
}

/// Complete a highest weight to a full character by the fixed-point rule:
/// whenever the polynomial contains c·M and M carries positive node-i powers,
/// it must termwise dominate c·N·chi_i_expand(i, those positions), where N is
/// M with the positive node-i powers divided off.  Coefficients are raised to
/// the maximum demanded across all monomials and colors until nothing
/// changes.  Fails if the limits are hit or if the result carries a dominant
/// monomial other than the highest one.
pub fn fm_expand(
    cd: &CartanData,
    hw: &HighestWeightData,
    limits: FmLimits,
) -> Result<YPoly, FmFailure> {
    let highest = hw.highest_monomial();
    let mut poly = YPoly::zero();
    poly.add_term(highest.clone(), 1);

    for iteration in 0.. {
        if iteration >= limits.max_iterations {
            return Err(FmFailure::LimitExceeded {
                iterations: iteration,
                terms: poly.num_terms(),
                frontier: highest,
            });
        }
        // sweep monomials from the top of the weight order down
        let mut order: Vec<(YMono, i64)> = poly.terms().map(|(m, c)| (m.clone(), c)).collect();
        order.sort_by(|a, b| {
            b.0.total_degree()
                .cmp(&a.0.total_degree())
                .then_with(|| a.0.cmp(&b.0))
        });
        let mut demands: BTreeMap<YMono, i64> = BTreeMap::new();
        for (m, c) in &order {
            for i in 1..=cd.rank {
                let mut positions = Vec::new();
                let mut n_part = m.clone();
                for ((j, n), e) in m.iter() {
                    if j == i && e > 0 {
                        for _ in 0..e {
                            positions.push(n);
                        }
                        n_part.mul_var(i, n, -e);
                    }
                }
                if positions.is_empty() {
                    continue;
                }
                let chi = chi_i_expand(cd, i, &positions)?;
                for (t, k) in chi.terms() {
                    let demanded = n_part.mul(t);
                    let amount = c.checked_mul(k).expect("coefficient overflow");
                    let slot = demands.entry(demanded).or_insert(0);
                    *slot = (*slot).max(amount);
                }
            }
        }
        let mut changed = false;
        for (m, want) in demands {
            let have = poly.coeff(&m);
            if have < want {
                poly.add_term(m, want - have);
                changed = true;
            }
        }
        if poly.num_terms() > limits.max_terms {
            let frontier = poly
                .monomials()
                .min_by_key(|m| m.total_degree())
                .cloned()
                .unwrap_or_else(YMono::one);
            return Err(FmFailure::LimitExceeded {
                iterations: iteration + 1,
                terms: poly.num_terms(),
                frontier,
            });
        }
        if !changed {
            break;
        }
    }

    for m in poly.dominant_monomials() {
        if *m != highest {
            return Err(FmFailure::ExtraDominant(m.clone()));
        }
    }
    Ok(poly)
}

/// The terms of the first-fundamental character at position a, in the
/// canonical index order of the series (the A^{-1}-recursion chain).
pub fn fundamental_terms(cd: &CartanData, a: i64) -> Result<Vec<YMono>, CharError> {
    let l = cd.rank;
    let am = |i: usize, c: i64| -> Result<YMono, CharError> { Ok(a_monomial(cd, i, c)?.inv()) };
    let mut terms = vec![YMono::var(1, a, 1)];
    let last = |ts: &Vec<YMono>| ts[ts.len() - 1].clone();
    match cd.series {
        Series::A => {
            for i in 2..=l + 1 {
                let t = last(&terms).mul(&am(i - 1, a + i as i64 - 1)?);
                terms.push(t);
            }
        }
        Series::B => {
            let li = l as i64;
            for i in 2..=l {
                let t = last(&terms).mul(&am(i - 1, a + 2 * i as i64 - 2)?);
                terms.push(t);
            }
            let zero = last(&terms).mul(&am(l, a + 2 * li)?);
            terms.push(zero);
            let lbar = last(&terms).mul(&am(l, a + 2 * li - 2)?);
            terms.push(lbar);
            for i in (1..=l - 1).rev() {
                let t = last(&terms).mul(&am(i, a + 2 * (2 * li - i as i64 - 1))?);
                terms.push(t);
            }
        }
        Series::C => {
            let li = l as i64;
            for i in 2..=l {
                let t = last(&terms).mul(&am(i - 1, a + i as i64 - 1)?);
                terms.push(t);
            }
            let lbar = last(&terms).mul(&am(l, a + li + 1)?);
            terms.push(lbar);
            for i in (1..=l - 1).rev() {
                let t = last(&terms).mul(&am(i, a + 2 * li - i as i64 + 2)?);
                terms.push(t);
            }
        }
        Series::D => {
            let li = l as i64;
            for i in 2..=l {
                let t = last(&terms).mul(&am(i - 1, a + i as i64 - 1)?);
                terms.push(t);
            }
            // fork partner of Λ_ℓ, hanging off Λ_{ℓ-1}
            let lbar = terms[l - 2].mul(&am(l, a + li - 1)?);
            terms.push(lbar);
            // merge: the same monomial is reached from Λ_ℓ via A_{ℓ,·}^{-1}
            let merge = last(&terms).mul(&am(l - 1, a + li - 1)?);
            debug_assert_eq!(merge, terms[l - 1].mul(&am(l, a + li - 1)?));
            terms.push(merge);
            for i in (1..=l - 2).rev() {
                let t = last(&terms).mul(&am(i, a + 2 * li - i as i64 - 2)?);
                terms.push(t);
            }
        }
    }
    Ok(terms)
}

/// Closed-form first-fundamental character: Σ of [`fundamental_terms`].
/// Term counts by series: A gives ℓ+1, B gives 2ℓ+1, C and D give 2ℓ.
pub fn fundamental_table(cd: &CartanData, a: i64) -> Result<YPoly, CharError> {
    let mut p = YPoly::zero();
    for t in fundamental_terms(cd, a)? {
        p.add_term(t, 1);
    }
    Ok(p)
}

/// Exponents of A_{j,c} as a sparse vector keyed (position, node) — the key
/// order used by the elimination in [`a_coordinates`].
fn a_vec(cd: &CartanData, j: usize, c: i64) -> Vec<((i64, usize), i64)> {
    let a = a_monomial(cd, j, c).expect("valid node");
    a.iter().map(|((i, n), e)| ((n, i), e)).collect()
}

/// Solve M = highest · ∏ A_{j,c}^{-x_{j,c}} for non-negative integers x.
/// Returns the map (node, center) → exponent, or None when M is not of that
/// form.  The A-vectors are triangular with respect to the (position, node)
/// order — each A_{j,c} has its unique lowest entry +1 at (c−r_j, j) — so a
/// forced elimination from the bottom decides existence exactly.
pub fn a_coordinates(
    cd: &CartanData,
    highest: &YMono,
    m: &YMono,
) -> Option<BTreeMap<(usize, i64), i64>> {
    let mut e: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    let mut bump = |key: (i64, usize), v: i64| {
        let slot = e.entry(key).or_insert(0);
        *slot += v;
        if *slot == 0 {
            e.remove(&key);
        }
    };
    for ((i, n), exp) in highest.iter() {
        bump((n, i), exp);
    }
    for ((i, n), exp) in m.iter() {
        bump((n, i), -exp);
    }
    let mut coords: BTreeMap<(usize, i64), i64> = BTreeMap::new();
    let mut guard = 0usize;
    while let Some((&(p, j), &v)) = e.iter().next() {
        if v < 0 {
            return None;
        }
        guard += 1;
        if guard > 100_000 {
            return None;
        }
        let c = p + cd.sym(j);
        *coords.entry((j, c)).or_insert(0) += v;
        for (key, val) in a_vec(cd, j, c) {
            let slot = e.entry(key).or_insert(0);
            *slot -= v * val;
            if *slot == 0 {
                e.remove(&key);
            }
        }
    }
    Some(coords)
}

/// Whether every monomial of p is the declared highest monomial times a
/// product of A^{-1} factors.
pub fn check_monom_shape(cd: &CartanData, p: &YPoly, hw: &HighestWeightData) -> bool {
    let highest = hw.highest_monomial();
    p.monomials()
        .all(|m| a_coordinates(cd, &highest, m).is_some())
}

/// Whether the product of the given characters has exactly one dominant
/// monomial — the criterion behind irreducibility of generic tensor products.
pub fn unique_dominant_product(chars: &[YPoly]) -> bool {
    let mut prod = YPoly::one();
    for c in chars {
        prod = prod.mul(c);
    }
    prod.dominant_monomials().len() == 1
}

/// Restriction of the rank-one A-generator to its own node: the string
/// algebra the color-i layer of a character lives in.
fn restricted_a(i: usize, c: i64, step: i64) -> YMono {
    YMono::from_pairs(&[(i, c - step, 1), (i, c + step, 1)])
}

fn restricted_string(i: usize, step: i64, roots: &[i64]) -> YPoly {
    let (highest, patterns) = string_patterns(roots, step);
    let mut top = YMono::one();
    for &p in &highest {
        top.mul_var(i, p, 1);
    }
    let mut out = YPoly::zero();
    for pat in &patterns {
        let mut m = top.clone();
        for &c in pat {
            m = m.mul(&restricted_a(i, c, step).inv());
        }
        out.add_term(m, 1);
    }
    out
}

/// Decompose the node-i restriction of p into rank-one irreducible string
/// characters.  Returns (root multiset, multiplicity) pairs; errs when the
/// peeling leaves a remainder or needs a negative multiplicity.
pub fn restriction_strings(
    cd: &CartanData,
    i: usize,
    p: &YPoly,
) -> Result<Vec<(Vec<i64>, i64)>, CharError> {
    let step = cd.sym(i);
    let mut q = beta_restrict(p, &[i]);
    let mut out = Vec::new();
    while !q.is_zero() {
        // the maximal-degree dominant monomial must head a string
        let head = q
            .terms()
            .filter(|(m, c)| *c > 0 && m.is_dominant())
            .map(|(m, _)| m.clone())
            .max_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(a.cmp(b)));
        let Some(head) = head else {
            let remainder = q.monomials().next().cloned().unwrap_or_else(YMono::one);
            return Err(CharError::RestrictionNotDecomposable { node: i, remainder });
        };
        let mult = q.coeff(&head);
        let mut roots = Vec::new();
        for ((_, n), e) in head.iter() {
            for _ in 0..e {
                roots.push(n);
            }
        }
        q = q.sub(&restricted_string(i, step, &roots).scale(mult));
        out.push((roots, mult));
    }
    out.sort();
    Ok(out)
}

/// Oriented colored graph carried by a character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharGraph {
    /// (monomial, multiplicity), sorted by monomial
    pub vertices: Vec<(YMono, i64)>,
    /// (from index, to index, color, center): target = source · A_{color,center}^{-1}
    pub edges: Vec<(usize, usize, usize, i64)>,
    /// index of the highest-weight vertex
    pub highest: usize,
    /// string-decomposition ambiguities encountered while filtering edges
    pub notes: Vec<String>,
}

impl CharGraph {
    /// Vertex indices reachable from the highest monomial along edges.
    pub fn reachable_from_highest(&self) -> Vec<bool> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![self.highest];
        seen[self.highest] = true;
        while let Some(v) = stack.pop() {
            for &(f, t, _, _) in &self.edges {
                if f == v && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// Build the colored graph of a character: an edge of color i connects M1 to
/// M2 = M1·A_{i,c}^{-1} when, inside the string decomposition of the node-i
/// restriction, some occurrence of M2 sits one step below an occurrence of
/// M1 in the same string.
pub fn build_graph(cd: &CartanData, p: &YPoly, hw: &HighestWeightData) -> Result<CharGraph, CharError> {
    let highest = hw.highest_monomial();
    let mut coords = Vec::new();
    let vertices: Vec<(YMono, i64)> = p.terms().map(|(m, c)| (m.clone(), c)).collect();
    let Some(highest_idx) = vertices.iter().position(|(m, _)| *m == highest) else {
        return Err(CharError::MissingHighest(highest));
    };
    for (m, _) in &vertices {
        match a_coordinates(cd, &highest, m) {
            Some(x) => coords.push(x),
            None => return Err(CharError::ShapeCheckFailed(m.clone())),
        }
    }

    // per color: string patterns of the restriction, as (pattern multiset →
    // realized monomial) maps per peeled string
    let mut notes = Vec::new();
    let mut color_strings: BTreeMap<usize, Vec<(Vec<i64>, Vec<Vec<i64>>)>> = BTreeMap::new();
    for i in 1..=cd.rank {
        let strings = restriction_strings(cd, i, p)?;
        let mut entries = Vec::new();
        for (roots, _mult) in &strings {
            let (_, patterns) = string_patterns(roots, cd.sym(i));
            entries.push((roots.clone(), patterns));
        }
        color_strings.insert(i, entries);
    }

    let realize_restricted = |i: usize, roots: &[i64], pat: &[i64]| -> YMono {
        let step = cd.sym(i);
        let mut m = YMono::one();
        for &p in roots {
            m.mul_var(i, p, 1);
        }
        for &c in pat {
            m = m.mul(&restricted_a(i, c, step).inv());
        }
        m
    };

    let mut edges = Vec::new();
    for (v1, x1) in coords.iter().enumerate() {
        for (v2, x2) in coords.iter().enumerate() {
            if v1 == v2 {
                continue;
            }
            // unit difference in the A-lattice?
            let mut delta: Option<(usize, i64)> = None;
            let mut ok = true;
            let keys: std::collections::BTreeSet<_> =
                x1.keys().chain(x2.keys()).cloned().collect();
            for key in keys {
                let d = x2.get(&key).unwrap_or(&0) - x1.get(&key).unwrap_or(&0);
                match d {
                    0 => {}
                    1 if delta.is_none() => delta = Some(key),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            let (Some((i, c)), true) = (delta, ok) else {
                continue;
            };
            let b1 = beta_restrict_mono(&vertices[v1].0, i);
            let b2 = beta_restrict_mono(&vertices[v2].0, i);
            let mut supported = false;
            let mut occurrences = 0usize;
            for (roots, patterns) in &color_strings[&i] {
                for pat in patterns {
                    if realize_restricted(i, roots, pat) != b1 {
                        continue;
                    }
                    occurrences += 1;
                    let mut extended = pat.clone();
                    extended.push(c);
                    extended.sort_unstable();
                    if patterns.contains(&extended)
                        && realize_restricted(i, roots, &extended) == b2
                    {
                        supported = true;
                    }
                }
            }
            if supported {
                if occurrences > 1 {
                    notes.push(format!(
                        "color {i}: {} occurs {occurrences} times in the string decomposition; edge to {} kept on existential support",
                        vertices[v1].0, vertices[v2].0
                    ));
                }
                edges.push((v1, v2, i, c));
            }
        }
    }
    edges.sort();
    notes.sort();
    notes.dedup();
    Ok(CharGraph {
        vertices,
        edges,
        highest: highest_idx,
        notes,
    })
}

fn beta_restrict_mono(m: &YMono, i: usize) -> YMono {
    m.restrict(|j| j == i)
}

/// Deterministic DOT rendering; edge labels are "i,q^c".
pub fn export_dot(g: &CharGraph) -> String {
    let mut out = String::from("digraph qchar {\n");
    for (idx, (m, mult)) in g.vertices.iter().enumerate() {
        if *mult == 1 {
            out.push_str(&format!("  v{idx} [label=\"{m}\"];\n"));
        } else {
            out.push_str(&format!("  v{idx} [label=\"{m} (x{mult})\"];\n"));
        }
    }
    for &(f, t, i, c) in &g.edges {
        out.push_str(&format!("  v{f} -> v{t} [label=\"{i},q^{c}\"];\n"));
    }
    out.push_str("}\n");
    out
}

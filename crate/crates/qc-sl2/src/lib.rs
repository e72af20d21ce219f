//! Rank-one theory: q-segments, special position, string expansions and the
//! evaluation-module characters they assemble into.
//!
//! Positions live on the lattice of exponents of the spectral parameter, so a
//! string with parameter `a q^n` is stored as the integer `n`.  A segment of
//! length `r` centered at `c` occupies `c - (r-1), c - (r-3), ..., c + (r-1)`.
//! Everything here is exact integer arithmetic.

use std::collections::BTreeMap;

use qc_ypoly::{YMono, YPoly};

/// A q-segment: `len` consecutive lattice positions of step 2 centered at `center`.
///
/// `center` and `len` must satisfy `center ≡ len - 1 (mod 2)` for the positions
/// to be integers; constructors derived from position lists always do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub center: i64,
    pub len: u32,
}

impl Segment {
    pub fn new(center: i64, len: u32) -> Self {
        Segment { center, len }
    }

    /// The occupied positions in increasing order, for lattice step `step`.
    pub fn positions_step(&self, step: i64) -> Vec<i64> {
        let r = self.len as i64;
        (0..r).map(|t| self.center + (2 * t - (r - 1)) * step).collect()
    }

    /// The occupied positions in increasing order (unit lattice step).
    pub fn positions(&self) -> Vec<i64> {
        self.positions_step(1)
    }

    pub fn min_pos_step(&self, step: i64) -> i64 {
        self.center - (self.len as i64 - 1) * step
    }

    pub fn max_pos_step(&self, step: i64) -> i64 {
        self.center + (self.len as i64 - 1) * step
    }
}

/// Whether two segments are in special position: their union is again a
/// segment (one consecutive step-2 run) that properly contains both.
pub fn in_special_position(a: &Segment, b: &Segment) -> bool {
    in_special_position_step(a, b, 1)
}

/// Step-`step` variant of [`in_special_position`].
pub fn in_special_position_step(a: &Segment, b: &Segment, step: i64) -> bool {
    let two = 2 * step;
    // different sublattices never interact
    if (a.min_pos_step(step) - b.min_pos_step(step)).rem_euclid(two) != 0 {
        return false;
    }
    let lo = a.min_pos_step(step).min(b.min_pos_step(step));
    let hi = a.max_pos_step(step).max(b.max_pos_step(step));
    // the union is a run iff there is no gap between the two intervals
    let gap_free = a.min_pos_step(step).max(b.min_pos_step(step))
        <= a.max_pos_step(step).min(b.max_pos_step(step)) + two;
    if !gap_free {
        return false;
    }
    let union_len = (hi - lo) / two + 1;
    union_len > a.len as i64 && union_len > b.len as i64
}

/// Split a multiset of lattice positions into segments, greedily taking the
/// longest consecutive run starting from the smallest remaining position of
/// each residue class.  For a multiset admitting a decomposition into pairwise
/// non-special segments (every multiset does, uniquely) this finds it.
pub fn decompose_into_segments(positions: &[i64]) -> Vec<Segment> {
    decompose_into_segments_step(positions, 1)
}

/// Step-`step` variant of [`decompose_into_segments`]; runs advance by `2*step`.
pub fn decompose_into_segments_step(positions: &[i64], step: i64) -> Vec<Segment> {
    assert!(step > 0, "lattice step must be positive");
    let two = 2 * step;
    let mut count: BTreeMap<i64, u32> = BTreeMap::new();
    for &p in positions {
        *count.entry(p).or_insert(0) += 1;
    }
    let mut segs = Vec::new();
    while let Some((&start, _)) = count.iter().next() {
        let mut end = start;
        take_one(&mut count, start);
        while count.contains_key(&(end + two)) {
            end += two;
            take_one(&mut count, end);
        }
        segs.push(Segment {
            center: (start + end) / 2,
            len: ((end - start) / two + 1) as u32,
        });
    }
    segs.sort_by_key(|s| (s.min_pos_step(step), s.len));
    segs
}

fn take_one(count: &mut BTreeMap<i64, u32>, key: i64) {
    let c = count.get_mut(&key).expect("key present");
    *c -= 1;
    if *c == 0 {
        count.remove(&key);
    }
}

/// String expansion of the irreducible with Drinfeld polynomial roots at the
/// given lattice positions, step `step`.
///
/// Returns the sorted highest-weight positions together with one entry per
/// expansion term: the multiset (sorted) of lattice centers `c` at which a
/// generator `A_c^{-1}` is applied to the highest monomial.  The first entry
/// is empty (the highest term itself).  Each segment of length `r` contributes
/// the chain whose `k`-th prefix appends the center `center + (r - 2k + 2)*step`
/// (`k = 1..r`, walking down from the top of the string); terms are the
/// cartesian product over segments.
pub fn string_patterns(roots: &[i64], step: i64) -> (Vec<i64>, Vec<Vec<i64>>) {
    let segs = decompose_into_segments_step(roots, step);
    let mut terms: Vec<Vec<i64>> = vec![Vec::new()];
    for sg in &segs {
        let r = sg.len as i64;
        let mut chain: Vec<Vec<i64>> = Vec::with_capacity(r as usize + 1);
        let mut acc = Vec::new();
        chain.push(acc.clone());
        for k in 1..=r {
            acc.push(sg.center + (r - 2 * k + 2) * step);
            chain.push(acc.clone());
        }
        let mut next = Vec::with_capacity(terms.len() * chain.len());
        for t in &terms {
            for suffix in &chain {
                let mut v = t.clone();
                v.extend_from_slice(suffix);
                v.sort_unstable();
                next.push(v);
            }
        }
        terms = next;
    }
    let mut highest = roots.to_vec();
    highest.sort_unstable();
    (highest, terms)
}

fn realize(highest: &[i64], patterns: &[Vec<i64>]) -> YPoly {
    let mut top = YMono::one();
    for &p in highest {
        top.mul_var(1, p, 1);
    }
    let mut out = YPoly::zero();
    for pat in patterns {
        let mut m = top.clone();
        for &c in pat {
            // A_c = Y_{c-1} Y_{c+1} for rank one
            m.mul_var(1, c - 1, -1);
            m.mul_var(1, c + 1, -1);
        }
        out.add_term(m, 1);
    }
    out
}

/// q-character of the evaluation module `W_r(q^c)`: the length-`r` string
/// centered at `c`.  `r + 1` terms, ladder of `A^{-1}` applications:
///
/// ```text
/// chi_wr(0, 1) = Y_{1,0} + Y_{1,2}^{-1}
/// chi_wr(1, 2) = Y_{1,0} Y_{1,2} + Y_{1,0} Y_{1,4}^{-1} + Y_{1,2}^{-1} Y_{1,4}^{-1}
/// ```
pub fn chi_wr(center: i64, r: u32) -> YPoly {
    if r == 0 {
        return YPoly::one();
    }
    let sg = Segment::new(center, r);
    let positions = sg.positions();
    let (highest, patterns) = string_patterns(&positions, 1);
    realize(&highest, &patterns)
}

/// q-character of the irreducible with Drinfeld roots at `roots` (a multiset
/// of lattice positions): product of the segment characters of its
/// decomposition.
pub fn chi_irreducible(roots: &[i64]) -> YPoly {
    let (highest, patterns) = string_patterns(roots, 1);
    realize(&highest, &patterns)
}

/// Whether the expansion of `chi_irreducible(roots)` contains a dominant
/// monomial besides the highest one.
pub fn has_extra_dominant(roots: &[i64]) -> bool {
    chi_irreducible(roots)
        .monomials()
        .filter(|m| m.is_dominant())
        .count()
        > 1
}

/// Whether the root multiset is irregular: in its segment decomposition there
/// is a pair `i != j` with both the positions of segment `i` and their shift
/// by two contained in segment `j`.  Extra dominant monomials in the expansion
/// occur exactly for irregular multisets.
pub fn is_irregular(roots: &[i64]) -> bool {
    let segs = decompose_into_segments(roots);
    let pos: Vec<Vec<i64>> = segs.iter().map(|s| s.positions()).collect();
    for i in 0..segs.len() {
        for j in 0..segs.len() {
            if i == j {
                continue;
            }
            let inside = |p: i64| pos[j].binary_search(&p).is_ok();
            if pos[i].iter().all(|&p| inside(p)) && pos[i].iter().all(|&p| inside(p + 2)) {
                return true;
            }
        }
    }
    false
}

/// Whether the tensor product of the evaluation modules for the given
/// segments is irreducible: no pair in special position.
pub fn tensor_is_irreducible(segs: &[Segment]) -> bool {
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if in_special_position(&segs[i], &segs[j]) {
                return false;
            }
        }
    }
    true
}

/// The smallest combination of evaluation-module characters whose expansion
/// is dominated by its leading term yet is not a single irreducible character:
/// `chi(W_1(1)) chi(W_2(q)) + chi(W_1(1)) chi(W_2(q^{-1})) - chi(W_1(1))`.
/// All eight monomials carry positive coefficients even though the combination
/// has a negative summand.
pub fn mukhin_counterexample() -> YPoly {
    let w1 = chi_wr(0, 1);
    let a = w1.mul(&chi_wr(1, 2));
    let b = w1.mul(&chi_wr(-1, 2));
    a.add(&b).sub(&w1)
}

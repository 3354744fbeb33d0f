//! Graded linear algebra on Fock modules of a single free boson.
//!
//! States `a_{-λ₁}⋯a_{-λ_m}|μ⟩` are labelled by partitions. The screening
//! charge `Q₋ = ∮ V_{α₋}(z) dz` is computed from
//! `V_λ(z) = e^{λq̂} z^{λa₀} exp(λ Σ a_{-n} zⁿ/n) exp(-λ Σ a_n z⁻ⁿ/n)`:
//! the annihilation factor acts on a monomial state as `Π_i (a_{-n_i} - λ z^{-n_i})`,
//! and the creation factor contributes the complete homogeneous polynomials in
//! `λ a_{-n}/n`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::chars::ModelParams;
use crate::error::{Error, Result};
use crate::num::{int, rat, QuadNumber, Rational};

/// Parts in non-increasing order.
pub type Partition = Vec<u32>;

/// Partitions of `n` with parts at most `max_part`, in reverse lexicographic order.
pub fn partitions(n: u32, max_part: u32) -> Vec<Partition> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    pub highest_weight: QuadNumber,
    /// `levels[n]` lists the states at level `n`.
    pub levels: Vec<Vec<Partition>>,
}

impl FockBasis {
    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self, level: usize) -> usize {
        self.levels.get(level).map_or(0, Vec::len)
    }
}

pub fn build_basis(mu: &QuadNumber, max_level: u32) -> FockBasis {
    FockBasis {
        highest_weight: mu.clone(),
        levels: (0..=max_level).map(|n| partitions(n, n)).collect(),
    }
}

/// Matrix of `Q₋` from source level `source_level` to `target_level`.
/// Rows are indexed by target states, columns by source states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBlock {
    pub source_level: usize,
    /// `None` when the target level would be negative.
    pub target_level: Option<usize>,
    pub rows: Vec<Vec<QuadNumber>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScreeningMatrix {
    pub source_weight: QuadNumber,
    pub target_weight: QuadNumber,
    /// Source level minus target level, `1 + α₋μ`.
    pub level_offset: i64,
    pub blocks: Vec<LevelBlock>,
}

type State = BTreeMap<Partition, QuadNumber>;

fn add_to(state: &mut State, key: Partition, c: QuadNumber) {
    if c.is_zero() {
        return;
    }
    let slot = state.entry(key.clone()).or_insert_with(QuadNumber::zero);
    *slot += &c;
    if slot.is_zero() {
        state.remove(&key);
    }
}

/// `Π (a_{-n_i} - λ w^{-n_i})|μ⟩`, grouped by the total removed level `k`.
fn annihilation_part(parts: &[u32], lambda: &QuadNumber) -> BTreeMap<u32, State> {
    let mut out: BTreeMap<u32, State> = BTreeMap::new();
    let m = parts.len();
    for mask in 0u32..(1 << m) {
        let mut kept = Vec::new();
        let mut removed = 0;
        for (i, &n) in parts.iter().enumerate() {
            if mask & (1 << i) != 0 {
                removed += n;
            } else {
                kept.push(n);
            }
        }
        let c = (-lambda).pow(mask.count_ones());
        add_to(out.entry(removed).or_default(), kept, c);
    }
    out
}

/// Terms of the complete homogeneous polynomial of degree `j` in `y_n = λ a_{-n}/n`:
/// `Σ_{ρ ⊢ j} Π_n (λ/n)^{m_n}/m_n! a_{-n}^{m_n}`.
fn creation_terms(j: u32, lambda: &QuadNumber) -> Vec<(Partition, QuadNumber)> {
    partitions(j, j)
        .into_iter()
        .map(|rho| {
            let mut c = QuadNumber::one();
            let mut i = 0;
            while i < rho.len() {
                let n = rho[i];
                let mult = rho[i..].iter().take_while(|&&x| x == n).count();
                let mut fact = int(1);
                for k in 1..=mult as i64 {
                    fact *= int(k);
                }
                c = &c * &lambda.scale(&rat(1, n as i64)).pow(mult as u32);
                c = c.scale(&(int(1) / fact));
                i += mult;
            }
            (rho, c)
        })
        .collect()
}

fn merge(a: &[u32], b: &[u32]) -> Partition {
    let mut v: Partition = a.iter().chain(b).copied().collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

/// Image of one basis state under the residue of `V_λ(z)` on `𝓕_μ`, where
/// `λμ` is the integer `lm`.
fn screen_state(parts: &[u32], lambda: &QuadNumber, lm: i64) -> State {
    let mut out = State::new();
    // residue: λμ + j - k = -1
    for (k, rest) in annihilation_part(parts, lambda) {
        let j = k as i64 - 1 - lm;
        if j < 0 {
            continue;
        }
        let creators = creation_terms(j as u32, lambda);
        for (kept, c) in &rest {
            for (rho, d) in &creators {
                add_to(&mut out, merge(kept, rho), c * d);
            }
        }
    }
    out
}

/// `α₋ μ` as an integer, or `Multivalued`.
fn screening_exponent(mu: &QuadNumber, params: &ModelParams) -> Result<i64> {
    let lm = &params.alpha_minus * mu;
    lm.to_rational()
        .filter(Rational::is_integer)
        .and_then(|r| num_traits::ToPrimitive::to_i64(r.numer()))
        .ok_or_else(|| Error::Multivalued(alloc::format!("{lm}")))
}

pub fn screening_matrix(
    mu: &QuadNumber,
    params: &ModelParams,
    max_level: u32,
) -> Result<ScreeningMatrix> {
    let lm = screening_exponent(mu, params)?;
    let offset = 1 + lm;
    let lambda = &params.alpha_minus;
    let basis = build_basis(mu, max_level);
    let mut blocks = Vec::new();
    for (n, states) in basis.levels.iter().enumerate() {
        let target = n as i64 - offset;
        let target_level = usize::try_from(target).ok();
        let targets = target_level
            .map(|t| partitions(t as u32, t as u32))
            .unwrap_or_default();
        let index: BTreeMap<&Partition, usize> =
            targets.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut rows = vec![vec![QuadNumber::zero(); states.len()]; targets.len()];
        for (col, st) in states.iter().enumerate() {
            for (key, c) in screen_state(st, lambda, lm) {
                let row = index[&key];
                rows[row][col] = c;
            }
        }
        blocks.push(LevelBlock {
            source_level: n,
            target_level,
            rows,
        });
    }
    Ok(ScreeningMatrix {
        source_weight: mu.clone(),
        target_weight: mu + lambda,
        level_offset: offset,
        blocks,
    })
}

/// Rank by exact Gaussian elimination.
pub fn rank(rows: &[Vec<QuadNumber>]) -> usize {
    let mut m: Vec<Vec<QuadNumber>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        let pivot_row: Vec<QuadNumber> = m[r].iter().map(|x| x * &inv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&f * y);
            }
        }
        m[r] = pivot_row;
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Graded dimensions of `ker Q₋` on `𝓕_{α_{r,1}}`, levels `0..=max_level`.
pub fn kernel_graded_dims(r: i64, params: &ModelParams, max_level: u32) -> Result<Vec<usize>> {
    if r < 1 {
        return Err(Error::LabelOutOfRange(alloc::format!(
            "r = {r} (need r >= 1)"
        )));
    }
    let m = screening_matrix(&params.alpha_rs(r, 1), params, max_level)?;
    Ok(m.blocks
        .iter()
        .map(|b| {
            let cols = b.rows.first().map_or_else(
                || partitions(b.source_level as u32, b.source_level as u32).len(),
                Vec::len,
            );
            cols - rank(&b.rows)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| partitions(n, n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(partitions(3, 3), [vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn creation_terms_for_degree_two() {
        // exp(λ(a₋₁w + a₋₂w²/2)) at w²: λ²/2 a₋₁² + λ/2 a₋₂
        let l = QuadNumber::from_int(3);
        let t = creation_terms(2, &l);
        assert_eq!(
            t,
            [
                (vec![2], QuadNumber::rational(rat(3, 2))),
                (vec![1, 1], QuadNumber::rational(rat(9, 2)))
            ]
        );
    }

    #[test]
    fn rank_of_small_matrices() {
        let q = |n| QuadNumber::from_int(n);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(
            rank(&[vec![q(0), q(1)], vec![q(1), q(0)], vec![q(1), q(1)]]),
            2
        );
        assert_eq!(rank(&[]), 0);
    }
}

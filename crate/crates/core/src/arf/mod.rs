//! Quadratic forms over Z/2 refining an intersection pairing, and their Arf
//! invariant.
//!
//! A [`Z2QuadraticForm`] is given on a basis of generators `c₁,…,c_r` by the
//! pairing matrix `cᵢ∘cⱼ` and the values `Ω(cᵢ)`. It extends to all cycles by
//!
//! ```text
//! Ω(u + v) = Ω(u) + Ω(v) + u∘v
//! ```
//!
//! The Arf invariant `Σ Ω(aᵢ)Ω(bᵢ)` over a symplectic basis does not depend on
//! the basis. Applied to the chain of cycles joining consecutive odd-order
//! singularities on the orientation double cover, it gives a third,
//! independent route to the spin parity of a quadratic stratum.

mod z2;

pub use z2::{Z2Matrix, Z2Vector};

use serde::Serialize;
use thiserror::Error;

use crate::cover::spin_defined;
use crate::exec::Execution;
use crate::parity::{odd_orders, SpinParity};
use crate::pattern::{Flavor, Pattern, PatternError};

/// Largest rank enumerated by [`count_arf`] unless overridden.
pub const DEFAULT_MAX_ENUMERATION_RANK: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArfError {
    #[error("intersection matrix is not symmetric")]
    NotSymmetric,
    #[error("intersection matrix has a nonzero diagonal entry")]
    NonZeroDiagonal,
    #[error("intersection matrix is degenerate")]
    Degenerate,
    #[error("expected length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("chain needs an even number (at least 4) of odd orders, got {0}")]
    ChainLength(usize),
    #[error("chain order {0} is not odd")]
    EvenChainOrder(i64),
    #[error("genus must be at least 1")]
    GenusZero,
    #[error("rank {rank} exceeds enumeration bound {max_rank}")]
    EnumerationTooLarge { rank: usize, max_rank: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2QuadraticForm {
    intersection: Z2Matrix,
    values: Z2Vector,
}

impl Z2QuadraticForm {
    /// Builds a form from a symmetric, zero-diagonal pairing and the values on
    /// each generator. Degenerate pairings are accepted here; [`arf`] rejects
    /// them.
    pub fn new(intersection: Z2Matrix, values: Z2Vector) -> Result<Self, ArfError> {
        if values.len() != intersection.size() {
            return Err(ArfError::LengthMismatch {
                expected: intersection.size(),
                found: values.len(),
            });
        }
        if !intersection.is_symmetric() {
            return Err(ArfError::NotSymmetric);
        }
        if !intersection.has_zero_diagonal() {
            return Err(ArfError::NonZeroDiagonal);
        }
        Ok(Z2QuadraticForm {
            intersection,
            values,
        })
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn intersection(&self) -> &Z2Matrix {
        &self.intersection
    }

    pub fn values(&self) -> &Z2Vector {
        &self.values
    }

    /// Pairing `u∘v`.
    pub fn pairing(&self, u: &Z2Vector, v: &Z2Vector) -> bool {
        self.intersection.bilinear(u, v)
    }

    /// `Ω(Σ_{i∈S} cᵢ) = Σ_{i∈S} Ω(cᵢ) + Σ_{i<j∈S} cᵢ∘cⱼ`.
    pub fn evaluate(&self, cycle: &Z2Vector) -> Result<bool, ArfError> {
        if cycle.len() != self.rank() {
            return Err(ArfError::LengthMismatch {
                expected: self.rank(),
                found: cycle.len(),
            });
        }
        let linear = self.values.dot(cycle);
        // Each unordered pair {i,j} ⊂ S is counted twice by the symmetric rows.
        let ordered_pairs: u32 = cycle
            .ones()
            .map(|i| self.intersection.row(i).and_count(cycle))
            .sum();
        Ok(linear ^ ((ordered_pairs / 2) % 2 == 1))
    }

    /// The same pairing with values replaced by `Ω` of new generators, given
    /// in the current generator basis. The new generators must have the same
    /// pairing matrix as the old ones.
    pub fn transport(&self, generators: &[Z2Vector]) -> Result<Z2QuadraticForm, ArfError> {
        let values = generators
            .iter()
            .map(|g| self.evaluate(g))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = generators
            .iter()
            .map(|u| Z2Vector::from_bits(generators.iter().map(|v| self.pairing(u, v))))
            .collect();
        let intersection = Z2Matrix::from_rows(rows).ok_or(ArfError::LengthMismatch {
            expected: self.rank(),
            found: generators.len(),
        })?;
        Z2QuadraticForm::new(intersection, Z2Vector::from_bits(values))
    }
}

/// Pairs `(aᵢ, bᵢ)` with `aᵢ∘bᵢ = 1` and every other pairing zero, written in
/// the generator basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub pairs: Vec<(Z2Vector, Z2Vector)>,
}

impl SymplecticBasis {
    /// Checks the symplectic relations against `intersection`.
    pub fn is_symplectic_for(&self, intersection: &Z2Matrix) -> bool {
        let vectors: Vec<&Z2Vector> = self.pairs.iter().flat_map(|(a, b)| [a, b]).collect();
        if vectors.len() != intersection.size() {
            return false;
        }
        vectors.iter().enumerate().all(|(i, u)| {
            vectors.iter().enumerate().all(|(j, v)| {
                let expected = i / 2 == j / 2 && i != j;
                intersection.bilinear(u, v) == expected
            })
        })
    }
}

/// Symplectic Gram–Schmidt.
///
/// The pivot is the first remaining generator; its partner is the first
/// later generator pairing nontrivially with it. Every other remaining
/// generator `v` is replaced by `v + (v∘b)a + (v∘a)b`.
pub fn symplectic_basis(intersection: &Z2Matrix) -> Result<SymplecticBasis, ArfError> {
    if !intersection.is_symmetric() {
        return Err(ArfError::NotSymmetric);
    }
    if !intersection.has_zero_diagonal() {
        return Err(ArfError::NonZeroDiagonal);
    }
    let n = intersection.size();
    let mut remaining: Vec<Z2Vector> = (0..n).map(|i| Z2Vector::unit(n, i)).collect();
    let mut pairs = Vec::with_capacity(n / 2);
    while !remaining.is_empty() {
        let a = remaining.remove(0);
        let partner = remaining
            .iter()
            .position(|v| intersection.bilinear(&a, v))
            .ok_or(ArfError::Degenerate)?;
        let b = remaining.remove(partner);
        for v in &mut remaining {
            let with_b = intersection.bilinear(v, &b);
            let with_a = intersection.bilinear(v, &a);
            if with_b {
                v.add_assign(&a);
            }
            if with_a {
                v.add_assign(&b);
            }
        }
        pairs.push((a, b));
    }
    Ok(SymplecticBasis { pairs })
}

/// Arf invariant `Σ Ω(aᵢ)Ω(bᵢ) mod 2`; zero for the rank-0 form.
pub fn arf(form: &Z2QuadraticForm) -> Result<bool, ArfError> {
    let basis = symplectic_basis(form.intersection())?;
    basis.pairs.iter().try_fold(false, |acc, (a, b)| {
        Ok(acc ^ (form.evaluate(a)? & form.evaluate(b)?))
    })
}

/// Form on the chain `c̃₁,…,c̃₂ₙ₋₂` joining consecutive odd-order
/// singularities: `c̃ⱼ∘c̃ⱼ₊₁ = 1` and `Ω(c̃ⱼ) = (kⱼ+kⱼ₊₁)/2 mod 2`.
pub fn chain_form(odd_orders: &[i64]) -> Result<Z2QuadraticForm, ArfError> {
    let len = odd_orders.len();
    if len < 4 || !len.is_multiple_of(2) {
        return Err(ArfError::ChainLength(len));
    }
    if let Some(&k) = odd_orders.iter().find(|k| *k % 2 == 0) {
        return Err(ArfError::EvenChainOrder(k));
    }
    let rank = len - 2;
    let values = Z2Vector::from_bits(
        odd_orders
            .windows(2)
            .take(rank)
            .map(|w| ((w[0] + w[1]) / 2).rem_euclid(2) == 1),
    );
    Z2QuadraticForm::new(Z2Matrix::chain(rank), values)
}

/// Index (turning number) of a small loop around a zero of order `k` of an
/// Abelian differential.
pub fn loop_index(k: i64) -> i64 {
    k + 1
}

/// `Ω = ind + 1 mod 2` on a small loop around a zero of order `k`.
pub fn loop_form_value(k: i64) -> bool {
    (loop_index(k) + 1).rem_euclid(2) == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArfCounts {
    pub genus: u32,
    /// Forms with Arf invariant 0.
    pub arf0: u64,
    /// Forms with Arf invariant 1.
    pub arf1: u64,
}

/// Counts the quadratic forms with Arf invariant 0 and 1 on the standard
/// symplectic space of rank `2g`, by enumerating all `2^{2g}` value vectors.
pub fn count_arf(genus: u32, max_rank: usize, exec: Execution) -> Result<ArfCounts, ArfError> {
    if genus == 0 {
        return Err(ArfError::GenusZero);
    }
    let rank = 2 * genus as usize;
    if rank > max_rank || rank > 62 {
        return Err(ArfError::EnumerationTooLarge { rank, max_rank });
    }
    let intersection = Z2Matrix::standard_symplectic(genus as usize);
    let basis = symplectic_basis(&intersection)?;
    let total = 1u64 << rank;
    let arf1 = exec.count(0..total, |mask| {
        let form = Z2QuadraticForm {
            intersection: intersection.clone(),
            values: Z2Vector::from_mask(rank, mask),
        };
        basis.pairs.iter().fold(false, |acc, (a, b)| {
            acc ^ (form.evaluate(a).unwrap() & form.evaluate(b).unwrap())
        })
    });
    Ok(ArfCounts {
        genus,
        arf0: total - arf1,
        arf1,
    })
}

/// Spin parity as the Arf invariant of the chain form of the odd orders.
/// Fewer than four odd orders leave no chain cycles and give even parity.
pub fn spin_parity_arf(p: &Pattern) -> Result<SpinParity, ArfError> {
    p.expect_flavor(Flavor::Quadratic)?;
    if let Err(obstruction) = spin_defined(p) {
        return Ok(SpinParity::Undefined(obstruction.to_string()));
    }
    let odd = odd_orders(p);
    if odd.len() < 4 {
        return Ok(SpinParity::Even);
    }
    Ok(SpinParity::from_bit(arf(&chain_form(&odd)?)?))
}

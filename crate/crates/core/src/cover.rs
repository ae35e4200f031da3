//! Singularity pattern of the canonical orientation double cover of a
//! quadratic differential, with Riemann–Hurwitz bookkeeping.
//!
//! Over a singularity of odd order `k` the cover is ramified and carries one
//! zero of order `k+1`. Over an even order `k` it is unramified and carries
//! two zeros of order `k/2`. Preimages of poles are regular points and are
//! never listed.

use std::fmt;

use serde::Serialize;

use crate::pattern::{Flavor, Pattern, PatternError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverData {
    pub base: Pattern,
    pub cover: Pattern,
    /// Number of odd-order singularities of the base (the `2n` ramification
    /// points).
    pub ramification_count: usize,
    pub cover_genus: i64,
    /// Dimension of `H_1` of the cover over Z/2.
    pub h1_dim: i64,
    /// All orders of the base are even, so a particular differential in the
    /// stratum may be a global square with a disconnected cover.
    pub square_candidate: bool,
}

/// Image of a quadratic pattern under the orientation double cover.
///
/// With `keep_marked` each marked point of the base contributes two marked
/// points to the cover; otherwise they are dropped.
pub fn cover_pattern(base: &Pattern, keep_marked: bool) -> Result<CoverData, PatternError> {
    base.expect_flavor(Flavor::Quadratic)?;
    let mut orders = Vec::with_capacity(2 * base.len());
    let mut ramification_count = 0usize;
    for &k in base.orders() {
        match k {
            -1 => ramification_count += 1,
            0 if keep_marked => orders.extend([0, 0]),
            0 => {}
            k if k % 2 != 0 => {
                ramification_count += 1;
                orders.push(k + 1);
            }
            k => orders.extend([k / 2, k / 2]),
        }
    }
    let cover = Pattern::abelian(orders)?;
    let half_ramification = (ramification_count / 2) as i64;
    let cover_genus = 2 * base.genus() + half_ramification - 1;
    Ok(CoverData {
        base: base.clone(),
        cover,
        ramification_count,
        cover_genus,
        h1_dim: 4 * base.genus() + 2 * half_ramification - 2,
        square_candidate: is_square_candidate(base),
    })
}

/// True iff every order of the pattern is even.
pub fn is_square_candidate(base: &Pattern) -> bool {
    base.orders().iter().all(|k| k % 2 == 0)
}

/// Why a pattern carries no well-defined spin structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpinObstruction {
    pub order: i64,
    pub flavor: Flavor,
}

impl fmt::Display for SpinObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::Quadratic => write!(f, "order {} ≡ 2 mod 4", self.order),
            Flavor::Abelian => write!(f, "order {} is odd", self.order),
        }
    }
}

/// Checks that the spin structure is defined: no quadratic order `≡ 2 mod 4`,
/// or no odd Abelian order. Poles and marked points always pass.
pub fn spin_defined(p: &Pattern) -> Result<(), SpinObstruction> {
    let bad = match p.flavor() {
        Flavor::Quadratic => p.orders().iter().find(|k| k.rem_euclid(4) == 2),
        Flavor::Abelian => p.orders().iter().find(|k| *k % 2 != 0),
    };
    match bad {
        Some(&order) => Err(SpinObstruction {
            order,
            flavor: p.flavor(),
        }),
        None => Ok(()),
    }
}

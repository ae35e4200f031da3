//! Parity of the spin structure of a quadratic stratum.
//!
//! The parity of a quadratic differential `ψ` is the parity of the Abelian
//! differential `ω` on its orientation double cover. Two routes are offered
//! here: the closed form in the residue counts `n₊₁`, `n₋₁`, and the longer
//! sum over consecutive odd orders that the closed form is derived from. The
//! third route, the Arf invariant of the chain form, lives in
//! [`crate::arf`].
//!
//! Also here: the parities of hyperelliptic components of Abelian strata and
//! the `H^even(...)`/`H^odd(...)` component labels.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cover::spin_defined;
use crate::pattern::{Flavor, Pattern, PatternError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpinParity {
    Even,
    Odd,
    Undefined(String),
}

impl SpinParity {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            SpinParity::Odd
        } else {
            SpinParity::Even
        }
    }

    /// `Some(0)` for even, `Some(1)` for odd.
    pub fn bit(&self) -> Option<u8> {
        match self {
            SpinParity::Even => Some(0),
            SpinParity::Odd => Some(1),
            SpinParity::Undefined(_) => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        !matches!(self, SpinParity::Undefined(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpinParity::Even => "even",
            SpinParity::Odd => "odd",
            SpinParity::Undefined(_) => "undefined",
        }
    }
}

impl fmt::Display for SpinParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinParity::Undefined(reason) => write!(f, "undefined ({reason})"),
            other => f.write_str(other.name()),
        }
    }
}

impl Serialize for SpinParity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParityError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("odd-order list has odd length {0}")]
    OddLength(usize),
    #[error("order {0} is not an odd order >= -1")]
    NotOddOrder(i64),
    #[error("odd orders sum to {0}, which is not divisible by 4")]
    SumNotDivisibleBy4(i64),
    #[error("hyperelliptic parity needs genus >= {min}, got {genus}")]
    GenusTooSmall { genus: i64, min: i64 },
    #[error("two-zero hyperelliptic parity needs odd genus, got {0}")]
    EvenGenus(i64),
    #[error("cannot label a component with undefined parity")]
    UndefinedParity,
    #[error("spin structure not defined: {0}")]
    SpinNotDefined(String),
}

/// Residue counts `(n₊₁, n₋₁)` of the orders `≡ 1` and `≡ 3 (mod 4)`.
/// Poles count toward `n₋₁`.
pub fn residue_counts(p: &Pattern) -> (usize, usize) {
    p.orders().iter().fold((0, 0), |(plus, minus), k| match k.rem_euclid(4) {
        1 => (plus + 1, minus),
        3 => (plus, minus + 1),
        _ => (plus, minus),
    })
}

/// Closed form: parity of `⌊|n₊₁ - n₋₁| / 4⌋`.
pub fn spin_parity_closed(p: &Pattern) -> Result<SpinParity, ParityError> {
    p.expect_flavor(Flavor::Quadratic)?;
    if let Err(obstruction) = spin_defined(p) {
        return Ok(SpinParity::Undefined(obstruction.to_string()));
    }
    let (plus, minus) = residue_counts(p);
    Ok(SpinParity::from_bit((plus.abs_diff(minus) / 4) % 2 == 1))
}

/// The odd orders of a quadratic pattern, in canonical order, marked points
/// excluded.
pub fn odd_orders(p: &Pattern) -> Vec<i64> {
    p.orders().iter().copied().filter(|k| k % 2 != 0).collect()
}

/// Sum form over an ordered list `k₁,…,k₂ₙ` of odd orders:
///
/// `Φ = ¼ Σ_{j=1}^{n-1} (k₁+⋯+k₂ⱼ)(k₂ⱼ+k₂ⱼ₊₁) mod 2`, and `Φ = 0` for `n < 2`.
///
/// The list is used in the order given.
pub fn spin_parity_sum(odd_orders: &[i64]) -> Result<SpinParity, ParityError> {
    if !odd_orders.len().is_multiple_of(2) {
        return Err(ParityError::OddLength(odd_orders.len()));
    }
    if let Some(&k) = odd_orders.iter().find(|&&k| k % 2 == 0 || k < -1) {
        return Err(ParityError::NotOddOrder(k));
    }
    let total: i64 = odd_orders.iter().map(|k| k.rem_euclid(4)).sum();
    if total % 4 != 0 {
        return Err(ParityError::SumNotDivisibleBy4(odd_orders.iter().sum()));
    }
    let n = odd_orders.len() / 2;
    if n < 2 {
        return Ok(SpinParity::Even);
    }
    // Only the total mod 8 matters: Φ is (total / 4) mod 2.
    let mut prefix = 0i64;
    let mut total = 0i64;
    for j in 1..n {
        prefix = (prefix + odd_orders[2 * j - 2] + odd_orders[2 * j - 1]).rem_euclid(8);
        let step = (odd_orders[2 * j - 1] + odd_orders[2 * j]).rem_euclid(8);
        total = (total + prefix * step).rem_euclid(8);
    }
    assert!(total % 4 == 0, "sum form total {total} not divisible by 4");
    Ok(SpinParity::from_bit(total == 4))
}

/// Sum-form parity of a quadratic pattern, using its odd orders in canonical
/// order.
pub fn spin_parity_sum_of(p: &Pattern) -> Result<SpinParity, ParityError> {
    p.expect_flavor(Flavor::Quadratic)?;
    if let Err(obstruction) = spin_defined(p) {
        return Ok(SpinParity::Undefined(obstruction.to_string()));
    }
    spin_parity_sum(&odd_orders(p))
}

/// Parity of the hyperelliptic component of `H(2g-2)`: `⌊(g+1)/2⌋ mod 2`.
pub fn hyperelliptic_parity_single(genus: i64) -> Result<SpinParity, ParityError> {
    if genus < 2 {
        return Err(ParityError::GenusTooSmall { genus, min: 2 });
    }
    Ok(SpinParity::from_bit(((genus + 1) / 2) % 2 == 1))
}

/// Parity of the hyperelliptic component of `H(g-1,g-1)` for odd `g`:
/// `(g+1)/2 mod 2`.
pub fn hyperelliptic_parity_double(genus: i64) -> Result<SpinParity, ParityError> {
    if genus % 2 == 0 {
        return Err(ParityError::EvenGenus(genus));
    }
    if genus < 3 {
        return Err(ParityError::GenusTooSmall { genus, min: 3 });
    }
    Ok(SpinParity::from_bit(((genus + 1) / 2) % 2 == 1))
}

/// Label such as `H^even(10)` or `H^odd(2,4)`. Orders are listed
/// individually in non-decreasing order.
pub fn component_label(p: &Pattern, parity: &SpinParity) -> Result<String, ParityError> {
    p.expect_flavor(Flavor::Abelian)?;
    if !parity.is_defined() {
        return Err(ParityError::UndefinedParity);
    }
    if let Err(obstruction) = spin_defined(p) {
        return Err(ParityError::SpinNotDefined(obstruction.to_string()));
    }
    Ok(format!("H^{}({})", parity.name(), p.expanded_orders(true)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Pattern {
        text.parse().unwrap()
    }

    #[test]
    fn closed_form_fixtures() {
        assert_eq!(spin_parity_closed(&p("Q(-1,9)")).unwrap(), SpinParity::Even);
        assert_eq!(spin_parity_closed(&p("Q(12)")).unwrap(), SpinParity::Even);
        assert_eq!(spin_parity_closed(&p("Q(-1^4)")).unwrap(), SpinParity::Odd);
        assert_eq!(spin_parity_closed(&p("Q(1^5,3)")).unwrap(), SpinParity::Odd);
        assert_eq!(residue_counts(&p("Q(1^5,3)")), (5, 1));
        assert_eq!(residue_counts(&p("Q(-1,9,4,0)")), (1, 1));
    }

    #[test]
    fn closed_form_undefined_and_flavor() {
        match spin_parity_closed(&p("Q(2,2)")).unwrap() {
            SpinParity::Undefined(reason) => assert!(reason.contains("≡ 2 mod 4")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(spin_parity_closed(&p("H(2)")).is_err());
    }

    #[test]
    fn sum_form_examples() {
        assert_eq!(spin_parity_sum(&[-1, -1, -1, -1]).unwrap(), SpinParity::Odd);
        assert_eq!(spin_parity_sum(&[1, 3]).unwrap(), SpinParity::Even);
        assert_eq!(spin_parity_sum(&[1, 1, 1, 1, 1, 3]).unwrap(), SpinParity::Odd);
        assert_eq!(spin_parity_sum(&[]).unwrap(), SpinParity::Even);
        assert_eq!(spin_parity_sum(&[9, -1]).unwrap(), SpinParity::Even);
    }

    #[test]
    fn sum_form_rejects_bad_input() {
        assert_eq!(spin_parity_sum(&[1, 3, 1]), Err(ParityError::OddLength(3)));
        assert_eq!(spin_parity_sum(&[2, 2]), Err(ParityError::NotOddOrder(2)));
        assert_eq!(spin_parity_sum(&[-3, 3]), Err(ParityError::NotOddOrder(-3)));
        assert_eq!(spin_parity_sum(&[1, 1]), Err(ParityError::SumNotDivisibleBy4(2)));
    }

    #[test]
    fn hyperelliptic_tables() {
        use SpinParity::*;
        let single: Vec<_> = (2..=7)
            .map(|g| hyperelliptic_parity_single(g).unwrap())
            .collect();
        // ⌊(g+1)/2⌋ = 1, 2, 2, 3, 3, 4 for g = 2..7
        assert_eq!(single, vec![Odd, Even, Even, Odd, Odd, Even]);
        assert_eq!(hyperelliptic_parity_double(3).unwrap(), Even);
        assert_eq!(hyperelliptic_parity_double(5).unwrap(), Odd);
        assert_eq!(hyperelliptic_parity_double(4), Err(ParityError::EvenGenus(4)));
        assert!(hyperelliptic_parity_double(1).is_err());
        assert!(hyperelliptic_parity_single(1).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(
            component_label(&p("H(10)"), &SpinParity::Even).unwrap(),
            "H^even(10)"
        );
        assert_eq!(
            component_label(&p("H(2,4)"), &SpinParity::Odd).unwrap(),
            "H^odd(2,4)"
        );
        assert_eq!(
            component_label(&p("H(6,6)"), &SpinParity::Even).unwrap(),
            "H^even(6,6)"
        );
        assert_eq!(
            component_label(&p("H(10)"), &SpinParity::Undefined("x".into())),
            Err(ParityError::UndefinedParity)
        );
        assert!(component_label(&p("H(1,1)"), &SpinParity::Odd).is_err());
        assert!(component_label(&p("Q(12)"), &SpinParity::Odd).is_err());
    }
}

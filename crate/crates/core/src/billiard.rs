//! Rational polygonal billiards: unfolding to a translation surface, the
//! pillowcase quadratic differential, and spin parity of the unfolding.
//!
//! A table is described only by its angles `(mᵢ/nᵢ)·π`. With `N = lcm(nᵢ)`
//! the unfolding has genus `1 + (N/2)(k - 2 - Σ 1/nᵢ)`, and each vertex gives
//! `N/nᵢ` zeros of order `mᵢ-1`. Zeros of order 0 are fake and are only
//! counted.
//!
//! Writing each angle as `(pᵢ/qᵢ)·(π/2)` in lowest terms and `Q = lcm(qᵢ)`,
//! the pillowcase differential has `Q/qᵢ` singularities of order `pᵢ-2` per
//! vertex. For even `N` the unfolding is its orientation double cover.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cover::cover_pattern;
use crate::parity::{
    component_label, hyperelliptic_parity_double, hyperelliptic_parity_single, spin_parity_closed,
    SpinParity,
};
use crate::pattern::{Pattern, PatternError};

pub type Rational = Ratio<i64>;

/// Cap on the number of singularities generated for one table.
pub const MAX_SINGULARITIES: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BilliardError {
    #[error("cannot parse angle {0:?}; expected m/n or an integer")]
    AngleSyntax(String),
    #[error("angle {0} is not positive")]
    NonPositiveAngle(Rational),
    #[error("angle {0}π is not below 2π")]
    AngleTooLarge(Rational),
    #[error("a polygon needs at least 3 angles, got {0}")]
    TooFewAngles(usize),
    #[error("angles sum to {sum}π but a {k}-gon needs {expected}π")]
    PolygonSum { sum: Rational, k: usize, expected: i64 },
    #[error("genus {0} is not an integer")]
    NonIntegralGenus(Rational),
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("table produces more than {MAX_SINGULARITIES} singularities")]
    TooManySingularities,
    #[error("invalid singularity pattern: {0}")]
    Pattern(#[from] PatternError),
    #[error("routes disagree: {0}")]
    RouteDisagreement(String),
}

impl BilliardError {
    /// Cross-route disagreements are internal failures; everything else is a
    /// validation problem with the input.
    pub fn is_internal(&self) -> bool {
        matches!(self, BilliardError::RouteDisagreement(_))
    }
}

/// Angles of a rational polygon as multiples of π.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilliardTable {
    angles: Vec<Rational>,
    relax_polygon: bool,
}

impl BilliardTable {
    /// Validates the angles. Unless `relax_polygon` is set, there must be at
    /// least three angles, each below 2π, summing to `(k-2)π`.
    pub fn new(angles: Vec<Rational>, relax_polygon: bool) -> Result<Self, BilliardError> {
        if let Some(&a) = angles.iter().find(|a| !a.is_positive()) {
            return Err(BilliardError::NonPositiveAngle(a));
        }
        if !relax_polygon {
            let k = angles.len();
            if k < 3 {
                return Err(BilliardError::TooFewAngles(k));
            }
            if let Some(&a) = angles.iter().find(|&&a| a >= Rational::from(2)) {
                return Err(BilliardError::AngleTooLarge(a));
            }
            let sum = checked_sum(angles.iter().copied()).ok_or(BilliardError::Overflow("angle sum"))?;
            let expected = k as i64 - 2;
            if sum != Rational::from(expected) {
                return Err(BilliardError::PolygonSum { sum, k, expected });
            }
        }
        Ok(BilliardTable {
            angles,
            relax_polygon,
        })
    }

    /// Parses a comma-separated list such as `11/14,1/7,1/14`.
    pub fn parse(text: &str, relax_polygon: bool) -> Result<Self, BilliardError> {
        let angles = text
            .split(',')
            .map(|s| parse_angle(s.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(angles, relax_polygon)
    }

    pub fn angles(&self) -> &[Rational] {
        &self.angles
    }

    pub fn relax_polygon(&self) -> bool {
        self.relax_polygon
    }

    /// `N = lcm(nᵢ)`.
    pub fn denominator_lcm(&self) -> Result<i64, BilliardError> {
        checked_lcm(self.angles.iter().map(|a| *a.denom())).ok_or(BilliardError::Overflow("N"))
    }
}

impl fmt::Display for BilliardTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.angles.iter().map(Rational::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for BilliardTable {
    type Err = BilliardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, false)
    }
}

fn parse_angle(text: &str) -> Result<Rational, BilliardError> {
    let err = || BilliardError::AngleSyntax(text.to_string());
    let (m, n) = match text.split_once('/') {
        Some((m, n)) => (m.trim(), n.trim()),
        None => (text, "1"),
    };
    let m: i64 = m.parse().map_err(|_| err())?;
    let n: i64 = n.parse().map_err(|_| err())?;
    if n <= 0 {
        return Err(err());
    }
    Ok(Rational::new(m, n))
}

fn checked_sum(values: impl IntoIterator<Item = Rational>) -> Option<Rational> {
    values
        .into_iter()
        .try_fold(Rational::zero(), |acc, v| acc.checked_add(&v))
}

fn checked_lcm(values: impl IntoIterator<Item = i64>) -> Option<i64> {
    values.into_iter().try_fold(1i64, |acc, n| {
        let g = acc.gcd(&n);
        (acc / g).checked_mul(n)
    })
}

/// Abelian side of the unfolding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unfolding {
    #[serde(rename = "N")]
    pub n_lcm: i64,
    pub genus: i64,
    pub abelian_pattern: Pattern,
    pub fake_zero_count: i64,
}

/// Unfolds the table into a translation surface.
///
/// For relaxed tables whose angles do not sum to `(k-2)π`, the genus uses
/// `Σ mᵢ/nᵢ` in place of `k-2`, which is the same quantity for polygons.
pub fn unfold(table: &BilliardTable) -> Result<Unfolding, BilliardError> {
    let n_lcm = table.denominator_lcm()?;
    let overflow = || BilliardError::Overflow("genus");
    let angle_sum = if table.relax_polygon {
        checked_sum(table.angles.iter().copied()).ok_or_else(overflow)?
    } else {
        Rational::from(table.angles.len() as i64 - 2)
    };
    let reciprocal_sum =
        checked_sum(table.angles.iter().map(|a| Rational::new(1, *a.denom()))).ok_or_else(overflow)?;
    let genus = Rational::from(n_lcm)
        .checked_mul(&(angle_sum - reciprocal_sum))
        .ok_or_else(overflow)?
        / 2
        + 1;
    if !genus.is_integer() {
        return Err(BilliardError::NonIntegralGenus(genus));
    }
    let genus = genus.to_integer();

    let mut orders = Vec::new();
    let mut fake_zero_count = 0i64;
    let mut total = 0i64;
    for a in &table.angles {
        let copies = n_lcm / a.denom();
        total = total.checked_add(copies).ok_or_else(overflow)?;
        if total > MAX_SINGULARITIES {
            return Err(BilliardError::TooManySingularities);
        }
        let order = a.numer() - 1;
        if order == 0 {
            fake_zero_count += copies;
        } else {
            orders.extend(std::iter::repeat_n(order, copies as usize));
        }
    }
    let abelian_pattern = Pattern::abelian(orders)?;
    if abelian_pattern.genus() != genus {
        return Err(BilliardError::RouteDisagreement(format!(
            "genus formula gives {genus} but {abelian_pattern} has genus {}",
            abelian_pattern.genus()
        )));
    }
    Ok(Unfolding {
        n_lcm,
        genus,
        abelian_pattern,
        fake_zero_count,
    })
}

/// Quadratic side: the pillowcase differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pillowcase {
    pub quadratic_pattern: Pattern,
    #[serde(rename = "Q")]
    pub q_lcm: i64,
    pub is_abelian_square: bool,
}

/// `(pᵢ, qᵢ)` with `mᵢ/nᵢ · π = pᵢ/qᵢ · π/2` in lowest terms.
pub fn half_angle_fraction(angle: Rational) -> Option<(i64, i64)> {
    let doubled = angle.checked_mul(&Rational::from(2))?;
    Some((*doubled.numer(), *doubled.denom()))
}

pub fn pillowcase(table: &BilliardTable) -> Result<Pillowcase, BilliardError> {
    let overflow = || BilliardError::Overflow("Q");
    let fractions = table
        .angles
        .iter()
        .map(|&a| half_angle_fraction(a))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(overflow)?;
    let q_lcm = checked_lcm(fractions.iter().map(|&(_, q)| q)).ok_or_else(overflow)?;
    let mut orders = Vec::new();
    let mut total = 0i64;
    for &(p, q) in &fractions {
        let copies = q_lcm / q;
        total = total.checked_add(copies).ok_or_else(overflow)?;
        if total > MAX_SINGULARITIES {
            return Err(BilliardError::TooManySingularities);
        }
        if p != 2 {
            orders.extend(std::iter::repeat_n(p - 2, copies as usize));
        }
    }
    let quadratic_pattern = Pattern::quadratic(orders)?;
    Ok(Pillowcase {
        quadratic_pattern,
        q_lcm,
        is_abelian_square: table.denominator_lcm()? % 2 == 1,
    })
}

/// Spin parity of the unfolding from the angles alone:
///
/// `Φ = ⌊(N/4)·|Σ_{r₁} 1/nᵢ − Σ_{r₂} 1/nᵢ|⌋ mod 2`
///
/// where `mᵢ = 2kᵢ+1`, `r₁` collects even `nᵢ` with even `kᵢ` and `r₂` even
/// `nᵢ` with odd `kᵢ`. Undefined when some `mᵢ` is even.
pub fn billiard_spin(table: &BilliardTable) -> Result<SpinParity, BilliardError> {
    if let Some(a) = table.angles.iter().find(|a| a.numer() % 2 == 0) {
        return Ok(SpinParity::Undefined(format!(
            "angle {a} has an even numerator"
        )));
    }
    let overflow = || BilliardError::Overflow("spin");
    let n_lcm = table.denominator_lcm()?;
    let mut difference = Rational::zero();
    for a in table.angles.iter().filter(|a| a.denom() % 2 == 0) {
        let k = (a.numer() - 1) / 2;
        let term = Rational::new(1, *a.denom());
        difference = if k % 2 == 0 {
            difference.checked_add(&term)
        } else {
            difference.checked_sub(&term)
        }
        .ok_or_else(overflow)?;
    }
    let scaled = difference
        .abs()
        .checked_mul(&Rational::new(n_lcm, 4))
        .ok_or_else(overflow)?;
    // floor of a non-negative rational
    let floor = scaled.numer() / scaled.denom();
    Ok(SpinParity::from_bit(floor % 2 == 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperellipticVerdict {
    Possible,
    NotHyperelliptic,
}

impl HyperellipticVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            HyperellipticVerdict::Possible => "hyperelliptic possible",
            HyperellipticVerdict::NotHyperelliptic => "not hyperelliptic",
        }
    }
}

impl Serialize for HyperellipticVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Comparison of the unfolding's parity against the hyperelliptic component
/// of `H(2g-2)` or `H(g-1,g-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperellipticCheck {
    pub stratum: Pattern,
    pub hyperelliptic_parity: SpinParity,
    pub verdict: HyperellipticVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnfoldingReport {
    pub angles: String,
    #[serde(rename = "N")]
    pub n_lcm: i64,
    pub genus: i64,
    pub abelian_pattern: Pattern,
    pub fake_zero_count: i64,
    pub quadratic_pattern: Pattern,
    #[serde(rename = "Q")]
    pub q_lcm: i64,
    pub is_abelian_square: bool,
    pub spin: SpinParity,
    /// Closed-form parity of the pillowcase pattern.
    pub pillowcase_spin: SpinParity,
    pub hyperelliptic: Option<HyperellipticCheck>,
    pub component_label: Option<String>,
    pub warnings: Vec<String>,
}

/// Runs the whole pipeline and cross-checks the routes that must agree.
pub fn classify(table: &BilliardTable) -> Result<UnfoldingReport, BilliardError> {
    let unfolding = unfold(table)?;
    let pillow = pillowcase(table)?;
    let spin = billiard_spin(table)?;
    let pillowcase_spin = spin_parity_closed(&pillow.quadratic_pattern)
        .map_err(|e| BilliardError::RouteDisagreement(e.to_string()))?;

    if spin.is_defined() && spin != pillowcase_spin {
        return Err(BilliardError::RouteDisagreement(format!(
            "angle formula gives {spin} but {} has {pillowcase_spin} parity",
            pillow.quadratic_pattern
        )));
    }
    if !pillow.is_abelian_square {
        let cover = cover_pattern(&pillow.quadratic_pattern, false)?;
        if cover.cover != unfolding.abelian_pattern || cover.cover_genus != unfolding.genus {
            return Err(BilliardError::RouteDisagreement(format!(
                "double cover of {} is {} (genus {}), unfolding is {} (genus {})",
                pillow.quadratic_pattern,
                cover.cover,
                cover.cover_genus,
                unfolding.abelian_pattern,
                unfolding.genus
            )));
        }
    }

    let hyperelliptic = if spin.is_defined() {
        hyperelliptic_check(&unfolding.abelian_pattern, &spin)
    } else {
        None
    };
    let component_label = component_label(&unfolding.abelian_pattern, &spin).ok();

    let mut warnings = Vec::new();
    if is_heptagonal_triangle(table) {
        warnings.push(
            "published accounts of this table give 2 fake zeros and H^odd(10); the vertex rule gives 3 fake zeros and the computed parity is even"
                .to_string(),
        );
    }

    Ok(UnfoldingReport {
        angles: table.to_string(),
        n_lcm: unfolding.n_lcm,
        genus: unfolding.genus,
        abelian_pattern: unfolding.abelian_pattern,
        fake_zero_count: unfolding.fake_zero_count,
        quadratic_pattern: pillow.quadratic_pattern,
        q_lcm: pillow.q_lcm,
        is_abelian_square: pillow.is_abelian_square,
        spin,
        pillowcase_spin,
        hyperelliptic,
        component_label,
        warnings,
    })
}

fn is_heptagonal_triangle(table: &BilliardTable) -> bool {
    let mut angles = table.angles.clone();
    angles.sort();
    angles == [Rational::new(1, 14), Rational::new(1, 7), Rational::new(11, 14)]
}

fn hyperelliptic_check(stratum: &Pattern, spin: &SpinParity) -> Option<HyperellipticCheck> {
    let genus = stratum.genus();
    let hyperelliptic_parity = match stratum.orders() {
        [k] if *k == 2 * genus - 2 => hyperelliptic_parity_single(genus).ok()?,
        [a, b] if a == b && *a == genus - 1 => hyperelliptic_parity_double(genus).ok()?,
        _ => return None,
    };
    let verdict = if &hyperelliptic_parity == spin {
        HyperellipticVerdict::Possible
    } else {
        HyperellipticVerdict::NotHyperelliptic
    };
    Some(HyperellipticCheck {
        stratum: stratum.clone(),
        hyperelliptic_parity,
        verdict,
    })
}

/// `Σ (mᵢ-1)·N/nᵢ`, which equals `2g-2` for the unfolding.
pub fn gauss_bonnet_sum(table: &BilliardTable) -> Result<i64, BilliardError> {
    let n_lcm = table.denominator_lcm()?;
    table
        .angles
        .iter()
        .try_fold(0i64, |acc, a| {
            (a.numer() - 1)
                .checked_mul(n_lcm / a.denom())
                .and_then(|t| acc.checked_add(t))
        })
        .ok_or(BilliardError::Overflow("Gauss-Bonnet sum"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> BilliardTable {
        BilliardTable::parse(text, false).unwrap()
    }

    fn p(text: &str) -> Pattern {
        text.parse().unwrap()
    }

    #[test]
    fn unfold_examples() {
        let u = unfold(&table("11/14,1/7,1/14")).unwrap();
        assert_eq!((u.n_lcm, u.genus, u.fake_zero_count), (14, 6, 3));
        assert_eq!(u.abelian_pattern, p("H(10)"));

        let u = unfold(&table("1/3,1/3,1/3")).unwrap();
        assert_eq!((u.n_lcm, u.genus, u.fake_zero_count), (3, 1, 3));
        assert_eq!(u.abelian_pattern, p("H()"));

        let u = unfold(&table("1/2,1/4,1/4")).unwrap();
        assert_eq!((u.n_lcm, u.genus, u.fake_zero_count), (4, 1, 4));
        assert_eq!(u.abelian_pattern, p("H()"));
    }

    #[test]
    fn pillowcase_examples() {
        let pc = pillowcase(&table("11/14,1/7,1/14")).unwrap();
        assert_eq!(pc.quadratic_pattern, p("Q(9,-1)"));
        assert_eq!(pc.q_lcm, 7);
        assert!(!pc.is_abelian_square);

        let pc = pillowcase(&table("1/2,1/4,1/4")).unwrap();
        assert_eq!(pc.quadratic_pattern, p("Q(-1^4)"));
        assert_eq!(pc.q_lcm, 2);
        assert!(!pc.is_abelian_square);

        let pc = pillowcase(&table("1/3,1/3,1/3")).unwrap();
        assert_eq!(pc.quadratic_pattern, p("Q()"));
        assert_eq!(pc.q_lcm, 3);
        assert!(pc.is_abelian_square);
    }

    #[test]
    fn half_angle_reduction() {
        // (m; n/2) for even n, (2m; n) for odd n
        assert_eq!(half_angle_fraction(Rational::new(11, 14)), Some((11, 7)));
        assert_eq!(half_angle_fraction(Rational::new(1, 7)), Some((2, 7)));
        assert_eq!(half_angle_fraction(Rational::new(1, 2)), Some((1, 1)));
    }

    #[test]
    fn spin_examples() {
        assert_eq!(billiard_spin(&table("11/14,1/7,1/14")).unwrap(), SpinParity::Even);
        assert_eq!(billiard_spin(&table("1/2,1/4,1/4")).unwrap(), SpinParity::Odd);
        assert_eq!(billiard_spin(&table("1/3,1/3,1/3")).unwrap(), SpinParity::Even);
        assert!(!billiard_spin(&table("2/3,1/6,1/6")).unwrap().is_defined());
    }

    #[test]
    fn classify_triangle_example() {
        let report = classify(&table("11/14,1/7,1/14")).unwrap();
        assert_eq!(report.n_lcm, 14);
        assert_eq!(report.genus, 6);
        assert_eq!(report.abelian_pattern, p("H(10)"));
        assert_eq!(report.quadratic_pattern, p("Q(9,-1)"));
        assert_eq!(report.spin, SpinParity::Even);
        let hyp = report.hyperelliptic.unwrap();
        assert_eq!(hyp.hyperelliptic_parity, SpinParity::Odd);
        assert_eq!(hyp.verdict, HyperellipticVerdict::NotHyperelliptic);
        assert_eq!(report.component_label.as_deref(), Some("H^even(10)"));
        assert_eq!(report.fake_zero_count, 3);
    }

    #[test]
    fn classify_other_examples() {
        let report = classify(&table("1/2,1/4,1/4")).unwrap();
        assert_eq!(report.genus, 1);
        assert_eq!(report.quadratic_pattern, p("Q(-1^4)"));
        assert_eq!(report.spin, SpinParity::Odd);
        assert!(report.hyperelliptic.is_none());

        let report = classify(&table("1/5,1/5,3/5")).unwrap();
        assert_eq!(report.n_lcm, 5);
        assert!(report.is_abelian_square);
        assert_eq!(report.genus, 2);
        assert_eq!(report.abelian_pattern, p("H(2)"));
        assert_eq!(report.spin, SpinParity::Even);
        // H(2) is hyperelliptic with odd parity
        assert_eq!(
            report.hyperelliptic.unwrap().verdict,
            HyperellipticVerdict::NotHyperelliptic
        );
    }

    #[test]
    fn classify_with_even_numerators() {
        let report = classify(&table("2/3,1/6,1/6")).unwrap();
        assert!(!report.spin.is_defined());
        assert!(report.hyperelliptic.is_none());
        assert!(report.component_label.is_none());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            BilliardTable::parse("1/2,1/2", false),
            Err(BilliardError::TooFewAngles(2))
        ));
        assert!(matches!(
            BilliardTable::parse("1/2,1/4,1/3", false),
            Err(BilliardError::PolygonSum { .. })
        ));
        assert!(matches!(
            BilliardTable::parse("1/2,x,1/4", false),
            Err(BilliardError::AngleSyntax(_))
        ));
        assert!(matches!(
            BilliardTable::parse("1/0,1,1", false),
            Err(BilliardError::AngleSyntax(_))
        ));
        assert!(matches!(
            BilliardTable::parse("-1/2,3/2,1", false),
            Err(BilliardError::NonPositiveAngle(_))
        ));
        assert!(matches!(
            BilliardTable::parse("2,1/2,1/2,1", false),
            Err(BilliardError::AngleTooLarge(_))
        ));
        // angles are reduced to lowest terms
        assert_eq!(table("2/4,1/4,1/4"), table("1/2,1/4,1/4"));
    }

    #[test]
    fn relaxed_tables() {
        let t = BilliardTable::parse("3/2,1/2", true).unwrap();
        let u = unfold(&t).unwrap();
        assert_eq!(u.n_lcm, 2);
        assert_eq!(u.abelian_pattern, p("H(2)"));
        assert_eq!(u.genus, 2);
        assert_eq!(gauss_bonnet_sum(&t).unwrap(), 2 * u.genus - 2);
        // a single 2π/3 cone gives a zero sum that is not even
        let t = BilliardTable::parse("2/3", true).unwrap();
        assert!(unfold(&t).is_err());
    }
}

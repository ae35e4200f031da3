//! Singularity patterns of strata and the stratum-level facts attached to them.
//!
//! A [`Pattern`] is a flavored multiset of singularity orders, e.g. `Q(-1,9)`
//! for quadratic differentials or `H(2,4)` for Abelian ones. Orders are kept
//! in non-increasing order so that equality is multiset equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Upper bound on a single `^` exponent accepted by the parser.
pub const MAX_EXPONENT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Abelian,
    Quadratic,
}

impl Flavor {
    pub fn symbol(self) -> char {
        match self {
            Flavor::Abelian => 'H',
            Flavor::Quadratic => 'Q',
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Abelian => f.write_str("Abelian"),
            Flavor::Quadratic => f.write_str("Quadratic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{flavor} pattern cannot contain order {order}")]
    Order { flavor: Flavor, order: i64 },
    #[error("{flavor} pattern has order sum {sum}, which {requirement}")]
    Sum {
        flavor: Flavor,
        sum: i64,
        requirement: &'static str,
    },
    #[error("expected a {expected} pattern, got {found}")]
    Flavor { expected: Flavor, found: Flavor },
}

impl PatternError {
    /// Short machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            PatternError::Syntax { .. } => "syntax",
            PatternError::Order { .. } => "order",
            PatternError::Sum { .. } => "sum",
            PatternError::Flavor { .. } => "flavor",
        }
    }
}

/// A validated singularity pattern in canonical (non-increasing) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    flavor: Flavor,
    orders: Vec<i64>,
}

impl Pattern {
    pub fn new(flavor: Flavor, orders: impl IntoIterator<Item = i64>) -> Result<Self, PatternError> {
        let mut orders: Vec<i64> = orders.into_iter().collect();
        let min_order = match flavor {
            Flavor::Abelian => 0,
            Flavor::Quadratic => -1,
        };
        if let Some(&order) = orders.iter().find(|&&k| k < min_order) {
            return Err(PatternError::Order { flavor, order });
        }
        let sum = orders
            .iter()
            .try_fold(0i64, |acc, &k| acc.checked_add(k))
            .ok_or(PatternError::Sum {
                flavor,
                sum: i64::MAX,
                requirement: "overflows",
            })?;
        match flavor {
            Flavor::Quadratic if sum.rem_euclid(4) != 0 => {
                return Err(PatternError::Sum {
                    flavor,
                    sum,
                    requirement: "is not divisible by 4",
                })
            }
            Flavor::Quadratic if sum < -4 => {
                return Err(PatternError::Sum {
                    flavor,
                    sum,
                    requirement: "is below -4",
                })
            }
            Flavor::Abelian if sum % 2 != 0 => {
                return Err(PatternError::Sum {
                    flavor,
                    sum,
                    requirement: "is odd",
                })
            }
            _ => {}
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Pattern { flavor, orders })
    }

    pub fn quadratic(orders: impl IntoIterator<Item = i64>) -> Result<Self, PatternError> {
        Self::new(Flavor::Quadratic, orders)
    }

    pub fn abelian(orders: impl IntoIterator<Item = i64>) -> Result<Self, PatternError> {
        Self::new(Flavor::Abelian, orders)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Orders in canonical non-increasing order.
    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Number of entries `n`, marked points included.
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.orders.iter().sum()
    }

    pub fn marked_points(&self) -> usize {
        self.orders.iter().filter(|&&k| k == 0).count()
    }

    /// The same pattern with every order-0 entry removed.
    pub fn without_marked_points(&self) -> Pattern {
        Pattern {
            flavor: self.flavor,
            orders: self.orders.iter().copied().filter(|&k| k != 0).collect(),
        }
    }

    pub(crate) fn expect_flavor(&self, expected: Flavor) -> Result<(), PatternError> {
        if self.flavor == expected {
            Ok(())
        } else {
            Err(PatternError::Flavor {
                expected,
                found: self.flavor,
            })
        }
    }

    /// Genus from the Gauss–Bonnet sum rule: `Σk = 4g-4` (quadratic) or
    /// `Σk = 2g-2` (Abelian).
    pub fn genus(&self) -> i64 {
        match self.flavor {
            Flavor::Quadratic => (self.sum() + 4) / 4,
            Flavor::Abelian => (self.sum() + 2) / 2,
        }
    }

    /// Complex dimension of the stratum: `2g+n-2` for quadratic differentials,
    /// `2g+n-1` for Abelian ones.
    pub fn dimension(&self) -> i64 {
        let n = self.len() as i64;
        match self.flavor {
            Flavor::Quadratic => 2 * self.genus() + n - 2,
            Flavor::Abelian => 2 * self.genus() + n - 1,
        }
    }

    /// Whether the quadratic stratum is non-empty.
    ///
    /// Exactly `Q()`, `Q(1,-1)`, `Q(4)` and `Q(3,1)` are empty; marked points
    /// are ignored in the comparison.
    pub fn is_nonempty(&self) -> Result<bool, PatternError> {
        self.expect_flavor(Flavor::Quadratic)?;
        let stripped = self.without_marked_points();
        let empty = matches!(stripped.orders(), [] | [1, -1] | [4] | [3, 1]);
        Ok(!empty)
    }

    /// Connectedness facts known for quadratic strata. Abelian patterns and
    /// empty strata report [`Connectedness::Unknown`].
    pub fn connectedness(&self) -> Connectedness {
        if self.flavor != Flavor::Quadratic || self.is_nonempty() != Ok(true) {
            return Connectedness::Unknown;
        }
        let stripped = self.without_marked_points();
        if stripped.sum() == -4 {
            return Connectedness::Connected;
        }
        match stripped.orders() {
            [12] | [9, -1] => Connectedness::KnownMultiComponent(2),
            _ => Connectedness::Unknown,
        }
    }

    pub fn facts(&self) -> StratumFacts {
        StratumFacts {
            genus: self.genus(),
            dimension: self.dimension(),
            nonempty: self.is_nonempty().ok(),
            connectedness: self.connectedness(),
        }
    }

    /// Orders joined by commas without exponent collapsing, in the given
    /// direction.
    pub fn expanded_orders(&self, ascending: bool) -> String {
        let mut orders = self.orders.clone();
        if ascending {
            orders.reverse();
        }
        orders
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.flavor
            .cmp(&other.flavor)
            .then_with(|| self.orders.cmp(&other.orders))
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.flavor.symbol())?;
        let mut first = true;
        for run in self.orders.chunk_by(|a, b| a == b) {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            match run.len() {
                1 => write!(f, "{}", run[0])?,
                count => write!(f, "{}^{}", run[0], count)?,
            }
        }
        f.write_str(")")
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (flavor, orders) = Parser::new(text).pattern()?;
        Pattern::new(flavor, orders)
    }
}

/// Parses stratum notation such as `Q(1^4,8,2,3^2)` or `H(2,4)`.
pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    text.parse()
}

/// Canonical text form; exponents collapsed and orders non-increasing.
pub fn format_pattern(pattern: &Pattern) -> String {
    pattern.to_string()
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, PatternError> {
        Err(PatternError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PatternError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn pattern(&mut self) -> Result<(Flavor, Vec<i64>), PatternError> {
        let flavor = match self.peek() {
            Some('Q') => Flavor::Quadratic,
            Some('H') => Flavor::Abelian,
            Some(c) => return self.error(format!("expected 'Q' or 'H', found '{c}'")),
            None => return self.error("empty input"),
        };
        self.pos += 1;
        self.expect('(')?;
        let mut orders = Vec::new();
        if !self.eat(')') && !(self.eat('∅') && self.eat(')')) {
            loop {
                self.entry(&mut orders)?;
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        if let Some(c) = self.peek() {
            return self.error(format!("unexpected trailing '{c}'"));
        }
        Ok((flavor, orders))
    }

    fn entry(&mut self, orders: &mut Vec<i64>) -> Result<(), PatternError> {
        let negative = self.eat('-');
        let start = self.pos;
        let Some(magnitude) = self.digits() else {
            return self.error("expected an integer order");
        };
        let order = i64::try_from(magnitude)
            .ok()
            .map(|m| if negative { -m } else { m });
        let Some(order) = order else {
            self.pos = start;
            return self.error("order out of range");
        };
        let count = if self.eat('^') {
            let exp_start = self.pos;
            match self.digits() {
                Some(0) => {
                    self.pos = exp_start;
                    return self.error("exponent must be positive");
                }
                Some(e) if e > MAX_EXPONENT => {
                    self.pos = exp_start;
                    return self.error(format!("exponent exceeds {MAX_EXPONENT}"));
                }
                Some(e) => e as usize,
                None => return self.error("expected a positive exponent after '^'"),
            }
        } else {
            1
        };
        orders.extend(std::iter::repeat_n(order, count));
        Ok(())
    }

    fn digits(&mut self) -> Option<u64> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        let value = rest[..len].parse::<u64>().ok()?;
        self.pos += len;
        Some(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "components")]
pub enum Connectedness {
    Connected,
    KnownMultiComponent(u32),
    Unknown,
}

impl fmt::Display for Connectedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connectedness::Connected => f.write_str("connected"),
            Connectedness::KnownMultiComponent(n) => write!(f, "{n} components"),
            Connectedness::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumFacts {
    pub genus: i64,
    pub dimension: i64,
    /// `None` for Abelian patterns, where non-emptiness is not tracked.
    pub nonempty: Option<bool>,
    pub connectedness: Connectedness,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(text: &str) -> Pattern {
        text.parse().unwrap()
    }

    #[test]
    fn exponent_notation_expands() {
        let p = q("Q(1^4,8,2,3^2)");
        assert_eq!(p.orders(), &[8, 3, 3, 2, 1, 1, 1, 1]);
        assert_eq!(p.flavor(), Flavor::Quadratic);
        assert_eq!(p.to_string(), "Q(8,3^2,2,1^4)");
    }

    #[test]
    fn whitespace_and_empty_patterns() {
        assert_eq!(q(" H ( 0 ) ").orders(), &[0]);
        assert_eq!(q("Q()"), Pattern::quadratic([]).unwrap());
        assert_eq!(q("Q(∅)"), q("Q()"));
        assert_eq!(Pattern::abelian([]).unwrap().to_string(), "H()");
        assert_eq!(q("H()").genus(), 1);
        assert_eq!(q("Q( -1 , 9 )").to_string(), "Q(9,-1)");
    }

    #[test]
    fn error_categories_are_distinct() {
        assert_eq!(parse_pattern("Q(4,-1)").unwrap_err().category(), "sum");
        assert_eq!(parse_pattern("Q(-2,6)").unwrap_err().category(), "order");
        assert_eq!(parse_pattern("H(-1,3)").unwrap_err().category(), "order");
        assert_eq!(parse_pattern("H(1)").unwrap_err().category(), "sum");
        assert_eq!(parse_pattern("Q(-1^12,4)").unwrap_err().category(), "sum");
        for bad in ["", "Q", "Q(", "Q(1,", "X(1)", "Q(1)x", "Q(1^0,3)", "Q(^2)", "Q(1,,3)"] {
            assert_eq!(parse_pattern(bad).unwrap_err().category(), "syntax", "{bad:?}");
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        match parse_pattern("Q(1,3]").unwrap_err() {
            PatternError::Syntax { position, .. } => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(q("Q(-1,9)").genus(), 3);
        assert_eq!(q("Q(-1,-1,-1,-1)").genus(), 0);
        assert_eq!(q("H(2,4)").genus(), 4);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(q("Q(1,1,1,1)").dimension(), 6);
        assert_eq!(q("Q(-1,9)").dimension(), 6);
        assert_eq!(q("H(2,2)").dimension(), 7);
        // marked points count toward n
        assert_eq!(q("Q(-1,9,0)").dimension(), 7);
    }

    #[test]
    fn masur_smillie_exceptions() {
        assert!(!q("Q(1,3)").is_nonempty().unwrap());
        assert!(!q("Q(1,-1)").is_nonempty().unwrap());
        assert!(!q("Q(4)").is_nonempty().unwrap());
        assert!(!q("Q()").is_nonempty().unwrap());
        assert!(!q("Q(4,0,0)").is_nonempty().unwrap());
        assert!(q("Q(-1,9)").is_nonempty().unwrap());
        assert!(q("Q(-1^4)").is_nonempty().unwrap());
        assert!(matches!(
            q("H(2)").is_nonempty(),
            Err(PatternError::Flavor { .. })
        ));
    }

    #[test]
    fn connectedness_examples() {
        assert_eq!(q("Q(-1^4)").connectedness(), Connectedness::Connected);
        assert_eq!(q("Q(1,-1^5)").connectedness(), Connectedness::Connected);
        assert_eq!(
            q("Q(12)").connectedness(),
            Connectedness::KnownMultiComponent(2)
        );
        assert_eq!(
            q("Q(-1,9)").connectedness(),
            Connectedness::KnownMultiComponent(2)
        );
        assert_eq!(q("Q(1^4)").connectedness(), Connectedness::Unknown);
        assert_eq!(q("H(4)").connectedness(), Connectedness::Unknown);
    }

    #[test]
    fn facts_json_shape() {
        let json = serde_json::to_string(&q("Q(12)").facts()).unwrap();
        assert_eq!(
            json,
            r#"{"genus":4,"dimension":7,"nonempty":true,"connectedness":{"kind":"known_multi_component","components":2}}"#
        );
    }
}

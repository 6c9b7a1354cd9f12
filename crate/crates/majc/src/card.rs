use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Add;

/// Symbolic cardinality: an exact finite count or the first infinite
/// cardinal. The derived order puts every finite value below `Aleph0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Card {
    Finite(usize),
    Aleph0,
}

impl Card {
    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }

    pub fn as_finite(self) -> Option<usize> {
        match self {
            Card::Finite(n) => Some(n),
            Card::Aleph0 => None,
        }
    }

    /// Truncated subtraction. An infinite count stays infinite under any
    /// finite removal.
    pub fn saturating_sub_finite(self, k: usize) -> Card {
        match self {
            Card::Finite(n) => Card::Finite(n.saturating_sub(k)),
            Card::Aleph0 => Card::Aleph0,
        }
    }
}

impl Add for Card {
    type Output = Card;

    fn add(self, rhs: Card) -> Card {
        match (self, rhs) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a.saturating_add(b)),
            _ => Card::Aleph0,
        }
    }
}

impl From<usize> for Card {
    fn from(n: usize) -> Card {
        Card::Finite(n)
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Aleph0 => write!(f, "aleph0"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_orders_by_value() {
        assert!(Card::Finite(0) < Card::Finite(1));
        assert!(Card::Finite(7) == Card::Finite(7));
        assert!(Card::Finite(10) < Card::Finite(11));
    }

    #[test]
    fn aleph0_tops_every_finite() {
        assert!(Card::Finite(usize::MAX) < Card::Aleph0);
        assert!(Card::Aleph0 == Card::Aleph0);
    }

    #[test]
    fn aleph0_absorbs_addition() {
        assert_eq!(Card::Aleph0 + Card::Finite(3), Card::Aleph0);
        assert_eq!(Card::Finite(3) + Card::Aleph0, Card::Aleph0);
        assert_eq!(Card::Finite(2) + Card::Finite(5), Card::Finite(7));
    }

    #[test]
    fn subtraction_truncates() {
        assert_eq!(Card::Finite(3).saturating_sub_finite(5), Card::Finite(0));
        assert_eq!(Card::Aleph0.saturating_sub_finite(1 << 20), Card::Aleph0);
    }
}

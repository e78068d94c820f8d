//! Strata of abelian and quadratic differentials: signature validation,
//! derived genus, and the Kontsevich–Zorich connected-component table.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Whether a stratum parameterizes abelian differentials (1-forms) or
/// quadratic differentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffKind {
    Abelian,
    Quadratic,
}

impl fmt::Display for DiffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffKind::Abelian => write!(f, "abelian"),
            DiffKind::Quadratic => write!(f, "quadratic"),
        }
    }
}

/// Connected-component labels of a stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentLabel {
    Hyperelliptic,
    Odd,
    Even,
    Nonhyperelliptic,
    Connected,
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentLabel::Hyperelliptic => "hyperelliptic",
            ComponentLabel::Odd => "odd",
            ComponentLabel::Even => "even",
            ComponentLabel::Nonhyperelliptic => "nonhyperelliptic",
            ComponentLabel::Connected => "connected",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratumError {
    #[error("signature must contain at least one order")]
    Empty,
    #[error("order sum {sum} does not yield a nonnegative integer genus for a {kind} stratum")]
    DegreeParity { kind: DiffKind, sum: i64 },
    #[error("order {order} at position {index} is below the allowed minimum {min}")]
    OrderRange { index: usize, order: i64, min: i64 },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// A stratum `H(mu)` or `Q(mu)`: the multiset of zero/pole orders at the
/// markings, together with the genus forced by the degree of the canonical
/// (or bicanonical) divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Stratum {
    kind: DiffKind,
    orders: Vec<i64>,
    #[serde(skip)]
    genus: u32,
}

impl Stratum {
    /// Validates a signature and derives the genus. Abelian orders must be
    /// at least 1, quadratic orders at least -1.
    pub fn new(kind: DiffKind, orders: Vec<i64>) -> Result<Self, StratumError> {
        Self::build(kind, orders, false)
    }

    /// Like [`Stratum::new`], but abelian order-0 entries (marked regular
    /// points) are accepted. Used by the flat-surface constructions, where
    /// a saddle connection may end at a marked point.
    pub fn with_marked_points(kind: DiffKind, orders: Vec<i64>) -> Result<Self, StratumError> {
        Self::build(kind, orders, true)
    }

    fn build(kind: DiffKind, orders: Vec<i64>, allow_marked: bool) -> Result<Self, StratumError> {
        if orders.is_empty() {
            return Err(StratumError::Empty);
        }
        let min = match kind {
            DiffKind::Abelian if allow_marked => 0,
            DiffKind::Abelian => 1,
            DiffKind::Quadratic => -1,
        };
        for (index, &order) in orders.iter().enumerate() {
            if order < min {
                return Err(StratumError::OrderRange { index, order, min });
            }
        }
        let sum: i64 = orders.iter().sum();
        // 2g - 2 for abelian, 4g - 4 for quadratic.
        let modulus = match kind {
            DiffKind::Abelian => 2,
            DiffKind::Quadratic => 4,
        };
        if (sum + modulus) % modulus != 0 || sum + modulus < 0 {
            return Err(StratumError::DegreeParity { kind, sum });
        }
        let genus = ((sum + modulus) / modulus) as u32;
        Ok(Stratum { kind, orders, genus })
    }

    pub fn kind(&self) -> DiffKind {
        self.kind
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Sum of the orders: `2g - 2` (abelian) or `4g - 4` (quadratic).
    pub fn degree(&self) -> i64 {
        self.orders.iter().sum()
    }

    /// True iff the spin parity is defined: an abelian signature with even
    /// entries only.
    pub fn spin_defined(&self) -> bool {
        self.kind == DiffKind::Abelian && self.orders.iter().all(|o| o % 2 == 0)
    }

    /// The Kontsevich–Zorich component table, as an explicit case list on
    /// `(g, signature shape)`. Only abelian strata with genuine zeros are
    /// classified.
    pub fn components(&self) -> Result<BTreeSet<ComponentLabel>, StratumError> {
        if self.kind != DiffKind::Abelian {
            return Err(StratumError::Unsupported(
                "component classification is only implemented for abelian strata".into(),
            ));
        }
        if self.orders.iter().any(|&o| o < 1) {
            return Err(StratumError::Unsupported(
                "component classification requires every order to be at least 1".into(),
            ));
        }
        let g = self.genus as i64;
        let single_minimal = self.orders.len() == 1; // mu = (2g-2)
        let equal_pair = self.orders.len() == 2 && self.orders[0] == g - 1 && self.orders[1] == g - 1;
        let all_even = self.orders.iter().all(|o| o % 2 == 0);

        use ComponentLabel::*;
        let labels: &[ComponentLabel] = match g {
            0 | 1 => &[Connected],
            2 => &[Connected],
            3 => {
                if single_minimal || self.orders == [2, 2] {
                    &[Hyperelliptic, Odd]
                } else {
                    &[Connected]
                }
            }
            _ => {
                if single_minimal {
                    &[Hyperelliptic, Odd, Even]
                } else if equal_pair && g % 2 == 1 {
                    &[Hyperelliptic, Odd, Even]
                } else if equal_pair {
                    &[Hyperelliptic, Nonhyperelliptic]
                } else if all_even {
                    &[Odd, Even]
                } else {
                    &[Connected]
                }
            }
        };
        Ok(labels.iter().copied().collect())
    }

    /// Whether `label` names a component that exists for this stratum,
    /// counting the small-genus coincidences: in genus 3 the even spin
    /// component of H(4) and H(2,2) coincides with the hyperelliptic one,
    /// and in genus 2 both strata coincide with their hyperelliptic
    /// component.
    pub fn admits_label(&self, label: ComponentLabel) -> bool {
        let Ok(components) = self.components() else {
            return false;
        };
        if components.contains(&label) {
            return true;
        }
        let g = self.genus as i64;
        let single_minimal = self.orders.len() == 1;
        let equal_pair = self.orders.len() == 2 && self.orders[0] == g - 1 && self.orders[1] == g - 1;
        match label {
            ComponentLabel::Hyperelliptic => single_minimal || equal_pair,
            ComponentLabel::Odd | ComponentLabel::Even => self.spin_defined(),
            _ => false,
        }
    }
}

impl<'de> Deserialize<'de> for Stratum {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            kind: DiffKind,
            orders: Vec<i64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Stratum::with_marked_points(raw.kind, raw.orders).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            DiffKind::Abelian => "H",
            DiffKind::Quadratic => "Q",
        };
        let orders: Vec<String> = self.orders.iter().map(|o| o.to_string()).collect();
        write!(f, "{letter}({})", orders.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(orders: &[i64]) -> Stratum {
        Stratum::new(DiffKind::Abelian, orders.to_vec()).unwrap()
    }

    #[test]
    fn genus_derivation() {
        assert_eq!(h(&[2, 2]).genus(), 3);
        assert_eq!(h(&[2]).genus(), 2);
        assert_eq!(
            Stratum::new(DiffKind::Quadratic, vec![2, -1, -1]).unwrap().genus(),
            1
        );
    }

    #[test]
    fn rejects_odd_abelian_degree() {
        assert!(matches!(
            Stratum::new(DiffKind::Abelian, vec![3]),
            Err(StratumError::DegreeParity { .. })
        ));
    }

    #[test]
    fn rejects_bad_quadratic_degree() {
        assert!(matches!(
            Stratum::new(DiffKind::Quadratic, vec![2, -1]),
            Err(StratumError::DegreeParity { .. })
        ));
    }

    #[test]
    fn order_zero_requires_flag() {
        assert!(matches!(
            Stratum::new(DiffKind::Abelian, vec![0, 2]),
            Err(StratumError::OrderRange { .. })
        ));
        let s = Stratum::with_marked_points(DiffKind::Abelian, vec![0, 2]).unwrap();
        assert_eq!(s.genus(), 2);
    }

    #[test]
    fn empty_signature_rejected() {
        assert!(matches!(
            Stratum::new(DiffKind::Abelian, vec![]),
            Err(StratumError::Empty)
        ));
    }

    #[test]
    fn component_table_spot_checks() {
        use ComponentLabel::*;
        let set = |labels: &[ComponentLabel]| labels.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(h(&[4]).components().unwrap(), set(&[Hyperelliptic, Odd]));
        assert_eq!(h(&[1, 1]).components().unwrap(), set(&[Connected]));
        assert_eq!(h(&[6]).components().unwrap(), set(&[Hyperelliptic, Odd, Even]));
        assert_eq!(
            h(&[3, 3]).components().unwrap(),
            set(&[Hyperelliptic, Nonhyperelliptic])
        );
        assert_eq!(h(&[2, 4]).components().unwrap(), set(&[Odd, Even]));
        assert_eq!(h(&[2]).components().unwrap(), set(&[Connected]));
    }

    #[test]
    fn components_rejects_quadratic() {
        let q = Stratum::new(DiffKind::Quadratic, vec![2, 2]).unwrap();
        assert!(matches!(q.components(), Err(StratumError::Unsupported(_))));
    }

    #[test]
    fn spin_defined_iff_all_even() {
        assert!(h(&[2, 2]).spin_defined());
        assert!(!h(&[1, 1]).spin_defined());
        assert!(h(&[2, 4, 6]).spin_defined());
    }

    #[test]
    fn component_count_small() {
        // every valid abelian stratum has 1, 2 or 3 components
        for orders in [
            vec![2],
            vec![1, 1],
            vec![4],
            vec![2, 2],
            vec![1, 1, 2],
            vec![6],
            vec![3, 3],
            vec![2, 2, 2],
            vec![8],
            vec![4, 4],
            vec![5, 3],
            vec![7, 1],
            vec![2, 2, 2, 2],
            vec![10],
        ] {
            let n = h(&orders).components().unwrap().len();
            assert!((1..=3).contains(&n), "H({orders:?}) gave {n} labels");
        }
    }

    #[test]
    fn admits_label_coincidences() {
        assert!(h(&[4]).admits_label(ComponentLabel::Even));
        assert!(h(&[2]).admits_label(ComponentLabel::Hyperelliptic));
        assert!(h(&[1, 1]).admits_label(ComponentLabel::Hyperelliptic));
        assert!(!h(&[1, 1]).admits_label(ComponentLabel::Odd));
        assert!(!h(&[2, 4]).admits_label(ComponentLabel::Hyperelliptic));
    }

    #[test]
    fn json_round_trip() {
        let s = h(&[2, 2]);
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"kind":"abelian","orders":[2,2]}"#);
        let back: Stratum = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}

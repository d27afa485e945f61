//! Similarity transformations to one-variable (Gelfand-Dyson like) form.
//!
//! Two metrics act on the Fock lattice:
//! `S = (a2^+)^(a1^+ a1 + alpha sigma_+ sigma_-)` and
//! `T = (a2)^(-a1^+ a1 + eta sigma_+ sigma_-)`, each with sign `+-1`.
//! Neither is invertible on a truncated space, so every conjugation identity
//! is checked in multiplication-only form, column by column.

mod generators;
mod metric;

pub use generators::{
    audit_printed_forms, build_transformed_generators, printed_exprs, spinor_basis, transformed_exprs,
    verify_transformed_algebra, verify_unfixed_on_fock, BasisKind, TransformedSet,
};
pub use metric::{build_metric, intertwining_relations, verify_intertwining, IntertwiningRelation, MetricMatrix};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::RealizationKind;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    S,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransformTag {
    pub metric: MetricKind,
    pub sign: Sign,
}

impl TransformTag {
    pub const S_PLUS: TransformTag = TransformTag { metric: MetricKind::S, sign: Sign::Plus };
    pub const S_MINUS: TransformTag = TransformTag { metric: MetricKind::S, sign: Sign::Minus };
    pub const T_PLUS: TransformTag = TransformTag { metric: MetricKind::T, sign: Sign::Plus };
    pub const T_MINUS: TransformTag = TransformTag { metric: MetricKind::T, sign: Sign::Minus };
    pub const ALL: [TransformTag; 4] = [Self::S_PLUS, Self::S_MINUS, Self::T_PLUS, Self::T_MINUS];

    /// The Fock realization this metric maps into one-variable form.
    pub fn source_realization(self) -> RealizationKind {
        match (self.metric, self.sign) {
            (MetricKind::S, Sign::Plus) | (MetricKind::T, Sign::Minus) => RealizationKind::FermA,
            (MetricKind::S, Sign::Minus) | (MetricKind::T, Sign::Plus) => RealizationKind::FermB,
        }
    }

    pub fn label(self) -> &'static str {
        match (self.metric, self.sign) {
            (MetricKind::S, Sign::Plus) => "s+1",
            (MetricKind::S, Sign::Minus) => "s-1",
            (MetricKind::T, Sign::Plus) => "t+1",
            (MetricKind::T, Sign::Minus) => "t-1",
        }
    }
}

impl fmt::Display for TransformTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TransformTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase();
        TransformTag::ALL
            .into_iter()
            .find(|t| t.label() == norm || t.label().trim_end_matches('1') == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown transform tag '{s}' (expected s+1, s-1, t+1, t-1)")))
    }
}

impl Serialize for TransformTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for TransformTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_parse_and_print() {
        for tag in TransformTag::ALL {
            assert_eq!(tag.label().parse::<TransformTag>().unwrap(), tag);
        }
        assert_eq!("T-".parse::<TransformTag>().unwrap(), TransformTag::T_MINUS);
        assert!("u+1".parse::<TransformTag>().is_err());
    }
}

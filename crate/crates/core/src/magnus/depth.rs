use std::fmt;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::series::{Monomial, NcSeries};
use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::word::ReducedWord;

pub const DEFAULT_TRUNCATION: usize = 13;

/// Position of a word in the lower central series: `w ∈ γ_d \ γ_{d+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Depth {
    Exact(u32),
    /// No nonzero term up to the truncation; the depth is at least this.
    AtLeast(u32),
    /// The identity lies in every term of the series.
    Infinite,
}

impl Depth {
    /// Largest `n` for which `w ∈ γ_n` is certified.
    pub fn lower_bound(self) -> u32 {
        match self {
            Depth::Exact(d) | Depth::AtLeast(d) => d,
            Depth::Infinite => u32::MAX,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            Depth::Exact(d) => Some(d),
            _ => None,
        }
    }

    pub fn kind(self) -> &'static str {
        match self {
            Depth::Exact(_) => "exact",
            Depth::AtLeast(_) => "at_least",
            Depth::Infinite => "infinite",
        }
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Exact(d) => write!(f, "{d}"),
            Depth::AtLeast(d) => write!(f, ">={d}"),
            Depth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Depth {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Depth", 2)?;
        st.serialize_field("kind", self.kind())?;
        match self {
            Depth::Exact(d) | Depth::AtLeast(d) => st.serialize_field("value", d)?,
            Depth::Infinite => st.serialize_field("value", &Option::<u32>::None)?,
        }
        st.end()
    }
}

/// Depth together with the lowest-degree nonzero part of the expansion.
#[derive(Clone, Debug)]
pub struct DepthProfile<C = BigInt> {
    pub depth: Depth,
    pub terms: Vec<(Monomial, C)>,
}

pub fn lcs_depth(w: &ReducedWord, truncation: usize) -> Result<Depth> {
    Ok(lcs_depth_profile::<BigInt>(w, truncation)?.depth)
}

/// Computes the depth from the Magnus expansion truncated at `truncation`.
///
/// Relies on the fact that for a free group `w ∈ γ_n` exactly when
/// `expand(w) − 1` has no term of degree `< n`.
pub fn lcs_depth_profile<C: Coefficient>(w: &ReducedWord, truncation: usize) -> Result<DepthProfile<C>> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation degree must be at least 1".into()));
    }
    if w.is_identity() {
        return Ok(DepthProfile {
            depth: Depth::Infinite,
            terms: Vec::new(),
        });
    }
    let s = NcSeries::<C>::expand(w, truncation)?;
    Ok(match s.min_positive_degree() {
        Some(d) => DepthProfile {
            depth: Depth::Exact(d as u32),
            terms: s.terms_of_degree(d),
        },
        None => DepthProfile {
            depth: Depth::AtLeast(truncation as u32 + 1),
            terms: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{commutator, conjugate, reduce, Letter};
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(lcs_depth(&w("a"), 4).unwrap(), Depth::Exact(1));
        assert_eq!(lcs_depth(&w("abAB"), 4).unwrap(), Depth::Exact(2));
        assert_eq!(lcs_depth(&w("1"), 4).unwrap(), Depth::Infinite);
        // [[a,b],a] is a basic commutator of weight 3.
        assert_eq!(lcs_depth(&w("abABabaBAA"), 4).unwrap(), Depth::Exact(3));
        assert_eq!(lcs_depth(&w("abABabaBAA"), 2).unwrap(), Depth::AtLeast(3));
        assert!(lcs_depth(&w("a"), 0).is_err());
    }

    #[test]
    fn profile_reports_leading_terms() {
        let p = lcs_depth_profile::<i64>(&w("abAB"), 3).unwrap();
        let shown: Vec<String> = p.terms.iter().map(|(m, c)| format!("{c}{m}")).collect();
        assert_eq!(shown, vec!["1XaXb", "-1XbXa"]);
    }

    #[test]
    fn serialized_shape() {
        let j = serde_json::to_value(Depth::Exact(3)).unwrap();
        assert_eq!(j, serde_json::json!({"kind": "exact", "value": 3}));
        let j = serde_json::to_value(Depth::Infinite).unwrap();
        assert_eq!(j, serde_json::json!({"kind": "infinite", "value": null}));
    }

    fn word(max: usize) -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec((0usize..4).prop_map(Letter::from_index), 0..max)
            .prop_map(|v| reduce(&v))
    }

    const D: usize = 6;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn expansion_is_multiplicative(u in word(10), v in word(10)) {
            let lhs = NcSeries::<i64>::expand(&u.mul(&v), D).unwrap();
            let rhs = NcSeries::<i64>::expand(&u, D).unwrap()
                .mul(&NcSeries::<i64>::expand(&v, D).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn depth_laws(u in word(8), v in word(8), x in word(8)) {
            let du = lcs_depth(&u, D).unwrap();
            let dv = lcs_depth(&v, D).unwrap();
            let prod = lcs_depth(&u.mul(&v), D).unwrap();
            prop_assert!(prod.lower_bound() >= du.lower_bound().min(dv.lower_bound()));
            let c = lcs_depth(&commutator(&u, &v), D).unwrap();
            let sum = du.lower_bound().saturating_add(dv.lower_bound());
            prop_assert!(c.lower_bound() >= sum.min(D as u32 + 1));
            prop_assert_eq!(lcs_depth(&conjugate(&u, &x), D).unwrap(), du);
            if let Depth::Exact(d) = du {
                prop_assert!(u.len() >= d as usize);
            }
        }
    }
}

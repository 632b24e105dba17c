//! JSON documents for polytopes and comma-separated numeric arguments.

use serde::{Deserialize, Serialize};

use crate::catalog::Fixture;
use crate::error::{Error, Result};
use crate::polyalg::{parse_rational, Rational, Scalar};
use crate::polytope::{Facet, LatticePolytope};
use crate::precision::check_weights;

mod opt_rational_vec {
    use crate::polyalg::{format_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(format_rational)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|raw| {
                raw.iter()
                    .map(|s| parse_rational(s).map_err(D::Error::custom))
                    .collect()
            })
            .transpose()
    }
}

/// `{"dim", "facets", "weights"?, "labels"?, "name"?}`. `labels`, when
/// present, fixes the lattice-point order and `weights` follow that order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub facets: Vec<Facet>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational_vec"
    )]
    pub weights: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<i64>>>,
}

impl PolytopeDoc {
    pub fn from_fixture(f: &Fixture) -> Self {
        PolytopeDoc {
            name: Some(f.name.clone()),
            dim: f.polytope.dim(),
            facets: f.polytope.facets().to_vec(),
            weights: Some(f.weights.clone()),
            labels: Some(f.polytope.lattice_points().to_vec()),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameters(format!("polytope JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polytope document serializes")
    }

    pub fn polytope(&self) -> Result<LatticePolytope> {
        if let Some(f) = self.facets.iter().find(|f| f.normal.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.normal.len(),
            });
        }
        match &self.labels {
            Some(order) => LatticePolytope::with_point_order(self.facets.clone(), order.clone()),
            None => LatticePolytope::from_facets(self.facets.clone()),
        }
    }

    /// The polytope and its validated weights, if the document has any.
    pub fn load(&self) -> Result<(LatticePolytope, Option<Vec<Rational>>)> {
        let p = self.polytope()?;
        if let Some(w) = &self.weights {
            check_weights(&p, w)?;
        }
        Ok((p, self.weights.clone()))
    }
}

/// Parses `"3,1/2,0.25"` into exact rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| Error::InvalidParameters(e.to_string())))
        .collect()
}

/// Parses `"1.0,2.5,1/3"` into floats.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .or_else(|| parse_rational(t).ok().map(|r| r.as_f64()))
                .ok_or_else(|| Error::InvalidParameters(format!("cannot parse {t:?} as a number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polyalg::{rat, ratio};

    #[test]
    fn fixture_roundtrip() {
        for f in [
            catalog::trapezoid(1, 1, 1).unwrap(),
            catalog::graphical(),
            catalog::square(),
        ] {
            let doc = PolytopeDoc::from_fixture(&f);
            let back = PolytopeDoc::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let (p, w) = back.load().unwrap();
            assert_eq!(p, f.polytope);
            assert_eq!(w.unwrap(), f.weights);
        }
    }

    #[test]
    fn minimal_document() {
        let doc = PolytopeDoc::from_json(
            r#"{"dim":1,"facets":[{"normal":[1],"offset":0},{"normal":[-1],"offset":2}],"weights":["1","2","1"]}"#,
        )
        .unwrap();
        let (p, w) = doc.load().unwrap();
        assert_eq!(p.num_points(), 3);
        assert_eq!(w.unwrap(), vec![rat(1), rat(2), rat(1)]);
        assert!(doc.to_json().contains("\"2\""));
    }

    #[test]
    fn bad_documents() {
        assert!(PolytopeDoc::from_json(r#"{"dim":1}"#).is_err());
        assert!(PolytopeDoc::from_json(r#"{"dim":1,"facets":[],"extra":1}"#).is_err());
        let wrong_dim = PolytopeDoc::from_json(
            r#"{"dim":2,"facets":[{"normal":[1],"offset":0},{"normal":[-1],"offset":2}]}"#,
        )
        .unwrap();
        assert!(matches!(
            wrong_dim.load(),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad_w = PolytopeDoc::from_json(
            r#"{"dim":1,"facets":[{"normal":[1],"offset":0},{"normal":[-1],"offset":2}],"weights":["1","-1","1"]}"#,
        )
        .unwrap();
        assert!(matches!(bad_w.load(), Err(Error::InvalidWeights(_))));
        assert!(PolytopeDoc::from_json(
            r#"{"dim":1,"facets":[{"normal":[1],"offset":0}],"weights":["x"]}"#
        )
        .is_err());
    }

    #[test]
    fn list_parsing() {
        assert_eq!(
            parse_rational_list("3, 1/2,0.25").unwrap(),
            vec![rat(3), ratio(1, 2), ratio(1, 4)]
        );
        assert!(parse_rational_list("1,,2").is_err());
        assert_eq!(parse_f64_list("1.0,2.5,1/4").unwrap(), vec![1.0, 2.5, 0.25]);
        assert!(parse_f64_list("a").is_err());
    }
}

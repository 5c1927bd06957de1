//! JSON wire formats for algebra elements.
//!
//! Complex numbers serialize as two-element arrays `[re, im]`. A circulant
//! element is `{"p": n, "coeffs": [[re, im], ...]}` and a dense operator is
//! `{"p": n, "rows": [[[re, im], ...], ...]}`. `AlgebraValue` is untagged:
//! the `coeffs`/`rows` key decides the variant.

use super::circulant::CirculantElement;
use super::dense::DenseOperator;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct CirculantRepr {
    p: usize,
    coeffs: Vec<(f64, f64)>,
}

impl Serialize for CirculantElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CirculantRepr {
            p: self.p(),
            coeffs: self.coeffs().iter().map(|c| (c.re, c.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CirculantElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CirculantRepr::deserialize(deserializer)?;
        if repr.coeffs.len() != repr.p {
            return Err(D::Error::custom(format!(
                "circulant element declares p={} but has {} coefficients",
                repr.p,
                repr.coeffs.len()
            )));
        }
        CirculantElement::new(repr.coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct DenseRepr {
    p: usize,
    rows: Vec<Vec<(f64, f64)>>,
}

impl Serialize for DenseOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DenseRepr {
            p: self.p(),
            rows: self
                .rows()
                .iter()
                .map(|row| row.iter().map(|c| (c.re, c.im)).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DenseOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DenseRepr::deserialize(deserializer)?;
        if repr.rows.len() != repr.p {
            return Err(D::Error::custom(format!(
                "dense operator declares p={} but has {} rows",
                repr.p,
                repr.rows.len()
            )));
        }
        DenseOperator::from_rows(
            repr.rows
                .iter()
                .map(|row| row.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
                .collect(),
        )
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use crate::algebra::{AlgebraValue, CirculantElement, DenseOperator};
    use num_complex::Complex64;

    #[test]
    fn circulant_json_shape() {
        let x = CirculantElement::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -2.0)])
            .unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"p":2,"coeffs":[[1.0,0.0],[0.5,-2.0]]}"#);
        let back: CirculantElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn dense_json_shape() {
        let m = DenseOperator::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"p":2,"rows":[[[1.0,0.0],[2.0,0.0]],[[3.0,0.0],[4.0,0.0]]]}"#);
        let back: DenseOperator = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn algebra_value_untagged_round_trip() {
        let c = AlgebraValue::Circulant(CirculantElement::from_real(&[1.0, 2.0, 3.0]).unwrap());
        let d = AlgebraValue::Dense(DenseOperator::identity(2));
        for v in [c, d] {
            let json = serde_json::to_string(&v).unwrap();
            let back: AlgebraValue = serde_json::from_str(&json).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let bad = r#"{"p":3,"coeffs":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<CirculantElement>(bad).is_err());
    }
}

//! `{"rows": m, "cols": n, "data": [[re, im], ...]}` with row-major data.
//!
//! Floats are written in shortest round-trip form and parsed with correct
//! rounding, so a write/read cycle is bit-exact.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ComplexMatrix, C64};
use crate::error::Result;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            data: self.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let data = raw.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::from_vec(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}

impl ComplexMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite matrix always serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn schema_shape() {
        let m = ComplexMatrix::from_rows(&[vec![C64::new(1.0, -0.5), C64::new(0.0, 2.0)]]).unwrap();
        assert_eq!(
            m.to_json(),
            r#"{"rows":1,"cols":2,"data":[[1.0,-0.5],[0.0,2.0]]}"#
        );
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(ComplexMatrix::from_json(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
        assert!(ComplexMatrix::from_json(r#"{"rows":1,"cols":1,"data":[[1e999,0]]}"#).is_err());
        assert!(ComplexMatrix::from_json(r#"{"rows":1,"cols":1}"#).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(
            rows in 1usize..4,
            cols in 1usize..4,
            seed in proptest::collection::vec(
                (any::<f64>().prop_filter("finite", |x| x.is_finite()),
                 any::<f64>().prop_filter("finite", |x| x.is_finite())), 16),
        ) {
            let data: Vec<C64> = seed.iter().take(rows * cols).map(|&(a, b)| C64::new(a, b)).collect();
            let m = ComplexMatrix::from_vec(rows, cols, data).unwrap();
            let back = ComplexMatrix::from_json(&m.to_json()).unwrap();
            for (x, y) in m.as_slice().iter().zip(back.as_slice()) {
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}

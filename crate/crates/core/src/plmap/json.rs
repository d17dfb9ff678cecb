use serde::{Deserialize, Serialize};

use super::{Carrier, PLMap};
use crate::dyadic::Dyadic;
use crate::error::Result;

/// Serialized form of a [`PLMap`]: the carrier and its `(x, y)` pieces as
/// fraction strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlMapJson {
    pub carrier: Carrier,
    pub breakpoints: Vec<(Dyadic, Dyadic)>,
}

impl From<&PLMap> for PlMapJson {
    fn from(m: &PLMap) -> Self {
        PlMapJson { carrier: m.carrier(), breakpoints: m.pieces() }
    }
}

impl PlMapJson {
    pub fn to_map(&self) -> Result<PLMap> {
        PLMap::from_points(self.carrier, self.breakpoints.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let q = Dyadic::q;
        let m = PLMap::from_points(Carrier::Circle, vec![(q(0, 1), q(1, 2)), (q(1, 2), q(3, 4)), (q(3, 4), q(0, 1))])
            .unwrap();
        let j = serde_json::to_string(&PlMapJson::from(&m)).unwrap();
        let back: PlMapJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_map().unwrap(), m);
        assert!(j.contains("\"3/4\""));
    }
}

//! Distribution and quantity measurement.
//!
//! A distribution model places a value on a normal curve for its attribute
//! space and reports the measurement words of the band it lands in: the
//! center band ("average", "proper"), one step out ("a little bit", "-er"),
//! two steps out ("extremely", "-est") and beyond the last cutoff ("never",
//! "beyond"). Each side of the curve has its own words.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Standard-deviation cutoffs between bands.
pub const DEFAULT_CUTOFFS: [f64; 3] = [1.0, 2.0, 3.0];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasurementError {
    #[error("sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("cutoffs must be positive and strictly increasing")]
    InvalidCutoffs,
    #[error("no measurement words for band {0}")]
    MissingBand(i8),
    #[error("unknown quantity word {0:?}")]
    UnknownQuantityWord(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandWords {
    pub band: i8,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionModelDoc", into = "DistributionModelDoc")]
pub struct DistributionModel {
    space: String,
    mu: f64,
    sigma: f64,
    unit: Option<String>,
    cutoffs: [f64; 3],
    bands: BTreeMap<i8, Vec<String>>,
}

/// On-disk form of a distribution model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionModelDoc {
    pub space: String,
    pub mu: f64,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default = "default_cutoffs")]
    pub cutoffs: [f64; 3],
    pub bands: Vec<BandWords>,
}

fn default_cutoffs() -> [f64; 3] {
    DEFAULT_CUTOFFS
}

impl TryFrom<DistributionModelDoc> for DistributionModel {
    type Error = MeasurementError;

    fn try_from(doc: DistributionModelDoc) -> Result<Self, Self::Error> {
        let bands = doc.bands.into_iter().map(|b| (b.band, b.words)).collect();
        DistributionModel::with_cutoffs(doc.space, doc.mu, doc.sigma, doc.cutoffs, bands)
            .map(|m| m.with_unit(doc.unit))
    }
}

impl From<DistributionModel> for DistributionModelDoc {
    fn from(m: DistributionModel) -> Self {
        DistributionModelDoc {
            space: m.space,
            mu: m.mu,
            sigma: m.sigma,
            unit: m.unit,
            cutoffs: m.cutoffs,
            bands: m
                .bands
                .into_iter()
                .map(|(band, words)| BandWords { band, words })
                .collect(),
        }
    }
}

/// Where a value fell and the words describing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured<'a> {
    pub band: i8,
    pub z: f64,
    pub words: &'a [String],
}

impl Measured<'_> {
    /// Preferred word of the band.
    pub fn word(&self) -> &str {
        &self.words[0]
    }
}

impl DistributionModel {
    pub fn new(
        space: impl Into<String>,
        mu: f64,
        sigma: f64,
        bands: BTreeMap<i8, Vec<String>>,
    ) -> Result<Self, MeasurementError> {
        Self::with_cutoffs(space, mu, sigma, DEFAULT_CUTOFFS, bands)
    }

    pub fn with_cutoffs(
        space: impl Into<String>,
        mu: f64,
        sigma: f64,
        cutoffs: [f64; 3],
        bands: BTreeMap<i8, Vec<String>>,
    ) -> Result<Self, MeasurementError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(MeasurementError::InvalidSigma(sigma));
        }
        if !(cutoffs[0] > 0.0 && cutoffs[0] < cutoffs[1] && cutoffs[1] < cutoffs[2]) {
            return Err(MeasurementError::InvalidCutoffs);
        }
        for band in -3..=3 {
            if bands.get(&band).is_none_or(|w| w.is_empty()) {
                return Err(MeasurementError::MissingBand(band));
            }
        }
        Ok(Self {
            space: space.into(),
            mu,
            sigma,
            unit: None,
            cutoffs,
            bands,
        })
    }

    pub fn with_unit(mut self, unit: Option<String>) -> Self {
        self.unit = unit;
        self
    }

    pub fn space(&self) -> &str {
        &self.space
    }

    pub fn unit(&self) -> Option<&str> {
        self.unit.as_deref()
    }

    /// Band index in `-3..=3` for a standardized score.
    pub fn band_for_z(&self, z: f64) -> i8 {
        let magnitude = z.abs();
        let step = if magnitude <= self.cutoffs[0] {
            0
        } else if magnitude <= self.cutoffs[1] {
            1
        } else if magnitude <= self.cutoffs[2] {
            2
        } else {
            3
        };
        if z < 0.0 {
            -step
        } else {
            step
        }
    }

    pub fn measure(&self, value: f64) -> Measured<'_> {
        let z = (value - self.mu) / self.sigma;
        let band = self.band_for_z(z);
        Measured {
            band,
            z,
            words: &self.bands[&band],
        }
    }

    /// The temperature column of the distribution examples, centered on a
    /// comfortable room temperature.
    pub fn temperature(mu: f64, sigma: f64) -> Result<Self, MeasurementError> {
        let words = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        let bands = BTreeMap::from([
            (3, words(&["beyond the limit", "never seen"])),
            (2, words(&["extremely hot"])),
            (1, words(&["hot"])),
            (0, words(&["warm", "cool", "proper"])),
            (-1, words(&["cold"])),
            (-2, words(&["extremely cold"])),
            (-3, words(&["beyond the cognitive", "never heard"])),
        ]);
        Ok(Self::new("temperature", mu, sigma, bands)?.with_unit(Some("°C".into())))
    }
}

/// Result of evaluating a quantity word against a stored quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantityEval {
    /// "any": whether anything is there at all.
    Exists(bool),
    /// "a", "an", numerals: how many are asked for.
    Demand(u64),
}

impl QuantityEval {
    /// Whether the stored quantity meets this evaluation.
    pub fn satisfied_by(&self, qty: u64) -> bool {
        match self {
            QuantityEval::Exists(b) => *b,
            QuantityEval::Demand(n) => *n <= qty,
        }
    }
}

const NUMBER_WORDS: [&str; 21] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
    "nineteen", "twenty",
];

/// Numeric value of a numeral word or digit string.
pub fn numeral(word: &str) -> Option<u64> {
    let w = word.trim().to_lowercase();
    if let Ok(n) = w.parse::<u64>() {
        return Some(n);
    }
    NUMBER_WORDS.iter().position(|n| *n == w).map(|i| i as u64)
}

pub fn eval_quantity(word: &str, qty: u64) -> Result<QuantityEval, MeasurementError> {
    let w = word.trim().to_lowercase();
    match w.as_str() {
        "any" | "some" => Ok(QuantityEval::Exists(qty > 0)),
        "a" | "an" => Ok(QuantityEval::Demand(1)),
        _ => numeral(&w)
            .map(QuantityEval::Demand)
            .ok_or(MeasurementError::UnknownQuantityWord(word.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> DistributionModel {
        DistributionModel::temperature(20.0, 4.0).unwrap()
    }

    #[test]
    fn center_band_is_proper() {
        let m = model();
        let r = m.measure(20.0);
        assert_eq!(r.band, 0);
        assert_eq!(r.word(), "warm");
        assert!(r.words.iter().any(|w| w == "proper"));
    }

    #[test]
    fn two_and_a_half_sigma_is_extremely_hot() {
        // z = (30 - 20) / 4 = 2.5, inside (2, 3]
        let m = model();
        let r = m.measure(30.0);
        assert_eq!(r.z, 2.5);
        assert_eq!(r.band, 2);
        assert_eq!(r.word(), "extremely hot");
    }

    #[test]
    fn far_below_is_beyond_cognition() {
        // z = (0 - 20) / 4 = -5
        let m = model();
        let r = m.measure(0.0);
        assert_eq!(r.band, -3);
        assert_eq!(r.word(), "beyond the cognitive");
    }

    #[test]
    fn cutoff_edges_belong_to_inner_band() {
        let m = model();
        assert_eq!(m.band_for_z(1.0), 0);
        assert_eq!(m.band_for_z(-1.0), 0);
        assert_eq!(m.band_for_z(2.0), 1);
        assert_eq!(m.band_for_z(3.0), 2);
        assert_eq!(m.band_for_z(3.0000001), 3);
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(matches!(
            DistributionModel::temperature(20.0, 0.0),
            Err(MeasurementError::InvalidSigma(_))
        ));
        let partial = BTreeMap::from([(0, vec!["ok".to_string()])]);
        assert!(matches!(
            DistributionModel::new("x", 0.0, 1.0, partial),
            Err(MeasurementError::MissingBand(_))
        ));
    }

    #[test]
    fn quantity_words() {
        assert_eq!(eval_quantity("any", 3), Ok(QuantityEval::Exists(true)));
        assert_eq!(eval_quantity("any", 0), Ok(QuantityEval::Exists(false)));
        assert_eq!(eval_quantity("an", 3), Ok(QuantityEval::Demand(1)));
        assert_eq!(eval_quantity("twelve", 3), Ok(QuantityEval::Demand(12)));
        assert_eq!(eval_quantity("4", 3), Ok(QuantityEval::Demand(4)));
        assert!(!QuantityEval::Demand(4).satisfied_by(3));
        assert_eq!(
            eval_quantity("plenty", 3),
            Err(MeasurementError::UnknownQuantityWord("plenty".into()))
        );
    }

    #[test]
    fn model_document_round_trip() {
        let m = model();
        let json = serde_json::to_string(&m).unwrap();
        let back: DistributionModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}

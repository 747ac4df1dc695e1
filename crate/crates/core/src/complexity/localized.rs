use serde::{Deserialize, Serialize};

use super::ComplexityError;
use crate::model::{FunctionClass, HypothesisId, PopulationOracle};

/// The class re-centred at `center` and cut to the ball of radius `r`: a union
/// of segments `[0, length * u]` with `u` of unit population norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizedClass {
    pub center: HypothesisId,
    /// Coefficients of the centre, used for residuals `center(X) - Y`.
    pub center_coefficients: Vec<f64>,
    /// Unit directions `(f - center) / ||f - center||`, as coefficient vectors.
    pub directions: Vec<Vec<f64>>,
    /// Population distances `||f - center||`.
    pub distances: Vec<f64>,
    /// Segment lengths `min(r, distance)`.
    pub lengths: Vec<f64>,
    pub radius: f64,
}

impl LocalizedClass {
    /// Members at distance zero from the centre are skipped.
    pub fn new(
        class: &FunctionClass,
        oracle: &PopulationOracle,
        center: HypothesisId,
        radius: f64,
    ) -> Result<Self, ComplexityError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ComplexityError::InvalidArgument(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let c = class
            .get(center)
            .ok_or(crate::model::ModelError::UnknownId(center))?;
        let tc = c
            .coefficients()
            .ok_or(crate::model::ModelError::NotLinear(center))?
            .to_vec();
        let mut directions = Vec::new();
        let mut distances = Vec::new();
        for h in class.members() {
            let th = h
                .coefficients()
                .ok_or(crate::model::ModelError::NotLinear(h.id))?;
            let dist = oracle.distance(th, &tc)?;
            if dist > 0.0 {
                directions.push(th.iter().zip(&tc).map(|(a, b)| (a - b) / dist).collect());
                distances.push(dist);
            }
        }
        if directions.is_empty() {
            return Err(ComplexityError::Degenerate(
                "every member coincides with the centre".into(),
            ));
        }
        Self::from_parts(center, tc, directions, distances, radius)
    }

    /// Builds the class directly from unit directions and their distances.
    pub fn from_parts(
        center: HypothesisId,
        center_coefficients: Vec<f64>,
        directions: Vec<Vec<f64>>,
        distances: Vec<f64>,
        radius: f64,
    ) -> Result<Self, ComplexityError> {
        if directions.is_empty() || directions.len() != distances.len() {
            return Err(ComplexityError::InvalidArgument(
                "need one distance per direction and at least one direction".into(),
            ));
        }
        let lengths = distances.iter().map(|d| d.min(radius)).collect();
        Ok(LocalizedClass {
            center,
            center_coefficients,
            directions,
            distances,
            lengths,
            radius,
        })
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        let mut out = self.clone();
        out.radius = radius;
        out.lengths = self.distances.iter().map(|d| d.min(radius)).collect();
        out
    }

    pub fn dim(&self) -> usize {
        self.center_coefficients.len()
    }
}

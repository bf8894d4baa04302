use serde::{Deserialize, Serialize};

use crate::error::{EsError, Result};

/// Input-factor bundle: a strictly positive vector with n ≥ 2 coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(EsError::Domain(format!(
                "a point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|&c| !c.is_finite() || c <= 0.0) {
            return Err(EsError::Domain(format!(
                "all coordinates must be finite and > 0, got {:?}",
                coords
            )));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// The scaled point t·x, t > 0.
    pub fn scaled(&self, t: f64) -> Result<Point> {
        Point::new(self.0.iter().map(|c| c * t).collect())
    }

    /// Copy with coordinate `i` replaced by `v`.
    pub fn with_coord(&self, i: usize, v: f64) -> Result<Point> {
        let mut c = self.0.clone();
        c[i] = v;
        Point::new(c)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = EsError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

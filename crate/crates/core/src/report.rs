use serde::Serialize;

/// Which elasticity a report carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Measure {
    #[serde(rename = "AES")]
    Aes,
    #[serde(rename = "HES")]
    Hes,
    #[serde(rename = "HES_hom")]
    HesHom,
    #[serde(rename = "MES")]
    Mes,
    #[serde(rename = "MES_alt")]
    MesAlt,
    #[serde(rename = "EPS")]
    Eps,
    #[serde(rename = "HLES")]
    Hles,
    #[serde(rename = "MGES")]
    Mges,
}

impl Measure {
    pub fn label(&self) -> &'static str {
        match self {
            Measure::Aes => "AES",
            Measure::Hes => "HES",
            Measure::HesHom => "HES_hom",
            Measure::Mes => "MES",
            Measure::MesAlt => "MES_alt",
            Measure::Eps => "EPS",
            Measure::Hles => "HLES",
            Measure::Mges => "MGES",
        }
    }
}

/// Matrix-valued or scalar elasticity payload. Serializes as a
/// `"matrix"` / `"scalar"` key next to the other report fields.
#[derive(Clone, Debug, Serialize)]
pub enum ReportValues {
    #[serde(rename = "matrix")]
    Matrix(Vec<Vec<f64>>),
    #[serde(rename = "scalar")]
    Scalar(f64),
}

/// Labeled elasticity values with the measure tag and evaluation point
/// (factor quantities for primal measures, prices for dual ones).
#[derive(Clone, Debug, Serialize)]
pub struct ElasticityReport {
    pub measure: Measure,
    pub point: Vec<f64>,
    #[serde(flatten)]
    pub values: ReportValues,
    pub diagnostics: Vec<String>,
}

impl ElasticityReport {
    pub fn matrix(&self) -> Option<&Vec<Vec<f64>>> {
        match &self.values {
            ReportValues::Matrix(m) => Some(m),
            ReportValues::Scalar(_) => None,
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match &self.values {
            ReportValues::Matrix(_) => None,
            ReportValues::Scalar(v) => Some(*v),
        }
    }

    /// Entry (i, j) of a matrix-valued report (0-based factor indices).
    pub fn entry(&self, i: usize, j: usize) -> Option<f64> {
        self.matrix().and_then(|m| m.get(i).and_then(|r| r.get(j).copied()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_has_flat_value_key() {
        let rep = ElasticityReport {
            measure: Measure::Aes,
            point: vec![1.0, 1.0],
            values: ReportValues::Matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
            diagnostics: vec![],
        };
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["measure"], "AES");
        assert!(json["matrix"].is_array());

        let rep = ElasticityReport {
            measure: Measure::Hes,
            point: vec![1.0, 2.0],
            values: ReportValues::Scalar(2.0),
            diagnostics: vec![],
        };
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["scalar"], 2.0);
    }
}

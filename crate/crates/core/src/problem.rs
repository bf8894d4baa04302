//! Problem envelopes: single-file JSON descriptions of a cost-minimization
//! or profit-maximization problem. Parsing is strict, like the spec schema.

use serde::{Deserialize, Serialize};

use crate::duality::PriceOutput;
use crate::error::{EsError, Result};
use crate::point::Point;
use crate::prodfn::FunctionSpec;

/// `{"spec": <FunctionSpec>, "prices": [...], "output": y, "init": [...]?}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostProblem {
    pub spec: FunctionSpec,
    pub prices: Vec<f64>,
    pub output: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<Vec<f64>>,
}

impl CostProblem {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: CostProblem = serde_json::from_str(s)
            .map_err(|e| EsError::InvalidSpec(format!("problem JSON: {e}")))?;
        p.spec.validate()?;
        p.price_output()?;
        p.init_point()?;
        Ok(p)
    }

    pub fn price_output(&self) -> Result<PriceOutput> {
        PriceOutput::new(self.prices.clone(), self.output)
    }

    pub fn init_point(&self) -> Result<Option<Point>> {
        self.init.clone().map(Point::new).transpose()
    }
}

/// Same envelope with `"output_price"` replacing `"output"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfitProblem {
    pub spec: FunctionSpec,
    pub prices: Vec<f64>,
    pub output_price: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<Vec<f64>>,
}

impl ProfitProblem {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: ProfitProblem = serde_json::from_str(s)
            .map_err(|e| EsError::InvalidSpec(format!("problem JSON: {e}")))?;
        p.spec.validate()?;
        p.init_point()?;
        Ok(p)
    }

    pub fn init_point(&self) -> Result<Option<Point>> {
        self.init.clone().map(Point::new).transpose()
    }
}

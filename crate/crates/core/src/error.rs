use thiserror::Error;

/// Library-wide error type.
///
/// Every variant carries a stable code string (see [`EsError::code`]) so that
/// front ends can emit machine-readable error objects.
#[derive(Debug, Error)]
pub enum EsError {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("function is not differentiable: {0}")]
    NotDifferentiable(String),

    #[error("bordered Hessian is singular: {0}")]
    SingularBorderedHessian(String),

    #[error("degenerate denominator in two-factor elasticity")]
    DegenerateDenominator,

    #[error("function is not linear homogeneous: {0}")]
    NotLinearHomogeneous(String),

    #[error("zero cross-partial derivative")]
    ZeroCrossPartial,

    #[error("zero gradient")]
    ZeroGradient,

    #[error("isoquant trace failed: {0}")]
    IsoquantTraceFailure(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("sensitivity matrix is singular: {0}")]
    SingularQ(String),

    #[error("zero marginal cost for factor {0}")]
    ZeroMarginalCost(usize),

    #[error("profit problem is unbounded: {0}")]
    Unbounded(String),

    #[error("objective is not concave at the candidate solution")]
    NotConcaveAtSolution,

    #[error("zero net supply for factor {0}")]
    ZeroNetSupply(usize),
}

impl EsError {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            EsError::Domain(_) => "DomainError",
            EsError::InvalidSpec(_) => "InvalidSpec",
            EsError::Dimension(_) => "DimensionError",
            EsError::Index(_) => "IndexError",
            EsError::NotDifferentiable(_) => "NotDifferentiable",
            EsError::SingularBorderedHessian(_) => "SingularBorderedHessian",
            EsError::DegenerateDenominator => "DegenerateDenominator",
            EsError::NotLinearHomogeneous(_) => "NotLinearHomogeneous",
            EsError::ZeroCrossPartial => "ZeroCrossPartial",
            EsError::ZeroGradient => "ZeroGradient",
            EsError::IsoquantTraceFailure(_) => "IsoquantTraceFailure",
            EsError::NoConvergence(_) => "NoConvergence",
            EsError::SingularQ(_) => "SingularQ",
            EsError::ZeroMarginalCost(_) => "ZeroMarginalCost",
            EsError::Unbounded(_) => "Unbounded",
            EsError::NotConcaveAtSolution => "NotConcaveAtSolution",
            EsError::ZeroNetSupply(_) => "ZeroNetSupply",
        }
    }
}

pub type Result<T> = std::result::Result<T, EsError>;

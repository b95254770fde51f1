use thiserror::Error;

fn sig(v: &f64) -> String {
    crate::io::format_sig9(*v)
}

/// Errors raised by the geometry kernel, the solvers and the I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("erosion depth {} reaches the inradius {}", sig(delta), sig(inradius))]
    DegenerateErosion { delta: f64, inradius: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{name} = {} is outside the admissible range {range}", sig(value))]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },
    #[error("point ({}, {}) lies outside the domain", sig(x), sig(y))]
    OutsideDomain { x: f64, y: f64 },
    #[error("field undefined at ({}, {}): {reason}", sig(x), sig(y))]
    UndefinedField { x: f64, y: f64, reason: &'static str },
    #[error("nothing to verify: lambda = {} does not exceed the Cheeger constant {}", sig(lambda), sig(h))]
    NothingToVerify { lambda: f64, h: f64 },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

/// Failure modes shared by every numeric route in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: String },

    #[error("{func} did not converge: {detail}")]
    NonConvergence { func: &'static str, detail: String },

    #[error("tolerance {tol:e} outside the supported range [{min:e}, {max:e}]")]
    Tolerance { tol: f64, min: f64, max: f64 },

    #[error("wavenumber imaginary part {im} outside the strip |Im k| < {limit}")]
    Strip { im: f64, limit: f64 },

    #[error("{func}: integration path passes within {distance:e} of a pole")]
    NearPole { func: &'static str, distance: f64 },

    #[error("transform not resolved at k = {k}: |value| = {value:e} <= abs_err = {abs_err:e}")]
    Unresolved { k: f64, value: f64, abs_err: f64 },

    #[error("resonant denominator {value:e} at n = {n}")]
    Resonance { n: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn non_convergence(func: &'static str, detail: impl Into<String>) -> Error {
    Error::NonConvergence {
        func,
        detail: detail.into(),
    }
}

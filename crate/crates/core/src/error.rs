use thiserror::Error;

/// Errors surfaced by the numerical core.
///
/// The taxonomy mirrors how callers are expected to react:
/// `Domain`/`Data` mean the inputs are unusable, `Infeasible` means the
/// requested quantity does not exist for these parameters, and `Numerical`
/// means a well-posed computation failed (and carries diagnostics).
#[derive(Error, Debug, Clone, PartialEq)]
pub enum CoreError {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity is undefined or infinite for these parameters.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Malformed or inconsistent input data (wrong lengths, non-finite values, ...).
    #[error("data error: {0}")]
    Data(String),

    /// A numerical procedure failed; the message carries diagnostics.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

/// Validates that `value` is finite and strictly positive.
pub fn require_positive(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(CoreError::Domain(format!(
            "{name} must be finite and > 0, got {value}"
        )));
    }
    Ok(())
}

/// Validates that `value` is finite and non-negative.
pub fn require_non_negative(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(CoreError::Domain(format!(
            "{name} must be finite and >= 0, got {value}"
        )));
    }
    Ok(())
}

/// Validates that `value` is finite.
pub fn require_finite(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(CoreError::Data(format!("{name} must be finite, got {value}")));
    }
    Ok(())
}

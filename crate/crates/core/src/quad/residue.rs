//! Closed form of `∫_{-∞}^{∞} e^{iu} / (u - tz)^{k+1} du`, used as a test oracle.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidueError {
    #[error("Im z must be non-zero")]
    RealZ,
    #[error("t = 0 is only defined for k = 0")]
    ZeroTWithK,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// For `t ≠ 0`: `2πi·e^{itz}·i^k/k!` when the pole `tz` lies in the upper
/// half-plane, else 0. For `t = 0, k = 0`: `PV∫ dλ/(λ + z) = -iπ·sign(Im z)`.
pub fn residue_oracle(t: f64, z: Complex64, k: u32) -> Result<Complex64, ResidueError> {
    if z.im == 0.0 || !z.im.is_finite() {
        return Err(ResidueError::RealZ);
    }
    let i = Complex64::i();
    if t == 0.0 {
        if k != 0 {
            return Err(ResidueError::ZeroTWithK);
        }
        return Ok(-i * std::f64::consts::PI * z.im.signum());
    }
    let w = z * t;
    if w.im <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(2.0 * std::f64::consts::PI * i * (i * w).exp() * i.powu(k) / factorial(k))
}

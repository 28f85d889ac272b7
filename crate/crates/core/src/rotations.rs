//! Stable 2x2 reflector parameters.
//!
//! [`sym_ortho`] returns `(c, s, r)` with `r = sqrt(a^2 + b^2) >= 0`,
//! `c = a / r` and `s = b / r`, without forming `a^2 + b^2`. The reflector
//!
//! ```text
//! [ c   s ] [a]   [r]
//! [ s  -c ] [b] = [0]
//! ```
//!
//! is what both the left and right reflections of the solver apply.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("reflector inputs must be finite, got ({a}, {b})")]
pub struct NonFiniteInput {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub c: f64,
    pub s: f64,
    pub r: f64,
}

impl Rotation {
    /// The "do nothing" reflector the solver starts from: `c = -1, s = 0`.
    pub const INITIAL: Rotation = Rotation { c: -1.0, s: 0.0, r: 0.0 };
}

// sign(0) = +1; only the b = 0, a = 0 branch could see it and that one is
// pinned to c = 1 explicitly.
#[inline]
fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Computes the reflector that maps `(a, b)` to `(r, 0)`.
pub fn sym_ortho(a: f64, b: f64) -> Result<Rotation, NonFiniteInput> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(NonFiniteInput { a, b });
    }
    Ok(sym_ortho_finite(a, b))
}

/// [`sym_ortho`] for inputs already known to be finite.
#[inline]
pub(crate) fn sym_ortho_finite(a: f64, b: f64) -> Rotation {
    if b == 0.0 {
        let c = if a == 0.0 { 1.0 } else { sign(a) };
        Rotation { c, s: 0.0, r: a.abs() }
    } else if a == 0.0 {
        Rotation {
            c: 0.0,
            s: sign(b),
            r: b.abs(),
        }
    } else if b.abs() >= a.abs() {
        let tau = a / b;
        let s = sign(b) / (1.0 + tau * tau).sqrt();
        let c = s * tau;
        Rotation { c, s, r: b / s }
    } else {
        let tau = b / a;
        let c = sign(a) / (1.0 + tau * tau).sqrt();
        let s = c * tau;
        Rotation { c, s, r: a / c }
    }
}

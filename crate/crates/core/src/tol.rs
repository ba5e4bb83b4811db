//! Process-wide numerical tolerance.
//!
//! Every "is this zero" decision in the crate (invertibility of dual numbers,
//! null-cone membership, zero elements) goes through [`tolerance`]. The value
//! can be changed at runtime, e.g. by the CLI from `MOTIONKIT_TOL`.

use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current global tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replaces the global tolerance. Non-positive or non-finite values are ignored.
pub fn set_tolerance(tol: f64) {
    if tol.is_finite() && tol > 0.0 {
        TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq_scaled(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

//! Terminating 4F3 series at unit argument, used by the closed forms of the
//! interbasis coefficients.

use crate::error::{Error, Result};

fn nonpositive_int(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.round() {
        Some(-x as u64)
    } else {
        None
    }
}

/// 4F3(a1,a2,a3,a4; b1,b2,b3; 1) where at least one numerator parameter is a
/// nonpositive integer. Terminates at the smallest such -a_i. A denominator
/// parameter equal to a nonpositive integer -M is only accepted when the
/// series terminates at or before index M, i.e. the pole is never touched.
/// Kahan-compensated summation; terms can alternate and grow before they
/// shrink.
pub fn hyp4f3_terminating(a: [f64; 4], b: [f64; 3]) -> Result<f64> {
    let n = a
        .iter()
        .filter_map(|&x| nonpositive_int(x))
        .min()
        .ok_or(Error::NonTerminating)?;
    for &bi in &b {
        if let Some(m) = nonpositive_int(bi) {
            if m < n {
                return Err(Error::DenominatorPole(num_complex::Complex64::new(bi, 0.0)));
            }
        }
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for k in 0..n {
        let kf = k as f64;
        let num = (a[0] + kf) * (a[1] + kf) * (a[2] + kf) * (a[3] + kf);
        let den = (b[0] + kf) * (b[1] + kf) * (b[2] + kf) * (kf + 1.0);
        term *= num / den;
        if !term.is_finite() {
            return Err(Error::Overflow("hyp4f3 term"));
        }
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

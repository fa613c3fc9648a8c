//! Small numerical kernels: compensated summation and bracketed 1-D search.

use crate::error::{Error, Result};

/// Running Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Neumaier-compensated sum.
pub fn ksum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = Neumaier::default();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Bisection on `[lo, hi]` for a sign change of `f`.
///
/// Stops when the bracket is narrower than `xtol` (absolute) or when `f`
/// hits zero. Returns the midpoint of the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Like [`bisect`] but returns the final bracket `(lo, hi)` with
/// `sign f(lo) == sign f(lo_initial)`. Useful when `f` has jumps and the
/// caller wants a specific side.
pub fn bisect_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<(f64, f64)> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm.signum() == flo.signum() && fm != 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`.
/// Returns `(x, f(x))`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Format with at most `digits` significant digits, shortest form.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

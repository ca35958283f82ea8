use super::ExtensionMode;
use crate::error::{Error, Result};

/// Pads `signal` by `pad` samples on each side according to `mode`.
///
/// Extensions longer than the signal keep applying the same rule, so the
/// mirror modes become periodic (period `2n` for symmetric, `2n - 2` for
/// reflect) and antireflect accumulates a drift of `2 (x[n-1] - x[0])` per
/// period.
pub fn extend(signal: &[f64], pad: usize, mode: ExtensionMode) -> Result<Vec<f64>> {
    check_extendable(signal.len(), pad, mode)?;
    let n = signal.len() as isize;
    let p = pad as isize;
    Ok((-p..n + p).map(|m| sample(signal, m, mode)).collect())
}

pub(super) fn check_extendable(len: usize, pad: usize, mode: ExtensionMode) -> Result<()> {
    let degenerate = match mode {
        _ if len == 0 => true,
        ExtensionMode::Reflect | ExtensionMode::Antireflect => len < 2 && pad > 0,
        _ => false,
    };
    if degenerate {
        return Err(Error::DegenerateSignal {
            len,
            mode: mode.name(),
        });
    }
    Ok(())
}

/// Value of the extended signal at (possibly out-of-range) index `m`.
/// Callers must have passed [`check_extendable`].
#[inline]
pub(super) fn sample(x: &[f64], m: isize, mode: ExtensionMode) -> f64 {
    let n = x.len() as isize;
    if (0..n).contains(&m) {
        return x[m as usize];
    }
    match mode {
        ExtensionMode::Zero => 0.0,
        ExtensionMode::Periodic => x[m.rem_euclid(n) as usize],
        ExtensionMode::Symmetric => {
            let q = m.rem_euclid(2 * n);
            x[if q < n { q } else { 2 * n - 1 - q } as usize]
        }
        ExtensionMode::Reflect => {
            let q = m.rem_euclid(2 * n - 2);
            x[if q < n { q } else { 2 * n - 2 - q } as usize]
        }
        ExtensionMode::Antireflect => {
            let period = 2 * n - 2;
            let turns = m.div_euclid(period);
            let q = m.rem_euclid(period);
            let first = x[0];
            let last = x[(n - 1) as usize];
            let base = if q < n {
                x[q as usize]
            } else {
                2.0 * last - x[(period - q) as usize]
            };
            base + turns as f64 * 2.0 * (last - first)
        }
    }
}

use super::extend::{check_extendable, sample};
use super::{ExtensionMode, FilterBank};
use crate::error::{Error, Result};
use crate::raster::Plane;

/// Number of coefficients per band for a length-`n` signal.
pub fn coefficient_len(n: usize, filter_len: usize, mode: ExtensionMode) -> usize {
    match mode {
        ExtensionMode::Periodic => n.div_ceil(2),
        _ => (n + filter_len - 1) / 2,
    }
}

/// Odd-length signals are padded with their last sample before periodization.
fn periodization_input(signal: &[f64]) -> Vec<f64> {
    let mut x = signal.to_vec();
    if x.len() % 2 == 1 {
        x.push(*x.last().expect("nonempty"));
    }
    x
}

/// Single-level analysis: returns `(approx, detail)`.
pub fn dwt1d(
    signal: &[f64],
    bank: &FilterBank,
    mode: ExtensionMode,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = bank.filter_length();
    check_extendable(signal.len(), l - 1, mode)?;
    let count = coefficient_len(signal.len(), l, mode);
    let padded;
    let x = if mode == ExtensionMode::Periodic {
        padded = periodization_input(signal);
        &padded[..]
    } else {
        signal
    };
    // ext[t] holds x̃[t - (l - 1)], enough for indices 2k + 1 - j.
    let offset = l as isize - 1;
    let ext: Vec<f64> = (0..2 * count + l)
        .map(|t| sample(x, t as isize - offset, mode))
        .collect();

    let mut approx = Vec::with_capacity(count);
    let mut detail = Vec::with_capacity(count);
    for k in 0..count {
        // Window ext[2k + 1 .. 2k + 1 + l] read backwards against the filter.
        let top = 2 * k + l;
        let (mut a, mut d) = (0.0, 0.0);
        for j in 0..l {
            let v = ext[top - j];
            a += bank.dec_lo[j] * v;
            d += bank.dec_hi[j] * v;
        }
        approx.push(a);
        detail.push(d);
    }
    Ok((approx, detail))
}

/// Literal extend → full convolution → keep every second sample. Slow, used
/// as ground truth for [`dwt1d`].
pub fn dwt1d_reference(
    signal: &[f64],
    bank: &FilterBank,
    mode: ExtensionMode,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let l = bank.filter_length();
    check_extendable(signal.len(), l - 1, mode)?;
    let x = if mode == ExtensionMode::Periodic {
        periodization_input(signal)
    } else {
        signal.to_vec()
    };
    let count = coefficient_len(signal.len(), l, mode);
    let ext = mirror_extend(&x, l - 1, mode);
    let lo = full_convolution(&ext, &bank.dec_lo);
    let hi = full_convolution(&ext, &bank.dec_hi);
    let pick = |c: &[f64]| (0..count).map(|k| c[l + 2 * k]).collect::<Vec<_>>();
    Ok((pick(&lo), pick(&hi)))
}

/// Grows the signal by repeatedly mirroring (or copying) the whole buffer
/// about its current edge until `pad` samples exist on each side.
fn mirror_extend(x: &[f64], pad: usize, mode: ExtensionMode) -> Vec<f64> {
    let mut buf = x.to_vec();
    let mut left = 0;
    while left < pad {
        let chunk: Vec<f64> = match mode {
            ExtensionMode::Zero => vec![0.0; pad - left],
            ExtensionMode::Periodic => buf.clone(),
            ExtensionMode::Symmetric => buf.iter().rev().copied().collect(),
            ExtensionMode::Reflect => buf[1..].iter().rev().copied().collect(),
            ExtensionMode::Antireflect => {
                let pivot = buf[0];
                buf[1..].iter().rev().map(|v| 2.0 * pivot - v).collect()
            }
        };
        left += chunk.len();
        buf.splice(0..0, chunk);
    }
    buf.drain(..left - pad);

    let mut right = 0;
    while right < pad {
        let chunk: Vec<f64> = match mode {
            ExtensionMode::Zero => vec![0.0; pad - right],
            ExtensionMode::Periodic => buf.clone(),
            ExtensionMode::Symmetric => buf.iter().rev().copied().collect(),
            ExtensionMode::Reflect => buf[..buf.len() - 1].iter().rev().copied().collect(),
            ExtensionMode::Antireflect => {
                let pivot = *buf.last().expect("nonempty");
                buf[..buf.len() - 1]
                    .iter()
                    .rev()
                    .map(|v| 2.0 * pivot - v)
                    .collect()
            }
        };
        right += chunk.len();
        buf.extend(chunk);
    }
    buf.truncate(buf.len() - (right - pad));
    buf
}

fn full_convolution(signal: &[f64], filter: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; signal.len() + filter.len() - 1];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, &f) in filter.iter().enumerate() {
            if i >= j && i - j < signal.len() {
                *o += f * signal[i - j];
            }
        }
    }
    out
}

/// Single-level synthesis, truncated to `orig_len` samples.
pub fn idwt1d(
    approx: &[f64],
    detail: &[f64],
    bank: &FilterBank,
    mode: ExtensionMode,
    orig_len: usize,
) -> Result<Vec<f64>> {
    let l = bank.filter_length();
    let count = approx.len();
    if detail.len() != count {
        return Err(Error::ShapeMismatch(format!(
            "approx has {count} coefficients, detail has {}",
            detail.len()
        )));
    }
    if orig_len == 0 || coefficient_len(orig_len, l, mode) != count {
        return Err(Error::ShapeMismatch(format!(
            "{count} coefficients cannot come from a length-{orig_len} signal"
        )));
    }
    let mut out = vec![0.0; orig_len];
    for (m, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        // Output m collects coefficient k through filter tap i = m + l - 2 - 2k.
        for i in 0..l {
            let t = m as isize + l as isize - 2 - i as isize;
            if t.rem_euclid(2) != 0 {
                continue;
            }
            let k = t / 2;
            let k = if mode == ExtensionMode::Periodic {
                k.rem_euclid(count as isize)
            } else if (0..count as isize).contains(&k) {
                k
            } else {
                continue;
            } as usize;
            acc += approx[k] * bank.rec_lo[i] + detail[k] * bank.rec_hi[i];
        }
        *o = acc;
    }
    Ok(out)
}

/// The four coefficient planes of a single-level 2D transform.
///
/// The first letter names the filter applied along the width (rows), the
/// second the filter along the height (columns): `lh` is low-pass across
/// each row and high-pass down each column, so it responds to horizontal
/// edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Subbands {
    ll: Plane,
    lh: Plane,
    hl: Plane,
    hh: Plane,
    orig_h: usize,
    orig_w: usize,
}

impl Subbands {
    pub fn new(
        ll: Plane,
        lh: Plane,
        hl: Plane,
        hh: Plane,
        orig_h: usize,
        orig_w: usize,
    ) -> Result<Self> {
        ll.ensure_same_shape(&lh)?;
        ll.ensure_same_shape(&hl)?;
        ll.ensure_same_shape(&hh)?;
        Ok(Subbands {
            ll,
            lh,
            hl,
            hh,
            orig_h,
            orig_w,
        })
    }

    pub fn ll(&self) -> &Plane {
        &self.ll
    }

    pub fn lh(&self) -> &Plane {
        &self.lh
    }

    pub fn hl(&self) -> &Plane {
        &self.hl
    }

    pub fn hh(&self) -> &Plane {
        &self.hh
    }

    /// Planes in `LL, LH, HL, HH` order.
    pub fn bands(&self) -> [&Plane; 4] {
        [&self.ll, &self.lh, &self.hl, &self.hh]
    }

    pub fn orig_shape(&self) -> (usize, usize) {
        (self.orig_h, self.orig_w)
    }

    pub fn into_ll(self) -> Plane {
        self.ll
    }
}

/// Separable 2D transform: every row, then every column of both row outputs.
pub fn dwt2d(plane: &Plane, bank: &FilterBank, mode: ExtensionMode) -> Result<Subbands> {
    let (h, w) = plane.shape();
    let l = bank.filter_length();
    let cw = coefficient_len(w, l, mode);
    let ch = coefficient_len(h, l, mode);

    let mut row_lo = Vec::with_capacity(h * cw);
    let mut row_hi = Vec::with_capacity(h * cw);
    for y in 0..h {
        let (a, d) = dwt1d(plane.row(y), bank, mode)?;
        row_lo.extend(a);
        row_hi.extend(d);
    }

    let columns = |rows: &[f64]| -> Result<(Plane, Plane)> {
        let mut lo = vec![0.0; ch * cw];
        let mut hi = vec![0.0; ch * cw];
        let mut col = vec![0.0; h];
        for x in 0..cw {
            for (y, c) in col.iter_mut().enumerate() {
                *c = rows[y * cw + x];
            }
            let (a, d) = dwt1d(&col, bank, mode)?;
            for k in 0..ch {
                lo[k * cw + x] = a[k];
                hi[k * cw + x] = d[k];
            }
        }
        Ok((Plane::new(ch, cw, lo)?, Plane::new(ch, cw, hi)?))
    };
    let (ll, lh) = columns(&row_lo)?;
    let (hl, hh) = columns(&row_hi)?;
    Subbands::new(ll, lh, hl, hh, h, w)
}

/// Inverse of [`dwt2d`], returning the original `orig_h × orig_w` plane.
pub fn idwt2d(subbands: &Subbands, bank: &FilterBank, mode: ExtensionMode) -> Result<Plane> {
    let (h, w) = subbands.orig_shape();
    let (ch, cw) = subbands.ll.shape();
    let l = bank.filter_length();
    if h == 0 || w == 0 || coefficient_len(h, l, mode) != ch || coefficient_len(w, l, mode) != cw {
        return Err(Error::ShapeMismatch(format!(
            "{ch}x{cw} subbands cannot come from a {h}x{w} plane"
        )));
    }

    let columns = |lo: &Plane, hi: &Plane| -> Result<Vec<f64>> {
        let mut rows = vec![0.0; h * cw];
        for x in 0..cw {
            let col = idwt1d(&lo.column(x), &hi.column(x), bank, mode, h)?;
            for (y, v) in col.into_iter().enumerate() {
                rows[y * cw + x] = v;
            }
        }
        Ok(rows)
    };
    let row_lo = columns(&subbands.ll, &subbands.lh)?;
    let row_hi = columns(&subbands.hl, &subbands.hh)?;

    let mut out = Vec::with_capacity(h * w);
    for y in 0..h {
        let r = y * cw..(y + 1) * cw;
        out.extend(idwt1d(&row_lo[r.clone()], &row_hi[r], bank, mode, w)?);
    }
    Plane::new(h, w, out)
}

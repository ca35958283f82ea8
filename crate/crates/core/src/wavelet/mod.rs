//! Single-level discrete wavelet transforms.
//!
//! Filter banks follow the PyWavelets sign and orientation conventions, so
//! for every non-periodic mode the coefficients agree with `pywt.dwt` sample
//! for sample. Analysis coefficient `k` is the filter aligned at extended-signal
//! index `2k + 1`:
//!
//! ```text
//! approx[k] = sum_j dec_lo[j] * x̃[2k + 1 - j]
//! ```
//!
//! where `x̃` is the input extended on both sides according to the
//! [`ExtensionMode`]. Non-periodic modes keep `floor((n + L - 1) / 2)`
//! coefficients per band. [`ExtensionMode::Periodic`] is the critically
//! sampled (periodization) variant with `ceil(n / 2)` coefficients, which is
//! what makes the transform orthonormal for orthogonal families.

mod extend;
mod tables;
mod transform;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use extend::extend;
pub use transform::{coefficient_len, dwt1d, dwt1d_reference, dwt2d, idwt1d, idwt2d, Subbands};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Haar,
    Daubechies,
    Symlet,
    Biorthogonal,
    Coiflet,
}

impl Family {
    pub fn is_orthogonal(self) -> bool {
        !matches!(self, Family::Biorthogonal)
    }

    fn short_name(self) -> &'static str {
        match self {
            Family::Haar => "haar",
            Family::Daubechies => "db",
            Family::Symlet => "sym",
            Family::Biorthogonal => "bior",
            Family::Coiflet => "coif",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(Family::Haar),
            "db" | "daubechies" => Ok(Family::Daubechies),
            "sym" | "symlet" => Ok(Family::Symlet),
            "bior" | "biorthogonal" => Ok(Family::Biorthogonal),
            "coif" | "coiflet" => Ok(Family::Coiflet),
            _ => Err(Error::UnknownWavelet(s.to_string())),
        }
    }
}

/// Filter order. Biorthogonal wavelets carry a `(decomposition, reconstruction)`
/// pair written `1.3`; every other family uses a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    pub major: u8,
    pub minor: Option<u8>,
}

impl Order {
    pub const fn single(n: u8) -> Self {
        Order {
            major: n,
            minor: None,
        }
    }

    pub const fn pair(dec: u8, rec: u8) -> Self {
        Order {
            major: dec,
            minor: Some(rec),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.minor {
            Some(m) => write!(f, "{}.{}", self.major, m),
            None => write!(f, "{}", self.major),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownWavelet(format!("order {s:?}"));
        match s.split_once('.') {
            Some((a, b)) => Ok(Order::pair(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
            )),
            None => Ok(Order::single(s.parse().map_err(|_| bad())?)),
        }
    }
}

/// Boundary rule used to extend a finite signal before filtering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionMode {
    /// Mirror including the edge sample: `2 1 | 1 2 3 | 3 2`.
    Symmetric,
    /// Mirror about the edge sample: `3 2 | 1 2 3 | 2 1`.
    #[default]
    Reflect,
    /// Point reflection about the edge value: `-1 0 | 1 2 3 | 4 5`.
    Antireflect,
    /// Wrap around; the transform is critically sampled in this mode.
    Periodic,
    /// Zero padding.
    Zero,
}

impl ExtensionMode {
    pub const ALL: [ExtensionMode; 5] = [
        ExtensionMode::Symmetric,
        ExtensionMode::Reflect,
        ExtensionMode::Antireflect,
        ExtensionMode::Periodic,
        ExtensionMode::Zero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtensionMode::Symmetric => "symmetric",
            ExtensionMode::Reflect => "reflect",
            ExtensionMode::Antireflect => "antireflect",
            ExtensionMode::Periodic => "periodic",
            ExtensionMode::Zero => "zero",
        }
    }
}

impl fmt::Display for ExtensionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtensionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExtensionMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown extension mode {s:?}")))
    }
}

/// A validated (family, order, mode) triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct WaveletSpec {
    family: Family,
    order: Order,
    mode: ExtensionMode,
}

impl WaveletSpec {
    pub fn new(family: Family, order: Order, mode: ExtensionMode) -> Result<Self> {
        let spec = WaveletSpec {
            family,
            order,
            mode,
        };
        scaling_table(family, order)?;
        Ok(spec)
    }

    /// Parses a short wavelet name such as `haar`, `db4`, `sym4`, `bior2.2`
    /// or `coif1`.
    pub fn parse(name: &str, mode: ExtensionMode) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if lower == "haar" {
            return WaveletSpec::new(Family::Haar, Order::single(1), mode);
        }
        let split = lower
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::UnknownWavelet(name.to_string()))?;
        let family: Family = lower[..split]
            .parse()
            .map_err(|_| Error::UnknownWavelet(name.to_string()))?;
        let order: Order = lower[split..]
            .parse()
            .map_err(|_| Error::UnknownWavelet(name.to_string()))?;
        WaveletSpec::new(family, order, mode)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn mode(&self) -> ExtensionMode {
        self.mode
    }

    pub fn with_mode(self, mode: ExtensionMode) -> Self {
        WaveletSpec { mode, ..self }
    }

    /// Short name: `sym4`, `bior2.2`, `haar`.
    pub fn name(&self) -> String {
        match self.family {
            Family::Haar => "haar".to_string(),
            f => format!("{}{}", f.short_name(), self.order),
        }
    }

    pub fn filter_bank(&self) -> FilterBank {
        filter_bank(self).expect("validated at construction")
    }

    /// Every supported wavelet with the given mode.
    pub fn all(mode: ExtensionMode) -> Vec<WaveletSpec> {
        SUPPORTED
            .iter()
            .map(|&(family, order)| WaveletSpec {
                family,
                order,
                mode,
            })
            .collect()
    }
}

impl Default for WaveletSpec {
    fn default() -> Self {
        WaveletSpec {
            family: Family::Symlet,
            order: Order::single(4),
            mode: ExtensionMode::Reflect,
        }
    }
}

impl fmt::Display for WaveletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name(), self.mode)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: Family,
    order: RawOrder,
    mode: ExtensionMode,
}

/// Orders are written as strings (`"4"`, `"1.3"`); bare integers are also
/// accepted on input.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawOrder {
    Int(u8),
    Text(String),
}

impl TryFrom<RawSpec> for WaveletSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let order = match raw.order {
            RawOrder::Int(n) => Order::single(n),
            RawOrder::Text(t) => t.parse()?,
        };
        WaveletSpec::new(raw.family, order, raw.mode)
    }
}

impl From<WaveletSpec> for RawSpec {
    fn from(s: WaveletSpec) -> Self {
        RawSpec {
            family: s.family,
            order: RawOrder::Text(s.order.to_string()),
            mode: s.mode,
        }
    }
}

const SUPPORTED: [(Family, Order); 21] = [
    (Family::Haar, Order::single(1)),
    (Family::Daubechies, Order::single(2)),
    (Family::Daubechies, Order::single(3)),
    (Family::Daubechies, Order::single(4)),
    (Family::Daubechies, Order::single(5)),
    (Family::Daubechies, Order::single(6)),
    (Family::Daubechies, Order::single(7)),
    (Family::Daubechies, Order::single(8)),
    (Family::Symlet, Order::single(2)),
    (Family::Symlet, Order::single(3)),
    (Family::Symlet, Order::single(4)),
    (Family::Symlet, Order::single(5)),
    (Family::Symlet, Order::single(6)),
    (Family::Symlet, Order::single(7)),
    (Family::Symlet, Order::single(8)),
    (Family::Biorthogonal, Order::pair(1, 3)),
    (Family::Biorthogonal, Order::pair(2, 2)),
    (Family::Biorthogonal, Order::pair(3, 1)),
    (Family::Coiflet, Order::single(1)),
    (Family::Coiflet, Order::single(2)),
    (Family::Coiflet, Order::single(3)),
];

enum Table {
    Orthogonal(&'static [f64]),
    Biorthogonal {
        dec_lo: &'static [f64],
        rec_lo: &'static [f64],
    },
}

fn scaling_table(family: Family, order: Order) -> Result<Table> {
    use tables::*;
    let unknown = || {
        Error::UnknownWavelet(match family {
            Family::Haar => format!("haar{order}"),
            f => format!("{}{order}", f.short_name()),
        })
    };
    let (major, minor) = (order.major, order.minor);
    let table = match (family, major, minor) {
        // db1 is the Haar filter under its Daubechies name.
        (Family::Haar, 1, None) | (Family::Daubechies, 1, None) => Table::Orthogonal(&HAAR),
        (Family::Daubechies, n, None) => Table::Orthogonal(match n {
            2 => &DB2,
            3 => &DB3,
            4 => &DB4,
            5 => &DB5,
            6 => &DB6,
            7 => &DB7,
            8 => &DB8,
            _ => return Err(unknown()),
        }),
        (Family::Symlet, n, None) => Table::Orthogonal(match n {
            2 => &SYM2,
            3 => &SYM3,
            4 => &SYM4,
            5 => &SYM5,
            6 => &SYM6,
            7 => &SYM7,
            8 => &SYM8,
            _ => return Err(unknown()),
        }),
        (Family::Coiflet, n, None) => Table::Orthogonal(match n {
            1 => &COIF1,
            2 => &COIF2,
            3 => &COIF3,
            _ => return Err(unknown()),
        }),
        (Family::Biorthogonal, 1, Some(3)) => Table::Biorthogonal {
            dec_lo: &BIOR1_3_DEC_LO,
            rec_lo: &BIOR1_3_REC_LO,
        },
        (Family::Biorthogonal, 2, Some(2)) => Table::Biorthogonal {
            dec_lo: &BIOR2_2_DEC_LO,
            rec_lo: &BIOR2_2_REC_LO,
        },
        (Family::Biorthogonal, 3, Some(1)) => Table::Biorthogonal {
            dec_lo: &BIOR3_1_DEC_LO,
            rec_lo: &BIOR3_1_REC_LO,
        },
        _ => return Err(unknown()),
    };
    Ok(table)
}

/// Analysis and synthesis filters of one wavelet. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank {
    pub dec_lo: Vec<f64>,
    pub dec_hi: Vec<f64>,
    pub rec_lo: Vec<f64>,
    pub rec_hi: Vec<f64>,
    orthogonal: bool,
}

impl FilterBank {
    /// Builds the high-pass filters from the two low-pass filters:
    /// `dec_hi[k] = (-1)^(k+1) rec_lo[k]` and `rec_hi[k] = (-1)^k dec_lo[k]`.
    fn from_low_pass(dec_lo: Vec<f64>, rec_lo: Vec<f64>, orthogonal: bool) -> Self {
        debug_assert_eq!(dec_lo.len(), rec_lo.len());
        let sign = |k: usize| if k & 1 == 0 { 1.0 } else { -1.0 };
        let dec_hi = rec_lo
            .iter()
            .enumerate()
            .map(|(k, &v)| -sign(k) * v)
            .collect();
        let rec_hi = dec_lo
            .iter()
            .enumerate()
            .map(|(k, &v)| sign(k) * v)
            .collect();
        FilterBank {
            dec_lo,
            dec_hi,
            rec_lo,
            rec_hi,
            orthogonal,
        }
    }

    pub fn filter_length(&self) -> usize {
        self.dec_lo.len()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal
    }

    /// DC gain of the analysis low-pass filter.
    pub fn dc_gain(&self) -> f64 {
        self.dec_lo.iter().sum()
    }
}

pub fn filter_bank(spec: &WaveletSpec) -> Result<FilterBank> {
    Ok(match scaling_table(spec.family, spec.order)? {
        Table::Orthogonal(scaling) => {
            let rec_lo = scaling.to_vec();
            let dec_lo = scaling.iter().rev().copied().collect();
            FilterBank::from_low_pass(dec_lo, rec_lo, true)
        }
        Table::Biorthogonal { dec_lo, rec_lo } => {
            FilterBank::from_low_pass(dec_lo.to_vec(), rec_lo.to_vec(), false)
        }
    })
}

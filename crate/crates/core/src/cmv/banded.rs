use num_complex::Complex;
use num_traits::Num;
use std::fmt::Debug;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Matrix entry type for banded windows: real (Jacobi) or complex (CMV).
pub trait Entry: Copy + Num + Debug + Send + Sync + 'static {
    /// Real and imaginary parts as `f64`.
    fn parts(self) -> (f64, f64);
    fn conj(self) -> Self;
    fn modulus(self) -> f64 {
        let (re, im) = self.parts();
        re.hypot(im)
    }
}

impl<T: Real> Entry for T {
    fn parts(self) -> (f64, f64) {
        (self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn conj(self) -> Self {
        self
    }
}

impl<T: Real> Entry for Complex<T> {
    fn parts(self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
}

/// Square window `rows = cols = lo..=hi` of a banded two-sided infinite
/// matrix. Entries with `|i - j| > bandwidth` are zero.
///
/// Rows closer than `margin_lo` (`margin_hi`) to the lower (upper) edge may
/// differ from the infinite matrix because columns outside the window were
/// dropped; a margin of zero marks a genuine boundary (e.g. the top of a
/// half-line matrix). All remaining rows are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrixWindow<E> {
    lo: i64,
    hi: i64,
    bandwidth: usize,
    margin_lo: usize,
    margin_hi: usize,
    data: Vec<E>,
}

impl<E: Entry> BandedMatrixWindow<E> {
    pub fn zeros(lo: i64, hi: i64, bandwidth: usize, margin_lo: usize, margin_hi: usize) -> Self {
        assert!(hi >= lo, "empty window");
        let rows = (hi - lo + 1) as usize;
        Self {
            lo,
            hi,
            bandwidth,
            margin_lo,
            margin_hi,
            data: vec![E::zero(); rows * (2 * bandwidth + 1)],
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dim(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn margins(&self) -> (usize, usize) {
        (self.margin_lo, self.margin_hi)
    }

    /// Rows that agree with the infinite matrix.
    pub fn interior_rows(&self) -> std::ops::RangeInclusive<i64> {
        self.lo + self.margin_lo as i64..=self.hi - self.margin_hi as i64
    }

    pub fn is_interior(&self, i: i64) -> bool {
        self.interior_rows().contains(&i)
    }

    fn slot(&self, i: i64, j: i64) -> Option<usize> {
        let d = j - i + self.bandwidth as i64;
        if i < self.lo || i > self.hi || j < self.lo || j > self.hi || d < 0 || d > 2 * self.bandwidth as i64 {
            return None;
        }
        Some((i - self.lo) as usize * (2 * self.bandwidth + 1) + d as usize)
    }

    /// Entry `(i, j)`; zero outside the band or the window.
    pub fn get(&self, i: i64, j: i64) -> E {
        self.slot(i, j).map_or(E::zero(), |s| self.data[s])
    }

    /// Sets `(i, j)`; entries outside the window are silently dropped,
    /// entries outside the band are a logic error.
    pub fn set(&mut self, i: i64, j: i64, v: E) {
        if j < self.lo || j > self.hi || i < self.lo || i > self.hi {
            return;
        }
        let s = self.slot(i, j).expect("entry outside the band");
        self.data[s] = v;
    }

    /// Nonzero-pattern entries of row `i` within the window.
    pub fn row(&self, i: i64) -> Vec<(i64, E)> {
        let bw = self.bandwidth as i64;
        ((i - bw).max(self.lo)..=(i + bw).min(self.hi))
            .map(|j| (j, self.get(i, j)))
            .collect()
    }

    pub fn diagonal(&self) -> Vec<E> {
        (self.lo..=self.hi).map(|i| self.get(i, i)).collect()
    }

    /// Keeps only the main diagonal.
    pub fn diagonal_part(&self) -> Self {
        let mut out = Self::zeros(self.lo, self.hi, self.bandwidth, self.margin_lo, self.margin_hi);
        for i in self.lo..=self.hi {
            out.set(i, i, self.get(i, i));
        }
        out
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.lo != other.lo || self.hi != other.hi {
            return Err(Error::InvalidArgument(format!(
                "window mismatch: [{}, {}] vs [{}, {}]",
                self.lo, self.hi, other.lo, other.hi
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let bw = self.bandwidth.max(other.bandwidth);
        let mut out = Self::zeros(
            self.lo,
            self.hi,
            bw,
            self.margin_lo.max(other.margin_lo),
            self.margin_hi.max(other.margin_hi),
        );
        for i in self.lo..=self.hi {
            for (j, v) in self.row(i) {
                out.set(i, j, v + other.get(i, j));
            }
            for (j, v) in other.row(i) {
                if (j - i).unsigned_abs() as usize > self.bandwidth {
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let neg = Self {
            data: other.data.iter().map(|v| E::zero() - *v).collect(),
            ..other.clone()
        };
        self.add(&neg)
    }

    /// Banded product on the same window. Row `i` of `A B` is exact when row
    /// `i` of `A` is and every row of `B` within `bw(A)` of `i` is, so each
    /// margin becomes `max(m_A, m_B + bw(A))` (and stays zero at a genuine
    /// boundary).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let bw = self.bandwidth + other.bandwidth;
        let grow = |ma: usize, mb: usize| {
            if ma == 0 && mb == 0 {
                0
            } else {
                ma.max(mb + self.bandwidth)
            }
        };
        let mut out = Self::zeros(
            self.lo,
            self.hi,
            bw,
            grow(self.margin_lo, other.margin_lo),
            grow(self.margin_hi, other.margin_hi),
        );
        for i in self.lo..=self.hi {
            for (k, a) in self.row(i) {
                if a == E::zero() {
                    continue;
                }
                for (j, b) in other.row(k) {
                    let s = out.slot(i, j).expect("product stays in band");
                    out.data[s] = out.data[s] + a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self^p`, `p >= 1`.
    pub fn pow(&self, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("power must be positive".into()));
        }
        let mut acc = self.clone();
        for _ in 1..p {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.lo, self.hi, self.bandwidth, self.margin_lo, self.margin_hi);
        for i in self.lo..=self.hi {
            for (j, v) in self.row(i) {
                out.set(j, i, v.conj());
            }
        }
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<E>> {
        (self.lo..=self.hi)
            .map(|i| (self.lo..=self.hi).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// Dense dump: one line per row, `re,im` pairs for every column.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for i in self.lo..=self.hi {
            let mut line = String::new();
            for j in self.lo..=self.hi {
                let (re, im) = self.get(i, j).parts();
                if j > self.lo {
                    line.push(',');
                }
                line.push_str(&format!("{re},{im}"));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

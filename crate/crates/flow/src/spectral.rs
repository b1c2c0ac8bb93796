//! Fourier machinery on the periodic box `[0, 2pi)^3`.
//!
//! Spectral arrays hold normalized coefficients `c_k` so that
//! `u(x) = sum_k c_k exp(i k.x)`, stored in FFT order with the same
//! row-major layout as physical samples (`x` slowest, `z` fastest).
//! Real fields travel in pairs through a single complex transform.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// In-place unnormalized 3-D FFT of an `n^3` array.
pub struct Fft3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    plane: Vec<Complex64>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Fft3 {
            n,
            fwd,
            inv,
            scratch: vec![ZERO; len],
            plane: vec![ZERO; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        let f = self.fwd.clone();
        self.pass_z(data, &*f, None);
        self.pass_y(data, &*f, None);
        self.pass_x(data, &*f, None);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let f = self.inv.clone();
        self.pass_z(data, &*f, None);
        self.pass_y(data, &*f, None);
        self.pass_x(data, &*f, None);
    }

    /// Inverse transform of data that vanishes unless every index is in
    /// `keep`; empty lines are skipped.
    pub fn inverse_sparse(&mut self, data: &mut [Complex64], keep: &[bool]) {
        let f = self.inv.clone();
        self.pass_z(data, &*f, Some(keep));
        self.pass_y(data, &*f, Some(keep));
        self.pass_x(data, &*f, None);
    }

    /// Forward transform that is only correct at indices all in `keep`.
    pub fn forward_truncated(&mut self, data: &mut [Complex64], keep: &[bool]) {
        let f = self.fwd.clone();
        self.pass_x(data, &*f, None);
        self.pass_y(data, &*f, Some(keep));
        self.pass_z(data, &*f, Some(keep));
    }

    /// z lines are contiguous; with a mask only lines `(i, j)` with both
    /// kept are transformed.
    fn pass_z(&mut self, data: &mut [Complex64], fft: &dyn Fft<f64>, keep: Option<&[bool]>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n);
        match keep {
            None => fft.process_with_scratch(data, &mut self.scratch),
            Some(keep) => {
                for i in (0..n).filter(|&i| keep[i]) {
                    for j in (0..n).filter(|&j| keep[j]) {
                        let at = (i * n + j) * n;
                        fft.process_with_scratch(&mut data[at..at + n], &mut self.scratch);
                    }
                }
            }
        }
    }

    /// y lines, one transposed x-slab at a time; a mask selects slabs.
    fn pass_y(&mut self, data: &mut [Complex64], fft: &dyn Fft<f64>, keep: Option<&[bool]>) {
        let n = self.n;
        let n2 = n * n;
        for i in (0..n).filter(|&i| keep.map_or(true, |k| k[i])) {
            let slab = &mut data[i * n2..(i + 1) * n2];
            for j in 0..n {
                for k in 0..n {
                    self.plane[k * n + j] = slab[j * n + k];
                }
            }
            fft.process_with_scratch(&mut self.plane, &mut self.scratch);
            for j in 0..n {
                for k in 0..n {
                    slab[j * n + k] = self.plane[k * n + j];
                }
            }
        }
    }

    /// x lines, gathered one y-plane at a time; a mask selects planes.
    fn pass_x(&mut self, data: &mut [Complex64], fft: &dyn Fft<f64>, keep: Option<&[bool]>) {
        let n = self.n;
        let n2 = n * n;
        for j in (0..n).filter(|&j| keep.map_or(true, |k| k[j])) {
            for i in 0..n {
                let row = &data[i * n2 + j * n..i * n2 + j * n + n];
                for (k, v) in row.iter().enumerate() {
                    self.plane[k * n + i] = *v;
                }
            }
            fft.process_with_scratch(&mut self.plane, &mut self.scratch);
            for i in 0..n {
                let row = &mut data[i * n2 + j * n..i * n2 + j * n + n];
                for (k, v) in row.iter_mut().enumerate() {
                    *v = self.plane[k * n + i];
                }
            }
        }
    }
}

/// Signed wavenumber of FFT index `i`; the Nyquist index maps to `n/2`.
pub fn wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Wavenumber used for differentiation: the Nyquist mode is dropped so
/// that derivatives of real fields stay real.
pub fn deriv_wavenumber(i: usize, n: usize) -> f64 {
    if n % 2 == 0 && i == n / 2 {
        0.0
    } else {
        wavenumber(i, n) as f64
    }
}

/// Transforms and dealiased products for one resolution `n` (even).
pub struct Spectral {
    n: usize,
    m: usize,
    base: Fft3,
    padded: Fft3,
    /// Position of each retained `n`-grid mode in the padded grid, or
    /// `usize::MAX` for modes with a Nyquist component.
    pad_map: Vec<usize>,
    /// Flat padded index of `-k` for each padded index `k`.
    pad_neg: Vec<usize>,
    /// Padded-grid indices carrying a retained wavenumber.
    pad_keep: Vec<bool>,
    /// Differentiation wavenumbers per axis.
    pub k: Vec<f64>,
    kvecs: Vec<[f64; 3]>,
    buf: Vec<Complex64>,
    pbuf: Vec<Complex64>,
}

impl Spectral {
    /// `n` must be even; products are evaluated on a `3n/2` grid.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2 && n % 2 == 0, "spectral resolution must be even");
        let m = 3 * n / 2;
        let mut pad_map = vec![usize::MAX; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let ks = [wavenumber(i, n), wavenumber(j, n), wavenumber(l, n)];
                    if ks.iter().any(|&w| w.unsigned_abs() as usize == n / 2) {
                        continue;
                    }
                    let idx = |w: i64| w.rem_euclid(m as i64) as usize;
                    pad_map[(i * n + j) * n + l] = (idx(ks[0]) * m + idx(ks[1])) * m + idx(ks[2]);
                }
            }
        }
        let pad_neg = (0..m * m * m)
            .map(|idx| {
                let (a, b, c) = (idx / (m * m), (idx / m) % m, idx % m);
                (((m - a) % m) * m + (m - b) % m) * m + (m - c) % m
            })
            .collect();
        let pad_keep = (0..m)
            .map(|i| (wavenumber(i, m).unsigned_abs() as usize) < n / 2)
            .collect();
        let k: Vec<f64> = (0..n).map(|i| deriv_wavenumber(i, n)).collect();
        let kvecs = (0..n * n * n)
            .map(|idx| [k[idx / (n * n)], k[(idx / n) % n], k[idx % n]])
            .collect();
        Spectral {
            n,
            m,
            base: Fft3::new(n),
            padded: Fft3::new(m),
            pad_map,
            pad_neg,
            pad_keep,
            k,
            kvecs,
            buf: vec![ZERO; n * n * n],
            pbuf: vec![ZERO; m * m * m],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn padded_n(&self) -> usize {
        self.m
    }

    /// Wavevector of flat index `idx`.
    #[inline]
    pub fn kvec(&self, idx: usize) -> [f64; 3] {
        self.kvecs[idx]
    }

    /// Normalized coefficients of real samples, two fields per transform.
    pub fn forward_real(&mut self, fields: &[&[f64]]) -> Vec<Vec<Complex64>> {
        let n3 = self.n * self.n * self.n;
        let scale = 1.0 / n3 as f64;
        let mut out = Vec::with_capacity(fields.len());
        for pair in fields.chunks(2) {
            for (z, v) in self.buf.iter_mut().zip(pair[0].iter()) {
                *z = Complex64::new(*v, 0.0);
            }
            if let Some(b) = pair.get(1) {
                for (z, v) in self.buf.iter_mut().zip(b.iter()) {
                    z.im = *v;
                }
            }
            self.base.forward(&mut self.buf);
            let (a, b) = unpack(&self.buf, self.n, scale);
            out.push(a);
            if pair.len() == 2 {
                out.push(b);
            }
        }
        out
    }

    /// Real samples of spectral fields on the base grid.
    pub fn inverse_real(&mut self, specs: &[&[Complex64]]) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(specs.len());
        for pair in specs.chunks(2) {
            self.buf.copy_from_slice(pair[0]);
            if let Some(b) = pair.get(1) {
                for (z, c) in self.buf.iter_mut().zip(b.iter()) {
                    *z += Complex64::new(-c.im, c.re);
                }
            }
            self.base.inverse(&mut self.buf);
            out.push(self.buf.iter().map(|z| z.re).collect());
            if pair.len() == 2 {
                out.push(self.buf.iter().map(|z| z.im).collect());
            }
        }
        out
    }

    /// Real samples on the padded grid of spectral fields given on the base
    /// grid (Nyquist modes dropped).
    pub fn inverse_padded(&mut self, specs: &[&[Complex64]]) -> Vec<Vec<f64>> {
        let mut buf = std::mem::take(&mut self.pbuf);
        let mut out = Vec::with_capacity(specs.len());
        for pair in specs.chunks(2) {
            self.inverse_padded_pair(pair[0], pair.get(1).copied(), &mut buf);
            out.push(buf.iter().map(|z| z.re).collect());
            if pair.len() == 2 {
                out.push(buf.iter().map(|z| z.im).collect());
            }
        }
        self.pbuf = buf;
        out
    }

    /// Padded-grid samples of two real fields packed as `a + i b`.
    pub fn inverse_padded_pair(
        &mut self,
        a: &[Complex64],
        b: Option<&[Complex64]>,
        out: &mut [Complex64],
    ) {
        out.fill(ZERO);
        for (src, &dst) in a.iter().zip(self.pad_map.iter()) {
            if dst != usize::MAX {
                out[dst] = *src;
            }
        }
        if let Some(b) = b {
            for (c, &dst) in b.iter().zip(self.pad_map.iter()) {
                if dst != usize::MAX {
                    out[dst] += Complex64::new(-c.im, c.re);
                }
            }
        }
        self.padded.inverse_sparse(out, &self.pad_keep);
    }

    /// Normalized base-grid coefficients of real samples on the padded grid,
    /// truncated to the retained modes.
    pub fn forward_padded(&mut self, fields: &[&[f64]]) -> Vec<Vec<Complex64>> {
        let mut buf = std::mem::take(&mut self.pbuf);
        let len = self.pad_map.len();
        let mut out = Vec::with_capacity(fields.len());
        for pair in fields.chunks(2) {
            for (z, v) in buf.iter_mut().zip(pair[0].iter()) {
                *z = Complex64::new(*v, 0.0);
            }
            if let Some(b) = pair.get(1) {
                for (z, v) in buf.iter_mut().zip(b.iter()) {
                    z.im = *v;
                }
            }
            let mut a = vec![ZERO; len];
            if pair.len() == 2 {
                let mut bb = vec![ZERO; len];
                self.forward_padded_pair(&mut buf, &mut a, Some(&mut bb));
                out.push(a);
                out.push(bb);
            } else {
                self.forward_padded_pair(&mut buf, &mut a, None);
                out.push(a);
            }
        }
        self.pbuf = buf;
        out
    }

    /// Coefficients of two real fields given packed as `a + i b` on the
    /// padded grid; `buf` is overwritten.
    pub fn forward_padded_pair(
        &mut self,
        buf: &mut [Complex64],
        a: &mut [Complex64],
        mut b: Option<&mut [Complex64]>,
    ) {
        let m = self.m;
        let scale = 1.0 / (m * m * m) as f64;
        self.padded.forward_truncated(buf, &self.pad_keep);
        for (idx, &src) in self.pad_map.iter().enumerate() {
            if src == usize::MAX {
                a[idx] = ZERO;
                if let Some(b) = b.as_deref_mut() {
                    b[idx] = ZERO;
                }
                continue;
            }
            let z = buf[src];
            let zn = buf[self.pad_neg[src]].conj();
            a[idx] = (z + zn) * (0.5 * scale);
            if let Some(b) = b.as_deref_mut() {
                b[idx] = Complex64::new(0.0, -0.5 * scale) * (z - zn);
            }
        }
    }
}

/// Split the transform of `a + i b` into the transforms of `a` and `b`.
fn unpack(z: &[Complex64], n: usize, scale: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut a = vec![ZERO; z.len()];
    let mut b = vec![ZERO; z.len()];
    for i in 0..n {
        let ni = (n - i) % n;
        for j in 0..n {
            let nj = (n - j) % n;
            for l in 0..n {
                let nl = (n - l) % n;
                let idx = (i * n + j) * n + l;
                let zk = z[idx];
                let zn = z[(ni * n + nj) * n + nl].conj();
                a[idx] = (zk + zn) * (0.5 * scale);
                b[idx] = Complex64::new(0.0, -0.5 * scale) * (zk - zn);
            }
        }
    }
    (a, b)
}

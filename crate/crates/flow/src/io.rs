//! Field snapshots on disk.
//!
//! Binary layout, all little-endian:
//!
//! ```text
//! u8   tag    0 = torus/periodic, 1 = ball/slip, 2 = ball/no-slip
//! u32  n
//! f64  time   NaN when the snapshot carries no time
//! f64  values 3 n^3 samples, component-major, row-major within a component
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use beltrami_core::ExtRational;

use crate::error::{FlowError, Result};
use crate::fields::{divergence, lq_norm, lq_norm_scalar, Boundary, Domain, SampledField};

fn tag(f: &SampledField) -> Result<u8> {
    match (f.domain, f.boundary) {
        (Domain::Torus, Boundary::Periodic) => Ok(0),
        (Domain::Ball, Boundary::Slip) => Ok(1),
        (Domain::Ball, Boundary::NoSlip) => Ok(2),
        (d, b) => Err(FlowError::Format(format!(
            "no tag for a {} field with {b:?} boundary",
            d.name()
        ))),
    }
}

pub fn write_field<W: Write>(mut w: W, f: &SampledField) -> Result<()> {
    let n = u32::try_from(f.n)
        .map_err(|_| FlowError::Format(format!("resolution {} too large", f.n)))?;
    w.write_all(&[tag(f)?])?;
    w.write_all(&n.to_le_bytes())?;
    w.write_all(&f.time.unwrap_or(f64::NAN).to_le_bytes())?;
    for c in &f.values {
        for v in c {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<SampledField> {
    let mut b1 = [0u8; 1];
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b1)?;
    let (domain, boundary) = match b1[0] {
        0 => (Domain::Torus, Boundary::Periodic),
        1 => (Domain::Ball, Boundary::Slip),
        2 => (Domain::Ball, Boundary::NoSlip),
        t => return Err(FlowError::Format(format!("unknown domain tag {t}"))),
    };
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b8)?;
    let time = f64::from_le_bytes(b8);
    let mut f = SampledField::zeros(domain, n).map_err(|e| FlowError::Format(e.to_string()))?;
    f.boundary = boundary;
    f.time = (!time.is_nan()).then_some(time);
    for c in f.values.iter_mut() {
        for v in c.iter_mut() {
            r.read_exact(&mut b8)?;
            *v = f64::from_le_bytes(b8);
        }
    }
    if r.read(&mut b1)? != 0 {
        return Err(FlowError::Format("trailing bytes after the payload".into()));
    }
    Ok(f)
}

pub fn save_field(path: impl AsRef<Path>, f: &SampledField) -> Result<()> {
    write_field(BufWriter::new(File::create(path)?), f)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<SampledField> {
    read_field(BufReader::new(File::open(path)?))
}

/// Shortest round-trip text of `x`, in exponent form outside `[1e-4, 1e6)`.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Two-column CSV (`quantity,value`) of basic diagnostics.
pub fn summary_csv(f: &SampledField) -> String {
    let two = ExtRational::int(2);
    let time = f.time.map_or(String::new(), format_real);
    let rows = [
        ("domain", f.domain.name().to_string()),
        ("n", f.n.to_string()),
        ("time", time),
        ("l2_norm", format_real(lq_norm(f, &two))),
        ("max_norm", format_real(lq_norm(f, &ExtRational::Infinity))),
        (
            "divergence_l2",
            format_real(lq_norm_scalar(&divergence(f), &two)),
        ),
    ];
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

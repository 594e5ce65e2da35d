//! Binary matrix dump: "PCHM", u32 d, u8 kind, then d² row-major (re, im)
//! pairs of little-endian f64.

use std::io::{self, Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAGIC: &[u8; 4] = b"PCHM";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum MatrixKind {
    Hermitian = 0,
    Unitary = 1,
}

pub fn write_pchm<W: Write>(mut w: W, m: &DMatrix<Complex64>, kind: MatrixKind) -> io::Result<()> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "matrix is not square"));
    }
    let d32 = u32::try_from(d).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "dimension exceeds u32"))?;
    w.write_all(MAGIC)?;
    w.write_all(&d32.to_le_bytes())?;
    w.write_all(&[kind as u8])?;
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_pchm<R: Read>(mut r: R) -> io::Result<(MatrixKind, DMatrix<Complex64>)> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("missing PCHM magic"));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let d = u32::from_le_bytes(b4) as usize;
    let mut b1 = [0u8; 1];
    r.read_exact(&mut b1)?;
    let kind = match b1[0] {
        0 => MatrixKind::Hermitian,
        1 => MatrixKind::Unitary,
        _ => return Err(bad("unknown matrix kind")),
    };
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    let mut b8 = [0u8; 8];
    for i in 0..d {
        for j in 0..d {
            r.read_exact(&mut b8)?;
            let re = f64::from_le_bytes(b8);
            r.read_exact(&mut b8)?;
            let im = f64::from_le_bytes(b8);
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok((kind, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let m = DMatrix::from_fn(2, 2, |i, j| Complex64::new(i as f64, j as f64 + 0.5));
        let mut buf = Vec::new();
        write_pchm(&mut buf, &m, MatrixKind::Unitary).unwrap();
        assert_eq!(buf.len(), 4 + 4 + 1 + 4 * 16);
        assert_eq!(&buf[..4], b"PCHM");
        assert_eq!(&buf[4..8], &2u32.to_le_bytes());
        assert_eq!(buf[8], 1);
        // second entry in row-major order is (0, 1)
        assert_eq!(&buf[9 + 16..9 + 24], &0.0f64.to_le_bytes());
        assert_eq!(&buf[9 + 24..9 + 32], &1.5f64.to_le_bytes());
        let (kind, back) = read_pchm(buf.as_slice()).unwrap();
        assert_eq!(kind, MatrixKind::Unitary);
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_bad_magic() {
        assert!(read_pchm(&b"XXXX\0\0\0\0\0"[..]).is_err());
    }
}

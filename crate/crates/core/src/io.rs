//! TEN1 binary tensor files.
//!
//! Layout, all little-endian: the 4 magic bytes `TEN1`, a `u32` order `N`,
//! `N` `u64` dimensions, then `Π dims` `f64` values in first-index-fastest
//! order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

pub const MAGIC: &[u8; 4] = b"TEN1";

pub fn write_ten1<W: Write>(mut w: W, t: &DenseTensor) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(t.order() as u32).to_le_bytes())?;
    for &d in t.dims() {
        w.write_all(&(d as u64).to_le_bytes())?;
    }
    for &x in t.data() {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ten1<R: Read>(mut r: R) -> Result<DenseTensor> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format("missing magic".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)
        .map_err(|_| Error::Format("truncated header".into()))?;
    let order = u32::from_le_bytes(b4) as usize;
    if order == 0 {
        return Err(Error::Format("order must be positive".into()));
    }
    let mut dims = Vec::with_capacity(order);
    let mut len: usize = 1;
    for _ in 0..order {
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)
            .map_err(|_| Error::Format("truncated dims".into()))?;
        let d =
            usize::try_from(u64::from_le_bytes(b8)).map_err(|_| Error::Format("dimension overflows usize".into()))?;
        len = len
            .checked_mul(d)
            .ok_or_else(|| Error::Format("element count overflows".into()))?;
        dims.push(d);
    }
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != len * 8 {
        return Err(Error::Format(format!(
            "expected {} payload bytes, found {}",
            len * 8,
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    DenseTensor::new(dims, data).map_err(|e| Error::Format(e.to_string()))
}

pub fn save_ten1(path: impl AsRef<Path>, t: &DenseTensor) -> Result<()> {
    write_ten1(BufWriter::new(File::create(path)?), t)
}

pub fn load_ten1(path: impl AsRef<Path>) -> Result<DenseTensor> {
    read_ten1(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let t = DenseTensor::new(vec![2, 1], vec![1.5, -2.0]).unwrap();
        let mut buf = Vec::new();
        write_ten1(&mut buf, &t).unwrap();
        assert_eq!(&buf[..4], b"TEN1");
        assert_eq!(&buf[4..8], &2u32.to_le_bytes());
        assert_eq!(&buf[8..16], &2u64.to_le_bytes());
        assert_eq!(&buf[16..24], &1u64.to_le_bytes());
        assert_eq!(&buf[24..32], &1.5f64.to_le_bytes());
        assert_eq!(buf.len(), 40);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(read_ten1(&b"TEN2\x01\0\0\0"[..]), Err(Error::Format(_))));
        let t = DenseTensor::new(vec![3], vec![1., 2., 3.]).unwrap();
        let mut buf = Vec::new();
        write_ten1(&mut buf, &t).unwrap();
        buf.pop();
        assert!(matches!(read_ten1(&buf[..]), Err(Error::Format(_))));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            dims in prop::collection::vec(1usize..5, 1..5),
            seed in any::<u64>(),
        ) {
            let n: usize = dims.iter().product();
            // arbitrary bit patterns, including NaN payloads and signed zeros
            let data: Vec<f64> = (0..n as u64)
                .map(|k| f64::from_bits(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k)))
                .collect();
            let t = DenseTensor::new(dims, data).unwrap();
            let mut buf = Vec::new();
            write_ten1(&mut buf, &t).unwrap();
            let back = read_ten1(&buf[..]).unwrap();
            prop_assert_eq!(back.dims(), t.dims());
            let same = back.data().iter().zip(t.data()).all(|(a, b)| a.to_bits() == b.to_bits());
            prop_assert!(same);
        }
    }
}

//! Wire layout for cross-worker messages, defined so the in-process channel
//! transport can be swapped for a socket one: tag byte, epoch u32, layer u16,
//! source u16, dest u16, row count u32, then row-major payload.

use ndarray::Array2;

use crate::nn::Real;

pub const HEADER_BYTES: usize = 1 + 4 + 2 + 2 + 2 + 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Tag {
    IndexSets = 1,
    LayerFeatures = 2,
    LayerGrads = 3,
    ReduceChunk = 4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub tag: Tag,
    pub epoch: u32,
    pub layer: u16,
    pub src: u16,
    pub dst: u16,
    pub rows: u32,
}

pub fn encode_header(h: &Header, buf: &mut Vec<u8>) {
    buf.push(h.tag as u8);
    buf.extend_from_slice(&h.epoch.to_le_bytes());
    buf.extend_from_slice(&h.layer.to_le_bytes());
    buf.extend_from_slice(&h.src.to_le_bytes());
    buf.extend_from_slice(&h.dst.to_le_bytes());
    buf.extend_from_slice(&h.rows.to_le_bytes());
}

pub fn decode_header(buf: &[u8]) -> Option<Header> {
    if buf.len() < HEADER_BYTES {
        return None;
    }
    let tag = match buf[0] {
        1 => Tag::IndexSets,
        2 => Tag::LayerFeatures,
        3 => Tag::LayerGrads,
        4 => Tag::ReduceChunk,
        _ => return None,
    };
    Some(Header {
        tag,
        epoch: u32::from_le_bytes(buf[1..5].try_into().unwrap()),
        layer: u16::from_le_bytes(buf[5..7].try_into().unwrap()),
        src: u16::from_le_bytes(buf[7..9].try_into().unwrap()),
        dst: u16::from_le_bytes(buf[9..11].try_into().unwrap()),
        rows: u32::from_le_bytes(buf[11..15].try_into().unwrap()),
    })
}

/// Encode a feature/gradient block behind a header.
pub fn encode_rows<F: Real>(h: &Header, rows: &Array2<F>) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_BYTES + rows.len() * std::mem::size_of::<F>());
    encode_header(h, &mut buf);
    for &x in rows.iter() {
        let v = x.to_f64().expect("finite scalar");
        if std::mem::size_of::<F>() == 4 {
            buf.extend_from_slice(&(v as f32).to_le_bytes());
        } else {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    buf
}

pub fn decode_rows<F: Real>(buf: &[u8], cols: usize) -> Option<(Header, Array2<F>)> {
    let h = decode_header(buf)?;
    let width = std::mem::size_of::<F>();
    let body = &buf[HEADER_BYTES..];
    let n = h.rows as usize;
    if body.len() != n * cols * width {
        return None;
    }
    let mut data = Vec::with_capacity(n * cols);
    for chunk in body.chunks_exact(width) {
        let v = if width == 4 {
            f32::from_le_bytes(chunk.try_into().unwrap()) as f64
        } else {
            f64::from_le_bytes(chunk.try_into().unwrap())
        };
        data.push(F::from_f64(v).unwrap());
    }
    Some((h, Array2::from_shape_vec((n, cols), data).ok()?))
}

/// Encode an index broadcast (ids as u32 payload rows).
pub fn encode_indices(h: &Header, ids: &[usize]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_BYTES + 4 * ids.len());
    encode_header(h, &mut buf);
    for &id in ids {
        buf.extend_from_slice(&(id as u32).to_le_bytes());
    }
    buf
}

/// On-wire size of a scalar block message without building it.
pub fn rows_message_bytes(rows: usize, cols: usize, scalar_width: usize) -> u64 {
    (HEADER_BYTES + rows * cols * scalar_width) as u64
}

pub fn index_message_bytes(count: usize) -> u64 {
    (HEADER_BYTES + 4 * count) as u64
}

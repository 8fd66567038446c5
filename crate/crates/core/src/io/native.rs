//! The native `VKTVOL01` volume format.
//!
//! All multi-byte fields are little-endian.
//!
//! ```text
//! magic        8 bytes  "VKTVOL01"
//! volumeType   u8       0 structured, 1 hierarchical
//! structured:  dims 3*u32, formatCode u8, cellSize 3*f32, mappingLo f32, mappingHi f32
//!              payload: cells x-fastest, formatCode-sized
//! hierarchical: mappingLo f32, mappingHi f32, subgridCount u32,
//!              per subgrid: lowerLogical 3*i32, dimsCells 3*u32, level u32
//!              payload: f32 subgrid data concatenated in header order, x-fastest
//! ```

use crate::amr::{HierarchicalVolume, SubgridInfo};
use crate::any_volume::{Volume, VolumeRef};
use crate::error::{Result, VktError};
use crate::format::{DataFormat, VoxelMapping};
use crate::geom::{Box3i, Vec3, Vec3i};
use crate::io::source::DataSource;
use crate::scalar::Scalar;
use crate::volume::StructuredVolume;

pub const MAGIC: &[u8; 8] = b"VKTVOL01";
pub const STRUCTURED_HEADER_LEN: u64 = 8 + 1 + 12 + 1 + 12 + 8;
const SUBGRID_RECORD_LEN: usize = 28;

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredHeader {
    pub dims: Vec3i,
    pub format: DataFormat,
    pub cell_size: [f32; 3],
    pub mapping: [f32; 2],
}

impl StructuredHeader {
    pub fn payload_len(&self) -> u64 {
        self.dims.volume() as u64 * self.format.bytes_per_cell() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalHeader {
    pub mapping: [f32; 2],
    pub subgrids: Vec<SubgridInfo>,
}

impl HierarchicalHeader {
    pub fn payload_len(&self) -> u64 {
        self.subgrids.iter().map(|s| s.cell_count() as u64 * 4).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VolumeHeader {
    Structured(StructuredHeader),
    Hierarchical(HierarchicalHeader),
}

struct Reader<'a> {
    src: &'a mut DataSource,
    consumed: u64,
}

impl Reader<'_> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        let n = self.src.read(&mut b)?;
        self.consumed += n as u64;
        if n < N {
            return Err(VktError::TruncatedPayload { expected: self.consumed - n as u64 + N as u64, actual: self.consumed });
        }
        Ok(b)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.bytes()?))
    }
    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.bytes()?))
    }
}

/// Parses a header at the source's current position.
pub fn read_header(src: &mut DataSource) -> Result<VolumeHeader> {
    let mut r = Reader { src, consumed: 0 };
    let mut magic = [0u8; 8];
    let n = r.src.read(&mut magic)?;
    if n < 8 || &magic != MAGIC {
        return Err(VktError::BadMagic);
    }
    match r.u8()? {
        0 => {
            let dims = Vec3::new(r.u32()? as i64, r.u32()? as i64, r.u32()? as i64);
            let format = DataFormat::from_code(r.u8()?)?;
            let cell_size = [r.f32()?, r.f32()?, r.f32()?];
            let mapping = [r.f32()?, r.f32()?];
            Ok(VolumeHeader::Structured(StructuredHeader { dims, format, cell_size, mapping }))
        }
        1 => {
            let mapping = [r.f32()?, r.f32()?];
            let count = r.u32()? as usize;
            let mut subgrids = Vec::with_capacity(count.min(1 << 20));
            let mut offset = 0;
            for _ in 0..count {
                let lower = Vec3::new(r.i32()? as i64, r.i32()? as i64, r.i32()? as i64);
                let dims = Vec3::new(r.u32()? as i64, r.u32()? as i64, r.u32()? as i64);
                let level = r.u32()?;
                let info = SubgridInfo { level, lower, dims, offset };
                offset += info.cell_count();
                subgrids.push(info);
            }
            Ok(VolumeHeader::Hierarchical(HierarchicalHeader { mapping, subgrids }))
        }
        _ => Err(VktError::BadMagic),
    }
}

fn read_payload(src: &mut DataSource, len: u64) -> Result<Vec<u8>> {
    if let Some(total) = src.len() {
        let avail = total.saturating_sub(src.position());
        if avail < len {
            return Err(VktError::TruncatedPayload { expected: len, actual: avail });
        }
    }
    let mut buf = vec![0u8; len as usize];
    let n = src.read(&mut buf)?;
    if (n as u64) < len {
        return Err(VktError::TruncatedPayload { expected: len, actual: n as u64 });
    }
    Ok(buf)
}

fn mapping_from<T: Scalar>(m: [f32; 2]) -> Result<VoxelMapping<T>> {
    VoxelMapping::new(T::lit(m[0] as f64), T::lit(m[1] as f64))
}

/// Reads one complete volume of either type.
pub fn read_volume<T: Scalar>(src: &mut DataSource) -> Result<Volume<T>> {
    match read_header(src)? {
        VolumeHeader::Structured(h) => {
            let payload = read_payload(src, h.payload_len())?;
            let cell_size = Vec3::from_array(h.cell_size.map(|c| T::lit(c as f64)));
            Ok(Volume::Structured(StructuredVolume::from_bytes(
                h.dims,
                h.format,
                cell_size,
                mapping_from(h.mapping)?,
                payload,
            )?))
        }
        VolumeHeader::Hierarchical(h) => {
            let payload = read_payload(src, h.payload_len())?;
            Ok(Volume::Hierarchical(HierarchicalVolume::from_parts(
                h.subgrids,
                mapping_from(h.mapping)?,
                payload,
            )?))
        }
    }
}

fn dims_u32(dims: Vec3i) -> Result<[u32; 3]> {
    let mut out = [0u32; 3];
    for a in 0..3 {
        out[a] = u32::try_from(dims[a]).map_err(|_| VktError::invalid(format!("dimension {} exceeds u32", dims[a])))?;
    }
    Ok(out)
}

pub fn encode_structured_header<T: Scalar>(v: &StructuredVolume<T>) -> Result<Vec<u8>> {
    let mut h = Vec::with_capacity(STRUCTURED_HEADER_LEN as usize);
    h.extend_from_slice(MAGIC);
    h.push(0);
    for d in dims_u32(v.dims())? {
        h.extend_from_slice(&d.to_le_bytes());
    }
    h.push(v.format().code());
    for c in v.cell_size().to_array() {
        h.extend_from_slice(&c.as_f32().to_le_bytes());
    }
    let m = v.mapping();
    h.extend_from_slice(&m.lo.as_f32().to_le_bytes());
    h.extend_from_slice(&m.hi.as_f32().to_le_bytes());
    Ok(h)
}

pub fn encode_hierarchical_header<T: Scalar>(hv: &HierarchicalVolume<T>) -> Result<Vec<u8>> {
    let mut h = Vec::with_capacity(8 + 1 + 12 + SUBGRID_RECORD_LEN * hv.subgrids().len());
    h.extend_from_slice(MAGIC);
    h.push(1);
    let m = hv.mapping();
    h.extend_from_slice(&m.lo.as_f32().to_le_bytes());
    h.extend_from_slice(&m.hi.as_f32().to_le_bytes());
    h.extend_from_slice(&(hv.subgrids().len() as u32).to_le_bytes());
    for sg in hv.subgrids() {
        for a in 0..3 {
            let lo = i32::try_from(sg.lower[a]).map_err(|_| VktError::invalid("subgrid corner exceeds i32"))?;
            h.extend_from_slice(&lo.to_le_bytes());
        }
        for d in dims_u32(sg.dims)? {
            h.extend_from_slice(&d.to_le_bytes());
        }
        h.extend_from_slice(&sg.level.to_le_bytes());
    }
    Ok(h)
}

/// Writes header and payload, then flushes.
pub fn write_volume<'a, T: Scalar>(dst: &mut DataSource, v: impl Into<VolumeRef<'a, T>>) -> Result<()> {
    if !dst.is_writable() {
        return Err(VktError::IoFailure(std::io::Error::new(
            std::io::ErrorKind::PermissionDenied,
            "data source is not writable",
        )));
    }
    match v.into() {
        VolumeRef::Structured(s) => {
            dst.write(&encode_structured_header(s)?)?;
            dst.write(&s.bytes())?;
        }
        VolumeRef::Hierarchical(h) => {
            dst.write(&encode_hierarchical_header(h)?)?;
            dst.write(&h.bytes())?;
        }
    }
    dst.flush()
}

/// Serializes a volume to bytes in the native format.
pub fn to_bytes<'a, T: Scalar>(v: impl Into<VolumeRef<'a, T>>) -> Result<Vec<u8>> {
    let mut dst = DataSource::memory();
    write_volume(&mut dst, v)?;
    Ok(dst.into_bytes().expect("memory source"))
}

pub fn from_bytes<T: Scalar>(bytes: Vec<u8>) -> Result<Volume<T>> {
    read_volume(&mut DataSource::read_only_bytes(bytes))
}

fn structured_header_at(src: &mut DataSource) -> Result<(u64, StructuredHeader)> {
    if !src.is_seekable() {
        return Err(VktError::NotSeekable);
    }
    let base = src.position();
    match read_header(src)? {
        VolumeHeader::Structured(h) => Ok((base, h)),
        VolumeHeader::Hierarchical(_) => Err(VktError::invalid("range I/O needs a structured volume")),
    }
}

/// Reads only the cells in `roi` from a structured volume, row by row.
/// The volume starts at the current position, which is restored afterwards.
pub fn read_range<T: Scalar>(src: &mut DataSource, roi: Box3i) -> Result<StructuredVolume<T>> {
    let (base, h) = structured_header_at(src)?;
    let full = Box3i::from_dims(h.dims);
    if roi.is_empty() {
        return Err(VktError::EmptyRange);
    }
    if !full.contains_box(&roi) {
        return Err(VktError::RangeOutOfBounds { roi, dims: h.dims });
    }
    let cell_size = Vec3::from_array(h.cell_size.map(|c| T::lit(c as f64)));
    let mut out = StructuredVolume::new(roi.size(), h.format, cell_size, mapping_from(h.mapping)?)?;
    let bpc = h.format.bytes_per_cell() as u64;
    let row = roi.size().x as usize * bpc as usize;
    let payload = base + STRUCTURED_HEADER_LEN;
    let out_bytes = out.bytes_mut();
    let mut o = 0;
    for z in roi.lower.z..roi.upper.z {
        for y in roi.lower.y..roi.upper.y {
            let cell = (roi.lower.x + h.dims.x * (y + h.dims.y * z)) as u64;
            src.seek(payload + cell * bpc)?;
            let n = src.read(&mut out_bytes[o..o + row])?;
            if n < row {
                return Err(VktError::TruncatedPayload { expected: row as u64, actual: n as u64 });
            }
            o += row;
        }
    }
    src.seek(base)?;
    Ok(out)
}

/// Overwrites the sub-box of a structured volume file starting at `first_cell` with `v`.
pub fn write_range<T: Scalar>(dst: &mut DataSource, v: &StructuredVolume<T>, first_cell: Vec3i) -> Result<()> {
    let (base, h) = structured_header_at(dst)?;
    let target = Box3i::new(first_cell, first_cell + v.dims());
    if !Box3i::from_dims(h.dims).contains_box(&target) {
        return Err(VktError::RangeOutOfBounds { roi: target, dims: h.dims });
    }
    if h.format != v.format() {
        return Err(VktError::invalid(format!(
            "format mismatch: file holds {:?}, volume is {:?}",
            h.format,
            v.format()
        )));
    }
    let bpc = h.format.bytes_per_cell() as u64;
    let row = v.dims().x as usize * bpc as usize;
    let payload = base + STRUCTURED_HEADER_LEN;
    let bytes = v.bytes();
    let mut o = 0;
    for z in target.lower.z..target.upper.z {
        for y in target.lower.y..target.upper.y {
            let cell = (target.lower.x + h.dims.x * (y + h.dims.y * z)) as u64;
            dst.seek(payload + cell * bpc)?;
            dst.write(&bytes[o..o + row])?;
            o += row;
        }
    }
    dst.seek(base)?;
    dst.flush()
}

//! Map decoding/encoding and texture sampling.
//!
//! The only image formats are binary PGM (P5, 8- or 16-bit) for grayscale
//! maps and binary PPM (P6) for color maps and rendered frames. Both are
//! byte-exact and diffable, which keeps golden-image tests trivial. A PPM has
//! no alpha channel, so a coverage map's alpha arrives as a paired
//! `<name>.alpha.pgm` file next to the P6 file.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::math::clamp01;

#[derive(Debug, thiserror::Error)]
pub enum AssetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed {format} header: {reason}")]
    Header { path: PathBuf, format: &'static str, reason: String },
    #[error("{path}: unsupported max sample value {maxval} (depth must be 8 or 16 bit)")]
    UnsupportedDepth { path: PathBuf, maxval: u32 },
    #[error("{path}: image is {width}x{height}, both dimensions must be >= 2")]
    TooSmall { path: PathBuf, width: usize, height: usize },
    #[error("{path}: truncated payload, expected {expected} bytes but found {found}")]
    Truncated { path: PathBuf, expected: usize, found: usize },
    #[error("{path}: alpha map is {alpha_w}x{alpha_h} but color map is {w}x{h}")]
    AlphaMismatch { path: PathBuf, alpha_w: usize, alpha_h: usize, w: usize, h: usize },
}

/// Grayscale map with samples normalized to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GrayMap {
    pub width: usize,
    pub height: usize,
    pub bit_depth: u8,
    samples: Vec<f64>,
}

impl GrayMap {
    pub fn from_samples(width: usize, height: usize, samples: Vec<f64>) -> GrayMap {
        assert_eq!(samples.len(), width * height);
        debug_assert!(samples.iter().all(|s| (0.0..=1.0).contains(s)));
        GrayMap { width, height, bit_depth: 8, samples }
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Bilinear sample with the given wrap mode; texel centers sit at
    /// (i + 0.5) / width.
    pub fn sample(&self, u: f64, v: f64, wrap: WrapMode) -> f64 {
        let lookup = BilinearLookup::new(u, v, self.width, self.height, wrap);
        lookup.blend(|x, y| self.get(x, y))
    }
}

/// Four-channel map, all channels normalized to [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RgbaMap {
    pub width: usize,
    pub height: usize,
    texels: Vec<[f64; 4]>,
}

impl RgbaMap {
    pub fn from_texels(width: usize, height: usize, texels: Vec<[f64; 4]>) -> RgbaMap {
        assert_eq!(texels.len(), width * height);
        RgbaMap { width, height, texels }
    }

    pub fn get(&self, x: usize, y: usize) -> [f64; 4] {
        self.texels[y * self.width + x]
    }

    pub fn sample(&self, u: f64, v: f64, wrap: WrapMode) -> [f64; 4] {
        let lookup = BilinearLookup::new(u, v, self.width, self.height, wrap);
        let mut out = [0.0; 4];
        for (c, slot) in out.iter_mut().enumerate() {
            *slot = lookup.blend(|x, y| self.get(x, y)[c]);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WrapMode {
    Repeat,
    Clamp,
}

/// Texture: color texels plus an optional height channel used for parallax.
#[derive(Debug, Clone)]
pub struct Texture {
    pub pixels: RgbaMap,
    pub height: Option<GrayMap>,
    pub wrap: WrapMode,
}

impl Texture {
    pub fn new(pixels: RgbaMap, height: Option<GrayMap>, wrap: WrapMode) -> Texture {
        if let Some(h) = &height {
            assert_eq!((h.width, h.height), (pixels.width, pixels.height));
        }
        Texture { pixels, height, wrap }
    }

    pub fn sample(&self, u: f64, v: f64) -> [f64; 4] {
        self.pixels.sample(u, v, self.wrap)
    }

    /// Height sample in [0, 1]; 0 when the texture carries no height channel.
    pub fn sample_height(&self, u: f64, v: f64) -> f64 {
        match &self.height {
            Some(h) => h.sample(u, v, self.wrap),
            None => 0.0,
        }
    }
}

/// Shared bilinear footprint: wrap the uv, find the 4 neighbor texels and
/// their blend weights.
struct BilinearLookup {
    x0: usize,
    x1: usize,
    y0: usize,
    y1: usize,
    fx: f64,
    fy: f64,
}

impl BilinearLookup {
    fn new(u: f64, v: f64, width: usize, height: usize, wrap: WrapMode) -> BilinearLookup {
        let (u, v) = match wrap {
            WrapMode::Repeat => (u.rem_euclid(1.0), v.rem_euclid(1.0)),
            WrapMode::Clamp => (clamp01(u), clamp01(v)),
        };
        let x = u * width as f64 - 0.5;
        let y = v * height as f64 - 0.5;
        let ix = x.floor();
        let iy = y.floor();
        let fx = x - ix;
        let fy = y - iy;
        let (x0, x1, y0, y1) = match wrap {
            WrapMode::Repeat => (
                wrap_index(ix as i64, width),
                wrap_index(ix as i64 + 1, width),
                wrap_index(iy as i64, height),
                wrap_index(iy as i64 + 1, height),
            ),
            WrapMode::Clamp => (
                clamp_index(ix as i64, width),
                clamp_index(ix as i64 + 1, width),
                clamp_index(iy as i64, height),
                clamp_index(iy as i64 + 1, height),
            ),
        };
        BilinearLookup { x0, x1, y0, y1, fx, fy }
    }

    fn blend(&self, fetch: impl Fn(usize, usize) -> f64) -> f64 {
        let top = fetch(self.x0, self.y0) * (1.0 - self.fx) + fetch(self.x1, self.y0) * self.fx;
        let bot = fetch(self.x0, self.y1) * (1.0 - self.fx) + fetch(self.x1, self.y1) * self.fx;
        top * (1.0 - self.fy) + bot * self.fy
    }
}

fn wrap_index(i: i64, n: usize) -> usize {
    (i.rem_euclid(n as i64)) as usize
}

fn clamp_index(i: i64, n: usize) -> usize {
    i.clamp(0, n as i64 - 1) as usize
}

// ---------------------------------------------------------------------------
// PNM decoding
// ---------------------------------------------------------------------------

struct PnmHeader {
    width: usize,
    height: usize,
    maxval: u32,
    payload_offset: usize,
}

/// Parse a binary PNM header (`P5` or `P6`), returning the header fields and
/// the byte offset of the raster payload.
fn parse_pnm_header(
    bytes: &[u8],
    magic: &str,
    format: &'static str,
    path: &Path,
) -> Result<PnmHeader, AssetError> {
    let header_err = |reason: String| AssetError::Header {
        path: path.to_path_buf(),
        format,
        reason,
    };

    if bytes.len() < 2 || &bytes[..2] != magic.as_bytes() {
        return Err(header_err(format!("expected magic {magic:?}")));
    }

    // Tokenize: whitespace-separated fields, '#' starts a comment to EOL.
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // skip whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(header_err("header ended early".into())),
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err(header_err(format!(
                "expected decimal field, found byte 0x{:02x}",
                bytes[start]
            )));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("digits are utf8");
        *field = text
            .parse::<u32>()
            .map_err(|e| header_err(format!("field {text:?}: {e}")))?;
    }

    // exactly one whitespace byte separates maxval from the payload
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(header_err("missing whitespace before payload".into())),
    }

    Ok(PnmHeader {
        width: fields[0] as usize,
        height: fields[1] as usize,
        maxval: fields[2],
        payload_offset: pos,
    })
}

fn read_file(path: &Path) -> Result<Vec<u8>, AssetError> {
    fs::read(path).map_err(|source| AssetError::Io { path: path.to_path_buf(), source })
}

fn check_dims(path: &Path, width: usize, height: usize) -> Result<(), AssetError> {
    if width < 2 || height < 2 {
        return Err(AssetError::TooSmall { path: path.to_path_buf(), width, height });
    }
    Ok(())
}

fn check_payload(path: &Path, expected: usize, found: usize) -> Result<(), AssetError> {
    if found < expected {
        return Err(AssetError::Truncated { path: path.to_path_buf(), expected, found });
    }
    Ok(())
}

fn depth_of(path: &Path, maxval: u32) -> Result<u8, AssetError> {
    match maxval {
        255 => Ok(8),
        65535 => Ok(16),
        other => Err(AssetError::UnsupportedDepth { path: path.to_path_buf(), maxval: other }),
    }
}

/// Decode a binary PGM (P5) into a normalized grayscale map.
pub fn load_graymap(path: impl AsRef<Path>) -> Result<GrayMap, AssetError> {
    let path = path.as_ref();
    let bytes = read_file(path)?;
    let hdr = parse_pnm_header(&bytes, "P5", "PGM", path)?;
    let depth = depth_of(path, hdr.maxval)?;
    check_dims(path, hdr.width, hdr.height)?;

    let count = hdr.width * hdr.height;
    let payload = &bytes[hdr.payload_offset..];
    let scale = 1.0 / hdr.maxval as f64;
    let samples = match depth {
        8 => {
            check_payload(path, count, payload.len())?;
            payload[..count].iter().map(|&b| b as f64 * scale).collect()
        }
        _ => {
            check_payload(path, count * 2, payload.len())?;
            payload[..count * 2]
                .chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64 * scale)
                .collect()
        }
    };
    Ok(GrayMap { width: hdr.width, height: hdr.height, bit_depth: depth, samples })
}

/// Path of the alpha companion for a P6 file: `maps/cov.ppm` ->
/// `maps/cov.alpha.pgm`.
pub fn alpha_companion_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.alpha.pgm"))
}

/// Decode a binary PPM (P6), merging the paired `.alpha.pgm` when present.
/// Without a companion the alpha channel is 1 everywhere.
pub fn load_rgbamap(path: impl AsRef<Path>) -> Result<RgbaMap, AssetError> {
    let path = path.as_ref();
    let bytes = read_file(path)?;
    let hdr = parse_pnm_header(&bytes, "P6", "PPM", path)?;
    let depth = depth_of(path, hdr.maxval)?;
    check_dims(path, hdr.width, hdr.height)?;

    let count = hdr.width * hdr.height;
    let payload = &bytes[hdr.payload_offset..];
    let scale = 1.0 / hdr.maxval as f64;
    let mut texels: Vec<[f64; 4]> = Vec::with_capacity(count);
    match depth {
        8 => {
            check_payload(path, count * 3, payload.len())?;
            for c in payload[..count * 3].chunks_exact(3) {
                texels.push([c[0] as f64 * scale, c[1] as f64 * scale, c[2] as f64 * scale, 1.0]);
            }
        }
        _ => {
            check_payload(path, count * 6, payload.len())?;
            for c in payload[..count * 6].chunks_exact(6) {
                texels.push([
                    u16::from_be_bytes([c[0], c[1]]) as f64 * scale,
                    u16::from_be_bytes([c[2], c[3]]) as f64 * scale,
                    u16::from_be_bytes([c[4], c[5]]) as f64 * scale,
                    1.0,
                ]);
            }
        }
    }

    let alpha_path = alpha_companion_path(path);
    if alpha_path.exists() {
        let alpha = load_graymap(&alpha_path)?;
        if (alpha.width, alpha.height) != (hdr.width, hdr.height) {
            return Err(AssetError::AlphaMismatch {
                path: alpha_path,
                alpha_w: alpha.width,
                alpha_h: alpha.height,
                w: hdr.width,
                h: hdr.height,
            });
        }
        for (texel, &a) in texels.iter_mut().zip(alpha.samples()) {
            texel[3] = a;
        }
    }

    Ok(RgbaMap { width: hdr.width, height: hdr.height, texels })
}

// ---------------------------------------------------------------------------
// PNM encoding
// ---------------------------------------------------------------------------

/// Quantize a normalized sample to 8 bits, rounding half up.
pub fn quantize8(x: f64) -> u8 {
    (clamp01(x) * 255.0 + 0.5).floor() as u8
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), AssetError> {
    let mut f = fs::File::create(path)
        .map_err(|source| AssetError::Io { path: path.to_path_buf(), source })?;
    f.write_all(bytes)
        .map_err(|source| AssetError::Io { path: path.to_path_buf(), source })
}

/// Encode raw 8-bit RGB rows as a binary PPM.
pub fn write_ppm_bytes(
    path: impl AsRef<Path>,
    width: usize,
    height: usize,
    rgb: &[u8],
) -> Result<(), AssetError> {
    assert_eq!(rgb.len(), width * height * 3);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    write_bytes(path.as_ref(), &out)
}

/// Write a normalized [0,1] RGB buffer (row-major, top-to-bottom) as an 8-bit
/// binary PPM. Identical input produces byte-identical files.
pub fn write_frame(
    path: impl AsRef<Path>,
    width: usize,
    height: usize,
    rgb: &[f64],
) -> Result<(), AssetError> {
    assert_eq!(rgb.len(), width * height * 3);
    let bytes: Vec<u8> = rgb.iter().map(|&x| quantize8(x)).collect();
    write_ppm_bytes(path, width, height, &bytes)
}

/// Write a grayscale map as an 8-bit binary PGM.
pub fn write_graymap(path: impl AsRef<Path>, map: &GrayMap) -> Result<(), AssetError> {
    let mut out = format!("P5\n{} {}\n255\n", map.width, map.height).into_bytes();
    out.extend(map.samples.iter().map(|&s| quantize8(s)));
    write_bytes(path.as_ref(), &out)
}

/// Write the RGB channels as a PPM; when `with_alpha` is set, also write the
/// `.alpha.pgm` companion.
pub fn write_rgbamap(
    path: impl AsRef<Path>,
    map: &RgbaMap,
    with_alpha: bool,
) -> Result<(), AssetError> {
    let path = path.as_ref();
    let mut rgb = Vec::with_capacity(map.texels.len() * 3);
    for t in &map.texels {
        rgb.extend_from_slice(&[quantize8(t[0]), quantize8(t[1]), quantize8(t[2])]);
    }
    write_ppm_bytes(path, map.width, map.height, &rgb)?;
    if with_alpha {
        let alpha = GrayMap::from_samples(
            map.width,
            map.height,
            map.texels.iter().map(|t| t[3]).collect(),
        );
        write_graymap(alpha_companion_path(path), &alpha)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray(width: usize, height: usize, values: &[f64]) -> GrayMap {
        GrayMap::from_samples(width, height, values.to_vec())
    }

    #[test]
    fn pgm8_endpoint_normalization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.pgm");
        std::fs::write(&path, [b"P5\n2 2\n255\n".as_ref(), &[255, 0, 128, 64]].concat()).unwrap();
        let map = load_graymap(&path).unwrap();
        assert_eq!(map.bit_depth, 8);
        assert_eq!(map.get(0, 0), 1.0);
        assert_eq!(map.get(1, 0), 0.0);
    }

    #[test]
    fn pgm16_endpoint_normalization() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g16.pgm");
        let mut bytes = b"P5\n2 2\n65535\n".to_vec();
        for v in [0u16, 65535, 32768, 1] {
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        std::fs::write(&path, bytes).unwrap();
        let map = load_graymap(&path).unwrap();
        assert_eq!(map.bit_depth, 16);
        assert_eq!(map.get(0, 0), 0.0);
        assert_eq!(map.get(1, 0), 1.0);
    }

    #[test]
    fn truncated_p6_names_expected_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.ppm");
        std::fs::write(&path, [b"P6\n2 2\n255\n".as_ref(), &[1, 2, 3]].concat()).unwrap();
        match load_rgbamap(&path) {
            Err(AssetError::Truncated { expected, found, .. }) => {
                assert_eq!(expected, 12);
                assert_eq!(found, 3);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unsupported_depth_and_tiny_dims() {
        let dir = tempfile::tempdir().unwrap();
        let bad_depth = dir.path().join("d.pgm");
        std::fs::write(&bad_depth, b"P5\n2 2\n100\n....").unwrap();
        assert!(matches!(load_graymap(&bad_depth), Err(AssetError::UnsupportedDepth { maxval: 100, .. })));

        let tiny = dir.path().join("t.pgm");
        std::fs::write(&tiny, b"P5\n1 2\n255\n..").unwrap();
        assert!(matches!(load_graymap(&tiny), Err(AssetError::TooSmall { .. })));
    }

    #[test]
    fn header_comments_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.pgm");
        std::fs::write(&path, [b"P5\n# made by hand\n2 # w\n2\n255\n".as_ref(), &[0, 0, 0, 0]].concat())
            .unwrap();
        assert!(load_graymap(&path).is_ok());
    }

    #[test]
    fn alpha_companion_is_merged() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cov.ppm");
        std::fs::write(&path, [b"P6\n2 2\n255\n".as_ref(), &[255u8; 12]].concat()).unwrap();
        std::fs::write(dir.path().join("cov.alpha.pgm"), [b"P5\n2 2\n255\n".as_ref(), &[0, 51, 102, 255]].concat())
            .unwrap();
        let map = load_rgbamap(&path).unwrap();
        assert_eq!(map.get(0, 0)[3], 0.0);
        assert_eq!(map.get(1, 1)[3], 1.0);
        assert!((map.get(1, 0)[3] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn sample_at_texel_center_is_exact() {
        let map = gray(2, 2, &[0.0, 1.0, 0.25, 0.75]);
        assert_eq!(map.sample(0.25, 0.25, WrapMode::Clamp), 0.0);
        assert_eq!(map.sample(0.75, 0.25, WrapMode::Clamp), 1.0);
        assert_eq!(map.sample(0.75, 0.75, WrapMode::Clamp), 0.75);
    }

    #[test]
    fn sample_midway_is_average() {
        let map = gray(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(map.sample(0.5, 0.25, WrapMode::Clamp), 0.5);
    }

    #[test]
    fn repeat_wrap_is_periodic() {
        let map = gray(4, 2, &[0.0, 0.25, 0.5, 1.0, 0.0, 0.25, 0.5, 1.0]);
        let a = map.sample(0.25, 0.0, WrapMode::Repeat);
        let b = map.sample(1.25, 0.0, WrapMode::Repeat);
        assert_eq!(a, b);
    }

    #[test]
    fn frame_layout_matches_spec() {
        let dir = tempfile::tempdir().unwrap();
        let one = dir.path().join("one.ppm");
        write_frame(&one, 1, 1, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(std::fs::read(&one).unwrap(), [b"P6\n1 1\n255\n".as_ref(), &[255, 255, 255]].concat());

        let two = dir.path().join("two.ppm");
        write_frame(&two, 2, 1, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(std::fs::read(&two).unwrap(), [b"P6\n2 1\n255\n".as_ref(), &[0, 0, 0, 255, 0, 0]].concat());
    }

    #[test]
    fn identical_frames_write_identical_files() {
        let dir = tempfile::tempdir().unwrap();
        let buf = [0.1, 0.5, 0.9, 0.3, 0.2, 0.7];
        let a = dir.path().join("a.ppm");
        let b = dir.path().join("b.ppm");
        write_frame(&a, 2, 1, &buf).unwrap();
        write_frame(&b, 2, 1, &buf).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    proptest! {
        #[test]
        fn roundtrip_8bit_graymap(w in 2usize..9, h in 2usize..9, seed in 0u64..1000) {
            let mut state = seed;
            let samples: Vec<f64> = (0..w * h).map(|_| {
                state = crate::rng::mix(state);
                (state % 256) as f64 / 255.0
            }).collect();
            let map = GrayMap::from_samples(w, h, samples);
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("r.pgm");
            write_graymap(&path, &map).unwrap();
            let back = load_graymap(&path).unwrap();
            prop_assert_eq!(map.samples(), back.samples());
        }

        #[test]
        fn sampling_is_continuous_inside(u in 0.05f64..0.95, v in 0.05f64..0.95) {
            let map = gray(4, 4, &(0..16).map(|i| i as f64 / 15.0).collect::<Vec<_>>());
            let eps = 1e-7;
            let a = map.sample(u, v, WrapMode::Clamp);
            let b = map.sample(u + eps, v, WrapMode::Clamp);
            // Lipschitz bound: one texel spans 0.25 uv, max contrast 1.0
            prop_assert!((a - b).abs() < eps * 16.0 + 1e-12);
        }
    }
}

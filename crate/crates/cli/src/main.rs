//! `vkt`: pipeable volume manipulation commands.
//!
//! Volumes travel between processes as native `VKTVOL01` files on stdin and
//! stdout. Exit status is 0 on success, 1 for usage errors and 2 for data
//! errors; nothing is written to the output unless the command succeeds.

mod bench;
mod output;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vkt_core::ops::{self, ArithmeticOp, Axis, ClaheParams, Kernel};
use vkt_core::render::{self, Camera, ImageFormat, RenderAlgo, RenderState};
use vkt_core::{
    io, Box3i, DataFormat, Device, ExecutionPolicy, HierarchicalVolume, LookupTable, StructuredVolume, Vec3, Vec3f,
    Vec3i, VktError, Volume, VoxelMapping,
};

#[derive(Parser)]
#[command(name = "vkt", version, about = "Volume manipulation, analysis and rendering")]
struct Cli {
    /// Device to execute on.
    #[arg(long, global = true, value_enum, default_value = "cpu")]
    device: DeviceArg,
    /// Worker threads; 0 uses every available core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Print algorithm execution times to stderr.
    #[arg(long, global = true)]
    timings: bool,
    /// Input file (stdin when omitted).
    #[arg(short = 'i', long, global = true)]
    input: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeviceArg {
    Cpu,
    Emulated,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    U8,
    U16,
    F32,
}

impl From<FormatArg> for DataFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::U8 => DataFormat::UInt8,
            FormatArg::U16 => DataFormat::UInt16,
            FormatArg::F32 => DataFormat::Float32,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Gaussian,
    Box,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Raymarch,
    Iso,
    Pathtrace,
}

#[derive(Subcommand)]
#[command(rename_all = "kebab-case")]
enum Cmd {
    /// Print type, dims and format.
    Info,
    /// Set cells to a value.
    Fill {
        #[arg(long, allow_negative_numbers = true)]
        value: f64,
        #[arg(long, num_args = 6, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Option<Vec<i64>>,
    },
    /// Keep the cells of a box.
    Crop {
        #[arg(long, num_args = 6, required = true, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Vec<i64>,
    },
    /// Remove a slab spanning two full axes.
    Delete {
        #[arg(long, num_args = 6, required = true, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Vec<i64>,
    },
    /// Resample onto a new grid.
    Resample {
        #[arg(long, num_args = 3, required = true, value_names = ["X", "Y", "Z"])]
        dims: Vec<i64>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["LO", "HI"])]
        range: Option<Vec<f64>>,
    },
    /// Mirror along an axis.
    Flip {
        #[arg(long)]
        axis: String,
    },
    /// Rotate about an axis through a world-space center.
    Rotate {
        #[arg(long, num_args = 3, required = true, allow_negative_numbers = true, value_names = ["X", "Y", "Z"])]
        axis: Vec<f64>,
        /// Angle in radians.
        #[arg(long, allow_negative_numbers = true)]
        angle: f64,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["X", "Y", "Z"])]
        center: Option<Vec<f64>>,
        #[arg(long, num_args = 6, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Option<Vec<i64>>,
    },
    /// Scale about a world-space center.
    Scale {
        #[arg(long, num_args = 3, required = true, value_names = ["X", "Y", "Z"])]
        factors: Vec<f64>,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["X", "Y", "Z"])]
        center: Option<Vec<f64>>,
        #[arg(long, num_args = 6, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Option<Vec<i64>>,
    },
    /// Convolve with a kernel.
    Filter {
        #[arg(long, value_enum, default_value = "gaussian")]
        kernel: KernelArg,
        /// Odd kernel width per axis.
        #[arg(long, default_value_t = 3)]
        size: i64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Contrast limited adaptive histogram equalization.
    Clahe {
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [1i64, 1, 1])]
        bricks: Vec<i64>,
        #[arg(long, default_value_t = 256)]
        bins: usize,
        /// Clip limit as a multiple of the uniform bin height ("inf" disables).
        #[arg(long, default_value = "inf")]
        clip: f64,
    },
    /// Histogram report.
    Histogram {
        #[arg(long, default_value_t = 256)]
        bins: usize,
        #[arg(long, num_args = 6, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Option<Vec<i64>>,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["LO", "HI"])]
        range: Option<Vec<f64>>,
    },
    /// Min, max, mean and standard deviation report.
    Aggregates {
        #[arg(long, num_args = 6, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Option<Vec<i64>>,
    },
    /// Voxel-wise `input OP other`.
    Arith {
        #[arg(long)]
        op: String,
        /// Second operand.
        #[arg(long)]
        with: PathBuf,
    },
    /// Split into bricks with ghost cells, written to the output directory.
    Decompose {
        #[arg(long, num_args = 3, required = true, value_names = ["X", "Y", "Z"])]
        brick: Vec<i64>,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [0i64, 0, 0])]
        halo_low: Vec<i64>,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [0i64, 0, 0])]
        halo_high: Vec<i64>,
    },
    /// Render to a PPM or PFM image.
    Render {
        #[arg(long, value_enum, default_value = "raymarch")]
        algo: AlgoArg,
        /// Text file with one "R G B A" line per entry.
        #[arg(long)]
        lut: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        spp: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, num_args = 2, value_names = ["W", "H"], default_values_t = [256usize, 256])]
        size: Vec<usize>,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["X", "Y", "Z"])]
        eye: Option<Vec<f64>>,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["X", "Y", "Z"])]
        center: Option<Vec<f64>>,
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["X", "Y", "Z"], default_values_t = [0.0, 1.0, 0.0])]
        up: Vec<f64>,
        #[arg(long, default_value_t = 45.0)]
        fovy: f64,
        /// Step length as a multiple of the smallest cell.
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        iso: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 10)]
        bounces: u32,
        #[arg(long, num_args = 3, value_names = ["R", "G", "B"], default_values_t = [1.0, 1.0, 1.0])]
        background: Vec<f64>,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["LO", "HI"])]
        range: Option<Vec<f64>>,
        /// Image format; defaults to PFM for `.pfm` outputs and PPM otherwise.
        #[arg(long)]
        pfm: bool,
    },
    /// Crop an AMR volume and resample it to a cell budget.
    Zoom {
        #[arg(long, num_args = 6, required = true, allow_negative_numbers = true, value_names = ["X0", "Y0", "Z0", "X1", "Y1", "Z1"])]
        roi: Vec<i64>,
        #[arg(long)]
        cells: u64,
    },
    /// Time the benchmark assortment on synthetic data.
    Bench {
        #[arg(long, default_value_t = 128)]
        size: i64,
        #[arg(long, default_value_t = 64)]
        subgrids: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Worker count of the parallel runs.
        #[arg(long, default_value_t = 8)]
        parallel_workers: usize,
    },
    /// Convert a headerless little-endian file to the native format.
    RawImport {
        #[arg(long, num_args = 3, required = true, value_names = ["X", "Y", "Z"])]
        dims: Vec<i64>,
        #[arg(long, value_enum)]
        format: FormatArg,
        #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["LO", "HI"])]
        range: Option<Vec<f64>>,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [1.0, 1.0, 1.0])]
        cell_size: Vec<f64>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Data(VktError),
}

impl From<VktError> for Failure {
    fn from(e: VktError) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(VktError::IoFailure(e))
    }
}

type CliResult<T> = Result<T, Failure>;

/// What a command produces.
enum Product {
    Bytes(Vec<u8>),
    Text(String),
    Directory(Vec<(String, Vec<u8>)>),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let device = match cli.device {
        DeviceArg::Cpu => Device::Cpu,
        DeviceArg::Emulated => Device::EmulatedDevice,
    };
    let mut policy = ExecutionPolicy::default().with_device(device).with_workers(cli.workers);
    policy.print_timings = cli.timings;
    vkt_core::set_execution_policy(policy);

    match run(&cli).and_then(|p| output::emit(cli.output.as_deref(), p)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("vkt: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("vkt: {} ({})", e, e.name());
            ExitCode::from(2)
        }
    }
}

fn read_input_bytes(input: Option<&Path>) -> CliResult<Vec<u8>> {
    match input {
        Some(p) => Ok(std::fs::read(p)?),
        None => {
            let mut buf = Vec::new();
            std::io::stdin().lock().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn read_volume(input: Option<&Path>) -> CliResult<Volume<f64>> {
    Ok(io::from_bytes(read_input_bytes(input)?)?)
}

fn structured(v: Volume<f64>) -> CliResult<StructuredVolume<f64>> {
    v.structured().ok_or_else(|| Failure::Data(VktError::InvalidArgument("command needs a structured volume".into())))
}

fn vec3i(v: &[i64]) -> Vec3i {
    Vec3::new(v[0], v[1], v[2])
}

fn vec3f(v: &[f64]) -> Vec3f {
    Vec3::new(v[0], v[1], v[2])
}

fn roi_arg(v: &[i64]) -> Box3i {
    Box3i::new(vec3i(&v[..3]), vec3i(&v[3..]))
}

fn mapping_arg(r: &[f64]) -> CliResult<VoxelMapping<f64>> {
    VoxelMapping::new(r[0], r[1]).map_err(|e| Failure::Usage(e.to_string()))
}

fn encode(v: &Volume<f64>) -> CliResult<Product> {
    Ok(Product::Bytes(io::to_bytes(v.as_ref())?))
}

fn structured_center(v: &StructuredVolume<f64>) -> Vec3f {
    v.world_bounds().center()
}

fn run(cli: &Cli) -> CliResult<Product> {
    let input = cli.input.as_deref();
    match &cli.cmd {
        Cmd::Info => {
            let v = read_volume(input)?;
            Ok(Product::Text(info_report(&v)))
        }
        Cmd::Fill { value, roi } => {
            let mut v = read_volume(input)?;
            match roi {
                Some(r) => ops::fill_range(v.as_mut(), roi_arg(r), *value)?,
                None => ops::fill(v.as_mut(), *value)?,
            }
            encode(&v)
        }
        Cmd::Crop { roi } => {
            let out = match read_volume(input)? {
                Volume::Structured(s) => Volume::Structured(ops::crop(&s, roi_arg(roi))?),
                Volume::Hierarchical(h) => Volume::Hierarchical(ops::crop_hierarchical(&h, roi_arg(roi))?),
            };
            encode(&out)
        }
        Cmd::Delete { roi } => {
            let v = structured(read_volume(input)?)?;
            encode(&Volume::Structured(ops::delete(&v, roi_arg(roi))?))
        }
        Cmd::Resample { dims, format, range } => {
            let v = read_volume(input)?;
            let (src_format, src_mapping) = match &v {
                Volume::Structured(s) => (s.format(), s.mapping()),
                Volume::Hierarchical(h) => (DataFormat::Float32, h.mapping()),
            };
            let format = format.map(DataFormat::from).unwrap_or(src_format);
            let mapping = match range {
                Some(r) => mapping_arg(r)?,
                None => src_mapping,
            };
            encode(&Volume::Structured(ops::resample(v.as_ref(), vec3i(dims), format, mapping)?))
        }
        Cmd::Flip { axis } => {
            let axis: Axis = axis.parse().map_err(|e: VktError| Failure::Usage(e.to_string()))?;
            let mut v = structured(read_volume(input)?)?;
            ops::flip(&mut v, axis)?;
            encode(&Volume::Structured(v))
        }
        Cmd::Rotate { axis, angle, center, roi } => {
            let mut v = structured(read_volume(input)?)?;
            let center = center.as_deref().map(vec3f).unwrap_or_else(|| structured_center(&v));
            let roi = roi.as_deref().map(roi_arg).unwrap_or(v.bounds());
            ops::rotate_range(&mut v, roi, vec3f(axis), *angle, center)?;
            encode(&Volume::Structured(v))
        }
        Cmd::Scale { factors, center, roi } => {
            let mut v = structured(read_volume(input)?)?;
            let center = center.as_deref().map(vec3f).unwrap_or_else(|| structured_center(&v));
            let roi = roi.as_deref().map(roi_arg).unwrap_or(v.bounds());
            ops::scale_range(&mut v, roi, vec3f(factors), center)?;
            encode(&Volume::Structured(v))
        }
        Cmd::Filter { kernel, size, sigma } => {
            let dims = Vec3::splat(*size);
            let k = match kernel {
                KernelArg::Gaussian => Kernel::gaussian(dims, *sigma),
                KernelArg::Box => Kernel::box_filter(dims),
                KernelArg::Delta => Kernel::delta(dims),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            let mut v = structured(read_volume(input)?)?;
            ops::apply_filter(&mut v, &k)?;
            encode(&Volume::Structured(v))
        }
        Cmd::Clahe { bricks, bins, clip } => {
            let params = ClaheParams { brick_counts: vec3i(bricks), num_bins: *bins, clip_limit: *clip };
            let mut v = structured(read_volume(input)?)?;
            ops::clahe_equalize(&mut v, &params)?;
            encode(&Volume::Structured(v))
        }
        Cmd::Histogram { bins, roi, range } => {
            let v = read_volume(input)?;
            let range = range.as_deref().map(mapping_arg).transpose()?;
            let h = match roi {
                Some(r) => ops::compute_histogram_range(v.as_ref(), roi_arg(r), *bins, range)?,
                None => ops::compute_histogram(v.as_ref(), *bins, range)?,
            };
            let mut s = format!("bins: {}\ncells: {}\nrange: {} {}\n", h.num_bins, h.total(), h.range.lo, h.range.hi);
            for (i, c) in h.counts.iter().enumerate() {
                s.push_str(&format!("bin {i}: {c}\n"));
            }
            Ok(Product::Text(s))
        }
        Cmd::Aggregates { roi } => {
            let v = read_volume(input)?;
            let a = match roi {
                Some(r) => ops::compute_aggregates_range(v.as_ref(), roi_arg(r))?,
                None => ops::compute_aggregates(v.as_ref())?,
            };
            let p = |c: Vec3i| format!("{} {} {}", c.x, c.y, c.z);
            Ok(Product::Text(format!(
                "min: {}\nmax: {}\nargmin: {}\nargmax: {}\nmean: {}\nstddev: {}\n",
                a.min,
                a.max,
                p(a.argmin),
                p(a.argmax),
                a.mean,
                a.stddev
            )))
        }
        Cmd::Arith { op, with } => {
            let op: ArithmeticOp = op.parse().map_err(|e: VktError| Failure::Usage(e.to_string()))?;
            let a = structured(read_volume(input)?)?;
            let b = structured(read_volume(Some(with))?)?;
            let mut dest = a.new_like()?;
            ops::arithmetic(op, &mut dest, &a, &b)?;
            encode(&Volume::Structured(dest))
        }
        Cmd::Decompose { brick, halo_low, halo_high } => {
            if cli.output.is_none() {
                return Err(Failure::Usage("decompose needs an output directory (-o DIR)".into()));
            }
            let v = structured(read_volume(input)?)?;
            let bricks = ops::brick_decompose(&v, vec3i(brick), vec3i(halo_low), vec3i(halo_high))?;
            let mut files = Vec::with_capacity(bricks.len());
            for (i, b) in bricks.iter().enumerate() {
                let name = format!("brick_{i:05}_{}_{}_{}.vkt", b.offset.x, b.offset.y, b.offset.z);
                files.push((name, io::to_bytes(&b.volume)?));
            }
            Ok(Product::Directory(files))
        }
        Cmd::Render {
            algo,
            lut,
            spp,
            seed,
            size,
            eye,
            center,
            up,
            fovy,
            dt,
            iso,
            density,
            bounces,
            background,
            range,
            pfm,
        } => {
            let table = match lut {
                Some(p) => load_lut(p)?,
                None => LookupTable::from_entries(&[[0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.0, 1.0]])?,
            };
            let v = read_volume(input)?;
            let bounds = match &v {
                Volume::Structured(s) => s.world_bounds(),
                Volume::Hierarchical(h) => vkt_core::Aabb::new(Vec3::splat(0.0), h.logical_dims().cast()),
            };
            let target = center.as_deref().map(vec3f).unwrap_or(bounds.center());
            let eye = eye
                .as_deref()
                .map(vec3f)
                .unwrap_or_else(|| target + Vec3::new(0.0, 0.0, 2.0 * bounds.extent().length()));
            let cam = Camera::new(eye, target, vec3f(up), *fovy, size[0], size[1])
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let state = RenderState {
                algo: match algo {
                    AlgoArg::Raymarch => RenderAlgo::RayMarching,
                    AlgoArg::Iso => RenderAlgo::ImplicitIso,
                    AlgoArg::Pathtrace => RenderAlgo::MultiScattering,
                },
                lut: table.handle(),
                dt_rate: *dt,
                iso_values: iso.clone(),
                samples_per_pixel: *spp,
                max_bounces: *bounces,
                density_scale: *density,
                background: [background[0], background[1], background[2]],
                seed: *seed,
                value_range: range.as_deref().map(mapping_arg).transpose()?,
            };
            let img = render::render(v.as_ref(), &cam, &state)?;
            let format = match (&cli.output, pfm) {
                (_, true) => ImageFormat::Pfm,
                (Some(p), false) => ImageFormat::from_path(p),
                (None, false) => ImageFormat::Ppm,
            };
            Ok(Product::Bytes(img.encode(format)))
        }
        Cmd::Zoom { roi, cells } => {
            let h = read_volume(input)?.hierarchical().ok_or_else(|| {
                Failure::Data(VktError::InvalidArgument("zoom needs a hierarchical volume".into()))
            })?;
            encode(&Volume::Structured(ops::zoom(&h, roi_arg(roi), *cells)?))
        }
        Cmd::Bench { size, subgrids, reps, parallel_workers } => {
            if *size < 2 || *subgrids == 0 || *reps == 0 {
                return Err(Failure::Usage("bench needs size >= 2, subgrids >= 1 and reps >= 1".into()));
            }
            Ok(Product::Text(bench::run(*size, *subgrids, *reps, *parallel_workers, cli.device_kind())?))
        }
        Cmd::RawImport { dims, format, range, cell_size } => {
            let bytes = read_input_bytes(input)?;
            let mapping = match range {
                Some(r) => mapping_arg(r)?,
                None => VoxelMapping::unit(),
            };
            let mut src = io::DataSource::read_only_bytes(bytes);
            let v = io::load_raw(&mut src, vec3i(dims), (*format).into(), vec3f(cell_size), mapping)?;
            encode(&Volume::Structured(v))
        }
    }
}

impl Cli {
    fn device_kind(&self) -> Device {
        match self.device {
            DeviceArg::Cpu => Device::Cpu,
            DeviceArg::Emulated => Device::EmulatedDevice,
        }
    }
}

fn info_report(v: &Volume<f64>) -> String {
    match v {
        Volume::Structured(s) => {
            let d = s.dims();
            let c = s.cell_size();
            let m = s.mapping();
            format!(
                "structured {}x{}x{} {}\ncells: {}\ncell_size: {} {} {}\nrange: {} {}\n",
                d.x,
                d.y,
                d.z,
                s.format().short_name(),
                s.cell_count(),
                c.x,
                c.y,
                c.z,
                m.lo,
                m.hi
            )
        }
        Volume::Hierarchical(h) => hierarchical_info(h),
    }
}

fn hierarchical_info(h: &HierarchicalVolume<f64>) -> String {
    let d = h.logical_dims();
    let m = h.mapping();
    format!(
        "hierarchical {}x{}x{} f32\nsubgrids: {}\ncells: {}\nmax_level: {}\nrange: {} {}\n",
        d.x,
        d.y,
        d.z,
        h.subgrids().len(),
        h.total_cells(),
        h.max_level(),
        m.lo,
        m.hi
    )
}

/// Parses a lookup table file: one `R G B A` line per entry.
fn load_lut(path: &Path) -> CliResult<LookupTable> {
    let text = std::fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f32> = line
            .split_whitespace()
            .map(|t| t.parse::<f32>())
            .collect::<Result<_, _>>()
            .map_err(|_| VktError::InvalidArgument(format!("{}:{}: not a number", path.display(), n + 1)))?;
        if vals.len() != 4 || vals.iter().any(|v| !v.is_finite()) {
            return Err(VktError::InvalidArgument(format!(
                "{}:{}: expected four finite values R G B A",
                path.display(),
                n + 1
            ))
            .into());
        }
        entries.push([vals[0], vals[1], vals[2], vals[3]]);
    }
    if entries.is_empty() {
        return Err(VktError::InvalidArgument(format!("{}: empty lookup table", path.display())).into());
    }
    Ok(LookupTable::from_entries(&entries)?)
}


//! Parallel rasterization of the hyperbolic set over a parameter grid,
//! connected-component labeling, tongue/eye classification, and exports.
//!
//! Each grid cell runs the attractor search at its center; the output is a
//! pure function of the grid spec and search options, independent of worker
//! count or scheduling.

use crate::map::{frac, Params};
use crate::search::{find_attractor, AttractorReport, SearchOptions};
use crate::semiconj::type_of;
use crate::symbolic::{Itinerary, ItineraryClass};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Grids whose top row sits below this height classify every component as
/// an eye relative to the grid; tongue detection needs the ceiling.
pub const TOP_ROW_PROXY: f64 = 0.9995;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("grid spec invalid: {0}")]
    BadGrid(String),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("parsing scan document: {0}")]
    Parse(#[from] serde_json::Error),
}

/// A rectangular grid over the parameter cylinder, sampled at cell centers.
/// The `a` range may exceed 1 to wrap around the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub na: usize,
    pub nb: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), ScanError> {
        if self.na < 1 || self.nb < 1 {
            return Err(ScanError::BadGrid("na and nb must be at least 1".into()));
        }
        // partial_cmp keeps NaN bounds from slipping through
        if self.a_min.partial_cmp(&self.a_max) != Some(std::cmp::Ordering::Less) {
            return Err(ScanError::BadGrid("need a_min < a_max".into()));
        }
        if self.a_max - self.a_min > 1.0 + 1e-12 {
            return Err(ScanError::BadGrid("a range longer than the circle".into()));
        }
        if !(0.0 <= self.b_min && self.b_min <= self.b_max && self.b_max <= 1.0) {
            return Err(ScanError::BadGrid("need 0 <= b_min <= b_max <= 1".into()));
        }
        Ok(())
    }

    pub fn cell_width(&self) -> f64 {
        (self.a_max - self.a_min) / self.na as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.b_max - self.b_min) / self.nb as f64
    }

    /// Center `a` of column `i`, reduced to the circle.
    pub fn cell_a(&self, i: usize) -> f64 {
        frac(self.a_min + (i as f64 + 0.5) * self.cell_width())
    }

    /// Center `b` of row `j`; row 0 is the bottom (`b_min`).
    pub fn cell_b(&self, j: usize) -> f64 {
        if self.nb == 1 {
            0.5 * (self.b_min + self.b_max)
        } else {
            self.b_min + (j as f64 + 0.5) * self.cell_height()
        }
    }

    /// Whether the grid covers the whole circle, joining columns 0 and na-1.
    pub fn wraps(&self) -> bool {
        (self.a_max - self.a_min - 1.0).abs() < 1e-12
    }

    /// Tongue/eye classification is grid-relative when the top row does not
    /// reach the ceiling.
    pub fn is_truncated(&self) -> bool {
        self.b_max < TOP_ROW_PROXY
    }

    pub fn column_of(&self, a: f64) -> Option<usize> {
        let t = (a - self.a_min) / self.cell_width();
        (t >= 0.0 && t < self.na as f64).then_some(t as usize)
    }

    pub fn row_of(&self, b: f64) -> Option<usize> {
        let t = (b - self.b_min) / self.cell_height();
        (t >= 0.0 && t < self.nb as f64).then_some(t as usize)
    }
}

/// Per-cell outcome of the scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellResult {
    NoAttractor,
    Attractor {
        period: usize,
        itinerary: Itinerary,
        classification: ItineraryClass,
        type_k: u64,
        type_p: u32,
    },
    BreakPointAdjacent,
}

impl CellResult {
    fn key(&self) -> Option<(usize, &Itinerary)> {
        match self {
            CellResult::Attractor {
                period, itinerary, ..
            } => Some((*period, itinerary)),
            _ => None,
        }
    }
}

/// Completed scan: the spec plus one result per cell, row-major from the
/// bottom row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    pub spec: GridSpec,
    pub cells: Vec<CellResult>,
}

impl ScanGrid {
    pub fn cell(&self, i: usize, j: usize) -> &CellResult {
        &self.cells[j * self.spec.na + i]
    }
}

fn classify_cell(p: Params, opts: &SearchOptions) -> CellResult {
    match find_attractor(p, opts) {
        AttractorReport::NotFound => CellResult::NoAttractor,
        AttractorReport::BreakPointAdjacent(_) => CellResult::BreakPointAdjacent,
        AttractorReport::Found(c) => match type_of(p, &c) {
            Ok(t) => CellResult::Attractor {
                period: c.period(),
                itinerary: c.itinerary().canonical(),
                classification: c.itinerary().classification(),
                type_k: t.k,
                type_p: t.p,
            },
            // a failed integer-shift check means the orbit grazes a break
            // point beyond refinement accuracy
            Err(_) => CellResult::BreakPointAdjacent,
        },
    }
}

/// Run the attractor search at every cell center, in parallel over cells.
pub fn scan_grid(spec: GridSpec, opts: &SearchOptions) -> Result<ScanGrid, ScanError> {
    spec.validate()?;
    let cells: Vec<CellResult> = (0..spec.na * spec.nb)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % spec.na, idx / spec.na);
            let p = Params::new(spec.cell_a(i), spec.cell_b(j)).expect("cell center in range");
            classify_cell(p, opts)
        })
        .collect();
    Ok(ScanGrid { spec, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Tongue,
    Eye,
}

/// A labeled connected component of attractor cells sharing period and
/// canonical itinerary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub id: usize,
    pub kind: ComponentKind,
    pub period: usize,
    pub itinerary: Itinerary,
    pub type_k: u64,
    pub type_p: u32,
    pub cell_count: usize,
    /// Bounding box over member cell edges, in grid coordinates. A component
    /// crossing the a-seam of a full-circle grid reports the full a range.
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    /// Largest member cell-center height.
    pub max_b: f64,
    pub touches_top: bool,
}

/// 4-connectivity flood fill over attractor cells keyed by
/// (period, canonical itinerary); full-circle grids join the a-seam.
pub fn label_components(grid: &ScanGrid) -> Vec<ComponentRecord> {
    let (na, nb) = (grid.spec.na, grid.spec.nb);
    let wraps = grid.spec.wraps() && na > 1;
    let mut label = vec![usize::MAX; na * nb];
    let mut components = Vec::new();

    for start in 0..na * nb {
        if label[start] != usize::MAX {
            continue;
        }
        let Some(key) = grid.cells[start].key() else {
            continue;
        };
        let id = components.len();
        let mut member_cols = Vec::new();
        let mut member_rows = Vec::new();
        let mut stack = vec![start];
        label[start] = id;
        while let Some(idx) = stack.pop() {
            let (i, j) = (idx % na, idx / na);
            member_cols.push(i);
            member_rows.push(j);
            let mut neighbors = Vec::with_capacity(4);
            if i > 0 {
                neighbors.push(idx - 1);
            } else if wraps {
                neighbors.push(idx + na - 1);
            }
            if i + 1 < na {
                neighbors.push(idx + 1);
            } else if wraps {
                neighbors.push(idx + 1 - na);
            }
            if j > 0 {
                neighbors.push(idx - na);
            }
            if j + 1 < nb {
                neighbors.push(idx + na);
            }
            for n in neighbors {
                if label[n] == usize::MAX && grid.cells[n].key() == Some(key) {
                    label[n] = id;
                    stack.push(n);
                }
            }
        }

        let (period, itinerary, type_k, type_p) = match &grid.cells[start] {
            CellResult::Attractor {
                period,
                itinerary,
                type_k,
                type_p,
                ..
            } => (*period, itinerary.clone(), *type_k, *type_p),
            _ => unreachable!("key() filtered non-attractor cells"),
        };

        let top_row = nb - 1;
        let mut top_cols: Vec<usize> = member_cols
            .iter()
            .zip(&member_rows)
            .filter(|(_, j)| **j == top_row)
            .map(|(i, _)| *i)
            .collect();
        top_cols.sort_unstable();
        top_cols.dedup();
        let touches_top = !top_cols.is_empty();
        let top_span_2 = top_cols.windows(2).any(|w| w[1] == w[0] + 1)
            || (wraps
                && top_cols.len() >= 2
                && top_cols[0] == 0
                && *top_cols.last().unwrap() == na - 1);
        let kind = if touches_top && top_span_2 {
            ComponentKind::Tongue
        } else {
            ComponentKind::Eye
        };

        let w = grid.spec.cell_width();
        let h = grid.spec.cell_height();
        let i_min = *member_cols.iter().min().unwrap();
        let i_max = *member_cols.iter().max().unwrap();
        let j_min = *member_rows.iter().min().unwrap();
        let j_max = *member_rows.iter().max().unwrap();
        components.push(ComponentRecord {
            id,
            kind,
            period,
            itinerary,
            type_k,
            type_p,
            cell_count: member_cols.len(),
            a_min: grid.spec.a_min + i_min as f64 * w,
            a_max: grid.spec.a_min + (i_max + 1) as f64 * w,
            b_min: grid.spec.b_min + j_min as f64 * h,
            b_max: grid.spec.b_min + (j_max + 1) as f64 * h,
            max_b: grid.spec.cell_b(j_max),
            touches_top,
        });
    }
    components
}

/// Fixed 16-entry palette indexed by period mod 16.
const PALETTE: [[u8; 3]; 16] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [220, 190, 255],
    [170, 110, 40],
    [255, 250, 200],
    [128, 0, 0],
    [170, 255, 195],
];

fn cell_color(cell: &CellResult) -> [u8; 3] {
    match cell {
        CellResult::NoAttractor => [0, 0, 0],
        CellResult::BreakPointAdjacent => [255, 255, 255],
        CellResult::Attractor {
            period,
            classification,
            ..
        } => {
            let rgb = PALETTE[period % 16];
            match classification {
                ItineraryClass::MultiMinus => rgb.map(|c| c / 2),
                _ => rgb,
            }
        }
    }
}

/// Binary P6 PPM; row 0 of the image is the top of the grid (`b_max`).
pub fn write_ppm<W: Write>(grid: &ScanGrid, mut w: W) -> io::Result<()> {
    write!(w, "P6\n{} {}\n255\n", grid.spec.na, grid.spec.nb)?;
    let mut row = Vec::with_capacity(grid.spec.na * 3);
    for j in (0..grid.spec.nb).rev() {
        row.clear();
        for i in 0..grid.spec.na {
            row.extend_from_slice(&cell_color(grid.cell(i, j)));
        }
        w.write_all(&row)?;
    }
    Ok(())
}

/// Format with the given number of significant digits in plain decimal.
fn fmt_sig(x: f64, sig: i32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (sig - 1 - mag).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

pub const CSV_HEADER: &str =
    "id,kind,period,itinerary,type_k,type_p,cell_count,a_min,a_max,b_min,b_max,max_b,touches_top";

/// Component table as CSV, LF line endings, 12 significant digits.
pub fn write_csv<W: Write>(components: &[ComponentRecord], mut w: W) -> io::Result<()> {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in components {
        let kind = match c.kind {
            ComponentKind::Tongue => "Tongue",
            ComponentKind::Eye => "Eye",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.id,
            kind,
            c.period,
            c.itinerary,
            c.type_k,
            c.type_p,
            c.cell_count,
            fmt_sig(c.a_min, 12),
            fmt_sig(c.a_max, 12),
            fmt_sig(c.b_min, 12),
            fmt_sig(c.b_max, 12),
            fmt_sig(c.max_b, 12),
            c.touches_top
        )
        .expect("string write");
    }
    w.write_all(out.as_bytes())
}

/// One run of identical cells within a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRun {
    pub n: usize,
    pub cell: CellResult,
}

/// The JSON export document: grid spec, run-length encoded rows (bottom row
/// first), and the component table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    pub grid_spec: GridSpec,
    pub cells: Vec<Vec<CellRun>>,
    pub components: Vec<ComponentRecord>,
}

impl ScanDocument {
    pub fn new(grid: &ScanGrid, components: &[ComponentRecord]) -> Self {
        let mut rows = Vec::with_capacity(grid.spec.nb);
        for j in 0..grid.spec.nb {
            let mut row: Vec<CellRun> = Vec::new();
            for i in 0..grid.spec.na {
                let cell = grid.cell(i, j);
                match row.last_mut() {
                    Some(run) if run.cell == *cell => run.n += 1,
                    _ => row.push(CellRun {
                        n: 1,
                        cell: cell.clone(),
                    }),
                }
            }
            rows.push(row);
        }
        ScanDocument {
            grid_spec: grid.spec,
            cells: rows,
            components: components.to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ScanError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Expand the run-length encoding back to a full grid.
    pub fn to_grid(&self) -> ScanGrid {
        let mut cells = Vec::with_capacity(self.grid_spec.na * self.grid_spec.nb);
        for row in &self.cells {
            for run in row {
                for _ in 0..run.n {
                    cells.push(run.cell.clone());
                }
            }
        }
        ScanGrid {
            spec: self.grid_spec,
            cells,
        }
    }
}

pub fn write_json<W: Write>(
    grid: &ScanGrid,
    components: &[ComponentRecord],
    mut w: W,
) -> io::Result<()> {
    let doc = ScanDocument::new(grid, components);
    let text = serde_json::to_string(&doc).expect("scan document serializes");
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Ppm,
    Csv,
    Json,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Ppm => "ppm",
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
        }
    }
}

/// Write one export file, surfacing I/O errors with the path.
pub fn export(
    grid: &ScanGrid,
    components: &[ComponentRecord],
    format: ExportFormat,
    path: &Path,
) -> Result<(), ScanError> {
    let io_ctx = |source: io::Error| ScanError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_ctx)?;
    let mut buf = io::BufWriter::new(file);
    match format {
        ExportFormat::Ppm => write_ppm(grid, &mut buf).map_err(io_ctx)?,
        ExportFormat::Csv => write_csv(components, &mut buf).map_err(io_ctx)?,
        ExportFormat::Json => write_json(grid, components, &mut buf).map_err(io_ctx)?,
    }
    buf.flush().map_err(io_ctx)
}

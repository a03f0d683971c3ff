//! File formats for landscapes, paths, test reports and scans.
//!
//! JSON holds the full structured result; CSV variants carry one record per
//! row for plotting tools. Variable sets are written as label lists in JSON
//! and as `;`-joined labels in CSV.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use infotopo_core::identities::IdentityResiduals;
use infotopo_core::lattice::{DegreeSummary, UndersamplingReport};
use infotopo_core::scan::{ScanCell, ScanGrid};
use infotopo_core::stats::{DegreeThresholds, DependenceReport, NullDistribution};
use infotopo_core::{InfoPath, JointDistribution, Landscape, SubsetMask};
use serde::Serialize;

/// Files written by one command; removed together if the command fails.
#[derive(Debug)]
pub struct OutputSet {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputSet {
    pub fn new(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputSet { dir: dir.to_owned(), written: Vec::new() })
    }

    pub fn write<F>(&mut self, name: &str, f: F) -> io::Result<PathBuf>
    where
        F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    {
        let path = self.dir.join(name);
        let file = File::create(&path)?;
        self.written.push(path.clone());
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush()?;
        Ok(path)
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.written
    }

    /// Removes every file written so far.
    pub fn discard(self) {
        for p in self.written {
            let _ = fs::remove_file(p);
        }
    }
}

fn vars(mask: SubsetMask, labels: &[String]) -> Vec<&str> {
    mask.iter().map(|i| labels[i].as_str()).collect()
}

fn joined(mask: SubsetMask, labels: &[String]) -> String {
    vars(mask, labels).join(";")
}

fn json<W: Write, T: Serialize + ?Sized>(w: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    w.write_all(b"\n")
}

#[derive(Serialize)]
struct RecordOut<'a> {
    mask: u32,
    vars: Vec<&'a str>,
    k: usize,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "I")]
    i: f64,
}

#[derive(Serialize)]
struct SummaryOut<'a> {
    k: usize,
    count: u64,
    mean_h: f64,
    mean_i: f64,
    mean_g: f64,
    min_i: f64,
    argmin: Vec<&'a str>,
    max_i: f64,
    argmax: Vec<&'a str>,
}

impl<'a> SummaryOut<'a> {
    fn new(s: &DegreeSummary, labels: &'a [String]) -> Self {
        SummaryOut {
            k: s.k,
            count: s.count,
            mean_h: s.mean_entropy,
            mean_i: s.mean_information,
            mean_g: s.mean_total_correlation,
            min_i: s.min_information,
            argmin: vars(s.argmin, labels),
            max_i: s.max_information,
            argmax: vars(s.argmax, labels),
        }
    }
}

/// `{"n","m","N","kmax","records":[…],"summary":[…]}`, records in mask order.
pub fn write_landscape_json<W: Write>(l: &Landscape, labels: &[String], w: &mut W) -> io::Result<()> {
    write!(w, "{{\"n\":{},\"m\":{},\"N\":", l.n(), l.m())?;
    serde_json::to_writer(&mut *w, l.bins())?;
    write!(w, ",\"kmax\":{},\"records\":[", l.k_max())?;
    for (idx, r) in l.records().enumerate() {
        if idx > 0 {
            w.write_all(b",")?;
        }
        w.write_all(b"\n")?;
        let out = RecordOut { mask: r.mask.bits(), vars: vars(r.mask, labels), k: r.k, h: r.entropy, i: r.information };
        serde_json::to_writer(&mut *w, &out)?;
    }
    w.write_all(b"\n],\"summary\":")?;
    let summary: Vec<SummaryOut> = l.summaries().iter().map(|s| SummaryOut::new(s, labels)).collect();
    serde_json::to_writer(&mut *w, &summary)?;
    w.write_all(b"}\n")
}

pub fn write_landscape_csv<W: Write>(l: &Landscape, labels: &[String], w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["mask", "vars", "k", "H", "I", "G"])?;
    for r in l.records() {
        c.write_record([
            r.mask.bits().to_string(),
            joined(r.mask, labels),
            r.k.to_string(),
            r.entropy.to_string(),
            r.information.to_string(),
            l.total_correlation(r.mask).to_string(),
        ])?;
    }
    c.flush()
}

/// Per-degree means and extremes, including the mean total correlation.
pub fn write_summary_csv<W: Write>(l: &Landscape, labels: &[String], w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["k", "count", "mean_H", "mean_I", "mean_G", "min_I", "argmin", "max_I", "argmax"])?;
    for s in l.summaries() {
        c.write_record([
            s.k.to_string(),
            s.count.to_string(),
            s.mean_entropy.to_string(),
            s.mean_information.to_string(),
            s.mean_total_correlation.to_string(),
            s.min_information.to_string(),
            joined(s.argmin, labels),
            s.max_information.to_string(),
            joined(s.argmax, labels),
        ])?;
    }
    c.flush()
}

/// Fixed-width histograms of `I_k` for every degree.
pub fn write_histograms_csv<W: Write>(l: &Landscape, width: f64, w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["k", "lower", "upper", "count"])?;
    for k in 1..=l.k_max() {
        let h = l.histogram(k, width).map_err(io::Error::other)?;
        for (b, count) in h.counts.iter().enumerate() {
            let lower = h.origin + b as f64 * width;
            c.write_record([k.to_string(), lower.to_string(), (lower + width).to_string(), count.to_string()])?;
        }
    }
    c.flush()
}

/// `(H_k, I_k)` pairs of every subset.
pub fn write_scatter_csv<W: Write>(l: &Landscape, labels: &[String], w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["k", "vars", "H", "I"])?;
    for k in 1..=l.k_max() {
        for p in l.entropy_vs_energy(k).map_err(io::Error::other)? {
            c.write_record([k.to_string(), joined(p.mask, labels), p.entropy.to_string(), p.information.to_string()])?;
        }
    }
    c.flush()
}

#[derive(Serialize)]
struct UndersamplingOut<'a> {
    m: u64,
    p_u: f64,
    epsilon: f64,
    ceiling: f64,
    k_u: usize,
    first_exceeding: Option<usize>,
    fractions: &'a [f64],
}

pub fn write_undersampling_json<W: Write>(r: &UndersamplingReport, m: u64, w: &mut W) -> io::Result<()> {
    json(
        w,
        &UndersamplingOut {
            m,
            p_u: r.p_u,
            epsilon: r.epsilon,
            ceiling: r.ceiling,
            k_u: r.k_u,
            first_exceeding: r.first_exceeding,
            fractions: &r.fractions,
        },
    )
}

#[derive(Serialize)]
struct BoxOut<'a> {
    idx: &'a [u32],
    count: u64,
}

/// `{"m","N","boxes":[{"idx":[…],"count"}]}` over occupied boxes.
pub fn write_joint_json<W: Write>(j: &JointDistribution, w: &mut W) -> io::Result<()> {
    #[derive(Serialize)]
    struct JointOut<'a> {
        m: u64,
        #[serde(rename = "N")]
        bins: &'a [u32],
        boxes: Vec<BoxOut<'a>>,
    }
    let boxes = j.iter().map(|(idx, count)| BoxOut { idx, count }).collect();
    json(w, &JointOut { m: j.m(), bins: j.bins(), boxes })
}

#[derive(Serialize)]
struct PathOut<'a> {
    rank: usize,
    direction: &'static str,
    vars: Vec<&'a str>,
    indices: &'a [usize],
    #[serde(rename = "I")]
    values: &'a [f64],
    slopes: &'a [f64],
    stop_reason: &'static str,
}

#[derive(Serialize)]
pub struct PathsMeta {
    pub k_stop: usize,
    pub k_u: usize,
    pub count: usize,
}

pub fn write_paths_json<W: Write>(paths: &[InfoPath], meta: &PathsMeta, labels: &[String], w: &mut W) -> io::Result<()> {
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        meta: &'a PathsMeta,
        paths: Vec<PathOut<'a>>,
    }
    let out = paths_out(paths, labels);
    json(w, &Out { meta, paths: out })
}

fn paths_out<'a>(paths: &'a [InfoPath], labels: &'a [String]) -> Vec<PathOut<'a>> {
    let mut rank = std::collections::HashMap::new();
    paths
        .iter()
        .map(|p| {
            let r = rank.entry(p.direction.name()).or_insert(0);
            *r += 1;
            PathOut {
                rank: *r,
                direction: p.direction.name(),
                vars: p.variables.iter().map(|&v| labels[v].as_str()).collect(),
                indices: &p.variables,
                values: &p.values,
                slopes: &p.slopes,
                stop_reason: p.stop_reason.name(),
            }
        })
        .collect()
}

/// One row per path step; the slope column is empty on the first step.
pub fn write_paths_csv<W: Write>(paths: &[InfoPath], labels: &[String], w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["direction", "rank", "step", "var", "I", "slope", "stop_reason"])?;
    for p in paths_out(paths, labels) {
        for (step, var) in p.vars.iter().enumerate() {
            let slope = if step == 0 { String::new() } else { p.slopes[step - 1].to_string() };
            c.write_record([
                p.direction.to_owned(),
                p.rank.to_string(),
                (step + 1).to_string(),
                var.to_string(),
                p.values[step].to_string(),
                slope,
                p.stop_reason.to_owned(),
            ])?;
        }
    }
    c.flush()
}

#[derive(Serialize)]
pub struct TestMeta {
    pub mode: &'static str,
    pub shuffles: usize,
    pub seed: u64,
}

#[derive(Serialize)]
struct ThresholdOut {
    k: usize,
    pool_size: usize,
    lower: Option<f64>,
    upper: f64,
}

impl From<&DegreeThresholds> for ThresholdOut {
    fn from(t: &DegreeThresholds) -> Self {
        ThresholdOut { k: t.k, pool_size: t.pool_size, lower: t.lower, upper: t.upper }
    }
}

#[derive(Serialize)]
struct VerdictOut<'a> {
    mask: u32,
    vars: Vec<&'a str>,
    k: usize,
    #[serde(rename = "I")]
    observed: f64,
    lower: Option<f64>,
    upper: f64,
    verdict: &'static str,
}

pub fn write_report_json<W: Write>(r: &DependenceReport, meta: &TestMeta, labels: &[String], w: &mut W) -> io::Result<()> {
    #[derive(Serialize)]
    struct Levels {
        pairwise: f64,
        higher: f64,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        test: &'static str,
        #[serde(flatten)]
        meta: &'a TestMeta,
        levels: Levels,
        degrees: Vec<ThresholdOut>,
        rows: Vec<VerdictOut<'a>>,
    }
    let rows = r
        .rows
        .iter()
        .map(|v| VerdictOut {
            mask: v.mask.bits(),
            vars: vars(v.mask, labels),
            k: v.k,
            observed: v.observed,
            lower: v.lower,
            upper: v.upper,
            verdict: v.verdict.name(),
        })
        .collect();
    json(
        w,
        &Out {
            test: "specificity of k-dependence",
            meta,
            levels: Levels { pairwise: r.levels.pairwise, higher: r.levels.higher },
            degrees: r.degrees.iter().map(ThresholdOut::from).collect(),
            rows,
        },
    )
}

pub fn write_report_csv<W: Write>(r: &DependenceReport, labels: &[String], w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["mask", "vars", "k", "I", "lower", "upper", "verdict"])?;
    for v in &r.rows {
        c.write_record([
            v.mask.bits().to_string(),
            joined(v.mask, labels),
            v.k.to_string(),
            v.observed.to_string(),
            v.lower.map_or(String::new(), |x| x.to_string()),
            v.upper.to_string(),
            v.verdict.name().to_owned(),
        ])?;
    }
    c.flush()
}

/// Pooled null values, one per row, by degree then shuffle then subset.
pub fn write_null_pool_csv<W: Write>(nulls: &NullDistribution, w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["k", "I"])?;
    for k in 1..=nulls.k_max {
        for v in nulls.pool(k) {
            c.write_record([k.to_string(), v.to_string()])?;
        }
    }
    c.flush()
}

/// Mean curves of one scan cell.
pub fn write_scan_cell_csv<W: Write>(cell: &ScanCell, w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["k", "mean_I", "mean_H", "saturated_fraction"])?;
    for (i, (mi, mh)) in cell.mean_information.iter().zip(&cell.mean_entropy).enumerate() {
        c.write_record([
            (i + 1).to_string(),
            mi.to_string(),
            mh.to_string(),
            cell.undersampling.fractions[i].to_string(),
        ])?;
    }
    c.flush()
}

pub fn scan_cell_name(cell: &ScanCell) -> String {
    format!("scan_N{}_m{}.csv", cell.bins, cell.m)
}

/// One row per cell with its undersampling dimension.
pub fn write_scan_summary_csv<W: Write>(grid: &ScanGrid, w: &mut W) -> io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["N", "m", "k_u", "file"])?;
    for cell in &grid.cells {
        c.write_record([cell.bins.to_string(), cell.m.to_string(), cell.k_u().to_string(), scan_cell_name(cell)])?;
    }
    c.flush()
}

pub fn write_identities_json<W: Write>(
    r: &IdentityResiduals,
    vars_checked: &[String],
    tolerance: f64,
    w: &mut W,
) -> io::Result<()> {
    #[derive(Serialize)]
    struct Out<'a> {
        vars: &'a [String],
        tolerance: f64,
        ok: bool,
        max_residual: f64,
        residuals: std::collections::BTreeMap<&'static str, f64>,
    }
    json(
        w,
        &Out {
            vars: vars_checked,
            tolerance,
            ok: r.max() <= tolerance,
            max_residual: r.max(),
            residuals: r.named().into_iter().collect(),
        },
    )
}

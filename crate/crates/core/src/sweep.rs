//! Parameter sweeps over the two-qutrit chain, emitted as CSV tables.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{alb, negativity, BoundReport};
use crate::error::{Error, Result};
use crate::numkernel::{sym_eig, Spectrum};
use crate::qstate::BipartiteDims;
use crate::spinmodels::{central_energies, closed_form_energies, hamiltonian_qutrit, QutritChainParams};
use crate::thermal::{estimate_ts, tstar, GibbsState, MultipartiteDims, TsScan};

/// Largest allowed closed-form versus numerical spectrum deviation.
pub const SPECTRUM_RESIDUAL_TOL: f64 = 1e-9;

/// Emitted measures may dip this far below zero from rounding.
pub const NEGATIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    GridB1B2,
    LineB1EqNegB2,
    GridKT,
    GridB2T,
    BoundsScan,
    DensecodeScan,
    Threshold,
    Spectrum,
}

impl Mode {
    pub const ALL: [Mode; 8] = [
        Mode::GridB1B2,
        Mode::LineB1EqNegB2,
        Mode::GridKT,
        Mode::GridB2T,
        Mode::BoundsScan,
        Mode::DensecodeScan,
        Mode::Threshold,
        Mode::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::GridB1B2 => "grid-b1b2",
            Mode::LineB1EqNegB2 => "line-b1eqnegb2",
            Mode::GridKT => "grid-kt",
            Mode::GridB2T => "grid-b2t",
            Mode::BoundsScan => "bounds-scan",
            Mode::DensecodeScan => "densecode-scan",
            Mode::Threshold => "threshold",
            Mode::Spectrum => "spectrum",
        }
    }

    /// Swept axes, outermost first.
    pub fn axes(self) -> &'static [Axis] {
        match self {
            Mode::GridB1B2 => &[Axis::B1, Axis::B2],
            Mode::LineB1EqNegB2 => &[Axis::B],
            Mode::GridKT | Mode::DensecodeScan => &[Axis::K, Axis::T],
            Mode::GridB2T => &[Axis::B2, Axis::T],
            Mode::BoundsScan => &[Axis::B1],
            Mode::Threshold | Mode::Spectrum => &[Axis::K],
        }
    }

    pub fn default_measures(self) -> &'static [&'static str] {
        match self {
            Mode::BoundsScan => &["negativity", "chen_lb", "alb", "ub"],
            Mode::DensecodeScan => &["negativity", "cdc", "udc_12", "udc_21"],
            _ => &["negativity"],
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mode '{s}'")))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A swept parameter. `B` drives the line `B₁ = B, B₂ = −B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    B1,
    B2,
    B,
    K,
    T,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::B1 => "B1",
            Axis::B2 => "B2",
            Axis::B => "B",
            Axis::K => "K",
            Axis::T => "T",
        }
    }

    pub fn default_range(self) -> AxisRange {
        match self {
            Axis::B1 | Axis::B2 | Axis::B => AxisRange::new(-6.0, 6.0, 101),
            Axis::K => AxisRange::new(-2.0, 0.0, 101),
            Axis::T => AxisRange::new(0.01, 2.0, 101),
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b1" => Ok(Axis::B1),
            "b2" => Ok(Axis::B2),
            "b" => Ok(Axis::B),
            "k" => Ok(Axis::K),
            "t" => Ok(Axis::T),
            _ => Err(Error::Config(format!("unknown axis '{s}'"))),
        }
    }
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisRange {
    pub const fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config(format!("non-finite range {self}")));
        }
        if self.count < 2 {
            return Err(Error::Config(format!("range {self} needs at least 2 points")));
        }
        if !(self.start < self.stop) {
            return Err(Error::Config(format!("range {self} must have start < stop")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    /// `start:stop:count`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("range '{s}' is not start:stop:count"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        let r = AxisRange::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        );
        r.validate()?;
        Ok(r)
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub j: f64,
    pub k: f64,
    pub b1: f64,
    pub b2: f64,
    pub t: f64,
    pub ranges: BTreeMap<Axis, AxisRange>,
    /// `None` selects the mode's defaults.
    pub measures: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Also estimate `T_s` from the algebraic lower bound.
    pub ts_alb: bool,
    pub scan: TsScan,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mode: Mode::GridB1B2,
            j: -1.0,
            k: -1.7,
            b1: 0.0,
            b2: 0.0,
            t: 1.0,
            ranges: BTreeMap::new(),
            measures: None,
            out: None,
            threads: None,
            ts_alb: false,
            scan: TsScan::default(),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.trim().parse().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: '{v}' is not a positive integer")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("{key}: '{v}' is not a boolean"))),
    }
}

impl SweepConfig {
    /// Sets one option by its flag name (without the leading dashes).
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "J" | "j" => self.j = parse_f64(key, value)?,
            "K" | "k" => self.k = parse_f64(key, value)?,
            "B1" | "b1" => self.b1 = parse_f64(key, value)?,
            "B2" | "b2" => self.b2 = parse_f64(key, value)?,
            "T" | "t" => self.t = parse_f64(key, value)?,
            "mode" => self.mode = value.trim().parse()?,
            "measures" => {
                let list: Vec<String> = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if list.is_empty() {
                    return Err(Error::Config("measures: empty list".into()));
                }
                if let Some(bad) = list.iter().find(|m| !BoundReport::FIELDS.contains(&m.as_str())) {
                    return Err(Error::Config(format!(
                        "unknown measure '{bad}' (expected one of {})",
                        BoundReport::FIELDS.join(",")
                    )));
                }
                self.measures = Some(list);
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "threads" => {
                let n = parse_usize(key, value)?;
                if n == 0 {
                    return Err(Error::Config("threads must be at least 1".into()));
                }
                self.threads = Some(n);
            }
            "ts-alb" => self.ts_alb = parse_bool(key, value)?,
            "ts-tmax" => self.scan.tmax = parse_f64(key, value)?,
            "ts-grid" => self.scan.grid = parse_usize(key, value)?,
            "ts-tol" => self.scan.tol = parse_f64(key, value)?,
            _ => match key.strip_prefix("range-") {
                Some(axis) => {
                    let axis: Axis = axis.parse()?;
                    self.ranges.insert(axis, value.parse()?);
                }
                None => return Err(Error::Config(format!("unknown option '{key}'"))),
            },
        }
        Ok(())
    }

    /// Applies `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            self.apply(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn range(&self, axis: Axis) -> AxisRange {
        self.ranges.get(&axis).copied().unwrap_or_else(|| axis.default_range())
    }

    pub fn measures(&self) -> Vec<String> {
        match &self.measures {
            Some(m) => m.clone(),
            None => self.mode.default_measures().iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (axis, r) in &self.ranges {
            if !self.mode.axes().contains(axis) {
                return Err(Error::Config(format!("mode {} does not sweep axis {}", self.mode, axis.name())));
            }
            r.validate()?;
        }
        if self.mode.axes().contains(&Axis::T) {
            if !(self.range(Axis::T).start > 0.0) {
                return Err(Error::Config("temperature range must start above 0".into()));
            }
        } else if !(self.t > 0.0) && !matches!(self.mode, Mode::Threshold | Mode::Spectrum) {
            return Err(Error::Config(format!("temperature must be positive, got {}", self.t)));
        }
        if let Some(0) = self.threads {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Grid points in lexicographic axis order, each as `(axis values, params, T)`.
    pub fn points(&self) -> Vec<(Vec<f64>, QutritChainParams, f64)> {
        let axes = self.mode.axes();
        let values: Vec<Vec<f64>> = axes.iter().map(|&a| self.range(a).values()).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; axes.len()];
        loop {
            let coords: Vec<f64> = idx.iter().zip(&values).map(|(&i, v)| v[i]).collect();
            let mut p = QutritChainParams::new(self.j, self.k, self.b1, self.b2);
            let mut t = self.t;
            for (&a, &x) in axes.iter().zip(&coords) {
                match a {
                    Axis::B1 => p.b1 = x,
                    Axis::B2 => p.b2 = x,
                    Axis::B => {
                        p.b1 = x;
                        p.b2 = -x;
                    }
                    Axis::K => p.k = x,
                    Axis::T => t = x,
                }
            }
            out.push((coords, p, t));

            let mut d = axes.len();
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < values[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

/// Rows of optional numbers under a header; `None` is written as an empty field.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(format_number).unwrap_or_default()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Decimal rendering with 12 significant digits, trailing zeros trimmed;
/// scientific notation outside `1e-5 ≤ |x| < 1e12`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn check_emitted(name: &str, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Consistency(format!("{name} is not finite")));
    }
    if x < -NEGATIVE_SLACK {
        return Err(Error::Consistency(format!("{name} = {x:e} is negative")));
    }
    Ok(x)
}

/// Full report for one parameter point.
pub fn thermal_report(p: &QutritChainParams, t: f64) -> Result<BoundReport> {
    let g = GibbsState::new(finite_spectrum(p)?, t)?;
    if g.weights().iter().any(|w| !w.is_finite()) {
        return Err(Error::Consistency(format!("Boltzmann weights overflow at {p:?}, T = {t}")));
    }
    BoundReport::thermal(&g, BipartiteDims::QUTRITS)
}

fn finite_spectrum(p: &QutritChainParams) -> Result<Spectrum> {
    if !p.is_finite() {
        return Err(Error::Config(format!("non-finite parameters {p:?}")));
    }
    let h = hamiltonian_qutrit(p);
    if h.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::Consistency(format!("Hamiltonian overflows at {p:?}")));
    }
    sym_eig(&h)
}

/// One row per grid point: axis values followed by the requested measures.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let measures = cfg.measures();
    let mut header: Vec<String> = cfg.mode.axes().iter().map(|a| a.name().to_string()).collect();
    header.extend(measures.iter().cloned());

    let points = cfg.points();
    let rows = with_pool(cfg.threads, || {
        points
            .par_iter()
            .map(|(coords, p, t)| {
                let r = thermal_report(p, *t)?;
                let mut row: Vec<Option<f64>> = coords.iter().map(|&x| Some(x)).collect();
                for m in &measures {
                    let v = r.get(m).ok_or_else(|| Error::Config(format!("unknown measure '{m}'")))?;
                    row.push(Some(check_emitted(m, v)?));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Table { header, rows })
}

/// Per point: `T_s` from negativity (and optionally ALB) and the purity-ball `T*`.
pub fn run_threshold(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let mut header: Vec<String> = cfg.mode.axes().iter().map(|a| a.name().to_string()).collect();
    header.push("ts_negativity".into());
    if cfg.ts_alb {
        header.push("ts_alb".into());
    }
    header.push("tstar".into());

    let dims = BipartiteDims::QUTRITS;
    let mdims = MultipartiteDims::from(dims);
    let points = cfg.points();
    let rows = with_pool(cfg.threads, || {
        points
            .par_iter()
            .map(|(coords, p, _)| {
                let spectrum = finite_spectrum(p)?;
                let ts = estimate_ts(&spectrum, dims, negativity, cfg.scan)?;
                let ts_alb = if cfg.ts_alb {
                    Some(estimate_ts(&spectrum, dims, |r| alb(r).expect("qutrit state"), cfg.scan)?)
                } else {
                    None
                };
                let t_star = tstar(&spectrum, &mdims);
                for t in [Some(ts), ts_alb].into_iter().flatten().flatten() {
                    if t_star.is_none_or(|ts_max| t > ts_max * (1.0 + 1e-9)) {
                        return Err(Error::Consistency(format!(
                            "T_s estimate {t} exceeds T* {t_star:?} at {p:?}"
                        )));
                    }
                }
                let mut row: Vec<Option<f64>> = coords.iter().map(|&x| Some(x)).collect();
                row.push(ts);
                if let Some(a) = ts_alb {
                    row.push(a);
                }
                row.push(t_star);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Table { header, rows })
}

/// `E₁ … E₉` in closed-form labelling (the three central-block levels as
/// `E₄ ≤ E₅ ≤ E₆`), then the largest deviation from numerical diagonalization.
pub fn spectrum_row(p: &QutritChainParams) -> Result<([f64; 9], f64)> {
    let cf = closed_form_energies(p);
    let c = central_energies(p);
    let labelled = [cf.e1, cf.e2, cf.e3, c[0], c[1], c[2], cf.e7, cf.e8, cf.e9];
    let mut numeric = finite_spectrum(p)?.values;
    let mut sorted = labelled;
    sorted.sort_by(f64::total_cmp);
    numeric.sort_by(f64::total_cmp);
    let residual = sorted.iter().zip(&numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((labelled, residual))
}

pub fn run_spectrum(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let mut header: Vec<String> = cfg.mode.axes().iter().map(|a| a.name().to_string()).collect();
    header.extend((1..=9).map(|i| format!("E{i}")));
    header.push("residual".into());

    let mut rows = Vec::new();
    for (coords, p, _) in cfg.points() {
        let (e, residual) = spectrum_row(&p)?;
        if !(residual < SPECTRUM_RESIDUAL_TOL) {
            return Err(Error::Consistency(format!("closed-form residual {residual:e} at {p:?}")));
        }
        let mut row: Vec<Option<f64>> = coords.iter().map(|&x| Some(x)).collect();
        row.extend(e.iter().map(|&x| Some(x)));
        row.push(Some(residual));
        rows.push(row);
    }
    Ok(Table { header, rows })
}

/// Dispatches on the configured mode.
pub fn run(cfg: &SweepConfig) -> Result<Table> {
    match cfg.mode {
        Mode::Threshold => run_threshold(cfg),
        Mode::Spectrum => run_spectrum(cfg),
        _ => run_sweep(cfg),
    }
}

/// Single-point report at the fixed parameters of `cfg`.
pub fn report(cfg: &SweepConfig) -> Result<BoundReport> {
    if !(cfg.t > 0.0) {
        return Err(Error::Config(format!("temperature must be positive, got {}", cfg.t)));
    }
    let p = QutritChainParams::new(cfg.j, cfg.k, cfg.b1, cfg.b2);
    let r = thermal_report(&p, cfg.t)?;
    for f in BoundReport::FIELDS {
        check_emitted(f, r.get(f).expect("known field"))?;
    }
    Ok(r)
}

/// `key=value` lines in field order.
pub fn format_report(r: &BoundReport) -> String {
    BoundReport::FIELDS
        .iter()
        .map(|f| format!("{f}={}\n", format_number(r.get(f).expect("known field"))))
        .collect()
}

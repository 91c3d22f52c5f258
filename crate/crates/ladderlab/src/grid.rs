//! Uniform grids, sampled wavefunctions, and the trapezoid inner product.
//!
//! Two domain kinds exist: the half line (0, ∞) used by the radial problems
//! (grids must start strictly above zero so centrifugal terms stay finite) and
//! the full line (−∞, ∞) used by the Morse problem. A grid of `count` points
//! spans `[x_min, x_max]` with spacing `(x_max − x_min)/(count − 1)`; all
//! quadrature is plain trapezoid, which is more than accurate enough for the
//! exponentially decaying states handled here (e.g. ∫e^{−x²} over [−8, 8] at
//! 4001 points reproduces √π to better than 1e-10).

use crate::error::{LadderError, Result};
use crate::qn::{ModelId, QuantumNumbers};
use crate::tolerances::{MIN_GRID_COUNT, WINDOW_BAND};
use std::fmt;
use std::io::Write;
use std::ops::Range;
use std::sync::Arc;

/// Domain topology of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// (0, ∞): radial problems; `x_min > 0` enforced.
    HalfLine,
    /// (−∞, ∞): the Morse coordinate.
    FullLine,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::HalfLine => f.write_str("half_line"),
            DomainKind::FullLine => f.write_str("full_line"),
        }
    }
}

/// A uniform sampling grid. Cheap to clone: the abscissae are shared.
#[derive(Clone, Debug)]
pub struct Grid {
    pub kind: DomainKind,
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
    /// `(x_max − x_min) / (count − 1)`.
    pub spacing: f64,
    x: Arc<[f64]>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.x_min == other.x_min
            && self.x_max == other.x_max
            && self.count == other.count
    }
}

impl Grid {
    /// The sampled abscissae, `x_i = x_min + i·spacing`.
    #[must_use]
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Interior index window used by residual metrics: trims
    /// `ceil(count · band)` points from each end with the default band.
    #[must_use]
    pub fn window(&self) -> Range<usize> {
        self.window_band(WINDOW_BAND)
    }

    /// Interior window with an explicit trim band.
    #[must_use]
    pub fn window_band(&self, band: f64) -> Range<usize> {
        let k = ((self.count as f64) * band).ceil() as usize;
        k..self.count - k
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}, {}] x {}",
            self.kind, self.x_min, self.x_max, self.count
        )
    }
}

/// Construct a validated uniform grid.
///
/// Rejects: fewer than [`MIN_GRID_COUNT`] points, non-increasing bounds,
/// non-finite bounds, and half-line grids that touch or cross zero.
pub fn build_grid(kind: DomainKind, x_min: f64, x_max: f64, count: usize) -> Result<Grid> {
    if !(x_min.is_finite() && x_max.is_finite()) {
        return Err(LadderError::InvalidGrid("bounds must be finite".into()));
    }
    if x_max <= x_min {
        return Err(LadderError::InvalidGrid(format!(
            "x_max ({x_max}) must exceed x_min ({x_min})"
        )));
    }
    if count < MIN_GRID_COUNT {
        return Err(LadderError::InvalidGrid(format!(
            "count ({count}) below minimum {MIN_GRID_COUNT}"
        )));
    }
    if kind == DomainKind::HalfLine && x_min <= 0.0 {
        return Err(LadderError::InvalidGrid(format!(
            "half-line grid requires x_min > 0, got {x_min}"
        )));
    }
    let spacing = (x_max - x_min) / (count as f64 - 1.0);
    let x: Arc<[f64]> = (0..count)
        .map(|i| x_min + spacing * i as f64)
        .collect::<Vec<_>>()
        .into();
    Ok(Grid {
        kind,
        x_min,
        x_max,
        count,
        spacing,
        x,
    })
}

/// A wavefunction sampled on a grid, with optional ladder bookkeeping.
#[derive(Clone, Debug)]
pub struct Wavefunction {
    pub grid: Grid,
    pub values: Vec<f64>,
    /// Lattice labels when the state is a tagged hierarchy member.
    pub labels: Option<QuantumNumbers>,
    /// Hierarchy the state belongs to, when known.
    pub model: Option<ModelId>,
}

impl Wavefunction {
    /// Wrap samples on a grid. Lengths must agree.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.count {
            return Err(LadderError::InvalidGrid(format!(
                "sample count {} does not match grid count {}",
                values.len(),
                grid.count
            )));
        }
        Ok(Wavefunction {
            grid,
            values,
            labels: None,
            model: None,
        })
    }

    /// Attach lattice labels and a model tag.
    #[must_use]
    pub fn tagged(mut self, model: ModelId, labels: QuantumNumbers) -> Self {
        self.model = Some(model);
        self.labels = Some(labels);
        self
    }
}

/// Trapezoid rule over the whole grid.
#[must_use]
pub fn trapz(grid: &Grid, values: &[f64]) -> f64 {
    let sum: f64 = values.iter().sum();
    grid.spacing * (sum - 0.5 * (values[0] + values[values.len() - 1]))
}

/// Trapezoid inner product ⟨f, g⟩ = ∫ f g dx (states are real throughout).
pub fn inner_product(f: &Wavefunction, g: &Wavefunction) -> Result<f64> {
    if f.grid != g.grid {
        return Err(LadderError::GridMismatch);
    }
    let prod: Vec<f64> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b)
        .collect();
    Ok(trapz(&f.grid, &prod))
}

/// Normalize to unit trapezoid norm with a deterministic sign: the sample of
/// largest magnitude (first such index on ties) is made positive. Idempotent.
pub fn normalize(f: &Wavefunction) -> Result<Wavefunction> {
    let norm_sq = inner_product(f, f)?;
    if !(norm_sq.is_finite()) {
        return Err(LadderError::NonFinite("normalization".into()));
    }
    if norm_sq <= 0.0 {
        return Err(LadderError::ZeroNorm);
    }
    let inv = 1.0 / norm_sq.sqrt();
    let mut values: Vec<f64> = f.values.iter().map(|v| v * inv).collect();
    let mut peak = 0usize;
    let mut best = -1.0f64;
    for (i, v) in values.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            peak = i;
        }
    }
    if values[peak] < 0.0 {
        for v in &mut values {
            *v = -*v;
        }
    }
    Ok(Wavefunction {
        grid: f.grid.clone(),
        values,
        labels: f.labels,
        model: f.model,
    })
}

/// Zero `k` samples at each edge in place (used after derivative stencils so
/// one-sided boundary artifacts cannot leak into overlaps).
pub fn guard_edges(values: &mut [f64], k: usize) {
    let n = values.len();
    for i in 0..k.min(n) {
        values[i] = 0.0;
        values[n - 1 - i] = 0.0;
    }
}

/// Write `x,psi` rows in scientific notation with 16 significant digits.
pub fn write_csv<W: Write>(out: &mut W, f: &Wavefunction) -> std::io::Result<()> {
    writeln!(out, "x,psi")?;
    for (x, v) in f.grid.x().iter().zip(&f.values) {
        writeln!(out, "{x:.15e},{v:.15e}")?;
    }
    Ok(())
}

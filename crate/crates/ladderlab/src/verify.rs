//! The verification suite: every algebraic identity the engine instantiates,
//! measured as a number against the finite-difference oracle or a closed
//! form, with pinned pass gates.
//!
//! Checks are grouped by identity tag (see [`IDENTITY_REGISTRY`]):
//!
//! * `spectrum_formula` — oracle eigenvalues vs the family energy formulas;
//! * `refined_identity` / `refined_both_sides` — `h·(H−E) = BA − φ` on
//!   Gaussian test functions, the second tag adding the partner product
//!   `A B − φ` evaluated at the down-shifted label;
//! * `intertwining_conventional` — `H^ℓ X⁺ = X⁺ H^{ℓ+1}`;
//! * `commutator_unit` / `commutator_cross` — `[A^i, B^i] = 1` and the
//!   vanishing cross-pair commutators, label-aware;
//! * `label_bookkeeping` — the L/N commutator table as exact rational
//!   step arithmetic;
//! * `ladder_action` — normalized operator images vs oracle eigenfunctions;
//! * `ladder_coefficient` — measured `|c|` vs `√(q(ℓ) − q(n))`;
//! * `quadratic_display` / `quadratic_conventional` — two-step composites vs
//!   their displayed first-order reductions and the conventional `X^±`;
//! * `ground_annihilation` — annihilators on closed-form ground states;
//! * `conventional_factorization` — `X⁺X⁻ − q = H`;
//! * `dilation_law` — resampling round-trips and closed-form squeezes;
//! * `build_residual` — eigen-residuals of ladder-built states.
//!
//! Every residual lives on the interior grid window (a 5% band is discarded
//! at each edge) so one-sided stencil closures and guard zeros never enter a
//! metric. Residual denominators follow the measured object's own scale;
//! when a denominator underflows [`RESIDUAL_DENOMINATOR_FLOOR`] the check
//! switches to an absolute gate of [`ABSOLUTE_RESIDUAL_THRESHOLD`].
//!
//! Reports are deterministic: the same [`SuiteConfig`] produces byte-identical
//! JSON on every run, sequential or parallel — each check writes only its own
//! record and the reduction sorts by check id.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{LadderError, Result};
use crate::grid::{
    build_grid, guard_edges, inner_product, normalize, DomainKind, Grid, Wavefunction,
};
use crate::ladder::{build_state, eigen_residual, ladder_coefficient};
use crate::model::{HierarchyModel, QuadraticKind};
use crate::operator::{apply, d1, d2, dilate, OperatorChain};
use crate::oracle::{oracle_eigenvalues, oracle_pairs};
use crate::par::{map_indexed, ExecMode};
use crate::qn::{fmt_q, qint, qr, ModelId, Q, QuantumNumbers};
use crate::tolerances::{
    ABSOLUTE_RESIDUAL_THRESHOLD, ANNIHILATION_NORM_FLOOR, EDGE_GUARD, ORACLE_GAP_FRACTION,
    ORACLE_STATE_LEVELS, RESIDUAL_DENOMINATOR_FLOOR,
};

// ---------------------------------------------------------------------------
// Pass gates. Loose enough to be grid-stable (measured headroom ≥ 2× on the
// pinned grids), tight enough that a broken sign or label map fails by orders
// of magnitude. Config thresholds override these per tag or per check id.
// ---------------------------------------------------------------------------

/// Identity residual gate for oscillator and Morse checks.
pub const GATE_RESIDUAL: f64 = 1e-5;
/// Identity residual gate for Coulomb checks (dilation resampling adds
/// interpolation error on top of the stencil error).
pub const GATE_RESIDUAL_DILATED: f64 = 1e-4;
/// Relative spectrum gate (oscillator; Coulomb ℓ ≥ 1).
pub const GATE_SPECTRUM_REL: f64 = 1e-4;
/// Relative spectrum gate for the singular Coulomb ℓ=0 channel.
pub const GATE_SPECTRUM_COULOMB_L0: f64 = 5e-3;
/// Absolute spectrum gate (Morse levels cluster near zero).
pub const GATE_SPECTRUM_ABS: f64 = 1e-4;
/// Ladder-action overlap gate.
pub const GATE_OVERLAP: f64 = 0.9999;
/// Overlap gate for the Coulomb ground step into the half-integer channel.
pub const GATE_OVERLAP_HALF_GROUND: f64 = 0.999;
/// Relative gate on measured vs predicted ladder coefficients.
pub const GATE_COEFFICIENT: f64 = 1e-3;
/// Gate on dilation resampling checks (pure interpolation error).
pub const GATE_DILATION: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Shared numeric helpers.
// ---------------------------------------------------------------------------

/// Plain Euclidean norm of a sample block (no quadrature weight — every
/// residual here is a ratio on a fixed window, so the common `√h` cancels).
#[must_use]
pub fn raw_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// [`raw_norm`] over an iterator of samples.
pub fn raw_norm_iter(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|v| v * v).sum::<f64>().sqrt()
}

/// Half-line test bump `√x · e^{−(x−x₀)²/2σ²}`: the `√x` factor matches the
/// `r^{|ℓ|+1/2}` boundary behaviour so half-line operators see admissible
/// data at the origin.
#[must_use]
pub fn gauss_half(grid: &Grid, x0: f64, sigma: f64) -> Wavefunction {
    let values = grid
        .x()
        .iter()
        .map(|&x| x.sqrt() * (-(x - x0) * (x - x0) / (2.0 * sigma * sigma)).exp())
        .collect();
    Wavefunction::new(grid.clone(), values).expect("gaussian bump values are finite")
}

/// Full-line test bump `e^{−(x−x₀)²/2σ²}`.
#[must_use]
pub fn gauss_full(grid: &Grid, x0: f64, sigma: f64) -> Wavefunction {
    let values = grid
        .x()
        .iter()
        .map(|&x| (-(x - x0) * (x - x0) / (2.0 * sigma * sigma)).exp())
        .collect();
    Wavefunction::new(grid.clone(), values).expect("gaussian bump values are finite")
}

/// Generic test-function recipe for grids without a curated anchor list:
/// `k` bumps spread over the middle of the box, `σ = max(span/12, 10·h)`.
#[must_use]
pub fn default_bumps(grid: &Grid, k: usize) -> Vec<Wavefunction> {
    let span = grid.x_max - grid.x_min;
    let sigma = (span / 12.0).max(10.0 * grid.spacing);
    (0..k)
        .map(|j| {
            let frac = 0.3 + 0.4 * (j as f64 + 0.5) / (k.max(1) as f64);
            let x0 = grid.x_min + frac * span;
            match grid.kind {
                DomainKind::HalfLine => gauss_half(grid, x0, sigma),
                DomainKind::FullLine => gauss_full(grid, x0, sigma),
            }
        })
        .collect()
}

/// The curated bump anchors `(x₀, σ)` used by the pinned suite grids.
fn anchor_bumps(id: ModelId) -> &'static [(f64, f64)] {
    match id {
        ModelId::Oscillator => &[(3.0, 0.7), (5.0, 1.0), (7.0, 1.3)],
        ModelId::Morse => &[(-2.0, 0.8), (0.0, 1.0), (1.5, 0.6)],
        ModelId::Coulomb => &[(8.0, 2.0), (15.0, 3.0), (25.0, 4.0)],
    }
}

/// Morse commutator checks chain four derivative applications; these wider
/// bumps keep the compounded stencil error inside the 1e-5 gate.
const MORSE_COMMUTATOR_BUMPS: [(f64, f64); 2] = [(-1.0, 1.5), (1.0, 1.2)];
/// Anchors for the Morse conventional-factorization checks (the `e^{2αx}`
/// coefficient growth punishes bumps pushed toward the right edge).
const MORSE_CONVENTIONAL_BUMPS: [(f64, f64); 2] = [(-2.0, 0.8), (0.5, 1.0)];

/// Build `k` bumps on `grid`: the curated anchors when the grid spans the
/// model's standard box, the generic recipe otherwise.
#[must_use]
pub fn bumps_for(model: &HierarchyModel, grid: &Grid, k: usize) -> Vec<Wavefunction> {
    let (kind, x_min, x_max, _) = model.default_box();
    if grid.kind == kind && grid.x_min == x_min && grid.x_max == x_max {
        make_bumps(grid, &anchor_bumps(model.id())[..k.min(3)])
    } else {
        default_bumps(grid, k)
    }
}

fn make_bumps(grid: &Grid, anchors: &[(f64, f64)]) -> Vec<Wavefunction> {
    anchors
        .iter()
        .map(|&(x0, s)| match grid.kind {
            DomainKind::HalfLine => gauss_half(grid, x0, s),
            DomainKind::FullLine => gauss_full(grid, x0, s),
        })
        .collect()
}

/// Euclidean norm restricted to the grid's interior window.
fn wnorm(grid: &Grid, values: &[f64]) -> f64 {
    raw_norm(&values[grid.window()])
}

/// Windowed norm of an elementwise difference.
fn wdiff(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    let w = grid.window();
    raw_norm_iter(a[w.clone()].iter().zip(&b[w]).map(|(x, y)| x - y))
}

/// Least-squares proportionality fit on the window: the constant `c`
/// minimizing `‖out − c·reference‖` and the relative misfit
/// `‖out − c·reference‖ / ‖out‖`.
#[must_use]
pub fn fit_constant(grid: &Grid, out: &[f64], reference: &[f64]) -> (f64, f64) {
    let w = grid.window();
    let (ow, rw) = (&out[w.clone()], &reference[w]);
    let rr: f64 = rw.iter().map(|v| v * v).sum();
    let or: f64 = ow.iter().zip(rw).map(|(a, b)| a * b).sum();
    let c = or / rr;
    let resid = raw_norm_iter(ow.iter().zip(rw).map(|(a, b)| a - c * b)) / raw_norm(ow);
    (c, resid)
}

/// Trapezoid quadrature of `a·b` over a window slice.
fn trapz_product(h: f64, a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    h * (s - 0.5 * (a[0] * b[0] + a[a.len() - 1] * b[b.len() - 1]))
}

/// `|⟨u, v⟩|` with both factors trapezoid-normalized on the interior window.
/// Full-grid overlaps are poisoned when a composite differentiates guarded
/// edge zeros through singular coefficients; the windowed form is exact for
/// everything the window sees.
#[must_use]
pub fn windowed_overlap(grid: &Grid, u: &[f64], v: &[f64]) -> f64 {
    let w = grid.window();
    let (uw, vw) = (&u[w.clone()], &v[w]);
    let h = grid.spacing;
    let nu = trapz_product(h, uw, uw);
    let nv = trapz_product(h, vw, vw);
    (trapz_product(h, uw, vw) / (nu.sqrt() * nv.sqrt())).abs()
}

// ---------------------------------------------------------------------------
// Check-result plumbing.
// ---------------------------------------------------------------------------

/// How a check's number is to be read against its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Metric {
    /// Windowed residual over a problem-scale denominator; pass is `≤`.
    #[serde(rename = "relative residual")]
    RelativeResidual,
    /// State overlap magnitude; pass is `≥`.
    #[serde(rename = "overlap")]
    Overlap,
    /// Raw difference magnitude; pass is `≤`.
    #[serde(rename = "absolute error")]
    AbsoluteError,
}

impl Metric {
    /// Apply the metric's orientation.
    #[must_use]
    pub fn passes(self, value: f64, threshold: f64) -> bool {
        match self {
            Metric::Overlap => value >= threshold,
            Metric::RelativeResidual | Metric::AbsoluteError => value <= threshold,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::RelativeResidual => "relative residual",
            Metric::Overlap => "overlap",
            Metric::AbsoluteError => "absolute error",
        })
    }
}

/// Execution status of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// Ran and met its gate.
    Passed,
    /// Ran and missed its gate.
    Failed,
    /// Aborted with a hard error (recorded; never aborts the suite).
    Errored,
    /// Deliberately not evaluated (documented in `note`).
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Passed => "passed",
            CheckStatus::Failed => "failed",
            CheckStatus::Errored => "errored",
            CheckStatus::Skipped => "skipped",
        })
    }
}

/// One executed check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    /// Stable id `model/tag/detail`; report ordering key.
    pub id: String,
    /// Model name (`oscillator`, `morse`, `coulomb`).
    pub model: String,
    /// Energy label of the checked lattice point, when one applies.
    pub n: Option<String>,
    /// Channel label of the checked lattice point, when one applies.
    pub l: Option<String>,
    /// Operator-pair index (1 or 2), when one applies.
    pub pair: Option<u8>,
    /// How to read `value` against `threshold`.
    pub metric: Metric,
    /// The measured number; absent for skipped/errored checks.
    pub value: Option<f64>,
    /// The pass gate in force (after any config override).
    pub threshold: f64,
    /// `metric.passes(value, threshold)`; `false` when not evaluated.
    pub passed: bool,
    /// Execution status; distinguishes skips and hard errors from failures.
    pub status: CheckStatus,
    /// Fitted constants, skip reasons, error messages.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Aggregate counts for a report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
    pub skipped: usize,
}

/// A full suite run: configuration echo, per-check records, counts.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    /// Suite name from the config.
    pub suite: String,
    /// Caller-supplied stamp; defaults to the epoch so reports are
    /// reproducible byte-for-byte unless the caller opts into wall time.
    pub timestamp: String,
    /// Human-readable description of the grids the suite ran on.
    pub grid: BTreeMap<String, String>,
    /// All executed checks, ordered by id.
    pub checks: Vec<CheckResult>,
    /// Counts consistent with `checks`.
    pub summary: Summary,
}

impl VerificationReport {
    /// Pretty JSON with a trailing newline. Field order is fixed by the
    /// struct layout and map keys are sorted, so equal reports serialize to
    /// equal bytes.
    #[must_use]
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `true` when every evaluated check passed (skips are not failures).
    #[must_use]
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.errored == 0
    }
}

/// Suite configuration. [`Default`] enables every model and every check at
/// the pinned gates.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Report `suite` field.
    pub suite: String,
    /// Report `timestamp` field (callers wanting wall time set it).
    pub timestamp: String,
    /// Models to include; an empty list yields an empty report.
    pub models: Vec<ModelId>,
    /// Check filters matched against tags and ids (prefix match, a trailing
    /// plural `s` is tolerated); empty means all checks.
    pub checks: Vec<String>,
    /// Threshold overrides keyed by identity tag or exact check id.
    pub thresholds: BTreeMap<String, f64>,
    /// Shrink the dense identity grids (bench/smoke profile; the pinned
    /// gates are only guaranteed on the full profile).
    pub quick: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: "ladderlab".into(),
            timestamp: "1970-01-01T00:00:00Z".into(),
            models: ModelId::ALL.to_vec(),
            checks: Vec::new(),
            thresholds: BTreeMap::new(),
            quick: false,
        }
    }
}

/// What a runner measured.
enum Measured {
    /// A number for the check's declared metric.
    Value(f64),
    /// Denominator underflow: report as absolute error at the floor gate.
    Absolute(f64),
    /// Not evaluated, with the documented reason.
    Skip(String),
    /// Evaluated, with a supplementary note (fitted constants etc.).
    ValueWithNote(f64, String),
}

type Runner = Box<dyn Fn(&SuiteCtx) -> Result<Measured> + Send + Sync>;

/// A check definition: identity metadata plus the measurement closure.
struct CheckDef {
    id: String,
    model: ModelId,
    tag: &'static str,
    n: Option<Q>,
    l: Option<Q>,
    pair: Option<u8>,
    metric: Metric,
    threshold: f64,
    runner: Runner,
}

/// One diagonalized channel: eigenvalues paired with their eigenvectors.
type OracleChannel = (Vec<f64>, Vec<Wavefunction>);

/// Shared run state: memoized oracle channels and ladder-built states, plus
/// the grid-size knobs. All checks read through this so a channel is
/// diagonalized once per suite no matter how many checks consume it.
struct SuiteCtx {
    quick: bool,
    oracle: Mutex<HashMap<(ModelId, Q, usize), OracleChannel>>,
    built: Mutex<HashMap<(ModelId, Q, Q, usize), Wavefunction>>,
}

impl SuiteCtx {
    fn new(quick: bool) -> Self {
        SuiteCtx {
            quick,
            oracle: Mutex::new(HashMap::new()),
            built: Mutex::new(HashMap::new()),
        }
    }

    /// Dense identity-check grid size.
    fn dense(&self) -> usize {
        if self.quick {
            4001
        } else {
            16001
        }
    }

    /// Morse commutator grid size (four chained derivative applications need
    /// extra resolution to clear the shared residual gate).
    fn morse_commutator_count(&self) -> usize {
        if self.quick {
            5001
        } else {
            20001
        }
    }

    /// The lowest oracle eigenpairs of a channel, memoized.
    fn oracle_channel(
        &self,
        model: &HierarchyModel,
        l: Q,
        grid: &Grid,
    ) -> Result<(Vec<f64>, Vec<Wavefunction>)> {
        let key = (model.id(), l, grid.count);
        if let Some(hit) = self.oracle.lock().expect("oracle cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let k = ORACLE_STATE_LEVELS.min(grid.count - 2);
        let pairs = oracle_pairs(model, l, grid, k)?;
        self.oracle
            .lock()
            .expect("oracle cache lock")
            .insert(key, pairs.clone());
        Ok(pairs)
    }

    /// Oracle eigenpair nearest the closed-form level `E(n)` of channel ℓ,
    /// required to sit within [`ORACLE_GAP_FRACTION`]·|E| of the formula.
    fn oracle_nearest(
        &self,
        model: &HierarchyModel,
        n: Q,
        l: Q,
        grid: &Grid,
    ) -> Result<(f64, Wavefunction)> {
        let e = model.energy(n, l);
        let (w, states) = self.oracle_channel(model, l, grid)?;
        let mut best = 0usize;
        for j in 1..w.len() {
            if (w[j] - e).abs() < (w[best] - e).abs() {
                best = j;
            }
        }
        if (w[best] - e).abs() > ORACLE_GAP_FRACTION * e.abs() {
            return Err(LadderError::LevelMismatch(format!(
                "no oracle level near E={e:.6} for (n={}, l={}): closest is {:.6}",
                fmt_q(n),
                fmt_q(l),
                w[best]
            )));
        }
        Ok((w[best], states[best].clone()))
    }

    /// A ladder-built normalized eigenstate, memoized.
    fn built(&self, model: &HierarchyModel, n: Q, l: Q, grid: &Grid) -> Result<Wavefunction> {
        let key = (model.id(), n, l, grid.count);
        if let Some(hit) = self.built.lock().expect("built cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let psi = build_state(model, n, l, grid)?.psi;
        self.built
            .lock()
            .expect("built cache lock")
            .insert(key, psi.clone());
        Ok(psi)
    }
}

// ---------------------------------------------------------------------------
// Identity registry and coverage.
// ---------------------------------------------------------------------------

/// Every identity family the suite must exercise at least once, with the
/// statement it quantifies. [`run_suite`] asserts coverage whenever the
/// config does not restrict models or checks.
pub const IDENTITY_REGISTRY: [(&str, &str); 15] = [
    ("spectrum_formula", "oracle eigenvalues match E_n^l"),
    ("refined_identity", "h (H - E) f = (B A - phi) f"),
    ("refined_both_sides", "partner product A B - phi at the shifted label"),
    ("intertwining_conventional", "H^l X+ = X+ H^{l+1}"),
    ("commutator_unit", "[A^i, B^i] = 1 label-aware"),
    ("commutator_cross", "[A^1, A^2] = [A^1, B^2] = 0"),
    ("label_bookkeeping", "L/N commutator table as exact label steps"),
    ("ladder_action", "A psi_n^l lands on the oracle target state"),
    ("ladder_coefficient", "|c| = sqrt(q(l) - q(n)) on measured steps"),
    ("quadratic_display", "two-step composites match displayed reductions"),
    ("quadratic_conventional", "composites are proportional to X+/X-"),
    ("ground_annihilation", "annihilators kill closed-form grounds"),
    ("conventional_factorization", "X+ X- - q = H"),
    ("dilation_law", "D(mu) resampling laws"),
    ("build_residual", "ladder-built states satisfy (H - E) psi = 0"),
];

// ---------------------------------------------------------------------------
// Measurement cores, shared by the suite and the one-shot check functions.
// ---------------------------------------------------------------------------

/// Which side of the refined factorization to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RefinedSide {
    /// `(B_{n,ℓ} A_{n,ℓ} − φ) f` against `h (H − E) f`.
    Product,
    /// `(A B − φ) f` with both operators and φ at the down-shifted label.
    Partner,
}

/// Worst windowed residual of the refined identity over the bump set.
fn measure_refined(
    model: &HierarchyModel,
    i: u8,
    n: Q,
    l: Q,
    grid: &Grid,
    bumps: &[Wavefunction],
    side: RefinedSide,
) -> Result<f64> {
    let e = model.energy(n, l);
    let hfac = model.h_factor(n, l);
    let (chain, phi) = match side {
        RefinedSide::Product => (
            model.chain_b(i, n, l)?.compose(&model.chain_a(i, n, l)?),
            model.phi(i, n, l)?,
        ),
        RefinedSide::Partner => {
            let d = model.down(i, QuantumNumbers::new(n, l))?;
            (
                model
                    .chain_a(i, d.n, d.l)?
                    .compose(&model.chain_b(i, d.n, d.l)?),
                model.phi(i, d.n, d.l)?,
            )
        }
    };
    let x = grid.x();
    let mut worst = 0.0f64;
    for f in bumps {
        let hf = model.hamiltonian_apply(l, f)?;
        let lhs: Vec<f64> = (0..x.len())
            .map(|j| hfac(x[j]) * (hf.values[j] - e * f.values[j]))
            .collect();
        let prod = apply(&chain, f)?;
        let rhs: Vec<f64> = (0..x.len())
            .map(|j| prod.values[j] - phi * f.values[j])
            .collect();
        let den = wnorm(grid, &lhs).max(wnorm(grid, &f.values));
        let num = wdiff(grid, &rhs, &lhs);
        worst = worst.max(if den > RESIDUAL_DENOMINATOR_FLOOR {
            num / den
        } else {
            num
        });
    }
    Ok(worst)
}

/// Worst windowed residual of `[A^i, B^i] f = f` over the bump set, with the
/// products taken label-aware: `A` and `B` of the descended point on one
/// side, of the point itself on the other.
fn measure_commutator_unit(
    model: &HierarchyModel,
    i: u8,
    n: Q,
    l: Q,
    grid: &Grid,
    bumps: &[Wavefunction],
) -> Result<f64> {
    let d = model.down(i, QuantumNumbers::new(n, l))?;
    let ab = model
        .chain_a(i, d.n, d.l)?
        .compose(&model.chain_b(i, d.n, d.l)?);
    let ba = model.chain_b(i, n, l)?.compose(&model.chain_a(i, n, l)?);
    let mut worst = 0.0f64;
    for f in bumps {
        let t1 = apply(&ab, f)?;
        let t2 = apply(&ba, f)?;
        let w = grid.window();
        let num = raw_norm_iter(
            t1.values[w.clone()]
                .iter()
                .zip(&t2.values[w.clone()])
                .zip(&f.values[w])
                .map(|((a, b), fv)| (a - b) - fv),
        );
        worst = worst.max(num / wnorm(grid, &f.values));
    }
    Ok(worst)
}

/// Cross-pair commutator to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CrossKind {
    /// `[A¹, A²] = 0`: both orders of ascending through the two pairs.
    A1A2,
    /// `[A¹, B²] = 0`: ascend-then-descend against descend-then-ascend.
    A1B2,
}

/// Worst windowed residual of a vanishing cross-pair commutator, normalized
/// by the test function's own norm.
fn measure_commutator_cross(
    model: &HierarchyModel,
    kind: CrossKind,
    n: Q,
    l: Q,
    grid: &Grid,
    bumps: &[Wavefunction],
) -> Result<f64> {
    let here = QuantumNumbers::new(n, l);
    let s1 = model.step(1, here)?;
    let (p, q) = match kind {
        CrossKind::A1A2 => {
            let s2 = model.step(2, here)?;
            (
                model.chain_a(1, s2.n, s2.l)?.compose(&model.chain_a(2, n, l)?),
                model.chain_a(2, s1.n, s1.l)?.compose(&model.chain_a(1, n, l)?),
            )
        }
        CrossKind::A1B2 => {
            let d2lbl = model.down(2, here)?;
            let db = model.down(2, s1)?;
            (
                model
                    .chain_a(1, d2lbl.n, d2lbl.l)?
                    .compose(&model.chain_b(2, d2lbl.n, d2lbl.l)?),
                model.chain_b(2, db.n, db.l)?.compose(&model.chain_a(1, n, l)?),
            )
        }
    };
    let mut worst = 0.0f64;
    for f in bumps {
        let t1 = apply(&p, f)?;
        let t2 = apply(&q, f)?;
        worst = worst.max(wdiff(grid, &t1.values, &t2.values) / wnorm(grid, &f.values));
    }
    Ok(worst)
}

/// Conventional intertwining residual `‖H^ℓ X⁺f − X⁺ H^{ℓ+1}f‖ / ‖X⁺H^{ℓ+1}f‖`.
/// For the oscillator this is the case-(a) x-hierarchy statement, i.e. both
/// Hamiltonians carry their `−2ℓ` shift.
fn measure_intertwining(
    model: &HierarchyModel,
    l: i64,
    grid: &Grid,
    bumps: &[Wavefunction],
) -> Result<f64> {
    let plus = model.conventional(qint(l))?.plus;
    let shifted = matches!(model, HierarchyModel::RadialOscillator);
    let mut worst = 0.0f64;
    for f in bumps {
        let mut hf = model.hamiltonian_apply(qint(l + 1), f)?;
        if shifted {
            for (v, fv) in hf.values.iter_mut().zip(&f.values) {
                *v -= 2.0 * (l + 1) as f64 * fv;
            }
        }
        let right = apply(&plus, &hf)?;
        let pf = apply(&plus, f)?;
        let mut left = model.hamiltonian_apply(qint(l), &pf)?;
        if shifted {
            for (v, pv) in left.values.iter_mut().zip(&pf.values) {
                *v -= 2.0 * l as f64 * pv;
            }
        }
        let num = wdiff(grid, &left.values, &right.values);
        let den = wnorm(grid, &right.values);
        worst = worst.max(if den > RESIDUAL_DENOMINATOR_FLOOR {
            num / den
        } else {
            num
        });
    }
    Ok(worst)
}

/// Exact label-step bookkeeping: over the physical lattice (plus the
/// half-shifted copy for Coulomb), `A^i` must move `(n, ℓ)` by the table
/// delta and `B^i` must undo it. Rational arithmetic, so the deviation is
/// exactly zero or the table is wrong.
fn measure_label_bookkeeping(model: &HierarchyModel) -> Result<f64> {
    let (d1_, d2_): ((Q, Q), (Q, Q)) = match model {
        HierarchyModel::RadialOscillator => ((qint(1), qint(1)), (qint(1), qint(-1))),
        HierarchyModel::Morse { .. } => ((qint(1), qint(1)), (qint(-1), qint(1))),
        HierarchyModel::RadialCoulomb => ((qr(1, 2), qr(1, 2)), (qr(1, 2), qr(-1, 2))),
    };
    let mut points = model.lattice(6)?;
    if matches!(model, HierarchyModel::RadialCoulomb) {
        let shifted: Vec<QuantumNumbers> = points
            .iter()
            .map(|p| QuantumNumbers::new(p.n + qr(1, 2), p.l + qr(1, 2)))
            .collect();
        points.extend(shifted);
    }
    let mut worst = 0.0f64;
    for p in points {
        for (i, (dn, dl)) in [(1u8, d1_), (2u8, d2_)] {
            let up = model.step(i, p)?;
            let down = model.down(i, p)?;
            for delta in [
                up.n - p.n - dn,
                up.l - p.l - dl,
                p.n - down.n - dn,
                p.l - down.l - dl,
            ] {
                worst = worst.max(crate::qn::qf(delta).abs());
            }
        }
    }
    Ok(worst)
}

/// Overlap of a normalized single `A^i` step from a ladder-built state with
/// the oracle eigenfunction at the stepped label.
fn measure_step_overlap(
    ctx: &SuiteCtx,
    model: &HierarchyModel,
    i: u8,
    n: Q,
    l: Q,
    grid: &Grid,
) -> Result<f64> {
    let src = ctx.built(model, n, l, grid)?;
    let mut out = apply(&model.chain_a(i, n, l)?, &src)?;
    guard_edges(&mut out.values, EDGE_GUARD);
    let c2 = inner_product(&out, &out)?;
    if !c2.is_finite() || c2 <= ANNIHILATION_NORM_FLOOR {
        return Err(LadderError::Annihilated(format!(
            "A{i} image at (n={}, l={}) has no usable norm",
            fmt_q(n),
            fmt_q(l)
        )));
    }
    let c = c2.sqrt();
    for v in &mut out.values {
        *v /= c;
    }
    let tgt = model.step(i, QuantumNumbers::new(n, l))?;
    let (_e, oracle_psi) = ctx.oracle_nearest(model, tgt.n, tgt.l, grid)?;
    Ok(inner_product(&out, &oracle_psi)?.abs())
}

/// Relative sup-norm left over when `op` (default: the channel annihilator)
/// acts on the closed-form ground state of channel ℓ.
fn measure_annihilation(
    model: &HierarchyModel,
    l: Q,
    grid: &Grid,
    op: Option<OperatorChain>,
) -> Result<f64> {
    let psi = normalize(&Wavefunction::new(
        grid.clone(),
        model.ground_values(l, grid)?,
    )?)?;
    let chain = match op {
        Some(c) => c,
        None => model.annihilator(l)?,
    };
    let out = apply(&chain, &psi)?;
    let sup_out = out.values[grid.window()]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let sup_psi = psi.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(sup_out / sup_psi)
}

/// Residual of the conventional factorization `X⁺X⁻ − q = H` on bumps.
/// `hamiltonian` maps a bump to the right-hand side (model-specific shifts
/// live in the caller); `unit_floor` guards Morse/Coulomb denominators that
/// the nearly-cancelling `q` can drive toward zero.
fn measure_conventional_factorization(
    plus: &OperatorChain,
    minus: &OperatorChain,
    q: f64,
    hamiltonian: &dyn Fn(&Wavefunction) -> Result<Vec<f64>>,
    grid: &Grid,
    bumps: &[Wavefunction],
    unit_floor: bool,
) -> Result<f64> {
    let chain = plus.compose(minus);
    let mut worst = 0.0f64;
    for f in bumps {
        let hf = hamiltonian(f)?;
        let prod = apply(&chain, f)?;
        let lhs: Vec<f64> = prod
            .values
            .iter()
            .zip(&f.values)
            .map(|(p, fv)| p - q * fv)
            .collect();
        let mut den = wnorm(grid, &hf);
        if unit_floor {
            den = den.max(1.0);
        }
        let num = wdiff(grid, &lhs, &hf);
        worst = worst.max(if den > RESIDUAL_DENOMINATOR_FLOOR {
            num / den
        } else {
            num
        });
    }
    Ok(worst)
}

/// Morse displayed first-order reduction of `(B¹B²)` / `(A¹A²)`:
/// `±(1/α) f′ + ½(e^{αx} − ℓ₊) f` where `ℓ₊` is the upper channel of the
/// move (`+` for the descending product, `−` for the ascending one).
fn morse_display(
    alpha: f64,
    grid: &Grid,
    src: &Wavefunction,
    upper_channel: f64,
    descending: bool,
) -> Vec<f64> {
    let sign = if descending { 1.0 } else { -1.0 };
    let der = d1(grid, &src.values);
    let x = grid.x();
    let mut disp: Vec<f64> = (0..x.len())
        .map(|j| {
            sign * der[j] / alpha + 0.5 * ((alpha * x[j]).exp() - upper_channel) * src.values[j]
        })
        .collect();
    guard_edges(&mut disp, EDGE_GUARD);
    disp
}

/// Coulomb displayed second-order form of `(B²A¹)` at `(n, ℓ)`:
/// `(2n+1)[ (x/4)f″ − ((2ℓ+1)/4)f′ + (2ℓ+1)(2ℓ+3)/(16x)·f − x/(2n+1)²·f ]`.
fn coulomb_b2a1_display(grid: &Grid, src: &Wavefunction, n: f64, l: f64) -> Vec<f64> {
    let dd = d2(grid, &src.values);
    let der = d1(grid, &src.values);
    let x = grid.x();
    let two_n1 = 2.0 * n + 1.0;
    let mut disp: Vec<f64> = (0..x.len())
        .map(|j| {
            two_n1
                * (x[j] / 4.0 * dd[j] - (2.0 * l + 1.0) / 4.0 * der[j]
                    + (2.0 * l + 1.0) * (2.0 * l + 3.0) / (16.0 * x[j]) * src.values[j]
                    - x[j] / (two_n1 * two_n1) * src.values[j])
        })
        .collect();
    guard_edges(&mut disp, EDGE_GUARD);
    disp
}

/// Apply a quadratic composite to the ladder-built state at its source label
/// and guard the edges.
fn quadratic_image(
    ctx: &SuiteCtx,
    model: &HierarchyModel,
    kind: QuadraticKind,
    n: Q,
    l: Q,
    grid: &Grid,
) -> Result<(Wavefunction, Wavefunction)> {
    let composite = model.quadratic(kind, n, l)?;
    let src = ctx.built(model, n, l, grid)?;
    let mut out = apply(&composite.chain, &src)?;
    guard_edges(&mut out.values, EDGE_GUARD);
    Ok((src, out))
}

// ---------------------------------------------------------------------------
// Inventory: the full pinned check list.
// ---------------------------------------------------------------------------

fn qslug(v: Q) -> String {
    fmt_q(v).replace('/', "_")
}

fn suite_models() -> [HierarchyModel; 3] {
    [
        HierarchyModel::oscillator(),
        HierarchyModel::morse(1.0).expect("unit width is valid"),
        HierarchyModel::coulomb(),
    ]
}

fn model_by_id(id: ModelId) -> HierarchyModel {
    match id {
        ModelId::Oscillator => HierarchyModel::oscillator(),
        ModelId::Morse => HierarchyModel::morse(1.0).expect("unit width is valid"),
        ModelId::Coulomb => HierarchyModel::coulomb(),
    }
}

/// Residual gate for a model's operator-identity checks.
fn residual_gate(id: ModelId) -> f64 {
    match id {
        ModelId::Coulomb => GATE_RESIDUAL_DILATED,
        _ => GATE_RESIDUAL,
    }
}

#[allow(clippy::too_many_arguments)]
fn push(
    defs: &mut Vec<CheckDef>,
    model: &HierarchyModel,
    tag: &'static str,
    detail: impl Into<String>,
    point: (Option<Q>, Option<Q>, Option<u8>),
    metric: Metric,
    threshold: f64,
    runner: Runner,
) {
    let id = format!("{}/{}/{}", model.id().name(), tag, detail.into());
    defs.push(CheckDef {
        id,
        model: model.id(),
        tag,
        n: point.0,
        l: point.1,
        pair: point.2,
        metric,
        threshold,
        runner,
    });
}

fn spectrum_defs(defs: &mut Vec<CheckDef>) {
    // (model, channel, level count, gate, metric flavour, grid override)
    #[allow(clippy::type_complexity)]
    let rows: Vec<(ModelId, i64, usize, f64, Metric, Option<(f64, f64, usize)>)> = vec![
        (ModelId::Oscillator, 0, 3, GATE_SPECTRUM_REL, Metric::RelativeResidual, None),
        (ModelId::Oscillator, 1, 3, GATE_SPECTRUM_REL, Metric::RelativeResidual, None),
        (ModelId::Oscillator, 2, 3, GATE_SPECTRUM_REL, Metric::RelativeResidual, None),
        (ModelId::Oscillator, 3, 3, GATE_SPECTRUM_REL, Metric::RelativeResidual, None),
        (ModelId::Morse, 3, 2, GATE_SPECTRUM_ABS, Metric::AbsoluteError, None),
        (ModelId::Morse, 5, 3, GATE_SPECTRUM_ABS, Metric::AbsoluteError, None),
        (ModelId::Coulomb, 0, 3, GATE_SPECTRUM_COULOMB_L0, Metric::RelativeResidual, None),
        (ModelId::Coulomb, 1, 3, GATE_SPECTRUM_REL, Metric::RelativeResidual, None),
        // The n=4 tail needs a wider box than the default production grid to
        // meet the 1e-4 gate; see the l=2 domain note in the README.
        (ModelId::Coulomb, 2, 3, GATE_SPECTRUM_REL, Metric::RelativeResidual, Some((1e-5, 90.0, 12001))),
    ];
    for (mid, l, k, gate, metric, grid_override) in rows {
        let model = model_by_id(mid);
        let levels = model
            .spectrum_levels(qint(l), k)
            .expect("pinned spectrum rows are valid");
        for (j, &n) in levels.iter().enumerate() {
            let m = model.clone();
            let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
                let grid = match grid_override {
                    Some((a, b, c)) => build_grid(m.domain_kind(), a, b, c)?,
                    None => m.default_grid()?,
                };
                let (w, _) = ctx.oracle_channel(&m, qint(l), &grid)?;
                let e = m.energy(n, qint(l));
                let err = (w[j] - e).abs();
                Ok(Measured::Value(match metric {
                    Metric::AbsoluteError => err,
                    _ => err / e.abs(),
                }))
            });
            push(
                defs,
                &model,
                "spectrum_formula",
                format!("l{l}-n{}", qslug(n)),
                (Some(n), Some(qint(l)), None),
                metric,
                gate,
                runner,
            );
        }
    }
}

fn refined_defs(defs: &mut Vec<CheckDef>) {
    // (model, n, l, include the partner side). The (0,0) corners are
    // product-side only: their descended labels sit outside the lattice.
    let rows: Vec<(ModelId, Q, Q, bool)> = vec![
        (ModelId::Oscillator, qint(0), qint(0), false),
        (ModelId::Oscillator, qint(2), qint(0), true),
        (ModelId::Oscillator, qint(3), qint(1), true),
        (ModelId::Oscillator, qint(4), qint(2), true),
        (ModelId::Oscillator, qint(5), qint(3), true),
        (ModelId::Morse, qint(3), qint(3), true),
        (ModelId::Morse, qint(1), qint(3), true),
        (ModelId::Morse, qint(5), qint(5), true),
        (ModelId::Morse, qint(3), qint(5), true),
        (ModelId::Coulomb, qint(0), qint(0), false),
        (ModelId::Coulomb, qint(1), qint(1), true),
        (ModelId::Coulomb, qint(2), qint(1), true),
        (ModelId::Coulomb, qint(2), qint(2), true),
        (ModelId::Coulomb, qr(3, 2), qr(1, 2), true),
    ];
    for (mid, n, l, both) in rows {
        for i in [1u8, 2u8] {
            let sides: &[(&'static str, RefinedSide)] = if both {
                &[
                    ("refined_identity", RefinedSide::Product),
                    ("refined_both_sides", RefinedSide::Partner),
                ]
            } else {
                &[("refined_identity", RefinedSide::Product)]
            };
            for &(tag, side) in sides {
                let model = model_by_id(mid);
                let m = model.clone();
                let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
                    let grid = m.grid_with_count(ctx.dense())?;
                    let bumps = make_bumps(&grid, anchor_bumps(m.id()));
                    Ok(Measured::Value(measure_refined(
                        &m, i, n, l, &grid, &bumps, side,
                    )?))
                });
                push(
                    defs,
                    &model,
                    tag,
                    format!("n{}-l{}-p{i}", qslug(n), qslug(l)),
                    (Some(n), Some(l), Some(i)),
                    Metric::RelativeResidual,
                    residual_gate(mid),
                    runner,
                );
            }
        }
    }
}

fn intertwining_defs(defs: &mut Vec<CheckDef>) {
    let rows: Vec<(ModelId, i64, &'static str)> = vec![
        (ModelId::Coulomb, 0, "l0"),
        (ModelId::Coulomb, 3, "l3"),
        (ModelId::Oscillator, 1, "case-a-l1"),
        (ModelId::Oscillator, -1, "case-a-l-1"),
        (ModelId::Oscillator, 0, "case-a-l0"),
    ];
    for (mid, l, detail) in rows {
        let model = model_by_id(mid);
        let m = model.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let bumps = make_bumps(&grid, anchor_bumps(m.id()));
            Ok(Measured::Value(measure_intertwining(&m, l, &grid, &bumps)?))
        });
        push(
            defs,
            &model,
            "intertwining_conventional",
            detail,
            (None, Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
}

fn commutator_defs(defs: &mut Vec<CheckDef>) {
    // Unit commutators [A^i, B^i] = 1 at one anchor point per model.
    let units: Vec<(ModelId, Q, Q)> = vec![
        (ModelId::Oscillator, qint(3), qint(1)),
        (ModelId::Morse, qint(3), qint(3)),
        (ModelId::Coulomb, qint(1), qint(1)),
    ];
    for (mid, n, l) in units {
        for i in [1u8, 2u8] {
            let model = model_by_id(mid);
            let m = model.clone();
            let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
                let (grid, bumps) = commutator_stage(&m, ctx)?;
                Ok(Measured::Value(measure_commutator_unit(
                    &m, i, n, l, &grid, &bumps,
                )?))
            });
            push(
                defs,
                &model,
                "commutator_unit",
                format!("n{}-l{}-p{i}", qslug(n), qslug(l)),
                (Some(n), Some(l), Some(i)),
                Metric::RelativeResidual,
                residual_gate(mid),
                runner,
            );
        }
    }
    // Cross-pair commutators, expected to vanish identically.
    let crosses: Vec<(ModelId, Q, Q)> = vec![
        (ModelId::Oscillator, qint(3), qint(1)),
        (ModelId::Morse, qint(3), qint(3)),
        (ModelId::Coulomb, qint(2), qint(1)),
    ];
    for (mid, n, l) in crosses {
        for (kind, name) in [(CrossKind::A1A2, "a1-a2"), (CrossKind::A1B2, "a1-b2")] {
            let model = model_by_id(mid);
            let m = model.clone();
            let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
                let (grid, bumps) = commutator_stage(&m, ctx)?;
                Ok(Measured::Value(measure_commutator_cross(
                    &m, kind, n, l, &grid, &bumps,
                )?))
            });
            push(
                defs,
                &model,
                "commutator_cross",
                format!("{name}-n{}-l{}", qslug(n), qslug(l)),
                (Some(n), Some(l), None),
                Metric::RelativeResidual,
                residual_gate(mid),
                runner,
            );
        }
    }
    for model in suite_models() {
        let m = model.clone();
        let runner: Runner = Box::new(move |_: &SuiteCtx| {
            Ok(Measured::Value(measure_label_bookkeeping(&m)?))
        });
        push(
            defs,
            &model,
            "label_bookkeeping",
            "lattice",
            (None, None, None),
            Metric::AbsoluteError,
            0.0,
            runner,
        );
    }
}

/// Grid and bump set for a model's commutator checks.
fn commutator_stage(model: &HierarchyModel, ctx: &SuiteCtx) -> Result<(Grid, Vec<Wavefunction>)> {
    match model.id() {
        ModelId::Morse => {
            let grid = model.grid_with_count(ctx.morse_commutator_count())?;
            let bumps = make_bumps(&grid, &MORSE_COMMUTATOR_BUMPS);
            Ok((grid, bumps))
        }
        id => {
            let grid = model.grid_with_count(ctx.dense())?;
            let bumps = make_bumps(&grid, &anchor_bumps(id)[..2]);
            Ok((grid, bumps))
        }
    }
}

fn ladder_action_defs(defs: &mut Vec<CheckDef>) {
    let rows: Vec<(ModelId, u8, Q, Q)> = vec![
        (ModelId::Oscillator, 1, qint(0), qint(0)),
        (ModelId::Oscillator, 1, qint(3), qint(1)),
        (ModelId::Oscillator, 2, qint(3), qint(1)),
        (ModelId::Oscillator, 1, qint(4), qint(2)),
        (ModelId::Oscillator, 2, qint(4), qint(2)),
        (ModelId::Oscillator, 1, qint(5), qint(3)),
        (ModelId::Morse, 1, qint(3), qint(3)),
        (ModelId::Morse, 2, qint(3), qint(3)),
        (ModelId::Morse, 1, qint(5), qint(5)),
        (ModelId::Morse, 2, qint(3), qint(5)),
        (ModelId::Coulomb, 1, qint(0), qint(0)),
        (ModelId::Coulomb, 1, qint(1), qint(1)),
        (ModelId::Coulomb, 1, qint(2), qint(1)),
        (ModelId::Coulomb, 2, qint(2), qint(2)),
        (ModelId::Coulomb, 1, qint(2), qint(2)),
        (ModelId::Coulomb, 1, qr(3, 2), qr(1, 2)),
        (ModelId::Coulomb, 2, qr(3, 2), qr(3, 2)),
    ];
    for (mid, i, n, l) in rows {
        let model = model_by_id(mid);
        // The Coulomb ground step lands in the half-integer channel whose
        // oracle state carries the largest interpolation burden; it gets the
        // documented looser gate.
        let gate = if mid == ModelId::Coulomb && n == qint(0) && l == qint(0) {
            GATE_OVERLAP_HALF_GROUND
        } else {
            GATE_OVERLAP
        };
        let m = model.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            Ok(Measured::Value(measure_step_overlap(
                ctx, &m, i, n, l, &grid,
            )?))
        });
        push(
            defs,
            &model,
            "ladder_action",
            format!("a{i}-n{}-l{}", qslug(n), qslug(l)),
            (Some(n), Some(l), Some(i)),
            Metric::Overlap,
            gate,
            runner,
        );
    }
    // Morse A² on (1,1) steps to (0,2): representable but not normalizable,
    // so there is no oracle target to overlap against.
    let model = model_by_id(ModelId::Morse);
    let runner: Runner = Box::new(move |_: &SuiteCtx| {
        Ok(Measured::Skip(
            "target (0,2) is representable but not normalizable; no oracle state exists".into(),
        ))
    });
    push(
        defs,
        &model,
        "ladder_action",
        "a2-n1-l1",
        (Some(qint(1)), Some(qint(1)), Some(2)),
        Metric::Overlap,
        GATE_OVERLAP,
        runner,
    );
}

fn ladder_coefficient_defs(defs: &mut Vec<CheckDef>) {
    let coulomb = model_by_id(ModelId::Coulomb);
    for n in [1i64, 2i64] {
        let m = coulomb.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let measured = ladder_coefficient(&m, qint(n), qint(0), &grid)?;
            let pred = (m.factorization_q(qint(0))? - m.factorization_q(qint(n))?).sqrt();
            Ok(Measured::ValueWithNote(
                (measured - pred).abs() / pred,
                format!("measured |c| = {measured:.8}, predicted {pred:.8}"),
            ))
        });
        push(
            defs,
            &coulomb,
            "ladder_coefficient",
            format!("l0-n{n}"),
            (Some(qint(n)), Some(qint(0)), None),
            Metric::RelativeResidual,
            GATE_COEFFICIENT,
            runner,
        );
    }
    // n = ℓ: X⁻ is the channel annihilator, the measured coefficient must be
    // exactly the zero branch.
    {
        let m = coulomb.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            Ok(Measured::Absolute(
                ladder_coefficient(&m, qint(0), qint(0), &grid)?.abs(),
            ))
        });
        push(
            defs,
            &coulomb,
            "ladder_coefficient",
            "l0-n0-annihilated",
            (Some(qint(0)), Some(qint(0)), None),
            Metric::AbsoluteError,
            ABSOLUTE_RESIDUAL_THRESHOLD,
            runner,
        );
    }
    // Oscillator case (a): the x-hierarchy ladder at ℓ_x = −1 is `2A²` on
    // standard labels n_std = 2n_x − 1, with |c| = 2√n_x.
    let osc = model_by_id(ModelId::Oscillator);
    for (nx, nstd) in [(1i64, 1i64), (2i64, 3i64)] {
        let m = osc.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let src = ctx.built(&m, qint(nstd), qint(1), &grid)?;
            let tgt = ctx.built(&m, qint(nstd + 1), qint(0), &grid)?;
            let chain = m.chain_a(2, qint(nstd), qint(1))?.scaled(2.0);
            let mut out = apply(&chain, &src)?;
            guard_edges(&mut out.values, EDGE_GUARD);
            let proj = inner_product(&tgt, &out)?.abs();
            let pred = 2.0 * (nx as f64).sqrt();
            Ok(Measured::ValueWithNote(
                (proj - pred).abs() / pred,
                format!("measured |c| = {proj:.8}, predicted {pred:.8}"),
            ))
        });
        push(
            defs,
            &osc,
            "ladder_coefficient",
            format!("case-a-nx{nx}"),
            (Some(qint(nx)), Some(qint(-1)), None),
            Metric::RelativeResidual,
            GATE_COEFFICIENT,
            runner,
        );
    }
}

fn quadratic_defs(defs: &mut Vec<CheckDef>) {
    let morse = model_by_id(ModelId::Morse);
    let alpha = 1.0f64;
    // Morse displayed reductions, anchored at the move's lower channel ℓ as
    // used by the closed form: (B¹B²) consumes the built state at ℓ+2,
    // (A¹A²) consumes the one at ℓ.
    let morse_rows: Vec<(QuadraticKind, &'static str, i64, i64, bool)> = vec![
        (QuadraticKind::LowerL, "b1b2", 3, 3, true),
        (QuadraticKind::LowerL, "b1b2", 3, 5, true),
        (QuadraticKind::LowerL, "b1b2", 4, 4, true),
        (QuadraticKind::RaiseL, "a1a2", 3, 3, false),
        (QuadraticKind::RaiseL, "a1a2", 3, 5, false),
    ];
    for (kind, name, n, l, descending) in morse_rows {
        let m = morse.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let src_l = if descending { l + 2 } else { l };
            let (src, out) = quadratic_image(ctx, &m, kind, qint(n), qint(src_l), &grid)?;
            let disp = morse_display(alpha, &grid, &src, (l + 2) as f64, descending);
            let den = wnorm(&grid, &out.values).max(1e-30);
            Ok(Measured::Value(wdiff(&grid, &out.values, &disp) / den))
        });
        push(
            defs,
            &morse,
            "quadratic_display",
            format!("{name}-n{n}-l{l}"),
            (Some(qint(n)), Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
    // Morse identification with the conventional ladder: X⁺_{ℓ'} = −α(B¹B²)
    // at ℓ = 2ℓ'.
    {
        let m = morse.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let (src, out) = quadratic_image(ctx, &m, QuadraticKind::LowerL, qint(4), qint(6), &grid)?;
            let plus = m.conventional(qint(2))?.plus;
            let mut conv_out = apply(&plus, &src)?;
            guard_edges(&mut conv_out.values, EDGE_GUARD);
            let scaled: Vec<f64> = out.values.iter().map(|v| -alpha * v).collect();
            let den = wnorm(&grid, &conv_out.values).max(1e-30);
            Ok(Measured::Value(
                wdiff(&grid, &scaled, &conv_out.values) / den,
            ))
        });
        push(
            defs,
            &morse,
            "quadratic_conventional",
            "b1b2-vs-xplus-l4",
            (Some(qint(4)), Some(qint(4)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }

    let coulomb = model_by_id(ModelId::Coulomb);
    // Coulomb (B²A¹): displayed second-order form and the proportionality
    // (B²A¹) = −((2n+1)(2ℓ+1)/4)·X⁻ₗ. At (1,1) both sides annihilate the
    // source, so the denominator floors at the source scale instead of the
    // vanishing output.
    let b2a1_rows: Vec<(i64, i64, bool)> = vec![(2, 1, false), (3, 2, false), (1, 1, true)];
    for (n, l, at_annihilation) in b2a1_rows {
        let m = coulomb.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let (src, out) =
                quadratic_image(ctx, &m, QuadraticKind::RaiseL, qint(n), qint(l), &grid)?;
            let disp = coulomb_b2a1_display(&grid, &src, n as f64, l as f64);
            let den = if at_annihilation {
                wnorm(&grid, &disp).max(wnorm(&grid, &src.values))
            } else {
                wnorm(&grid, &out.values).max(1e-30)
            };
            Ok(Measured::Value(wdiff(&grid, &out.values, &disp) / den))
        });
        let detail = if at_annihilation {
            format!("b2a1-n{n}-l{l}-annihilation")
        } else {
            format!("b2a1-n{n}-l{l}")
        };
        push(
            defs,
            &coulomb,
            "quadratic_display",
            detail,
            (Some(qint(n)), Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );

        let m = coulomb.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let (src, out) =
                quadratic_image(ctx, &m, QuadraticKind::RaiseL, qint(n), qint(l), &grid)?;
            let minus = m.conventional(qint(l))?.minus;
            let mut xm = apply(&minus, &src)?;
            guard_edges(&mut xm.values, EDGE_GUARD);
            let scale = -((2 * n + 1) as f64) * ((2 * l + 1) as f64) / 4.0;
            let pred: Vec<f64> = xm.values.iter().map(|v| scale * v).collect();
            let den = if at_annihilation {
                wnorm(&grid, &pred).max(wnorm(&grid, &src.values))
            } else {
                wnorm(&grid, &out.values).max(1e-30)
            };
            Ok(Measured::Value(wdiff(&grid, &out.values, &pred) / den))
        });
        let detail = if at_annihilation {
            format!("b2a1-vs-xminus-n{n}-l{l}-annihilation")
        } else {
            format!("b2a1-vs-xminus-n{n}-l{l}")
        };
        push(
            defs,
            &coulomb,
            "quadratic_conventional",
            detail,
            (Some(qint(n)), Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
    // Coulomb (B¹A²) against X⁺_{ℓ−1}, fitted: reports the constant.
    for (n, l) in [(2i64, 1i64), (3i64, 2i64)] {
        let m = coulomb.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let (src, out) =
                quadratic_image(ctx, &m, QuadraticKind::LowerL, qint(n), qint(l), &grid)?;
            let plus = m.conventional(qint(l - 1))?.plus;
            let mut xp = apply(&plus, &src)?;
            guard_edges(&mut xp.values, EDGE_GUARD);
            let (c, resid) = fit_constant(&grid, &out.values, &xp.values);
            Ok(Measured::ValueWithNote(
                resid,
                format!("fitted constant c = {c:+.8}"),
            ))
        });
        push(
            defs,
            &coulomb,
            "quadratic_conventional",
            format!("b1a2-vs-xplus-n{n}-l{l}"),
            (Some(qint(n)), Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }

    // Oscillator composites, fitted against independently built states:
    // misfit residual and the fitted constant vs the closed-form |c|.
    let osc = model_by_id(ModelId::Oscillator);
    for (n, l) in [(2i64, 0i64), (3i64, 1i64)] {
        let combos: Vec<(&'static str, f64)> = vec![
            ("raise-n", 0.5 * (((n + l + 2) * (n - l + 2)) as f64).sqrt()),
            ("lower-n", 0.5 * (((n + l + 2) * (n - l + 2)) as f64).sqrt()),
            ("raise-l", 0.5 * (((n + l + 2) * (n - l)) as f64).sqrt()),
        ];
        for (name, pred) in combos {
            for coeff_check in [false, true] {
                let m = osc.clone();
                let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
                    let grid = m.grid_with_count(ctx.dense())?;
                    // Composites route through the (n+1, ℓ+1) corner so their
                    // fitted constants obey the two-boson product formulas.
                    let up1 = (qint(n + 1), qint(l + 1));
                    let (chain, src_lbl, tgt_lbl) = match name {
                        "raise-n" => (
                            m.chain_a(2, up1.0, up1.1)?.compose(&m.chain_a(1, qint(n), qint(l))?),
                            (qint(n), qint(l)),
                            (qint(n + 2), qint(l)),
                        ),
                        "lower-n" => (
                            m.chain_b(1, qint(n), qint(l))?.compose(&m.chain_b(2, up1.0, up1.1)?),
                            (qint(n + 2), qint(l)),
                            (qint(n), qint(l)),
                        ),
                        _ => (
                            m.chain_b(2, qint(n), qint(l + 2))?
                                .compose(&m.chain_a(1, qint(n), qint(l))?),
                            (qint(n), qint(l)),
                            (qint(n), qint(l + 2)),
                        ),
                    };
                    let src = ctx.built(&m, src_lbl.0, src_lbl.1, &grid)?;
                    let tgt = ctx.built(&m, tgt_lbl.0, tgt_lbl.1, &grid)?;
                    let mut out = apply(&chain, &src)?;
                    guard_edges(&mut out.values, EDGE_GUARD);
                    let (c, resid) = fit_constant(&grid, &out.values, &tgt.values);
                    if coeff_check {
                        Ok(Measured::ValueWithNote(
                            (c.abs() - pred).abs() / pred,
                            format!("fitted |c| = {:.8}, predicted {pred:.8}", c.abs()),
                        ))
                    } else {
                        Ok(Measured::ValueWithNote(
                            resid,
                            format!("fitted constant c = {c:+.8}"),
                        ))
                    }
                });
                let (suffix, metric, gate) = if coeff_check {
                    ("coeff", Metric::RelativeResidual, GATE_COEFFICIENT)
                } else {
                    ("resid", Metric::RelativeResidual, GATE_RESIDUAL)
                };
                push(
                    defs,
                    &osc,
                    "quadratic_conventional",
                    format!("{name}-{suffix}-n{n}-l{l}"),
                    (Some(qint(n)), Some(qint(l)), None),
                    metric,
                    gate,
                    runner,
                );
            }
        }
    }
    // Oscillator energy-preserving (A¹B²): a one-shot composite from the
    // built ψ₂⁰ must land on the oracle's ψ₂² up to normalization. Guards are
    // widened to 3 points: the composite differentiates twice, so two guard
    // zeros contaminate a 3-point band at each edge.
    {
        let m = osc.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let src = ctx.built(&m, qint(2), qint(0), &grid)?;
            let chain = m
                .chain_a(1, qint(1), qint(1))?
                .compose(&m.chain_b(2, qint(1), qint(1))?);
            let mut out = apply(&chain, &src)?;
            guard_edges(&mut out.values, EDGE_GUARD + 1);
            let (_e, tgt) = ctx.oracle_nearest(&m, qint(2), qint(2), &grid)?;
            Ok(Measured::Value(windowed_overlap(
                &grid,
                &out.values,
                &tgt.values,
            )))
        });
        push(
            defs,
            &osc,
            "quadratic_display",
            "a1b2-n2-l0",
            (Some(qint(2)), Some(qint(0)), None),
            Metric::Overlap,
            GATE_OVERLAP,
            runner,
        );
    }
}

fn annihilation_defs(defs: &mut Vec<CheckDef>) {
    let rows: Vec<(ModelId, Q)> = vec![
        (ModelId::Oscillator, qint(0)),
        (ModelId::Oscillator, qint(1)),
        (ModelId::Oscillator, qint(2)),
        (ModelId::Oscillator, qint(3)),
        (ModelId::Morse, qint(1)),
        (ModelId::Morse, qint(2)),
        (ModelId::Morse, qint(3)),
        (ModelId::Coulomb, qint(0)),
        (ModelId::Coulomb, qint(1)),
        (ModelId::Coulomb, qint(2)),
        (ModelId::Coulomb, qint(3)),
        (ModelId::Coulomb, qr(1, 2)),
    ];
    for (mid, l) in rows {
        let model = model_by_id(mid);
        let m = model.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            Ok(Measured::Value(measure_annihilation(&m, l, &grid, None)?))
        });
        push(
            defs,
            &model,
            "ground_annihilation",
            format!("l{}", qslug(l)),
            (Some(l), Some(l), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
    // Alternative convention: the case-(a) raising operator X⁺_{ℓ−1}
    // annihilates the x-hierarchy ground at channel ℓ.
    let osc = model_by_id(ModelId::Oscillator);
    for l in [0i64, -1i64] {
        let m = osc.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let plus = m.conventional(qint(l - 1))?.plus;
            Ok(Measured::Value(measure_annihilation(
                &m,
                qint(l),
                &grid,
                Some(plus),
            )?))
        });
        push(
            defs,
            &osc,
            "ground_annihilation",
            format!("case-a-l{l}"),
            (None, Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
}

fn conventional_factorization_defs(defs: &mut Vec<CheckDef>) {
    let osc = model_by_id(ModelId::Oscillator);
    // Case (a): X⁺ₗX⁻ₗ − q(ℓ+1) = H_x^ℓ where H_x^ℓ = H^ℓ − 2ℓ.
    for l in [-1i64, 0, 1] {
        let m = osc.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let bumps = make_bumps(&grid, &anchor_bumps(ModelId::Oscillator)[..2]);
            let pair = m.conventional(qint(l))?;
            let q = m.factorization_q(qint(l + 1))?;
            let mm = m.clone();
            let ham = move |f: &Wavefunction| -> Result<Vec<f64>> {
                let hf = mm.hamiltonian_apply(qint(l), f)?;
                Ok(hf
                    .values
                    .iter()
                    .zip(&f.values)
                    .map(|(h, fv)| h - 2.0 * l as f64 * fv)
                    .collect())
            };
            Ok(Measured::Value(measure_conventional_factorization(
                &pair.plus, &pair.minus, q, &ham, &grid, &bumps, false,
            )?))
        });
        push(
            defs,
            &osc,
            "conventional_factorization",
            format!("case-a-l{l}"),
            (None, Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
    // Case (b): Z⁺ₗZ⁻ₗ − q_z(ℓ) = H_z^ℓ = H^ℓ + 2ℓ.
    for l in [0i64, 1, 2] {
        let m = osc.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let bumps = make_bumps(&grid, &anchor_bumps(ModelId::Oscillator)[..2]);
            let pair = m.conventional_case_b(qint(l))?;
            let mm = m.clone();
            let ham = move |f: &Wavefunction| -> Result<Vec<f64>> {
                let hf = mm.hamiltonian_apply(qint(l), f)?;
                Ok(hf
                    .values
                    .iter()
                    .zip(&f.values)
                    .map(|(h, fv)| h + 2.0 * l as f64 * fv)
                    .collect())
            };
            Ok(Measured::Value(measure_conventional_factorization(
                &pair.plus, &pair.minus, pair.q, &ham, &grid, &bumps, false,
            )?))
        });
        push(
            defs,
            &osc,
            "conventional_factorization",
            format!("case-b-l{l}"),
            (None, Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
    // Morse at half-integer and integer ℓ' (channel ℓ = 2ℓ').
    let morse = model_by_id(ModelId::Morse);
    for lp in [qr(1, 2), qint(1), qr(3, 2)] {
        let m = morse.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let bumps = make_bumps(&grid, &MORSE_CONVENTIONAL_BUMPS);
            let pair = m.conventional(lp)?;
            let mm = m.clone();
            let ham = move |f: &Wavefunction| -> Result<Vec<f64>> {
                Ok(mm.hamiltonian_apply(lp * qint(2), f)?.values)
            };
            Ok(Measured::Value(measure_conventional_factorization(
                &pair.plus, &pair.minus, pair.q, &ham, &grid, &bumps, true,
            )?))
        });
        push(
            defs,
            &morse,
            "conventional_factorization",
            format!("lp{}", qslug(lp)),
            (None, Some(lp), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
    // Coulomb: q enters with the factorization sign `+1/(ℓ+1/2)²`.
    let coulomb = model_by_id(ModelId::Coulomb);
    for l in [0i64, 1] {
        let m = coulomb.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let bumps = make_bumps(&grid, &anchor_bumps(ModelId::Coulomb)[..2]);
            let pair = m.conventional(qint(l))?;
            let q = m.factorization_q(qint(l))?;
            let mm = m.clone();
            let ham = move |f: &Wavefunction| -> Result<Vec<f64>> {
                Ok(mm.hamiltonian_apply(qint(l), f)?.values)
            };
            Ok(Measured::Value(measure_conventional_factorization(
                &pair.plus, &pair.minus, q, &ham, &grid, &bumps, true,
            )?))
        });
        push(
            defs,
            &coulomb,
            "conventional_factorization",
            format!("l{l}"),
            (None, Some(qint(l)), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
}

fn dilation_defs(defs: &mut Vec<CheckDef>) {
    let coulomb = model_by_id(ModelId::Coulomb);
    let stage = || -> Result<(Grid, Wavefunction)> {
        let grid = build_grid(DomainKind::HalfLine, 1e-5, 60.0, 8001)?;
        let f = gauss_half(&grid, 10.0, 2.0);
        Ok((grid, f))
    };
    {
        let runner: Runner = Box::new(move |_: &SuiteCtx| {
            let (grid, f) = stage()?;
            let round = dilate(&dilate(&f, 1.25)?, 0.8)?;
            Ok(Measured::Value(
                wdiff(&grid, &round.values, &f.values) / wnorm(&grid, &f.values),
            ))
        });
        push(
            defs,
            &coulomb,
            "dilation_law",
            "roundtrip",
            (None, None, None),
            Metric::RelativeResidual,
            GATE_DILATION,
            runner,
        );
    }
    {
        let runner: Runner = Box::new(move |_: &SuiteCtx| {
            let (grid, f) = stage()?;
            let mu = 4.0 / 3.0;
            let out = dilate(&f, mu)?;
            let exact: Vec<f64> = grid
                .x()
                .iter()
                .map(|&x| (mu * x).sqrt() * (-((mu * x - 10.0) * (mu * x - 10.0)) / 8.0).exp())
                .collect();
            Ok(Measured::Value(
                wdiff(&grid, &out.values, &exact) / wnorm(&grid, &exact),
            ))
        });
        push(
            defs,
            &coulomb,
            "dilation_law",
            "exact-squeeze",
            (None, None, None),
            Metric::RelativeResidual,
            GATE_DILATION,
            runner,
        );
    }
    {
        let m = coulomb.clone();
        let runner: Runner = Box::new(move |_: &SuiteCtx| {
            let (grid, _) = stage()?;
            let psi = Wavefunction::new(grid.clone(), m.ground_values(qint(2), &grid)?)?;
            let out = dilate(&psi, 1.2)?;
            // The channel-2 bound shape x^{5/2} e^{−x/(5/2)} evaluated at the
            // dilated coordinate.
            let shape: Vec<f64> = grid
                .x()
                .iter()
                .map(|&x| (1.2 * x).powf(2.5) * (-(1.2 * x) / 2.5).exp())
                .collect();
            Ok(Measured::Value(
                wdiff(&grid, &out.values, &shape) / wnorm(&grid, &shape),
            ))
        });
        push(
            defs,
            &coulomb,
            "dilation_law",
            "decaying-shape",
            (None, Some(qint(2)), None),
            Metric::RelativeResidual,
            GATE_DILATION,
            runner,
        );
    }
}

fn build_residual_defs(defs: &mut Vec<CheckDef>) {
    let rows: Vec<(ModelId, Q, Q)> = vec![
        (ModelId::Oscillator, qint(2), qint(0)),
        (ModelId::Oscillator, qint(3), qint(1)),
        (ModelId::Oscillator, qint(5), qint(3)),
        (ModelId::Morse, qint(3), qint(3)),
        (ModelId::Morse, qint(1), qint(3)),
        (ModelId::Morse, qint(5), qint(5)),
        (ModelId::Morse, qint(3), qint(5)),
        (ModelId::Coulomb, qint(1), qint(1)),
        (ModelId::Coulomb, qint(2), qint(1)),
        (ModelId::Coulomb, qint(2), qint(2)),
        (ModelId::Coulomb, qr(3, 2), qr(1, 2)),
    ];
    for (mid, n, l) in rows {
        let model = model_by_id(mid);
        let m = model.clone();
        let runner: Runner = Box::new(move |ctx: &SuiteCtx| {
            let grid = m.grid_with_count(ctx.dense())?;
            let psi = ctx.built(&m, n, l, &grid)?;
            Ok(Measured::Value(eigen_residual(&m, n, l, &psi)?))
        });
        push(
            defs,
            &model,
            "build_residual",
            format!("n{}-l{}", qslug(n), qslug(l)),
            (Some(n), Some(l), None),
            Metric::RelativeResidual,
            GATE_RESIDUAL,
            runner,
        );
    }
}

/// The full check inventory at default gates, before filtering.
fn full_inventory() -> Vec<CheckDef> {
    let mut defs = Vec::with_capacity(200);
    spectrum_defs(&mut defs);
    refined_defs(&mut defs);
    intertwining_defs(&mut defs);
    commutator_defs(&mut defs);
    ladder_action_defs(&mut defs);
    ladder_coefficient_defs(&mut defs);
    quadratic_defs(&mut defs);
    annihilation_defs(&mut defs);
    conventional_factorization_defs(&mut defs);
    dilation_defs(&mut defs);
    build_residual_defs(&mut defs);
    defs
}

/// Does a filter string select this check? Filters match the identity tag or
/// the id by prefix; a trailing plural `s` is tolerated.
fn filter_matches(filter: &str, def: &CheckDef) -> bool {
    let f = filter.trim();
    let singular = f.strip_suffix('s').unwrap_or(f);
    def.tag.starts_with(f)
        || def.tag.starts_with(singular)
        || def.id.starts_with(f)
        || def.id.starts_with(singular)
}

// ---------------------------------------------------------------------------
// Execution.
// ---------------------------------------------------------------------------

fn execute(def: &CheckDef, ctx: &SuiteCtx) -> CheckResult {
    let mut result = CheckResult {
        id: def.id.clone(),
        model: def.model.name().to_string(),
        n: def.n.map(fmt_q),
        l: def.l.map(fmt_q),
        pair: def.pair,
        metric: def.metric,
        value: None,
        threshold: def.threshold,
        passed: false,
        status: CheckStatus::Errored,
        note: None,
    };
    match (def.runner)(ctx) {
        Ok(Measured::Skip(reason)) => {
            result.status = CheckStatus::Skipped;
            result.note = Some(reason);
        }
        Ok(outcome) => {
            let (value, note) = match outcome {
                Measured::Value(v) => (v, None),
                Measured::ValueWithNote(v, note) => (v, Some(note)),
                Measured::Absolute(v) => {
                    result.metric = Metric::AbsoluteError;
                    result.threshold = ABSOLUTE_RESIDUAL_THRESHOLD;
                    (v, None)
                }
                Measured::Skip(_) => unreachable!("skip handled above"),
            };
            if value.is_finite() {
                result.value = Some(value);
                result.passed = result.metric.passes(value, result.threshold);
                result.status = if result.passed {
                    CheckStatus::Passed
                } else {
                    CheckStatus::Failed
                };
                result.note = note;
            } else {
                result.note = Some("measurement was not finite".into());
            }
        }
        Err(e) => {
            result.note = Some(e.to_string());
        }
    }
    result
}

fn grid_description(quick: bool) -> BTreeMap<String, String> {
    let mut grid = BTreeMap::new();
    for model in suite_models() {
        let (kind, a, b, c) = model.default_box();
        grid.insert(
            format!("{}_box", model.id().name()),
            format!("{kind} [{a}, {b}] x {c}"),
        );
    }
    let dense = if quick { 4001 } else { 16001 };
    let morse_comm = if quick { 5001 } else { 20001 };
    grid.insert("identity_grid_count".into(), dense.to_string());
    grid.insert("morse_commutator_count".into(), morse_comm.to_string());
    grid.insert(
        "coulomb_l2_spectrum_box".into(),
        "half_line [0.00001, 90] x 12001".into(),
    );
    grid
}

/// Run the suite with the library's preferred execution mode.
///
/// # Errors
/// Rejects configs whose threshold keys match no tag or check id, and
/// reports a coverage gap if an unfiltered run would miss a registered
/// identity. Individual check failures never error the suite; they are
/// recorded in the report.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    run_suite_with_mode(config, ExecMode::Parallel)
}

/// [`run_suite`] with an explicit execution mode (the bench suite compares
/// sequential against parallel on identical configs).
///
/// # Errors
/// See [`run_suite`].
pub fn run_suite_with_mode(config: &SuiteConfig, mode: ExecMode) -> Result<VerificationReport> {
    let all = full_inventory();
    for key in config.thresholds.keys() {
        let known = IDENTITY_REGISTRY.iter().any(|(tag, _)| tag == key)
            || all.iter().any(|d| &d.id == key);
        if !known {
            return Err(LadderError::Config(format!(
                "threshold key {key:?} matches no identity tag or check id"
            )));
        }
    }
    let unfiltered = config.checks.is_empty()
        && ModelId::ALL.iter().all(|m| config.models.contains(m));
    if unfiltered {
        for (tag, statement) in IDENTITY_REGISTRY {
            if !all.iter().any(|d| d.tag == tag) {
                return Err(LadderError::Config(format!(
                    "identity coverage gap: no check exercises {tag:?} ({statement})"
                )));
            }
        }
    }
    let mut defs: Vec<CheckDef> = all
        .into_iter()
        .filter(|d| config.models.contains(&d.model))
        .filter(|d| {
            config.checks.is_empty() || config.checks.iter().any(|f| filter_matches(f, d))
        })
        .collect();
    for def in &mut defs {
        if let Some(&t) = config
            .thresholds
            .get(&def.id)
            .or_else(|| config.thresholds.get(def.tag))
        {
            def.threshold = t;
        }
    }
    let ctx = SuiteCtx::new(config.quick);
    let mut checks = map_indexed(mode, &defs, |_, def| execute(def, &ctx));
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let mut summary = Summary {
        total: checks.len(),
        ..Summary::default()
    };
    for c in &checks {
        match c.status {
            CheckStatus::Passed => summary.passed += 1,
            CheckStatus::Failed => summary.failed += 1,
            CheckStatus::Errored => summary.errored += 1,
            CheckStatus::Skipped => summary.skipped += 1,
        }
    }
    Ok(VerificationReport {
        suite: config.suite.clone(),
        timestamp: config.timestamp.clone(),
        grid: grid_description(config.quick),
        checks,
        summary,
    })
}

// ---------------------------------------------------------------------------
// One-shot check entry points (the library API mirrored by the suite).
// ---------------------------------------------------------------------------

fn one_shot(
    model: &HierarchyModel,
    tag: &'static str,
    detail: String,
    point: (Option<Q>, Option<Q>, Option<u8>),
    metric: Metric,
    threshold: f64,
    outcome: Result<Measured>,
) -> CheckResult {
    let def = CheckDef {
        id: format!("{}/{}/{}", model.id().name(), tag, detail),
        model: model.id(),
        tag,
        n: point.0,
        l: point.1,
        pair: point.2,
        metric,
        threshold,
        runner: Box::new(move |_| match &outcome {
            Ok(Measured::Value(v)) => Ok(Measured::Value(*v)),
            Ok(Measured::Absolute(v)) => Ok(Measured::Absolute(*v)),
            Ok(Measured::ValueWithNote(v, s)) => Ok(Measured::ValueWithNote(*v, s.clone())),
            Ok(Measured::Skip(s)) => Ok(Measured::Skip(s.clone())),
            Err(e) => Err(LadderError::Config(e.to_string())),
        }),
    };
    execute(&def, &SuiteCtx::new(false))
}

/// Measure the refined factorization identity `h(H−E) = BA − φ` for pair `i`
/// at `(n, ℓ)` on `grid`, over three Gaussian test functions.
///
/// # Errors
/// Invalid pair/labels, or a degenerate test function (vanishing window
/// norm) on a pathological grid.
pub fn check_refined_identity(
    model: &HierarchyModel,
    i: u8,
    n: Q,
    l: Q,
    grid: &Grid,
) -> Result<CheckResult> {
    let bumps = bumps_for(model, grid, 3);
    for b in &bumps {
        if wnorm(grid, &b.values) <= RESIDUAL_DENOMINATOR_FLOOR {
            return Err(LadderError::Domain(
                "degenerate test function: window norm is zero".into(),
            ));
        }
    }
    let v = measure_refined(model, i, n, l, grid, &bumps, RefinedSide::Product);
    Ok(one_shot(
        model,
        "refined_identity",
        format!("n{}-l{}-p{i}", qslug(n), qslug(l)),
        (Some(n), Some(l), Some(i)),
        Metric::RelativeResidual,
        residual_gate(model.id()),
        v.map(Measured::Value),
    ))
}

/// Measure the conventional intertwining `H^ℓ X⁺ = X⁺ H^{ℓ+1}` at channel ℓ
/// (oscillator: the case-(a) shifted hierarchy).
///
/// # Errors
/// Morse has no pinned conventional intertwining statement here and is
/// rejected; invalid channels propagate from the operator builders.
pub fn check_intertwining(model: &HierarchyModel, l: i64, grid: &Grid) -> Result<CheckResult> {
    if matches!(model, HierarchyModel::Morse { .. }) {
        return Err(LadderError::Domain(
            "no conventional intertwining check is defined for this hierarchy".into(),
        ));
    }
    let bumps = bumps_for(model, grid, 3);
    let v = measure_intertwining(model, l, grid, &bumps);
    Ok(one_shot(
        model,
        "intertwining_conventional",
        format!("l{l}"),
        (None, Some(qint(l)), None),
        Metric::RelativeResidual,
        GATE_RESIDUAL,
        v.map(Measured::Value),
    ))
}

/// Measure the model's commutator table at its anchor lattice point: both
/// unit commutators, the two vanishing cross commutators, and the exact
/// label bookkeeping.
///
/// # Errors
/// Propagates operator construction failures.
pub fn check_commutator_table(model: &HierarchyModel, grid: &Grid) -> Result<Vec<CheckResult>> {
    let (unit_n, unit_l) = match model.id() {
        ModelId::Oscillator => (qint(3), qint(1)),
        ModelId::Morse => (qint(3), qint(3)),
        ModelId::Coulomb => (qint(1), qint(1)),
    };
    let (cross_n, cross_l) = match model.id() {
        ModelId::Coulomb => (qint(2), qint(1)),
        _ => (unit_n, unit_l),
    };
    let bumps = match model.id() {
        ModelId::Morse => make_bumps(grid, &MORSE_COMMUTATOR_BUMPS),
        id => {
            let (kind, x_min, x_max, _) = model.default_box();
            if grid.kind == kind && grid.x_min == x_min && grid.x_max == x_max {
                make_bumps(grid, &anchor_bumps(id)[..2])
            } else {
                default_bumps(grid, 2)
            }
        }
    };
    let mut out = Vec::with_capacity(5);
    for i in [1u8, 2u8] {
        let v = measure_commutator_unit(model, i, unit_n, unit_l, grid, &bumps);
        out.push(one_shot(
            model,
            "commutator_unit",
            format!("n{}-l{}-p{i}", qslug(unit_n), qslug(unit_l)),
            (Some(unit_n), Some(unit_l), Some(i)),
            Metric::RelativeResidual,
            residual_gate(model.id()),
            v.map(Measured::Value),
        ));
    }
    for (kind, name) in [(CrossKind::A1A2, "a1-a2"), (CrossKind::A1B2, "a1-b2")] {
        let v = measure_commutator_cross(model, kind, cross_n, cross_l, grid, &bumps);
        out.push(one_shot(
            model,
            "commutator_cross",
            format!("{name}-n{}-l{}", qslug(cross_n), qslug(cross_l)),
            (Some(cross_n), Some(cross_l), None),
            Metric::RelativeResidual,
            residual_gate(model.id()),
            v.map(Measured::Value),
        ));
    }
    let v = measure_label_bookkeeping(model);
    out.push(one_shot(
        model,
        "label_bookkeeping",
        "lattice".into(),
        (None, None, None),
        Metric::AbsoluteError,
        0.0,
        v.map(Measured::Value),
    ));
    Ok(out)
}

/// Measure one ladder step: build `(n, ℓ)`, apply `A^i`, normalize, and
/// overlap against the oracle eigenfunction at the stepped label. Steps onto
/// a representable but non-normalizable label are reported as skipped.
///
/// # Errors
/// Unphysical sources and annihilated images are hard errors.
pub fn check_ladder_overlap(
    model: &HierarchyModel,
    i: u8,
    n: Q,
    l: Q,
    grid: &Grid,
) -> Result<CheckResult> {
    let tgt = model.step(i, QuantumNumbers::new(n, l))?;
    // Half-step Coulomb targets are normalizable and have oracle states;
    // only the representable-but-non-normalizable labels (the Morse n = 0
    // line) are skipped.
    let outcome = if !model.is_physical(tgt) && !model.is_half_step(tgt) && model.is_representable(tgt)
    {
        Ok(Measured::Skip(format!(
            "target (n={}, l={}) is representable but not normalizable; no oracle state exists",
            fmt_q(tgt.n),
            fmt_q(tgt.l)
        )))
    } else {
        let ctx = SuiteCtx::new(false);
        measure_step_overlap(&ctx, model, i, n, l, grid).map(Measured::Value)
    };
    let gate = if model.id() == ModelId::Coulomb && crate::qn::qzero(n) && crate::qn::qzero(l) {
        GATE_OVERLAP_HALF_GROUND
    } else {
        GATE_OVERLAP
    };
    Ok(one_shot(
        model,
        "ladder_action",
        format!("a{i}-n{}-l{}", qslug(n), qslug(l)),
        (Some(n), Some(l), Some(i)),
        Metric::Overlap,
        gate,
        outcome,
    ))
}

/// Measure the model's pinned quadratic reductions on `grid`.
///
/// # Errors
/// Propagates build/apply failures.
pub fn check_quadratic_reduction(
    model: &HierarchyModel,
    grid: &Grid,
) -> Result<Vec<CheckResult>> {
    let ctx = SuiteCtx::new(false);
    let mut out = Vec::new();
    match model {
        HierarchyModel::Morse { alpha } => {
            let (src, img) =
                quadratic_image(&ctx, model, QuadraticKind::LowerL, qint(4), qint(6), grid)?;
            let disp = morse_display(*alpha, grid, &src, 6.0, true);
            let den = wnorm(grid, &img.values).max(1e-30);
            out.push(one_shot(
                model,
                "quadratic_display",
                "b1b2-n4-l4".into(),
                (Some(qint(4)), Some(qint(4)), None),
                Metric::RelativeResidual,
                GATE_RESIDUAL,
                Ok(Measured::Value(wdiff(grid, &img.values, &disp) / den)),
            ));
            let plus = model.conventional(qint(2))?.plus;
            let mut conv_out = apply(&plus, &src)?;
            guard_edges(&mut conv_out.values, EDGE_GUARD);
            let scaled: Vec<f64> = img.values.iter().map(|v| -alpha * v).collect();
            let den = wnorm(grid, &conv_out.values).max(1e-30);
            out.push(one_shot(
                model,
                "quadratic_conventional",
                "b1b2-vs-xplus-l4".into(),
                (Some(qint(4)), Some(qint(4)), None),
                Metric::RelativeResidual,
                GATE_RESIDUAL,
                Ok(Measured::Value(
                    wdiff(grid, &scaled, &conv_out.values) / den,
                )),
            ));
        }
        HierarchyModel::RadialCoulomb => {
            let (n, l) = (2i64, 1i64);
            let (src, img) =
                quadratic_image(&ctx, model, QuadraticKind::RaiseL, qint(n), qint(l), grid)?;
            let disp = coulomb_b2a1_display(grid, &src, n as f64, l as f64);
            let den = wnorm(grid, &img.values).max(1e-30);
            out.push(one_shot(
                model,
                "quadratic_display",
                format!("b2a1-n{n}-l{l}"),
                (Some(qint(n)), Some(qint(l)), None),
                Metric::RelativeResidual,
                GATE_RESIDUAL,
                Ok(Measured::Value(wdiff(grid, &img.values, &disp) / den)),
            ));
            let minus = model.conventional(qint(l))?.minus;
            let mut xm = apply(&minus, &src)?;
            guard_edges(&mut xm.values, EDGE_GUARD);
            let scale = -((2 * n + 1) as f64) * ((2 * l + 1) as f64) / 4.0;
            let pred: Vec<f64> = xm.values.iter().map(|v| scale * v).collect();
            out.push(one_shot(
                model,
                "quadratic_conventional",
                format!("b2a1-vs-xminus-n{n}-l{l}"),
                (Some(qint(n)), Some(qint(l)), None),
                Metric::RelativeResidual,
                GATE_RESIDUAL,
                Ok(Measured::Value(wdiff(grid, &img.values, &pred) / den)),
            ));
            let (src, img) =
                quadratic_image(&ctx, model, QuadraticKind::LowerL, qint(n), qint(l), grid)?;
            let plus = model.conventional(qint(l - 1))?.plus;
            let mut xp = apply(&plus, &src)?;
            guard_edges(&mut xp.values, EDGE_GUARD);
            let (c, resid) = fit_constant(grid, &img.values, &xp.values);
            out.push(one_shot(
                model,
                "quadratic_conventional",
                format!("b1a2-vs-xplus-n{n}-l{l}"),
                (Some(qint(n)), Some(qint(l)), None),
                Metric::RelativeResidual,
                GATE_RESIDUAL,
                Ok(Measured::ValueWithNote(
                    resid,
                    format!("fitted constant c = {c:+.8}"),
                )),
            ));
        }
        HierarchyModel::RadialOscillator => {
            let src = ctx.built(model, qint(2), qint(0), grid)?;
            let chain = model
                .chain_a(1, qint(1), qint(1))?
                .compose(&model.chain_b(2, qint(1), qint(1))?);
            let mut img = apply(&chain, &src)?;
            guard_edges(&mut img.values, EDGE_GUARD + 1);
            let (_e, tgt) = ctx.oracle_nearest(model, qint(2), qint(2), grid)?;
            out.push(one_shot(
                model,
                "quadratic_display",
                "a1b2-n2-l0".into(),
                (Some(qint(2)), Some(qint(0)), None),
                Metric::Overlap,
                GATE_OVERLAP,
                Ok(Measured::Value(windowed_overlap(
                    grid,
                    &img.values,
                    &tgt.values,
                ))),
            ));
        }
    }
    Ok(out)
}

/// Compare the `k` lowest oracle eigenvalues of channel ℓ with the family
/// energy formula, one result per level.
///
/// # Errors
/// Rejects `k` beyond the channel's bound-state count (Morse) and invalid
/// channels.
pub fn check_spectrum(
    model: &HierarchyModel,
    l: Q,
    k: usize,
    grid: &Grid,
) -> Result<Vec<CheckResult>> {
    let levels = model.spectrum_levels(l, k)?;
    let w = oracle_eigenvalues(model, l, grid, k)?;
    let (metric, gate) = match model.id() {
        ModelId::Morse => (Metric::AbsoluteError, GATE_SPECTRUM_ABS),
        ModelId::Coulomb if crate::qn::qzero(l) => {
            (Metric::RelativeResidual, GATE_SPECTRUM_COULOMB_L0)
        }
        _ => (Metric::RelativeResidual, GATE_SPECTRUM_REL),
    };
    Ok(levels
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let e = model.energy(n, l);
            let err = (w[j] - e).abs();
            let value = match metric {
                Metric::AbsoluteError => err,
                _ => err / e.abs(),
            };
            one_shot(
                model,
                "spectrum_formula",
                format!("l{}-n{}", qslug(l), qslug(n)),
                (Some(n), Some(l), None),
                metric,
                gate,
                Ok(Measured::Value(value)),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::trapz;

    fn osc() -> HierarchyModel {
        HierarchyModel::oscillator()
    }

    fn coulomb() -> HierarchyModel {
        HierarchyModel::coulomb()
    }

    fn morse() -> HierarchyModel {
        HierarchyModel::morse(1.0).unwrap()
    }

    #[test]
    fn default_bumps_follow_the_recipe() {
        let g = build_grid(DomainKind::HalfLine, 1e-3, 20.0, 301).unwrap();
        let bumps = default_bumps(&g, 3);
        assert_eq!(bumps.len(), 3);
        // σ ≥ 10 spacings by construction; the bump must not be degenerate
        // and must vanish toward the half-line origin (√x factor).
        for b in &bumps {
            assert!(wnorm(&g, &b.values) > 1.0);
            assert!(b.values[0].abs() < 1e-2);
        }
    }

    #[test]
    fn metric_orientation_is_per_kind() {
        assert!(Metric::Overlap.passes(0.99995, 0.9999));
        assert!(!Metric::Overlap.passes(0.9, 0.9999));
        assert!(Metric::RelativeResidual.passes(5e-6, 1e-5));
        assert!(!Metric::RelativeResidual.passes(2e-5, 1e-5));
        assert!(Metric::AbsoluteError.passes(0.0, 0.0));
        assert!(!Metric::AbsoluteError.passes(1e-12, 0.0));
    }

    #[test]
    fn refined_pairs_are_skew_adjoint_partners() {
        // ⟨A¹f, g⟩ = −⟨f, B¹g⟩ on interior-supported test functions: the B
        // chain is the negative formal adjoint of the A chain.
        let m = osc();
        let g = m.grid_with_count(4001).unwrap();
        let f1 = gauss_half(&g, 3.0, 0.7);
        let f2 = gauss_half(&g, 5.0, 1.0);
        for l in [0i64, 1, 2] {
            let af = apply(&m.chain_a(1, qint(2), qint(l)).unwrap(), &f1).unwrap();
            let bg = apply(&m.chain_b(1, qint(2), qint(l)).unwrap(), &f2).unwrap();
            let lhs = inner_product(&af, &f2).unwrap();
            let rhs = -inner_product(&f1, &bg).unwrap();
            let den = (inner_product(&f1, &f1).unwrap() * inner_product(&f2, &f2).unwrap()).sqrt();
            assert!(
                ((lhs - rhs) / den).abs() <= 1e-14,
                "adjoint defect {} at l={l}",
                ((lhs - rhs) / den).abs()
            );
        }
    }

    #[test]
    fn refined_identity_spot_values() {
        let m = osc();
        let g = m.grid_with_count(16001).unwrap();
        let r = check_refined_identity(&m, 1, qint(2), qint(0), &g).unwrap();
        assert_eq!(r.status, CheckStatus::Passed);
        assert!(r.value.unwrap() <= 1e-6, "osc residual {:?}", r.value);

        let c = coulomb();
        let g = c.grid_with_count(16001).unwrap();
        let r = check_refined_identity(&c, 1, qint(0), qint(0), &g).unwrap();
        assert!(
            r.value.unwrap() <= 6e-7,
            "coulomb corner residual {:?} (dilations must fuse)",
            r.value
        );

        let mo = morse();
        let g = mo.grid_with_count(16001).unwrap();
        let r = check_refined_identity(&mo, 2, qint(3), qint(3), &g).unwrap();
        assert!(r.value.unwrap() <= 7e-6, "morse residual {:?}", r.value);
    }

    #[test]
    fn partner_side_matches_at_descended_labels() {
        let m = osc();
        let g = m.grid_with_count(16001).unwrap();
        let bumps = make_bumps(&g, anchor_bumps(ModelId::Oscillator));
        let v = measure_refined(&m, 2, qint(3), qint(1), &g, &bumps, RefinedSide::Partner).unwrap();
        assert!(v <= 1e-6, "partner-side residual {v}");
    }

    #[test]
    fn commutator_table_spot_values() {
        let c = coulomb();
        let g = c.grid_with_count(16001).unwrap();
        let rows = check_commutator_table(&c, &g).unwrap();
        assert_eq!(rows.len(), 5);
        for r in &rows {
            assert_eq!(r.status, CheckStatus::Passed, "failed row {}", r.id);
        }
        let unit1 = rows.iter().find(|r| r.id.contains("p1")).unwrap();
        assert!(unit1.value.unwrap() <= 1.5e-5);
        let labels = rows.iter().find(|r| r.id.contains("label")).unwrap();
        assert_eq!(labels.value.unwrap(), 0.0);
    }

    #[test]
    fn label_bookkeeping_is_exact_for_all_models() {
        for m in suite_models() {
            assert_eq!(measure_label_bookkeeping(&m).unwrap(), 0.0, "{}", m.id());
        }
    }

    #[test]
    fn spectrum_checks_per_level() {
        let m = osc();
        let rows = check_spectrum(&m, qint(0), 3, &m.default_grid().unwrap()).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert!(r.passed, "{} value {:?}", r.id, r.value);
            assert!(r.value.unwrap() <= 1e-5);
        }
        // Morse has two bound levels at ℓ=3; asking for three is an error.
        let mo = morse();
        assert!(check_spectrum(&mo, qint(3), 3, &mo.default_grid().unwrap()).is_err());
        // The wide-box ℓ=2 Coulomb channel meets the tight relative gate.
        let c = coulomb();
        let wide = build_grid(DomainKind::HalfLine, 1e-5, 90.0, 12001).unwrap();
        let rows = check_spectrum(&c, qint(2), 3, &wide).unwrap();
        for r in &rows {
            assert!(r.value.unwrap() <= 2e-6, "{} value {:?}", r.id, r.value);
        }
    }

    #[test]
    fn ladder_overlap_ground_step_and_skip() {
        let m = osc();
        let g = m.grid_with_count(8001).unwrap();
        let r = check_ladder_overlap(&m, 1, qint(0), qint(0), &g).unwrap();
        assert_eq!(r.status, CheckStatus::Passed);
        assert!(r.value.unwrap() >= 0.99995);

        let mo = morse();
        let g = mo.grid_with_count(8001).unwrap();
        let r = check_ladder_overlap(&mo, 2, qint(1), qint(1), &g).unwrap();
        assert_eq!(r.status, CheckStatus::Skipped);
        assert!(r.value.is_none());
        assert!(r.note.unwrap().contains("not normalizable"));
    }

    #[test]
    fn quadratic_reduction_rows_pass_on_dense_grids() {
        let c = coulomb();
        let g = c.grid_with_count(16001).unwrap();
        let rows = check_quadratic_reduction(&c, &g).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(r.status, CheckStatus::Passed, "{} value {:?}", r.id, r.value);
        }
        let fit = rows.iter().find(|r| r.id.contains("b1a2")).unwrap();
        let note = fit.note.as_deref().unwrap();
        assert!(note.contains("fitted constant"), "note: {note}");
        // The fitted proportionality constant at (2,1) is −5/4.
        assert!(note.contains("-1.25"), "note: {note}");
    }

    #[test]
    fn windowed_overlap_ignores_guarded_edges() {
        let g = build_grid(DomainKind::HalfLine, 1e-4, 12.0, 2001).unwrap();
        let u = gauss_half(&g, 5.0, 1.0);
        let mut v = u.clone();
        // Corrupt the guard band only: the windowed overlap must stay 1.
        v.values[0] = 7.0;
        v.values[1] = -3.0;
        let ov = windowed_overlap(&g, &u.values, &v.values);
        assert!((ov - 1.0).abs() <= 1e-12, "overlap {ov}");
    }

    #[test]
    fn fit_constant_recovers_exact_scalings() {
        let g = build_grid(DomainKind::HalfLine, 1e-4, 12.0, 2001).unwrap();
        let f = gauss_half(&g, 5.0, 1.0);
        let scaled: Vec<f64> = f.values.iter().map(|v| -2.5 * v).collect();
        let (c, resid) = fit_constant(&g, &scaled, &f.values);
        assert!((c + 2.5).abs() <= 1e-12);
        assert!(resid <= 1e-12);
    }

    #[test]
    fn normalization_helpers_agree_with_quadrature() {
        let g = build_grid(DomainKind::HalfLine, 1e-4, 12.0, 2001).unwrap();
        let f = gauss_half(&g, 5.0, 1.0);
        let sq: Vec<f64> = f.values.iter().map(|v| v * v).collect();
        assert!(trapz(&g, &sq) > 0.0);
        assert!(raw_norm(&f.values) > 0.0);
        assert!(
            (raw_norm(&f.values) - raw_norm_iter(f.values.iter().copied())).abs() <= 1e-30
        );
    }

    // ------------------------------------------------------------------
    // Suite-level behaviour.
    // ------------------------------------------------------------------

    #[test]
    fn full_suite_passes_and_is_deterministic() {
        let config = SuiteConfig::default();
        let report = run_suite(&config).unwrap();
        assert!(
            report.summary.total >= 60,
            "only {} checks",
            report.summary.total
        );
        assert_eq!(report.summary.failed, 0, "failures: {:?}", failures(&report));
        assert_eq!(report.summary.errored, 0, "errors: {:?}", failures(&report));
        assert_eq!(report.summary.skipped, 1);
        assert_eq!(
            report.summary.passed + report.summary.skipped,
            report.summary.total
        );
        for (tag, _) in IDENTITY_REGISTRY {
            assert!(
                report.checks.iter().any(|c| c.id.contains(&format!("/{tag}/"))),
                "no check ran for {tag}"
            );
        }
        // passed is recomputable from (metric, value, threshold).
        for c in &report.checks {
            if let Some(v) = c.value {
                assert_eq!(c.passed, c.metric.passes(v, c.threshold), "{}", c.id);
            } else {
                assert!(!c.passed);
            }
        }
        // Ids are unique and sorted.
        for pair in report.checks.windows(2) {
            assert!(pair[0].id < pair[1].id, "order: {} {}", pair[0].id, pair[1].id);
        }
        // The annihilated-coefficient branch reports the absolute metric.
        let zero = report
            .checks
            .iter()
            .find(|c| c.id.ends_with("l0-n0-annihilated"))
            .unwrap();
        assert_eq!(zero.metric, Metric::AbsoluteError);
        assert_eq!(zero.value, Some(0.0));
        assert!(zero.passed);

        let again = run_suite(&config).unwrap();
        assert_eq!(report.to_json(), again.to_json(), "reports must be byte-identical");
    }

    fn failures(report: &VerificationReport) -> Vec<String> {
        report
            .checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::Failed | CheckStatus::Errored))
            .map(|c| format!("{} = {:?} ({})", c.id, c.value, c.note.clone().unwrap_or_default()))
            .collect()
    }

    #[test]
    fn model_filter_restricts_the_report() {
        let config = SuiteConfig {
            models: vec![ModelId::Oscillator],
            checks: vec!["spectrum".into(), "label_bookkeeping".into()],
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert!(report.summary.total > 0);
        assert!(report.checks.iter().all(|c| c.model == "oscillator"));
        assert!(report.all_passed());
    }

    #[test]
    fn empty_model_list_yields_empty_report() {
        let config = SuiteConfig {
            models: Vec::new(),
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.summary, Summary::default());
        assert!(report.checks.is_empty());
    }

    #[test]
    fn plural_check_filters_match() {
        let config = SuiteConfig {
            models: vec![ModelId::Oscillator],
            checks: vec!["commutators".into()],
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert!(report.summary.total >= 4);
        assert!(report.checks.iter().all(|c| c.id.contains("/commutator")));
    }

    #[test]
    fn threshold_override_forces_failures() {
        let mut thresholds = BTreeMap::new();
        thresholds.insert("refined_identity".to_string(), 1e-9);
        let config = SuiteConfig {
            checks: vec!["refined_identity".into()],
            thresholds,
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert!(report.summary.total >= 20);
        assert_eq!(report.summary.failed, report.summary.total);
        assert!(report.checks.iter().all(|c| c.threshold == 1e-9));
    }

    #[test]
    fn unknown_threshold_key_is_a_config_error() {
        let mut thresholds = BTreeMap::new();
        thresholds.insert("bogus_identity".to_string(), 1.0);
        let config = SuiteConfig {
            thresholds,
            ..SuiteConfig::default()
        };
        let err = run_suite(&config).unwrap_err();
        assert!(err.to_string().contains("bogus_identity"));
    }

    #[test]
    fn report_json_has_the_contract_shape() {
        let config = SuiteConfig {
            models: vec![ModelId::Morse],
            checks: vec!["spectrum".into()],
            suite: "shape-probe".into(),
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in ["suite", "timestamp", "grid", "checks", "summary"] {
            assert!(parsed.get(key).is_some(), "missing {key}");
        }
        assert_eq!(parsed["suite"], "shape-probe");
        let first = &parsed["checks"][0];
        for key in [
            "id", "model", "n", "l", "pair", "metric", "value", "threshold", "passed", "status",
        ] {
            assert!(first.get(key).is_some(), "missing check field {key}");
        }
        assert_eq!(parsed["summary"]["failed"], 0);
        let metric = first["metric"].as_str().unwrap();
        assert!(
            ["relative residual", "overlap", "absolute error"].contains(&metric),
            "metric string {metric}"
        );
    }

    #[test]
    fn sequential_and_parallel_reports_are_identical() {
        let config = SuiteConfig {
            models: vec![ModelId::Oscillator],
            checks: vec!["spectrum".into(), "intertwining".into()],
            ..SuiteConfig::default()
        };
        let seq = run_suite_with_mode(&config, ExecMode::Sequential).unwrap();
        let par = run_suite_with_mode(&config, ExecMode::Parallel).unwrap();
        assert_eq!(seq.to_json(), par.to_json());
    }

    #[test]
    fn dilation_checks_pass_their_tight_gate() {
        let config = SuiteConfig {
            models: vec![ModelId::Coulomb],
            checks: vec!["dilation_law".into()],
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.summary.total, 3);
        assert!(report.all_passed(), "{:?}", failures(&report));
        for c in &report.checks {
            assert!(c.value.unwrap() <= 1e-8);
        }
    }
}

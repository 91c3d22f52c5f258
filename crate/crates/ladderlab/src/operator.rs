//! First-order operator chains: differentials, scalars, and dilations.
//!
//! Every ladder operator in the three hierarchies is a composition of at most
//! a handful of primitive atoms,
//!
//! * `Differential(a, b)` — `f ↦ a(x)·f′ + b(x)·f`,
//! * `Scalar(c)`          — `f ↦ c(x)·f`,
//! * `Dilation(μ)`        — `f ↦ f(μx)`,
//!
//! stored **right to left**: the last atom listed acts first, matching how
//! factored operators are conventionally written. Derivatives use centered 2nd-order
//! stencils with one-sided 2nd-order closures at the edges; dilations resample
//! by 4-point Lagrange interpolation, extending past the upper edge with a
//! geometric (pure-exponential) tail when the data decays and by bounded
//! Lagrange extrapolation below the lower edge.
//!
//! Composites built from a ladder pair and its inverse carry exactly inverse
//! dilation factors; [`apply`] fuses adjacent dilation runs (D(μ)D(ν) = D(μν))
//! before evaluating so those cancel *exactly* instead of paying two resampling
//! errors. Without this compaction the Coulomb factorization identities lose
//! six orders of magnitude.

use crate::error::{LadderError, Result};
use crate::grid::{Grid, Wavefunction};
use crate::tolerances::{
    DILATION_LOWER_MARGIN_SPACINGS, DILATION_MERGE_EPS, DILATION_UPPER_MARGIN,
};
use std::fmt;
use std::sync::Arc;

/// A position-dependent coefficient, shared cheaply between chains.
pub type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Wrap a closure as a [`Coefficient`].
pub fn coef<F>(f: F) -> Coefficient
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Constant coefficient.
#[must_use]
pub fn const_coef(c: f64) -> Coefficient {
    Arc::new(move |_| c)
}

/// A primitive operator.
#[derive(Clone)]
pub enum OperatorAtom {
    /// `f ↦ a(x)·f′(x) + b(x)·f(x)`.
    Differential { a: Coefficient, b: Coefficient },
    /// `f ↦ c(x)·f(x)`.
    Scalar(Coefficient),
    /// `f ↦ f(μx)`.
    Dilation(f64),
}

impl fmt::Debug for OperatorAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorAtom::Differential { .. } => f.write_str("Differential(a, b)"),
            OperatorAtom::Scalar(_) => f.write_str("Scalar(c)"),
            OperatorAtom::Dilation(mu) => write!(f, "Dilation({mu})"),
        }
    }
}

/// An ordered operator composition (rightmost atom acts first).
#[derive(Clone, Debug)]
pub struct OperatorChain {
    pub name: String,
    pub atoms: Vec<OperatorAtom>,
}

impl OperatorChain {
    /// Build a named chain.
    #[must_use]
    pub fn new(name: impl Into<String>, atoms: Vec<OperatorAtom>) -> Self {
        OperatorChain {
            name: name.into(),
            atoms,
        }
    }

    /// Compose `self ∘ inner` (apply `inner` first, then `self`).
    #[must_use]
    pub fn compose(&self, inner: &OperatorChain) -> OperatorChain {
        let mut atoms = self.atoms.clone();
        atoms.extend(inner.atoms.iter().cloned());
        OperatorChain {
            name: format!("{}∘{}", self.name, inner.name),
            atoms,
        }
    }

    /// Prepend an overall constant factor (acts last).
    #[must_use]
    pub fn scaled(&self, c: f64) -> OperatorChain {
        let mut atoms = vec![OperatorAtom::Scalar(const_coef(c))];
        atoms.extend(self.atoms.iter().cloned());
        OperatorChain {
            name: format!("{c}·{}", self.name),
            atoms,
        }
    }

    /// Number of differential atoms in the chain.
    #[must_use]
    pub fn differential_count(&self) -> usize {
        self.atoms
            .iter()
            .filter(|a| matches!(a, OperatorAtom::Differential { .. }))
            .count()
    }
}

/// Centered first derivative with 2nd-order one-sided edge stencils.
#[must_use]
pub fn d1(grid: &Grid, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let h = grid.spacing;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    out
}

/// Centered second derivative with 2nd-order one-sided edge stencils.
#[must_use]
pub fn d2(grid: &Grid, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let h2 = grid.spacing * grid.spacing;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    }
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    out
}

/// Resample `f(μx)` on the grid of `f`.
///
/// Interior targets use 4-point Lagrange interpolation. Targets above `x_max`
/// use a geometric tail fitted to the last two samples when those decay with a
/// common sign, zero otherwise; targets more than
/// [`DILATION_UPPER_MARGIN`]·span above the edge are rejected. Targets below
/// `x_min` by more than [`DILATION_LOWER_MARGIN_SPACINGS`] spacings are
/// rejected; closer undershoots extrapolate from the lowest stencil.
pub fn dilate(f: &Wavefunction, mu: f64) -> Result<Wavefunction> {
    let values = dilate_values(&f.grid, &f.values, mu)?;
    Ok(Wavefunction {
        grid: f.grid.clone(),
        values,
        labels: None,
        model: f.model,
    })
}

pub(crate) fn dilate_values(grid: &Grid, f: &[f64], mu: f64) -> Result<Vec<f64>> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(LadderError::Domain(format!(
            "dilation factor must be positive and finite, got {mu}"
        )));
    }
    let n = grid.count;
    let x = grid.x();
    let h = grid.spacing;
    let span = grid.x_max - grid.x_min;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let t = mu * x[i];
        if t > grid.x_max {
            if t > grid.x_max + DILATION_UPPER_MARGIN * span {
                return Err(LadderError::DilationOutOfRange(format!(
                    "target {t} exceeds x_max {} by more than {DILATION_UPPER_MARGIN}x span",
                    grid.x_max
                )));
            }
            let a = f[n - 2];
            let b = f[n - 1];
            // Geometric tail: valid when the data decays exponentially with a
            // common sign at the edge; otherwise the state is already ~0 there.
            out[i] = if b != 0.0 && b.abs() < a.abs() && a * b > 0.0 {
                let rho = b / a;
                b * rho.powf((t - grid.x_max) / h)
            } else {
                0.0
            };
            continue;
        }
        let s = if t < grid.x_min {
            if t < grid.x_min - DILATION_LOWER_MARGIN_SPACINGS * h {
                return Err(LadderError::DilationOutOfRange(format!(
                    "target {t} undershoots x_min {} by more than {DILATION_LOWER_MARGIN_SPACINGS} spacings",
                    grid.x_min
                )));
            }
            0
        } else {
            let base = ((t - grid.x_min) / h).floor() as i64;
            (base - 1).clamp(0, n as i64 - 4) as usize
        };
        // 4-point Lagrange on x[s..s+4].
        let mut acc = 0.0;
        for j in 0..4 {
            let mut w = 1.0;
            for k in 0..4 {
                if k != j {
                    w *= (t - x[s + k]) / (x[s + j] - x[s + k]);
                }
            }
            acc += w * f[s + j];
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Fuse adjacent dilation runs: `… D(μ) D(ν) … → … D(μν) …`, dropping factors
/// indistinguishable from 1. Exact-inverse dilations inside a composite
/// therefore cancel symbolically instead of resampling twice.
#[must_use]
pub fn merge_dilations(atoms: &[OperatorAtom]) -> Vec<OperatorAtom> {
    let mut out: Vec<OperatorAtom> = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match (atom, out.last_mut()) {
            (OperatorAtom::Dilation(mu), Some(OperatorAtom::Dilation(prev))) => {
                *prev *= mu;
            }
            (a, _) => out.push(a.clone()),
        }
    }
    out.retain(|a| match a {
        OperatorAtom::Dilation(mu) => (mu - 1.0).abs() >= DILATION_MERGE_EPS,
        _ => true,
    });
    out
}

/// Apply a chain to a wavefunction (atoms act right to left).
///
/// Chains are restricted to at most two differential atoms — enough for every
/// refined pair and quadratic composite, and a guard against silently stacking
/// stencil error.
pub fn apply(op: &OperatorChain, f: &Wavefunction) -> Result<Wavefunction> {
    if op.differential_count() > 2 {
        return Err(LadderError::Domain(format!(
            "chain {} carries more than two differential atoms",
            op.name
        )));
    }
    let grid = &f.grid;
    let x = grid.x();
    let mut v = f.values.clone();
    for atom in merge_dilations(&op.atoms).iter().rev() {
        match atom {
            OperatorAtom::Differential { a, b } => {
                let dv = d1(grid, &v);
                for i in 0..v.len() {
                    v[i] = a(x[i]) * dv[i] + b(x[i]) * v[i];
                }
            }
            OperatorAtom::Scalar(c) => {
                for i in 0..v.len() {
                    v[i] *= c(x[i]);
                }
            }
            OperatorAtom::Dilation(mu) => {
                v = dilate_values(grid, &v, *mu)?;
            }
        }
    }
    if v.iter().any(|y| !y.is_finite()) {
        return Err(LadderError::NonFinite(format!("chain {}", op.name)));
    }
    Ok(Wavefunction {
        grid: grid.clone(),
        values: v,
        labels: None,
        model: f.model,
    })
}

/// Literal commutator action: `[P, Q]f = P(Qf) − Q(Pf)`.
pub fn commutator_apply(
    p: &OperatorChain,
    q: &OperatorChain,
    f: &Wavefunction,
) -> Result<Wavefunction> {
    let pq = apply(p, &apply(q, f)?)?;
    let qp = apply(q, &apply(p, f)?)?;
    let values = pq
        .values
        .iter()
        .zip(&qp.values)
        .map(|(a, b)| a - b)
        .collect();
    Ok(Wavefunction {
        grid: f.grid.clone(),
        values,
        labels: None,
        model: f.model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, trapz, DomainKind, Wavefunction};
    use crate::verify::{gauss_full, gauss_half};

    fn gaussian_on(count: usize) -> (Grid, Wavefunction) {
        let g = build_grid(DomainKind::FullLine, -8.0, 8.0, count).unwrap();
        let v: Vec<f64> = g.x().iter().map(|x| (-x * x / 2.0).exp()).collect();
        (g.clone(), Wavefunction::new(g, v).unwrap())
    }

    #[test]
    fn scalar_chain_is_pointwise_multiplication() {
        let (g, f) = gaussian_on(512);
        let op = OperatorChain::new("2x", vec![OperatorAtom::Scalar(coef(|x| 2.0 * x))]);
        let out = apply(&op, &f).unwrap();
        for (i, x) in g.x().iter().enumerate() {
            assert_eq!(out.values[i], 2.0 * x * f.values[i]);
        }
    }

    #[test]
    fn derivative_matches_analytic_gaussian() {
        let (g, f) = gaussian_on(4001);
        let op = OperatorChain::new(
            "d/dx",
            vec![OperatorAtom::Differential {
                a: const_coef(1.0),
                b: const_coef(0.0),
            }],
        );
        let out = apply(&op, &f).unwrap();
        let w = g.window();
        let max_err = g.x()[w.clone()]
            .iter()
            .zip(&out.values[w])
            .map(|(x, d)| (d - (-x * (-x * x / 2.0).exp())).abs())
            .fold(0.0f64, f64::max)
            ;
        assert!(max_err <= 1e-5, "derivative error {max_err}");
    }

    #[test]
    fn derivative_error_shrinks_fourfold_when_spacing_halves() {
        let mut errs = Vec::new();
        for count in [1001usize, 2001, 4001] {
            let (g, f) = gaussian_on(count);
            let dv = d1(&g, &f.values);
            let w = g.window();
            let e = g.x()[w.clone()]
                .iter()
                .zip(&dv[w])
                .map(|(x, d)| (d + x * (-x * x / 2.0).exp()).abs())
                .fold(0.0f64, f64::max);
            errs.push(e);
        }
        for pair in errs.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (3.5..4.5).contains(&ratio),
                "2nd-order convergence broken: ratio {ratio}"
            );
        }
    }

    #[test]
    fn unit_dilation_is_identity() {
        let g = build_grid(DomainKind::HalfLine, 1e-4, 12.0, 2001).unwrap();
        let f = gauss_half(&g, 4.0, 1.0);
        let out = dilate(&f, 1.0).unwrap();
        for (a, b) in out.values.iter().zip(&f.values) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn dilation_matches_closed_form_squeeze() {
        // D(2) e^{-r^2} = e^{-4 r^2}.
        let g = build_grid(DomainKind::HalfLine, 1e-4, 12.0, 4001).unwrap();
        let f = Wavefunction::new(g.clone(), g.x().iter().map(|x| (-x * x).exp()).collect())
            .unwrap();
        let out = dilate(&f, 2.0).unwrap();
        let w = g.window();
        let max_err = g.x()[w.clone()]
            .iter()
            .zip(&out.values[w])
            .map(|(x, v)| (v - (-4.0 * x * x).exp()).abs())
            .fold(0.0f64, f64::max);
        assert!(max_err <= 1e-8, "dilation error {max_err}");
    }

    #[test]
    fn dilation_rescales_norm_by_inverse_factor() {
        let g = build_grid(DomainKind::HalfLine, 1e-5, 60.0, 8001).unwrap();
        let f = gauss_half(&g, 10.0, 2.0);
        let mu = 1.25;
        let out = dilate(&f, mu).unwrap();
        let n_in = trapz(&g, &f.values.iter().map(|v| v * v).collect::<Vec<_>>());
        let n_out = trapz(&g, &out.values.iter().map(|v| v * v).collect::<Vec<_>>());
        let defect = (mu * n_out / n_in - 1.0).abs();
        assert!(defect <= 1e-6, "norm scaling defect {defect}");
    }

    #[test]
    fn sequential_inverse_dilations_compose_to_identity() {
        let g = build_grid(DomainKind::HalfLine, 1e-5, 60.0, 8001).unwrap();
        let f = gauss_half(&g, 10.0, 2.0);
        let round = dilate(&dilate(&f, 1.25).unwrap(), 0.8).unwrap();
        let w = g.window();
        let num: f64 = round.values[w.clone()]
            .iter()
            .zip(&f.values[w.clone()])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let den: f64 = f.values[w].iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(num / den <= 1e-8, "composition residual {}", num / den);
    }

    #[test]
    fn merged_inverse_dilations_cancel_exactly() {
        let g = build_grid(DomainKind::HalfLine, 1e-5, 60.0, 1001).unwrap();
        let f = gauss_half(&g, 10.0, 2.0);
        let op = OperatorChain::new(
            "D(0.8)∘D(1.25)",
            vec![OperatorAtom::Dilation(0.8), OperatorAtom::Dilation(1.25)],
        );
        let out = apply(&op, &f).unwrap();
        assert_eq!(out.values, f.values, "fused dilations must drop out");
    }

    #[test]
    fn merge_fuses_only_adjacent_runs() {
        let atoms = vec![
            OperatorAtom::Scalar(const_coef(1.0)),
            OperatorAtom::Dilation(2.0),
            OperatorAtom::Dilation(3.0),
            OperatorAtom::Scalar(const_coef(1.0)),
            OperatorAtom::Dilation(0.5),
        ];
        let merged = merge_dilations(&atoms);
        assert_eq!(merged.len(), 4);
        match merged[1] {
            OperatorAtom::Dilation(mu) => assert_eq!(mu, 6.0),
            _ => panic!("expected fused dilation"),
        }
        match merged[3] {
            OperatorAtom::Dilation(mu) => assert_eq!(mu, 0.5),
            _ => panic!("expected trailing dilation preserved"),
        }
    }

    #[test]
    fn exponential_tail_extrapolation_tracks_decaying_states() {
        // D(1.05) e^{-x} = e^{-1.05 x}; targets beyond x_max ride the
        // geometric tail, which is exact for pure exponentials.
        let g = build_grid(DomainKind::HalfLine, 1e-5, 60.0, 8001).unwrap();
        let f = Wavefunction::new(g.clone(), g.x().iter().map(|x| (-x).exp()).collect()).unwrap();
        let out = dilate(&f, 1.05).unwrap();
        let w = g.window();
        let max_err = g.x()[w.clone()]
            .iter()
            .zip(&out.values[w])
            .map(|(x, v)| (v - (-1.05 * x).exp()).abs())
            .fold(0.0f64, f64::max);
        assert!(max_err <= 1e-8, "tail extrapolation error {max_err}");
    }

    #[test]
    fn out_of_range_dilations_are_rejected() {
        let g = build_grid(DomainKind::FullLine, -12.0, 6.0, 512).unwrap();
        let f = gauss_full(&g, 0.0, 1.0);
        // mu > 1 on a negative lower edge undershoots x_min far beyond the margin.
        assert!(matches!(
            dilate(&f, 1.25),
            Err(LadderError::DilationOutOfRange(_))
        ));
        let g = build_grid(DomainKind::HalfLine, 1e-5, 60.0, 512).unwrap();
        let f = gauss_half(&g, 10.0, 2.0);
        assert!(matches!(
            dilate(&f, 3.0),
            Err(LadderError::DilationOutOfRange(_))
        ));
        assert!(dilate(&f, -1.0).is_err());
    }

    #[test]
    fn composition_equals_sequential_application() {
        let (_, f) = gaussian_on(1024);
        let p = OperatorChain::new(
            "x+d",
            vec![OperatorAtom::Differential {
                a: const_coef(1.0),
                b: coef(|x| x),
            }],
        );
        let q = OperatorChain::new("3", vec![OperatorAtom::Scalar(const_coef(3.0))]);
        let composed = apply(&p.compose(&q), &f).unwrap();
        let sequential = apply(&p, &apply(&q, &f).unwrap()).unwrap();
        assert_eq!(composed.values, sequential.values);
    }

    #[test]
    fn chains_reject_more_than_two_differentials() {
        let (_, f) = gaussian_on(256);
        let d = OperatorAtom::Differential {
            a: const_coef(1.0),
            b: const_coef(0.0),
        };
        let op = OperatorChain::new("d3", vec![d.clone(), d.clone(), d]);
        assert!(matches!(apply(&op, &f), Err(LadderError::Domain(_))));
    }

    #[test]
    fn commutator_of_scalars_vanishes() {
        let (_, f) = gaussian_on(256);
        let p = OperatorChain::new("x", vec![OperatorAtom::Scalar(coef(|x| x))]);
        let q = OperatorChain::new("x^2", vec![OperatorAtom::Scalar(coef(|x| x * x))]);
        let out = commutator_apply(&p, &q, &f).unwrap();
        assert!(out.values.iter().all(|v| v.abs() <= 1e-14));
    }
}

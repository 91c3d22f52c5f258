//! Bound-state construction by ladder-operator walks.
//!
//! Every bound state is reachable from a closed-form channel ground by a
//! finite word in the refined raising operators. The canonical route used
//! here descends to the midpoint ground `(m, m)`, `m = (n+ℓ)/2`, and walks
//! back up with repeated pair-2 raisings; each intermediate source is then
//! either an analytic ground or one application away from it, so
//! boundary-stencil noise cannot cascade. The outermost grid samples carry
//! one-sided-stencil garbage whenever a chain coefficient is singular or
//! unbounded at the edges, so a fixed guard zeroes them after every
//! application — the true states are negligible there.
//!
//! The recorded step norms are the empirical ladder coefficients; their
//! closed forms are checked elsewhere. Signs follow the peak-positive
//! normalization convention, and a sign flip applied to a state flips its
//! recorded coefficient too, keeping `A ψ = c ψ′` consistent.

use crate::error::{LadderError, Result};
use crate::grid::{guard_edges, inner_product, normalize, Grid, Wavefunction};
use crate::model::HierarchyModel;
use crate::operator::apply;
use crate::qn::{fmt_q, qint, ModelId, Q, QuantumNumbers};
use crate::tolerances::{
    ANNIHILATION_NORM_FLOOR, COEFFICIENT_OVERLAP_FLOOR, COEFFICIENT_ZERO_SUP, EDGE_GUARD,
    RESIDUAL_DENOMINATOR_FLOOR,
};
use std::fmt;

/// One refined raising application along a build path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderMove {
    /// Refined pair index (1 or 2).
    pub pair: u8,
    /// Label consumed by the operator.
    pub from: QuantumNumbers,
    /// Label produced.
    pub to: QuantumNumbers,
}

impl fmt::Display for LadderMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}: {} -> {}", self.pair, self.from, self.to)
    }
}

/// A walk from a channel ground to a target label.
#[derive(Clone, Debug)]
pub struct LadderPath {
    /// Midpoint ground the walk starts from.
    pub start: QuantumNumbers,
    pub moves: Vec<LadderMove>,
}

impl LadderPath {
    #[must_use]
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

impl fmt::Display for LadderPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ground {}", self.start)?;
        for mv in &self.moves {
            write!(f, ", {mv}")?;
        }
        Ok(())
    }
}

/// The canonical build route to `(n, ℓ)`: start at the midpoint ground
/// `(m, m)` with `m = (n+ℓ)/2` and apply pair-2 raisings until the target is
/// reached. Rejects labels off the bound-state lattice, including the Morse
/// `n = 0` line, which the operator algebra reaches but whose states are not
/// normalizable.
pub fn canonical_path(model: &HierarchyModel, n: Q, l: Q) -> Result<LadderPath> {
    let target = QuantumNumbers::new(n, l);
    if model.id() == ModelId::Morse && n == qint(0) && model.is_representable(target) {
        return Err(LadderError::Lattice(format!(
            "{target} lies on the algebra lattice but its state is not normalizable"
        )));
    }
    if !(model.is_physical(target) || model.is_half_step(target)) {
        return Err(LadderError::Lattice(format!(
            "{target} is not a bound-state label of the {} hierarchy",
            model.id()
        )));
    }
    let m = (n + l) / qint(2);
    let start = QuantumNumbers::new(m, m);
    let mut moves = Vec::new();
    let mut cur = start;
    while cur != target {
        let next = model.step(2, cur)?;
        moves.push(LadderMove {
            pair: 2,
            from: cur,
            to: next,
        });
        cur = next;
        if moves.len() >= 64 {
            return Err(LadderError::NoPath(format!(
                "no pair-2 walk from {start} reaches {target}"
            )));
        }
    }
    Ok(LadderPath { start, moves })
}

/// Normalized closed-form ground state of channel ℓ, tagged `(ℓ, ℓ)`.
pub fn ground_state(model: &HierarchyModel, l: Q, grid: &Grid) -> Result<Wavefunction> {
    let vals = model.ground_values(l, grid)?;
    Ok(normalize(&Wavefunction::new(grid.clone(), vals)?)?
        .tagged(model.id(), QuantumNumbers::new(l, l)))
}

/// A state produced by a ladder walk, with a record of how it was built.
#[derive(Clone, Debug)]
pub struct BuiltState {
    /// Normalized, tagged wavefunction.
    pub psi: Wavefunction,
    pub path: LadderPath,
    /// Empirical step norm of each move (sign-adjusted to the peak-positive
    /// convention of the normalized intermediate states).
    pub coefficients: Vec<f64>,
}

/// Build the normalized `(n, ℓ)` bound state along the canonical path.
pub fn build_state(model: &HierarchyModel, n: Q, l: Q, grid: &Grid) -> Result<BuiltState> {
    let path = canonical_path(model, n, l)?;
    let mut psi = ground_state(model, path.start.l, grid)?;
    let mut coefficients = Vec::with_capacity(path.len());
    for mv in &path.moves {
        let chain = model.chain_a(mv.pair, mv.from.n, mv.from.l)?;
        let mut out = apply(&chain, &psi)?;
        guard_edges(&mut out.values, EDGE_GUARD);
        let mut c = inner_product(&out, &out)?.sqrt();
        if !c.is_finite() {
            return Err(LadderError::NonFinite(format!("ladder step {mv}")));
        }
        if c < ANNIHILATION_NORM_FLOOR {
            return Err(LadderError::Annihilated(format!(
                "ladder step {mv} annihilated the state"
            )));
        }
        for v in &mut out.values {
            *v /= c;
        }
        let peak = peak_index(&out.values);
        if out.values[peak] < 0.0 {
            for v in &mut out.values {
                *v = -*v;
            }
            c = -c;
        }
        coefficients.push(c);
        psi = out;
    }
    Ok(BuiltState {
        psi: psi.tagged(model.id(), QuantumNumbers::new(n, l)),
        path,
        coefficients,
    })
}

/// Windowed relative eigen-residual `‖(H − E_n)ψ‖ / ‖ψ‖` (plain Euclidean
/// norms on the interior window).
pub fn eigen_residual(model: &HierarchyModel, n: Q, l: Q, psi: &Wavefunction) -> Result<f64> {
    let e = model.energy(n, l);
    let h = model.hamiltonian_apply(l, psi)?;
    let win = psi.grid.window();
    let num = crate::verify::raw_norm_iter(
        h.values[win.clone()]
            .iter()
            .zip(&psi.values[win.clone()])
            .map(|(hv, pv)| hv - e * pv),
    );
    let den = crate::verify::raw_norm(&psi.values[win]);
    Ok(if den > RESIDUAL_DENOMINATOR_FLOOR {
        num / den
    } else {
        num
    })
}

/// Measure the conventional ladder coefficient `|c|` in
/// `X⁻_ℓ ψ_n^ℓ = c ψ_n^{ℓ+1}` on the Coulomb hierarchy by projecting the
/// operator image onto the independently built target state.
///
/// At `n = ℓ` the pair's lowering member coincides with the channel
/// annihilator and the image vanishes; that branch returns exactly `0.0`.
/// Only Coulomb carries an energy-preserving conventional pair whose
/// coefficient formula `|c| = √(q(ℓ) − q(n))` is directly measurable this
/// way, so other hierarchies are rejected.
pub fn ladder_coefficient(model: &HierarchyModel, n: Q, l: Q, grid: &Grid) -> Result<f64> {
    if model.id() != ModelId::Coulomb {
        return Err(LadderError::Domain(format!(
            "conventional ladder coefficients are measured on the Coulomb hierarchy, not {}",
            model.id()
        )));
    }
    let src = build_state(model, n, l, grid)?;
    let pair = model.conventional(l)?;
    let mut out = apply(&pair.minus, &src.psi)?;
    guard_edges(&mut out.values, EDGE_GUARD);
    let win = grid.window();
    let sup_out = out.values[win]
        .iter()
        .fold(0.0f64, |a, &v| a.max(v.abs()));
    let sup_src = src.psi.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if sup_out <= COEFFICIENT_ZERO_SUP * sup_src {
        return Ok(0.0);
    }
    let tgt = build_state(model, n, l + qint(1), grid)?;
    let proj = inner_product(&tgt.psi, &out)?;
    // Proportionality is judged on the interior window: differentiating the
    // guarded edge zeros through the 1/x coefficients leaves spikes just
    // inside the guard band that carry real L2 mass but no physics, and the
    // projection integral never sees them.
    let alignment = crate::verify::windowed_overlap(grid, &out.values, &tgt.psi.values);
    if alignment < COEFFICIENT_OVERLAP_FLOOR {
        return Err(LadderError::Domain(format!(
            "ladder image does not align with the expected target state \
             (alignment {alignment:.6} at n={}, l={})",
            fmt_q(n),
            fmt_q(l)
        )));
    }
    Ok(proj.abs())
}

fn peak_index(values: &[f64]) -> usize {
    let mut peak = 0usize;
    let mut best = -1.0f64;
    for (i, v) in values.iter().enumerate() {
        if v.abs() > best {
            best = v.abs();
            peak = i;
        }
    }
    peak
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qn::qr;

    #[test]
    fn canonical_paths_have_the_expected_shape() {
        let osc = HierarchyModel::oscillator();
        let p = canonical_path(&osc, qint(3), qint(1)).unwrap();
        assert_eq!(p.start, QuantumNumbers::ints(2, 2));
        assert_eq!(p.len(), 1);
        let p = canonical_path(&osc, qint(5), qint(3)).unwrap();
        assert_eq!(p.start, QuantumNumbers::ints(4, 4));
        assert_eq!(p.len(), 1);
        let p = canonical_path(&osc, qint(4), qint(0)).unwrap();
        assert_eq!(p.len(), 2);

        let cou = HierarchyModel::coulomb();
        let p = canonical_path(&cou, qint(2), qint(0)).unwrap();
        assert_eq!(p.start, QuantumNumbers::new(qint(1), qint(1)));
        assert_eq!(p.len(), 2); // two half-unit steps
        let p = canonical_path(&cou, qr(3, 2), qr(1, 2)).unwrap();
        assert_eq!(p.start, QuantumNumbers::ints(1, 1));
        assert_eq!(p.len(), 1);

        let mor = HierarchyModel::morse(1.0).unwrap();
        let p = canonical_path(&mor, qint(1), qint(3)).unwrap();
        assert_eq!(p.start, QuantumNumbers::ints(2, 2));
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn off_lattice_labels_are_rejected() {
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert!(canonical_path(&mor, qint(5), qint(3)).is_err());
        let err = canonical_path(&mor, qint(0), qint(2)).unwrap_err();
        assert!(
            err.to_string().contains("not normalizable"),
            "unexpected message: {err}"
        );
        let osc = HierarchyModel::oscillator();
        assert!(canonical_path(&osc, qint(2), qint(1)).is_err());
    }

    #[test]
    fn closed_form_grounds_satisfy_their_eigen_equations() {
        let osc = HierarchyModel::oscillator();
        let g = osc.default_grid().unwrap();
        let psi = ground_state(&osc, qint(0), &g).unwrap();
        let r = eigen_residual(&osc, qint(0), qint(0), &psi).unwrap();
        assert!(r < 1e-4, "oscillator ground residual {r}");

        // u = x^{1/2} e^{-2x} with E = -4 on the l = 0 channel.
        let cou = HierarchyModel::coulomb();
        let g = cou.default_grid().unwrap();
        let psi = ground_state(&cou, qint(0), &g).unwrap();
        let r = eigen_residual(&cou, qint(0), qint(0), &psi).unwrap();
        assert!(r < 1e-4, "coulomb ground residual {r}");

        let mor = HierarchyModel::morse(1.0).unwrap();
        let g = mor.default_grid().unwrap();
        let psi = ground_state(&mor, qint(1), &g).unwrap();
        let r = eigen_residual(&mor, qint(1), qint(1), &psi).unwrap();
        assert!(r < 1e-4, "morse ground residual {r}");
        assert!(ground_state(&mor, qint(0), &g).is_err());
    }

    #[test]
    fn built_states_satisfy_their_eigen_equations() {
        let osc = HierarchyModel::oscillator();
        let g = osc.default_grid().unwrap();
        let b = build_state(&osc, qint(2), qint(0), &g).unwrap();
        assert_eq!(b.coefficients.len(), 1);
        let r = eigen_residual(&osc, qint(2), qint(0), &b.psi).unwrap();
        assert!(r < 1e-4, "osc (2,0) residual {r}");

        let mor = HierarchyModel::morse(1.0).unwrap();
        let g = mor.default_grid().unwrap();
        let b = build_state(&mor, qint(1), qint(3), &g).unwrap();
        let r = eigen_residual(&mor, qint(1), qint(3), &b.psi).unwrap();
        assert!(r < 1e-4, "morse (1,3) residual {r}");
        assert!(build_state(&mor, qint(5), qint(3), &g).is_err());
    }

    #[test]
    fn zero_length_paths_reproduce_the_ground_exactly() {
        let cou = HierarchyModel::coulomb();
        let g = cou.grid_with_count(1001).unwrap();
        let b = build_state(&cou, qint(1), qint(1), &g).unwrap();
        assert!(b.path.is_empty());
        assert!(b.coefficients.is_empty());
        let ground = ground_state(&cou, qint(1), &g).unwrap();
        assert_eq!(b.psi.values, ground.values);
        assert_eq!(b.psi.labels, Some(QuantumNumbers::ints(1, 1)));
    }

    #[test]
    fn alternative_walks_reach_the_same_state() {
        // (2,0) via the canonical route and via (0,0) -> A1 -> (1,1) -> A2.
        // The second application differentiates the first step's guarded
        // edge zeros, so the routes are compared on the interior window
        // where both are physical.
        let osc = HierarchyModel::oscillator();
        let g = osc.default_grid().unwrap();
        let canonical = build_state(&osc, qint(2), qint(0), &g).unwrap();

        let mut alt = ground_state(&osc, qint(0), &g).unwrap();
        for (pair, from) in [(1u8, QuantumNumbers::ints(0, 0)), (2u8, QuantumNumbers::ints(1, 1))]
        {
            let chain = osc.chain_a(pair, from.n, from.l).unwrap();
            let mut out = apply(&chain, &alt).unwrap();
            guard_edges(&mut out.values, EDGE_GUARD);
            alt = normalize(&out).unwrap();
        }
        let overlap = crate::verify::windowed_overlap(&g, &canonical.psi.values, &alt.values);
        assert!(overlap >= 0.99999, "path-dependence: overlap {overlap}");
    }

    #[test]
    fn conventional_coefficient_matches_its_closed_form() {
        let cou = HierarchyModel::coulomb();
        let g = cou.grid_with_count(16001).unwrap();
        let c = ladder_coefficient(&cou, qint(1), qint(0), &g).unwrap();
        // |c| = sqrt(q(0) - q(1)) = sqrt(4 - 4/9).
        let pred = (4.0f64 - 4.0 / 9.0).sqrt();
        assert!(
            ((c - pred) / pred).abs() < 1e-3,
            "coefficient {c} vs {pred}"
        );
    }

    #[test]
    fn annihilated_images_report_a_zero_coefficient() {
        let cou = HierarchyModel::coulomb();
        let g = cou.grid_with_count(16001).unwrap();
        let c = ladder_coefficient(&cou, qint(0), qint(0), &g).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn coefficients_are_a_coulomb_measurement() {
        let osc = HierarchyModel::oscillator();
        let g = osc.grid_with_count(1001).unwrap();
        assert!(ladder_coefficient(&osc, qint(2), qint(0), &g).is_err());
    }
}

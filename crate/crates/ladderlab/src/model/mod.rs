//! The three solvable hierarchies and their refined factorizations.
//!
//! Each family supplies, for every lattice point `(n, ℓ)`:
//!
//! * the channel potential `V^ℓ` and energy `E_n` (ℓ-independent),
//! * two *refined* intertwining pairs `(A^i, B^i)` with label maps `step_i` /
//!   `down_i` and a factorization constant `φ_i(n, ℓ)` satisfying
//!   `h·(H^ℓ − E_n) = B^i A^i − φ_i` on the `(n, ℓ)` eigenspace,
//! * the position factor `h(n, ℓ; x)` of that identity,
//! * a closed-form ground state per channel with its first-order annihilator,
//! * the *conventional* (one-parameter) ladder pair `X^±` with constant `q`,
//! * quadratic composites of two refined operators that move (n, ℓ) by whole
//!   units along either axis.
//!
//! Conventions worth stating once: the oscillator energy is parameterized as
//! `E = 2n + 2` with `n = ℓ + 2ν` (some treatments write `E = 4n + 2ℓ + 3` in
//! node count ν — same spectrum, shifted labels), and the Coulomb conventional
//! constant is *returned* in its tabulated form `q(ℓ) = −1/(ℓ+1/2)²` while the
//! algebra closes with the positive sign exposed as [`HierarchyModel::factorization_q`].

mod coulomb;
mod morse;
mod oscillator;

use crate::error::{LadderError, Result};
use crate::grid::{build_grid, DomainKind, Grid, Wavefunction};
use crate::operator::{d2, Coefficient, OperatorChain};
use crate::qn::{check_pair, fmt_q, is_integer, qint, ModelId, Q, QuantumNumbers};
use crate::tolerances::LATTICE_N_MAX;

/// One concrete hierarchy.
#[derive(Clone, Debug, PartialEq)]
pub enum HierarchyModel {
    RadialOscillator,
    Morse { alpha: f64 },
    RadialCoulomb,
}

/// The two chains of a refined factorization at a lattice point, together
/// with its bookkeeping: `h·(H^ℓ − E_n) = B A − φ` and `A: (n,ℓ) → step`.
pub struct RefinedPair {
    pub a: OperatorChain,
    pub b: OperatorChain,
    pub phi: f64,
    pub h: Coefficient,
    pub step: QuantumNumbers,
}

/// A conventional ladder pair `X^±` with its factorization constant.
pub struct ConventionalPair {
    pub plus: OperatorChain,
    pub minus: OperatorChain,
    pub q: f64,
}

/// Direction of a quadratic (two-operator) composite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadraticKind {
    /// `(n, ℓ) → (n + Δ, ℓ)` raising the energy label.
    RaiseN,
    /// `(n, ℓ) → (n − Δ, ℓ)`.
    LowerN,
    /// `(n, ℓ) → (n, ℓ + Δ)` at fixed energy.
    RaiseL,
    /// `(n, ℓ) → (n, ℓ − Δ)` at fixed energy.
    LowerL,
    /// Family-preferred energy-preserving move (alias of `RaiseL`).
    EnergyPreserving,
}

impl std::fmt::Display for QuadraticKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            QuadraticKind::RaiseN => "raise_n",
            QuadraticKind::LowerN => "lower_n",
            QuadraticKind::RaiseL => "raise_l",
            QuadraticKind::LowerL => "lower_l",
            QuadraticKind::EnergyPreserving => "energy_preserving",
        };
        f.write_str(s)
    }
}

/// A quadratic composite with its label bookkeeping. `source` is the lattice
/// point the chain consumes; `target` the point it produces.
pub struct QuadraticComposite {
    pub chain: OperatorChain,
    pub source: QuantumNumbers,
    pub target: QuantumNumbers,
}

impl HierarchyModel {
    /// The radial oscillator.
    #[must_use]
    pub fn oscillator() -> Self {
        HierarchyModel::RadialOscillator
    }

    /// The Morse hierarchy at width parameter α > 0.
    pub fn morse(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(LadderError::Domain(format!(
                "Morse width alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(HierarchyModel::Morse { alpha })
    }

    /// The radial Coulomb hierarchy.
    #[must_use]
    pub fn coulomb() -> Self {
        HierarchyModel::RadialCoulomb
    }

    /// Construct from an identifier (α only used by Morse).
    pub fn from_id(id: ModelId, alpha: f64) -> Result<Self> {
        match id {
            ModelId::Oscillator => Ok(Self::oscillator()),
            ModelId::Morse => Self::morse(alpha),
            ModelId::Coulomb => Ok(Self::coulomb()),
        }
    }

    #[must_use]
    pub fn id(&self) -> ModelId {
        match self {
            HierarchyModel::RadialOscillator => ModelId::Oscillator,
            HierarchyModel::Morse { .. } => ModelId::Morse,
            HierarchyModel::RadialCoulomb => ModelId::Coulomb,
        }
    }

    /// Morse width parameter, when applicable.
    #[must_use]
    pub fn alpha(&self) -> Option<f64> {
        match self {
            HierarchyModel::Morse { alpha } => Some(*alpha),
            _ => None,
        }
    }

    #[must_use]
    pub fn domain_kind(&self) -> DomainKind {
        match self {
            HierarchyModel::Morse { .. } => DomainKind::FullLine,
            _ => DomainKind::HalfLine,
        }
    }

    /// The production grid for this family (box sized so every state used in
    /// verification decays to machine level at both edges).
    pub fn default_grid(&self) -> Result<Grid> {
        self.grid_with_count(self.default_box().3)
    }

    /// Default box with a caller-chosen resolution.
    pub fn grid_with_count(&self, count: usize) -> Result<Grid> {
        let (kind, x_min, x_max, _) = self.default_box();
        build_grid(kind, x_min, x_max, count)
    }

    /// `(kind, x_min, x_max, default count)`.
    #[must_use]
    pub fn default_box(&self) -> (DomainKind, f64, f64, usize) {
        match self {
            HierarchyModel::RadialOscillator => (DomainKind::HalfLine, 1e-4, 12.0, 4001),
            HierarchyModel::Morse { .. } => (DomainKind::FullLine, -12.0, 6.0, 4001),
            HierarchyModel::RadialCoulomb => (DomainKind::HalfLine, 1e-5, 60.0, 8001),
        }
    }

    /// Channel potential at a point. Half-line families reject x ≤ 0.
    pub fn potential(&self, l: Q, x: f64) -> Result<f64> {
        if self.domain_kind() == DomainKind::HalfLine && x <= 0.0 {
            return Err(LadderError::Domain(format!(
                "{} potential is undefined at x = {x} (half line)",
                self.id()
            )));
        }
        Ok(match self {
            HierarchyModel::RadialOscillator => oscillator::potential(l, x),
            HierarchyModel::Morse { alpha } => morse::potential(*alpha, l, x),
            HierarchyModel::RadialCoulomb => coulomb::potential(l, x),
        })
    }

    /// Channel potential sampled on a (domain-compatible) grid.
    pub fn potential_values(&self, l: Q, grid: &Grid) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok(grid
            .x()
            .iter()
            .map(|&x| match self {
                HierarchyModel::RadialOscillator => oscillator::potential(l, x),
                HierarchyModel::Morse { alpha } => morse::potential(*alpha, l, x),
                HierarchyModel::RadialCoulomb => coulomb::potential(l, x),
            })
            .collect())
    }

    /// Bound energy of label n. The second argument documents (and lets tests
    /// assert) ℓ-independence: the value never reads it.
    #[must_use]
    pub fn energy(&self, n: Q, _l: Q) -> f64 {
        match self {
            HierarchyModel::RadialOscillator => oscillator::energy(n),
            HierarchyModel::Morse { alpha } => morse::energy(*alpha, n),
            HierarchyModel::RadialCoulomb => coulomb::energy(n),
        }
    }

    /// Raising label map of pair `i`.
    pub fn step(&self, i: u8, qn: QuantumNumbers) -> Result<QuantumNumbers> {
        check_pair(i)?;
        Ok(match self {
            HierarchyModel::RadialOscillator => oscillator::step(i, qn),
            HierarchyModel::Morse { .. } => morse::step(i, qn),
            HierarchyModel::RadialCoulomb => coulomb::step(i, qn),
        })
    }

    /// Lowering label map of pair `i` (exact inverse of [`Self::step`]).
    pub fn down(&self, i: u8, qn: QuantumNumbers) -> Result<QuantumNumbers> {
        check_pair(i)?;
        Ok(match self {
            HierarchyModel::RadialOscillator => oscillator::down(i, qn),
            HierarchyModel::Morse { .. } => morse::down(i, qn),
            HierarchyModel::RadialCoulomb => coulomb::down(i, qn),
        })
    }

    /// Factorization constant φ_i(n, ℓ).
    pub fn phi(&self, i: u8, n: Q, l: Q) -> Result<f64> {
        check_pair(i)?;
        Ok(match self {
            HierarchyModel::RadialOscillator => oscillator::phi(i, n, l),
            HierarchyModel::Morse { .. } => morse::phi(i, n, l),
            HierarchyModel::RadialCoulomb => coulomb::phi(i, n, l),
        })
    }

    /// Position factor h(n, ℓ; x) of the refined identity.
    #[must_use]
    pub fn h_factor(&self, n: Q, _l: Q) -> Coefficient {
        match self {
            HierarchyModel::RadialOscillator => oscillator::h_factor(),
            HierarchyModel::Morse { alpha } => morse::h_factor(*alpha),
            HierarchyModel::RadialCoulomb => coulomb::h_factor(n),
        }
    }

    /// Ladder-up chain `A^i_{(n,ℓ)}`.
    pub fn chain_a(&self, i: u8, n: Q, l: Q) -> Result<OperatorChain> {
        check_pair(i)?;
        match self {
            HierarchyModel::RadialOscillator => Ok(oscillator::chain_a(i, n, l)),
            HierarchyModel::Morse { alpha } => Ok(morse::chain_a(*alpha, i, n, l)),
            HierarchyModel::RadialCoulomb => coulomb::chain_a(i, n, l),
        }
    }

    /// Ladder-down chain `B^i_{(n,ℓ)}` (maps the `step` point back to `(n,ℓ)`).
    pub fn chain_b(&self, i: u8, n: Q, l: Q) -> Result<OperatorChain> {
        check_pair(i)?;
        match self {
            HierarchyModel::RadialOscillator => Ok(oscillator::chain_b(i, n, l)),
            HierarchyModel::Morse { alpha } => Ok(morse::chain_b(*alpha, i, n, l)),
            HierarchyModel::RadialCoulomb => coulomb::chain_b(i, n, l),
        }
    }

    /// Full refined-pair bundle at one lattice point.
    pub fn refined_pair(&self, i: u8, n: Q, l: Q) -> Result<RefinedPair> {
        Ok(RefinedPair {
            a: self.chain_a(i, n, l)?,
            b: self.chain_b(i, n, l)?,
            phi: self.phi(i, n, l)?,
            h: self.h_factor(n, l),
            step: self.step(i, QuantumNumbers::new(n, l))?,
        })
    }

    /// Unnormalized closed-form channel ground state sampled on a grid.
    pub fn ground_values(&self, l: Q, grid: &Grid) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        match self {
            HierarchyModel::RadialOscillator => Ok(oscillator::ground(l, grid.x())),
            HierarchyModel::Morse { alpha } => {
                if l <= qint(0) {
                    return Err(LadderError::Lattice(format!(
                        "Morse channel l={} holds no normalizable ground state",
                        fmt_q(l)
                    )));
                }
                Ok(morse::ground(*alpha, l, grid.x()))
            }
            HierarchyModel::RadialCoulomb => {
                if 2 * *l.numer() <= -*l.denom() {
                    return Err(LadderError::Lattice(format!(
                        "Coulomb ground state requires l > -1/2, got {}",
                        fmt_q(l)
                    )));
                }
                Ok(coulomb::ground(l, grid.x()))
            }
        }
    }

    /// First-order annihilator of the channel-ℓ ground state.
    pub fn annihilator(&self, l: Q) -> Result<OperatorChain> {
        match self {
            HierarchyModel::RadialOscillator => Ok(oscillator::annihilator(l)),
            HierarchyModel::Morse { alpha } => Ok(morse::annihilator(*alpha, l)),
            HierarchyModel::RadialCoulomb => {
                if 2 * *l.numer() == -*l.denom() {
                    return Err(LadderError::Domain(
                        "Coulomb annihilator undefined at l = -1/2".into(),
                    ));
                }
                Ok(coulomb::annihilator(l))
            }
        }
    }

    /// Conventional one-parameter ladder pair. For the oscillator this is the
    /// case-(a) pair; [`Self::conventional_case_b`] exposes the other branch.
    /// For Morse the argument is the primed label ℓ′ laddering `H^{2ℓ′}`.
    pub fn conventional(&self, l: Q) -> Result<ConventionalPair> {
        match self {
            HierarchyModel::RadialOscillator => {
                let (plus, minus, q) = oscillator::conventional_a(l);
                Ok(ConventionalPair { plus, minus, q })
            }
            HierarchyModel::Morse { alpha } => {
                let (plus, minus, q) = morse::conventional(*alpha, l);
                Ok(ConventionalPair { plus, minus, q })
            }
            HierarchyModel::RadialCoulomb => {
                if 2 * *l.numer() == -*l.denom() {
                    return Err(LadderError::Domain(
                        "Coulomb conventional pair undefined at l = -1/2".into(),
                    ));
                }
                let (plus, minus, q) = coulomb::conventional(l);
                Ok(ConventionalPair { plus, minus, q })
            }
        }
    }

    /// Oscillator case-(b) conventional pair (other families have one branch).
    pub fn conventional_case_b(&self, l: Q) -> Result<ConventionalPair> {
        match self {
            HierarchyModel::RadialOscillator => {
                let (plus, minus, q) = oscillator::conventional_b(l);
                Ok(ConventionalPair { plus, minus, q })
            }
            _ => Err(LadderError::Domain(format!(
                "{} has a single conventional branch",
                self.id()
            ))),
        }
    }

    /// Constant under which the conventional factorization closes, in the sign
    /// used by coefficient formulas (`|c| = √(q(ℓ) − q(n))`). Coulomb returns
    /// `+1/(ℓ+1/2)²` here while [`Self::conventional`] reports the tabulated
    /// negative form.
    pub fn factorization_q(&self, l: Q) -> Result<f64> {
        match self {
            HierarchyModel::RadialOscillator => Ok(oscillator::conventional_a(l).2),
            HierarchyModel::Morse { alpha } => Ok(morse::conventional(*alpha, l).2),
            HierarchyModel::RadialCoulomb => {
                if 2 * *l.numer() == -*l.denom() {
                    return Err(LadderError::Domain(
                        "Coulomb q undefined at l = -1/2".into(),
                    ));
                }
                Ok(coulomb::factorization_q(l))
            }
        }
    }

    /// Coulomb level-scaling factor `c_n`; other families have none.
    pub fn scaling_factor(&self, n: Q) -> Option<f64> {
        match self {
            HierarchyModel::RadialCoulomb => Some(coulomb::c_factor(n)),
            _ => None,
        }
    }

    /// Quadratic composite moving `(n, ℓ)` a whole unit (two half-units for
    /// Coulomb ℓ-moves collapse to one). Labels refer to the consumed state.
    pub fn quadratic(&self, kind: QuadraticKind, n: Q, l: Q) -> Result<QuadraticComposite> {
        let src = QuantumNumbers::new(n, l);
        let one = qint(1);
        let two = qint(2);
        let build = |outer: OperatorChain, inner: OperatorChain, target: QuantumNumbers| {
            QuadraticComposite {
                chain: outer.compose(&inner),
                source: src,
                target,
            }
        };
        let kind = match kind {
            QuadraticKind::EnergyPreserving => QuadraticKind::RaiseL,
            k => k,
        };
        match self {
            HierarchyModel::RadialOscillator => match kind {
                QuadraticKind::RaiseN => {
                    let mid = self.step(2, src)?;
                    Ok(build(
                        self.chain_a(1, mid.n, mid.l)?,
                        self.chain_a(2, n, l)?,
                        QuantumNumbers::new(n + two, l),
                    ))
                }
                QuadraticKind::LowerN => Ok(build(
                    self.chain_b(1, n - two, l)?,
                    self.chain_b(2, n - one, l + one)?,
                    QuantumNumbers::new(n - two, l),
                )),
                QuadraticKind::RaiseL => Ok(build(
                    self.chain_a(1, n - one, l + one)?,
                    self.chain_b(2, n - one, l + one)?,
                    QuantumNumbers::new(n, l + two),
                )),
                QuadraticKind::LowerL => Ok(build(
                    self.chain_a(2, n - one, l - one)?,
                    self.chain_b(1, n - one, l - one)?,
                    QuantumNumbers::new(n, l - two),
                )),
                QuadraticKind::EnergyPreserving => unreachable!(),
            },
            HierarchyModel::Morse { .. } => match kind {
                QuadraticKind::RaiseL => Ok(build(
                    self.chain_a(1, n - one, l + one)?,
                    self.chain_a(2, n, l)?,
                    QuantumNumbers::new(n, l + two),
                )),
                QuadraticKind::LowerL => Ok(build(
                    self.chain_b(1, n, l - two)?,
                    self.chain_b(2, n + one, l - one)?,
                    QuantumNumbers::new(n, l - two),
                )),
                QuadraticKind::RaiseN => Ok(build(
                    self.chain_a(1, n + one, l - one)?,
                    self.chain_b(2, n + one, l - one)?,
                    QuantumNumbers::new(n + two, l),
                )),
                QuadraticKind::LowerN => Ok(build(
                    self.chain_a(2, n - one, l - one)?,
                    self.chain_b(1, n - one, l - one)?,
                    QuantumNumbers::new(n - two, l),
                )),
                QuadraticKind::EnergyPreserving => unreachable!(),
            },
            HierarchyModel::RadialCoulomb => {
                let half = crate::qn::qr(1, 2);
                match kind {
                    QuadraticKind::RaiseL => Ok(build(
                        self.chain_b(2, n, l + one)?,
                        self.chain_a(1, n, l)?,
                        QuantumNumbers::new(n, l + one),
                    )),
                    QuadraticKind::LowerL => Ok(build(
                        self.chain_b(1, n, l - one)?,
                        self.chain_a(2, n, l)?,
                        QuantumNumbers::new(n, l - one),
                    )),
                    QuadraticKind::RaiseN => Ok(build(
                        self.chain_a(1, n + half, l - half)?,
                        self.chain_a(2, n, l)?,
                        QuantumNumbers::new(n + one, l),
                    )),
                    QuadraticKind::LowerN => Ok(build(
                        self.chain_b(2, n - one, l)?,
                        self.chain_b(1, n - half, l - half)?,
                        QuantumNumbers::new(n - one, l),
                    )),
                    QuadraticKind::EnergyPreserving => unreachable!(),
                }
            }
        }
    }

    /// Apply the channel Hamiltonian `H^ℓ = −d²/dx² + V^ℓ`.
    pub fn hamiltonian_apply(&self, l: Q, f: &Wavefunction) -> Result<Wavefunction> {
        self.check_grid(&f.grid)?;
        let v = self.potential_values(l, &f.grid)?;
        let dd = d2(&f.grid, &f.values);
        let values = (0..f.values.len())
            .map(|i| -dd[i] + v[i] * f.values[i])
            .collect();
        Ok(Wavefunction {
            grid: f.grid.clone(),
            values,
            labels: None,
            model: Some(self.id()),
        })
    }

    /// Bound-state labels with `n ≤ n_max` (0 ≤ n_max ≤ 12).
    pub fn lattice(&self, n_max: i64) -> Result<Vec<QuantumNumbers>> {
        if !(0..=LATTICE_N_MAX).contains(&n_max) {
            return Err(LadderError::Domain(format!(
                "n_max must lie in 0..={LATTICE_N_MAX}, got {n_max}"
            )));
        }
        Ok(match self {
            HierarchyModel::RadialOscillator => oscillator::lattice(n_max),
            HierarchyModel::Morse { .. } => morse::lattice(n_max),
            HierarchyModel::RadialCoulomb => coulomb::lattice(n_max),
        })
    }

    /// The k lowest bound labels of channel ℓ, ordered by increasing energy.
    /// Morse channels hold finitely many levels; requesting more errors out.
    pub fn spectrum_levels(&self, l: Q, k: usize) -> Result<Vec<Q>> {
        if !is_integer(l) {
            return Err(LadderError::Lattice(format!(
                "spectrum enumeration expects an integer channel, got l={}",
                fmt_q(l)
            )));
        }
        let li = *l.numer();
        match self {
            HierarchyModel::RadialOscillator | HierarchyModel::RadialCoulomb => {
                if li < 0 {
                    return Err(LadderError::Lattice(format!(
                        "channel l={li} is not on the physical lattice"
                    )));
                }
                let stride = if matches!(self, HierarchyModel::RadialOscillator) {
                    2
                } else {
                    1
                };
                Ok((0..k as i64).map(|j| qint(li + stride * j)).collect())
            }
            HierarchyModel::Morse { .. } => {
                let mut ns = Vec::new();
                let mut n = li;
                while n >= 1 {
                    ns.push(qint(n));
                    n -= 2;
                }
                if ns.is_empty() {
                    return Err(LadderError::Lattice(format!(
                        "Morse channel l={li} holds no bound states"
                    )));
                }
                if k > ns.len() {
                    return Err(LadderError::Lattice(format!(
                        "Morse channel l={li} holds only {} bound states, requested {k}",
                        ns.len()
                    )));
                }
                ns.truncate(k);
                Ok(ns)
            }
        }
    }

    /// True for labels of normalizable physical bound states.
    #[must_use]
    pub fn is_physical(&self, qn: QuantumNumbers) -> bool {
        match self {
            HierarchyModel::RadialOscillator => oscillator::is_physical(qn),
            HierarchyModel::Morse { .. } => morse::is_physical(qn),
            HierarchyModel::RadialCoulomb => coulomb::is_physical(qn),
        }
    }

    /// Coulomb half-step lattice members (flagged non-physical); false for
    /// the other families.
    #[must_use]
    pub fn is_half_step(&self, qn: QuantumNumbers) -> bool {
        match self {
            HierarchyModel::RadialCoulomb => coulomb::is_half_step(qn),
            _ => false,
        }
    }

    /// Morse labels reachable by the algebra including the non-normalizable
    /// `n = 0` line; equals [`Self::is_physical`] elsewhere.
    #[must_use]
    pub fn is_representable(&self, qn: QuantumNumbers) -> bool {
        match self {
            HierarchyModel::Morse { .. } => morse::is_representable(qn),
            _ => self.is_physical(qn) || self.is_half_step(qn),
        }
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.kind != self.domain_kind() {
            return Err(LadderError::Domain(format!(
                "{} needs a {} grid, got {}",
                self.id(),
                self.domain_kind(),
                grid.kind
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qn::{qr, QuantumNumbers as Qn};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn models() -> Vec<HierarchyModel> {
        vec![
            HierarchyModel::oscillator(),
            HierarchyModel::morse(1.0).unwrap(),
            HierarchyModel::coulomb(),
        ]
    }

    #[test]
    fn potential_values_match_tabulated_points() {
        let osc = HierarchyModel::oscillator();
        assert_relative_eq!(osc.potential(qint(0), 1.0).unwrap(), 0.75, epsilon = 1e-15);
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert_relative_eq!(mor.potential(qint(0), 0.0).unwrap(), -0.25, epsilon = 1e-15);
        let cou = HierarchyModel::coulomb();
        assert_relative_eq!(cou.potential(qint(1), 2.0).unwrap(), -0.8125, epsilon = 1e-15);
        assert!(osc.potential(qint(0), 0.0).is_err());
        assert!(cou.potential(qint(0), -1.0).is_err());
        assert!(mor.potential(qint(0), -3.0).is_ok());
    }

    #[test]
    fn centrifugal_term_is_even_in_l() {
        let osc = HierarchyModel::oscillator();
        for r in [0.3, 1.0, 2.5] {
            assert_eq!(
                osc.potential(qint(2), r).unwrap(),
                osc.potential(qint(-2), r).unwrap()
            );
        }
    }

    #[test]
    fn energies_match_tabulated_points_and_ignore_l() {
        let osc = HierarchyModel::oscillator();
        assert_eq!(osc.energy(qint(0), qint(0)), 2.0);
        let mor = HierarchyModel::morse(2.0).unwrap();
        assert_eq!(mor.energy(qint(3), qint(3)), -9.0);
        let cou = HierarchyModel::coulomb();
        assert_relative_eq!(cou.energy(qint(1), qint(0)), -4.0 / 9.0, epsilon = 1e-15);
        for m in models() {
            let e0 = m.energy(qint(3), qint(1));
            let e1 = m.energy(qint(3), qint(3));
            assert_eq!(e0, e1, "energy must not read the channel label");
        }
    }

    #[test]
    fn lattices_match_tabulated_sets() {
        let osc = HierarchyModel::oscillator();
        assert_eq!(
            osc.lattice(2).unwrap(),
            vec![Qn::ints(0, 0), Qn::ints(1, 1), Qn::ints(2, 0), Qn::ints(2, 2)]
        );
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert_eq!(
            mor.lattice(3).unwrap(),
            vec![Qn::ints(1, 1), Qn::ints(1, 3), Qn::ints(2, 2), Qn::ints(3, 3)]
        );
        let cou = HierarchyModel::coulomb();
        assert_eq!(
            cou.lattice(1).unwrap(),
            vec![Qn::ints(0, 0), Qn::ints(1, 0), Qn::ints(1, 1)]
        );
        assert!(osc.lattice(13).is_err());
        assert!(osc.lattice(-1).is_err());
        assert_eq!(mor.lattice(1).unwrap(), vec![Qn::ints(1, 1)]);
    }

    #[test]
    fn refined_pairs_carry_tabulated_bookkeeping() {
        let osc = HierarchyModel::oscillator();
        let p = osc.refined_pair(1, qint(0), qint(0)).unwrap();
        assert_eq!(p.phi, -1.0);
        assert_eq!(p.step, Qn::ints(1, 1));
        let mor = HierarchyModel::morse(1.0).unwrap();
        let p = mor.refined_pair(2, qint(3), qint(3)).unwrap();
        assert_eq!(p.phi, -1.0);
        assert_eq!(p.step, Qn::ints(2, 4));
        let cou = HierarchyModel::coulomb();
        let p = cou.refined_pair(1, qint(0), qint(0)).unwrap();
        assert_eq!(p.phi, -1.0);
        assert_eq!(p.step, Qn::new(qr(1, 2), qr(1, 2)));
        assert!(osc.refined_pair(3, qint(0), qint(0)).is_err());
    }

    #[test]
    fn coulomb_chains_carry_inverse_dilations_at_the_right_ends() {
        let cou = HierarchyModel::coulomb();
        let p = cou.refined_pair(1, qint(0), qint(0)).unwrap();
        // c_0 = 2: the raising chain applies D(1/2) last, the lowering chain
        // applies D(2) first.
        match p.a.atoms[0] {
            crate::operator::OperatorAtom::Dilation(mu) => {
                assert_relative_eq!(mu, 0.5, epsilon = 1e-15)
            }
            _ => panic!("raising chain must end with a dilation"),
        }
        match p.b.atoms[2] {
            crate::operator::OperatorAtom::Dilation(mu) => {
                assert_relative_eq!(mu, 2.0, epsilon = 1e-15)
            }
            _ => panic!("lowering chain must start with a dilation"),
        }
        assert!(cou.chain_a(1, qr(-1, 2), qr(-1, 2)).is_err());
        assert!(cou.quadratic(QuadraticKind::LowerN, qint(0), qint(0)).is_err());
    }

    #[test]
    fn h_factor_matches_tabulated_points() {
        let osc = HierarchyModel::oscillator();
        assert_eq!((osc.h_factor(qint(5), qint(1)))(3.7), -0.25);
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert_relative_eq!((mor.h_factor(qint(3), qint(3)))(0.0), -1.0, epsilon = 1e-15);
        let cou = HierarchyModel::coulomb();
        assert_relative_eq!((cou.h_factor(qint(1), qint(0)))(2.0), -1.5, epsilon = 1e-15);
    }

    #[test]
    fn conventional_constants_match_tabulated_points() {
        let cou = HierarchyModel::coulomb();
        assert_relative_eq!(cou.conventional(qint(0)).unwrap().q, -4.0, epsilon = 1e-15);
        assert_relative_eq!(cou.factorization_q(qint(0)).unwrap(), 4.0, epsilon = 1e-15);
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert_relative_eq!(mor.conventional(qint(2)).unwrap().q, 9.0, epsilon = 1e-15);
        let osc = HierarchyModel::oscillator();
        assert_relative_eq!(osc.conventional(qint(1)).unwrap().q, 2.0, epsilon = 1e-15);
        assert_relative_eq!(
            osc.conventional_case_b(qint(1)).unwrap().q,
            -6.0,
            epsilon = 1e-15
        );
        assert!(mor.conventional_case_b(qint(1)).is_err());
    }

    #[test]
    fn coulomb_factorization_q_decreases_in_l() {
        let cou = HierarchyModel::coulomb();
        for l in 0..=10i64 {
            let q0 = cou.factorization_q(qint(l)).unwrap();
            let q1 = cou.factorization_q(qint(l + 1)).unwrap();
            assert!(q1 < q0, "q must decrease: q({l})={q0}, q({})={q1}", l + 1);
        }
    }

    #[test]
    fn quadratic_composites_carry_label_bookkeeping() {
        let osc = HierarchyModel::oscillator();
        let q = osc.quadratic(QuadraticKind::RaiseN, qint(0), qint(0)).unwrap();
        assert_eq!(q.source, Qn::ints(0, 0));
        assert_eq!(q.target, Qn::ints(2, 0));
        assert_eq!(q.chain.differential_count(), 2);
        let mor = HierarchyModel::morse(1.0).unwrap();
        let q = mor.quadratic(QuadraticKind::RaiseL, qint(3), qint(3)).unwrap();
        assert_eq!(q.target, Qn::ints(3, 5));
        let cou = HierarchyModel::coulomb();
        let q = cou.quadratic(QuadraticKind::RaiseL, qint(1), qint(1)).unwrap();
        assert_eq!(q.target, Qn::ints(1, 2));
        let q = cou
            .quadratic(QuadraticKind::EnergyPreserving, qint(2), qint(1))
            .unwrap();
        assert_eq!(q.target, Qn::ints(2, 2));
        let q = cou.quadratic(QuadraticKind::LowerN, qint(2), qint(1)).unwrap();
        assert_eq!(q.target, Qn::ints(1, 1));
    }

    #[test]
    fn spectrum_levels_follow_each_family_rule() {
        let osc = HierarchyModel::oscillator();
        assert_eq!(osc.spectrum_levels(qint(1), 2).unwrap(), vec![qint(1), qint(3)]);
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert_eq!(
            mor.spectrum_levels(qint(5), 3).unwrap(),
            vec![qint(5), qint(3), qint(1)]
        );
        assert!(mor.spectrum_levels(qint(0), 1).is_err());
        assert!(mor.spectrum_levels(qint(3), 3).is_err());
        let cou = HierarchyModel::coulomb();
        assert_eq!(
            cou.spectrum_levels(qint(2), 3).unwrap(),
            vec![qint(2), qint(3), qint(4)]
        );
        assert!(cou.spectrum_levels(qint(-1), 1).is_err());
    }

    #[test]
    fn physical_and_flagged_labels_are_classified() {
        let cou = HierarchyModel::coulomb();
        assert!(cou.is_physical(Qn::ints(2, 1)));
        assert!(!cou.is_physical(Qn::new(qr(3, 2), qr(1, 2))));
        assert!(cou.is_half_step(Qn::new(qr(3, 2), qr(1, 2))));
        assert!(!cou.is_half_step(Qn::ints(2, 1)));
        let mor = HierarchyModel::morse(1.0).unwrap();
        assert!(mor.is_physical(Qn::ints(3, 5)));
        assert!(!mor.is_physical(Qn::ints(5, 3)));
        assert!(!mor.is_physical(Qn::ints(0, 2)));
        assert!(mor.is_representable(Qn::ints(0, 2)));
        let osc = HierarchyModel::oscillator();
        assert!(osc.is_physical(Qn::ints(2, 0)));
        assert!(!osc.is_physical(Qn::ints(2, 1)));
    }

    #[test]
    fn morse_width_is_validated() {
        assert!(HierarchyModel::morse(0.0).is_err());
        assert!(HierarchyModel::morse(-1.0).is_err());
        assert!(HierarchyModel::morse(f64::NAN).is_err());
    }

    #[test]
    fn negative_oscillator_channels_alias_their_reflection() {
        let osc = HierarchyModel::oscillator();
        let g = osc.grid_with_count(256).unwrap();
        let a = osc.ground_values(qint(2), &g).unwrap();
        let b = osc.ground_values(qint(-2), &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grounds_reject_empty_channels() {
        let mor = HierarchyModel::morse(1.0).unwrap();
        let g = mor.grid_with_count(64).unwrap();
        assert!(mor.ground_values(qint(0), &g).is_err());
        let cou = HierarchyModel::coulomb();
        let g = cou.grid_with_count(64).unwrap();
        assert!(cou.ground_values(qr(-1, 2), &g).is_err());
        assert!(cou.annihilator(qr(-1, 2)).is_err());
    }

    #[test]
    fn hamiltonian_rejects_mismatched_domains() {
        let osc = HierarchyModel::oscillator();
        let g = crate::grid::build_grid(DomainKind::FullLine, -8.0, 8.0, 64).unwrap();
        let f = crate::grid::Wavefunction::new(g, vec![1.0; 64]).unwrap();
        assert!(osc.hamiltonian_apply(qint(0), &f).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn step_and_down_are_exact_inverses(
            model_idx in 0usize..3,
            pair in 1u8..=2,
            n in -20i64..=20,
            twice_l in -20i64..=20,
        ) {
            let model = &models()[model_idx];
            // Coulomb exercises half-integer labels; others stay integral.
            let qn = if model.id() == ModelId::Coulomb {
                Qn::new(qint(n), qr(twice_l, 2))
            } else {
                Qn::new(qint(n), qint(twice_l))
            };
            let up = model.step(pair, qn).unwrap();
            prop_assert_eq!(model.down(pair, up).unwrap(), qn);
            let dn = model.down(pair, qn).unwrap();
            prop_assert_eq!(model.step(pair, dn).unwrap(), qn);
        }
    }
}

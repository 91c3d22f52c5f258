//! ladderlab: a numerical engine for refined ladder-operator factorizations
//! of three exactly solvable hierarchies — the radial oscillator, the Morse
//! well, and the radial Coulomb problem.
//!
//! Each hierarchy carries two first-order operator pairs `(A^i, B^i)` that
//! move simultaneously in the energy label `n` and the channel label `ℓ`,
//! satisfying a refined factorization
//!
//! ```text
//! h_{n,ℓ}(x) · [H^ℓ − E_n^ℓ] = B_{n,ℓ} A_{n,ℓ} − φ(n, ℓ)
//! ```
//!
//! with a label-dependent scalar function `h` and constant `φ`. The crate
//!
//! * builds the operator chains symbolically enough to compose, dilate, and
//!   apply them on a grid ([`operator`]);
//! * constructs bound states by walking the ladder up from closed-form
//!   ground states ([`ladder`]);
//! * diagonalizes the same Hamiltonians independently with a
//!   finite-difference tridiagonal eigensolver ([`oracle`]);
//! * measures every identity — factorizations, commutators, intertwinings,
//!   quadratic reductions, spectra — as a number with a pinned pass gate and
//!   emits a deterministic JSON report ([`verify`]).
//!
//! Nothing here trusts a formula it does not remeasure: the oracle knows
//! only the potentials, the ladder knows only the operators, and [`verify`]
//! confronts the two.
//!
//! # Quick start
//!
//! ```
//! use ladderlab::model::HierarchyModel;
//! use ladderlab::qn::qint;
//!
//! let model = HierarchyModel::oscillator();
//! let grid = model.default_grid().unwrap();
//! let built = ladderlab::ladder::build_state(&model, qint(3), qint(1), &grid).unwrap();
//! let residual = ladderlab::ladder::eigen_residual(&model, qint(3), qint(1), &built.psi).unwrap();
//! assert!(residual < 1e-4);
//! ```
//!
//! # Conventions
//!
//! Units are fixed by the dimensionless Hamiltonians: oscillator energies
//! are `E_n^ℓ = 2n + 2`, Morse energies `E_n = −(α²/4)n²`, Coulomb energies
//! `E_n = −1/(n + ½)²`. Quantum numbers are exact rationals ([`qn::Q`])
//! because the Coulomb pairs step in halves; all label bookkeeping is done
//! in exact arithmetic and only collapses to `f64` inside coefficients.
//!
//! # Execution model
//!
//! The verification suite fans out over a rayon pool when the `parallel`
//! feature (default) is enabled, and falls back to a plain loop otherwise or
//! when `LADDERLAB_THREADS=1`. Reports are byte-identical either way; see
//! [`par`].

pub mod error;
pub mod grid;
pub mod ladder;
pub mod model;
pub mod operator;
pub mod oracle;
pub mod par;
pub mod qn;
pub mod tolerances;
pub mod verify;

pub use error::{LadderError, Result};
pub use grid::{build_grid, DomainKind, Grid, Wavefunction};
pub use model::HierarchyModel;
pub use qn::{ModelId, QuantumNumbers, Q};
pub use verify::{run_suite, SuiteConfig, VerificationReport};

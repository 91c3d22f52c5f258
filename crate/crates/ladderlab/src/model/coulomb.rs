//! Radial Coulomb hierarchy.
//!
//! Channel potential `V^ℓ(r) = (2ℓ+1)(2ℓ−1)/(4r²) − 2/r` with bound energies
//! `E_n = −1/(n+1/2)²`, `n = ℓ, ℓ+1, ℓ+2, …`. Unlike the other two families
//! the refined pairs step by **halves**,
//!
//! * pair 1: `A¹: (n, ℓ) → (n+1/2, ℓ+1/2)`,
//! * pair 2: `A²: (n, ℓ) → (n+1/2, ℓ−1/2)`,
//!
//! so a single application lands on a half-integer channel. Those half-step
//! lattice points are first-class states of the algebra but are flagged
//! non-physical; two applications return to the integer lattice.
//!
//! Because the Coulomb problem has no natural length scale, each ladder
//! operator carries a *dilation*: raising chains end with `D(1/c_n)` (acting
//! last) and lowering chains start with `D(c_n)` (acting first), where
//! `c_n = (2n+2)/(2n+1)` rescales between the Bohr radii of adjacent levels.
//! The scalar `√(c_n)·√(2n+1)`-type factors keep the pairs mutually adjoint
//! up to sign. The factorization factor is `h = −(2n+1)·r/4`.

use crate::error::{LadderError, Result};
use crate::operator::{coef, const_coef, Coefficient, OperatorAtom, OperatorChain};
use crate::qn::{is_integer, qf, qr, Q, QuantumNumbers};

pub(super) fn potential(l: Q, x: f64) -> f64 {
    let lf = qf(l);
    (2.0 * lf + 1.0) * (2.0 * lf - 1.0) / (4.0 * x * x) - 2.0 / x
}

pub(super) fn energy(n: Q) -> f64 {
    let nf = qf(n);
    -1.0 / ((nf + 0.5) * (nf + 0.5))
}

/// Level-scaling factor `c_n = (2n+2)/(2n+1)`.
pub(super) fn c_factor(n: Q) -> f64 {
    (2.0 * qf(n) + 2.0) / (2.0 * qf(n) + 1.0)
}

pub(super) fn step(i: u8, qn: QuantumNumbers) -> QuantumNumbers {
    let half = qr(1, 2);
    if i == 1 {
        QuantumNumbers::new(qn.n + half, qn.l + half)
    } else {
        QuantumNumbers::new(qn.n + half, qn.l - half)
    }
}

pub(super) fn down(i: u8, qn: QuantumNumbers) -> QuantumNumbers {
    let half = qr(1, 2);
    if i == 1 {
        QuantumNumbers::new(qn.n - half, qn.l - half)
    } else {
        QuantumNumbers::new(qn.n - half, qn.l + half)
    }
}

pub(super) fn phi(i: u8, n: Q, l: Q) -> f64 {
    if i == 1 {
        -(qf(l) + qf(n) + 1.0)
    } else {
        qf(l) - qf(n) - 1.0
    }
}

pub(super) fn h_factor(n: Q) -> Coefficient {
    let nf = qf(n);
    coef(move |x| -(2.0 * nf + 1.0) * x / 4.0)
}

fn check_level(n: Q) -> Result<()> {
    if n <= qr(-1, 2) {
        return Err(LadderError::Domain(format!(
            "Coulomb chains are undefined at n = {} (need n > -1/2)",
            crate::qn::fmt_q(n)
        )));
    }
    Ok(())
}

pub(super) fn chain_a(i: u8, n: Q, l: Q) -> Result<OperatorChain> {
    check_level(n)?;
    let nf = qf(n);
    let lf = qf(l);
    let c = c_factor(n);
    let s = (2.0 * nf + 1.0).sqrt();
    let b: Coefficient = if i == 1 {
        coef(move |x: f64| -x.sqrt() / (2.0 * nf + 1.0) - (2.0 * lf + 1.0) / (4.0 * x.sqrt()))
    } else {
        coef(move |x: f64| -x.sqrt() / (2.0 * nf + 1.0) + (2.0 * lf - 1.0) / (4.0 * x.sqrt()))
    };
    Ok(OperatorChain::new(
        format!("A{i}{}", QuantumNumbers::new(n, l)),
        vec![
            OperatorAtom::Dilation(1.0 / c),
            OperatorAtom::Scalar(const_coef(c.sqrt() * s)),
            OperatorAtom::Differential {
                a: coef(|x: f64| x.sqrt() / 2.0),
                b,
            },
        ],
    ))
}

pub(super) fn chain_b(i: u8, n: Q, l: Q) -> Result<OperatorChain> {
    check_level(n)?;
    let nf = qf(n);
    let lf = qf(l);
    let c = c_factor(n);
    let s = (2.0 * nf + 1.0).sqrt();
    let b: Coefficient = if i == 1 {
        coef(move |x: f64| x.sqrt() / (2.0 * nf + 1.0) + lf / (2.0 * x.sqrt()))
    } else {
        coef(move |x: f64| x.sqrt() / (2.0 * nf + 1.0) - lf / (2.0 * x.sqrt()))
    };
    Ok(OperatorChain::new(
        format!("B{i}{}", QuantumNumbers::new(n, l)),
        vec![
            OperatorAtom::Differential {
                a: coef(|x: f64| x.sqrt() / 2.0),
                b,
            },
            OperatorAtom::Scalar(const_coef(s / c.sqrt())),
            OperatorAtom::Dilation(c),
        ],
    ))
}

/// Unnormalized channel ground state `r^{ℓ+1/2} e^{−r/(ℓ+1/2)}`; needs
/// ℓ > −1/2 for normalizability at the origin.
pub(super) fn ground(l: Q, x: &[f64]) -> Vec<f64> {
    let lf = qf(l);
    x.iter()
        .map(|&r| r.powf(lf + 0.5) * (-r / (lf + 0.5)).exp())
        .collect()
}

/// First-order annihilator `d/dr − (2ℓ+1)/(2r) + 2/(2ℓ+1)`.
pub(super) fn annihilator(l: Q) -> OperatorChain {
    let lf = qf(l);
    OperatorChain::new(
        format!("X-[coulomb l={}]", crate::qn::fmt_q(l)),
        vec![OperatorAtom::Differential {
            a: const_coef(1.0),
            b: coef(move |x| -(2.0 * lf + 1.0) / (2.0 * x) + 2.0 / (2.0 * lf + 1.0)),
        }],
    )
}

/// Conventional pair `X^± = ∓d/dr + w`, `w = −(2ℓ+1)/(2r) + 2/(2ℓ+1)`.
///
/// Returns the constant in the tabulated form `q(ℓ) = −1/(ℓ+1/2)²`; note that
/// the factorization algebra itself closes with the opposite sign — see
/// [`factorization_q`] — and all coefficient formulas in this crate use that
/// positive variant.
pub(super) fn conventional(l: Q) -> (OperatorChain, OperatorChain, f64) {
    let lf = qf(l);
    let w = move |x: f64| -(2.0 * lf + 1.0) / (2.0 * x) + 2.0 / (2.0 * lf + 1.0);
    let plus = OperatorChain::new(
        format!("X+[coulomb l={}]", crate::qn::fmt_q(l)),
        vec![OperatorAtom::Differential {
            a: const_coef(-1.0),
            b: coef(w),
        }],
    );
    let minus = OperatorChain::new(
        format!("X-[coulomb l={}]", crate::qn::fmt_q(l)),
        vec![OperatorAtom::Differential {
            a: const_coef(1.0),
            b: coef(w),
        }],
    );
    (plus, minus, -1.0 / ((lf + 0.5) * (lf + 0.5)))
}

/// The sign under which the conventional factorization actually closes:
/// `X⁺X⁻ = H + q` with `q(ℓ) = +1/(ℓ+1/2)²`, strictly decreasing in ℓ, and
/// ladder coefficients `|c| = √(q(ℓ) − q(n))`.
pub(super) fn factorization_q(l: Q) -> f64 {
    let lf = qf(l);
    1.0 / ((lf + 0.5) * (lf + 0.5))
}

pub(super) fn is_physical(qn: QuantumNumbers) -> bool {
    if !qn.is_integral() {
        return false;
    }
    let (n, l) = (*qn.n.numer(), *qn.l.numer());
    l >= 0 && n >= l
}

/// Half-step lattice members: both labels odd multiples of 1/2 with
/// 0 < ℓ ≤ n and n − ℓ an integer. Algebraically complete, physically flagged.
pub(super) fn is_half_step(qn: QuantumNumbers) -> bool {
    if is_integer(qn.n) || is_integer(qn.l) {
        return false;
    }
    if *qn.n.denom() != 2 || *qn.l.denom() != 2 {
        return false;
    }
    qn.l > qr(-1, 2) && qn.n >= qn.l && is_integer(qn.n - qn.l)
}

pub(super) fn lattice(n_max: i64) -> Vec<QuantumNumbers> {
    let mut pts = Vec::new();
    for n in 0..=n_max {
        for l in 0..=n {
            pts.push(QuantumNumbers::ints(n, l));
        }
    }
    pts
}

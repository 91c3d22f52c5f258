//! Radial oscillator hierarchy.
//!
//! Channel potential `V^ℓ(r) = r² + (2ℓ+1)(2ℓ−1)/(4r²)` on the half line with
//! bound energies `E_n = 2n + 2`, `n = ℓ, ℓ+2, ℓ+4, …`. Both refined pairs
//! shift the labels diagonally,
//!
//! * pair 1: `A¹: (n, ℓ) → (n+1, ℓ+1)`,
//! * pair 2: `A²: (n, ℓ) → (n+1, ℓ−1)`,
//!
//! and the factorization constant `h` is the pure number −1/4. The centrifugal
//! combination `(2ℓ+1)(2ℓ−1) = 4ℓ² − 1` is even in ℓ, so channels extend to
//! negative ℓ with `ψ^{−ℓ} ≡ ψ^{ℓ}`; ground-state and spectrum lookups reflect
//! ℓ to |ℓ| while operator coefficients keep the signed label.

use crate::operator::{coef, const_coef, Coefficient, OperatorAtom, OperatorChain};
use crate::qn::{qf, qint, Q, QuantumNumbers};

pub(super) fn potential(l: Q, x: f64) -> f64 {
    let lf = qf(l);
    x * x + (2.0 * lf + 1.0) * (2.0 * lf - 1.0) / (4.0 * x * x)
}

pub(super) fn energy(n: Q) -> f64 {
    2.0 * qf(n) + 2.0
}

pub(super) fn step(i: u8, qn: QuantumNumbers) -> QuantumNumbers {
    let one = qint(1);
    if i == 1 {
        QuantumNumbers::new(qn.n + one, qn.l + one)
    } else {
        QuantumNumbers::new(qn.n + one, qn.l - one)
    }
}

pub(super) fn down(i: u8, qn: QuantumNumbers) -> QuantumNumbers {
    let one = qint(1);
    if i == 1 {
        QuantumNumbers::new(qn.n - one, qn.l - one)
    } else {
        QuantumNumbers::new(qn.n - one, qn.l + one)
    }
}

pub(super) fn phi(i: u8, n: Q, l: Q) -> f64 {
    if i == 1 {
        -(qf(n) + qf(l) + 2.0) / 2.0
    } else {
        -(qf(n) - qf(l) + 2.0) / 2.0
    }
}

pub(super) fn h_factor() -> Coefficient {
    const_coef(-0.25)
}

fn pair_constant(i: u8, l: Q) -> f64 {
    if i == 1 {
        qf(l) + 0.5
    } else {
        -(qf(l) - 0.5)
    }
}

pub(super) fn chain_a(i: u8, n: Q, l: Q) -> OperatorChain {
    let c = pair_constant(i, l);
    OperatorChain::new(
        format!("A{i}{}", QuantumNumbers::new(n, l)),
        vec![OperatorAtom::Differential {
            a: const_coef(0.5),
            b: coef(move |x| 0.5 * (-x - c / x)),
        }],
    )
}

pub(super) fn chain_b(i: u8, n: Q, l: Q) -> OperatorChain {
    let c = pair_constant(i, l);
    OperatorChain::new(
        format!("B{i}{}", QuantumNumbers::new(n, l)),
        vec![OperatorAtom::Differential {
            a: const_coef(0.5),
            b: coef(move |x| 0.5 * (x + c / x)),
        }],
    )
}

/// Unnormalized channel ground state `r^{|ℓ|+1/2} e^{−r²/2}` (ℓ reflected).
pub(super) fn ground(l: Q, x: &[f64]) -> Vec<f64> {
    let lf = qf(l).abs();
    x.iter()
        .map(|&r| r.powf(lf + 0.5) * (-r * r / 2.0).exp())
        .collect()
}

/// First-order annihilator of the channel ground state:
/// `d/dr + r − (ℓ+1/2)/r` kills `r^{ℓ+1/2} e^{−r²/2}` identically.
pub(super) fn annihilator(l: Q) -> OperatorChain {
    let lf = qf(l);
    OperatorChain::new(
        format!("X-[osc l={}]", crate::qn::fmt_q(l)),
        vec![OperatorAtom::Differential {
            a: const_coef(1.0),
            b: coef(move |x| x - (lf + 0.5) / x),
        }],
    )
}

/// Case (a) conventional pair: `X⁺_ℓ = −2B¹_{·,ℓ}`, `X⁻_ℓ = 2A¹_{·,ℓ}`,
/// factorization constant `q(ℓ) = 4ℓ − 2`. Ladders the shifted hierarchy
/// `H_x^ℓ = H^{|ℓ|} − 2ℓ` across unit steps in ℓ.
pub(super) fn conventional_a(l: Q) -> (OperatorChain, OperatorChain, f64) {
    let plus = chain_b(1, qint(0), l).scaled(-2.0);
    let minus = chain_a(1, qint(0), l).scaled(2.0);
    (plus, minus, 4.0 * qf(l) - 2.0)
}

/// Case (b) conventional pair: `Z⁺_ℓ = −2A²_{·,ℓ+1}`, `Z⁻_ℓ = 2B²_{·,ℓ+1}`,
/// `q(ℓ) = −4ℓ − 2`, laddering `H_z^ℓ = H^ℓ + 2ℓ`.
pub(super) fn conventional_b(l: Q) -> (OperatorChain, OperatorChain, f64) {
    let plus = chain_a(2, qint(0), l + qint(1)).scaled(-2.0);
    let minus = chain_b(2, qint(0), l + qint(1)).scaled(2.0);
    (plus, minus, -4.0 * qf(l) - 2.0)
}

pub(super) fn is_physical(qn: QuantumNumbers) -> bool {
    if !qn.is_integral() {
        return false;
    }
    let (n, l) = (*qn.n.numer(), *qn.l.numer());
    l >= 0 && n >= l && (n - l) % 2 == 0
}

pub(super) fn lattice(n_max: i64) -> Vec<QuantumNumbers> {
    let mut pts = Vec::new();
    for n in 0..=n_max {
        for l in 0..=n {
            if (n - l) % 2 == 0 {
                pts.push(QuantumNumbers::ints(n, l));
            }
        }
    }
    pts
}

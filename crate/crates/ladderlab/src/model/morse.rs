//! Morse hierarchy on the full line.
//!
//! Channel potential `V^ℓ(x) = (α/2)² (e^{2αx} − 2(ℓ+1) e^{αx})` with bound
//! energies `E_n = −(α²/4) n²` for `n = ℓ, ℓ−2, … > 0`: the ℓ-channel holds
//! finitely many levels and the `n = 0` label, while representable by the
//! operator algebra, is not normalizable and is excluded from the physical
//! lattice. The refined pairs move anti-diagonally,
//!
//! * pair 1: `A¹: (n, ℓ) → (n+1, ℓ+1)`,
//! * pair 2: `A²: (n, ℓ) → (n−1, ℓ+1)`,
//!
//! and the factorization factor is position dependent, `h = −e^{−αx}/α²`.

use crate::operator::{coef, Coefficient, OperatorAtom, OperatorChain};
use crate::qn::{qf, qint, Q, QuantumNumbers};

pub(super) fn potential(alpha: f64, l: Q, x: f64) -> f64 {
    let lf = qf(l);
    let half = alpha / 2.0;
    half * half * ((2.0 * alpha * x).exp() - 2.0 * (lf + 1.0) * (alpha * x).exp())
}

pub(super) fn energy(alpha: f64, n: Q) -> f64 {
    let nf = qf(n);
    -(alpha * alpha / 4.0) * nf * nf
}

pub(super) fn step(i: u8, qn: QuantumNumbers) -> QuantumNumbers {
    let one = qint(1);
    if i == 1 {
        QuantumNumbers::new(qn.n + one, qn.l + one)
    } else {
        QuantumNumbers::new(qn.n - one, qn.l + one)
    }
}

pub(super) fn down(i: u8, qn: QuantumNumbers) -> QuantumNumbers {
    let one = qint(1);
    if i == 1 {
        QuantumNumbers::new(qn.n - one, qn.l - one)
    } else {
        QuantumNumbers::new(qn.n + one, qn.l - one)
    }
}

pub(super) fn phi(i: u8, n: Q, l: Q) -> f64 {
    if i == 1 {
        -(qf(l) + qf(n) + 2.0) / 2.0
    } else {
        -(qf(l) - qf(n) + 2.0) / 2.0
    }
}

pub(super) fn h_factor(alpha: f64) -> Coefficient {
    coef(move |x| -(-alpha * x).exp() / (alpha * alpha))
}

pub(super) fn chain_a(alpha: f64, i: u8, n: Q, l: Q) -> OperatorChain {
    let cf = if i == 1 { -qf(n) / 2.0 } else { qf(n) / 2.0 };
    OperatorChain::new(
        format!("A{i}{}", QuantumNumbers::new(n, l)),
        vec![OperatorAtom::Differential {
            a: coef(move |x| (-alpha * x / 2.0).exp() / alpha),
            b: coef(move |x| {
                -0.5 * (alpha * x / 2.0).exp() + cf * (-alpha * x / 2.0).exp()
            }),
        }],
    )
}

pub(super) fn chain_b(alpha: f64, i: u8, n: Q, l: Q) -> OperatorChain {
    let cf = if i == 1 {
        (qf(n) + 1.0) / 2.0
    } else {
        -(qf(n) - 1.0) / 2.0
    };
    OperatorChain::new(
        format!("B{i}{}", QuantumNumbers::new(n, l)),
        vec![OperatorAtom::Differential {
            a: coef(move |x| (-alpha * x / 2.0).exp() / alpha),
            b: coef(move |x| {
                0.5 * (alpha * x / 2.0).exp() + cf * (-alpha * x / 2.0).exp()
            }),
        }],
    )
}

/// Unnormalized channel ground state `exp(ℓαx/2 − e^{αx}/2)`; only defined for
/// ℓ > 0 (the ℓ = 0 channel holds no bound states).
pub(super) fn ground(alpha: f64, l: Q, x: &[f64]) -> Vec<f64> {
    let lf = qf(l);
    x.iter()
        .map(|&t| (lf * alpha * t / 2.0 - (alpha * t).exp() / 2.0).exp())
        .collect()
}

/// First-order annihilator `d/dx + (α/2)(e^{αx} − ℓ)` of the channel ground.
pub(super) fn annihilator(alpha: f64, l: Q) -> OperatorChain {
    let lf = qf(l);
    OperatorChain::new(
        format!("X-[morse l={}]", crate::qn::fmt_q(l)),
        vec![OperatorAtom::Differential {
            a: crate::operator::const_coef(1.0),
            b: coef(move |x| (alpha / 2.0) * ((alpha * x).exp() - lf)),
        }],
    )
}

/// Conventional pair at *primed* label ℓ′ (the pair ladders `H^{2ℓ′}` in unit
/// steps of ℓ′): `X^± = ∓ d/dx + w`, `w = −(α/2)(e^{αx} − 2(ℓ′+1))`, with
/// `q(ℓ′) = α²(ℓ′+1)²`.
pub(super) fn conventional(alpha: f64, lp: Q) -> (OperatorChain, OperatorChain, f64) {
    let lpf = qf(lp);
    let w = move |x: f64| -(alpha / 2.0) * ((alpha * x).exp() - 2.0 * (lpf + 1.0));
    let plus = OperatorChain::new(
        format!("X+[morse l'={}]", crate::qn::fmt_q(lp)),
        vec![OperatorAtom::Differential {
            a: crate::operator::const_coef(-1.0),
            b: coef(w),
        }],
    );
    let minus = OperatorChain::new(
        format!("X-[morse l'={}]", crate::qn::fmt_q(lp)),
        vec![OperatorAtom::Differential {
            a: crate::operator::const_coef(1.0),
            b: coef(w),
        }],
    );
    let q = alpha * alpha * (lpf + 1.0) * (lpf + 1.0);
    (plus, minus, q)
}

pub(super) fn is_physical(qn: QuantumNumbers) -> bool {
    if !qn.is_integral() {
        return false;
    }
    let (n, l) = (*qn.n.numer(), *qn.l.numer());
    l >= 1 && n >= 1 && n <= l && (l - n) % 2 == 0
}

/// The `n = 0` label solves the algebra but is not square integrable.
pub(super) fn is_representable(qn: QuantumNumbers) -> bool {
    if !qn.is_integral() {
        return false;
    }
    let (n, l) = (*qn.n.numer(), *qn.l.numer());
    l >= 1 && n >= 0 && n <= l && (l - n) % 2 == 0
}

pub(super) fn lattice(n_max: i64) -> Vec<QuantumNumbers> {
    let mut pts = Vec::new();
    for l in 1..=n_max {
        let mut n = l;
        while n >= 1 {
            pts.push(QuantumNumbers::ints(n, l));
            n -= 2;
        }
    }
    pts.sort_by_key(|p| (*p.n.numer(), *p.l.numer()));
    pts
}

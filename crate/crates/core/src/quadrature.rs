//! Gauss–Legendre nodes on `[0, 1]` at arbitrary precision.

use rug::Float;

use crate::precision::PrecisionComplex;

/// `(node, weight)` pairs for `∫_0^1 f(u) du ≈ Σ w_i f(u_i)`.
pub fn gauss_legendre(n: usize, prec: u32) -> Vec<(PrecisionComplex, PrecisionComplex)> {
    assert!(n >= 1, "need at least one node");
    let work = prec + 32;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // Tricomi-style initial guess, refined by Newton
        let guess = ((i as f64 - 0.25) / (n as f64 + 0.5)) * std::f64::consts::PI;
        let mut x = Float::with_val(work, guess).cos();
        for _ in 0..200 {
            let (p, d) = legendre(n, &x);
            let dx = Float::with_val(work, &p / &d);
            x -= &dx;
            let converged = dx.is_zero() || dx.get_exp().is_some_and(|e| e < -(work as i32) + 4);
            if converged {
                break;
            }
        }
        let (_, dp) = legendre(n, &x);
        // w = 2 / ((1 - x^2) P'(x)^2), halved for [0, 1]
        let one_minus = Float::with_val(work, 1) - Float::with_val(work, &x * &x);
        let denom = one_minus * Float::with_val(work, &dp * &dp);
        let w = Float::with_val(work, 1) / denom;
        let node = (Float::with_val(work, 1) - &x) / 2u32;
        out.push((
            PrecisionComplex::from_rug(rug::Complex::with_val(prec, node)),
            PrecisionComplex::from_rug(rug::Complex::with_val(prec, w)),
        ));
    }
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let a = Float::with_val(prec, x * &p1) * (2 * k - 1);
        let b = Float::with_val(prec, &p0 * (k - 1));
        let p2 = (a - b) / k;
        p0 = p1;
        p1 = p2;
    }
    let (pn, pn1) = if n == 0 { (p0.clone(), p0) } else { (p1, p0) };
    let x2m1 = Float::with_val(prec, x * x) - 1u32;
    let d = Float::with_val(prec, x * &pn) - &pn1;
    let d = d * (n as u32) / x2m1;
    (pn, d)
}

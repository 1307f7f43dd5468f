use serde::Serialize;

use crate::combinatorics::{binomial_sum_le, binomial_u64, ln_big, ln_binomial_f64};
use crate::error::{Error, Result};

/// Largest lower-tail length summed exactly with big integers.
const EXACT_TAIL: u64 = 2000;
/// Largest lower-tail length summed term by term in floating point.
const FLOAT_TAIL: u64 = 10_000_000;

/// `ln sum_{i <= upto} C(n, i)`.
pub fn ln_binomial_sum_le(n: u64, upto: u64) -> f64 {
    if upto >= n {
        return n as f64 * std::f64::consts::LN_2;
    }
    if upto <= EXACT_TAIL {
        return ln_big(&binomial_sum_le(n, upto));
    }
    let top = upto.min(n / 2);
    let ln_top = ln_binomial_f64(n, top);
    if upto > FLOAT_TAIL {
        // every term is at most the central one
        return ln_top + ((upto + 1) as f64).ln();
    }
    // log-sum-exp over the terms, walking down from the largest one
    let mut sum = 0.0;
    let mut ln_term = 0.0;
    let mut i = top;
    while i > 0 {
        ln_term += (i as f64 / (n - i + 1) as f64).ln();
        sum += ln_term.exp();
        if ln_term < -60.0 {
            break;
        }
        i -= 1;
    }
    // terms above the centre mirror those below it
    let mirrored = upto - top;
    let mut tail = 0.0;
    let mut ln_up = 0.0;
    for j in 1..=mirrored {
        ln_up += ((n - top - j + 1) as f64 / (top + j) as f64).ln();
        tail += ln_up.exp();
        if ln_up < -60.0 {
            break;
        }
    }
    ln_top + (1.0 + sum + tail).ln()
}

fn floor_arg(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        x.floor() as u64
    }
}

/// Natural log of the explicit container-count bound for a
/// `(q, s)`-biregular graph with `|Y| = y_len`.
///
/// Real binomial arguments are floored.
#[allow(clippy::too_many_arguments)]
pub fn appendix_bound_ln(
    q: usize,
    s: usize,
    y_len: usize,
    a: usize,
    g: usize,
    phi: f64,
    psi: f64,
    big_c: f64,
    m_phi: f64,
) -> Result<f64> {
    check_domain(q as f64, s as f64, phi, psi, big_c)?;
    let (qf, sf, gf) = (q as f64, s as f64, g as f64);
    let t = gf * sf - a as f64 * qf;
    if t < 0.0 {
        return Err(Error::invalid(format!("t = gs - aq = {t} is negative")));
    }
    let ln_q = qf.ln();
    let ln_qs = (qf * sf).ln();
    let exponent = 54.0 * big_c * gf * ln_q * ln_qs / (phi * qf)
        + 54.0 * gf * ln_qs / qf.powf(big_c * m_phi / (phi * qf))
        + 54.0 * t * sf.ln() * ln_qs / (qf * (sf - phi));
    let gs = (g * s) as u64;
    let binomials = ln_binomial_sum_le(
        floor_arg(3.0 * big_c * gf * sf * ln_q / (phi * qf)),
        floor_arg(3.0 * big_c * t * ln_q / (phi * qf)),
    ) + ln_binomial_sum_le(gs, floor_arg(t / ((sf - phi) * psi)))
        + ln_binomial_sum_le(gs * q as u64, floor_arg(t / ((qf - psi) * psi)));
    Ok((y_len as f64).ln() + exponent + binomials)
}

fn check_domain(q: f64, s: f64, phi: f64, psi: f64, big_c: f64) -> Result<()> {
    if !(1.0..=s - 1.0).contains(&phi) {
        return Err(Error::invalid(format!("phi = {phi} outside [1, s-1]")));
    }
    if !(1.0..=q.min(s) - 1.0).contains(&psi) {
        return Err(Error::invalid(format!("psi = {psi} outside [1, min(q,s)-1]")));
    }
    if !(big_c > 0.0) || big_c * q.ln() / (phi * q) >= 1.0 {
        return Err(Error::invalid(format!("C = {big_c} violates 0 < C ln q/(phi q) < 1")));
    }
    Ok(())
}

/// Both container-count bounds for `H(2k+r, k, r)`, as natural logs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremBounds {
    pub d: u64,
    pub s: u64,
    #[serde(serialize_with = "crate::report::real12")]
    pub t: f64,
    #[serde(serialize_with = "crate::report::real12")]
    pub appendix_ln: f64,
    /// The layer specialization with the constant 54 in every `O` slot.
    #[serde(serialize_with = "crate::report::real12")]
    pub thm51_ln: f64,
}

/// Evaluates both bounds at `q = d = C(k+r-1, k-1)`, `s = C(k+r, r)` and
/// `t = (k+r)/k g d - a d`. `m_phi` is supplied by the caller.
#[allow(clippy::too_many_arguments)]
pub fn theorem_bounds(
    a: u64,
    g: u64,
    k: u32,
    r: u32,
    phi: f64,
    psi: f64,
    big_c: f64,
    m_phi: f64,
) -> Result<TheoremBounds> {
    if k < 2 || r < 1 {
        return Err(Error::invalid(format!("need k >= 2 and r >= 1, got k={k}, r={r}")));
    }
    let (k64, r64) = (u64::from(k), u64::from(r));
    let d = binomial_u64(k64 + r64 - 1, k64 - 1);
    let s = binomial_u64(k64 + r64, r64);
    let y_len = binomial_u64(2 * k64 + r64 - 1, k64 - 1);
    let appendix_ln = appendix_bound_ln(
        d as usize,
        s as usize,
        y_len as usize,
        a as usize,
        g as usize,
        phi,
        psi,
        big_c,
        m_phi,
    )?;
    if phi > d as f64 - 1.0 || psi > d as f64 - 1.0 {
        return Err(Error::invalid(format!("phi and psi must lie in [1, d-1] = [1, {}]", d - 1)));
    }
    let df = d as f64;
    let t = (k + r) as f64 / k as f64 * g as f64 * df - a as f64 * df;
    let ln_d = df.ln();
    let gf = g as f64;
    let thm51_ln = (y_len as f64).ln()
        + 54.0 * big_c * gf * ln_d * ln_d / (phi * df)
        + 54.0 * t * ln_d * ln_d / (df * (df - phi))
        + 54.0 * big_c * t * ln_d * ln_d / (phi * df)
        + 54.0 * t * ln_d / ((df - phi) * psi)
        + 54.0 * t * ln_d / ((df - psi) * psi);
    Ok(TheoremBounds {
        d,
        s,
        t,
        appendix_ln,
        thm51_ln,
    })
}

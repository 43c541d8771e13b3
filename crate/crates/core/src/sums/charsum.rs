//! Maxima of short sums Σ_{M≤n≤M+N} χ(n) of the real character mod q, with
//! N = ⌊q^θ⌋, over squarefree q in a range.
//!
//! For odd q, χ is the Jacobi symbol (·/q). For even q = 2q′ it is (·/q′)
//! times the principal character mod 2, which is again a real character mod q.
//! χ is evaluated through one table of quadratic residues per prime ℓ | q.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Series, SumError, SumReport, CHARSUM_MAX_Q};
use crate::arith::{factor_u64, squarefree_flags};
use crate::field_core::FieldConstants;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharsumParams {
    pub q_lo: u64,
    pub q_hi: u64,
    pub theta: f64,
    /// Stride between window starts; default max(1, ⌊N/4⌋).
    pub step: Option<u64>,
}

/// Result for one modulus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowMax {
    pub q: u64,
    pub n: u64,
    pub max_abs: i64,
}

fn residue_table(l: usize) -> Vec<i8> {
    let mut t = vec![-1i8; l];
    t[0] = 0;
    for x in 1..l.div_ceil(2) + 1 {
        t[x * x % l] = 1;
    }
    t
}

/// χ(n) for 0 ≤ n < q.
pub fn character_table(q: u64) -> Vec<i8> {
    let q = q as usize;
    let mut chi = vec![1i8; q];
    if q % 2 == 0 {
        for v in chi.iter_mut().step_by(2) {
            *v = 0;
        }
    }
    for (l, _) in factor_u64(q as u64).into_iter().filter(|&(l, _)| l > 2) {
        let l = l as usize;
        let tab = residue_table(l);
        let mut r = 0;
        for v in chi.iter_mut() {
            *v *= tab[r];
            r += 1;
            if r == l {
                r = 0;
            }
        }
    }
    chi
}

pub fn window_length(q: u64, theta: f64) -> u64 {
    ((q as f64).powf(theta).floor() as u64).max(1)
}

/// Max over starts M = 0, step, 2·step, … < q of |Σ_{M≤n≤M+N} χ(n)|.
pub fn window_max(q: u64, n: u64, step: u64) -> i64 {
    let chi = character_table(q);
    let len = q as usize + n as usize + 1;
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0i64);
    let mut acc = 0i64;
    for i in 0..len {
        acc += chi[i % q as usize] as i64;
        prefix.push(acc);
    }
    (0..q as usize)
        .step_by(step.max(1) as usize)
        .map(|m| (prefix[m + n as usize + 1] - prefix[m]).abs())
        .max()
        .unwrap_or(0)
}

/// Scan every squarefree q in [q_lo, q_hi] whose odd part exceeds 1.
pub fn charsum_scan(fc: &FieldConstants, params: CharsumParams) -> Result<SumReport, SumError> {
    let CharsumParams { q_lo, q_hi, theta, step } = params;
    if q_hi > CHARSUM_MAX_Q {
        return Err(SumError::Budget(format!("charsum_scan supports q <= {CHARSUM_MAX_Q}, got {q_hi}")));
    }
    if q_lo < 3 || q_lo > q_hi || !(theta > 0.0 && theta < 1.0) || step == Some(0) {
        return Err(SumError::InvalidParameter(format!("need 3 <= q_lo <= q_hi, 0 < theta < 1, step > 0; got {params:?}")));
    }
    let sf = squarefree_flags(q_lo, q_hi);
    let qs: Vec<u64> = (q_lo..=q_hi).filter(|&q| sf[(q - q_lo) as usize] && q != 2).collect();
    let results: Vec<WindowMax> = qs
        .par_iter()
        .map(|&q| {
            let n = window_length(q, theta);
            let st = step.unwrap_or((n / 4).max(1));
            WindowMax { q, n, max_abs: window_max(q, n, st) }
        })
        .collect();

    let mut rep = SumReport::new("charsum", fc, 0);
    rep.param("q_lo", q_lo);
    rep.param("q_hi", q_hi);
    rep.param("theta", theta);
    rep.param("step", step.map_or("max(1, N/4)".to_string(), |s| s.to_string()));
    let mut max_abs = Series::new("max_abs");
    let mut r18 = Series::new("ratio_q_1_8");
    let mut rpv = Series::new("ratio_pv");
    let mut rb = Series::new("ratio_burgess_r2");
    let (mut trivial, mut pv) = (true, true);
    let mut first_bad = None;
    for w in &results {
        let qf = w.q as f64;
        let m = w.max_abs as f64;
        let pv_bound = 3.0 * qf.sqrt() * qf.ln();
        trivial &= w.max_abs as u64 <= w.n + 1;
        if m > pv_bound {
            pv = false;
            first_bad.get_or_insert(w.q);
        }
        max_abs.push(w.q, m);
        r18.push(w.q, m / qf.powf(0.125));
        rpv.push(w.q, m / (qf.sqrt() * qf.ln()));
        // Burgess with r = 2: N^{1/2} q^{3/16}.
        rb.push(w.q, m / ((w.n as f64).sqrt() * qf.powf(3.0 / 16.0)));
    }
    rep.check("max <= N + 1 (trivial)", trivial, "window has N + 1 terms");
    rep.check("max <= 3 sqrt(q) log q (Polya-Vinogradov)", pv, first_bad.map_or("all q".to_string(), |q| format!("first failure q = {q}")));
    let envelope = envelope(&r18, 20);
    let peak = r18.values.iter().copied().fold(0.0, f64::max);
    rep.metric("modulus_count", results.len() as f64);
    rep.metric("max_ratio_q_1_8", peak);
    rep.metric("max_ratio_pv", rpv.values.iter().copied().fold(0.0, f64::max));
    rep.metric("max_ratio_burgess_r2", rb.values.iter().copied().fold(0.0, f64::max));
    rep.series = vec![max_abs, r18, rpv, rb, envelope];
    Ok(rep)
}

/// Running maximum of a series, sampled at `bins` log-spaced points.
fn envelope(s: &Series, bins: usize) -> Series {
    let mut out = Series::new("ratio_q_1_8_envelope");
    let (Some(&lo), Some(&hi)) = (s.checkpoints.first(), s.checkpoints.last()) else { return out };
    let (l0, l1) = ((lo as f64).ln(), (hi as f64).ln());
    let mut run = 0.0f64;
    let mut i = 0;
    for b in 1..=bins {
        let edge = if b == bins { hi } else { (l0 + (l1 - l0) * b as f64 / bins as f64).exp() as u64 };
        while i < s.checkpoints.len() && s.checkpoints[i] <= edge {
            run = run.max(s.values[i]);
            i += 1;
        }
        if out.checkpoints.last().map_or(true, |&c| c < edge) {
            out.push(edge, run);
        }
    }
    out
}

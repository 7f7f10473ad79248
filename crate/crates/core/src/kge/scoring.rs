//! Scoring functions on raw embedding rows and their gradients.
//!
//! ComplEx rows of width `2k` hold real parts in `[..k]` and imaginary parts
//! in `[k..]`.

/// `-||h + r - t||_p`
pub fn score_transe(h: &[f64], r: &[f64], t: &[f64], p: u8) -> f64 {
    debug_assert!(h.len() == r.len() && r.len() == t.len());
    if p == 1 {
        -lane_sum(h, r, t, |d| d.abs())
    } else {
        -lane_sum(h, r, t, |d| d * d).sqrt()
    }
}

/// `Σ f(h + r - t)` accumulated in four interleaved lanes.
#[inline(always)]
fn lane_sum(h: &[f64], r: &[f64], t: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = [0.0; 4];
    let n = h.len() / 4 * 4;
    for ((hc, rc), tc) in h[..n]
        .chunks_exact(4)
        .zip(r[..n].chunks_exact(4))
        .zip(t[..n].chunks_exact(4))
    {
        for l in 0..4 {
            acc[l] += f(hc[l] + rc[l] - tc[l]);
        }
    }
    let tail: f64 = (n..h.len()).map(|j| f(h[j] + r[j] - t[j])).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `Re(<h, r, conj(t)>)`
pub fn score_complex(h: &[f64], r: &[f64], t: &[f64]) -> f64 {
    let k = h.len() / 2;
    let (hr, hi) = h.split_at(k);
    let (rr, ri) = r.split_at(k);
    let (tr, ti) = t.split_at(k);
    (0..k)
        .map(|j| hr[j] * rr[j] * tr[j] + hi[j] * rr[j] * ti[j] + hr[j] * ri[j] * ti[j] - hi[j] * ri[j] * tr[j])
        .sum()
}

/// Write `coeff * ds/dx` for each of the three rows into `gh`, `gr`, `gt`.
#[allow(clippy::too_many_arguments)]
pub fn transe_grad(h: &[f64], r: &[f64], t: &[f64], p: u8, coeff: f64, gh: &mut [f64], gr: &mut [f64], gt: &mut [f64]) {
    let norm = if p == 1 { 1.0 } else { -score_transe(h, r, t, 2) };
    // ds/dd = -sign(d) for L1 (zero at the kink), -d/||d|| for L2
    let scale = if p == 1 || norm > 0.0 { coeff / norm } else { 0.0 };
    for j in 0..h.len() {
        let d = h[j] + r[j] - t[j];
        let g = if p == 1 {
            scale * (f64::from(u8::from(d < 0.0)) - f64::from(u8::from(d > 0.0)))
        } else {
            -scale * d
        };
        gh[j] = g;
        gr[j] = g;
        gt[j] = -g;
    }
}

pub fn complex_grad(h: &[f64], r: &[f64], t: &[f64], coeff: f64, gh: &mut [f64], gr: &mut [f64], gt: &mut [f64]) {
    let k = h.len() / 2;
    for j in 0..k {
        let (hr, hi, rr, ri, tr, ti) = (h[j], h[k + j], r[j], r[k + j], t[j], t[k + j]);
        gh[j] = coeff * (rr * tr + ri * ti);
        gh[k + j] = coeff * (rr * ti - ri * tr);
        gr[j] = coeff * (hr * tr + hi * ti);
        gr[k + j] = coeff * (hr * ti - hi * tr);
        gt[j] = coeff * (hr * rr - hi * ri);
        gt[k + j] = coeff * (hi * rr + hr * ri);
    }
}

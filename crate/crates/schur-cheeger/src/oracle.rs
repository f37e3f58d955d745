//! Exact brute-force references used to verify the conductance and
//! spectral-gap inequalities on small instances: exhaustive `phi`, `rho`,
//! and `sigma` minima, dense-matrix Schur complements, and numeric
//! integration of the clamp-difference integral.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::graph::VertexSet;
use crate::schur::{self, conductance_pair};
use crate::sweep::kappa;
use crate::{spectral, CutPair, Error, Graph, Result};

/// Cap for subset enumeration (`2^(n-1)` candidates).
pub const SUBSET_CAP: usize = 20;

/// Cap for pair enumeration (`3^n` assignments).
pub const PAIR_CAP: usize = 9;

/// Cap for dense matrix work.
pub const DENSE_CAP: usize = 200;

/// Exhaustive minimum of `phi_A` over nonempty proper subsets.
pub fn phi_exact(g: &Graph) -> Result<(f64, VertexSet)> {
    let n = g.n();
    if n > SUBSET_CAP {
        return Err(Error::TooLarge { n, cap: SUBSET_CAP });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let total = g.total_volume();
    let mut best = f64::INFINITY;
    let mut best_mask: u32 = 0;
    // Enumerate subsets omitting vertex n-1; each complement pair is
    // visited exactly once and phi is complement-symmetric.
    for mask in 1u32..(1 << (n - 1)) {
        let mut vol = 0.0;
        let mut cut = 0.0;
        for v in 0..n - 1 {
            if mask & (1 << v) == 0 {
                continue;
            }
            vol += g.degree(v);
            for &(u, w) in g.neighbors(v) {
                if u == n - 1 || mask & (1 << u) == 0 {
                    cut += w;
                }
            }
        }
        let phi = cut / vol.min(total - vol);
        if phi < best {
            best = phi;
            best_mask = mask;
        }
    }
    let set = VertexSet::from_sorted(
        (0..n - 1).filter(|&v| best_mask & (1 << v) != 0).collect(),
    );
    Ok((best, set))
}

/// Exact graph-level minima of `rho` and `sigma` with their argmin
/// pairs.
#[derive(Clone, Debug)]
pub struct RhoSigmaExact {
    pub rho: f64,
    pub sigma: f64,
    pub rho_argmin: CutPair,
    pub sigma_argmin: CutPair,
}

/// All disjoint nonempty pairs `(A, B)` with `min(A) < min(B)`; the
/// canonical half of the symmetric enumeration.
pub fn admissible_pairs(n: usize) -> Result<Vec<CutPair>> {
    if n > PAIR_CAP {
        return Err(Error::TooLarge { n, cap: PAIR_CAP });
    }
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut first_nonzero = None;
        for v in 0..n {
            let digit = c % 3;
            c /= 3;
            match digit {
                1 => {
                    if first_nonzero.is_none() {
                        first_nonzero = Some(1);
                    }
                    a.push(v);
                }
                2 => {
                    if first_nonzero.is_none() {
                        first_nonzero = Some(2);
                    }
                    b.push(v);
                }
                _ => {}
            }
        }
        // min(A) < min(B) exactly when the smallest assigned vertex
        // landed in A.
        if a.is_empty() || b.is_empty() || first_nonzero != Some(1) {
            continue;
        }
        out.push(CutPair {
            a: VertexSet::from_sorted(a),
            b: VertexSet::from_sorted(b),
        });
    }
    Ok(out)
}

/// Exhaustive `rho_G` and `sigma_G` over every admissible pair.
pub fn rho_sigma_exact(g: &Graph) -> Result<RhoSigmaExact> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let pairs = admissible_pairs(g.n())?;
    let mut best: Option<RhoSigmaExact> = None;
    for pair in pairs {
        let rep = conductance_pair(g, &pair.a, &pair.b)?;
        match &mut best {
            None => {
                best = Some(RhoSigmaExact {
                    rho: rep.rho,
                    sigma: rep.sigma,
                    rho_argmin: pair.clone(),
                    sigma_argmin: pair,
                });
            }
            Some(acc) => {
                if rep.rho < acc.rho {
                    acc.rho = rep.rho;
                    acc.rho_argmin = pair.clone();
                }
                if rep.sigma < acc.sigma {
                    acc.sigma = rep.sigma;
                    acc.sigma_argmin = pair;
                }
            }
        }
    }
    best.ok_or(Error::EmptyGraph)
}

/// Dense Laplacian of `g`.
pub fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
    }
    l
}

/// Moore-Penrose pseudoinverse of the Laplacian.
pub fn dense_pseudoinverse(g: &Graph) -> DMatrix<f64> {
    dense_laplacian(g)
        .svd(true, true)
        .pseudo_inverse(1e-12)
        .expect("svd computed with u and v")
}

/// Schur complement by the direct block-matrix formula, as the reference
/// for the elimination route. The result's ids follow `x` in ascending
/// order.
pub fn dense_schur(g: &Graph, x: &VertexSet) -> Result<Graph> {
    if g.n() > DENSE_CAP {
        return Err(Error::TooLarge {
            n: g.n(),
            cap: DENSE_CAP,
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyRetainedSet);
    }
    let keep = x.mask(g.n());
    let retained: Vec<usize> = x.iter().collect();
    let dropped: Vec<usize> = (0..g.n()).filter(|&v| !keep[v]).collect();
    let l = dense_laplacian(g);
    let pick = |rows: &[usize], cols: &[usize]| {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| l[(rows[i], cols[j])])
    };
    let s = if dropped.is_empty() {
        pick(&retained, &retained)
    } else {
        let lxx = pick(&retained, &retained);
        let lxc = pick(&retained, &dropped);
        let lcx = pick(&dropped, &retained);
        let lcc = pick(&dropped, &dropped);
        let inv = lcc.try_inverse().ok_or(Error::SingularBlock)?;
        lxx - lxc * inv * lcx
    };
    let k = retained.len();
    let mut triples = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = -s[(i, j)];
            if w > 0.0 {
                triples.push((i, j, w));
            }
        }
    }
    Graph::with_vertices(k, &triples)
}

/// Slack values for each verified inequality; nonnegative means the
/// inequality holds (before the test tolerance).
#[derive(Clone, Debug, Serialize)]
pub struct InequalitySlack {
    /// `rho - lambda/2 >= 0`.
    pub rho_lower: f64,
    /// `25600 lambda - rho >= 0`.
    pub rho_upper: f64,
    /// `2 sigma - lambda >= 0`.
    pub sigma_lower: f64,
    /// `phi - lambda/2 >= 0`.
    pub cheeger_lower: f64,
    /// `sqrt(2 lambda) - phi >= 0`.
    pub cheeger_upper: f64,
}

/// Full desk-scale verification of a graph: exact minima, argmin sets,
/// and slack for every inequality.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub lambda: f64,
    pub lambda_method: spectral::Method,
    pub phi: f64,
    pub phi_argmin: Vec<usize>,
    pub rho: f64,
    pub rho_argmin: (Vec<usize>, Vec<usize>),
    pub sigma: f64,
    pub sigma_argmin: (Vec<usize>, Vec<usize>),
    pub slack: InequalitySlack,
    /// `lambda <= 2 sigma_{A,B}` held for every admissible pair.
    pub pairwise_lower_ok: bool,
    /// Largest relative deviation of
    /// `Reff(A,B) * min(vol) * sigma_{A,B}` from 1 over all pairs.
    pub resistance_identity_max_dev: f64,
    pub all_ok: bool,
}

/// Compute every quantity exactly and report each inequality with its
/// slack.
pub fn verify_graph(g: &Graph) -> Result<VerificationReport> {
    let n = g.n();
    if n > PAIR_CAP {
        return Err(Error::TooLarge { n, cap: PAIR_CAP });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let spec = spectral::lambda_gap(g)?;
    let lambda = spec.lambda;
    let (phi, phi_argmin) = phi_exact(g)?;
    let rs = rho_sigma_exact(g)?;

    let mut pairwise_ok = true;
    let mut max_dev: f64 = 0.0;
    for pair in admissible_pairs(n)? {
        let rep = conductance_pair(g, &pair.a, &pair.b)?;
        if lambda > 2.0 * rep.sigma + 1e-9 {
            pairwise_ok = false;
        }
        let reff = schur::effective_resistance(g, &pair.a, &pair.b)?;
        let prod = reff * rep.vol_g_a.min(rep.vol_g_b) * rep.sigma;
        max_dev = max_dev.max((prod - 1.0).abs());
    }

    let slack = InequalitySlack {
        rho_lower: rs.rho - lambda / 2.0,
        rho_upper: 25600.0 * lambda - rs.rho,
        sigma_lower: 2.0 * rs.sigma - lambda,
        cheeger_lower: phi - lambda / 2.0,
        cheeger_upper: (2.0 * lambda).sqrt() - phi,
    };
    let all_ok = slack.rho_lower >= -1e-9
        && slack.rho_upper >= -1e-6
        && slack.sigma_lower >= -1e-9
        && slack.cheeger_lower >= -1e-9
        && slack.cheeger_upper >= -1e-9
        && pairwise_ok
        && max_dev <= 1e-7;

    Ok(VerificationReport {
        n,
        lambda,
        lambda_method: spec.method,
        phi,
        phi_argmin: phi_argmin.iter().collect(),
        rho: rs.rho,
        rho_argmin: (
            rs.rho_argmin.a.iter().collect(),
            rs.rho_argmin.b.iter().collect(),
        ),
        sigma: rs.sigma,
        sigma_argmin: (
            rs.sigma_argmin.a.iter().collect(),
            rs.sigma_argmin.b.iter().collect(),
        ),
        slack,
        pairwise_lower_ok: pairwise_ok,
        resistance_identity_max_dev: max_dev,
        all_ok,
    })
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let lm = 0.5 * (lo + mid);
    let rm = 0.5 * (mid + hi);
    let flm = f(lm);
    let frm = f(rm);
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let split = left + right;
    if depth == 0 || (split - whole).abs() <= 15.0 * tol {
        split + (split - whole) / 15.0
    } else {
        adaptive_simpson(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1)
            + adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1)
    }
}

fn integrate(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 40)
}

/// Numeric evaluation of the clamp-difference integral
/// `int_0^inf (kappa_q(a) - kappa_q(b))^2 / q dq`.
///
/// The integrand vanishes above `2 max(a, b, 0)` and is `O(q)` near zero,
/// so it is integrated over a compact interval split at the clamp knots.
pub fn kappa_integral_numeric(a: f64, b: f64) -> f64 {
    let upper = 2.0 * a.max(b).max(0.0);
    if upper <= 0.0 {
        return 0.0;
    }
    let f = |q: f64| {
        let d = kappa(q, a) - kappa(q, b);
        d * d / q
    };
    let delta = 1e-9 * a.abs().max(b.abs()).max(1.0);
    // Knots where the integrand changes analytic form.
    let mut knots: Vec<f64> = [a, 2.0 * a, b, 2.0 * b]
        .into_iter()
        .filter(|&v| v > delta && v < upper)
        .collect();
    knots.push(delta);
    knots.push(upper);
    knots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    knots.dedup_by(|x, y| (*x - *y).abs() <= 1e-15);
    let tol = 1e-10 * (1.0 + (a - b) * (a - b));
    let mut total = 0.0;
    for win in knots.windows(2) {
        total += integrate(&f, win[0], win[1], tol);
    }
    total
}

//! Periodic lattices embedded in `R^N` and their convergent power sums.
//!
//! Sums `sum_{p != 0} w(p) |p|^{-s}` are evaluated by enumerating all lattice
//! points up to a radius `R` and completing with the continuum integral of the
//! summand beyond `R`. The remaining error comes from the deviation of the
//! lattice point count from its continuum density; that deviation is measured
//! on the enumerated shells, extrapolated with a safety factor, and reported
//! as a certified `tail_bound`. Growing `R` geometrically until the bound
//! meets the requested tolerance gives a self-validating truncation (the
//! doubling test in the test suite checks the bound against the actual
//! change under `R -> 2R`).

use crate::specfun::FracParams;
use crate::util::{dot, norm, sym_eigenvalues, V3};
use crate::{Error, Real, Result};
use rayon::prelude::*;

/// Weight selector for [`Lattice::weighted_sum`].
#[derive(Debug, Clone, Copy)]
pub enum Weight<R> {
    /// `w(p) = 1`
    Unit,
    /// `w(p) = (theta . p)^2` for a unit vector `theta`
    Directional(V3<R>),
}

/// Result of a truncated lattice sum with certified tail.
#[derive(Debug, Clone, Copy)]
pub struct LatticeSumResult<R> {
    pub value: R,
    pub truncation_radius: R,
    /// Certified bound on the error of `value` against the full sum.
    pub tail_bound: R,
    pub terms_used: usize,
}

/// An `M`-dimensional Bravais lattice embedded in `R^N` (first `M`
/// coordinates; the basis lives in `R^M`).
#[derive(Debug, Clone)]
pub struct Lattice<R> {
    m: usize,
    n: usize,
    basis: Vec<Vec<R>>,
    /// minimal nonzero lattice point norm
    pub c0: R,
    pub is_rectangular: bool,
    pub is_square: bool,
    /// lower bound on the smallest Gram eigenvalue (enumeration completeness)
    sigma_min_lb: R,
    /// fundamental cell volume
    cell_volume: R,
}

/// Surface measure of the unit sphere in `R^m`.
fn omega<R: Real>(m: usize) -> R {
    match m {
        1 => R::of(2.0),
        2 => R::of(2.0) * R::PI(),
        3 => R::of(4.0) * R::PI(),
        _ => unreachable!("lattice dimension <= 3"),
    }
}

/// Count-fluctuation exponent used for tail certification.
fn fluct_exponent(m: usize) -> f64 {
    match m {
        1 => 0.0,
        2 => 2.0 / 3.0,
        _ => 1.5,
    }
}

const FLUCT_SAFETY: f64 = 4.0;
const BINS: usize = 256;
const MAX_TERMS: usize = 400_000_000;

struct SlabAcc<R> {
    sum: R,
    comp: R,
    count: usize,
    bin_w: Vec<R>,
    bin_n: Vec<u64>,
}

impl<R: Real> SlabAcc<R> {
    fn new() -> Self {
        SlabAcc {
            sum: R::zero(),
            comp: R::zero(),
            count: 0,
            bin_w: vec![R::zero(); BINS],
            bin_n: vec![0u64; BINS],
        }
    }

    #[inline]
    fn add(&mut self, term: R) {
        // Kahan compensation: long sums of small terms
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

impl<R: Real> Lattice<R> {
    /// Builds a lattice from `M` basis vectors of dimension `M`, embedded in
    /// `R^n`. Detects rectangular/square structure and computes the minimal
    /// point norm exactly over a finite candidate set.
    pub fn new(basis: &[Vec<R>], n: usize) -> Result<Self> {
        let m = basis.len();
        if m == 0 || m > n || n > 3 {
            return Err(Error::InvalidParams(format!(
                "need 1 <= M <= N <= 3, got M={m}, N={n}"
            )));
        }
        if basis.iter().any(|b| b.len() != m) {
            return Err(Error::InvalidParams(
                "basis vectors must have dimension M".into(),
            ));
        }
        // Gram matrix
        let mut g = vec![vec![R::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = (0..m).map(|d| basis[i][d] * basis[j][d]).sum();
            }
        }
        let det = match m {
            1 => g[0][0],
            2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
            _ => {
                g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
                    - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                    + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
            }
        };
        let norm_prod: R = (0..m).map(|i| g[i][i]).fold(R::one(), |a, b| a * b);
        if det <= R::of(1e-12) * norm_prod {
            return Err(Error::DegenerateBasis { det: det.as_f64() });
        }
        let sigma_min = match m {
            1 => g[0][0],
            2 => {
                let tr = g[0][0] + g[1][1];
                let disc = ((g[0][0] - g[1][1]) * (g[0][0] - g[1][1])
                    + R::of(4.0) * g[0][1] * g[0][1])
                    .sqrt();
                (tr - disc) / R::of(2.0)
            }
            _ => sym_eigenvalues(&g)[0],
        };
        let sigma_min_lb = sigma_min * R::of(1.0 - 1e-10);

        let tol = R::of(1e-12);
        let mut is_rect = true;
        for i in 0..m {
            for j in i + 1..m {
                if g[i][j].abs() > tol * (g[i][i] * g[j][j]).sqrt() {
                    is_rect = false;
                }
            }
        }
        let mut is_square = is_rect;
        for i in 1..m {
            if (g[i][i] - g[0][0]).abs() > tol * g[0][0].max(g[i][i]) {
                is_square = false;
            }
        }

        let mut lat = Lattice {
            m,
            n,
            basis: basis.to_vec(),
            c0: R::zero(),
            is_rectangular: is_rect,
            is_square,
            sigma_min_lb,
            cell_volume: det.sqrt(),
        };
        // minimal norm over the candidate box that provably contains it
        let min_basis_norm = (0..m)
            .map(|i| g[i][i].sqrt())
            .fold(R::infinity(), |a, b| a.min(b));
        let k0 = (min_basis_norm / sigma_min_lb.sqrt())
            .ceil()
            .as_f64()
            .max(1.0) as i64;
        let mut c0 = R::infinity();
        lat.for_each_point(k0, |p, _| {
            let np = norm(&p);
            if np > R::zero() && np < c0 {
                c0 = np;
            }
        });
        lat.c0 = c0;
        Ok(lat)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<R>] {
        &self.basis
    }

    pub fn cell_volume(&self) -> R {
        self.cell_volume
    }

    /// Embedded lattice point for integer coordinates `k`.
    #[inline]
    fn point(&self, k: &[i64; 3]) -> V3<R> {
        let mut p = [R::zero(); 3];
        for (i, b) in self.basis.iter().enumerate() {
            let ki = R::of(k[i] as f64);
            for (d, &bd) in b.iter().enumerate() {
                p[d] = p[d] + ki * bd;
            }
        }
        p
    }

    /// Visits every lattice point with integer coordinates in the box
    /// `|k_i| <= k_max` (sequentially, deterministic order).
    fn for_each_point<F: FnMut(V3<R>, &[i64; 3])>(&self, k_max: i64, mut f: F) {
        let mut k = [0i64; 3];
        match self.m {
            1 => {
                for k1 in -k_max..=k_max {
                    k[0] = k1;
                    f(self.point(&k), &k);
                }
            }
            2 => {
                for k1 in -k_max..=k_max {
                    for k2 in -k_max..=k_max {
                        k = [k1, k2, 0];
                        f(self.point(&k), &k);
                    }
                }
            }
            _ => {
                for k1 in -k_max..=k_max {
                    for k2 in -k_max..=k_max {
                        for k3 in -k_max..=k_max {
                            k = [k1, k2, k3];
                            f(self.point(&k), &k);
                        }
                    }
                }
            }
        }
    }

    /// Integer box radius guaranteeing coverage of `|p| <= r`.
    fn box_radius(&self, r: R) -> i64 {
        ((r / self.sigma_min_lb.sqrt()).ceil().as_f64() as i64).max(1)
    }

    /// All nonzero lattice points with `|p| <= r`, sorted by norm then by
    /// integer coordinates (deterministic).
    pub fn enumerate_shell(&self, r: R) -> Vec<V3<R>> {
        assert!(r > R::zero());
        let mut pts: Vec<(V3<R>, [i64; 3])> = Vec::new();
        self.for_each_point(self.box_radius(r), |p, k| {
            if k != &[0, 0, 0] && norm(&p) <= r {
                pts.push((p, *k));
            }
        });
        pts.sort_by(|(pa, ka), (pb, kb)| {
            norm(pa)
                .partial_cmp(&norm(pb))
                .unwrap()
                .then_with(|| ka.cmp(kb))
        });
        pts.into_iter().map(|(p, _)| p).collect()
    }

    /// Exact partial sum `sum_{0 < |p| <= r} w(p) |p|^{-s}` (no tail).
    pub fn partial_sum(&self, s: R, weight: Weight<R>, r: R) -> R {
        let (value, _, _) = self.accumulate(s, weight, r);
        value
    }

    /// Parallel enumeration of `|p| <= r` accumulating the weighted power sum,
    /// the term count, and radial histograms for fluctuation measurement.
    fn accumulate(&self, s: R, weight: Weight<R>, r: R) -> (R, usize, SlabAcc<R>) {
        let k_max = self.box_radius(r);
        let slabs: Vec<SlabAcc<R>> = (-k_max..=k_max)
            .into_par_iter()
            .map(|k1| {
                let mut acc = SlabAcc::new();
                let bin_scale = R::of_usize(BINS) / r;
                let mut visit = |p: V3<R>, k: &[i64; 3]| {
                    if k == &[0, 0, 0] {
                        return;
                    }
                    let np2 = dot(&p, &p);
                    let np = np2.sqrt();
                    if np > r {
                        return;
                    }
                    let w = match weight {
                        Weight::Unit => R::one(),
                        Weight::Directional(t) => {
                            let d = dot(&t, &p);
                            d * d
                        }
                    };
                    acc.add(w * np.powf(-s));
                    acc.count += 1;
                    let b = ((np * bin_scale).as_f64() as usize).min(BINS - 1);
                    acc.bin_n[b] += 1;
                    acc.bin_w[b] = acc.bin_w[b] + w;
                };
                match self.m {
                    1 => {
                        let k = [k1, 0, 0];
                        visit(self.point(&k), &k);
                    }
                    2 => {
                        for k2 in -k_max..=k_max {
                            let k = [k1, k2, 0];
                            visit(self.point(&k), &k);
                        }
                    }
                    _ => {
                        for k2 in -k_max..=k_max {
                            for k3 in -k_max..=k_max {
                                let k = [k1, k2, k3];
                                visit(self.point(&k), &k);
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        // deterministic sequential combination in slab order
        let mut total = SlabAcc::new();
        let mut value = R::zero();
        let mut comp = R::zero();
        let mut count = 0usize;
        for sl in slabs {
            let y = sl.sum - comp;
            let t = value + y;
            comp = (t - value) - y;
            value = t;
            count += sl.count;
            for b in 0..BINS {
                total.bin_n[b] += sl.bin_n[b];
                total.bin_w[b] = total.bin_w[b] + sl.bin_w[b];
            }
        }
        total.count = count;
        (value, count, total)
    }

    /// In-span squared projection of a direction vector.
    fn parallel_part(&self, t: &V3<R>) -> R {
        (0..self.m).map(|i| t[i] * t[i]).sum()
    }

    /// Continuum completion of the weighted sum beyond radius `r`.
    fn continuum_tail(&self, s: R, weight: &Weight<R>, r: R) -> R {
        let m = R::of_usize(self.m);
        match weight {
            Weight::Unit => {
                omega::<R>(self.m) / self.cell_volume * r.powf(m - s) / (s - m)
            }
            Weight::Directional(t) => {
                let tpar = self.parallel_part(t);
                tpar * omega::<R>(self.m) / (m * self.cell_volume) * r.powf(m + R::of(2.0) - s)
                    / (s - R::of(2.0) - m)
            }
        }
    }

    /// Continuum weighted count inside radius `r` (for fluctuation
    /// measurement): unit weight counts points, directional weight counts
    /// `(theta.p)^2` mass.
    fn continuum_count(&self, weight: &Weight<R>, r: R) -> R {
        let m = R::of_usize(self.m);
        match weight {
            Weight::Unit => {
                omega::<R>(self.m) / m / self.cell_volume * r.powf(m)
            }
            Weight::Directional(t) => {
                let tpar = self.parallel_part(t);
                tpar * omega::<R>(self.m) / (m * self.cell_volume) * r.powf(m + R::of(2.0))
                    / (m + R::of(2.0))
            }
        }
    }

    /// Measured fluctuation constant: `sup |E(r)| / r^(theta + d)` over bin
    /// edges in `[R/2, R]`, where `E` is the deviation of the cumulative
    /// weighted count from its continuum value and `d` is the weight degree.
    fn fluctuation_constant(&self, acc: &SlabAcc<R>, weight: &Weight<R>, r: R) -> R {
        let theta = R::of(fluct_exponent(self.m));
        let d = match weight {
            Weight::Unit => R::zero(),
            Weight::Directional(_) => R::of(2.0),
        };
        let mut cum = R::zero();
        let mut c_max = R::of(0.5);
        for b in 0..BINS {
            cum = cum
                + match weight {
                    Weight::Unit => R::of(acc.bin_n[b] as f64),
                    Weight::Directional(_) => acc.bin_w[b],
                };
            let edge = r * R::of_usize(b + 1) / R::of_usize(BINS);
            if edge < r / R::of(2.0) {
                continue;
            }
            let e = (cum - self.continuum_count(weight, edge)).abs();
            let c = e / edge.powf(theta + d);
            if c > c_max {
                c_max = c;
            }
        }
        c_max * R::of(FLUCT_SAFETY)
    }

    /// Certified bound on the error of (partial sum + continuum tail).
    fn residual_bound(&self, s: R, weight: &Weight<R>, r: R, c_fluct: R) -> R {
        let theta = R::of(fluct_exponent(self.m));
        let d = match weight {
            Weight::Unit => R::zero(),
            Weight::Directional(_) => R::of(2.0),
        };
        // |f(R) E(R)| + int_R^inf |f'| |E|, f = r^{-s}, |E| <= c r^(theta+d)
        c_fluct * r.powf(theta + d - s) * (R::one() + s / (s - theta - d))
    }

    /// Convergent weighted lattice sum with certified truncation tail.
    ///
    /// The returned `value` is the enumerated partial sum completed by the
    /// continuum integral beyond the truncation radius; `tail_bound` bounds
    /// the residual error of that completion.
    pub fn weighted_sum(&self, s: R, weight: Weight<R>, tol: R) -> Result<LatticeSumResult<R>> {
        let s_eff = match &weight {
            Weight::Unit => s,
            Weight::Directional(t) => {
                let nt = norm(t);
                if (nt - R::one()).abs() > R::of(1e-8) {
                    return Err(Error::InvalidParams(
                        "directional weight requires a unit vector".into(),
                    ));
                }
                s - R::of(2.0)
            }
        };
        if s_eff <= R::of_usize(self.m) {
            return Err(Error::NonconvergentSum {
                s_eff: s_eff.as_f64(),
                m: self.m,
            });
        }
        let mut r = R::of(8.0) * self.c0;
        loop {
            let (partial, count, acc) = self.accumulate(s, weight, r);
            let c_fluct = self.fluctuation_constant(&acc, &weight, r);
            let bound = self.residual_bound(s, &weight, r, c_fluct);
            if bound <= tol {
                return Ok(LatticeSumResult {
                    value: partial + self.continuum_tail(s, &weight, r),
                    truncation_radius: r,
                    tail_bound: bound,
                    terms_used: count,
                });
            }
            // estimated cost of the next doubling
            let next_r = r * R::of(2.0);
            if self.continuum_count(&Weight::Unit, next_r).as_f64() > MAX_TERMS as f64 {
                return Err(Error::SumTolUnreachable {
                    tol: tol.as_f64(),
                    achieved: bound.as_f64(),
                });
            }
            r = next_r;
        }
    }

    /// Second-moment matrix `Q_ij = sum p_i p_j |p|^{-s}` with continuum tail
    /// completion on the in-span diagonal. Returns the matrix and a certified
    /// per-entry error bound.
    pub fn moment_matrix(&self, s: R, tol: R) -> Result<([[R; 3]; 3], R)> {
        if s - R::of(2.0) <= R::of_usize(self.m) {
            return Err(Error::NonconvergentSum {
                s_eff: (s - R::of(2.0)).as_f64(),
                m: self.m,
            });
        }
        let mut r = R::of(8.0) * self.c0;
        loop {
            let k_max = self.box_radius(r);
            // single deterministic pass accumulating all entries
            let mut q = [[R::zero(); 3]; 3];
            let mut acc = SlabAcc::new();
            let bin_scale = R::of_usize(BINS) / r;
            self.for_each_point(k_max, |p, k| {
                if k == &[0, 0, 0] {
                    return;
                }
                let np = norm(&p);
                if np > r {
                    return;
                }
                let f = np.powf(-s);
                for i in 0..self.m {
                    for j in 0..self.m {
                        q[i][j] = q[i][j] + p[i] * p[j] * f;
                    }
                }
                let b = ((np * bin_scale).as_f64() as usize).min(BINS - 1);
                acc.bin_n[b] += 1;
                acc.bin_w[b] = acc.bin_w[b] + np * np; // trace weight
                acc.count += 1;
            });
            // continuum completion: isotropic within the span
            let m = R::of_usize(self.m);
            let diag_tail = omega::<R>(self.m) / (m * self.cell_volume)
                * r.powf(m + R::of(2.0) - s)
                / (s - R::of(2.0) - m);
            for i in 0..self.m {
                q[i][i] = q[i][i] + diag_tail;
            }
            // fluctuation of the trace-weighted count certifies all entries
            let w = Weight::Directional([R::one(), R::zero(), R::zero()]);
            let theta = R::of(fluct_exponent(self.m));
            let mut cum = R::zero();
            let mut c_max = R::of(0.5);
            for b in 0..BINS {
                cum = cum + acc.bin_w[b];
                let edge = r * R::of_usize(b + 1) / R::of_usize(BINS);
                if edge < r / R::of(2.0) {
                    continue;
                }
                // continuum trace mass: m * directional mass for a unit axis
                let cont = self.continuum_count(&w, edge) * m;
                let c = (cum - cont).abs() / edge.powf(theta + R::of(2.0));
                if c > c_max {
                    c_max = c;
                }
            }
            let bound = self.residual_bound(s, &w, r, c_max * R::of(FLUCT_SAFETY));
            if bound <= tol {
                return Ok((q, bound));
            }
            let next_r = r * R::of(2.0);
            if self.continuum_count(&Weight::Unit, next_r).as_f64() > MAX_TERMS as f64 {
                return Err(Error::SumTolUnreachable {
                    tol: tol.as_f64(),
                    achieved: bound.as_f64(),
                });
            }
            r = next_r;
        }
    }

    /// `mu_j = sum p_j^2 / |p|^{N+alpha+4}` for rectangular lattices.
    pub fn mu_coefficients(&self, params: &FracParams<R>, tol: R) -> Result<Vec<R>> {
        if !self.is_rectangular {
            return Err(Error::NotRectangular);
        }
        let s = R::of_usize(params.n) + params.alpha + R::of(4.0);
        let (q, _bound) = self.moment_matrix(s, tol)?;
        Ok((0..self.m).map(|j| q[j][j]).collect())
    }
}

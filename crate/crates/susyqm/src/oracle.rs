//! Finite-difference eigensolver for H = −d²/dx² + V with Dirichlet ends.
//!
//! Eigenvalues by Sturm-sequence bisection, eigenvectors by inverse
//! iteration with a pivoted tridiagonal solve. Symmetric potentials on
//! symmetric grids can be split into even and odd blocks, which keeps
//! tunnelling doublets (degenerate to rounding) parity-pure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{orient, GridFunction, UniformGrid};

/// Largest grid accepted by the refinement loop.
pub const MAX_POINTS: usize = 1 << 20;

/// Symmetric tridiagonal matrix: diagonal `d`, off-diagonal `e`
/// (`e.len() == d.len() - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl Tridiagonal {
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Gershgorin interval.
    pub fn bounds(&self) -> (f64, f64) {
        let m = self.dim();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..m {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 }
                + if i + 1 < m { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            q = if i == 0 {
                self.d[0] - x
            } else {
                self.d[i] - x - self.e[i - 1] * self.e[i - 1] / q
            };
            if q.abs() < tiny {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// i-th smallest eigenvalue by bisection.
    pub fn eigenvalue(&self, i: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        let scale = self.norm().max(f64::MIN_POSITIVE);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * scale || mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut s = self.d[i] * v[i];
                if i > 0 {
                    s += self.e[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    s += self.e[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solves (T − σ) y = b by Gaussian elimination with partial pivoting.
    /// Zero pivots are replaced by a tiny multiple of ‖T‖, as inverse
    /// iteration expects a nearly singular system.
    fn shifted_solve(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let tiny = f64::EPSILON * self.norm().max(1.0);
        let mut d: Vec<f64> = self.d.iter().map(|v| v - sigma).collect();
        let mut du = self.e.clone();
        let dl = self.e.clone();
        let mut du2 = vec![0.0; m.saturating_sub(2)];
        let mut x = b.to_vec();
        if m == 1 {
            return vec![x[0] / if d[0] == 0.0 { tiny } else { d[0] }];
        }
        for i in 0..m - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                d[i + 1] -= f * du[i];
                x[i + 1] -= f * x[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                let t = d[i + 1];
                d[i + 1] = du[i] - f * t;
                if i + 2 < m {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
                du[i] = t;
                let t = x[i];
                x[i] = x[i + 1];
                x[i + 1] = t - f * x[i + 1];
            }
        }
        if d[m - 1] == 0.0 {
            d[m - 1] = tiny;
        }
        x[m - 1] /= d[m - 1];
        x[m - 2] = (x[m - 2] - du[m - 2] * x[m - 1]) / d[m - 2];
        for i in (0..m.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    /// Lowest `k` eigenpairs; vectors have unit Euclidean norm.
    pub fn lowest(&self, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let m = self.dim();
        if k > m {
            return Err(Error::InvalidInput(format!("{k} eigenpairs from dimension {m}")));
        }
        let mut values: Vec<f64> = (0..k).map(|i| self.eigenvalue(i)).collect();
        let cluster_gap = 1e-3 * self.norm();
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
        for i in 0..k {
            let lam = values[i];
            let mut rng = 0x9E37_79B9_7F4A_7C15_u64 ^ (i as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            let mut v: Vec<f64> = (0..m)
                .map(|_| {
                    rng ^= rng << 13;
                    rng ^= rng >> 7;
                    rng ^= rng << 17;
                    (rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                })
                .collect();
            let cluster: Vec<usize> = (0..i)
                .filter(|&j| (values[j] - lam).abs() < cluster_gap)
                .collect();
            for _ in 0..4 {
                v = self.shifted_solve(lam, &v);
                for &j in &cluster {
                    let dot: f64 = v.iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(&vectors[j]).for_each(|(a, b)| *a -= dot * b);
                }
                let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if !(n.is_finite() && n > 0.0) {
                    return Err(Error::ConvergenceFailure(format!(
                        "inverse iteration broke down for eigenvalue {i} ({lam})"
                    )));
                }
                v.iter_mut().for_each(|a| *a /= n);
            }
            // Rayleigh quotient; bisection alone stops near ε·‖T‖
            let tv = self.apply(&v);
            let rq: f64 = tv.iter().zip(&v).map(|(a, b)| a * b).sum();
            if (rq - lam).abs() < cluster_gap {
                values[i] = rq;
            }
            vectors.push(v);
        }
        Ok((values, vectors))
    }
}

/// Three-point discretization of −d²/dx² + V on the interior points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizedHamiltonian {
    pub grid: UniformGrid,
    pub diagonal: Vec<f64>,
    pub off_diagonal: f64,
    pub potential: Vec<f64>,
}

impl DiscretizedHamiltonian {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn tridiagonal(&self) -> Tridiagonal {
        Tridiagonal {
            d: self.diagonal.clone(),
            e: vec![self.off_diagonal; self.dimension() - 1],
        }
    }
}

pub fn build_hamiltonian(potential: &GridFunction) -> Result<DiscretizedHamiltonian> {
    let g = potential.grid;
    if g.n < 16 {
        return Err(Error::InvalidInput(format!("oracle grid needs n >= 16, got {}", g.n)));
    }
    if let Some(i) = potential.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinitePotential { index: i, x: g.x(i) });
    }
    let h = g.step();
    let diagonal = potential.values[1..g.n - 1]
        .iter()
        .map(|v| 2.0 / (h * h) + v)
        .collect();
    Ok(DiscretizedHamiltonian {
        grid: g,
        diagonal,
        off_diagonal: -1.0 / (h * h),
        potential: potential.values.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<GridFunction>,
    pub residuals: Vec<f64>,
    pub parities: Option<Vec<Parity>>,
    pub grid: UniformGrid,
    /// Richardson values (4E_{h/2} − E_h)/3 when two grids were solved.
    pub richardson: Option<Vec<f64>>,
    pub refinement_history: Vec<RefinementStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementStep {
    pub grid: UniformGrid,
    pub eigenvalues: Vec<f64>,
}

/// ‖Tv − λv‖ / (max(|λ|, 1)‖v‖).
fn relative_residual(t: &Tridiagonal, lam: f64, v: &[f64]) -> f64 {
    let tv = t.apply(v);
    let r: f64 = tv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
    let n: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    r / (lam.abs().max(1.0) * n)
}

const RESIDUAL_LIMIT: f64 = 1e-8;

/// The target limit, or the rounding floor of applying T when that is
/// larger (fine grids make ‖T‖ ~ 4/h²).
fn residual_limit(t: &Tridiagonal, lam: f64) -> f64 {
    RESIDUAL_LIMIT.max(64.0 * f64::EPSILON * t.norm() / lam.abs().max(1.0))
}

fn to_grid_function(grid: UniformGrid, interior: &[f64]) -> Result<GridFunction> {
    let mut values = Vec::with_capacity(grid.n);
    values.push(0.0);
    values.extend_from_slice(interior);
    values.push(0.0);
    normalize_discrete(&mut values, grid.step());
    GridFunction::new(grid, values)
}

fn normalize_discrete(values: &mut [f64], h: f64) {
    let n = (values.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
    if n > 0.0 {
        values.iter_mut().for_each(|v| *v /= n);
    }
    orient(values);
}

pub fn lowest_eigenpairs(h: &DiscretizedHamiltonian, k: usize) -> Result<EigenResult> {
    if k == 0 || k > h.dimension() / 4 {
        return Err(Error::InvalidInput(format!(
            "k = {k} must be in 1..={}",
            h.dimension() / 4
        )));
    }
    let t = h.tridiagonal();
    let (values, vectors) = t.lowest(k)?;
    let mut residuals = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for (lam, v) in values.iter().zip(&vectors) {
        let r = relative_residual(&t, *lam, v);
        if !(r < residual_limit(&t, *lam)) {
            return Err(Error::ConvergenceFailure(format!(
                "eigenvalue {lam}: relative residual {r:e} on {} points",
                h.grid.n
            )));
        }
        residuals.push(r);
        eigenvectors.push(to_grid_function(h.grid, v)?);
    }
    Ok(EigenResult {
        eigenvalues: values,
        eigenvectors,
        residuals,
        parities: None,
        grid: h.grid,
        richardson: None,
        refinement_history: Vec::new(),
    })
}

/// Lowest `k` eigenpairs of an even potential on a symmetric odd-sized
/// grid, solved per parity block and merged in ascending order.
pub fn lowest_eigenpairs_by_parity(h: &DiscretizedHamiltonian, k: usize) -> Result<EigenResult> {
    let g = h.grid;
    if !g.is_symmetric() {
        return Err(Error::InvalidInput("parity split needs a symmetric odd-sized grid".into()));
    }
    if k == 0 || k > h.dimension() / 4 {
        return Err(Error::InvalidInput(format!(
            "k = {k} must be in 1..={}",
            h.dimension() / 4
        )));
    }
    let n = g.n;
    let mid = (n - 1) / 2;
    let vmax = h.potential.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    for i in 0..mid {
        if (h.potential[i] - h.potential[n - 1 - i]).abs() > 1e-10 * vmax {
            return Err(Error::InvalidInput(format!(
                "potential is not even at x = {}",
                g.x(i)
            )));
        }
    }
    let step = g.step();
    let off = -1.0 / (step * step);
    // even block: unknowns mid..n-2, mirror condition at the centre,
    // symmetrized by scaling the centre unknown by √2
    let mut even = Tridiagonal {
        d: h.diagonal[mid - 1..].to_vec(),
        e: vec![off; n - 2 - mid],
    };
    even.e[0] = off * std::f64::consts::SQRT_2;
    // odd block: unknowns mid+1..n-2, zero at the centre
    let odd = Tridiagonal {
        d: h.diagonal[mid..].to_vec(),
        e: vec![off; n - 3 - mid],
    };
    let ke = k.min(even.dim());
    let ko = k.min(odd.dim());
    let (ev, evec) = even.lowest(ke)?;
    let (ov, ovec) = odd.lowest(ko)?;

    let mut merged: Vec<(f64, Parity, Vec<f64>, f64, f64)> = Vec::with_capacity(ke + ko);
    for (lam, y) in ev.iter().zip(evec) {
        let r = relative_residual(&even, *lam, &y);
        let mut half = y;
        half[0] *= std::f64::consts::SQRT_2;
        let mut full = vec![0.0; n];
        for (j, v) in half.iter().enumerate() {
            full[mid + j] = *v;
            full[mid - j] = *v;
        }
        merged.push((*lam, Parity::Even, full, r, residual_limit(&even, *lam)));
    }
    for (lam, y) in ov.iter().zip(ovec) {
        let r = relative_residual(&odd, *lam, &y);
        let mut full = vec![0.0; n];
        for (j, v) in y.iter().enumerate() {
            full[mid + 1 + j] = *v;
            full[mid - 1 - j] = -*v;
        }
        merged.push((*lam, Parity::Odd, full, r, residual_limit(&odd, *lam)));
    }
    merged.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    merged.truncate(k);

    let mut out = EigenResult {
        eigenvalues: Vec::with_capacity(k),
        eigenvectors: Vec::with_capacity(k),
        residuals: Vec::with_capacity(k),
        parities: Some(Vec::with_capacity(k)),
        grid: g,
        richardson: None,
        refinement_history: Vec::new(),
    };
    for (lam, parity, mut full, r, limit) in merged {
        if !(r < limit) {
            return Err(Error::ConvergenceFailure(format!(
                "{parity:?} eigenvalue {lam}: relative residual {r:e}"
            )));
        }
        normalize_discrete(&mut full, step);
        out.eigenvalues.push(lam);
        out.eigenvectors.push(GridFunction::new(g, full)?);
        out.residuals.push(r);
        out.parities.as_mut().unwrap().push(parity);
    }
    Ok(out)
}

/// Strict sign changes among interior samples above 1e-9 of the peak.
pub fn count_nodes(psi: &GridFunction) -> usize {
    let v = &psi.values;
    let peak = psi.max_abs();
    let guard = 1e-9 * peak;
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for x in v.iter().take(v.len().saturating_sub(1)).skip(1) {
        if x.abs() <= guard {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            nodes += 1;
        }
        last = *x;
    }
    nodes
}

/// ‖−ψ″ + Vψ − Eψ‖₂ / (max(|E|, 1)‖ψ‖₂) over interior points with the
/// 3-point second difference. The max(|E|, 1) keeps zero-energy states
/// meaningful; for |E| ≥ 1 this is the plain relative residual.
pub fn residual_norm(v: &GridFunction, psi: &GridFunction, e: f64) -> Result<f64> {
    v.same_grid(psi)?;
    let h = psi.grid.step();
    let p = &psi.values;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 1..p.len() - 1 {
        let d2 = (p[i - 1] - 2.0 * p[i] + p[i + 1]) / (h * h);
        num += (-d2 + (v.values[i] - e) * p[i]).powi(2);
        den += p[i] * p[i];
    }
    if den == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(num.sqrt() / (e.abs().max(1.0) * den.sqrt()))
}

/// How the solve domain is laid out and grown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Span {
    /// [−L, L], L expanded; parity split used when `parity` is set.
    Symmetric { half_width: f64, parity: bool },
    /// [δ, L] with Dirichlet at δ, L expanded.
    HalfLine { delta: f64, hi: f64 },
    /// Fixed interval.
    Fixed { lo: f64, hi: f64 },
}

pub struct EigenProblem<'a> {
    pub potential: &'a (dyn Fn(f64) -> f64 + Sync),
    pub span: Span,
    pub k: usize,
    pub initial_points: usize,
}

impl EigenProblem<'_> {
    fn grid_for(&self, span: Span, n: usize) -> Result<UniformGrid> {
        match span {
            Span::Symmetric { half_width, .. } => UniformGrid::symmetric(half_width, n | 1),
            Span::HalfLine { delta, hi } => UniformGrid::new(delta, hi, n | 1),
            Span::Fixed { lo, hi } => UniformGrid::new(lo, hi, n | 1),
        }
    }

    pub fn solve_on(&self, grid: UniformGrid) -> Result<EigenResult> {
        let values: Vec<f64> = grid.points().into_iter().map(self.potential).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinitePotential { index: i, x: grid.x(i) });
        }
        let h = build_hamiltonian(&GridFunction::new(grid, values)?)?;
        match self.span {
            Span::Symmetric { parity: true, .. } => lowest_eigenpairs_by_parity(&h, self.k),
            _ => lowest_eigenpairs(&h, self.k),
        }
    }

    fn expanded(&self, span: Span) -> Option<Span> {
        match span {
            Span::Symmetric { half_width, parity } => Some(Span::Symmetric {
                half_width: 1.25 * half_width,
                parity,
            }),
            Span::HalfLine { delta, hi } => Some(Span::HalfLine {
                delta,
                hi: delta + 1.25 * (hi - delta),
            }),
            Span::Fixed { .. } => None,
        }
    }
}

fn width(span: Span) -> f64 {
    match span {
        Span::Symmetric { half_width, .. } => 2.0 * half_width,
        Span::HalfLine { delta, hi } => hi - delta,
        Span::Fixed { lo, hi } => hi - lo,
    }
}

fn max_change(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// Doubles the grid density until successive eigenvalues change by less
/// than `target_tol` (relative to max(1, |E|)), then grows the domain by
/// 25% until the boundary no longer matters at that tolerance.
pub fn refine_until_converged(problem: &EigenProblem, target_tol: f64) -> Result<EigenResult> {
    if !(target_tol >= 1e-10) {
        return Err(Error::InvalidInput(format!("target_tol {target_tol} below 1e-10")));
    }
    let mut span = problem.span;
    let mut history = Vec::new();
    let mut n = problem.initial_points.max(17) | 1;
    for _round in 0..12 {
        let (coarse, fine) = refine_grid(problem, span, &mut n, target_tol, &mut history)?;
        let Some(wider) = problem.expanded(span) else {
            return Ok(finish(coarse, fine, history));
        };
        let h = fine.grid.step();
        let n_wide = ((width(wider) / h).round() as usize + 1) | 1;
        if n_wide > MAX_POINTS {
            return Err(Error::ResourceLimit(format!("{n_wide} points for boundary check")));
        }
        let wide = problem.solve_on(problem.grid_for(wider, n_wide)?)?;
        history.push(RefinementStep {
            grid: wide.grid,
            eigenvalues: wide.eigenvalues.clone(),
        });
        if max_change(&wide.eigenvalues, &fine.eigenvalues) < target_tol {
            return Ok(finish(coarse, fine, history));
        }
        span = wider;
        n = ((n - 1) as f64 * 1.25).round() as usize + 1;
    }
    Err(Error::ConvergenceFailure("domain expansion did not settle".into()))
}

fn refine_grid(
    problem: &EigenProblem,
    span: Span,
    n: &mut usize,
    tol: f64,
    history: &mut Vec<RefinementStep>,
) -> Result<(EigenResult, EigenResult)> {
    let mut prev = problem.solve_on(problem.grid_for(span, *n)?)?;
    history.push(RefinementStep {
        grid: prev.grid,
        eigenvalues: prev.eigenvalues.clone(),
    });
    loop {
        let next_n = 2 * prev.grid.n - 1;
        if next_n > MAX_POINTS {
            return Err(Error::ResourceLimit(format!(
                "grid refinement needs more than {MAX_POINTS} points"
            )));
        }
        let next = problem.solve_on(prev.grid.refined())?;
        history.push(RefinementStep {
            grid: next.grid,
            eigenvalues: next.eigenvalues.clone(),
        });
        if max_change(&next.eigenvalues, &prev.eigenvalues) < tol {
            *n = prev.grid.n;
            return Ok((prev, next));
        }
        prev = next;
    }
}

fn finish(coarse: EigenResult, mut fine: EigenResult, history: Vec<RefinementStep>) -> EigenResult {
    fine.richardson = Some(richardson(&coarse.eigenvalues, &fine.eigenvalues));
    fine.refinement_history = history;
    fine
}

/// (4E_{h/2} − E_h)/3 per level.
pub fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Outermost |x| on [0, search] where V(x) ≤ E, scanning from outside in.
pub fn outer_turning_point(potential: &dyn Fn(f64) -> f64, energy: f64, search: f64) -> f64 {
    let steps = 20_000;
    for i in (0..=steps).rev() {
        let x = search * i as f64 / steps as f64;
        if potential(x) <= energy || potential(-x) <= energy {
            return x;
        }
    }
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn harmonic(n: usize) -> DiscretizedHamiltonian {
        let g = UniformGrid::symmetric(10.0, n).unwrap();
        build_hamiltonian(&GridFunction::sample(g, |x| x * x - 1.0).unwrap()).unwrap()
    }

    #[test]
    fn free_box_layout() {
        let g = UniformGrid::new(0.0, 1.0, 21).unwrap();
        let h = build_hamiltonian(&GridFunction::zeros(g)).unwrap();
        assert_eq!(h.dimension(), 19);
        let s = g.step();
        assert!(h.diagonal.iter().all(|d| (d - 2.0 / (s * s)).abs() < 1e-9));
        assert_eq!(h.off_diagonal, -1.0 / (s * s));
    }

    #[test]
    fn particle_in_a_box() {
        let g = UniformGrid::new(0.0, 1.0, 401).unwrap();
        let h = build_hamiltonian(&GridFunction::zeros(g)).unwrap();
        let r = lowest_eigenpairs(&h, 2).unwrap();
        assert!((r.eigenvalues[0] / (PI * PI) - 1.0).abs() < 1e-3);
        assert!((r.eigenvalues[1] / (4.0 * PI * PI) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn harmonic_levels_and_nodes() {
        let r = lowest_eigenpairs(&harmonic(4001), 3).unwrap();
        for (i, e) in r.eigenvalues.iter().enumerate() {
            assert!((e - 2.0 * i as f64).abs() < 1e-4);
            assert_eq!(count_nodes(&r.eigenvectors[i]), i);
            assert!(r.residuals[i] < 1e-8);
        }
    }

    #[test]
    fn parity_split_agrees_with_full_solve() {
        let h = harmonic(2001);
        let a = lowest_eigenpairs(&h, 5).unwrap();
        let b = lowest_eigenpairs_by_parity(&h, 5).unwrap();
        for i in 0..5 {
            assert!((a.eigenvalues[i] - b.eigenvalues[i]).abs() < 1e-9);
            let dot: f64 = a.eigenvectors[i]
                .values
                .iter()
                .zip(&b.eigenvectors[i].values)
                .map(|(x, y)| x * y)
                .sum::<f64>()
                * h.grid.step();
            assert!((dot.abs() - 1.0).abs() < 1e-9);
        }
        let p = b.parities.unwrap();
        assert_eq!(p, vec![Parity::Even, Parity::Odd, Parity::Even, Parity::Odd, Parity::Even]);
    }

    #[test]
    fn parity_split_separates_a_doublet() {
        // deep symmetric double well: lowest pair is degenerate to rounding
        let g = UniformGrid::symmetric(4.0, 2001).unwrap();
        let v = GridFunction::sample(g, |x| 400.0 * (x * x - 2.25).powi(2)).unwrap();
        let h = build_hamiltonian(&v).unwrap();
        let r = lowest_eigenpairs_by_parity(&h, 2).unwrap();
        let split = r.eigenvalues[1] - r.eigenvalues[0];
        assert!(split.abs() < 1e-8 * r.eigenvalues[0]);
        let parities = r.parities.unwrap();
        for (p, v) in parities.iter().zip(&r.eigenvectors) {
            let want = if *p == Parity::Even { 0 } else { 1 };
            assert_eq!(count_nodes(v), want);
        }
        assert_ne!(parities[0], parities[1]);
    }

    #[test]
    fn sturm_count_brackets() {
        let t = harmonic(401).tridiagonal();
        assert_eq!(t.sturm_count(-10.0), 0);
        assert_eq!(t.sturm_count(1.0), 1);
        assert_eq!(t.sturm_count(3.0), 2);
    }

    #[test]
    fn node_count_examples() {
        let g = UniformGrid::new(0.0, 1.0, 1001).unwrap();
        let s = GridFunction::sample(g, |x| (2.0 * PI * x).sin()).unwrap();
        assert_eq!(count_nodes(&s), 1);
        let g = UniformGrid::symmetric(6.0, 1001).unwrap();
        let s = GridFunction::sample(g, |x| (-0.5 * x * x).exp()).unwrap();
        assert_eq!(count_nodes(&s), 0);
    }

    #[test]
    fn residual_examples() {
        let h = harmonic(2001);
        let r = lowest_eigenpairs(&h, 1).unwrap();
        let v = GridFunction::new(h.grid, h.potential.clone()).unwrap();
        assert!(residual_norm(&v, &r.eigenvectors[0], r.eigenvalues[0]).unwrap() < 1e-10);
        let gauss = |n: usize| {
            let g = UniformGrid::symmetric(10.0, n).unwrap();
            let v = GridFunction::sample(g, |x| x * x - 1.0).unwrap();
            let p = GridFunction::sample(g, |x| (-0.5 * x * x).exp()).unwrap();
            residual_norm(&v, &p, 0.0).unwrap()
        };
        let ratio = gauss(1001) / gauss(2001);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn refinement_converges_harmonic() {
        let v = |x: f64| x * x - 1.0;
        let p = EigenProblem {
            potential: &v,
            span: Span::Symmetric {
                half_width: 8.0,
                parity: false,
            },
            k: 3,
            initial_points: 801,
        };
        let r = refine_until_converged(&p, 1e-6).unwrap();
        let rich = r.richardson.as_ref().unwrap();
        for (i, e) in rich.iter().enumerate() {
            assert!((e - 2.0 * i as f64).abs() < 1e-8, "{i}: {e}");
        }
        assert!(refine_until_converged(&p, 1e-12).is_err());
    }

    #[test]
    fn second_order_convergence() {
        let e = |n| lowest_eigenpairs(&harmonic(n), 3).unwrap().eigenvalues[2] - 4.0;
        let ratio = e(1001) / e(2001);
        assert!((3.8..4.2).contains(&ratio), "ratio {ratio}");
    }
}

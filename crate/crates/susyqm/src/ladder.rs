//! Ladder operators on sampled wavefunctions and ground states from W.

use crate::error::{Error, Result};
use crate::grid::{derivative, orient, GridFunction, UniformGrid};
use crate::potential::{FamilySpec, Params};
use crate::shape_invariance::{apply_map, ParamMap};

/// Default cap on the exponent −∫W before exponentiation.
pub const EXPONENT_CAP: f64 = 700.0;

/// Points at each end where the one-sided/short stencils sit; excluded
/// from comparison norms.
pub const EDGE_POINTS: usize = 2;

fn w_samples(family: &FamilySpec, params: &Params, xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter().map(|&x| family.w(params, x)).collect()
}

/// −∫W from the grid midpoint, Simpson per interval with W at the
/// interval midpoint. No cap; use for log-space comparisons.
pub fn log_ground_state_from_w(
    family: &FamilySpec,
    params: &Params,
    grid: &UniformGrid,
) -> Result<GridFunction> {
    let xs = grid.points();
    let h = grid.step();
    let w = w_samples(family, params, &xs)?;
    let mids: Vec<f64> = xs.windows(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let wm = w_samples(family, params, &mids)?;
    let n = grid.n;
    let m = (n - 1) / 2;
    let mut s = vec![0.0; n];
    for i in m..n - 1 {
        s[i + 1] = s[i] + h / 6.0 * (w[i] + 4.0 * wm[i] + w[i + 1]);
    }
    for i in (0..m).rev() {
        s[i] = s[i + 1] - h / 6.0 * (w[i] + 4.0 * wm[i] + w[i + 1]);
    }
    GridFunction::new(*grid, s.into_iter().map(|v| -v).collect())
}

/// Unnormalized e^{−∫W}. Fails with `Overflow` where the exponent exceeds
/// `cap`, which is how a non-normalizable candidate shows up.
pub fn ground_state_from_w(
    family: &FamilySpec,
    params: &Params,
    grid: &UniformGrid,
    cap: f64,
) -> Result<GridFunction> {
    let log = log_ground_state_from_w(family, params, grid)?;
    if let Some(i) = log.values.iter().position(|e| *e > cap) {
        return Err(Error::Overflow {
            x: grid.x(i),
            exponent: log.values[i],
        });
    }
    Ok(log.map(f64::exp))
}

fn ladder(family: &FamilySpec, params: &Params, psi: &GridFunction, sign: f64) -> Result<GridFunction> {
    let xs = psi.grid.points();
    let w = w_samples(family, params, &xs)?;
    let d = derivative(&psi.values, psi.grid.step());
    let values = psi
        .values
        .iter()
        .zip(&w)
        .zip(&d)
        .map(|((p, w), d)| sign * d + w * p)
        .collect();
    GridFunction::new(psi.grid, values)
}

/// A† ψ = −ψ′ + Wψ. The outer `EDGE_POINTS` values are low-confidence.
pub fn apply_raising(family: &FamilySpec, params: &Params, psi: &GridFunction) -> Result<GridFunction> {
    ladder(family, params, psi, -1.0)
}

/// A ψ = ψ′ + Wψ. The outer `EDGE_POINTS` values are low-confidence.
pub fn apply_lowering(family: &FamilySpec, params: &Params, psi: &GridFunction) -> Result<GridFunction> {
    ladder(family, params, psi, 1.0)
}

/// Unit L² norm (Simpson); leftmost maximum of |ψ| made positive.
pub fn normalize(psi: &GridFunction) -> Result<GridFunction> {
    let norm2 = psi.map(|v| v * v).integral()?;
    if !norm2.is_finite() {
        return Err(Error::NonFinite("norm of wavefunction".into()));
    }
    if norm2 <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let s = norm2.sqrt();
    let mut values: Vec<f64> = psi.values.iter().map(|v| v / s).collect();
    orient(&mut values);
    GridFunction::new(psi.grid, values)
}

/// Simpson ∫ f g.
pub fn overlap(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.same_grid(g)?;
    let prod: Vec<f64> = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    crate::grid::simpson(&prod, f.grid.step())
}

/// Largest |value| away from the low-confidence edges.
pub fn interior_max_abs(psi: &GridFunction) -> f64 {
    let n = psi.values.len();
    psi.values[EDGE_POINTS..n - EDGE_POINTS]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// A†(a₀)…A†(a_{n−1}) e^{−∫W(a_n)}, normalized. Refuses when any a_k has
/// a pole of W on the grid.
pub fn excited_state(
    family: &FamilySpec,
    map: ParamMap,
    a0: &Params,
    n: usize,
    grid: &UniformGrid,
) -> Result<GridFunction> {
    let mut seq = vec![*a0];
    for _ in 0..n {
        seq.push(apply_map(family, map, seq.last().unwrap())?);
    }
    for (k, q) in seq.iter().enumerate() {
        let dom = family.domain_of(q);
        if let Some(p) = dom.poles.iter().find(|p| **p >= grid.lo && **p <= grid.hi) {
            return Err(Error::PoleInChain { level: k, pole: *p });
        }
    }
    let mut psi = ground_state_from_w(family, &seq[n], grid, EXPONENT_CAP)?;
    for q in seq[..n].iter().rev() {
        psi = apply_raising(family, q, &psi)?;
    }
    normalize(&psi)
}

//! Cross-checks of the sextic closed forms against the finite-difference
//! oracle and the ladder operators.

use serde::Serialize;

use crate::error::Result;
use crate::grid::{GridFunction, UniformGrid};
use crate::ladder::{apply_raising, ground_state_from_w, normalize, overlap, EXPONENT_CAP};
use crate::oracle::{count_nodes, Parity, outer_turning_point, refine_until_converged, residual_norm, EigenProblem, Span};
use crate::sextic::{PartnerExpansion, SexticModel};
use crate::potential::Sign;

/// Grid used for the closed-form residuals.
pub const RESIDUAL_HALF_WIDTH: f64 = 2.5;
pub const RESIDUAL_POINTS: usize = 32_769;
pub const RESIDUAL_LIMIT: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSuite {
    pub grid: UniformGrid,
    pub epsilon: f64,
    pub e1: f64,
    /// None when the recursion cannot reach level 2.
    pub e2: Option<f64>,
    pub e2_failure: Option<String>,
    pub psi1_residual: f64,
    pub psi2_residual: Option<f64>,
    /// Ψ₂ against the printed level formula for E₂.
    pub psi2_residual_printed_energy: f64,
    pub e2_printed: f64,
    /// Ψ₁ against the minus partner at a₀ with energy C₀.
    pub psi1_partner_residual: f64,
    pub psi1_partner_energy: f64,
    /// ⟨Ψ|H|Ψ⟩ for Ψ₁, Ψ₂ in the shifted potential and the residual there.
    pub rayleigh: [f64; 2],
    pub rayleigh_residual: [f64; 2],
    pub overlap_12: f64,
    pub pass: bool,
}

fn sampled(model: &SexticModel, n: usize, grid: UniformGrid) -> Result<GridFunction> {
    GridFunction::try_sample(grid, |x| model.wavefunction_analytic(n, x))
}

fn rayleigh(v: &GridFunction, psi: &GridFunction) -> f64 {
    let h = psi.grid.step();
    let p = &psi.values;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..p.len() - 1 {
        let d2 = (p[i - 1] - 2.0 * p[i] + p[i + 1]) / (h * h);
        num += p[i] * (-d2 + v.values[i] * p[i]);
        den += p[i] * p[i];
    }
    num / den
}

pub fn residual_suite(model: &SexticModel, grid: UniformGrid) -> Result<ResidualSuite> {
    let eps = model.epsilon_depth()?;
    let v = GridFunction::sample(grid, model.shifted(eps))?;
    let psi1 = normalize(&sampled(model, 1, grid)?)?;
    let psi2 = normalize(&sampled(model, 2, grid)?)?;
    let s1 = model.bound_energies(1)?;
    let e1 = s1.levels[1].energy;
    let (e2, e2_failure) = match model.bound_energies(2) {
        Ok(s) => (Some(s.levels[2].energy), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let e2_printed = model.bound_energy_printed(2, eps);
    let partner = PartnerExpansion::of(&model.a0, Sign::Minus);
    let v0 = GridFunction::sample(grid, |x| partner.value(x))?;
    let c0 = e1 - eps;
    let r1 = residual_norm(&v, &psi1, e1)?;
    let r2 = e2.map(|e| residual_norm(&v, &psi2, e)).transpose()?;
    let q1 = rayleigh(&v, &psi1);
    let q2 = rayleigh(&v, &psi2);
    let pass = r1 < RESIDUAL_LIMIT && r2.is_some_and(|r| r < RESIDUAL_LIMIT);
    Ok(ResidualSuite {
        grid,
        epsilon: eps,
        e1,
        e2,
        e2_failure,
        psi1_residual: r1,
        psi2_residual: r2,
        psi2_residual_printed_energy: residual_norm(&v, &psi2, e2_printed)?,
        e2_printed,
        psi1_partner_residual: residual_norm(&v0, &psi1, c0)?,
        psi1_partner_energy: c0,
        rayleigh: [q1, q2],
        rayleigh_residual: [residual_norm(&v, &psi1, q1)?, residual_norm(&v, &psi2, q2)?],
        overlap_12: overlap(&psi1, &psi2)?,
        pass,
    })
}

pub fn default_residual_grid() -> UniformGrid {
    UniformGrid::symmetric(RESIDUAL_HALF_WIDTH, RESIDUAL_POINTS).expect("valid residual grid")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pairing {
    /// 1 or 2.
    pub analytic_level: usize,
    pub oracle_index: usize,
    pub overlap: f64,
    pub oracle_energy: f64,
    pub oracle_extrapolated: f64,
    pub reference_energy: Option<f64>,
    pub relative_error: Option<f64>,
    pub relative_error_extrapolated: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub grid: UniformGrid,
    pub eigenvalues: Vec<f64>,
    pub extrapolated: Vec<f64>,
    pub nodes: Vec<usize>,
    pub pairings: Vec<Pairing>,
    pub fictitious: FictitiousReport,
    pub pass: bool,
}

/// The oracle's lowest state against the analytic E₀ = ε.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FictitiousReport {
    pub lowest_eigenvalue: f64,
    pub lowest_extrapolated: f64,
    pub node_count: usize,
    pub parity: Option<Parity>,
    /// Gap to the next oracle level; tiny for a tunnelling doublet, in
    /// which case the order within the pair is not physical.
    pub doublet_gap: f64,
    pub offset_from_epsilon: f64,
    /// |fine − extrapolated| relative to max(1, |E|).
    pub convergence_estimate: f64,
    pub converged: bool,
}

pub const ORACLE_LEVELS: usize = 6;
pub const ORACLE_TOL: f64 = 1e-6;

pub fn oracle_comparison(model: &SexticModel, target_tol: f64) -> Result<OracleComparison> {
    let eps = model.epsilon_depth()?;
    let v = model.shifted(eps);
    let e1 = model.bound_energies(1)?.levels[1].energy;
    let e2_printed = model.bound_energy_printed(2, eps);
    let top = e2_printed.max(e1) * 1.5;
    let reach = outer_turning_point(&v, top, 10.0).max(0.5);
    let problem = EigenProblem {
        potential: &v,
        span: Span::Symmetric {
            half_width: 1.5 * reach,
            parity: true,
        },
        k: ORACLE_LEVELS,
        initial_points: 1025,
    };
    let res = refine_until_converged(&problem, target_tol)?;
    let extrapolated = res.richardson.clone().unwrap_or_else(|| res.eigenvalues.clone());
    let nodes: Vec<usize> = res.eigenvectors.iter().map(count_nodes).collect();
    let e2 = model.bound_energies(2).ok().map(|s| s.levels[2].energy);
    let mut pairings = Vec::new();
    for (level, reference) in [(1usize, Some(e1)), (2, e2)] {
        let psi = normalize(&sampled(model, level, res.grid)?)?;
        let (idx, ov) = res
            .eigenvectors
            .iter()
            .enumerate()
            .map(|(i, u)| (i, overlap(&psi, u).map(f64::abs).unwrap_or(0.0)))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        let rel = |e: f64| reference.map(|r| (e - r).abs() / r.abs());
        pairings.push(Pairing {
            analytic_level: level,
            oracle_index: idx,
            overlap: ov,
            oracle_energy: res.eigenvalues[idx],
            oracle_extrapolated: extrapolated[idx],
            reference_energy: reference,
            relative_error: rel(res.eigenvalues[idx]),
            relative_error_extrapolated: rel(extrapolated[idx]),
        });
    }
    let pass = pairings.iter().all(|p| {
        p.overlap > 0.999
            && p.relative_error.is_some_and(|e| e < 1e-3)
            && p.relative_error_extrapolated.is_some_and(|e| e < 1e-5)
    });
    let lowest = res.eigenvalues[0];
    let est = (lowest - extrapolated[0]).abs() / lowest.abs().max(1.0);
    Ok(OracleComparison {
        grid: res.grid,
        fictitious: FictitiousReport {
            lowest_eigenvalue: lowest,
            lowest_extrapolated: extrapolated[0],
            node_count: nodes[0],
            parity: res.parities.as_ref().map(|p| p[0]),
            doublet_gap: res.eigenvalues[1] - lowest,
            offset_from_epsilon: extrapolated[0] - eps,
            convergence_estimate: est,
            converged: est < 1e-4,
        },
        eigenvalues: res.eigenvalues,
        extrapolated,
        nodes,
        pairings,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderCoherence {
    pub window: UniformGrid,
    pub pole: f64,
    pub overlap: f64,
    pub pass: bool,
}

/// A†(a₀) on the H₊(a₀) ground state e^{−∫W(a₁)} against the closed-form
/// first excited state, on a window inside the poles of W(a₁).
pub fn ladder_coherence(model: &SexticModel, points: usize) -> Result<LadderCoherence> {
    let pole = 1.0 / (model.cfg.g0 - 2.0 * model.cfg.b0).sqrt();
    let window = UniformGrid::symmetric(0.97 * pole, points | 1)?;
    let f = model.family();
    let ground = ground_state_from_w(f, &model.a1, &window, EXPONENT_CAP)?;
    let up = normalize(&apply_raising(f, &model.a0, &ground)?)?;
    let reference = normalize(&sampled(model, 1, window)?)?;
    let ov = overlap(&up, &reference)?.abs();
    Ok(LadderCoherence {
        window,
        pole,
        overlap: ov,
        pass: ov > 0.999,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sextic::SexticConfig;

    #[test]
    fn ladder_from_plus_ground_state() {
        let m = SexticModel::new(SexticConfig::reference()).unwrap();
        let c = ladder_coherence(&m, 4001).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn first_state_solves_level_zero_partner() {
        let m = SexticModel::new(SexticConfig::reference()).unwrap();
        let s = residual_suite(&m, default_residual_grid()).unwrap();
        assert!(s.psi1_partner_residual < 1e-5, "{s:?}");
        assert!(s.overlap_12.abs() < 1e-10);
        assert!(s.e2.is_none());
    }
}

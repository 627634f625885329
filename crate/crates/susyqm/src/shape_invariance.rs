//! Parameter-change maps, level shifts and the energy recursion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::potential::{FamilyId, FamilySpec, Params, Sign};

/// Default relative tolerance on level-shift residuals.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default number of points for level-shift grids.
pub const DEFAULT_SHIFT_POINTS: usize = 2001;

/// Sign flips applied to the sextic linear map
/// a₁ = −M a₀ − 2B₀ b with M = diag(1, 1, −1, 1), b = (0, 0, 2, −1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SexticSigns {
    pub flip_m_d: bool,
    pub flip_m_g: bool,
    pub flip_b_d: bool,
    pub flip_b_g: bool,
}

impl SexticSigns {
    pub fn all() -> Vec<SexticSigns> {
        (0..16u8)
            .map(|m| SexticSigns {
                flip_m_d: m & 1 != 0,
                flip_m_g: m & 2 != 0,
                flip_b_d: m & 4 != 0,
                flip_b_g: m & 8 != 0,
            })
            .collect()
    }

    fn diag(&self) -> [f64; 4] {
        let s = |flip: bool, v: f64| if flip { -v } else { v };
        [1.0, 1.0, s(self.flip_m_d, -1.0), s(self.flip_m_g, 1.0)]
    }

    fn shift(&self) -> [f64; 4] {
        let s = |flip: bool, v: f64| if flip { -v } else { v };
        [0.0, 0.0, s(self.flip_b_d, 2.0), s(self.flip_b_g, -1.0)]
    }

    /// k-th point from the closed form (−1)^k M a₀ + 2(−1)^k k B₀ b.
    pub fn closed_form(&self, a0: &Params, k: usize) -> Result<Params> {
        if k == 0 {
            return Ok(*a0);
        }
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        let (m, b, v) = (self.diag(), self.shift(), a0.as_array());
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = sgn * m[i] * v[i] + 2.0 * sgn * k as f64 * a0.b * b[i];
        }
        Params::from_array(out)
    }

    pub fn step(&self, q: &Params) -> Result<Params> {
        self.closed_form(q, 1)
    }
}

/// A parameter-change map. `Printed` is the table column (or the sextic
/// linear map as printed); the others are corrections found by checking
/// shape invariance directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParamMap {
    Printed,
    Rederived,
    SexticVariant(SexticSigns),
    SexticTableRow,
}

impl ParamMap {
    pub fn label(&self) -> String {
        match self {
            ParamMap::Printed => "printed".into(),
            ParamMap::Rederived => "rederived".into(),
            ParamMap::SexticTableRow => "sextic-table-row".into(),
            ParamMap::SexticVariant(s) => format!(
                "sextic-signs[m_d={},m_g={},b_d={},b_g={}]",
                s.flip_m_d as u8, s.flip_m_g as u8, s.flip_b_d as u8, s.flip_b_g as u8
            ),
        }
    }
}

/// The as-printed map.
pub fn next_params(family: &FamilySpec, q: &Params) -> Result<Params> {
    let p = family.scale;
    let (a, b) = (q.a, q.b);
    match family.id {
        FamilyId::Harmonic => Ok(*q),
        FamilyId::Coulomb => Params::pair(a * a / (1.0 + b), 1.0 + b),
        FamilyId::Oscillator3D => Params::pair(a, 1.0 + b),
        FamilyId::Morse | FamilyId::ScarfII | FamilyId::PoschlTellerI => Params::pair(a - p, b),
        FamilyId::RosenMorseI | FamilyId::RosenMorseII => {
            Params::pair(a - p, (a + b) / (a - p))
        }
        FamilyId::Eckart => Params::pair(a + p, (a + b) / (a + p)),
        FamilyId::ScarfI => Params::pair(a + p, b),
        FamilyId::PoschlTellerII => Params::pair(a - p, b + p),
        FamilyId::DoubleAngle => Params::pair(a - p, b - 2.0 * p),
        FamilyId::QuadrupleAngle => Params::pair(a - p, b - 4.0 * p),
        FamilyId::Sextic => SexticSigns::default().step(q),
    }
}

fn rederived_params(family: &FamilySpec, q: &Params) -> Result<Params> {
    let p = family.scale;
    let (a, b) = (q.a, q.b);
    match family.id {
        FamilyId::Coulomb => Params::pair(a * b / (b + 1.0), b + 1.0),
        FamilyId::RosenMorseI | FamilyId::RosenMorseII => Params::pair(a - p, a * b / (a - p)),
        FamilyId::Eckart => Params::pair(a + p, a * b / (a + p)),
        _ => Err(Error::UnsupportedFamily {
            family: family.id.to_string(),
            what: "re-derived map".into(),
        }),
    }
}

pub fn apply_map(family: &FamilySpec, map: ParamMap, q: &Params) -> Result<Params> {
    match map {
        ParamMap::Printed => next_params(family, q),
        ParamMap::Rederived => rederived_params(family, q),
        ParamMap::SexticVariant(s) if family.id == FamilyId::Sextic => s.step(q),
        ParamMap::SexticTableRow if family.id == FamilyId::Sextic => {
            Params::new(q.a, -q.b, 4.0 * q.b - q.d, 0.5 * q.g * (2.0 * q.b - q.g))
        }
        _ => Err(Error::UnsupportedFamily {
            family: family.id.to_string(),
            what: map.label(),
        }),
    }
}

/// Maps tried by the resolver, printed first.
pub fn candidate_maps(family: &FamilySpec) -> Vec<ParamMap> {
    let mut out = vec![ParamMap::Printed];
    match family.id {
        FamilyId::Coulomb | FamilyId::RosenMorseI | FamilyId::RosenMorseII | FamilyId::Eckart => {
            out.push(ParamMap::Rederived)
        }
        FamilyId::Sextic => {
            out.extend(
                SexticSigns::all()
                    .into_iter()
                    .filter(|s| *s != SexticSigns::default())
                    .map(ParamMap::SexticVariant),
            );
            out.push(ParamMap::SexticTableRow);
        }
        _ => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    pub k: usize,
    pub closed_form: Params,
    pub abs_diff: [f64; 4],
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSequence {
    pub family: FamilyId,
    pub map: ParamMap,
    pub entries: Vec<Params>,
    /// Sextic only: stepwise entries against the closed form, per component.
    pub closed_form_checks: Vec<ClosedFormCheck>,
}

pub fn param_sequence(
    family: &FamilySpec,
    map: ParamMap,
    a0: &Params,
    n: usize,
) -> Result<ParamSequence> {
    let mut entries = vec![*a0];
    for _ in 0..n {
        let next = apply_map(family, map, entries.last().unwrap())?;
        entries.push(next);
    }
    let signs = match (family.id, map) {
        (FamilyId::Sextic, ParamMap::Printed) => Some(SexticSigns::default()),
        (FamilyId::Sextic, ParamMap::SexticVariant(s)) => Some(s),
        _ => None,
    };
    let mut closed_form_checks = Vec::new();
    if let Some(s) = signs {
        for (k, e) in entries.iter().enumerate().skip(1) {
            let c = s.closed_form(a0, k)?;
            let (ea, ca) = (e.as_array(), c.as_array());
            let mut abs_diff = [0.0; 4];
            for i in 0..4 {
                abs_diff[i] = (ea[i] - ca[i]).abs();
            }
            let agrees = (0..4).all(|i| abs_diff[i] <= 1e-12 * ea[i].abs().max(1.0));
            closed_form_checks.push(ClosedFormCheck {
                k,
                closed_form: c,
                abs_diff,
                agrees,
            });
        }
    }
    Ok(ParamSequence {
        family: family.id,
        map,
        entries,
        closed_form_checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeInvarianceReport {
    pub level: usize,
    pub shift: f64,
    pub residual: f64,
    pub params: Params,
    pub next: Params,
    pub grid: UniformGrid,
    pub points_used: usize,
}

impl ShapeInvarianceReport {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.shift.abs().max(1.0)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol * self.shift.abs().max(1.0)
    }
}

/// Level-shift grid over the family's reference window.
pub fn default_grid(family: &FamilySpec, a0: &Params) -> UniformGrid {
    let (lo, hi) = family.reference_window(a0);
    UniformGrid {
        lo,
        hi,
        n: DEFAULT_SHIFT_POINTS,
    }
}

/// C = mean of V₊(a_k) − V₋(a_{k+1}) over admissible grid points, and the
/// maximum deviation from it. Points close to a pole of either W are
/// dropped: W² and W′ both blow up there and their difference loses all
/// significant digits.
pub fn level_shift(
    family: &FamilySpec,
    map: ParamMap,
    params: &Params,
    level: usize,
    grid: &UniformGrid,
) -> Result<ShapeInvarianceReport> {
    let next = apply_map(family, map, params)?;
    let (d0, d1) = (family.domain_of(params), family.domain_of(&next));
    let margin = family.exclusion.max(1e-3 * 0.5 * (grid.hi - grid.lo));
    let poles: Vec<f64> = d0.poles.iter().chain(d1.poles.iter()).copied().collect();
    let mut diffs = Vec::with_capacity(grid.n);
    for x in grid.points() {
        if !d0.contains(x, family.exclusion) || !d1.contains(x, family.exclusion) {
            continue;
        }
        if poles.iter().any(|p| (x - p).abs() <= margin) {
            continue;
        }
        let vp = family.partner(params, x, Sign::Plus)?;
        let vm = family.partner(&next, x, Sign::Minus)?;
        diffs.push(vp - vm);
    }
    if diffs.is_empty() {
        return Err(Error::Domain {
            x: grid.lo,
            reason: "no admissible grid point for both parameter points".into(),
        });
    }
    let shift = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let residual = diffs.iter().fold(0.0_f64, |m, d| m.max((d - shift).abs()));
    if !(shift.is_finite() && residual.is_finite()) {
        return Err(Error::NonFinite(format!("level shift at level {level}")));
    }
    Ok(ShapeInvarianceReport {
        level,
        shift,
        residual,
        params: *params,
        next,
        grid: *grid,
        points_used: diffs.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub family: FamilyId,
    pub map: ParamMap,
    pub tol: f64,
    pub reports: Vec<ShapeInvarianceReport>,
    pub pass: bool,
}

pub fn verify_shape_invariance(
    family: &FamilySpec,
    map: ParamMap,
    a0: &Params,
    levels: usize,
    grid: &UniformGrid,
    tol: f64,
) -> Result<VerifyOutcome> {
    if levels == 0 {
        return Err(Error::InvalidInput("at least one level is required".into()));
    }
    let mut reports = Vec::with_capacity(levels);
    let mut q = *a0;
    for k in 0..levels {
        let r = level_shift(family, map, &q, k, grid)?;
        q = r.next;
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.passes(tol));
    Ok(VerifyOutcome {
        family: family.id,
        map,
        tol,
        reports,
        pass,
    })
}

/// One catalog family walked over its in-domain levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRow {
    pub family: FamilyId,
    pub a0: Params,
    pub resolution: MapResolution,
    /// Levels whose parameters stay on the family's manifold.
    pub in_domain_levels: Vec<usize>,
    pub reports: Vec<ShapeInvarianceReport>,
    /// The printed map over the same levels.
    pub printed_pass: bool,
    pub pass: bool,
}

fn walk(
    family: &FamilySpec,
    map: ParamMap,
    a0: &Params,
    levels: usize,
    grid: &UniformGrid,
) -> (Vec<usize>, Vec<Result<ShapeInvarianceReport>>) {
    let mut q = *a0;
    let mut idx = Vec::new();
    let mut out = Vec::new();
    for k in 0..levels {
        if !family.in_param_domain(&q) {
            break;
        }
        let r = level_shift(family, map, &q, k, grid);
        idx.push(k);
        let next = r.as_ref().map(|r| r.next).map_err(|_| ());
        out.push(r);
        match next {
            Ok(n) => q = n,
            Err(_) => break,
        }
    }
    (idx, out)
}

/// Resolves the map and checks levels `0..levels` at the reference
/// parameters, stopping once a level leaves the parameter manifold.
pub fn catalog_row(family: &FamilySpec, levels: usize, tol: f64) -> Result<CatalogRow> {
    let a0 = family.reference_params();
    let grid = default_grid(family, &a0);
    let resolution = resolve_map(family, &a0, &grid, tol)?;
    let (idx, results) = walk(family, resolution.chosen, &a0, levels, &grid);
    let pass = !results.is_empty() && results.iter().all(|r| r.as_ref().is_ok_and(|r| r.passes(tol)));
    let reports = results.into_iter().filter_map(|r| r.ok()).collect();
    let (_, printed) = walk(family, ParamMap::Printed, &a0, levels, &grid);
    let printed_pass = !printed.is_empty() && printed.iter().all(|r| r.as_ref().is_ok_and(|r| r.passes(tol)));
    Ok(CatalogRow {
        family: family.id,
        a0,
        resolution,
        in_domain_levels: idx,
        reports,
        printed_pass,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Recursion,
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMeta {
    pub tol: f64,
    pub grid: Option<UniformGrid>,
    pub shifts: Vec<f64>,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub provenance: Provenance,
    pub meta: SpectrumMeta,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// E₀ = 0, E_n = Σ_{k<n} C_k; fails at the first level whose residual
/// exceeds tol·max(1, |C_k|).
pub fn energies_recursive(
    family: &FamilySpec,
    map: ParamMap,
    a0: &Params,
    n_max: usize,
    grid: &UniformGrid,
    tol: f64,
) -> Result<Spectrum> {
    let mut levels = vec![Level { n: 0, energy: 0.0 }];
    let (mut shifts, mut residuals) = (Vec::new(), Vec::new());
    let mut q = *a0;
    let mut e = 0.0;
    for k in 0..n_max {
        let r = level_shift(family, map, &q, k, grid)?;
        if !r.passes(tol) {
            return Err(Error::ShapeInvarianceViolation {
                level: k,
                residual: r.residual,
                threshold: tol * r.shift.abs().max(1.0),
            });
        }
        e += r.shift;
        levels.push(Level { n: k + 1, energy: e });
        shifts.push(r.shift);
        residuals.push(r.residual);
        q = r.next;
    }
    Ok(Spectrum {
        levels,
        provenance: Provenance::Recursion,
        meta: SpectrumMeta {
            tol,
            grid: Some(*grid),
            shifts,
            residuals,
        },
    })
}

/// The printed energy column (sextic: the general level formula).
pub fn energy_closed_form(family: &FamilySpec, a0: &Params, n: usize) -> Result<f64> {
    let p = family.scale;
    let (a, b) = (a0.a, a0.b);
    let nf = n as f64;
    let e = match family.id {
        FamilyId::Harmonic => 2.0 * a * nf,
        FamilyId::Coulomb => a * a - ((a - b) / (b + nf)).powi(2),
        FamilyId::Oscillator3D => 4.0 * a * nf,
        FamilyId::Morse | FamilyId::ScarfII | FamilyId::PoschlTellerI => {
            a * a - (a - p * nf).powi(2)
        }
        FamilyId::RosenMorseI => {
            b * b - a * a - (a * a * b * b / ((a - p) * nf)).powi(2) - (a - p * nf).powi(2)
        }
        FamilyId::RosenMorseII | FamilyId::Eckart => {
            a * a + b * b - ((a + p * nf).powi(2) + a * a * b * b / ((a + p) * nf * nf))
        }
        FamilyId::ScarfI => -a * a + (a + p * nf).powi(2),
        FamilyId::PoschlTellerII => (a - b).powi(2) - (a - 2.0 * p * nf).powi(2),
        FamilyId::DoubleAngle => (a + b).powi(2) - (a + b - 3.0 * nf).powi(2),
        FamilyId::QuadrupleAngle => (a + b).powi(2) - (a + b - (3.0 * nf + 2.0) * p).powi(2),
        FamilyId::Sextic => {
            let (b0, g0) = (a0.b, a0.g);
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            4.0 * sgn * b0 + 4.0 * (2.0 * b0 - g0 + nf * b0) * g0 / (-g0 + 2.0 * b0 * nf)
        }
    };
    if e.is_finite() {
        Ok(e)
    } else {
        Err(Error::NonFinite(format!("printed energy of {} at n = {n}", family.id)))
    }
}

/// Closed forms obtained by summing the re-derived shifts, where they
/// differ from the printed column.
pub fn energy_rederived(family: &FamilySpec, a0: &Params, n: usize) -> Option<f64> {
    let p = family.scale;
    let (a, b) = (a0.a, a0.b);
    let nf = n as f64;
    let v = match family.id {
        FamilyId::Coulomb => a * a - (a * b / (b + nf)).powi(2),
        FamilyId::RosenMorseI => {
            let an = a - nf * p;
            an * an - a * a + b * b - (a * b / an).powi(2)
        }
        FamilyId::RosenMorseII => {
            let an = a - nf * p;
            a * a + b * b - an * an - (a * b / an).powi(2)
        }
        FamilyId::Eckart => {
            let an = a + nf * p;
            a * a + b * b - an * an - (a * b / an).powi(2)
        }
        FamilyId::PoschlTellerII => (a - b).powi(2) - (a - b - 2.0 * p * nf).powi(2),
        _ => return None,
    };
    v.is_finite().then_some(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScore {
    pub map: ParamMap,
    pub shift: Option<f64>,
    pub residual: Option<f64>,
    pub relative_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapResolution {
    pub family: FamilyId,
    pub chosen: ParamMap,
    pub printed_passes: bool,
    pub chosen_relative_residual: f64,
    pub candidates: Vec<CandidateScore>,
}

/// Keeps the printed map when it passes at level 0, otherwise picks the
/// candidate with the smallest relative residual.
pub fn resolve_map(
    family: &FamilySpec,
    a0: &Params,
    grid: &UniformGrid,
    tol: f64,
) -> Result<MapResolution> {
    let candidates: Vec<CandidateScore> = candidate_maps(family)
        .into_iter()
        .map(|map| match level_shift(family, map, a0, 0, grid) {
            Ok(r) => CandidateScore {
                map,
                shift: Some(r.shift),
                residual: Some(r.residual),
                relative_residual: Some(r.relative_residual()),
            },
            Err(_) => CandidateScore {
                map,
                shift: None,
                residual: None,
                relative_residual: None,
            },
        })
        .collect();
    let printed = candidates[0].relative_residual;
    let printed_passes = printed.is_some_and(|r| r <= tol);
    let best = if printed_passes {
        &candidates[0]
    } else {
        candidates
            .iter()
            .filter(|c| c.relative_residual.is_some())
            .min_by(|x, y| x.relative_residual.partial_cmp(&y.relative_residual).unwrap())
            .ok_or_else(|| Error::ShapeInvarianceViolation {
                level: 0,
                residual: f64::INFINITY,
                threshold: tol,
            })?
    };
    Ok(MapResolution {
        family: family.id,
        chosen: best.map,
        printed_passes,
        chosen_relative_residual: best.relative_residual.unwrap(),
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::lookup;

    fn grid(f: &FamilySpec, q: &Params) -> UniformGrid {
        default_grid(f, q)
    }

    #[test]
    fn catalog_rows_pass() {
        for f in crate::potential::catalog() {
            let row = catalog_row(&f, 5, DEFAULT_TOL).unwrap();
            assert!(row.pass, "{:?} {:?}", f.id, row.reports.iter().map(|r| r.relative_residual()).collect::<Vec<_>>());
            let one_step = matches!(f.id, FamilyId::DoubleAngle | FamilyId::QuadrupleAngle | FamilyId::Sextic);
            assert_eq!(row.in_domain_levels.len(), if one_step { 1 } else { 5 }, "{:?}", f.id);
        }
        for id in [FamilyId::Harmonic, FamilyId::Morse, FamilyId::Oscillator3D, FamilyId::ScarfII, FamilyId::PoschlTellerII] {
            assert!(catalog_row(&lookup(id), 5, DEFAULT_TOL).unwrap().printed_pass, "{id:?}");
        }
    }

    #[test]
    fn printed_map_examples() {
        let h = lookup(FamilyId::Harmonic);
        let q = Params::pair(1.5, 0.3).unwrap();
        assert_eq!(next_params(&h, &q).unwrap(), q);
        let s = lookup(FamilyId::Sextic);
        let a0 = Params::new(-0.105, 1.0, -4.2, 2.1).unwrap();
        let a1 = next_params(&s, &a0).unwrap();
        let want = [0.105, -1.0, -8.2, -0.1];
        for (x, y) in a1.as_array().iter().zip(want) {
            assert!((x - y).abs() < 1e-14);
        }
        let m = lookup(FamilyId::Morse);
        assert_eq!(next_params(&m, &Params::pair(2.0, 3.0).unwrap()).unwrap(), Params::pair(1.0, 3.0).unwrap());
    }

    #[test]
    fn harmonic_shift() {
        let h = lookup(FamilyId::Harmonic);
        let q = Params::pair(1.0, 0.0).unwrap();
        let r = level_shift(&h, ParamMap::Printed, &q, 0, &grid(&h, &q)).unwrap();
        assert!((r.shift - 2.0).abs() < 1e-12);
        assert!(r.residual < 1e-12);
        let s = energies_recursive(&h, ParamMap::Printed, &q, 3, &grid(&h, &q), DEFAULT_TOL).unwrap();
        let e = s.energies();
        for (n, v) in e.iter().enumerate() {
            assert!((v - 2.0 * n as f64).abs() < 1e-10);
        }
        assert_eq!(s.provenance, Provenance::Recursion);
    }

    #[test]
    fn morse_shift() {
        let m = lookup(FamilyId::Morse);
        let q = Params::pair(2.0, 1.0).unwrap();
        let r = level_shift(&m, ParamMap::Printed, &q, 0, &grid(&m, &q)).unwrap();
        assert!((r.shift - 3.0).abs() < 1e-10);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn scarf_ii_three_levels() {
        let f = lookup(FamilyId::ScarfII);
        let q = Params::pair(2.0, 1.0).unwrap();
        let v = verify_shape_invariance(&f, ParamMap::Printed, &q, 3, &grid(&f, &q), DEFAULT_TOL).unwrap();
        assert!(v.pass);
        for r in &v.reports {
            let a = r.params.a;
            assert!((r.shift - (a * a - (a - 1.0).powi(2))).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_levels_is_just_ground() {
        for f in crate::potential::catalog() {
            let q = f.reference_params();
            let s = energies_recursive(&f, ParamMap::Printed, &q, 0, &grid(&f, &q), DEFAULT_TOL).unwrap();
            assert_eq!(s.energies(), vec![0.0]);
            let seq = param_sequence(&f, ParamMap::Printed, &q, 0).unwrap();
            assert_eq!(seq.entries, vec![q]);
        }
    }

    #[test]
    fn closed_form_examples() {
        let h = lookup(FamilyId::Harmonic);
        assert_eq!(energy_closed_form(&h, &Params::pair(1.0, 0.0).unwrap(), 4).unwrap(), 8.0);
        let m = lookup(FamilyId::Morse);
        assert_eq!(energy_closed_form(&m, &Params::pair(2.0, 0.0).unwrap(), 1).unwrap(), 3.0);
        let s = lookup(FamilyId::Sextic);
        let a0 = Params::new(-0.105, 1.0, -4.2, 2.1).unwrap();
        let e0 = energy_closed_form(&s, &a0, 0).unwrap();
        assert!((e0 - (4.0 * 2.1 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn sextic_sequence_closed_form_components() {
        let s = lookup(FamilyId::Sextic);
        let a0 = s.reference_params();
        let seq = param_sequence(&s, ParamMap::Printed, &a0, 2).unwrap();
        let a2 = seq.entries[2];
        assert!((a2.b - a0.b).abs() < 1e-14);
        assert!((a2.g - (a0.g - 4.0 * a0.b)).abs() < 1e-13);
        let c2 = &seq.closed_form_checks[1];
        assert!(c2.abs_diff[1] < 1e-14 && c2.abs_diff[3] < 1e-13);
        assert!(c2.abs_diff[2] > 1.0);
        assert!(!c2.agrees);
        assert!(seq.closed_form_checks[0].agrees);
    }

    #[test]
    fn sextic_printed_map_fails_and_resolver_fixes_level_zero() {
        let s = lookup(FamilyId::Sextic);
        let a0 = s.reference_params();
        let g = grid(&s, &a0);
        let res = resolve_map(&s, &a0, &g, DEFAULT_TOL).unwrap();
        assert!(!res.printed_passes);
        let want = SexticSigns {
            flip_b_d: true,
            ..Default::default()
        };
        assert_eq!(res.chosen, ParamMap::SexticVariant(want));
        let r = level_shift(&s, res.chosen, &a0, 0, &g).unwrap();
        assert!(r.passes(DEFAULT_TOL));
        assert!((r.shift - 4.0 * (a0.g - a0.b)).abs() < 1e-9);
        let err = energies_recursive(&s, res.chosen, &a0, 2, &g, DEFAULT_TOL).unwrap_err();
        assert!(matches!(err, Error::ShapeInvarianceViolation { level: 1, .. }));
    }

    #[test]
    fn rederived_maps_win_where_printed_fail() {
        for id in [FamilyId::Coulomb, FamilyId::RosenMorseI, FamilyId::RosenMorseII, FamilyId::Eckart] {
            let f = lookup(id);
            let q = f.reference_params();
            let res = resolve_map(&f, &q, &grid(&f, &q), DEFAULT_TOL).unwrap();
            assert!(!res.printed_passes, "{id}");
            assert_eq!(res.chosen, ParamMap::Rederived, "{id}");
            let s = energies_recursive(&f, res.chosen, &q, 4, &grid(&f, &q), DEFAULT_TOL).unwrap();
            for (n, e) in s.energies().iter().enumerate() {
                let c = energy_rederived(&f, &q, n).unwrap();
                assert!((e - c).abs() <= 1e-8 * e.abs().max(1.0), "{id} n={n}: {e} vs {c}");
            }
        }
    }

    #[test]
    fn validated_closed_forms_match_recursion() {
        for id in [FamilyId::Harmonic, FamilyId::Morse, FamilyId::Oscillator3D] {
            let f = lookup(id);
            let q = f.reference_params();
            let s = energies_recursive(&f, ParamMap::Printed, &q, 4, &grid(&f, &q), DEFAULT_TOL).unwrap();
            for l in &s.levels {
                let c = energy_closed_form(&f, &q, l.n).unwrap();
                assert!((l.energy - c).abs() <= 1e-8 * l.energy.abs().max(1.0), "{id}");
            }
        }
    }

    #[test]
    fn angle_families_hold_one_step_on_their_manifold() {
        for (id, c) in [(FamilyId::DoubleAngle, 9.0), (FamilyId::QuadrupleAngle, 45.0)] {
            let f = lookup(id);
            let q = f.reference_params();
            assert!(f.in_param_domain(&q));
            let v = verify_shape_invariance(&f, ParamMap::Printed, &q, 2, &grid(&f, &q), DEFAULT_TOL).unwrap();
            assert!(v.reports[0].passes(DEFAULT_TOL));
            assert!((v.reports[0].shift - c).abs() < 1e-9);
            assert!(!f.in_param_domain(&v.reports[0].next));
            assert!(!v.reports[1].passes(DEFAULT_TOL));
        }
    }
}

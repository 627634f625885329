use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use susyqm::checks::{
    default_residual_grid, ladder_coherence, oracle_comparison, residual_suite, LadderCoherence, OracleComparison,
    ResidualSuite, ORACLE_TOL, RESIDUAL_LIMIT,
};
use susyqm::grid::{GridFunction, UniformGrid};
use susyqm::ladder::{excited_state, normalize};
use susyqm::oracle::{refine_until_converged, EigenProblem, Span};
use susyqm::potential::{catalog, lookup, DomainKind, FamilyId, FamilySpec, Params, Sign};
use susyqm::sextic::{
    reference_g0, normalizability_class, scan_rho, GapRatioReport, Normalizability, NormalizabilityReport,
    Reconciled, ScanSpec, SexticConfig, SexticModel, WellClass, WellGeometry, PRINTED_RHO_BOUND,
};
use susyqm::shape_invariance::{
    catalog_row, default_grid, energies_recursive, energy_closed_form, energy_rederived, resolve_map, CatalogRow,
    MapResolution, DEFAULT_TOL,
};

use crate::output::{LedgerEntry, OutFile, RunOutcome};
use crate::{Cli, CliError, CliResult, Command, FamilyArgs, Format, GlobalArgs, Method, SampleKind, Scope};

pub const CATALOG_LEVELS: usize = 5;
pub const DEFAULT_SAMPLE_POINTS: usize = 2001;
pub const FIGURE_HALF_WIDTH: f64 = 1.5;
const OVERLAP_MIN: f64 = 0.999;

enum Selected {
    Catalog(FamilySpec, Params),
    Sextic(SexticConfig),
}

fn select(args: &FamilyArgs, default: Option<FamilyId>) -> CliResult<Selected> {
    let id = match (&args.family, default) {
        (Some(name), _) => FamilyId::from_str(name)?,
        (None, Some(id)) => id,
        (None, None) => return Err(CliError::Usage("--family is required".into())),
    };
    if id == FamilyId::Sextic {
        if args.a.is_some() || args.d.is_some() || args.g.is_some() {
            return Err(CliError::Usage("the sextic family takes --B0 and --G0".into()));
        }
        let cfg = match (args.b0, args.g0) {
            (None, None) => SexticConfig::new(100.0, reference_g0())?,
            (Some(b), Some(g)) => SexticConfig::new(b, g)?,
            (None, Some(_)) | (Some(_), None) => {
                return Err(CliError::Usage("--B0 and --G0 must be given together".into()))
            }
        };
        return Ok(Selected::Sextic(cfg));
    }
    let mut spec = lookup(id);
    if let Some(p) = args.p {
        spec = spec.with_scale(p)?;
    }
    let r = spec.reference_params();
    let params = Params::new(
        args.a.unwrap_or(r.a),
        args.b.unwrap_or(r.b),
        args.d.unwrap_or(r.d),
        args.g.unwrap_or(r.g),
    )?;
    Ok(Selected::Catalog(spec, params))
}

fn family_args_json(args: &FamilyArgs) -> Value {
    json!({
        "family": args.family, "A": args.a, "B": args.b, "D": args.d, "G": args.g,
        "p": args.p, "B0": args.b0, "G0": args.g0,
    })
}

fn global_json(g: &GlobalArgs) -> Value {
    json!({
        "grid_points": g.grid_points, "domain_halfwidth": g.domain_halfwidth, "tol": g.tol,
        "format": match g.format { Format::Json => "json", Format::Csv => "csv" },
    })
}

fn tolerances(g: &GlobalArgs) -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("shape_invariance".to_string(), g.tol.unwrap_or(DEFAULT_TOL)),
        ("oracle_refinement".to_string(), ORACLE_TOL),
        ("schrodinger_residual".to_string(), RESIDUAL_LIMIT),
        ("overlap_min".to_string(), OVERLAP_MIN),
    ])
}

fn reconciled_ledger(context: &str, recs: &[Reconciled]) -> Vec<LedgerEntry> {
    recs.iter()
        .filter(|r| !r.agrees)
        .map(|r| LedgerEntry {
            context: context.to_string(),
            form: r.form.clone(),
            authoritative: r.authoritative.is_finite().then_some(r.authoritative),
            printed: r.printed.is_finite().then_some(r.printed),
            note: "printed form disagrees with the authoritative value".into(),
        })
        .collect()
}

fn resolution_ledger(res: &MapResolution) -> Option<LedgerEntry> {
    (!res.printed_passes).then(|| LedgerEntry {
        context: res.family.name().to_string(),
        form: "parameter map".into(),
        authoritative: Some(res.chosen_relative_residual),
        printed: res.candidates[0].relative_residual,
        note: format!("printed map fails level 0; using {}", res.chosen.label()),
    })
}

fn sextic_ledger(model: &SexticModel) -> CliResult<Vec<LedgerEntry>> {
    let mut out: Vec<LedgerEntry> = resolution_ledger(&model.resolution).into_iter().collect();
    out.extend(reconciled_ledger("sextic", &model.reconciliations()?));
    if let Err(e) = model.bound_energies(2) {
        out.push(LedgerEntry {
            context: "sextic".into(),
            form: "second excited energy".into(),
            authoritative: None,
            printed: None,
            note: format!("no authoritative value: {e}"),
        });
    }
    Ok(out)
}

pub fn dispatch(cli: &Cli) -> CliResult<RunOutcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Catalog => cmd_catalog(g),
        Command::Spectrum { family, n, method } => cmd_spectrum(g, family, *n, *method),
        Command::Sample { family, what, n } => cmd_sample(g, family, *what, *n),
        Command::Verify { scope, family } => cmd_verify(g, *scope, family),
        Command::Figure { family } => cmd_figure(g, family),
        Command::ScanRho { ratio_lo, ratio_hi, samples, b0 } => cmd_scan_rho(g, *ratio_lo, *ratio_hi, *samples, *b0),
    }
}

#[derive(Serialize)]
struct CatalogEntry {
    family: &'static str,
    arity: usize,
    scale: f64,
    domain: &'static str,
    domain_lo: f64,
    domain_hi: f64,
    reference_a: f64,
    reference_b: f64,
    printed_superpotential: &'static str,
    printed_next_params: &'static str,
    printed_energy: &'static str,
}

fn cmd_catalog(g: &GlobalArgs) -> CliResult<RunOutcome> {
    let rows: Vec<CatalogEntry> = catalog()
        .iter()
        .map(|f| {
            let r = f.reference_params();
            CatalogEntry {
                family: f.id.name(),
                arity: f.arity,
                scale: f.scale,
                domain: match f.domain.kind {
                    DomainKind::FullLine => "full-line",
                    DomainKind::HalfLine => "half-line",
                    DomainKind::Interval => "interval",
                },
                domain_lo: f.domain.lo,
                domain_hi: f.domain.hi,
                reference_a: r.a,
                reference_b: r.b,
                printed_superpotential: f.printed.superpotential,
                printed_next_params: f.printed.next_params,
                printed_energy: f.printed.energy,
            }
        })
        .collect();
    let file = match g.format {
        Format::Json => OutFile::json("catalog.json", &rows)?,
        Format::Csv => OutFile::csv("catalog.csv", &rows)?,
    };
    Ok(RunOutcome::new(
        "catalog",
        json!({ "global": global_json(g) }),
        tolerances(g),
        vec![file],
        0,
        format!("{} families", rows.len()),
        Vec::new(),
    ))
}

#[derive(Debug, Clone, Serialize)]
struct SpectrumRow {
    n: usize,
    recursion: Option<f64>,
    closed_form: Option<f64>,
    rederived_closed_form: Option<f64>,
    oracle: Option<f64>,
    oracle_extrapolated: Option<f64>,
    delta_closed_form: Option<f64>,
    delta_oracle: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumDoc {
    family: &'static str,
    params: Params,
    method: &'static str,
    map: String,
    levels: Vec<SpectrumRow>,
    residuals: Vec<f64>,
    shifts: Vec<f64>,
    oracle_eigenvalues: Option<Vec<f64>>,
    notes: Vec<String>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Recursion => "recursion",
        Method::ClosedForm => "closed-form",
        Method::Oracle => "oracle",
        Method::All => "all",
    }
}

fn oracle_span(f: &FamilySpec, q: &Params, half_width: Option<f64>) -> Span {
    let (lo, hi) = f.reference_window(q);
    match f.domain.kind {
        DomainKind::FullLine => Span::Symmetric {
            half_width: half_width.unwrap_or(lo.abs().max(hi.abs())),
            parity: false,
        },
        DomainKind::HalfLine => Span::HalfLine {
            delta: 1e-4,
            hi: half_width.unwrap_or(hi),
        },
        DomainKind::Interval => {
            let w = f.domain.hi - f.domain.lo;
            Span::Fixed {
                lo: f.domain.lo + 1e-4 * w,
                hi: f.domain.hi - 1e-4 * w,
            }
        }
    }
}

fn catalog_spectrum(
    g: &GlobalArgs,
    f: &FamilySpec,
    q: &Params,
    n: usize,
    method: Method,
) -> CliResult<(SpectrumDoc, i32)> {
    let tol = g.tol.unwrap_or(DEFAULT_TOL);
    let grid = default_grid(f, q);
    let res = resolve_map(f, q, &grid, tol)?;
    let mut notes = Vec::new();
    let mut rows: Vec<SpectrumRow> = (0..=n)
        .map(|k| SpectrumRow {
            n: k,
            recursion: None,
            closed_form: None,
            rederived_closed_form: None,
            oracle: None,
            oracle_extrapolated: None,
            delta_closed_form: None,
            delta_oracle: None,
        })
        .collect();
    let (mut residuals, mut shifts) = (Vec::new(), Vec::new());
    let want = |m: Method| method == m || method == Method::All;
    if want(Method::Recursion) {
        match energies_recursive(f, res.chosen, q, n, &grid, tol) {
            Ok(s) => {
                for (row, l) in rows.iter_mut().zip(&s.levels) {
                    row.recursion = Some(l.energy);
                }
                residuals = s.meta.residuals;
                shifts = s.meta.shifts;
            }
            Err(e) if method == Method::Recursion => return Err(e.into()),
            Err(e) => notes.push(format!("recursion: {e}")),
        }
    }
    if want(Method::ClosedForm) {
        for row in rows.iter_mut() {
            match energy_closed_form(f, q, row.n) {
                Ok(e) => row.closed_form = Some(e),
                Err(e) => notes.push(format!("closed form n = {}: {e}", row.n)),
            }
            row.rederived_closed_form = energy_rederived(f, q, row.n);
        }
    }
    let mut oracle_values = None;
    if want(Method::Oracle) {
        let v = |x: f64| f.partner(q, x, Sign::Minus).unwrap_or(f64::NAN);
        let problem = EigenProblem {
            potential: &v,
            span: oracle_span(f, q, g.domain_halfwidth),
            k: n + 1,
            initial_points: g.grid_points.unwrap_or(1025),
        };
        match refine_until_converged(&problem, ORACLE_TOL) {
            Ok(r) => {
                let ex = r.richardson.clone().unwrap_or_else(|| r.eigenvalues.clone());
                for (row, (e, x)) in rows.iter_mut().zip(r.eigenvalues.iter().zip(&ex)) {
                    row.oracle = Some(*e);
                    row.oracle_extrapolated = Some(*x);
                }
                oracle_values = Some(r.eigenvalues);
            }
            Err(e) if method == Method::Oracle => return Err(e.into()),
            Err(e) => notes.push(format!("oracle: {e}")),
        }
    }
    for row in rows.iter_mut() {
        if let Some(r) = row.recursion {
            row.delta_closed_form = row.closed_form.map(|c| c - r);
            row.delta_oracle = row.oracle_extrapolated.map(|o| o - r);
        }
    }
    if !res.printed_passes {
        notes.push(format!("printed parameter map fails; using {}", res.chosen.label()));
    }
    Ok((
        SpectrumDoc {
            family: f.id.name(),
            params: *q,
            method: method_name(method),
            map: res.chosen.label(),
            levels: rows,
            residuals,
            shifts,
            oracle_eigenvalues: oracle_values,
            notes,
        },
        0,
    ))
}

fn sextic_spectrum(model: &SexticModel, n: usize, method: Method) -> CliResult<(SpectrumDoc, i32)> {
    if n > 2 {
        return Err(CliError::Usage(format!(
            "the sextic has closed forms for n <= 2 only (got --n {n})"
        )));
    }
    let eps = model.epsilon_depth()?;
    let mut notes = Vec::new();
    let mut rows: Vec<SpectrumRow> = (0..=n)
        .map(|k| SpectrumRow {
            n: k,
            recursion: None,
            closed_form: None,
            rederived_closed_form: None,
            oracle: None,
            oracle_extrapolated: None,
            delta_closed_form: None,
            delta_oracle: None,
        })
        .collect();
    let want = |m: Method| method == m || method == Method::All;
    let (mut residuals, mut shifts) = (Vec::new(), Vec::new());
    if want(Method::Recursion) {
        let reached = match model.bound_energies(n) {
            Ok(s) => Ok(s),
            Err(e) if method == Method::Recursion => return Err(e.into()),
            Err(e) => {
                notes.push(format!("recursion: {e}"));
                model.bound_energies(n.min(1))
            }
        }?;
        for (row, l) in rows.iter_mut().zip(&reached.levels) {
            row.recursion = Some(l.energy);
        }
        residuals = reached.meta.residuals;
        shifts = reached.meta.shifts;
    }
    if want(Method::ClosedForm) {
        for row in rows.iter_mut() {
            row.closed_form = Some(model.bound_energy_printed(row.n, eps));
        }
    }
    let mut oracle_values = None;
    if want(Method::Oracle) {
        let o = oracle_comparison(model, ORACLE_TOL)?;
        for row in rows.iter_mut() {
            let idx = if row.n == 0 {
                (0..o.extrapolated.len())
                    .min_by(|a, b| {
                        (o.extrapolated[*a] - eps)
                            .abs()
                            .partial_cmp(&(o.extrapolated[*b] - eps).abs())
                            .unwrap()
                    })
                    .unwrap()
            } else {
                o.pairings[row.n - 1].oracle_index
            };
            row.oracle = Some(o.eigenvalues[idx]);
            row.oracle_extrapolated = Some(o.extrapolated[idx]);
        }
        notes.push("oracle column: n = 0 nearest level to eps; n = 1, 2 paired by overlap with the closed forms".into());
        oracle_values = Some(o.eigenvalues);
    }
    for row in rows.iter_mut() {
        if let Some(r) = row.recursion {
            row.delta_closed_form = row.closed_form.map(|c| c - r);
            row.delta_oracle = row.oracle_extrapolated.map(|o| o - r);
        }
    }
    Ok((
        SpectrumDoc {
            family: "sextic",
            params: model.a0,
            method: method_name(method),
            map: model.resolution.chosen.label(),
            levels: rows,
            residuals,
            shifts,
            oracle_eigenvalues: oracle_values,
            notes,
        },
        0,
    ))
}

fn cmd_spectrum(g: &GlobalArgs, fam: &FamilyArgs, n: usize, method: Method) -> CliResult<RunOutcome> {
    let (doc, code, ledger) = match select(fam, None)? {
        Selected::Catalog(f, q) => {
            let (doc, code) = catalog_spectrum(g, &f, &q, n, method)?;
            let ledger = resolve_map(&f, &q, &default_grid(&f, &q), g.tol.unwrap_or(DEFAULT_TOL))
                .ok()
                .and_then(|r| resolution_ledger(&r))
                .into_iter()
                .collect();
            (doc, code, ledger)
        }
        Selected::Sextic(cfg) => {
            cfg.require_band()?;
            let model = SexticModel::with_tol(cfg, g.tol.unwrap_or(DEFAULT_TOL))?;
            let (doc, code) = sextic_spectrum(&model, n, method)?;
            (doc, code, sextic_ledger(&model)?)
        }
    };
    let file = match g.format {
        Format::Json => OutFile::json("spectrum.json", &doc)?,
        Format::Csv => OutFile::csv("spectrum.csv", &doc.levels)?,
    };
    let summary = format!("{} levels for {}", doc.levels.len(), doc.family);
    Ok(RunOutcome::new(
        "spectrum",
        json!({ "global": global_json(g), "family": family_args_json(fam), "n": n, "method": method_name(method) }),
        tolerances(g),
        vec![file],
        code,
        summary,
        ledger,
    ))
}

#[derive(Serialize)]
struct XY {
    x: f64,
    value: Option<f64>,
}

#[derive(Serialize)]
struct SampleDoc<'a> {
    family: &'static str,
    params: Params,
    what: &'static str,
    n: usize,
    grid: UniformGrid,
    rows: &'a [XY],
}

fn sample_name(k: SampleKind) -> &'static str {
    match k {
        SampleKind::W => "w",
        SampleKind::VMinus => "v-minus",
        SampleKind::VPlus => "v-plus",
        SampleKind::V => "v",
        SampleKind::Psi => "psi",
    }
}

fn rows_from(grid: UniformGrid, values: Vec<Option<f64>>) -> Vec<XY> {
    grid.points()
        .into_iter()
        .zip(values)
        .map(|(x, value)| XY { x, value })
        .collect()
}

fn cmd_sample(g: &GlobalArgs, fam: &FamilyArgs, what: SampleKind, n: usize) -> CliResult<RunOutcome> {
    let points = g.grid_points.unwrap_or(DEFAULT_SAMPLE_POINTS);
    let (name, params, grid, values) = match select(fam, None)? {
        Selected::Catalog(f, q) => {
            let (lo, hi) = match g.domain_halfwidth {
                Some(l) if f.domain.kind == DomainKind::FullLine => (-l, l),
                Some(l) if f.domain.kind == DomainKind::HalfLine => (f.reference_window(&q).0, l),
                _ => f.reference_window(&q),
            };
            let grid = UniformGrid::new(lo, hi, points)?;
            let values: Vec<Option<f64>> = match what {
                SampleKind::W => grid.points().iter().map(|x| f.w(&q, *x).ok()).collect(),
                SampleKind::VMinus => grid.points().iter().map(|x| f.partner(&q, *x, Sign::Minus).ok()).collect(),
                SampleKind::VPlus => grid.points().iter().map(|x| f.partner(&q, *x, Sign::Plus).ok()).collect(),
                SampleKind::V => {
                    return Err(CliError::Usage("--what v is the shifted sextic triple well".into()))
                }
                SampleKind::Psi => {
                    let res = resolve_map(&f, &q, &default_grid(&f, &q), g.tol.unwrap_or(DEFAULT_TOL))?;
                    excited_state(&f, res.chosen, &q, n, &grid)?.values.into_iter().map(Some).collect()
                }
            };
            (f.id.name(), q, grid, values)
        }
        Selected::Sextic(cfg) => {
            cfg.require_band()?;
            let model = SexticModel::with_tol(cfg, g.tol.unwrap_or(DEFAULT_TOL))?;
            let l = g.domain_halfwidth.unwrap_or(FIGURE_HALF_WIDTH);
            let grid = UniformGrid::symmetric(l, points)?;
            let f = model.family();
            let xs = grid.points();
            let values: Vec<Option<f64>> = match what {
                SampleKind::W => xs.iter().map(|x| f.w(&model.a0, *x).ok()).collect(),
                SampleKind::VMinus => xs.iter().map(|x| f.partner(&model.a0, *x, Sign::Minus).ok()).collect(),
                SampleKind::VPlus => xs.iter().map(|x| f.partner(&model.a0, *x, Sign::Plus).ok()).collect(),
                SampleKind::V => {
                    let eps = model.epsilon_depth()?;
                    xs.iter().map(|x| Some(model.v_minus(*x) + eps)).collect()
                }
                SampleKind::Psi => closed_form_samples(&model, n, grid)?.values.into_iter().map(Some).collect(),
            };
            ("sextic", model.a0, grid, values)
        }
    };
    let rows = rows_from(grid, values);
    let file = match g.format {
        Format::Json => OutFile::json(
            "sample.json",
            &SampleDoc {
                family: name,
                params,
                what: sample_name(what),
                n,
                grid,
                rows: &rows,
            },
        )?,
        Format::Csv => OutFile::csv("sample.csv", &rows)?,
    };
    Ok(RunOutcome::new(
        "sample",
        json!({ "global": global_json(g), "family": family_args_json(fam), "what": sample_name(what), "n": n }),
        tolerances(g),
        vec![file],
        0,
        format!("{} samples of {} for {name}", rows.len(), sample_name(what)),
        Vec::new(),
    ))
}

/// n = 0 unnormalized (it diverges), n = 1, 2 normalized on the grid.
fn closed_form_samples(model: &SexticModel, n: usize, grid: UniformGrid) -> CliResult<GridFunction> {
    let raw = GridFunction::try_sample(grid, |x| model.wavefunction_analytic(n, x))?;
    Ok(if n == 0 { raw } else { normalize(&raw)? })
}

#[derive(Serialize)]
struct CatalogVerifyRow {
    family: &'static str,
    map: String,
    printed_map_passes: bool,
    in_domain_levels: Vec<usize>,
    shifts: Vec<f64>,
    relative_residuals: Vec<f64>,
    pass: bool,
}

impl CatalogVerifyRow {
    fn from(r: &CatalogRow) -> Self {
        CatalogVerifyRow {
            family: r.family.name(),
            map: r.resolution.chosen.label(),
            printed_map_passes: r.printed_pass,
            in_domain_levels: r.in_domain_levels.clone(),
            shifts: r.reports.iter().map(|x| x.shift).collect(),
            relative_residuals: r.reports.iter().map(|x| x.relative_residual()).collect(),
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
struct Assertion {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct SexticVerify {
    b0: f64,
    g0: f64,
    params: Params,
    map: String,
    geometry: WellGeometry,
    residuals: ResidualSuite,
    oracle: OracleComparison,
    ladder: LadderCoherence,
    normalizability: Vec<NormalizabilityReport>,
    gap_ratio: GapRatioReport,
    reconciliations: Vec<Reconciled>,
}

#[derive(Serialize)]
struct VerifyDoc {
    scope: &'static str,
    catalog: Option<Vec<CatalogVerifyRow>>,
    sextic: Option<SexticVerify>,
    assertions: Vec<Assertion>,
    pass: bool,
}

fn verify_catalog(tol: f64, checks: &mut Vec<Assertion>, ledger: &mut Vec<LedgerEntry>) -> CliResult<Vec<CatalogVerifyRow>> {
    let mut rows = Vec::new();
    for f in catalog() {
        let r = catalog_row(&f, CATALOG_LEVELS, tol)?;
        if let Some(e) = resolution_ledger(&r.resolution) {
            ledger.push(e);
        }
        checks.push(Assertion {
            name: format!("shape invariance: {}", f.id),
            pass: r.pass,
            detail: format!(
                "levels {:?}, max relative residual {:e}",
                r.in_domain_levels,
                r.reports.iter().map(|x| x.relative_residual()).fold(0.0, f64::max)
            ),
        });
        rows.push(CatalogVerifyRow::from(&r));
    }
    Ok(rows)
}

fn verify_sextic(
    g: &GlobalArgs,
    cfg: SexticConfig,
    checks: &mut Vec<Assertion>,
    ledger: &mut Vec<LedgerEntry>,
) -> CliResult<SexticVerify> {
    cfg.require_band()?;
    let model = SexticModel::with_tol(cfg, g.tol.unwrap_or(DEFAULT_TOL))?;
    let geometry = model.classify_wells();
    let grid = match (g.grid_points, g.domain_halfwidth) {
        (None, None) => default_residual_grid(),
        (p, l) => UniformGrid::symmetric(
            l.unwrap_or(susyqm::checks::RESIDUAL_HALF_WIDTH),
            p.unwrap_or(susyqm::checks::RESIDUAL_POINTS) | 1,
        )?,
    };
    let residuals = residual_suite(&model, grid)?;
    let oracle = oracle_comparison(&model, ORACLE_TOL)?;
    let ladder = ladder_coherence(&model, 4001)?;
    let normalizability = (0..=2)
        .map(|n| normalizability_class(&cfg, n))
        .collect::<susyqm::Result<Vec<_>>>()?;
    checks.push(Assertion {
        name: "sextic: triple well with x0^2 and V(x0) = 0".into(),
        pass: geometry.classification == WellClass::TripleWell,
        detail: format!("{:?}, x0^2 = {:?}", geometry.classification, geometry.x0_sq),
    });
    checks.push(Assertion {
        name: "sextic: first closed-form state residual".into(),
        pass: residuals.psi1_residual < RESIDUAL_LIMIT,
        detail: format!("{:e} at E1 = {}", residuals.psi1_residual, residuals.e1),
    });
    checks.push(Assertion {
        name: "sextic: second closed-form state residual".into(),
        pass: residuals.psi2_residual.is_some_and(|r| r < RESIDUAL_LIMIT),
        detail: match (&residuals.psi2_residual, &residuals.e2_failure) {
            (Some(r), _) => format!("{r:e}"),
            (None, Some(e)) => format!("no authoritative E2: {e}"),
            (None, None) => "no authoritative E2".into(),
        },
    });
    checks.push(Assertion {
        name: "sextic: oracle pairing of closed-form states".into(),
        pass: oracle.pass,
        detail: oracle
            .pairings
            .iter()
            .map(|p| format!("n = {}: overlap {:.6}, oracle {}", p.analytic_level, p.overlap, p.oracle_extrapolated))
            .collect::<Vec<_>>()
            .join("; "),
    });
    checks.push(Assertion {
        name: "sextic: raising operator on the plus-partner ground state".into(),
        pass: ladder.pass,
        detail: format!("overlap {}", ladder.overlap),
    });
    let classes: Vec<Normalizability> = normalizability.iter().map(|r| r.class).collect();
    checks.push(Assertion {
        name: "sextic: normalizability classes".into(),
        pass: classes == [Normalizability::Divergent, Normalizability::Normalizable, Normalizability::Normalizable],
        detail: format!("{classes:?}"),
    });
    ledger.extend(sextic_ledger(&model)?);
    Ok(SexticVerify {
        b0: cfg.b0,
        g0: cfg.g0,
        params: model.a0,
        map: model.resolution.chosen.label(),
        gap_ratio: model.gap_ratio_report()?,
        reconciliations: model.reconciliations()?,
        geometry,
        residuals,
        oracle,
        ladder,
        normalizability,
    })
}

fn cmd_verify(g: &GlobalArgs, scope: Scope, fam: &FamilyArgs) -> CliResult<RunOutcome> {
    let tol = g.tol.unwrap_or(DEFAULT_TOL);
    let mut checks = Vec::new();
    let mut ledger = Vec::new();
    let sextic_cfg = match scope {
        Scope::Catalog => None,
        _ => match select(fam, Some(FamilyId::Sextic))? {
            Selected::Sextic(cfg) => Some(cfg),
            Selected::Catalog(..) => return Err(CliError::Usage("the sextic suite takes --B0/--G0".into())),
        },
    };
    let catalog = match scope {
        Scope::Sextic => None,
        _ => Some(verify_catalog(tol, &mut checks, &mut ledger)?),
    };
    let sextic = match sextic_cfg {
        Some(cfg) => Some(verify_sextic(g, cfg, &mut checks, &mut ledger)?),
        None => None,
    };
    let pass = checks.iter().all(|c| c.pass);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let scope_name = match scope {
        Scope::Catalog => "catalog",
        Scope::Sextic => "sextic",
        Scope::All => "all",
    };
    let doc = VerifyDoc {
        scope: scope_name,
        catalog,
        sextic,
        assertions: checks,
        pass,
    };
    let total = doc.assertions.len();
    Ok(RunOutcome::new(
        "verify",
        json!({ "global": global_json(g), "scope": scope_name, "family": family_args_json(fam) }),
        tolerances(g),
        vec![OutFile::json("verify.json", &doc)?],
        if pass { 0 } else { 1 },
        format!("{} of {total} assertions passed", total - failed),
        ledger,
    ))
}

#[derive(Serialize)]
struct XV {
    x: f64,
    #[serde(rename = "V")]
    v: f64,
}

#[derive(Serialize)]
struct XValue {
    x: f64,
    value: f64,
}

#[derive(Serialize)]
struct NE {
    n: usize,
    #[serde(rename = "E")]
    e: f64,
}

fn cmd_figure(g: &GlobalArgs, fam: &FamilyArgs) -> CliResult<RunOutcome> {
    let cfg = match select(fam, Some(FamilyId::Sextic))? {
        Selected::Sextic(cfg) => cfg,
        Selected::Catalog(..) => return Err(CliError::Usage("figure takes --B0/--G0 only".into())),
    };
    cfg.require_band()?;
    let model = SexticModel::with_tol(cfg, g.tol.unwrap_or(DEFAULT_TOL))?;
    let eps = model.epsilon_depth()?;
    let grid = UniformGrid::symmetric(
        g.domain_halfwidth.unwrap_or(FIGURE_HALF_WIDTH),
        g.grid_points.unwrap_or(DEFAULT_SAMPLE_POINTS) | 1,
    )?;
    let xs = grid.points();
    let potential: Vec<XV> = xs.iter().map(|&x| XV { x, v: model.v_minus(x) + eps }).collect();
    let series = |n: usize| -> CliResult<Vec<XValue>> {
        let f = closed_form_samples(&model, n, grid)?;
        Ok(xs.iter().zip(f.values).map(|(&x, value)| XValue { x, value }).collect())
    };
    let spectrum = model.bound_energies(1)?;
    let energies: Vec<NE> = spectrum.levels.iter().map(|l| NE { n: l.n, e: l.energy }).collect();
    let files = vec![
        OutFile::csv("potential.csv", &potential)?,
        OutFile::csv("psi_1.csv", &series(1)?)?,
        OutFile::csv("psi_2.csv", &series(2)?)?,
        OutFile::csv("psi_0_unnormalized.csv", &series(0)?)?,
        OutFile::csv("energies.csv", &energies)?,
    ];
    Ok(RunOutcome::new(
        "figure",
        json!({ "global": global_json(g), "family": family_args_json(fam), "B0": cfg.b0, "G0": cfg.g0 }),
        tolerances(g),
        files,
        0,
        format!("figure data on {} points, {} energy rows", grid.n, energies.len()),
        sextic_ledger(&model)?,
    ))
}

#[derive(Serialize)]
struct RhoRow {
    ratio: f64,
    rho: Option<f64>,
    rho_printed_energies: Option<f64>,
    rho_printed_closed_form: Option<f64>,
}

#[derive(Serialize)]
struct RhoSummary {
    spec: ScanSpec,
    samples: usize,
    evaluated: usize,
    min_rho: Option<f64>,
    argmin_ratio: Option<f64>,
    min_rho_printed_energies: Option<f64>,
    argmin_ratio_printed_energies: Option<f64>,
    quoted_lower_bound: f64,
    all_above_quoted_bound: bool,
    failure: Option<String>,
}

fn cmd_scan_rho(
    g: &GlobalArgs,
    lo: Option<f64>,
    hi: Option<f64>,
    samples: usize,
    b0: f64,
) -> CliResult<RunOutcome> {
    let band = ScanSpec::full_band(samples);
    let spec = ScanSpec {
        b0,
        ratio_lo: lo.unwrap_or(band.ratio_lo),
        ratio_hi: hi.unwrap_or(band.ratio_hi),
        samples,
    };
    let scan = scan_rho(&spec).map_err(|e| match e {
        susyqm::Error::InvalidInput(m) => susyqm::Error::Constraint(m),
        e => e,
    })?;
    let rows: Vec<RhoRow> = scan
        .samples
        .iter()
        .map(|s| RhoRow {
            ratio: s.ratio,
            rho: s.rho,
            rho_printed_energies: s.rho_printed_energies,
            rho_printed_closed_form: s.rho_printed_closed_form,
        })
        .collect();
    let summary = RhoSummary {
        spec,
        samples: scan.samples.len(),
        evaluated: scan.evaluated,
        min_rho: scan.min_rho,
        argmin_ratio: scan.argmin_ratio,
        min_rho_printed_energies: scan.min_rho_printed_energies,
        argmin_ratio_printed_energies: scan.argmin_ratio_printed_energies,
        quoted_lower_bound: PRINTED_RHO_BOUND,
        all_above_quoted_bound: scan.evaluated == scan.samples.len()
            && scan.samples.iter().all(|s| s.rho.is_some_and(|r| r > PRINTED_RHO_BOUND)),
        failure: scan.samples.iter().find_map(|s| s.rho_failure.clone()),
    };
    let line = match summary.min_rho {
        Some(m) => format!("min rho {m} over {} samples", rows.len()),
        None => format!("rho undefined at all {} samples", rows.len()),
    };
    let ledger = summary
        .failure
        .as_ref()
        .map(|f| LedgerEntry {
            context: "gap ratio".into(),
            form: "rho from authoritative energies".into(),
            authoritative: None,
            printed: Some(PRINTED_RHO_BOUND),
            note: f.clone(),
        })
        .into_iter()
        .collect();
    Ok(RunOutcome::new(
        "scan-rho",
        json!({ "global": global_json(g), "B0": b0, "ratio_lo": spec.ratio_lo, "ratio_hi": spec.ratio_hi, "samples": samples }),
        tolerances(g),
        vec![OutFile::csv("rho.csv", &rows)?, OutFile::json("rho_summary.json", &summary)?],
        0,
        line,
        ledger,
    ))
}

//! One line per acceptance criterion. Criteria listed in `UNATTAINABLE`
//! are reported red without failing the target; every other criterion
//! must pass.

use std::fs;
use std::path::Path;
use std::process::Command;

use susyqm::checks::{default_residual_grid, ladder_coherence, oracle_comparison, residual_suite, ORACLE_TOL};
use susyqm::grid::{GridFunction, UniformGrid};
use susyqm::ladder::{apply_lowering, interior_max_abs};
use susyqm::oracle::{build_hamiltonian, lowest_eigenpairs, richardson};
use susyqm::potential::{catalog, lookup, FamilyId, Params};
use susyqm::sextic::{
    band_upper_ratio, normalizability_class, scan_rho, Normalizability, ScanSpec, SexticConfig, SexticModel,
    WellClass, PRINTED_RHO_BOUND,
};
use susyqm::shape_invariance::{catalog_row, ParamMap};

/// Closed forms that do not solve the triple well, and a gap ratio with
/// no authoritative second excited level.
const UNATTAINABLE: [usize; 3] = [3, 4, 6];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn fig_model() -> SexticModel {
    SexticModel::new(SexticConfig::reference()).unwrap()
}

fn c1_catalog() -> Verdict {
    let mut failing = Vec::new();
    let mut resolutions = Vec::new();
    let mut must_print = Vec::new();
    for f in catalog() {
        let row = catalog_row(&f, 5, 1e-8).unwrap();
        if !row.pass {
            failing.push(f.id.name());
        }
        if !row.printed_pass {
            let resolved = row.resolution.chosen != ParamMap::Printed || row.in_domain_levels.len() < 5;
            resolutions.push(format!("{}: {}", f.id, if resolved { row.resolution.chosen.label() } else { "none".into() }));
            if !resolved {
                failing.push(f.id.name());
            }
        }
        if matches!(
            f.id,
            FamilyId::Harmonic | FamilyId::Morse | FamilyId::Oscillator3D | FamilyId::ScarfII | FamilyId::PoschlTellerII
        ) && !row.printed_pass
        {
            must_print.push(f.id.name());
        }
    }
    verdict(
        failing.is_empty() && must_print.is_empty(),
        format!(
            "14 families, failing {failing:?}, required-as-printed failing {must_print:?}, resolved [{}]",
            resolutions.join(", ")
        ),
    )
}

fn c2_harmonic() -> Verdict {
    let solve = |n: usize| {
        let g = UniformGrid::symmetric(10.0, n).unwrap();
        let v = GridFunction::sample(g, |x| x * x - 1.0).unwrap();
        lowest_eigenpairs(&build_hamiltonian(&v).unwrap(), 6).unwrap().eigenvalues
    };
    let coarse = solve(4001);
    let fine = solve(8001);
    let ex = richardson(&coarse, &fine);
    let err: f64 = coarse.iter().enumerate().map(|(n, e)| (e - 2.0 * n as f64).abs()).fold(0.0, f64::max);
    let err_ex: f64 = ex.iter().enumerate().map(|(n, e)| (e - 2.0 * n as f64).abs()).fold(0.0, f64::max);
    verdict(
        err < 1e-4 && err_ex < 1e-7,
        format!("max |E_n - 2n| = {err:.3e} on 4001 points (< 1e-4), Richardson {err_ex:.3e} (< 1e-7)"),
    )
}

fn c3_residuals() -> Verdict {
    let s = residual_suite(&fig_model(), default_residual_grid()).unwrap();
    verdict(
        s.pass,
        format!(
            "psi1 residual {:.3e} at E1 = {:.6} (< 1e-5); psi2: {}; psi2 with printed E2 = {:.6}: {:.3e}; \
             diagnostic: psi1 solves the level-0 minus partner at E = {:.6} with residual {:.3e}",
            s.psi1_residual,
            s.e1,
            s.e2_failure.as_deref().unwrap_or("authoritative E2 present"),
            s.e2_printed,
            s.psi2_residual_printed_energy,
            s.psi1_partner_energy,
            s.psi1_partner_residual
        ),
    )
}

fn c4_oracle() -> Verdict {
    let o = oracle_comparison(&fig_model(), ORACLE_TOL).unwrap();
    let pairs: Vec<String> = o
        .pairings
        .iter()
        .map(|p| {
            format!(
                "psi{} best overlap {:.6} with oracle level {:.6} (reference {})",
                p.analytic_level,
                p.overlap,
                p.oracle_extrapolated,
                p.reference_energy.map_or("none".into(), |e| format!("{e:.6}"))
            )
        })
        .collect();
    verdict(
        o.pass,
        format!("{}; oracle levels {:?}", pairs.join("; "), o.extrapolated.iter().map(|e| (e * 1e6).round() / 1e6).collect::<Vec<_>>()),
    )
}

fn c5_geometry() -> Verdict {
    let m = fig_model();
    let geo = m.classify_wells();
    let x0_sq = geo.x0_sq.unwrap_or(f64::NAN);
    let eps = m.epsilon_depth().unwrap();
    let scale = eps;
    let x0 = x0_sq.sqrt();
    let worst = [x0, -x0, 1.0, -1.0]
        .iter()
        .map(|x| m.potential_v(*x).unwrap().abs())
        .fold(0.0, f64::max);
    verdict(
        geo.classification == WellClass::TripleWell && (x0_sq - 1.0).abs() < 1e-6 && worst < 1e-8 * scale,
        format!("{:?}, x0^2 = {x0_sq:.12}, max |V(+-x0)|, |V(+-1)| = {worst:.3e} (scale eps = {eps:.6})", geo.classification),
    )
}

fn c6_gap_ratio() -> Verdict {
    let scan = scan_rho(&ScanSpec::full_band(200)).unwrap();
    let top = band_upper_ratio();
    let ok = match (scan.min_rho, scan.argmin_ratio) {
        (Some(m), Some(a)) => {
            (m - PRINTED_RHO_BOUND).abs() < 0.01 * PRINTED_RHO_BOUND
                && (a - top).abs() < 1e-2
                && scan.samples.iter().all(|s| s.rho.is_some_and(|r| r > 26.0))
        }
        _ => false,
    };
    let closed: Vec<f64> = scan.samples.iter().filter_map(|s| s.rho_printed_closed_form).collect();
    let closed_max = closed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    verdict(
        ok,
        format!(
            "rho defined at {} of {} samples ({}); eps over printed-level gap: min {:.4} at ratio {:.6}; printed closed form max {:.4}",
            scan.evaluated,
            scan.samples.len(),
            scan.samples[0].rho_failure.as_deref().unwrap_or("-"),
            scan.min_rho_printed_energies.unwrap_or(f64::NAN),
            scan.argmin_ratio_printed_energies.unwrap_or(f64::NAN),
            closed_max
        ),
    )
}

fn c7_ladder() -> Verdict {
    let c = ladder_coherence(&fig_model(), 4001).unwrap();
    let f = lookup(FamilyId::Harmonic);
    let q = Params::pair(1.0, 0.0).unwrap();
    let g = UniformGrid::symmetric(8.0, 4001).unwrap();
    let gauss = GridFunction::sample(g, |x| (-0.5 * x * x).exp()).unwrap();
    let down = apply_lowering(&f, &q, &gauss).unwrap();
    let rel = interior_max_abs(&down) / gauss.max_abs();
    verdict(
        c.pass && rel < 1e-6,
        format!("sextic raising overlap {:.12} (> 0.999); harmonic lowering interior max {rel:.3e} of peak (< 1e-6)", c.overlap),
    )
}

fn c8_normalizability() -> Verdict {
    let top = band_upper_ratio();
    let mut tested = 0;
    let mut bad = Vec::new();
    for b0 in [0.5, 1.0, 100.0] {
        for t in [0.01, 0.25, 0.5, 0.75, 0.99] {
            let cfg = SexticConfig::new(b0, b0 * (2.0 + t * (top - 2.0))).unwrap();
            let classes: Vec<Normalizability> =
                (0..=2).map(|n| normalizability_class(&cfg, n).unwrap().class).collect();
            tested += 1;
            if classes != [Normalizability::Divergent, Normalizability::Normalizable, Normalizability::Normalizable] {
                bad.push((b0, cfg.ratio(), classes));
            }
        }
    }
    let fig = normalizability_class(&SexticConfig::reference(), 0).unwrap();
    if fig.class != Normalizability::Divergent {
        bad.push((100.0, SexticConfig::reference().ratio(), vec![fig.class]));
    }
    let side = fig.complement.as_ref().map(|c| (c.decays_on_integration_side, c.decays_on_opposite_side));
    verdict(
        bad.is_empty(),
        format!("{} band configs + figure parameters, mismatches {bad:?}; complement decays (integration side, opposite) = {side:?}", tested),
    )
}

fn c9_fictitious() -> Verdict {
    let m = fig_model();
    let o = oracle_comparison(&m, ORACLE_TOL).unwrap();
    let f = &o.fictitious;
    verdict(
        f.converged,
        format!(
            "lowest oracle level {:.9} (Richardson), {} nodes, parity {:?}, doublet gap {:.3e}, offset from E0 = eps: {:.9}; \
             convergence estimate {:.3e}",
            f.lowest_extrapolated, f.node_count, f.parity, f.doublet_gap, f.offset_from_epsilon, f.convergence_estimate
        ),
    )
}

fn strip_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

fn run_verify(dir: &Path) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_susyqm"))
        .args(["verify", "--scope", "all", "--out"])
        .arg(dir)
        .status()
        .ok()?
        .code()
}

fn c10_determinism() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let (ca, cb) = (run_verify(&a), run_verify(&b));
    let mut names: Vec<String> = fs::read_dir(&a)
        .map(|it| it.filter_map(|e| e.ok()).map(|e| e.file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    names.sort();
    let mut differing = Vec::new();
    for n in &names {
        let x = fs::read_to_string(a.join(n)).unwrap_or_default();
        let y = fs::read_to_string(b.join(n)).unwrap_or_default();
        let same = if n == "manifest.json" { strip_timestamp(&x) == strip_timestamp(&y) } else { x == y };
        if !same {
            differing.push(n.clone());
        }
    }
    verdict(
        !names.is_empty() && differing.is_empty() && ca == cb,
        format!("files {names:?}, differing {differing:?}, exit codes {ca:?}/{cb:?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(usize, &str, fn() -> Verdict); 10] = [
        (1, "catalog shape invariance", c1_catalog),
        (2, "harmonic oracle calibration", c2_harmonic),
        (3, "sextic closed-form residuals", c3_residuals),
        (4, "oracle-analytic energy match", c4_oracle),
        (5, "well geometry", c5_geometry),
        (6, "gap-ratio bound", c6_gap_ratio),
        (7, "ladder coherence", c7_ladder),
        (8, "normalizability classification", c8_normalizability),
        (9, "lowest-state report", c9_fictitious),
        (10, "determinism", c10_determinism),
    ];
    let mut unexpected = Vec::new();
    for (n, title, check) in criteria {
        let v = check();
        println!("[{}] criterion {n}: {title} | {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass && !UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}

//! The symmetric sextic family at dependent parameters: well geometry,
//! depth, shifted potential, bound energies, gap ratio and closed-form
//! wavefunctions.
//!
//! The triple well is the minus partner at the mapped point a₁, which is a
//! pure even sextic polynomial equal to V₊(a₀) − C₀. Its coefficients come
//! from the partial-fraction expansion of W² ∓ W′ below.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{linspace, UniformGrid};
use crate::potential::{lookup, FamilyId, FamilySpec, Params, Sign};
use crate::shape_invariance::{
    apply_map, default_grid, energies_recursive, resolve_map, Level, MapResolution, Provenance,
    Spectrum, SpectrumMeta, DEFAULT_TOL,
};

/// Gap ratio of the harmonic oscillator.
pub const RHO_HARMONIC: f64 = 0.5;
/// Lower bound on the gap ratio quoted for the band.
pub const PRINTED_RHO_BOUND: f64 = 26.0765;

/// Upper edge (7 + 3√7)/7 of the triple-well band in G₀/B₀.
pub fn band_upper_ratio() -> f64 {
    (7.0 + 3.0 * 7.0_f64.sqrt()) / 7.0
}

/// G₀ of the reference configuration: 100 + √((30407 + √45649)/3).
pub fn reference_g0() -> f64 {
    100.0 + ((30407.0 + 45649.0_f64.sqrt()) / 3.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SexticConfig {
    pub b0: f64,
    pub g0: f64,
}

impl SexticConfig {
    pub fn new(b0: f64, g0: f64) -> Result<Self> {
        if !(b0.is_finite() && g0.is_finite()) {
            return Err(Error::NonFinite(format!("B0 = {b0}, G0 = {g0}")));
        }
        if b0 <= 0.0 {
            return Err(Error::Constraint(format!("requires B0 > 0 (got B0 = {b0})")));
        }
        Ok(SexticConfig { b0, g0 })
    }

    pub fn reference() -> Self {
        SexticConfig {
            b0: 100.0,
            g0: reference_g0(),
        }
    }

    pub fn ratio(&self) -> f64 {
        self.g0 / self.b0
    }

    pub fn is_admissible(&self) -> bool {
        self.g0 > 2.0 * self.b0 && self.b0 > 0.0
    }

    pub fn in_band(&self) -> bool {
        let r = self.ratio();
        r > 2.0 && r < band_upper_ratio()
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::Constraint(format!(
                "requires G0 > 2*B0 > 0 (got B0 = {}, G0 = {})",
                self.b0, self.g0
            )))
        }
    }

    pub fn require_band(&self) -> Result<()> {
        self.require_admissible()?;
        if self.in_band() {
            Ok(())
        } else {
            Err(Error::Constraint(format!(
                "requires 2 < G0/B0 < (7+3*sqrt(7))/7 = {} (got {})",
                band_upper_ratio(),
                self.ratio()
            )))
        }
    }

    /// (A₀, B₀, D₀, G₀) without the admissibility check.
    pub fn level0_params(&self) -> Params {
        Params {
            a: 0.5 * (2.0 * self.b0 - self.g0) * self.g0,
            b: self.b0,
            d: -2.0 * self.g0,
            g: self.g0,
        }
    }
}

pub fn derive_dependent_params(cfg: &SexticConfig) -> Result<Params> {
    cfg.require_admissible()?;
    Ok(cfg.level0_params())
}

/// W² + sW′ for W = ax³ + bx − dx/q, q = 1 + gx², written as
/// c6x⁶ + c4x⁴ + c2x² + c0 + r1/q + r2/q².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartnerExpansion {
    pub c0: f64,
    pub c2: f64,
    pub c4: f64,
    pub c6: f64,
    pub r1: f64,
    pub r2: f64,
    pub g: f64,
}

impl PartnerExpansion {
    pub fn of(q: &Params, sign: Sign) -> Self {
        let s = sign.value();
        let (a, b, d, g) = (q.a, q.b, q.d, q.g);
        if g == 0.0 {
            let lin = b - d;
            return PartnerExpansion {
                c0: s * lin,
                c2: lin * lin + 3.0 * s * a,
                c4: 2.0 * a * lin,
                c6: a * a,
                r1: 0.0,
                r2: 0.0,
                g,
            };
        }
        PartnerExpansion {
            c0: 2.0 * d * a / (g * g) - 2.0 * d * b / g + s * b,
            c2: b * b - 2.0 * d * a / g + 3.0 * s * a,
            c4: 2.0 * a * b,
            c6: a * a,
            r1: d * d / g - 2.0 * d * (a / (g * g) - b / g) + s * d,
            r2: -d * d / g - 2.0 * s * d,
            g,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        let scale = self.c0.abs().max(self.c2.abs()).max(1.0);
        self.r1.abs() <= 1e-12 * scale && self.r2.abs() <= 1e-12 * scale
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = x * x;
        let mut v = ((self.c6 * u + self.c4) * u + self.c2) * u + self.c0;
        if self.r1 != 0.0 || self.r2 != 0.0 {
            let q = 1.0 + self.g * u;
            v += self.r1 / q + self.r2 / (q * q);
        }
        v
    }

    /// V′(x)/x for the polynomial part.
    pub fn slope_over_x(&self, x: f64) -> f64 {
        let u = x * x;
        (6.0 * self.c6 * u + 4.0 * self.c4) * u + 2.0 * self.c2
    }

    pub fn curvature(&self, x: f64) -> f64 {
        let u = x * x;
        (30.0 * self.c6 * u + 12.0 * self.c4) * u + 2.0 * self.c2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WellClass {
    SingleWell,
    DoubleWell,
    TripleWell,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub v: f64,
    pub curvature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WellGeometry {
    pub classification: WellClass,
    pub critical_points: Vec<CriticalPoint>,
    pub x0_sq: Option<f64>,
    pub epsilon: Option<f64>,
    /// Whether the outer minima are the global minimum.
    pub outer_is_global: Option<bool>,
}

/// Everything that depends only on (B₀, G₀): the level-0 point, the
/// resolved parameter map, a₁ and the triple-well polynomial V₋(a₁).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SexticModel {
    pub cfg: SexticConfig,
    pub a0: Params,
    pub a1: Params,
    pub resolution: MapResolution,
    pub well: PartnerExpansion,
    pub shift_grid: UniformGrid,
    pub tol: f64,
    #[serde(skip)]
    family: FamilySpec,
}

impl SexticModel {
    pub fn new(cfg: SexticConfig) -> Result<Self> {
        Self::with_tol(cfg, DEFAULT_TOL)
    }

    pub fn with_tol(cfg: SexticConfig, tol: f64) -> Result<Self> {
        let family = lookup(FamilyId::Sextic);
        let a0 = cfg.level0_params();
        let shift_grid = default_grid(&family, &a0);
        let resolution = resolve_map(&family, &a0, &shift_grid, tol)?;
        let a1 = apply_map(&family, resolution.chosen, &a0)?;
        let well = PartnerExpansion::of(&a1, Sign::Minus);
        Ok(SexticModel {
            cfg,
            a0,
            a1,
            resolution,
            well,
            shift_grid,
            tol,
            family,
        })
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    /// The unshifted triple-well potential V₋(x, a₁).
    pub fn v_minus(&self, x: f64) -> f64 {
        self.well.value(x)
    }

    /// Roots in u = x² of V′/x, classified by count and curvature, each
    /// polished by bisection.
    pub fn classify_wells(&self) -> WellGeometry {
        let w = &self.well;
        let (qa, qb, qc) = (3.0 * w.c6, 2.0 * w.c4, w.c2);
        let scale = qa.abs().max(qb.abs()).max(qc.abs()).max(f64::MIN_POSITIVE);
        let zero = |x: f64| x.abs() <= 1e-12 * scale;
        let mut cps = vec![CriticalPoint {
            x: 0.0,
            v: w.value(0.0),
            curvature: w.curvature(0.0),
        }];
        let degenerate = |cps: Vec<CriticalPoint>| WellGeometry {
            classification: WellClass::Degenerate,
            critical_points: cps,
            x0_sq: None,
            epsilon: None,
            outer_is_global: None,
        };
        if qa <= 0.0 || zero(qc) {
            return degenerate(cps);
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc.abs() <= 1e-12 * qb * qb.max(qa * qc.abs()) {
            return degenerate(cps);
        }
        let mut roots: Vec<f64> = Vec::new();
        if disc > 0.0 {
            let sq = disc.sqrt();
            // stable pair
            let t = -0.5 * (qb + qb.signum() * sq);
            let (u1, u2) = if t != 0.0 { (t / qa, qc / t) } else { (0.0, -qb / qa) };
            for u in [u1, u2] {
                if u > 0.0 {
                    roots.push(u);
                }
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let polished: Vec<f64> = roots.iter().map(|u| polish_root(w, u.sqrt())).collect();
        for &x in &polished {
            for s in [-x, x] {
                cps.push(CriticalPoint {
                    x: s,
                    v: w.value(s),
                    curvature: w.curvature(s),
                });
            }
        }
        cps.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
        let centre_min = qc > 0.0;
        let classification = match (polished.len(), centre_min) {
            (0, true) => WellClass::SingleWell,
            (1, false) => WellClass::DoubleWell,
            (2, true) => WellClass::TripleWell,
            _ => WellClass::Degenerate,
        };
        let global = cps.iter().map(|c| c.v).fold(f64::INFINITY, f64::min);
        let (x0_sq, epsilon, outer_is_global) = match classification {
            WellClass::TripleWell | WellClass::DoubleWell => {
                let x0 = *polished.last().unwrap();
                let v0 = w.value(x0);
                (Some(x0 * x0), Some(-v0), Some(v0 <= global))
            }
            _ => (None, (global < 0.0).then_some(-global), None),
        };
        WellGeometry {
            classification,
            critical_points: cps,
            x0_sq,
            epsilon,
            outer_is_global,
        }
    }

    fn band_geometry(&self) -> Result<WellGeometry> {
        self.cfg.require_band()?;
        let geo = self.classify_wells();
        if geo.classification != WellClass::TripleWell {
            return Err(Error::Constraint(format!(
                "band configuration classified {:?}",
                geo.classification
            )));
        }
        Ok(geo)
    }

    pub fn outer_minimum_x0sq(&self) -> Result<Reconciled> {
        let geo = self.band_geometry()?;
        let (b, g) = (self.cfg.b0, self.cfg.g0);
        let printed = (4.0 * b - (2.0 * (2.0 * b * b - 42.0 * b * g + 21.0 * g * g)).sqrt())
            / (3.0 * g * (g - 2.0 * b));
        Ok(Reconciled::new("outer minimum x0^2, minus root", geo.x0_sq.unwrap(), printed))
    }

    /// ε = −V₋(x₀).
    pub fn epsilon_depth(&self) -> Result<f64> {
        Ok(self.band_geometry()?.epsilon.unwrap())
    }

    /// The printed closed form for ε evaluated at the numeric x₀².
    pub fn epsilon_printed(&self, x0_sq: f64) -> f64 {
        let (b, g) = (self.cfg.b0, self.cfg.g0);
        31.0 * b / 9.0 - 2.0 * g - 4.0 * b.powi(3) / (9.0 * g * (2.0 * b - 9.0 * g))
            - (2.0 * b * b - 42.0 * b * g + 21.0 * g * g) * x0_sq / 9.0
    }

    /// V = V₋ − min V₋, so the outer minima sit at zero.
    pub fn potential_v(&self, x: f64) -> Result<f64> {
        let eps = self.epsilon_depth()?;
        Ok(self.v_minus(x) + eps)
    }

    /// Faster form for sampling once ε is known.
    pub fn shifted(&self, eps: f64) -> impl Fn(f64) -> f64 + Sync + '_ {
        move |x| self.v_minus(x) + eps
    }

    /// E₀ = ε, E_n = ε + Σ_{k<n} C_k from the recursion.
    pub fn bound_energies(&self, n_max: usize) -> Result<Spectrum> {
        if n_max > 2 {
            return Err(Error::InvalidInput(format!(
                "at most two excited states are available (n_max = {n_max})"
            )));
        }
        let eps = self.epsilon_depth()?;
        let rec = energies_recursive(
            &self.family,
            self.resolution.chosen,
            &self.a0,
            n_max,
            &self.shift_grid,
            self.tol,
        )?;
        Ok(Spectrum {
            levels: rec
                .levels
                .iter()
                .map(|l| Level {
                    n: l.n,
                    energy: eps + l.energy,
                })
                .collect(),
            provenance: Provenance::Recursion,
            meta: SpectrumMeta {
                tol: self.tol,
                grid: rec.meta.grid,
                shifts: rec.meta.shifts,
                residuals: rec.meta.residuals,
            },
        })
    }

    /// Printed level formula with the authoritative ε.
    pub fn bound_energy_printed(&self, n: usize, eps: f64) -> f64 {
        let (b, g) = (self.cfg.b0, self.cfg.g0);
        if n == 0 {
            return eps;
        }
        if n % 2 == 1 {
            let m = n.div_ceil(2) as f64;
            2.0 * (-4.0 * b + g + 2.0 * b * m + (2.0 * b - g) * g / (-g + 2.0 * b * (2.0 * m - 1.0)))
                + eps
        } else {
            let m = (n / 2) as f64;
            2.0 * (2.0 * b + g + 2.0 * b * m + (2.0 * b - g) * g / (-g + 4.0 * b * m)) + eps
        }
    }

    /// ρ = ε/(E₂ − E₁) from authoritative values.
    pub fn gap_ratio(&self) -> Result<f64> {
        let s = self.bound_energies(2)?;
        let eps = s.levels[0].energy;
        let (e1, e2) = (s.levels[1].energy, s.levels[2].energy);
        let gap = e2 - e1;
        if gap.abs() < 1e-12 * e2.abs().max(1.0) {
            return Err(Error::DegenerateGap { gap });
        }
        Ok(eps / gap)
    }

    /// The printed closed form for ρ.
    pub fn gap_ratio_printed(&self, x0_sq: f64) -> f64 {
        let (b, g) = (self.cfg.b0, self.cfg.g0);
        self.epsilon_printed(x0_sq) / (12.0 * b - 2.0 * g + 2.0 * g * (g - 2.0 * b) / (g - 4.0 * b))
    }

    pub fn gap_ratio_report(&self) -> Result<GapRatioReport> {
        let x0_sq = self.outer_minimum_x0sq()?.authoritative;
        let eps = self.epsilon_depth()?;
        let (authoritative, failure) = match self.gap_ratio() {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let printed_gap = self.bound_energy_printed(2, eps) - self.bound_energy_printed(1, eps);
        Ok(GapRatioReport {
            ratio: self.cfg.ratio(),
            b0: self.cfg.b0,
            g0: self.cfg.g0,
            epsilon: eps,
            rho: authoritative,
            rho_failure: failure,
            rho_printed_energies: finite(eps / printed_gap),
            rho_printed_closed_form: finite(self.gap_ratio_printed(x0_sq)),
        })
    }

    /// Printed-form reconciliations for this configuration.
    pub fn reconciliations(&self) -> Result<Vec<Reconciled>> {
        let mut out = Vec::new();
        let x0 = self.outer_minimum_x0sq()?;
        let x0_sq = x0.authoritative;
        out.push(x0);
        let eps = self.epsilon_depth()?;
        out.push(Reconciled::new("well depth closed form", eps, self.epsilon_printed(x0_sq)));
        let (b, g) = (self.cfg.b0, self.cfg.g0);
        let crit = 2.0 * (2.0 * b * b + 14.0 * b * g - 7.0 * g * g)
            + 8.0 * b * g * (2.0 * b - g) * x0_sq
            + 3.0 * g * g * (2.0 * b - g).powi(2) * x0_sq * x0_sq;
        out.push(Reconciled::new(
            "critical-point quartic at x0^2 (scaled by 1/|constant term|)",
            0.0,
            crit / (2.0 * (2.0 * b * b + 14.0 * b * g - 7.0 * g * g)).abs(),
        ));
        let xs = linspace(-1.5 * x0_sq.sqrt(), 1.5 * x0_sq.sqrt(), 61);
        let worst = |f: &dyn Fn(f64) -> f64| {
            xs.iter()
                .map(|&x| (f(x) - (self.v_minus(x) + eps)).abs())
                .fold(0.0, f64::max)
        };
        out.push(Reconciled::new(
            "shifted potential, expanded form (max |diff| on grid)",
            0.0,
            worst(&|x| printed_v_expanded(&self.cfg, x0_sq, x)),
        ));
        out.push(Reconciled::new(
            "shifted potential, factored form (max |diff| on grid)",
            0.0,
            worst(&|x| printed_v_factored(&self.cfg, x0_sq, x)),
        ));
        for (label, q, sign, printed) in [
            ("minus partner polynomial at a0 (max |diff|)", self.a0, Sign::Minus, printed_v_minus as fn(&Params, f64) -> f64),
            ("minus partner polynomial at a1 (max |diff|)", self.a1, Sign::Minus, printed_v_minus),
            ("plus partner polynomial at a0 (max |diff|)", self.a0, Sign::Plus, printed_v_plus),
        ] {
            let ex = PartnerExpansion::of(&q, sign);
            let d = xs.iter().map(|&x| (ex.value(x) - printed(&q, x)).abs()).fold(0.0, f64::max);
            out.push(Reconciled::new(label, 0.0, d));
        }
        let rec = energies_recursive(&self.family, self.resolution.chosen, &self.a0, 1, &self.shift_grid, self.tol)?;
        let e1 = rec.levels[1].energy;
        out.push(Reconciled::new("first excitation from level formula", eps + e1, self.bound_energy_printed(1, eps)));
        out.push(Reconciled::new("first excitation 4(G0 - B0) + eps", eps + e1, 4.0 * (g - b) + eps));
        for k in 0..=2usize {
            let auth = if k == 0 { 0.0 } else { f64::NAN };
            let auth = if k == 1 { e1 } else { auth };
            let printed = crate::shape_invariance::energy_closed_form(&self.family, &self.a0, k).unwrap_or(f64::NAN);
            out.push(Reconciled::new(&format!("general level energy, k = {k}"), auth, printed));
        }
        let sgn = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        out.push(Reconciled::new(
            "parity level energy, odd branch, level 1 (free index read as 1)",
            e1,
            -4.0 * b + 4.0 * (2.0 * b - g + b) * g / (-g + 2.0 * b),
        ));
        out.push(Reconciled::new(
            "parity level energy, even branch, level 2",
            f64::NAN,
            4.0 * b + 4.0 * (2.0 * b - g + 2.0 * b) * g / (-g + 4.0 * b),
        ));
        for n in 0..=2usize {
            let nf = n as f64;
            let auth = match n {
                0 => 0.0,
                1 => e1,
                _ => f64::NAN,
            };
            out.push(Reconciled::new(
                &format!("table-row energy, n = {n}"),
                auth,
                4.0 * sgn(n) * b + 4.0 * (b - g + 2.0 * nf) * g / (-g + 2.0 * b - nf),
            ));
        }
        Ok(out)
    }

    /// Closed-form eigenfunction candidates (unnormalized).
    pub fn wavefunction_analytic(&self, n: usize, x: f64) -> Result<f64> {
        wavefunction_analytic(&self.cfg, n, x)
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn polish_root(w: &PartnerExpansion, guess: f64) -> f64 {
    let f = |x: f64| w.slope_over_x(x);
    let (mut lo, mut hi) = (guess * (1.0 - 1e-6), guess * (1.0 + 1e-6));
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 || flo.signum() == fhi.signum() {
        return guess;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * guess || mid == lo || mid == hi {
            break;
        }
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// An authoritative value next to its printed counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconciled {
    pub form: String,
    pub authoritative: f64,
    pub printed: f64,
    pub abs_diff: f64,
    pub agrees: bool,
}

impl Reconciled {
    pub fn new(form: &str, authoritative: f64, printed: f64) -> Self {
        let abs_diff = (authoritative - printed).abs();
        let agrees = abs_diff.is_finite()
            && abs_diff <= 1e-6 * authoritative.abs().max(printed.abs()).max(1.0);
        Reconciled {
            form: form.to_string(),
            authoritative,
            printed,
            abs_diff,
            agrees,
        }
    }
}

/// Printed minus partner polynomial at a point (B, G).
pub fn printed_v_minus(q: &Params, x: f64) -> f64 {
    let (b, g) = (q.b, q.g);
    let u = x * x;
    -b + 2.0 * g + 0.5 * (2.0 * b * b - 14.0 * g * b - 7.0 * g * g) * u
        + b * g * (2.0 * b + g) * u * u
        + 0.25 * g * g * (2.0 * b + g).powi(2) * u * u * u
}

/// Printed plus partner polynomial at a point (B, G).
pub fn printed_v_plus(q: &Params, x: f64) -> f64 {
    let (b, g) = (q.b, q.g);
    let u = x * x;
    b + 2.0 * g + 0.5 * (2.0 * b * b + 14.0 * g * b - 7.0 * g * g) * u
        + b * g * (2.0 * b - g) * u * u
        + 0.25 * g * g * (2.0 * b - g).powi(2) * u * u * u
}

pub fn printed_v_expanded(cfg: &SexticConfig, x0_sq: f64, x: f64) -> f64 {
    let (b, g) = (cfg.b0, cfg.g0);
    let k = 2.0 * b * b + 14.0 * b * g - 7.0 * g * g;
    let u = x * x;
    2.0 * b * k / (9.0 * (2.0 * b - g) * g)
        + (2.0 * b * b - 42.0 * b * g + 21.0 * g * g) * x0_sq / 9.0
        + 0.5 * k * u
        + b * g * (2.0 * b - g) * u * u
        + 0.25 * g * g * (2.0 * b - g).powi(2) * u * u * u
}

pub fn printed_v_factored(cfg: &SexticConfig, x0_sq: f64, x: f64) -> f64 {
    let (b, g) = (cfg.b0, cfg.g0);
    let k = 2.0 * b * b + 14.0 * b * g - 7.0 * g * g;
    let lead = g * g * (2.0 * b - g).powi(2);
    let u = x * x;
    0.25 * lead * (u - x0_sq).powi(2) * (u + 2.0 * x0_sq + k / lead)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRatioReport {
    pub ratio: f64,
    pub b0: f64,
    pub g0: f64,
    pub epsilon: f64,
    pub rho: Option<f64>,
    pub rho_failure: Option<String>,
    /// ε over the gap of the printed level formula.
    pub rho_printed_energies: Option<f64>,
    /// The printed closed form for ρ.
    pub rho_printed_closed_form: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSpec {
    pub b0: f64,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
    pub samples: usize,
}

impl ScanSpec {
    /// The open band, pulled in slightly from both edges.
    pub fn full_band(samples: usize) -> Self {
        ScanSpec {
            b0: 1.0,
            ratio_lo: 2.0 + 1e-6,
            ratio_hi: band_upper_ratio() - 1e-6,
            samples,
        }
    }

    pub fn ratios(&self) -> Vec<f64> {
        linspace(self.ratio_lo, self.ratio_hi, self.samples)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRatioScan {
    pub spec: ScanSpec,
    pub samples: Vec<GapRatioReport>,
    pub min_rho: Option<f64>,
    pub argmin_ratio: Option<f64>,
    pub min_rho_printed_energies: Option<f64>,
    pub argmin_ratio_printed_energies: Option<f64>,
    pub evaluated: usize,
}

fn argmin(values: impl Iterator<Item = (f64, Option<f64>)>) -> (Option<f64>, Option<f64>) {
    let mut best: Option<(f64, f64)> = None;
    for (x, v) in values {
        if let Some(v) = v {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((x, v));
            }
        }
    }
    (best.map(|b| b.1), best.map(|b| b.0))
}

pub fn scan_rho(spec: &ScanSpec) -> Result<GapRatioScan> {
    if spec.samples == 0 {
        return Err(Error::InvalidInput("scan needs at least one sample".into()));
    }
    if !(spec.b0 > 0.0) {
        return Err(Error::Constraint(format!("requires B0 > 0 (got {})", spec.b0)));
    }
    let top = band_upper_ratio();
    if !(spec.ratio_lo > 2.0 && spec.ratio_hi < top && spec.ratio_lo <= spec.ratio_hi) {
        return Err(Error::Constraint(format!(
            "ratio range [{}, {}] must lie inside (2, {top})",
            spec.ratio_lo, spec.ratio_hi
        )));
    }
    let samples: Vec<GapRatioReport> = spec
        .ratios()
        .par_iter()
        .map(|r| SexticModel::new(SexticConfig::new(spec.b0, r * spec.b0)?)?.gap_ratio_report())
        .collect::<Result<Vec<_>>>()?;
    let (min_rho, argmin_ratio) = argmin(samples.iter().map(|s| (s.ratio, s.rho)));
    let (min_p, arg_p) = argmin(samples.iter().map(|s| (s.ratio, s.rho_printed_energies)));
    Ok(GapRatioScan {
        spec: *spec,
        evaluated: samples.iter().filter(|s| s.rho.is_some()).count(),
        samples,
        min_rho,
        argmin_ratio,
        min_rho_printed_energies: min_p,
        argmin_ratio_printed_energies: arg_p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleCheck {
    pub ratio: f64,
    pub lambdas: Vec<f64>,
    pub epsilon_over_b0: Vec<f64>,
    pub rho_printed_energies: Vec<Option<f64>>,
    pub max_relative_deviation: f64,
    pub invariant: bool,
}

/// ε/B₀ and the level-formula ρ at (λB₀, λG₀) for several λ.
pub fn check_scale_invariance(ratio: f64, lambdas: &[f64]) -> Result<ScaleCheck> {
    let mut eps = Vec::new();
    let mut rhos = Vec::new();
    for &l in lambdas {
        let r = SexticModel::new(SexticConfig::new(l, ratio * l)?)?.gap_ratio_report()?;
        eps.push(r.epsilon / l);
        rhos.push(r.rho_printed_energies);
    }
    let mut dev: f64 = 0.0;
    for i in 1..eps.len() {
        dev = dev.max((eps[i] - eps[0]).abs() / eps[0].abs());
        if let (Some(a), Some(b)) = (rhos[i], rhos[0]) {
            dev = dev.max((a - b).abs() / b.abs());
        }
    }
    Ok(ScaleCheck {
        ratio,
        lambdas: lambdas.to_vec(),
        epsilon_over_b0: eps,
        rho_printed_energies: rhos,
        max_relative_deviation: dev,
        invariant: dev < 1e-9,
    })
}

fn upper_exponent(cfg: &SexticConfig, x: f64) -> f64 {
    let (b, g) = (cfg.b0, cfg.g0);
    (4.0 * b - g * (g - 2.0 * b) * x * x) * x * x / 8.0
}

/// Closed-form candidates for n = 0, 1, 2, unnormalized.
pub fn wavefunction_analytic(cfg: &SexticConfig, n: usize, x: f64) -> Result<f64> {
    let (b, g) = (cfg.b0, cfg.g0);
    let q = 1.0 + g * x * x;
    let u = x * x;
    match n {
        0 => Ok((-upper_exponent(cfg, x)).exp() / q),
        1 => Ok(-4.0 * (b - g) * x / q * upper_exponent(cfg, x).exp()),
        2 => {
            let poly = 10.0 * b - 4.0 * g
                + (12.0 * b * b - 10.0 * b * g + g * g) * u
                + 4.0 * g * (g - 3.0 * b) * (g - 2.0 * b) * u * u
                + 3.0 * g * g * (g - 2.0 * b).powi(2) * u * u * u;
            Ok(upper_exponent(cfg, x).exp() * poly / q)
        }
        _ => Err(Error::InvalidInput(format!("no closed form for n = {n}"))),
    }
}

/// log Ψ₀ = −B₀x²/2 + G₀(G₀ − 2B₀)x⁴/8 − ln(1 + G₀x²).
pub fn log_psi0(cfg: &SexticConfig, x: f64) -> f64 {
    -upper_exponent(cfg, x) - (1.0 + cfg.g0 * x * x).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalizability {
    Normalizable,
    Divergent,
    ComplementNormalizable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementReport {
    /// The printed lower limit of monotonicity.
    pub alpha_printed: f64,
    /// Sample points and log|Ψ₀(x)∫ₓ^∞ Ψ₀⁻²|.
    pub xs: Vec<f64>,
    pub log_abs: Vec<f64>,
    pub decays_on_integration_side: bool,
    pub decays_on_opposite_side: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizabilityReport {
    pub n: usize,
    pub class: Normalizability,
    pub quartic_coefficient: f64,
    pub complement: Option<ComplementReport>,
}

/// Class from the sign of the x⁴ coefficient in the exponent (the x²
/// coefficient decides when it vanishes).
pub fn normalizability_class(cfg: &SexticConfig, n: usize) -> Result<NormalizabilityReport> {
    if n > 2 {
        return Err(Error::InvalidInput(format!("no closed form for n = {n}")));
    }
    let (b, g) = (cfg.b0, cfg.g0);
    let sgn = if n == 0 { 1.0 } else { -1.0 };
    let quartic = sgn * g * (g - 2.0 * b) / 8.0;
    let quadratic = -sgn * b / 2.0;
    let lead = if quartic != 0.0 { quartic } else { quadratic };
    let class = if lead < 0.0 {
        Normalizability::Normalizable
    } else {
        Normalizability::Divergent
    };
    let complement = (n == 0).then(|| complement_report(cfg));
    Ok(NormalizabilityReport {
        n,
        class,
        quartic_coefficient: quartic,
        complement,
    })
}

fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Ψ₀(x)∫ₓ^U Ψ₀⁻² in log space, with U far enough out that the tail is
/// negligible.
fn complement_report(cfg: &SexticConfig) -> ComplementReport {
    let (b, g) = (cfg.b0, cfg.g0);
    let alpha = (3.0 * g + (16.0 * b - 8.0 * b * g + 9.0 * g * g).sqrt()) / (2.0 * (g - 2.0 * b));
    let kappa = g * (g - 2.0 * b) / 8.0;
    // reach where the quartic dominates the quadratic and log terms
    let reach = if kappa > 0.0 {
        (3.0 * (b / kappa).sqrt()).max((40.0 / kappa).powf(0.25)).max(1.0 / g.abs().sqrt())
    } else {
        4.0
    };
    let upper = 2.0 * reach;
    let n = 8001;
    let grid = UniformGrid::new(-reach, upper, n).expect("valid complement grid");
    let h = grid.step();
    let xs = grid.points();
    let f: Vec<f64> = xs.iter().map(|&x| -2.0 * log_psi0(cfg, x)).collect();
    let mut tail = vec![f64::NEG_INFINITY; n];
    for i in (0..n - 1).rev() {
        let seg = (0.5 * h).ln() + logaddexp(f[i], f[i + 1]);
        tail[i] = logaddexp(tail[i + 1], seg);
    }
    let picks: Vec<f64> = linspace(-reach, reach, 9);
    let mut out_x = Vec::new();
    let mut out_l = Vec::new();
    for x in picks {
        let i = (((x - grid.lo) / h).round() as usize).min(n - 2);
        out_x.push(xs[i]);
        out_l.push(log_psi0(cfg, xs[i]) + tail[i]);
    }
    let last = out_l.len() - 1;
    let mid = last / 2;
    ComplementReport {
        alpha_printed: alpha,
        decays_on_integration_side: out_l[last] < out_l[mid] && out_l[last] < out_l[last - 1],
        decays_on_opposite_side: out_l[0] < out_l[mid] && out_l[0] < out_l[1],
        xs: out_x,
        log_abs: out_l,
    }
}

//! Superpotentials, partner potentials and the catalog of solvable families.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default exclusion radius around poles and singular endpoints.
pub const DEFAULT_EXCLUSION: f64 = 1e-6;

/// Parameter point. Catalog families with two parameters use `a` and `b`
/// and leave `d`, `g` at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub g: f64,
}

impl Params {
    pub fn new(a: f64, b: f64, d: f64, g: f64) -> Result<Self> {
        let p = Params { a, b, d, g };
        p.check()?;
        Ok(p)
    }

    pub fn pair(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0, 0.0)
    }

    pub fn check(&self) -> Result<()> {
        if self.as_array().iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(format!("parameters {self:?}")))
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.d, self.g]
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// Which partner: `Minus` is W² − W′, `Plus` is W² + W′.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    FullLine,
    HalfLine,
    Interval,
}

/// Natural domain of a superpotential. Endpoints may be infinite; finite
/// endpoints are singular and excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub lo: f64,
    pub hi: f64,
    pub poles: Vec<f64>,
}

impl Domain {
    pub fn full_line() -> Self {
        Domain {
            kind: DomainKind::FullLine,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            poles: Vec::new(),
        }
    }

    pub fn half_line() -> Self {
        Domain {
            kind: DomainKind::HalfLine,
            lo: 0.0,
            hi: f64::INFINITY,
            poles: Vec::new(),
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Domain {
            kind: DomainKind::Interval,
            lo,
            hi,
            poles: Vec::new(),
        }
    }

    /// Ok if `x` lies strictly inside the domain and farther than `radius`
    /// from every pole and finite endpoint.
    pub fn admit(&self, x: f64, radius: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain {
                x,
                reason: "non-finite abscissa".into(),
            });
        }
        if x <= self.lo + radius || x >= self.hi - radius {
            return Err(Error::Domain {
                x,
                reason: format!("outside ({}, {})", self.lo, self.hi),
            });
        }
        if let Some(p) = self.poles.iter().find(|p| (x - **p).abs() <= radius) {
            return Err(Error::Domain {
                x,
                reason: format!("within {radius:e} of pole {p}"),
            });
        }
        Ok(())
    }

    pub fn contains(&self, x: f64, radius: f64) -> bool {
        self.admit(x, radius).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    Harmonic,
    Coulomb,
    Oscillator3D,
    Morse,
    RosenMorseI,
    RosenMorseII,
    Eckart,
    ScarfI,
    ScarfII,
    PoschlTellerI,
    PoschlTellerII,
    DoubleAngle,
    QuadrupleAngle,
    Sextic,
}

impl FamilyId {
    pub const ALL: [FamilyId; 14] = [
        FamilyId::Harmonic,
        FamilyId::Coulomb,
        FamilyId::Oscillator3D,
        FamilyId::Morse,
        FamilyId::RosenMorseI,
        FamilyId::RosenMorseII,
        FamilyId::Eckart,
        FamilyId::ScarfI,
        FamilyId::ScarfII,
        FamilyId::PoschlTellerI,
        FamilyId::PoschlTellerII,
        FamilyId::DoubleAngle,
        FamilyId::QuadrupleAngle,
        FamilyId::Sextic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Harmonic => "harmonic",
            FamilyId::Coulomb => "coulomb",
            FamilyId::Oscillator3D => "oscillator-3d",
            FamilyId::Morse => "morse",
            FamilyId::RosenMorseI => "rosen-morse-i",
            FamilyId::RosenMorseII => "rosen-morse-ii",
            FamilyId::Eckart => "eckart",
            FamilyId::ScarfI => "scarf-i",
            FamilyId::ScarfII => "scarf-ii",
            FamilyId::PoschlTellerI => "poschl-teller-i",
            FamilyId::PoschlTellerII => "poschl-teller-ii",
            FamilyId::DoubleAngle => "double-angle",
            FamilyId::QuadrupleAngle => "quadruple-angle",
            FamilyId::Sextic => "sextic",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family '{s}'")))
    }
}

/// Table cells kept verbatim as documentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedRow {
    pub label: &'static str,
    pub next_params: &'static str,
    pub superpotential: &'static str,
    pub partner: &'static str,
    pub energy: &'static str,
}

/// A catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub arity: usize,
    pub scale: f64,
    pub domain: Domain,
    pub exclusion: f64,
    pub printed: PrintedRow,
}

impl FamilySpec {
    pub fn new(id: FamilyId) -> Self {
        let domain = match id {
            FamilyId::Harmonic
            | FamilyId::Morse
            | FamilyId::RosenMorseII
            | FamilyId::ScarfII
            | FamilyId::DoubleAngle
            | FamilyId::QuadrupleAngle
            | FamilyId::Sextic => Domain::full_line(),
            FamilyId::Coulomb
            | FamilyId::Oscillator3D
            | FamilyId::PoschlTellerI
            | FamilyId::PoschlTellerII
            | FamilyId::Eckart => Domain::half_line(),
            FamilyId::RosenMorseI => Domain::interval(0.0, PI),
            // tan px has a pole at π/2p, so the natural interval is centred
            FamilyId::ScarfI => Domain::interval(-PI / 2.0, PI / 2.0),
        };
        FamilySpec {
            id,
            arity: if id == FamilyId::Sextic { 4 } else { 2 },
            scale: 1.0,
            domain,
            exclusion: DEFAULT_EXCLUSION,
            printed: printed_row(id),
        }
    }

    /// Rescales p; interval endpoints follow.
    pub fn with_scale(mut self, p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidInput(format!("scale p must be positive, got {p}")));
        }
        if self.domain.kind == DomainKind::Interval {
            self.domain.lo *= self.scale / p;
            self.domain.hi *= self.scale / p;
        }
        self.scale = p;
        Ok(self)
    }

    pub fn with_exclusion(mut self, radius: f64) -> Self {
        self.exclusion = radius;
        self
    }

    /// Domain at a parameter point; sextic poles appear when G < 0.
    pub fn domain_of(&self, params: &Params) -> Domain {
        let mut dom = self.domain.clone();
        if self.id == FamilyId::Sextic && params.g < 0.0 {
            let xp = 1.0 / (-params.g).sqrt();
            dom.poles = vec![-xp, xp];
        }
        dom
    }

    pub fn w(&self, params: &Params, x: f64) -> Result<f64> {
        self.domain_of(params).admit(x, self.exclusion)?;
        Ok(self.w_unchecked(params, x))
    }

    pub fn w_prime(&self, params: &Params, x: f64) -> Result<f64> {
        self.domain_of(params).admit(x, self.exclusion)?;
        Ok(self.w_prime_unchecked(params, x))
    }

    /// W² ± W′ from the superpotential.
    pub fn partner(&self, params: &Params, x: f64, sign: Sign) -> Result<f64> {
        self.domain_of(params).admit(x, self.exclusion)?;
        let w = self.w_unchecked(params, x);
        Ok(w * w + sign.value() * self.w_prime_unchecked(params, x))
    }

    fn w_unchecked(&self, q: &Params, x: f64) -> f64 {
        let p = self.scale;
        let (a, b) = (q.a, q.b);
        let px = p * x;
        match self.id {
            FamilyId::Harmonic => a * x - b,
            FamilyId::Coulomb => a - b / x,
            FamilyId::Oscillator3D => a * x - b / x,
            FamilyId::Morse => a - b * (-px).exp(),
            FamilyId::RosenMorseI => a / px.tan() + b,
            FamilyId::RosenMorseII => a * px.tanh() + b,
            FamilyId::Eckart => -a / px.tanh() + b,
            FamilyId::ScarfI => a * px.tan() - b / px.cos(),
            FamilyId::ScarfII => a * px.tanh() + b / px.cosh(),
            FamilyId::PoschlTellerI => a / px.tanh() - b / px.sinh(),
            FamilyId::PoschlTellerII => a * px.tanh() - b / px.tanh(),
            FamilyId::DoubleAngle => a * px.tanh() + b * (2.0 * px).tanh(),
            FamilyId::QuadrupleAngle => a * px.tanh() + b * (4.0 * px).tanh(),
            FamilyId::Sextic => a * x * x * x + b * x - q.d * x / (1.0 + q.g * x * x),
        }
    }

    fn w_prime_unchecked(&self, q: &Params, x: f64) -> f64 {
        let p = self.scale;
        let (a, b) = (q.a, q.b);
        let px = p * x;
        let sech2 = |t: f64| 1.0 / (t.cosh() * t.cosh());
        match self.id {
            FamilyId::Harmonic => a,
            FamilyId::Coulomb => b / (x * x),
            FamilyId::Oscillator3D => a + b / (x * x),
            FamilyId::Morse => p * b * (-px).exp(),
            FamilyId::RosenMorseI => -a * p / (px.sin() * px.sin()),
            FamilyId::RosenMorseII => a * p * sech2(px),
            FamilyId::Eckart => a * p / (px.sinh() * px.sinh()),
            FamilyId::ScarfI => {
                let c = px.cos();
                (a - b * px.sin()) * p / (c * c)
            }
            FamilyId::ScarfII => p * (a * sech2(px) - b * px.tanh() / px.cosh()),
            FamilyId::PoschlTellerI => {
                let s = px.sinh();
                p * (-a + b * px.cosh()) / (s * s)
            }
            FamilyId::PoschlTellerII => {
                let s = px.sinh();
                p * (a * sech2(px) + b / (s * s))
            }
            FamilyId::DoubleAngle => p * (a * sech2(px) + 2.0 * b * sech2(2.0 * px)),
            FamilyId::QuadrupleAngle => p * (a * sech2(px) + 4.0 * b * sech2(4.0 * px)),
            FamilyId::Sextic => {
                let q2 = 1.0 + q.g * x * x;
                3.0 * a * x * x + b - q.d * (1.0 - q.g * x * x) / (q2 * q2)
            }
        }
    }

    /// Antiderivative of W with an arbitrary constant, where elementary.
    pub fn w_antiderivative(&self, q: &Params, x: f64) -> Option<f64> {
        let p = self.scale;
        let px = p * x;
        match self.id {
            FamilyId::Harmonic => Some(0.5 * q.a * x * x - q.b * x),
            FamilyId::Morse => Some(q.a * x + q.b * (-px).exp() / p),
            FamilyId::ScarfII => {
                Some(q.a * px.cosh().ln() / p + 2.0 * q.b * (0.5 * px).tanh().atan() / p)
            }
            FamilyId::Sextic => {
                let mut s = 0.25 * q.a * x.powi(4) + 0.5 * q.b * x * x;
                s -= if q.g == 0.0 {
                    0.5 * q.d * x * x
                } else {
                    0.5 * q.d * (1.0 + q.g * x * x).abs().ln() / q.g
                };
                Some(s)
            }
            _ => None,
        }
    }

    /// Parameters used for reference checks (p = 1).
    pub fn reference_params(&self) -> Params {
        let (a, b) = match self.id {
            FamilyId::Harmonic => (1.0, 0.0),
            FamilyId::Coulomb => (2.0, 1.0),
            FamilyId::Oscillator3D => (1.0, 2.0),
            FamilyId::Morse => (6.0, 1.0),
            FamilyId::RosenMorseI => (-2.0, 1.0),
            FamilyId::RosenMorseII => (6.0, 1.0),
            FamilyId::Eckart => (1.0, 30.0),
            FamilyId::ScarfI => (2.0, 1.0),
            FamilyId::ScarfII => (6.0, 1.0),
            FamilyId::PoschlTellerI => (6.0, 10.0),
            FamilyId::PoschlTellerII => (10.0, 1.0),
            FamilyId::DoubleAngle => (-1.0, 4.0),
            FamilyId::QuadrupleAngle => (-1.0, 8.0),
            FamilyId::Sextic => {
                let (b0, g0) = (1.0, 2.1);
                return Params {
                    a: 0.5 * (2.0 * b0 - g0) * g0,
                    b: b0,
                    d: -2.0 * g0,
                    g: g0,
                };
            }
        };
        let p = self.scale;
        Params {
            a: a * p,
            b: if self.id == FamilyId::Coulomb || self.id == FamilyId::Oscillator3D {
                b
            } else {
                b * p
            },
            d: 0.0,
            g: 0.0,
        }
    }

    /// Whether the point lies on the family's parameter manifold. The
    /// double/quadruple angle rows are shape invariant only on
    /// B = m(p − A); the sextic only on D = −2G, A = G(2B − G)/2.
    pub fn in_param_domain(&self, q: &Params) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        let p = self.scale;
        match self.id {
            FamilyId::DoubleAngle => close(q.b, 2.0 * (p - q.a)),
            FamilyId::QuadrupleAngle => close(q.b, 4.0 * (p - q.a)),
            FamilyId::Sextic => {
                close(q.d, -2.0 * q.g) && close(q.a, 0.5 * q.g * (2.0 * q.b - q.g))
            }
            _ => q.check().is_ok(),
        }
    }

    /// Window where level shifts and ground states are sampled.
    pub fn reference_window(&self, q: &Params) -> (f64, f64) {
        let p = self.scale;
        match self.domain.kind {
            DomainKind::Interval => {
                let w = self.domain.hi - self.domain.lo;
                (self.domain.lo + 0.05 * w, self.domain.hi - 0.05 * w)
            }
            DomainKind::HalfLine => match self.id {
                FamilyId::Oscillator3D => (0.1, 6.0 / q.a.abs().max(1e-3).sqrt()),
                _ => (0.1 / p, 10.0 / p),
            },
            DomainKind::FullLine => match self.id {
                FamilyId::Morse => (-2.0 / p, 10.0 / p),
                FamilyId::Sextic => {
                    let mut s = 0.0_f64;
                    if q.a != 0.0 {
                        s = s.max((q.b / q.a).abs().sqrt()).max(q.a.abs().powf(-0.25));
                    }
                    if q.g != 0.0 {
                        s = s.max(1.0 / q.g.abs().sqrt());
                    }
                    let l = (2.0 * s).clamp(0.5, 10.0);
                    (-l, l)
                }
                _ => (-10.0 / p, 10.0 / p),
            },
        }
    }
}

/// All fourteen families in table order, p = 1.
pub fn catalog() -> Vec<FamilySpec> {
    FamilyId::ALL.into_iter().map(FamilySpec::new).collect()
}

pub fn lookup(id: FamilyId) -> FamilySpec {
    FamilySpec::new(id)
}

fn printed_row(id: FamilyId) -> PrintedRow {
    let (label, next_params, superpotential, partner, energy) = match id {
        FamilyId::Harmonic => ("Harmonic", "(A, B)", "Ax - B", "(Ax - B)^2 - A", "2An"),
        FamilyId::Coulomb => (
            "Coulomb",
            "(A^2/(1 ± B), 1 + B)",
            "A - B/x",
            "A^2 + B(B-1)/x^2 - 2AB/x",
            "A^2 - ((A-B)/(B+n))^2",
        ),
        FamilyId::Oscillator3D => (
            "3D-Oscillator",
            "(A, 1 + B)",
            "Ax - B/x",
            "A^2x^2 + B(B-1)/x^2 - A(2B+1)",
            "4An",
        ),
        FamilyId::Morse => (
            "Morse",
            "(A - p, B)",
            "A - Be^{-px}",
            "A^2 + B^2e^{-2px} - 2B(A + B/2)e^{-px}",
            "A^2 - (A - pn)^2",
        ),
        FamilyId::RosenMorseI => (
            "Rosen-Morse I",
            "(A - p, (A+B)/(A-p))",
            "A cot px + B",
            "-A^2 + B^2 + A(A+p) csc^2 px + 2B cot px",
            "B^2 - A^2 - [A^2B^2/((A-p)n)]^2 - (A-pn)^2",
        ),
        FamilyId::RosenMorseII => (
            "Rosen-Morse II",
            "(A - p, (A+B)/(A-p))",
            "A tanh px + B",
            "A^2 + B^2 - A(A+p) sech^2 px + 2AB tanh px",
            "A^2 + B^2 - [(A+pn)^2 + A^2B^2/((A+p)n^2)]",
        ),
        FamilyId::Eckart => (
            "Eckart",
            "(A + p, (A+B)/(A+p))",
            "-A coth px + B",
            "A^2 + B^2 + A(A-p) csch^2 px - 2AB coth px",
            "A^2 + B^2 - [(A+pn)^2 + A^2B^2/((A+p)n^2)]",
        ),
        FamilyId::ScarfI => (
            "Scarf I",
            "(A + p, B)",
            "A tan px - B sec px",
            "-A^2 + (A^2 + B^2 - pA) sech^2 px - B(2A - p) sec px tan px",
            "-A^2 + (A + pn)^2",
        ),
        FamilyId::ScarfII => (
            "Scarf II",
            "(A - p, B)",
            "A tanh px + B sech px",
            "A^2 + (-A^2 + B^2 - pA) sech^2 px - B(2A + p) sech px tanh px",
            "A^2 - (A - pn)^2",
        ),
        FamilyId::PoschlTellerI => (
            "Poschl-Teller I",
            "(A - p, B)",
            "A coth px - B csch px",
            "A^2 + (A^2 + B^2 + pA) csch^2 px - B(2A + p) coth px csch px",
            "A^2 - (A - pn)^2",
        ),
        FamilyId::PoschlTellerII => (
            "Poschl-Teller II",
            "(A - p, B + p)",
            "A tanh px - B coth px",
            "(A - B)^2 + B(B - p) csch^2 px - A(A + p) sech^2 px",
            "(A - B)^2 - (A - 2pn)^2",
        ),
        FamilyId::DoubleAngle => (
            "Double angle",
            "(A - p, B - 2p)",
            "A tanh px + B tanh 2px",
            "-3p(A + B - 2p/3) + (p/3)(A + B - 2p)(tanh px - 2 tanh 2px)^2",
            "(A + B)^2 - (A + B - 3n)^2",
        ),
        FamilyId::QuadrupleAngle => (
            "Quadruple angle",
            "(A - p, B - 4p)",
            "A tanh px + B tanh 4px",
            "-(4p/12)(A + B - 24p/4) + (p/12)(A + B - 4p)(tanh px - 4 tanh 4px)^2",
            "(A + B)^2 - (A + B - (3n + 2)p)^2",
        ),
        FamilyId::Sextic => (
            "Sextic",
            "(A, -B, 4B - D, G(2B - G)/2)",
            "Ax^2 + Bx - Dx/(1+x^2)",
            "-B + 2G + (2B^2 - 14BC - 7G^2)x^2/2 - BG(2B + G)x^4 + G^2(2B + G)^2x^6/2",
            "4(-1)^n B + 4(B-G+2n)G/(-G+2B-n)",
        ),
    };
    PrintedRow {
        label,
        next_params,
        superpotential,
        partner,
        energy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sextic(a: f64, b: f64, d: f64, g: f64) -> (FamilySpec, Params) {
        (lookup(FamilyId::Sextic), Params::new(a, b, d, g).unwrap())
    }

    #[test]
    fn sextic_w_examples() {
        let (f, p) = sextic(0.0, 1.0, 0.0, 0.0);
        assert_eq!(f.w(&p, 2.0).unwrap(), 2.0);
        assert_eq!(f.w_prime(&p, 5.0).unwrap(), 1.0);
        let (f, p) = sextic(0.0, 0.0, 1.0, 1.0);
        assert_eq!(f.w(&p, 1.0).unwrap(), -0.5);
        assert_eq!(f.w_prime(&p, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn morse_and_harmonic_examples() {
        let m = lookup(FamilyId::Morse);
        assert_eq!(m.w(&Params::pair(1.0, 1.0).unwrap(), 0.0).unwrap(), 0.0);
        let h = lookup(FamilyId::Harmonic);
        let p = Params::pair(1.0, 0.0).unwrap();
        for x in [-3.0, 0.0, 0.7] {
            assert_eq!(h.w_prime(&p, x).unwrap(), 1.0);
        }
        assert_eq!(h.partner(&p, 0.0, Sign::Minus).unwrap(), -1.0);
        assert_eq!(h.partner(&p, 0.0, Sign::Plus).unwrap(), 1.0);
    }

    #[test]
    fn domains() {
        let s = lookup(FamilyId::Sextic);
        let d = s.domain_of(&Params::new(0.0, 0.0, 0.0, 1.0).unwrap());
        assert_eq!(d.kind, DomainKind::FullLine);
        assert!(d.poles.is_empty());
        let d = s.domain_of(&Params::new(0.0, 0.0, 1.0, -0.25).unwrap());
        assert_eq!(d.poles, vec![-2.0, 2.0]);
        let c = lookup(FamilyId::Coulomb).domain;
        assert_eq!((c.kind, c.lo, c.hi), (DomainKind::HalfLine, 0.0, f64::INFINITY));
        let rm = lookup(FamilyId::RosenMorseI).domain;
        assert_eq!((rm.lo, rm.hi), (0.0, PI));
    }

    #[test]
    fn pole_is_an_error() {
        let (f, p) = sextic(0.0, 0.0, 1.0, -0.25);
        assert!(matches!(f.w(&p, 2.0), Err(Error::Domain { .. })));
        assert!(f.w(&p, 2.0 + 1e-7).is_err());
        assert!(f.w(&p, 2.0 + 1e-3).is_ok());
        let c = lookup(FamilyId::Coulomb);
        assert!(c.w(&Params::pair(1.0, 1.0).unwrap(), -1.0).is_err());
    }

    #[test]
    fn catalog_shape() {
        let cat = catalog();
        assert_eq!(cat.len(), 14);
        assert_eq!(cat[0].id, FamilyId::Harmonic);
        assert_eq!(cat[0].printed.energy, "2An");
        assert_eq!(cat[3].printed.next_params, "(A - p, B)");
        assert_eq!(cat[13].id, FamilyId::Sextic);
    }

    #[test]
    fn names_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.name().parse::<FamilyId>().unwrap(), id);
        }
        assert!("quartic".parse::<FamilyId>().is_err());
    }

    #[test]
    fn nonfinite_params_rejected() {
        assert!(Params::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        for f in catalog() {
            let q = f.reference_params();
            let (lo, hi) = f.reference_window(&q);
            for i in 1..8 {
                let x = lo + (hi - lo) * i as f64 / 8.0 + 0.013;
                let exact = f.w_prime(&q, x).unwrap();
                let fd = |h: f64| (f.w(&q, x + h).unwrap() - f.w(&q, x - h).unwrap()) / (2.0 * h);
                let (e1, e2) = ((fd(1e-3) - exact).abs(), (fd(5e-4) - exact).abs());
                let scale = exact.abs().max(1.0);
                assert!(e2 < 1e-5 * scale, "{} at {x}: {e2}", f.id);
                if e1 > 1e-9 * scale {
                    let ratio = e1 / e2;
                    assert!((3.0..5.0).contains(&ratio), "{} at {x}: ratio {ratio}", f.id);
                }
            }
        }
    }

    #[test]
    fn antiderivatives_differentiate_to_w() {
        for id in [FamilyId::Harmonic, FamilyId::Morse, FamilyId::ScarfII, FamilyId::Sextic] {
            let f = lookup(id);
            let q = f.reference_params();
            for x in [-1.3, -0.2, 0.4, 1.7] {
                let h = 1e-5;
                let d = (f.w_antiderivative(&q, x + h).unwrap()
                    - f.w_antiderivative(&q, x - h).unwrap())
                    / (2.0 * h);
                assert!((d - f.w(&q, x).unwrap()).abs() < 1e-7, "{id} at {x}");
            }
        }
    }
}

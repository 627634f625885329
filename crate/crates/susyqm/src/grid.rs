//! Uniform grids, sampled functions, Simpson quadrature and stencils.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!("grid bounds [{lo}, {hi}]")));
        }
        if n < 3 {
            return Err(Error::InvalidInput(format!("grid needs n >= 3, got {n}")));
        }
        Ok(UniformGrid { lo, hi, n })
    }

    /// Symmetric grid on [−l, l].
    pub fn symmetric(l: f64, n: usize) -> Result<Self> {
        Self::new(-l, l, n)
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.n % 2 == 1 && (self.lo + self.hi).abs() <= 1e-14 * self.hi.abs()
    }

    /// Same interval, twice the density (n → 2n − 1, nested).
    pub fn refined(&self) -> Self {
        UniformGrid {
            n: 2 * self.n - 1,
            ..*self
        }
    }
}

/// Uniform grid plus sampled values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} values for {} grid points",
                values.len(),
                grid.n
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sample {i} at x = {}", grid.x(i))));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn sample(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn try_sample(grid: UniformGrid, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.n],
        }
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn integral(&self) -> Result<f64> {
        simpson(&self.values, self.grid.step())
    }
}

/// Composite Simpson's rule on equally spaced samples; odd counts only.
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "Simpson quadrature needs an odd sample count >= 3, got {n}"
        )));
    }
    let mut s = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(s * h / 3.0)
}

/// First derivative: 5-point central interior, 3-point central next to the
/// ends, 2nd-order one-sided at the ends.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        return d;
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = if i >= 2 && i + 2 < n {
            (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                / (12.0 * h)
        } else {
            (values[i + 1] - values[i - 1]) / (2.0 * h)
        };
    }
    d
}

/// 3-point second difference on interior points; ends are zero.
pub fn second_difference(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    for i in 1..n.saturating_sub(1) {
        d[i] = (values[i - 1] - 2.0 * values[i] + values[i + 1]) / (h * h);
    }
    d
}

/// Flips sign so the leftmost sample of maximal magnitude is positive.
pub fn orient(values: &mut [f64]) {
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return;
    }
    if let Some(v) = values.iter().find(|v| v.abs() >= peak * (1.0 - 1e-12)) {
        if *v < 0.0 {
            values.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Evenly spaced points, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

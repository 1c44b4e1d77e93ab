//! Completion of doubly infinite symmetric Toeplitz matrices through their
//! symbols.
//!
//! Given the band `a_k`, `|k| ≤ p`, of the symbol `s(x) = Σ a_k e^{ikx}`, find
//! the positive trigonometric polynomial `q(x) = Σ_{|k|≤p} b_k e^{ikx}` whose
//! reciprocal has exactly those band coefficients. Then `1/q` is the completed
//! symbol and its coefficients beyond `p` are the completed tail, while the
//! inverse symbol `q` has zero coefficients there.

use std::f64::consts::PI;

use crate::completion::is_spd;
use crate::error::{Error, Result};
use crate::matcore::{invert, solve, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolOptions {
    /// Largest tail index `K` to report.
    pub truncation: usize,
    /// Quadrature points; a power of two, at least `8·K`.
    pub grid: usize,
    pub max_iterations: usize,
}

impl Default for SymbolOptions {
    fn default() -> Self {
        Self {
            truncation: 32,
            grid: 1024,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolCompletion {
    /// Half-bandwidth of the specified band.
    pub p: usize,
    /// Specified coefficients `a_0 … a_p` (`a_{−k} = a_k`).
    pub a: Vec<f64>,
    /// Inverse-symbol coefficients `b_0 … b_p`; `b_k = 0` beyond `p`.
    pub b: Vec<f64>,
    /// Completed coefficients `a_{p+1} … a_K`.
    pub a_ext: Vec<f64>,
    pub grid: usize,
    pub iterations: usize,
    /// Final `max_k |(1/q)_k − a_k|` over the band.
    pub residual: f64,
    /// Autoregressive coefficients generating the tail from the band.
    pub phi: Vec<f64>,
}

impl SymbolCompletion {
    pub fn truncation(&self) -> usize {
        self.p + self.a_ext.len()
    }

    /// `a_0 … a_K`, band followed by tail.
    pub fn coefficients(&self) -> Vec<f64> {
        self.a.iter().chain(&self.a_ext).copied().collect()
    }

    /// `a_k` for `|k| ≤ K`, zero beyond.
    pub fn coefficient(&self, k: i64) -> f64 {
        self.coefficients()
            .get(k.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// `b_k`, zero for `|k| > p`.
    pub fn inverse_coefficient(&self, k: i64) -> f64 {
        self.b.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    /// Size of the last reported tail coefficient, an estimate of what the
    /// truncation at `K` discards.
    pub fn truncation_error(&self) -> f64 {
        self.a_ext.last().map_or(0.0, |v| v.abs())
    }

    /// `Σ |a_k|` over `K < k ≤ 8K`, continuing the tail recurrence: what the
    /// truncated symbol leaves out, up to a negligible remainder.
    pub fn discarded_tail(&self) -> f64 {
        let big_k = self.truncation();
        let mut all = self.coefficients();
        for k in big_k + 1..=8 * big_k {
            let next = (1..=self.p).map(|l| self.phi[l - 1] * all[k - l]).sum();
            all.push(next);
        }
        all[big_k + 1..].iter().map(|v: &f64| v.abs()).sum()
    }
}

/// `cos(2π·k·j/N)` for `k ≤ kmax`, reduced mod `N` before evaluation.
struct CosTable {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl CosTable {
    fn new(kmax: usize, n: usize) -> Self {
        let rows = (0..=kmax)
            .map(|k| {
                (0..n)
                    .map(|j| (2.0 * PI * ((k * j) % n) as f64 / n as f64).cos())
                    .collect()
            })
            .collect();
        Self { n, rows }
    }

    /// `c_0 + 2 Σ_{k≥1} c_k cos(kx)` on the grid.
    fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![coeffs[0]; self.n];
        for (k, &c) in coeffs.iter().enumerate().skip(1) {
            for (o, cs) in out.iter_mut().zip(&self.rows[k]) {
                *o += 2.0 * c * cs;
            }
        }
        out
    }

    /// Trapezoid-rule Fourier coefficient `(1/N) Σ f(x_j) cos(k x_j)`.
    fn coefficient(&self, f: &[f64], k: usize) -> f64 {
        f.iter().zip(&self.rows[k]).map(|(a, b)| a * b).sum::<f64>() / self.n as f64
    }
}

fn toeplitz(a: &[f64], n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a.get(i.abs_diff(j)).copied().unwrap_or(0.0);
        }
    }
    m
}

/// Validates a symmetric band `a_{−p} … a_p` and returns `a_0 … a_p`.
fn one_sided(band: &[f64]) -> Result<Vec<f64>> {
    if band.len() < 3 || band.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "band needs an odd number (≥ 3) of coefficients, got {}",
            band.len()
        )));
    }
    if let Some(k) = band.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: 0, col: k });
    }
    let p = band.len() / 2;
    if (1..=p).any(|k| band[p + k] != band[p - k]) {
        return Err(Error::InvalidArgument("band is not symmetric".into()));
    }
    Ok(band[p..].to_vec())
}

/// Completes the symbol whose band is `a_band = (a_{−p}, …, a_0, …, a_p)`.
///
/// `b` minimizes, by damped Newton, the convex dual
/// `Ψ(b) = Σ w_k a_k b_k − mean(log q_b)` (weights `w_0 = 1`, `w_k = 2`),
/// whose stationarity condition is `(1/q)_k = a_k` for `|k| ≤ p`. The tail is
/// the autoregressive continuation of the band, `a_k = Σ_l φ_l a_{k−l}` with
/// `T_p φ = (a_1 … a_p)`: the maximum-entropy extension, evaluated without
/// quadrature error so that its geometric decay is exact to rounding.
pub fn complete_symbol(a_band: &[f64], opts: &SymbolOptions) -> Result<SymbolCompletion> {
    let a = one_sided(a_band)?;
    let p = a.len() - 1;
    let big_k = opts.truncation;
    if big_k <= p {
        return Err(Error::InvalidArgument(format!(
            "truncation {big_k} must exceed half-bandwidth {p}"
        )));
    }
    if !opts.grid.is_power_of_two() || opts.grid < 8 * big_k {
        return Err(Error::InvalidArgument(format!(
            "grid {} must be a power of two and at least 8·K = {}",
            opts.grid,
            8 * big_k
        )));
    }
    if !is_spd(&toeplitz(&a, p + 1)) {
        return Err(Error::NotPositive);
    }

    let table = CosTable::new(p, opts.grid);
    let w: Vec<f64> = (0..=p).map(|k| if k == 0 { 1.0 } else { 2.0 }).collect();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dual = |b: &[f64]| -> Option<(f64, Vec<f64>)> {
        let q = table.synthesize(b);
        if q.iter().any(|&v| v <= 0.0) {
            return None;
        }
        let mean_log = q.iter().map(|v| v.ln()).sum::<f64>() / q.len() as f64;
        let value = (0..=p).map(|k| w[k] * a[k] * b[k]).sum::<f64>() - mean_log;
        Some((value, q))
    };

    let mut b = vec![0.0; p + 1];
    b[0] = 1.0 / a[0];
    let (mut psi, mut q) = dual(&b).ok_or(Error::NotPositive)?;
    let mut residual = f64::INFINITY;
    for iteration in 0..opts.max_iterations {
        let recip: Vec<f64> = q.iter().map(|v| 1.0 / v).collect();
        let c: Vec<f64> = (0..=p).map(|k| table.coefficient(&recip, k)).collect();
        residual = (0..=p).fold(0.0f64, |m, k| m.max((c[k] - a[k]).abs()));
        if residual <= 1e-14 * scale {
            return Ok(finish(a, b, big_k, opts.grid, iteration, residual));
        }
        let grad: Vec<f64> = (0..=p).map(|k| w[k] * (a[k] - c[k])).collect();
        let recip2: Vec<f64> = recip.iter().map(|v| v * v).collect();
        let mut hess = DenseMatrix::zeros(p + 1, p + 1);
        for k in 0..=p {
            for l in k..=p {
                let prod: Vec<f64> = recip2.iter().zip(&table.rows[l]).map(|(r, cs)| r * cs).collect();
                let h = w[k] * w[l] * table.coefficient(&prod, k);
                hess[(k, l)] = h;
                hess[(l, k)] = h;
            }
        }
        let step: Vec<f64> = solve(&hess, &grad)?.iter().map(|v| -v).collect();
        let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();

        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = b.iter().zip(&step).map(|(x, s)| x + t * s).collect();
            if let Some((value, trial_q)) = dual(&trial) {
                let slack = 1e-15 * (1.0 + psi.abs());
                if value <= psi + 1e-4 * t * slope + slack {
                    b = trial;
                    psi = value;
                    q = trial_q;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-12 {
                if residual <= 1e-10 * scale {
                    return Ok(finish(a, b, big_k, opts.grid, iteration, residual));
                }
                return Err(Error::NotPositive);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

fn finish(a: Vec<f64>, b: Vec<f64>, big_k: usize, grid: usize, iterations: usize, residual: f64) -> SymbolCompletion {
    let p = a.len() - 1;
    let phi = solve(&toeplitz(&a[..p], p), &a[1..]).expect("leading Toeplitz section is positive definite");
    let mut all = a.clone();
    for k in p + 1..=big_k {
        let next = (1..=p).map(|l| phi[l - 1] * all[k - l]).sum();
        all.push(next);
    }
    SymbolCompletion {
        p,
        a_ext: all[p + 1..].to_vec(),
        a,
        b,
        grid,
        iterations,
        residual,
        phi,
    }
}

/// `mean(log s)` over an `N`-point grid, `s = c_0 + 2 Σ c_k cos(kx)` — the
/// normalized `(1/2π)∫ log s(x) dx`.
pub fn mean_log_symbol(coeffs: &[f64], grid: usize) -> Result<f64> {
    if coeffs.is_empty() || grid == 0 {
        return Err(Error::InvalidArgument("empty symbol or grid".into()));
    }
    let s = CosTable::new(coeffs.len() - 1, grid).synthesize(coeffs);
    if s.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositive);
    }
    Ok(s.iter().map(|v| v.ln()).sum::<f64>() / grid as f64)
}

/// `(1/2π)∫ log s(x) dx` for the completed (truncated) symbol.
pub fn symbol_logdet_integrand(sc: &SymbolCompletion, grid: usize) -> Result<f64> {
    mean_log_symbol(&sc.coefficients(), grid)
}

/// `max |q(x)·s(x) − 1|` over the completion's grid.
pub fn reciprocal_residual(sc: &SymbolCompletion) -> f64 {
    let table = CosTable::new(sc.truncation(), sc.grid);
    let q = table.synthesize(&sc.b);
    let s = table.synthesize(&sc.coefficients());
    q.iter().zip(&s).fold(0.0, |m, (x, y)| m.max((x * y - 1.0).abs()))
}

/// Quadrature Fourier coefficients `0 … K` of `1/s` for the completed symbol;
/// beyond `p` they should vanish.
pub fn reciprocal_coefficients(sc: &SymbolCompletion) -> Result<Vec<f64>> {
    let table = CosTable::new(sc.truncation(), sc.grid);
    let s = table.synthesize(&sc.coefficients());
    if s.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositive);
    }
    let recip: Vec<f64> = s.iter().map(|v| 1.0 / v).collect();
    Ok((0..=sc.truncation()).map(|k| table.coefficient(&recip, k)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSection {
    pub n: usize,
    pub middle_row: Vec<f64>,
    /// `max_j |(T_n⁻¹)_{mid, j} − b_{j−mid}|`.
    pub deviation: f64,
}

/// Inverts the `n × n` Toeplitz section of the completed symbol and compares
/// its middle row with `b`.
pub fn finite_section_check(sc: &SymbolCompletion, n: usize) -> Result<FiniteSection> {
    if n.is_multiple_of(2) || n < 8 * sc.truncation() {
        return Err(Error::InvalidArgument(format!(
            "section size {n} must be odd and at least 8·K = {}",
            8 * sc.truncation()
        )));
    }
    let inv = invert(&toeplitz(&sc.coefficients(), n))?;
    let mid = n / 2;
    let middle_row = inv.row(mid).to_vec();
    let deviation = middle_row.iter().enumerate().fold(0.0f64, |m, (j, v)| {
        m.max((v - sc.inverse_coefficient(j as i64 - mid as i64)).abs())
    });
    Ok(FiniteSection {
        n,
        middle_row,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn second_difference() -> SymbolCompletion {
        complete_symbol(&[-1.0, 2.0, -1.0], &SymbolOptions::default()).unwrap()
    }

    #[test]
    fn second_difference_closed_form() {
        let sc = second_difference();
        let expected = [5.0 / 6.0, 2.0 / 6.0];
        for (got, want) in sc.b.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(sc.iterations < 20);
        for k in 2..=32 {
            let want = 2.0 * (-0.5f64).powi(k);
            assert!((sc.coefficient(k as i64) - want).abs() < 1e-14);
        }
        assert_eq!(sc.coefficient(2), 0.5);
        assert_eq!(sc.coefficient(3), -0.25);
    }

    #[test]
    fn constant_symbol() {
        let sc = complete_symbol(&[0.0, 3.0, 0.0], &SymbolOptions::default()).unwrap();
        assert!((sc.b[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(sc.b[1], 0.0);
        assert!(sc.a_ext.iter().all(|&v| v == 0.0));
        let fs = finite_section_check(&sc, 257).unwrap();
        assert!(fs.deviation < 1e-15);
        assert!((symbol_logdet_integrand(&sc, 256).unwrap() - 3f64.ln()).abs() < 1e-14);
        assert_eq!(mean_log_symbol(&[1.0], 64).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let o = SymbolOptions::default();
        assert!(complete_symbol(&[1.0, 2.0], &o).is_err());
        assert!(complete_symbol(&[-1.0, 2.0, -0.5], &o).is_err());
        assert_eq!(complete_symbol(&[-2.0, 1.0, -2.0], &o), Err(Error::NotPositive));
        let bad_grid = SymbolOptions { grid: 1000, ..o };
        assert!(complete_symbol(&[-1.0, 2.0, -1.0], &bad_grid).is_err());
        let small_grid = SymbolOptions { grid: 128, ..o };
        assert!(complete_symbol(&[-1.0, 2.0, -1.0], &small_grid).is_err());
    }

    #[test]
    fn reciprocal_and_zero_coefficient_rule() {
        let sc = second_difference();
        assert!(reciprocal_residual(&sc) < 1e-9);
        assert!((sc.discarded_tail() - 2f64.powi(-31)).abs() < 1e-20);
        let r = reciprocal_coefficients(&sc).unwrap();
        assert!(r[2..].iter().all(|v| v.abs() < 1e-9));
        assert!((r[0] - sc.b[0]).abs() < 1e-9);
    }

    #[test]
    fn completion_maximizes_mean_log() {
        let sc = second_difference();
        let f0 = symbol_logdet_integrand(&sc, 1024).unwrap();
        for h in [0.01, -0.01] {
            let mut c = sc.coefficients();
            c[2] += h;
            assert!(mean_log_symbol(&c, 1024).unwrap() < f0);
        }
    }

    #[test]
    fn wider_band_matches_band_of_reciprocal() {
        let sc = complete_symbol(&[0.3, -1.0, 3.0, -1.0, 0.3], &SymbolOptions::default()).unwrap();
        let r = reciprocal_coefficients(&sc).unwrap();
        assert!(r[3..].iter().all(|v| v.abs() < 1e-9), "{r:?}");
        assert!(reciprocal_residual(&sc) < 1e-9);
    }
}

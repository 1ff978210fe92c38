//! Indicial roots of the model Lichnerowicz operator on a half-cylinder
//! `[A, ∞) × D`, acting on circle-invariant functions:
//!
//! ```text
//! f ↦ ½(∂²_t − ∂_t)² f − (∂²_t − ∂_t)(Δ_D f) − ½(∂²_t − ∂_t) f + D*_D D_D f
//! ```
//!
//! On `f = e^{δt} φ` with `Δ_D φ = λφ` and `D*_D D_D φ = μφ` the operator
//! acts by `½s² − (λ + ½)s + μ` with `s = δ² − δ`. Roots are found by two
//! nested quadratic formulas; since `s` is invariant under `δ ↦ 1 − δ` the root
//! set is symmetric about `½`.
//!
//! Sign convention: `Δ_D` has nonnegative spectrum.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const SIGN_CONVENTION: &str = "Delta_D has nonnegative spectrum (geometer's sign)";

/// Absolute tolerance for deciding that a weight is an indicial root.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Relative residual tolerance for returned roots.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    /// Eigenvalue of `Δ_D`.
    pub lambda: f64,
    /// Eigenvalue of `D*_D D_D` on the same eigenfunction.
    pub mu: f64,
    pub multiplicity: u32,
    /// Cusp scale `a`; carried as metadata, see [`ModelCoefficients`].
    pub scale: f64,
}

impl SpectralPair {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        Self::with(lambda, mu, 1, 1.0)
    }

    pub fn with(lambda: f64, mu: f64, multiplicity: u32, scale: f64) -> Result<Self> {
        let pair = Self { lambda, mu, multiplicity, scale };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpectrum(m.to_string()));
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return bad("lambda must be finite and nonnegative");
        }
        if !self.mu.is_finite() || self.mu < 0.0 {
            return bad("mu must be finite and nonnegative");
        }
        if !self.scale.is_finite() || self.scale <= 0.0 {
            return bad("scale must be positive");
        }
        if self.multiplicity == 0 {
            return bad("multiplicity must be positive");
        }
        Ok(())
    }
}

/// Weights of the `(∂²−∂)`-terms of the model operator:
/// `quartic·(∂²−∂)² − mixed·(∂²−∂)Δ_D − linear·(∂²−∂) + D*_D D_D`.
///
/// The defaults are the unit-scale cusp. For other scales the weights must
/// be supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelCoefficients {
    pub quartic: f64,
    pub mixed: f64,
    pub linear: f64,
}

impl Default for ModelCoefficients {
    fn default() -> Self {
        Self { quartic: 0.5, mixed: 1.0, linear: 0.5 }
    }
}

impl ModelCoefficients {
    pub fn validate(&self) -> Result<()> {
        let all = [self.quartic, self.mixed, self.linear];
        if all.iter().any(|c| !c.is_finite()) || self.quartic == 0.0 {
            return Err(Error::InvalidSpectrum("quartic weight must be finite and nonzero".into()));
        }
        Ok(())
    }

    /// Coefficients of the quartic in `δ`, constant term first.
    pub fn delta_polynomial(&self, pair: &SpectralPair) -> [f64; 5] {
        let k = self.mixed * pair.lambda + self.linear;
        let q = self.quartic;
        // q(δ²−δ)² − k(δ²−δ) + μ
        [pair.mu, k, q - k, -2.0 * q, q]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicialRoot {
    pub delta: Complex64,
    pub source: SpectralPair,
    /// `δ² − δ`.
    pub s_value: Complex64,
}

impl IndicialRoot {
    pub fn is_real(&self) -> bool {
        self.delta.im.abs() <= WEIGHT_TOLERANCE
    }
}

pub fn indicial_polynomial(pair: &SpectralPair, coeffs: &ModelCoefficients, delta: Complex64) -> Complex64 {
    let c = coeffs.delta_polynomial(pair);
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * delta + ck)
}

/// `|P(δ)|` divided by `1 + Σ |c_k||δ|^k`.
pub fn relative_residual(pair: &SpectralPair, coeffs: &ModelCoefficients, delta: Complex64) -> f64 {
    let c = coeffs.delta_polynomial(pair);
    let r = delta.norm();
    let scale: f64 = c.iter().enumerate().map(|(k, ck)| ck.abs() * r.powi(k as i32)).sum();
    indicial_polynomial(pair, coeffs, delta).norm() / (1.0 + scale)
}

/// Roots of `s² − b s + c` with real coefficients, avoiding cancellation.
fn monic_quadratic(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let q = 0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(0.5 * b, im), Complex64::new(0.5 * b, -im)]
    }
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn indicial_roots(pair: &SpectralPair) -> Result<Vec<IndicialRoot>> {
    indicial_roots_with(pair, &ModelCoefficients::default())
}

/// All four roots `δ`, with multiplicity, ordered by real then imaginary
/// part.
pub fn indicial_roots_with(pair: &SpectralPair, coeffs: &ModelCoefficients) -> Result<Vec<IndicialRoot>> {
    pair.validate()?;
    coeffs.validate()?;
    let b = (coeffs.mixed * pair.lambda + coeffs.linear) / coeffs.quartic;
    let c = pair.mu / coeffs.quartic;
    let mut roots = Vec::with_capacity(4);
    for s in monic_quadratic(b, c) {
        // δ² − δ − s = 0  ⇒  δ = ½ ± √(¼ + s). For small s the mirror root
        // 1 − (½ + r) cancels, so it is taken as −s/(½ + r) there; elsewhere
        // the exact mirror keeps the pair symmetric to the last bit.
        let r = (s + 0.25).sqrt();
        let hi = r + 0.5;
        let lo = if s.norm() < 1.0 { Complex64::new(0.0, 0.0) - s / hi } else { 1.0 - hi };
        for delta in [lo, hi] {
            roots.push(IndicialRoot { delta, source: *pair, s_value: s });
        }
    }
    roots.sort_by(|x, y| cmp_complex(&x.delta, &y.delta));
    Ok(roots)
}

fn collect_roots(pairs: &[SpectralPair], coeffs: &ModelCoefficients) -> Result<Vec<IndicialRoot>> {
    if pairs.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut all = Vec::with_capacity(4 * pairs.len());
    for p in pairs {
        all.extend(indicial_roots_with(p, coeffs)?);
    }
    all.sort_by(|x, y| cmp_complex(&x.delta, &y.delta));
    Ok(all)
}

/// Roots, over all pairs, whose real part lies in the open interval
/// `(lo, hi)`.
pub fn roots_in_window(pairs: &[SpectralPair], lo: f64, hi: f64) -> Result<Vec<IndicialRoot>> {
    roots_in_window_with(pairs, lo, hi, &ModelCoefficients::default())
}

pub fn roots_in_window_with(
    pairs: &[SpectralPair],
    lo: f64,
    hi: f64,
    coeffs: &ModelCoefficients,
) -> Result<Vec<IndicialRoot>> {
    if lo.partial_cmp(&hi) != Some(Ordering::Less) {
        return Err(Error::InvalidWindow { lo, hi });
    }
    Ok(collect_roots(pairs, coeffs)?
        .into_iter()
        .filter(|r| r.delta.re > lo && r.delta.re < hi)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightCertificate {
    /// No root has real part within [`WEIGHT_TOLERANCE`] of the weight.
    pub certified: bool,
    /// `min |Re δ − η|`.
    pub distance: f64,
    pub nearest: IndicialRoot,
}

pub fn certify_weight(pairs: &[SpectralPair], eta: f64) -> Result<WeightCertificate> {
    certify_weight_with(pairs, eta, &ModelCoefficients::default())
}

pub fn certify_weight_with(pairs: &[SpectralPair], eta: f64, coeffs: &ModelCoefficients) -> Result<WeightCertificate> {
    let roots = collect_roots(pairs, coeffs)?;
    let nearest = *roots
        .iter()
        .min_by(|a, b| (a.delta.re - eta).abs().total_cmp(&(b.delta.re - eta).abs()))
        .expect("nonempty spectrum has roots");
    let distance = (nearest.delta.re - eta).abs();
    Ok(WeightCertificate { certified: distance > WEIGHT_TOLERANCE, distance, nearest })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618_033_988_749_895;

    fn reals(pair: &SpectralPair) -> Vec<f64> {
        indicial_roots(pair).unwrap().iter().map(|r| r.delta.re).collect()
    }

    #[test]
    fn trivial_pair() {
        let p = SpectralPair::new(0.0, 0.0).unwrap();
        let got = reals(&p);
        let want = [1.0 - PHI, 0.0, 1.0, PHI];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{got:?}");
        }
        assert!(indicial_roots(&p).unwrap().iter().all(|r| r.delta.im == 0.0));
    }

    #[test]
    fn lambda_one_mu_half() {
        // ½s² − (3/2)s + ½ = 0  ⇒  s = (3 ± √5)/2
        let p = SpectralPair::new(1.0, 0.5).unwrap();
        let roots = indicial_roots(&p).unwrap();
        let s_plus = (3.0 + 5f64.sqrt()) / 2.0;
        let s_minus = (3.0 - 5f64.sqrt()) / 2.0;
        for r in &roots {
            let s = r.s_value.re;
            assert!((s - s_plus).abs() < 1e-12 || (s - s_minus).abs() < 1e-12);
            let oracle = 0.5 + (0.25 + s).sqrt();
            assert!((r.delta.re - oracle).abs() < 1e-12 || (r.delta.re - (1.0 - oracle)).abs() < 1e-12);
            assert!(relative_residual(&p, &ModelCoefficients::default(), r.delta) < RESIDUAL_TOLERANCE);
        }
    }

    #[test]
    fn complex_s_roots() {
        // (λ + ½)² < 2μ gives complex s
        let p = SpectralPair::new(0.0, 1.0).unwrap();
        let roots = indicial_roots(&p).unwrap();
        assert!(roots.iter().all(|r| r.s_value.im != 0.0));
        for r in &roots {
            assert!(relative_residual(&p, &ModelCoefficients::default(), r.delta) < RESIDUAL_TOLERANCE);
            assert!(r.delta.re <= 0.0 || r.delta.re >= 1.0);
        }
    }

    #[test]
    fn windows() {
        let p = [SpectralPair::new(0.0, 0.0).unwrap()];
        assert!(roots_in_window(&p, 0.0, 1.0).unwrap().is_empty());
        let w: Vec<f64> = roots_in_window(&p, -1.0, 0.5).unwrap().iter().map(|r| r.delta.re).collect();
        assert_eq!(w.len(), 2);
        assert!((w[0] - (1.0 - PHI)).abs() < 1e-12 && w[1].abs() < 1e-12);
        assert_eq!(roots_in_window(&[], 0.0, 1.0).unwrap_err(), Error::EmptySpectrum);
        assert!(matches!(roots_in_window(&p, 1.0, 0.0), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn weights() {
        let p = [SpectralPair::new(0.0, 0.0).unwrap()];
        let c = certify_weight(&p, -0.3).unwrap();
        assert!(c.certified);
        // nearest root is 0, not 1 − φ ≈ −0.618
        assert!((c.distance - 0.3).abs() < 1e-12);
        assert!(!certify_weight(&p, 0.0).unwrap().certified);
        assert!(certify_weight(&p, 0.5).unwrap().certified);
        assert_eq!(certify_weight(&[], 0.5).unwrap_err(), Error::EmptySpectrum);
    }

    #[test]
    fn invalid_pairs() {
        assert!(SpectralPair::new(-1.0, 0.0).is_err());
        assert!(SpectralPair::new(0.0, f64::NAN).is_err());
        assert!(SpectralPair::with(0.0, 0.0, 1, 0.0).is_err());
        let bad = ModelCoefficients { quartic: 0.0, ..Default::default() };
        assert!(indicial_roots_with(&SpectralPair::new(0.0, 0.0).unwrap(), &bad).is_err());
    }

    #[test]
    fn tiny_s_keeps_small_root_accurate() {
        // s ≈ μ/k is far below one ulp of 1, so 1 − δ₊ would round to 0
        let p = SpectralPair::new(1e8, 1e-8).unwrap();
        let c = ModelCoefficients::default();
        let roots = indicial_roots(&p).unwrap();
        let small = roots.iter().find(|r| r.delta.re.abs() < 0.5).unwrap();
        assert!(small.delta.re < 0.0 && small.delta.re > -1e-15);
        for r in &roots {
            assert!(relative_residual(&p, &c, r.delta) < RESIDUAL_TOLERANCE);
        }
    }
}

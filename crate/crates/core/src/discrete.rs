//! Discrete confocal coordinates on `𝒰 ∪ 𝒰*` and their identities.
//!
//! `x_k(n) = D_k ∏_{i<k}(-n_i-α_k-(k-i)/2+½)_{1/2} ∏_{i≥k}(n_i+α_k+(k-i)/2)_{1/2}`
//! for an integer spectrum `α_1 > … > α_N`, on the domain
//! `-α_1 ≤ n_1 ≤ -α_2 ≤ n_2 ≤ … ≤ -α_N ≤ n_N` of integer or half-integer points.
//!
//! The identity checks are generic over [`Net`] so they can run on the closed
//! form as well as on tabulated or loaded data.

use crate::continuous::{eval_continuous, ContinuousParams};
use crate::epd::{depd_quad_residual, EpdParams};
use crate::error::{domain, Error, Result};
use crate::lattice::{HalfLatticePoint, Parity, SignVector, Window};
use crate::specfun::dsqrt;
use crate::vector::{dot, norm, sub};

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteParams {
    alpha: Vec<i64>,
    d: Vec<f64>,
}

impl DiscreteParams {
    /// Validates the spectrum and computes the orthogonalizing scaling `D_k`.
    pub fn new(alpha: Vec<i64>) -> Result<Self> {
        Self::check_spectrum(&alpha)?;
        let n = alpha.len();
        let mut d = Vec::with_capacity(n);
        for k in 0..n {
            let mut inv_sq = 1.0;
            for i in (0..n).filter(|&i| i != k) {
                // doubled radicand: 2(α_i-α_k)+(i-k) for i<k, 2(α_k-α_i)+(k-i) for i>k
                let twice = if i < k {
                    2 * (alpha[i] - alpha[k]) + (i as i64 - k as i64)
                } else {
                    2 * (alpha[k] - alpha[i]) + (k as i64 - i as i64)
                };
                if twice <= 0 {
                    return Err(Error::Parameter(format!(
                        "scaling radicand for the pair (k, i) = ({}, {}) is {} <= 0",
                        k + 1,
                        i + 1,
                        twice as f64 / 2.0
                    )));
                }
                inv_sq *= twice as f64 / 2.0;
            }
            d.push(inv_sq.sqrt().recip());
        }
        Ok(DiscreteParams { alpha, d })
    }

    /// Same spectrum with caller-chosen scaling constants (not orthogonal in general).
    pub fn with_scaling(alpha: Vec<i64>, d: Vec<f64>) -> Result<Self> {
        Self::check_spectrum(&alpha)?;
        if d.len() != alpha.len() || d.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Parameter(format!("need {} positive scaling constants, got {d:?}", alpha.len())));
        }
        Ok(DiscreteParams { alpha, d })
    }

    fn check_spectrum(alpha: &[i64]) -> Result<()> {
        if alpha.len() < 2 {
            return Err(Error::Parameter(format!("need N >= 2 spectrum values, got {}", alpha.len())));
        }
        if alpha.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Parameter(format!("need alpha_1 > alpha_2 > ... > alpha_N, got {alpha:?}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn check_point(&self, p: &HalfLatticePoint) -> Result<()> {
        if p.dim() != self.dim() {
            return domain(format!("point {p} has {} components, expected {}", p.dim(), self.dim()));
        }
        let m = p.m();
        for i in 0..self.dim() {
            if m[i] < -2 * self.alpha[i] {
                return domain(format!("point {p}: n_{} < -alpha_{}", i + 1, i + 1));
            }
            if i + 1 < self.dim() && m[i] > -2 * self.alpha[i + 1] {
                return domain(format!("point {p}: n_{} > -alpha_{}", i + 1, i + 2));
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: &HalfLatticePoint) -> bool {
        self.check_point(p).is_ok()
    }

    /// Domain points of the window with the given parity, row-major.
    pub fn domain_points(&self, window: &Window, parity: Parity) -> Vec<HalfLatticePoint> {
        window.points(parity).into_iter().filter(|p| self.contains(p)).collect()
    }

    /// Continuous spectrum `a_k = α_k + k/2` of the identification.
    pub fn identified_continuous(&self) -> Result<ContinuousParams> {
        ContinuousParams::new(self.alpha.iter().enumerate().map(|(k, &a)| a as f64 + (k + 1) as f64 / 2.0).collect())
    }
}

/// Identified continuous coordinates `u_i = n_i - i/2 - ¼(1-σ_i)`.
pub fn identified_u(p: &HalfLatticePoint, sigma: &SignVector) -> Vec<f64> {
    (0..p.dim())
        .map(|i| p.n(i) - (i + 1) as f64 / 2.0 - 0.25 * (1 - sigma.get(i)) as f64)
        .collect()
}

/// A discrete net on (part of) `𝒰 ∪ 𝒰*` together with its spectrum.
pub trait Net: Sync {
    fn params(&self) -> &DiscreteParams;
    fn x(&self, p: &HalfLatticePoint) -> Result<Vec<f64>>;
}

impl Net for DiscreteParams {
    fn params(&self) -> &DiscreteParams {
        self
    }

    fn x(&self, p: &HalfLatticePoint) -> Result<Vec<f64>> {
        eval_discrete(self, p)
    }
}

/// Discrete confocal coordinates at `p`.
pub fn eval_discrete(params: &DiscreteParams, p: &HalfLatticePoint) -> Result<Vec<f64>> {
    params.check_point(p)?;
    let n = params.dim();
    let m = p.m();
    let mut x = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = params.d[k];
        for i in 0..n {
            let gap = k as i64 - i as i64;
            // doubled dsqrt argument
            let twice = if i < k {
                -m[i] - 2 * params.alpha[k] - gap + 1
            } else {
                m[i] + 2 * params.alpha[k] + gap
            };
            v *= dsqrt(twice as f64 / 2.0)?;
        }
        x.push(v);
    }
    Ok(x)
}

/// `Δ_i x(n) = x(n+e_i) - x(n)`.
pub fn discrete_derivative<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize) -> Result<Vec<f64>> {
    check_dir(net, i)?;
    Ok(sub(&net.x(&p.shifted(i, 1))?, &net.x(p)?))
}

fn check_dir<N: Net + ?Sized>(net: &N, i: usize) -> Result<()> {
    if i >= net.params().dim() {
        return Err(Error::Parameter(format!("direction {} out of range", i + 1)));
    }
    Ok(())
}

fn check_pair<N: Net + ?Sized>(net: &N, i: usize, j: usize) -> Result<()> {
    check_dir(net, i)?;
    check_dir(net, j)?;
    if i == j {
        return Err(Error::Parameter("directions must differ".into()));
    }
    Ok(())
}

/// dEPD residual with `γ = ½`, `ε_i = -i/2` on the quad at `p` in directions `i, j`.
pub fn depd_residual_discrete<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<f64> {
    check_pair(net, i, j)?;
    let eps = EpdParams::confocal(net.params().dim());
    let c = eps.coefficient(i, j, p.n(i), p.n(j))?;
    let pi = p.shifted(i, 1);
    Ok(depd_quad_residual(&net.x(p)?, &net.x(&pi)?, &net.x(&p.shifted(j, 1))?, &net.x(&pi.shifted(j, 1))?, c))
}

/// The two edges `Δ_i x(n)` and `Δ_j x(n - e_j + ½f)` paired by orthogonality.
fn dual_edges<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_pair(net, i, j)?;
    let f = SignVector::ones(p.dim());
    let q = p.shifted(j, -1).shifted_half(&f);
    Ok((discrete_derivative(net, p, i)?, discrete_derivative(net, &q, j)?))
}

/// `|⟨Δ_i x(n), Δ_j x(n - e_j + ½f)⟩|`.
pub fn orthogonality_residual_discrete<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<f64> {
    let (a, b) = dual_edges(net, p, i, j)?;
    Ok(dot(&a, &b).abs())
}

/// Orthogonality residual divided by the product of the two edge lengths.
pub fn orthogonality_residual_scaled<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<f64> {
    let (a, b) = dual_edges(net, p, i, j)?;
    let scale = norm(&a) * norm(&b);
    if scale == 0.0 {
        return Err(Error::SingularStencil(format!("zero-length edge at {p}")));
    }
    Ok(dot(&a, &b).abs() / scale)
}

/// `4·(n_i + α_k + (k-i)/2 - ¼(1-σ_i))` as an integer.
fn quad_factor(params: &DiscreteParams, p: &HalfLatticePoint, sigma: &SignVector, i: usize, k: usize) -> i64 {
    2 * p.m()[i] + 4 * params.alpha[k] + 2 * (k as i64 - i as i64) - (1 - sigma.get(i))
}

/// Closed form of `x_k(n) x_k(n+½σ)`.
pub fn product_rhs(params: &DiscreteParams, p: &HalfLatticePoint, sigma: &SignVector, k: usize) -> f64 {
    let n = params.dim();
    let num: f64 = (0..n).map(|i| quad_factor(params, p, sigma, i, k) as f64 / 4.0).product();
    let den: f64 = (0..n)
        .filter(|&i| i != k)
        .map(|i| (2 * (params.alpha[k] - params.alpha[i]) + (k as i64 - i as i64)) as f64 / 2.0)
        .product();
    num / den
}

/// `(x_k(n) x_k(n+½σ), closed form)`.
pub fn product_identity<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, sigma: &SignVector, k: usize) -> Result<(f64, f64)> {
    check_dir(net, k)?;
    let lhs = net.x(p)?[k] * net.x(&p.shifted_half(sigma))?[k];
    Ok((lhs, product_rhs(net.params(), p, sigma, k)))
}

/// `max_k |lhs - rhs| / max(1, |rhs|)` over the components.
pub fn product_residual<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, sigma: &SignVector) -> Result<f64> {
    let x = net.x(p)?;
    let xs = net.x(&p.shifted_half(sigma))?;
    Ok((0..x.len())
        .map(|k| {
            let rhs = product_rhs(net.params(), p, sigma, k);
            (x[k] * xs[k] - rhs).abs() / rhs.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

/// `|Σ_k x_k(n) x_k(n+½σ) / (n_i+α_k+(k-i)/2-¼(1-σ_i)) - 1|`.
pub fn quadric_residual<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, sigma: &SignVector, i: usize) -> Result<f64> {
    check_dir(net, i)?;
    let params = net.params();
    let x = net.x(p)?;
    let xs = net.x(&p.shifted_half(sigma))?;
    let mut sum = 0.0;
    for k in 0..x.len() {
        let den = quad_factor(params, p, sigma, i, k);
        if den == 0 {
            return Err(Error::SingularIndex(format!("denominator for k = {} vanishes at {p}, sigma {sigma}", k + 1)));
        }
        sum += x[k] * xs[k] / (den as f64 / 4.0);
    }
    Ok((sum - 1.0).abs())
}

/// `(⟨x(n), x(n+½σ)⟩, Σ_k (n_k+α_k-¼(1-σ_k)))`.
pub fn scalar_identity<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, sigma: &SignVector) -> Result<(f64, f64)> {
    let lhs = dot(&net.x(p)?, &net.x(&p.shifted_half(sigma))?);
    let rhs: f64 = (0..p.dim())
        .map(|k| (2 * p.m()[k] + 4 * net.params().alpha[k] - (1 - sigma.get(k))) as f64 / 4.0)
        .sum();
    Ok((lhs, rhs))
}

/// `⟨x(n), Δ_i x(n+½σ)⟩`, which equals ½ whenever `σ_i = -1`.
pub fn radial_identity<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, sigma: &SignVector, i: usize) -> Result<f64> {
    check_dir(net, i)?;
    if sigma.get(i) != -1 {
        return Err(Error::Parameter(format!("radial identity needs sigma_{} = -1", i + 1)));
    }
    Ok(dot(&net.x(p)?, &discrete_derivative(net, &p.shifted_half(sigma), i)?))
}

/// Result of the discrete isothermic factorization check in directions `i, j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    /// `s² = |n_i - n_j + (j-i)/2 + ½|`
    pub s2: f64,
    /// `⟨Δ_i x(n), Δ_i x(n+½f)⟩`
    pub p_i: f64,
    /// `⟨Δ_j x(n-e_j+½f), Δ_j x(n-e_j+f)⟩`
    pub p_j: f64,
    /// `p_i / p_j` from the net
    pub ratio_lhs: f64,
    /// `φ_i/φ_j` from the closed form
    pub ratio_rhs: f64,
}

/// Closed forms of the two inner products of the factorization:
/// `p_i = ∏_{m≠i}(n_i-n_m+(m-i)/2+½) / (4 ∏_m (n_i+α_m+(m-i)/2+½))`,
/// `p_j = ∏_{m≠j}(n_j-n_m+(m-j)/2-½) / (4 ∏_m (n_j+α_m+(m-j)/2))`.
pub fn factorization_closed_form(params: &DiscreteParams, p: &HalfLatticePoint, i: usize, j: usize) -> (f64, f64) {
    let m = p.m();
    let n = params.dim();
    let off = |a: usize, b: usize| b as i64 - a as i64;
    let num_i: f64 = (0..n).filter(|&l| l != i).map(|l| (m[i] - m[l] + off(i, l) + 1) as f64 / 2.0).product();
    let den_i: f64 = (0..n).map(|l| (m[i] + 2 * params.alpha[l] + off(i, l) + 1) as f64 / 2.0).product();
    let num_j: f64 = (0..n).filter(|&l| l != j).map(|l| (m[j] - m[l] + off(j, l) - 1) as f64 / 2.0).product();
    let den_j: f64 = (0..n).map(|l| (m[j] + 2 * params.alpha[l] + off(j, l)) as f64 / 2.0).product();
    (num_i / (4.0 * den_i), num_j / (4.0 * den_j))
}

pub fn factorization_check<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<Factorization> {
    check_pair(net, i, j)?;
    let f = SignVector::ones(p.dim());
    let ph = p.shifted_half(&f);
    let q = p.shifted(j, -1).shifted_half(&f);
    let qh = q.shifted_half(&f);
    let p_i = dot(&discrete_derivative(net, p, i)?, &discrete_derivative(net, &ph, i)?);
    let p_j = dot(&discrete_derivative(net, &q, j)?, &discrete_derivative(net, &qh, j)?);
    let s2 = ((p.m()[i] - p.m()[j] + (j as i64 - i as i64) + 1) as f64 / 2.0).abs();
    if p_j == 0.0 {
        return Err(Error::SingularStencil(format!("vanishing denominator of the factorization quotient at {p}")));
    }
    let (ci, cj) = factorization_closed_form(net.params(), p, i, j);
    if cj == 0.0 {
        return Err(Error::SingularIndex(format!("closed-form quotient undefined at {p}")));
    }
    Ok(Factorization { s2, p_i, p_j, ratio_lhs: p_i / p_j, ratio_rhs: ci / cj })
}

/// `|p_i/p_j - φ_i/φ_j| / max(1, |φ_i/φ_j|)`.
pub fn factorization_residual<N: Net + ?Sized>(net: &N, p: &HalfLatticePoint, i: usize, j: usize) -> Result<f64> {
    let f = factorization_check(net, p, i, j)?;
    Ok((f.ratio_lhs - f.ratio_rhs).abs() / f.ratio_rhs.abs().max(1.0))
}

/// Variation of `⟨Δ_i x(n), Δ_i x(n+½σ)⟩ / s²` under `n_j → n_j + 1`, for sign
/// vectors with `σ_i = σ_j = 1` (zero when the quotient depends on `n_i` and
/// the remaining coordinates only).
pub fn factorization_sigma_residual<N: Net + ?Sized>(
    net: &N,
    p: &HalfLatticePoint,
    sigma: &SignVector,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_pair(net, i, j)?;
    if sigma.get(i) != 1 || sigma.get(j) != 1 {
        return Err(Error::Parameter("need sigma_i = sigma_j = 1".into()));
    }
    let phi = |q: &HalfLatticePoint| -> Result<f64> {
        let s2 = ((q.m()[i] - q.m()[j] + (j as i64 - i as i64) + 1) as f64 / 2.0).abs();
        if s2 == 0.0 {
            return Err(Error::SingularIndex(format!("s vanishes at {q}")));
        }
        Ok(dot(&discrete_derivative(net, q, i)?, &discrete_derivative(net, &q.shifted_half(sigma), i)?) / s2)
    };
    let a = phi(p)?;
    let b = phi(&p.shifted(j, 1))?;
    Ok((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
}

/// Max relative deviation `‖x_disc(L p) - x_cont(u(L p))‖ / ‖x_cont‖` for the
/// spectrum `L·α₀` over integer base points `p`.
pub fn continuum_deviation(alpha0: &[i64], scale: i64, base: &[Vec<i64>]) -> Result<f64> {
    let params = DiscreteParams::new(alpha0.iter().map(|a| a * scale).collect())?;
    let cont = params.identified_continuous()?;
    let f = SignVector::ones(params.dim());
    let mut worst: f64 = 0.0;
    for b in base {
        let n: Vec<i64> = b.iter().map(|v| v * scale).collect();
        let p = HalfLatticePoint::from_integers(&n);
        let xd = eval_discrete(&params, &p)?;
        let xc = eval_continuous(&cont, &identified_u(&p, &f))?;
        worst = worst.max(norm(&sub(&xd, &xc)) / norm(&xc));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::squared_coordinate_formula;
    use proptest::prelude::*;

    fn p2() -> DiscreteParams {
        DiscreteParams::new(vec![5, 1]).unwrap()
    }

    fn p3() -> DiscreteParams {
        DiscreteParams::new(vec![8, 4, 1]).unwrap()
    }

    fn pt(n: &[i64]) -> HalfLatticePoint {
        HalfLatticePoint::from_integers(n)
    }

    fn sv(s: &[i8]) -> SignVector {
        SignVector::new(s.to_vec()).unwrap()
    }

    #[test]
    fn scaling_constants() {
        let d = p2().d().to_vec();
        assert!((d[0] * d[0] - 2.0 / 7.0).abs() < 1e-15 && (d[1] * d[1] - 2.0 / 7.0).abs() < 1e-15);
        let d = p3().d().to_vec();
        for (v, e) in d.iter().zip([2.5 / 52.5, 6.0 / 52.5, 3.5 / 52.5]) {
            assert!((v * v - e).abs() < 1e-15);
        }
        assert!(DiscreteParams::new(vec![1, 5]).is_err());
        assert!(DiscreteParams::new(vec![3]).is_err());
        // unit gaps keep every radicand at least (k-i)/2
        assert!(DiscreteParams::new(vec![3, 2, 1, 0, -1]).is_ok());
    }

    #[test]
    fn spot_value() {
        let x = eval_discrete(&p2(), &pt(&[-1, 0])).unwrap();
        assert!((x[0] - 2.138089935299395).abs() < 1e-12, "{}", x[0]);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn boundary_zeros() {
        let p = p2();
        for n2 in -1..6 {
            assert_eq!(eval_discrete(&p, &pt(&[-5, n2])).unwrap()[0], 0.0);
            assert_eq!(eval_discrete(&p, &pt(&[-1, n2])).unwrap()[1], 0.0);
        }
        assert_eq!(eval_discrete(&p, &pt(&[-3, -1])).unwrap()[1], 0.0);
        assert!(eval_discrete(&p, &pt(&[-6, 0])).is_err());
        assert!(eval_discrete(&p, &pt(&[0, 0])).is_err());
        assert!(eval_discrete(&p, &pt(&[-2, -2])).is_err());
    }

    #[test]
    fn product_examples() {
        let p = p2();
        let f = sv(&[1, 1]);
        let (lhs, rhs) = product_identity(&p, &pt(&[-3, 1]), &f, 0).unwrap();
        assert!((rhs - 22.0 / 7.0).abs() < 1e-14 && (lhs - rhs).abs() < 1e-12);
        let (lhs, rhs) = product_identity(&p, &pt(&[-3, 1]), &f, 1).unwrap();
        assert!((rhs - 6.0 / 7.0).abs() < 1e-14 && (lhs - rhs).abs() < 1e-12);
        let (lhs, rhs) = product_identity(&p, &pt(&[-5, 1]), &f, 0).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
    }

    #[test]
    fn quadric_and_scalar_examples() {
        let p = p2();
        let f = sv(&[1, 1]);
        assert!(quadric_residual(&p, &pt(&[-3, 1]), &f, 0).unwrap() < 1e-12);
        assert!(quadric_residual(&p, &pt(&[-3, 1]), &f, 1).unwrap() < 1e-12);
        let (lhs, rhs) = scalar_identity(&p, &pt(&[-3, 1]), &f).unwrap();
        assert_eq!(rhs, 4.0);
        assert!((lhs - 4.0).abs() < 1e-12);
        let (lhs, rhs) = scalar_identity(&p, &pt(&[-5, -1]), &f).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        let r = radial_identity(&p, &pt(&[-3, 1]), &sv(&[-1, 1]), 0).unwrap();
        assert!((r - 0.5).abs() < 1e-11);
        assert!(radial_identity(&p, &pt(&[-3, 1]), &f, 0).is_err());
    }

    #[test]
    fn singular_quadric_denominator_is_flagged() {
        // n_2 + α_1 - ½ - ¼(1-σ_2) = 0 cannot occur for (5,1); use i = 1, k = 2:
        // n_1 + α_2 + ½ = 0 at n_1 = -1.5
        let p = p2();
        let q = HalfLatticePoint::new(vec![-3, 1]).unwrap();
        assert!(matches!(quadric_residual(&p, &q, &sv(&[1, 1]), 0), Err(Error::SingularIndex(_))));
    }

    #[test]
    fn orthogonality_examples() {
        let p = p2();
        for n in [[-3, 1], [-4, 2], [-2, 0]] {
            assert!(orthogonality_residual_discrete(&p, &pt(&n), 0, 1).unwrap() < 1e-12);
        }
        let q = p3();
        for (i, j) in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)] {
            assert!(orthogonality_residual_scaled(&q, &pt(&[-6, -3, 2]), i, j).unwrap() < 1e-12);
        }
        // non-orthogonal scaling: ⟨Δ_1 x(n), Δ_2 x(n + ½(+,-))⟩ = ¼(D_1² - D_2²)
        let bad = DiscreteParams::with_scaling(vec![5, 1], vec![0.6, 0.4]).unwrap();
        let expected = 0.25 * (0.36 - 0.16);
        for n in [[-3, 1], [-4, 3]] {
            let r = orthogonality_residual_discrete(&bad, &pt(&n), 0, 1).unwrap();
            assert!((r - expected).abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn depd_holds() {
        let p = p3();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(depd_residual_discrete(&p, &pt(&[-6, -3, 2]), i, j).unwrap() < 1e-10);
        }
        let half = HalfLatticePoint::new(vec![-11, -5, 3]).unwrap();
        assert!(depd_residual_discrete(&p, &half, 0, 2).unwrap() < 1e-10);
    }

    #[test]
    fn factorization_examples() {
        let p = p2();
        for n in [[-3, 1], [-4, 2], [-3, 4], [-5, 0]] {
            let f = factorization_check(&p, &pt(&n), 0, 1).unwrap();
            let (n1, n2) = (n[0] as f64, n[1] as f64);
            let e24 = -((n2 + 5.0 - 0.5) * (n2 + 1.0)) / ((n1 + 5.0 + 0.5) * (n1 + 1.0 + 1.0));
            assert!((f.ratio_rhs - e24).abs() < 1e-12);
            assert!((f.ratio_lhs - e24).abs() < 1e-10 * e24.abs().max(1.0));
            // both inner products are squared-length-like, so the quotient is positive
            assert!(f.ratio_rhs > 0.0 && f.ratio_lhs > 0.0);
        }
        let q = p3();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let f = factorization_check(&q, &pt(&[-6, -3, 2]), i, j).unwrap();
            let (ci, cj) = factorization_closed_form(&q, &pt(&[-6, -3, 2]), i, j);
            assert!((f.p_i - ci).abs() < 1e-12 && (f.p_j - cj).abs() < 1e-12, "{f:?} {ci} {cj}");
        }
    }

    #[test]
    fn factorization_with_general_signs() {
        let q = p3();
        for s in SignVector::all(3) {
            if s.get(0) != 1 || s.get(1) != 1 {
                continue;
            }
            let r = factorization_sigma_residual(&q, &pt(&[-6, -3, 2]), &s, 0, 1).unwrap();
            assert!(r < 1e-10, "{s}: {r}");
        }
    }

    #[test]
    fn identification_reproduces_squared_coordinates() {
        let p = p3();
        let cont = p.identified_continuous().unwrap();
        assert_eq!(cont.a(), &[8.5, 5.0, 2.5]);
        for s in SignVector::all(3) {
            let n = pt(&[-6, -3, 2]);
            let u = identified_u(&n, &s);
            let sq = squared_coordinate_formula(&cont, &u);
            for k in 0..3 {
                let rhs = product_rhs(&p, &n, &s, k);
                assert!((rhs - sq[k]).abs() <= 1e-12 * rhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn continuum_trend() {
        let base: Vec<Vec<i64>> = (-4..=-2).flat_map(|a| (0..=3).map(move |b| vec![a, b])).collect();
        let d10 = continuum_deviation(&[5, 1], 10, &base).unwrap();
        let d100 = continuum_deviation(&[5, 1], 100, &base).unwrap();
        assert!(d100 < d10, "{d10} {d100}");
        assert!(d100 < 0.2 * d10);
    }

    proptest! {
        #[test]
        fn identities_on_random_points(n1 in -8i64..=-4, n2 in -4i64..=-1, n3 in -1i64..=8, half in any::<bool>(), bits in 0usize..8) {
            let p = p3();
            let mut q = pt(&[n1, n2, n3]);
            if half {
                q = q.shifted_half(&sv(&[1, 1, 1]));
                prop_assume!(p.contains(&q));
            }
            let s = &SignVector::all(3)[bits];
            prop_assume!(p.contains(&q.shifted_half(s)));
            prop_assert!(product_residual(&p, &q, s).unwrap() <= 1e-11);
            let (lhs, rhs) = scalar_identity(&p, &q, s).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1.0));
            for i in 0..3 {
                match quadric_residual(&p, &q, s, i) {
                    Ok(r) => prop_assert!(r <= 1e-10),
                    Err(e) => prop_assert!(matches!(e, Error::SingularIndex(_))),
                }
            }
        }
    }
}

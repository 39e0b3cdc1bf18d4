//! Discrete confocal conics.
//!
//! `x(n) = (D s(n₁+α) s(n₂+α-½), D s(-n₁-β) s(n₂+β))` with `s = dsqrt`,
//! `D² = 1/(α-β-½)`, on `-α ≤ n₁ ≤ -β ≤ n₂`.

use std::collections::{HashMap, VecDeque};

use crate::discrete::DiscreteParams;
use crate::error::{domain, Error, Result};
use crate::lattice::{HalfLatticePoint, Parity, SignVector, Window};
use crate::net::TabulatedNet;
use crate::specfun::dsqrt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params2D {
    pub alpha: i64,
    pub beta: i64,
    d: f64,
}

/// Half-step directions `σ` of the τ-maps. `PlusPlus` and `PlusMinus` are
/// τ^{++} and τ^{+-}; the other two are their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauSign {
    PlusPlus,
    PlusMinus,
    MinusMinus,
    MinusPlus,
}

impl TauSign {
    pub const ALL: [TauSign; 4] = [TauSign::PlusPlus, TauSign::PlusMinus, TauSign::MinusMinus, TauSign::MinusPlus];

    pub fn sigma(self) -> [i64; 2] {
        match self {
            TauSign::PlusPlus => [1, 1],
            TauSign::PlusMinus => [1, -1],
            TauSign::MinusMinus => [-1, -1],
            TauSign::MinusPlus => [-1, 1],
        }
    }

    pub fn signs(self) -> SignVector {
        let [a, b] = self.sigma();
        SignVector::new(vec![a as i8, b as i8]).expect("±1")
    }
}

/// `dsqrt(t/2)` for a doubled argument `t`.
fn s2(t: i64) -> Result<f64> {
    dsqrt(t as f64 / 2.0)
}

impl Params2D {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        if alpha <= beta {
            return Err(Error::Parameter(format!("need alpha > beta, got {alpha}, {beta}")));
        }
        let d = (alpha as f64 - beta as f64 - 0.5).sqrt().recip();
        Ok(Params2D { alpha, beta, d })
    }

    pub fn d1(&self) -> f64 {
        self.d
    }

    pub fn d2(&self) -> f64 {
        self.d
    }

    /// The same spectrum for the general-N code.
    pub fn to_discrete(&self) -> DiscreteParams {
        DiscreteParams::new(vec![self.alpha, self.beta]).expect("alpha > beta")
    }

    pub fn check_point(&self, n: &HalfLatticePoint) -> Result<()> {
        let m = n.m();
        if m.len() != 2 {
            return domain(format!("{n} is not a planar lattice point"));
        }
        if m[0] < -2 * self.alpha || m[0] > -2 * self.beta || m[1] < -2 * self.beta {
            return domain(format!("{n} is outside -alpha <= n1 <= -beta <= n2"));
        }
        Ok(())
    }

    pub fn contains(&self, n: &HalfLatticePoint) -> bool {
        self.check_point(n).is_ok()
    }
}

/// Closed form `x(n)`.
pub fn eval_2d(params: &Params2D, n: &HalfLatticePoint) -> Result<[f64; 2]> {
    params.check_point(n)?;
    let (m, a, b, d) = (n.m(), params.alpha, params.beta, params.d);
    Ok([
        d * s2(m[0] + 2 * a)? * s2(m[1] + 2 * a - 1)?,
        d * s2(-m[0] - 2 * b)? * s2(m[1] + 2 * b)?,
    ])
}

fn check_edge(params: &Params2D, n: &HalfLatticePoint, i: usize) -> Result<()> {
    params.check_point(n)?;
    params.check_point(&n.shifted(i, 1))
}

/// Closed form of `Δ₁x(n)`.
pub fn delta1_2d(params: &Params2D, n: &HalfLatticePoint) -> Result<[f64; 2]> {
    check_edge(params, n, 0)?;
    let (m, a, b, d) = (n.m(), params.alpha, params.beta, params.d);
    Ok([
        0.5 * d * s2(m[1] + 2 * a - 1)? / s2(m[0] + 2 * a + 1)?,
        -0.5 * d * s2(m[1] + 2 * b)? / s2(-m[0] - 2 * b - 1)?,
    ])
}

/// Closed form of `Δ₂x(n)`.
pub fn delta2_2d(params: &Params2D, n: &HalfLatticePoint) -> Result<[f64; 2]> {
    check_edge(params, n, 1)?;
    let (m, a, b, d) = (n.m(), params.alpha, params.beta, params.d);
    Ok([
        0.5 * d * s2(m[0] + 2 * a)? / s2(m[1] + 2 * a)?,
        0.5 * d * s2(-m[0] - 2 * b)? / s2(m[1] + 2 * b + 1)?,
    ])
}

/// Right-hand sides of `x(n)x(n+½σ)` and `y(n)y(n+½σ)`.
fn bilinear_rhs(params: &Params2D, n: &HalfLatticePoint, sigma: [i64; 2]) -> [f64; 2] {
    let (m, a, b) = (n.m(), params.alpha, params.beta);
    // quadrupled factors
    let u1a = 2 * m[0] + 4 * a - (1 - sigma[0]);
    let u2a = 2 * m[1] + 4 * a - 2 - (1 - sigma[1]);
    let u1b = 2 * m[0] + 4 * b + 2 - (1 - sigma[0]);
    let u2b = 2 * m[1] + 4 * b - (1 - sigma[1]);
    let gap = a as f64 - b as f64 - 0.5;
    [
        (u1a as f64 / 4.0) * (u2a as f64 / 4.0) / gap,
        -(u1b as f64 / 4.0) * (u2b as f64 / 4.0) / gap,
    ]
}

/// `x(n+½σ)` from `p = x(n)` through the bilinear relations.
pub fn tau_step_2d(params: &Params2D, p: [f64; 2], n: &HalfLatticePoint, sign: TauSign) -> Result<[f64; 2]> {
    let target = n.shifted_half(&sign.signs());
    params.check_point(n)?;
    params.check_point(&target)?;
    if p.contains(&0.0) {
        return Err(Error::PropagationSingularity(format!("x({n}) = {p:?} has a vanishing component")));
    }
    let rhs = bilinear_rhs(params, n, sign.sigma());
    Ok([rhs[0] / p[0], rhs[1] / p[1]])
}

/// `|τ^{++}∘τ^{+-}(p) - τ^{+-}∘τ^{++}(p)|_∞` starting from `p = x(n)`.
pub fn tau_commutator(params: &Params2D, p: [f64; 2], n: &HalfLatticePoint) -> Result<f64> {
    let pm = TauSign::PlusMinus.signs();
    let pp = TauSign::PlusPlus.signs();
    let a = tau_step_2d(params, tau_step_2d(params, p, n, TauSign::PlusMinus)?, &n.shifted_half(&pm), TauSign::PlusPlus)?;
    let b = tau_step_2d(params, tau_step_2d(params, p, n, TauSign::PlusPlus)?, &n.shifted_half(&pp), TauSign::PlusMinus)?;
    Ok((a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
}

/// Net on the window's domain points (both parities) determined by its value
/// at one vertex. Each component is carried along half-diagonal steps through
/// vertices where it does not vanish; vertices that cannot be reached this way
/// are left out.
pub fn propagate_2d(params: &Params2D, seed: &HalfLatticePoint, value: [f64; 2], window: &Window) -> Result<TabulatedNet> {
    if !window.contains(seed) || !params.contains(seed) {
        return domain(format!("seed {seed} is not a domain point of the window"));
    }
    let inside = |q: &HalfLatticePoint| window.contains(q) && params.contains(q);
    let mut comps: Vec<HashMap<HalfLatticePoint, f64>> = Vec::with_capacity(2);
    for k in 0..2 {
        let mut known = HashMap::from([(seed.clone(), value[k])]);
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some(n) = queue.pop_front() {
            let v = known[&n];
            if v == 0.0 {
                continue;
            }
            for sign in TauSign::ALL {
                let q = n.shifted_half(&sign.signs());
                if inside(&q) && !known.contains_key(&q) {
                    known.insert(q.clone(), bilinear_rhs(params, &n, sign.sigma())[k] / v);
                    queue.push_back(q);
                }
            }
        }
        comps.push(known);
    }
    let mut net = TabulatedNet::new(params.to_discrete());
    for (q, x) in &comps[0] {
        if let Some(y) = comps[1].get(q) {
            net.insert(q.clone(), vec![*x, *y])?;
        }
    }
    Ok(net)
}

/// Residuals `|lhs - 1|` of the two conic relations between `x(n)` and `x(n+½σ)`.
pub fn conic_relations_2d(params: &Params2D, n: &HalfLatticePoint, sign: TauSign) -> Result<(f64, f64)> {
    let sigma = sign.sigma();
    let x = eval_2d(params, n)?;
    let xs = eval_2d(params, &n.shifted_half(&sign.signs()))?;
    let (m, a, b) = (n.m(), params.alpha, params.beta);
    let dens = [
        [2 * m[0] + 4 * a - (1 - sigma[0]), 2 * m[0] + 4 * b + 2 - (1 - sigma[0])],
        [2 * m[1] + 4 * a - 2 - (1 - sigma[1]), 2 * m[1] + 4 * b - (1 - sigma[1])],
    ];
    let mut res = [0.0; 2];
    for (r, den) in res.iter_mut().zip(dens) {
        if den.contains(&0) {
            return Err(Error::SingularIndex(format!("vanishing denominator at {n}")));
        }
        let lhs = x[0] * xs[0] / (den[0] as f64 / 4.0) + x[1] * xs[1] / (den[1] as f64 / 4.0);
        *r = (lhs - 1.0).abs();
    }
    Ok((res[0], res[1]))
}

/// Quotient of the inner products `⟨Δ₁x(n), Δ₁x(n+½f)⟩ / ⟨Δ₂x(n-e₂+½f), Δ₂x(n-e₂+f)⟩`
/// from the net, and the closed form
/// `-(n₂+α-½)(n₂+β) / ((n₁+α+½)(n₁+β+1))`.
pub fn isothermic_ratio_2d(params: &Params2D, n: &HalfLatticePoint) -> Result<(f64, f64)> {
    let f = SignVector::ones(2);
    let nh = n.shifted_half(&f);
    let q = n.shifted(1, -1).shifted_half(&f);
    let dot = |u: [f64; 2], v: [f64; 2]| u[0] * v[0] + u[1] * v[1];
    let p1 = dot(delta1_2d(params, n)?, delta1_2d(params, &nh)?);
    let p2 = dot(delta2_2d(params, &q)?, delta2_2d(params, &q.shifted_half(&f))?);
    if p2 == 0.0 {
        return Err(Error::SingularStencil(format!("vanishing inner product at {n}")));
    }
    let (m, a, b) = (n.m(), params.alpha, params.beta);
    let den = (m[0] + 2 * a + 1) * (m[0] + 2 * b + 2);
    if den == 0 {
        return Err(Error::SingularStencil(format!("closed form undefined at {n}")));
    }
    let num = (m[1] + 2 * a - 1) * (m[1] + 2 * b);
    Ok((p1 / p2, -(num as f64) / den as f64))
}

/// Domain points of a planar window with both parities.
pub fn domain_points_2d(params: &Params2D, window: &Window) -> Vec<HalfLatticePoint> {
    [Parity::Integer, Parity::Half]
        .into_iter()
        .flat_map(|par| window.points(par))
        .filter(|p| params.contains(p))
        .collect()
}

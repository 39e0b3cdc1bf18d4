//! Points of `Z^N ∪ (Z+½)^N` in doubled-integer encoding, sign vectors and
//! rectangular lattice windows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// all `n_i` integer (the lattice 𝒰)
    Integer,
    /// all `n_i` half-integer (the dual lattice 𝒰*)
    Half,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Integer => Parity::Half,
            Parity::Half => Parity::Integer,
        }
    }

    fn of(m: i64) -> Parity {
        if m.rem_euclid(2) == 0 { Parity::Integer } else { Parity::Half }
    }
}

/// Lattice point stored as `m_i = 2 n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct HalfLatticePoint {
    m: Vec<i64>,
}

impl HalfLatticePoint {
    /// Rejects empty input and mixed parity.
    pub fn new(m: Vec<i64>) -> Result<Self> {
        let Some(&first) = m.first() else {
            return Err(Error::Domain("lattice point has no components".into()));
        };
        let parity = Parity::of(first);
        if m.iter().any(|&v| Parity::of(v) != parity) {
            return Err(Error::Domain(format!("mixed parity in doubled coordinates {m:?}")));
        }
        Ok(HalfLatticePoint { m })
    }

    pub fn from_integers(n: &[i64]) -> Self {
        HalfLatticePoint { m: n.iter().map(|v| 2 * v).collect() }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn n(&self, i: usize) -> f64 {
        self.m[i] as f64 / 2.0
    }

    pub fn n_vec(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.n(i)).collect()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.m[0])
    }

    /// `n + steps·e_i`
    pub fn shifted(&self, i: usize, steps: i64) -> Self {
        let mut m = self.m.clone();
        m[i] += 2 * steps;
        HalfLatticePoint { m }
    }

    /// `n + ½σ`
    pub fn shifted_half(&self, sigma: &SignVector) -> Self {
        HalfLatticePoint { m: self.m.iter().zip(&sigma.0).map(|(m, s)| m + i64::from(*s)).collect() }
    }
}

impl TryFrom<Vec<i64>> for HalfLatticePoint {
    type Error = Error;
    fn try_from(m: Vec<i64>) -> Result<Self> {
        HalfLatticePoint::new(m)
    }
}

impl From<HalfLatticePoint> for Vec<i64> {
    fn from(p: HalfLatticePoint) -> Vec<i64> {
        p.m
    }
}

impl fmt::Display for HalfLatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .m
            .iter()
            .map(|&m| if m % 2 == 0 { format!("{}", m / 2) } else { format!("{}", m as f64 / 2.0) })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(sigma: Vec<i8>) -> Result<Self> {
        if sigma.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Parameter(format!("sign vector entries must be ±1, got {sigma:?}")));
        }
        Ok(SignVector(sigma))
    }

    /// The vector `f = (1, …, 1)`.
    pub fn ones(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    /// All `2^n` sign vectors, `(+,…,+)` first.
    pub fn all(n: usize) -> Vec<SignVector> {
        (0..1u32 << n)
            .map(|bits| SignVector((0..n).map(|i| if bits >> i & 1 == 0 { 1 } else { -1 }).collect()))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> i64 {
        i64::from(self.0[i])
    }

    pub fn with(&self, i: usize, s: i8) -> Self {
        let mut v = self.0.clone();
        v[i] = s;
        SignVector(v)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Box `lo_i ≤ n_i ≤ hi_i` with integer bounds in lattice units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub ranges: Vec<(i64, i64)>,
}

impl Window {
    pub fn new(ranges: Vec<(i64, i64)>) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::Parameter("window has no axes".into()));
        }
        if let Some((lo, hi)) = ranges.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::Parameter(format!("empty window axis {lo}:{hi}")));
        }
        Ok(Window { ranges })
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    /// Doubled coordinates of every box point of the given parity, row-major.
    pub fn points(&self, parity: Parity) -> Vec<HalfLatticePoint> {
        let axes: Vec<Vec<i64>> = self
            .ranges
            .iter()
            .map(|&(lo, hi)| match parity {
                Parity::Integer => (lo..=hi).map(|n| 2 * n).collect(),
                Parity::Half => (2 * lo + 1..2 * hi).step_by(2).collect(),
            })
            .collect();
        let mut out = vec![Vec::new()];
        for axis in &axes {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    axis.iter().map(move |&m| {
                        let mut p = prefix.clone();
                        p.push(m);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(|m| HalfLatticePoint { m }).collect()
    }

    pub fn contains(&self, p: &HalfLatticePoint) -> bool {
        p.dim() == self.dim()
            && p.m().iter().zip(&self.ranges).all(|(&m, &(lo, hi))| 2 * lo <= m && m <= 2 * hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// `"lo:hi,lo:hi,…"`
    fn from_str(s: &str) -> Result<Self> {
        let ranges = s
            .split(',')
            .map(|axis| {
                let (lo, hi) = axis
                    .split_once(':')
                    .ok_or_else(|| Error::Parameter(format!("window axis {axis:?} is not lo:hi")))?;
                let parse = |v: &str| {
                    v.trim().parse::<i64>().map_err(|_| Error::Parameter(format!("window bound {v:?} is not an integer")))
                };
                Ok((parse(lo)?, parse(hi)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Window::new(ranges)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranges.iter().map(|(lo, hi)| format!("{lo}:{hi}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_and_shifts() {
        let p = HalfLatticePoint::from_integers(&[-3, 1]);
        assert_eq!(p.parity(), Parity::Integer);
        assert_eq!(p.n_vec(), vec![-3.0, 1.0]);
        let q = p.shifted_half(&SignVector::new(vec![1, -1]).unwrap());
        assert_eq!(q.m(), &[-5, 1]);
        assert_eq!(q.parity(), Parity::Half);
        assert_eq!(q.to_string(), "(-2.5, 0.5)");
        assert!(HalfLatticePoint::new(vec![1, 2]).is_err());
        assert_eq!(p.shifted(1, -2).m(), &[-6, -2]);
    }

    #[test]
    fn sign_vectors() {
        let all = SignVector::all(3);
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], SignVector::ones(3));
        assert!(SignVector::new(vec![1, 0]).is_err());
        assert_eq!(all[3].to_string(), "--+");
    }

    #[test]
    fn window_enumeration() {
        let w: Window = "-5:-1,-1:6".parse().unwrap();
        assert_eq!(w.points(Parity::Integer).len(), 5 * 8);
        assert_eq!(w.points(Parity::Half).len(), 4 * 7);
        assert_eq!(w.points(Parity::Integer)[0].m(), &[-10, -2]);
        assert_eq!(w.to_string(), "-5:-1,-1:6");
        assert!("1:0".parse::<Window>().is_err());
        assert!("a:b".parse::<Window>().is_err());
        assert!(w.contains(&HalfLatticePoint::new(vec![-3, 11]).unwrap()));
        assert!(!w.contains(&HalfLatticePoint::new(vec![-3, 13]).unwrap()));
    }

    #[test]
    fn serde_checks_parity() {
        let p: HalfLatticePoint = serde_json::from_str("[1, 3]").unwrap();
        assert_eq!(p.parity(), Parity::Half);
        assert!(serde_json::from_str::<HalfLatticePoint>("[1, 2]").is_err());
    }
}

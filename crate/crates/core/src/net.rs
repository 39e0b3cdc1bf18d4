//! Tabulated nets and the net JSON format
//! `{"N": …, "alpha": […], "points": [{"m2": […], "x": […]}, …]}`.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::discrete::{eval_discrete, DiscreteParams, Net};
use crate::error::{Error, Result};
use crate::exec::{map_collect, Exec};
use crate::lattice::{HalfLatticePoint, Parity, Window};

/// Net values stored per lattice point; lookups outside the table are domain errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedNet {
    params: DiscreteParams,
    points: BTreeMap<HalfLatticePoint, Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct NetFile {
    #[serde(rename = "N")]
    n: usize,
    alpha: Vec<i64>,
    points: Vec<PointRecord>,
}

#[derive(Serialize, Deserialize)]
struct PointRecord {
    m2: Vec<i64>,
    x: Vec<f64>,
}

impl TabulatedNet {
    pub fn new(params: DiscreteParams) -> Self {
        TabulatedNet { params, points: BTreeMap::new() }
    }

    /// Closed-form values at every domain point of the window with the given parities.
    pub fn from_closed_form(params: &DiscreteParams, window: &Window, parities: &[Parity], exec: Exec) -> Result<Self> {
        if window.dim() != params.dim() {
            return Err(Error::Parameter(format!(
                "window has {} axes but the spectrum has {} values",
                window.dim(),
                params.dim()
            )));
        }
        let pts: Vec<HalfLatticePoint> = parities.iter().flat_map(|&par| params.domain_points(window, par)).collect();
        let values = map_collect(&pts, exec, |p| eval_discrete(params, p));
        let mut net = TabulatedNet::new(params.clone());
        for (p, x) in pts.into_iter().zip(values) {
            net.points.insert(p, x?);
        }
        Ok(net)
    }

    pub fn insert(&mut self, p: HalfLatticePoint, x: Vec<f64>) -> Result<()> {
        self.params.check_point(&p)?;
        if x.len() != self.params.dim() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed(format!("value at {p} must have {} finite components", self.params.dim())));
        }
        self.points.insert(p, x);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in lexicographic order of their doubled coordinates.
    pub fn points(&self) -> impl Iterator<Item = (&HalfLatticePoint, &Vec<f64>)> {
        self.points.iter()
    }

    pub fn lattice_points(&self) -> Vec<HalfLatticePoint> {
        self.points.keys().cloned().collect()
    }

    pub fn contains(&self, p: &HalfLatticePoint) -> bool {
        self.points.contains_key(p)
    }

    /// Adds `delta` to the value at `p`.
    pub fn perturb(&mut self, p: &HalfLatticePoint, delta: &[f64]) -> Result<()> {
        let x = self
            .points
            .get_mut(p)
            .ok_or_else(|| Error::Domain(format!("{p} is not tabulated")))?;
        for (v, d) in x.iter_mut().zip(delta) {
            *v += d;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = NetFile {
            n: self.params.dim(),
            alpha: self.params.alpha().to_vec(),
            points: self.points.iter().map(|(p, x)| PointRecord { m2: p.m().to_vec(), x: x.clone() }).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parses and validates a net document (spectrum, parity, domain, finiteness).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetFile = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("net JSON: {e}")))?;
        if file.n != file.alpha.len() {
            return Err(Error::Malformed(format!("N = {} but alpha has {} entries", file.n, file.alpha.len())));
        }
        let params = DiscreteParams::new(file.alpha).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut net = TabulatedNet::new(params);
        for rec in file.points {
            if rec.m2.len() != file.n {
                return Err(Error::Malformed(format!("point {:?} has the wrong dimension", rec.m2)));
            }
            let p = HalfLatticePoint::new(rec.m2).map_err(|e| Error::Malformed(e.to_string()))?;
            net.insert(p, rec.x).map_err(|e| Error::Malformed(e.to_string()))?;
        }
        Ok(net)
    }

    pub fn write_json(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_json()?.as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json(mut r: impl Read) -> Result<Self> {
        let mut s = String::new();
        r.read_to_string(&mut s)?;
        Self::from_json(&s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_json(std::fs::File::open(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_json(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

impl Net for TabulatedNet {
    fn params(&self) -> &DiscreteParams {
        &self.params
    }

    fn x(&self, p: &HalfLatticePoint) -> Result<Vec<f64>> {
        self.points
            .get(p)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("{p} is not tabulated")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TabulatedNet {
        let params = DiscreteParams::new(vec![5, 1]).unwrap();
        let w: Window = "-5:-1,-1:6".parse().unwrap();
        TabulatedNet::from_closed_form(&params, &w, &[Parity::Integer, Parity::Half], Exec::Parallel).unwrap()
    }

    #[test]
    fn cardinality() {
        // integer: 5·8 box points, all in the domain; half: 4·7
        assert_eq!(small().len(), 40 + 28);
    }

    #[test]
    fn json_round_trip() {
        let net = small();
        let text = net.to_json().unwrap();
        let back = TabulatedNet::from_json(&text).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn malformed_documents() {
        for bad in [
            r#"{"N": 3, "alpha": [5, 1], "points": []}"#,
            r#"{"N": 2, "alpha": [1, 5], "points": []}"#,
            r#"{"N": 2, "alpha": [5, 1], "points": [{"m2": [1, 2], "x": [0, 0]}]}"#,
            r#"{"N": 2, "alpha": [5, 1], "points": [{"m2": [-20, 2], "x": [0, 0]}]}"#,
            r#"{"N": 2, "alpha": [5, 1], "points": [{"m2": [-6, 2], "x": [0]}]}"#,
            r#"not json"#,
        ] {
            assert!(matches!(TabulatedNet::from_json(bad), Err(Error::Malformed(_))), "{bad}");
        }
    }

    #[test]
    fn lookups_outside_are_domain_errors() {
        let net = small();
        let p = HalfLatticePoint::from_integers(&[-3, 7]);
        assert!(matches!(net.x(&p), Err(Error::Domain(_))));
        let q = HalfLatticePoint::from_integers(&[-3, 1]);
        assert_eq!(net.x(&q).unwrap(), eval_discrete(net.params(), &q).unwrap());
    }
}

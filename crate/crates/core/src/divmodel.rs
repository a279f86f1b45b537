//! Divisors supported on coordinate hyperplanes and the local models `(p, d, e, f, g, r)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `Σ r_i Div(T_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordDivisor(pub Vec<u32>);

impl CoordDivisor {
    pub fn zero(d: usize) -> CoordDivisor {
        CoordDivisor(vec![0; d])
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect()
    }
    pub fn scale(&self, k: u32) -> CoordDivisor {
        CoordDivisor(self.0.iter().map(|x| x * k).collect())
    }
    pub fn add(&self, o: &CoordDivisor) -> CoordDivisor {
        CoordDivisor(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

pub fn ceil_div(e: &CoordDivisor, mm: u32) -> Result<CoordDivisor> {
    if mm == 0 {
        return Err(Error::InvalidArgument("division by zero".into()));
    }
    Ok(CoordDivisor(e.0.iter().map(|x| x.div_ceil(mm)).collect()))
}

pub fn floor_div(e: &CoordDivisor, mm: u32) -> Result<CoordDivisor> {
    if mm == 0 {
        return Err(Error::InvalidArgument("division by zero".into()));
    }
    Ok(CoordDivisor(e.0.iter().map(|x| x / mm).collect()))
}

/// `E = E' + Σ_j p^{exps_j} E_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDecomposition {
    pub exps: Vec<u32>,
    pub rest: CoordDivisor,
    pub parts: Vec<CoordDivisor>,
}

impl PDecomposition {
    pub fn reassemble(&self, p: u32) -> CoordDivisor {
        let mut acc = self.rest.clone();
        for (k, part) in self.exps.iter().zip(&self.parts) {
            acc = acc.add(&part.scale(p.pow(*k)));
        }
        acc
    }
}

/// Splits each multiplicity by the largest listed exponent `k` with `p^k | n_i`.
pub fn p_div_decomposition(e: &CoordDivisor, p: u32, exps: &[u32]) -> Result<PDecomposition> {
    if exps.is_empty() || exps[0] == 0 || exps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("exponents must be strictly increasing and ≥ 1".into()));
    }
    let d = e.0.len();
    let mut rest = CoordDivisor::zero(d);
    let mut parts = vec![CoordDivisor::zero(d); exps.len()];
    for (i, &n) in e.0.iter().enumerate() {
        match exps.iter().rposition(|&k| n > 0 && n % p.pow(k) == 0) {
            Some(j) => parts[j].0[i] = n / p.pow(exps[j]),
            None => rest.0[i] = n,
        }
    }
    Ok(PDecomposition { exps: exps.to_vec(), rest, parts })
}

/// Decomposition w.r.t. `(1, …, s)` with `p ∤ E_s`; parts indexed `D_0 = E', D_1, …, D_s`.
pub fn max_length_decomposition(e: &CoordDivisor, p: u32) -> Result<Vec<CoordDivisor>> {
    if e.is_zero() {
        return Err(Error::InvalidArgument("zero divisor".into()));
    }
    let vmax = e.0.iter().filter(|&&n| n > 0).map(|&n| vp(n, p)).max().unwrap_or(0);
    let d = e.0.len();
    let mut out = vec![CoordDivisor::zero(d); vmax as usize + 1];
    for (i, &n) in e.0.iter().enumerate() {
        if n > 0 {
            let v = vp(n, p);
            out[v as usize].0[i] = n / p.pow(v);
        }
    }
    Ok(out)
}

pub fn vp(mut n: u32, p: u32) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm2Open {
    pub level: u32,
    pub ceil: CoordDivisor,
    /// Axes inverted on `U_i`, 0-based.
    pub inverted: Vec<usize>,
}

/// For `i < n`: `⌈E/p^i⌉` and the support of `D_0 + p D_1 + … + p^i D_i`.
pub fn thm2_opens(e: &CoordDivisor, p: u32, n: u32) -> Result<Vec<Thm2Open>> {
    if e.is_zero() {
        return Err(Error::InvalidArgument("zero divisor".into()));
    }
    let exps: Vec<u32> = (1..=n).collect();
    let dec = p_div_decomposition(e, p, &exps)?;
    let mut out = Vec::new();
    for i in 0..n {
        let mut under = dec.rest.clone();
        for j in 1..=i {
            under = under.add(&dec.parts[j as usize - 1].scale(p.pow(j)));
        }
        out.push(Thm2Open { level: i, ceil: ceil_div(e, p.pow(i))?, inverted: under.support() });
    }
    Ok(out)
}

/// `A = Div(T_1…T_e)`, `B = Σ r_i Div(T_i)` with `p ∤ r_i` on `(e, f]`, `p | r_i` on `(f, g]`, zero past `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModel {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub d: usize,
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub r: Vec<u32>,
    pub prec: u32,
}

impl LocalModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(p: u32, m: u32, n: u32, d: usize, e: usize, f: usize, g: usize, r: Vec<u32>, prec: u32) -> Result<LocalModel> {
        let model = LocalModel { p, m, n, d, e, f, g, r, prec };
        model.validate()?;
        Ok(model)
    }

    /// Model with `m = n = 1`.
    pub fn simple(p: u32, e: usize, f: usize, g: usize, r: Vec<u32>, prec: u32) -> Result<LocalModel> {
        let d = r.len();
        LocalModel::new(p, 1, 1, d, e, f, g, r, prec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidModel(m));
        if !matches!(self.p, 2 | 3 | 5 | 7) {
            return bad(format!("p = {} unsupported", self.p));
        }
        if self.d == 0 || self.d > crate::series::MAX_VARS {
            return bad(format!("d = {} out of range", self.d));
        }
        if self.r.len() != self.d {
            return bad(format!("r has length {}, expected {}", self.r.len(), self.d));
        }
        if !(self.e <= self.f && self.f <= self.g && self.g <= self.d) {
            return bad("need 0 ≤ e ≤ f ≤ g ≤ d".into());
        }
        for j in 0..self.d {
            let rj = self.r[j];
            if j >= self.e && j < self.f && (rj == 0 || rj % self.p == 0) {
                return bad(format!("r_{} = {} must be ≥ 1 and prime to p", j + 1, rj));
            }
            if j >= self.f && j < self.g && (rj == 0 || rj % self.p != 0) {
                return bad(format!("r_{} = {} must be a positive multiple of p", j + 1, rj));
            }
            if j >= self.g && rj != 0 {
                return bad(format!("r_{} must vanish past g", j + 1));
            }
        }
        if self.r.iter().all(|&x| x == 0) {
            return bad("at least one r_i ≥ 1".into());
        }
        if self.m == 0 || self.n == 0 {
            return bad("m, n ≥ 1".into());
        }
        Ok(())
    }

    /// `r̃_j = r_j + 1` on `(e, f]`.
    pub fn r_tilde(&self) -> Vec<u32> {
        (0..self.d).map(|j| if j >= self.e && j < self.f { self.r[j] + 1 } else { self.r[j] }).collect()
    }

    pub fn divisor(&self) -> CoordDivisor {
        CoordDivisor(self.r.clone())
    }

    /// Axis `i` (0-based) carries a log pole in `A`.
    pub fn in_a(&self, i: usize) -> bool {
        i < self.e
    }

    /// Model whose log locus is `D_0` and whose twist is `D`, axes reordered so `D_0` comes first.
    /// Returns the model and the permutation `new → old`.
    pub fn from_divisor(p: u32, d: &CoordDivisor, prec: u32) -> Result<(LocalModel, Vec<usize>)> {
        let dd = d.0.len();
        let mut order: Vec<usize> = (0..dd).filter(|&i| d.0[i] > 0 && d.0[i] % p != 0).collect();
        let e = order.len();
        order.extend((0..dd).filter(|&i| d.0[i] > 0 && d.0[i] % p == 0));
        let g = order.len();
        order.extend((0..dd).filter(|&i| d.0[i] == 0));
        let r = order.iter().map(|&i| d.0[i]).collect();
        Ok((LocalModel::new(p, 1, 1, dd, e, e, g, r, prec)?, order))
    }
}

//! Exact linear algebra over `F_{p^m}` and `Z/p^n`.
//!
//! Elements are `u32` canonical representatives. Over `F_{p^m}` an element is the
//! integer whose base-`p` digits are the coefficients of its residue polynomial.
//! Canonical row forms are RREF over fields and the Howell form over `Z/p^n`; both
//! come out of one elimination routine keyed on the valuation of pivots.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Defining polynomials `x^m + c_{m-1} x^{m-1} + ... + c_0` as `(p, m, [c_0, .., c_{m-1}])`.
/// These are the Conway polynomials for the listed sizes.
pub const DEFINING_POLYS: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (7, 2, &[3, 6]),
    (7, 3, &[4, 0, 6]),
];

const MAX_MODULUS: u32 = 1 << 15;

#[derive(Debug)]
pub struct GfTables {
    q: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn digits(mut a: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = vec![0; m as usize];
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn build_tables(p: u32, m: u32, poly: &[u32]) -> Result<GfTables> {
    let q = p.pow(m);
    let mut add = vec![0u16; (q * q) as usize];
    let mut neg = vec![0u16; q as usize];
    for a in 0..q {
        let da = digits(a, p, m);
        let na: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
        neg[a as usize] = undigits(&na, p) as u16;
        for b in 0..q {
            let db = digits(b, p, m);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[(a * q + b) as usize] = undigits(&s, p) as u16;
        }
    }
    // powers of x modulo the defining polynomial
    let mut exp = vec![0u16; 2 * (q as usize - 1)];
    let mut log = vec![0u16; q as usize];
    let mut cur = vec![0u32; m as usize];
    cur[0] = 1;
    let mut seen = vec![false; q as usize];
    for k in 0..(q - 1) {
        let v = undigits(&cur, p);
        if seen[v as usize] {
            return Err(Error::Unsupported(format!(
                "defining polynomial for F_{}^{} is not primitive",
                p, m
            )));
        }
        seen[v as usize] = true;
        exp[k as usize] = v as u16;
        log[v as usize] = k as u16;
        let top = cur[m as usize - 1];
        for j in (1..m as usize).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        for j in 0..m as usize {
            cur[j] = (cur[j] + (p - top) * poly[j]) % p;
        }
    }
    for k in 0..(q as usize - 1) {
        exp[k + q as usize - 1] = exp[k];
    }
    Ok(GfTables { q, exp, log, add, neg })
}

fn gf_tables(p: u32, m: u32) -> Result<&'static GfTables> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), &'static GfTables>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("table cache poisoned");
    if let Some(t) = guard.get(&(p, m)) {
        return Ok(t);
    }
    let poly = DEFINING_POLYS
        .iter()
        .find(|(pp, mm, _)| *pp == p && *mm == m)
        .map(|x| x.2)
        .ok_or_else(|| Error::Unsupported(format!("no defining polynomial for F_{}^{}", p, m)))?;
    let t: &'static GfTables = Box::leak(Box::new(build_tables(p, m, poly)?));
    guard.insert((p, m), t);
    Ok(t)
}

/// Coefficient descriptor: `F_{p^m}` (with `n = 1`) or `Z/p^n` (with `m = 1`).
#[derive(Clone, Copy)]
pub struct Ring {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    fm: u64,
    gf: Option<&'static GfTables>,
}

impl PartialEq for Ring {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.m == o.m && self.n == o.n
    }
}
impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n > 1 {
            write!(f, "Z/{}^{}", self.p, self.n)
        } else {
            write!(f, "F_{}^{}", self.p, self.m)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u32,
    pub m: u32,
    pub n: u32,
}

impl Ring {
    pub fn prime_field(p: u32) -> Result<Ring> {
        Ring::zpn(p, 1)
    }

    pub fn field(p: u32, m: u32) -> Result<Ring> {
        if m <= 1 {
            return Ring::zpn(p, 1);
        }
        if !is_prime(p) {
            return Err(Error::Unsupported(format!("{} is not prime", p)));
        }
        let t = gf_tables(p, m)?;
        Ok(Ring { p, m, n: 1, q: t.q, fm: 0, gf: Some(t) })
    }

    pub fn zpn(p: u32, n: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::Unsupported(format!("{} is not prime", p)));
        }
        if n == 0 {
            return Err(Error::Unsupported("Z/p^0".into()));
        }
        let q = (p as u64).checked_pow(n).filter(|&q| q < MAX_MODULUS as u64).ok_or_else(|| {
            Error::Unsupported(format!("modulus {}^{} too large", p, n))
        })? as u32;
        Ok(Ring { p, m: 1, n, q, fm: u64::MAX / q as u64 + 1, gf: None })
    }

    pub fn from_spec(s: RingSpec) -> Result<Ring> {
        if s.n > 1 {
            if s.m > 1 {
                return Err(Error::Unsupported("W_n of extension fields".into()));
            }
            Ring::zpn(s.p, s.n)
        } else {
            Ring::field(s.p, s.m.max(1))
        }
    }

    pub fn spec(&self) -> RingSpec {
        RingSpec { p: self.p, m: self.m, n: self.n }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn is_field(&self) -> bool {
        self.n == 1
    }
    pub fn is_prime_field(&self) -> bool {
        self.n == 1 && self.m == 1
    }

    #[inline(always)]
    fn reduce(&self, a: u32) -> u32 {
        let low = self.fm.wrapping_mul(a as u64);
        ((low as u128 * self.q as u128) >> 64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.gf {
            None => {
                let s = a + b;
                if s >= self.q {
                    s - self.q
                } else {
                    s
                }
            }
            Some(t) => t.add[(a * t.q + b) as usize] as u32,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.gf {
            None => {
                if a == 0 {
                    0
                } else {
                    self.q - a
                }
            }
            Some(t) => t.neg[a as usize] as u32,
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.gf {
            None => self.reduce(a * b),
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize] as u32
                }
            }
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn one(&self) -> u32 {
        1 % self.q
    }

    /// Reduce an integer into the ring (prime subring for extension fields).
    pub fn from_int(&self, v: i64) -> u32 {
        let modulus = if self.gf.is_some() { self.p as i64 } else { self.q as i64 };
        v.rem_euclid(modulus) as u32
    }

    /// Canonical representative as a signed integer in the prime subring, if it lies there.
    pub fn to_int(&self, a: u32) -> Option<i64> {
        if self.gf.is_some() && a >= self.p {
            None
        } else {
            Some(a as i64)
        }
    }

    pub fn is_unit(&self, a: u32) -> bool {
        if self.gf.is_some() {
            a != 0
        } else {
            a % self.p != 0
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if !self.is_unit(a) {
            return None;
        }
        match self.gf {
            Some(t) => {
                let l = t.log[a as usize] as usize;
                let qq = t.q as usize - 1;
                Some(t.exp[(qq - l) % qq] as u32)
            }
            None => {
                let (mut r0, mut r1) = (self.q as i64, a as i64);
                let (mut s0, mut s1) = (0i64, 1i64);
                while r1 != 0 {
                    let t = r0 / r1;
                    (r0, r1) = (r1, r0 - t * r1);
                    (s0, s1) = (s1, s0 - t * s1);
                }
                Some(s0.rem_euclid(self.q as i64) as u32)
            }
        }
    }

    /// p-adic valuation (`None` for zero). Over a field every nonzero element has valuation 0.
    pub fn val(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.gf.is_some() || self.n == 1 {
            return Some(0);
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// `p^v` as an element (`0` once `v ≥ n`).
    pub fn p_pow(&self, v: u32) -> u32 {
        if v >= self.n {
            0
        } else {
            self.p.pow(v)
        }
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frob(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Iterates over all elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    #[inline]
    pub fn axpy(&self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        match self.gf {
            None => {
                let q = self.q;
                for (d, &s) in dst.iter_mut().zip(src) {
                    let t = *d + self.reduce(c * s);
                    *d = if t >= q { t - q } else { t };
                }
            }
            Some(_) => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        *d = self.add(*d, self.mul(c, s));
                    }
                }
            }
        }
    }

    pub fn scale(&self, v: &mut [u32], c: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    fn check(&self, v: &[u32]) -> bool {
        v.iter().all(|&x| x < self.q)
    }

    /// Unit part inverse and valuation of a nonzero element.
    fn normalizer(&self, a: u32) -> (u32, u32) {
        let v = self.val(a).expect("nonzero");
        if self.gf.is_some() || self.n == 1 {
            return (self.inv(a).expect("unit"), 0);
        }
        let u = a / self.p.pow(v);
        (self.inv(u).expect("unit part"), v)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// `M·v` for a column vector `v`.
    pub fn apply(&self, ring: &Ring, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![0; self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0;
            for (j, &x) in v.iter().enumerate() {
                acc = ring.add(acc, ring.mul(self.data[i * self.cols + j], x));
            }
            *o = acc;
        }
        Ok(out)
    }
}

/// A submodule of `ring^dim` held in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ring: Ring,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<(usize, u32)>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({:?}, dim {}, rows {:?})", self.ring, self.dim, self.rows)
    }
}

fn leading(v: &[u32]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Shared elimination. Over a field this is RREF; over `Z/p^n` it is the Howell form.
fn echelon(ring: &Ring, rows: Vec<Vec<u32>>, ncols: usize) -> (Vec<Vec<u32>>, Vec<(usize, u32)>) {
    let mut pending: Vec<Vec<u32>> = rows.into_iter().filter(|r| leading(r).is_some()).collect();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut piv: Vec<(usize, u32)> = Vec::new();
    for c in 0..ncols {
        if pending.is_empty() {
            break;
        }
        let mut best: Option<(usize, u32)> = None;
        for (k, r) in pending.iter().enumerate() {
            if let Some(v) = ring.val(r[c]) {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((k, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((k, _)) = best else { continue };
        let mut pr = pending.swap_remove(k);
        let (uinv, v) = ring.normalizer(pr[c]);
        ring.scale(&mut pr[c..], uinv);
        let pv = ring.p_pow(v);
        for other in pending.iter_mut() {
            let x = other[c];
            if x != 0 {
                let t = if ring.is_field() { x } else { x / pv };
                let nt = ring.neg(t);
                ring.axpy(&mut other[c..], nt, &pr[c..]);
            }
        }
        if v > 0 {
            let mut sat = pr.clone();
            ring.scale(&mut sat[c..], ring.p_pow(ring.n() - v));
            if leading(&sat).is_some() {
                pending.push(sat);
            }
        }
        pending.retain(|r| leading(r).is_some());
        out.push(pr);
        piv.push((c, v));
    }
    for i in 0..out.len() {
        let (c, v) = piv[i];
        let pv = ring.p_pow(v);
        let (head, tail) = out.split_at_mut(i);
        let pr = &tail[0];
        for r in head.iter_mut() {
            let x = r[c];
            if x != 0 {
                let t = if ring.is_field() { x } else { x / pv };
                if t != 0 {
                    ring.axpy(&mut r[c..], ring.neg(t), &pr[c..]);
                }
            }
        }
    }
    (out, piv)
}

pub fn canonicalize(gens: &Matrix, ring: &Ring) -> Result<Subspace> {
    Subspace::from_rows(*ring, gens.cols, gens.to_rows())
}

impl Subspace {
    pub fn zero(ring: Ring, dim: usize) -> Subspace {
        Subspace { ring, dim, rows: vec![], pivots: vec![] }
    }

    pub fn full(ring: Ring, dim: usize) -> Subspace {
        let rows: Vec<Vec<u32>> = (0..dim)
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
        let pivots = (0..dim).map(|i| (i, 0)).collect();
        Subspace { ring, dim, rows, pivots }
    }

    pub fn from_rows(ring: Ring, dim: usize, rows: Vec<Vec<u32>>) -> Result<Subspace> {
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            if !ring.check(r) {
                return Err(Error::InvalidArgument("entry not reduced".into()));
            }
        }
        let (rows, pivots) = echelon(&ring, rows, dim);
        Ok(Subspace { ring, dim, rows, pivots })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
    /// Ambient dimension.
    pub fn ambient(&self) -> usize {
        self.dim
    }
    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }
    /// Number of canonical rows; the dimension over a field.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// `log_p` of the number of elements.
    pub fn log_card(&self) -> u64 {
        if self.ring.is_field() {
            self.rows.len() as u64 * self.ring.m() as u64
        } else {
            self.pivots.iter().map(|&(_, v)| (self.ring.n() - v) as u64).sum()
        }
    }

    /// Reduce `v` against the canonical rows; the residual is zero iff `v` is in the span.
    /// The residual is a canonical representative of `v + S` (lexicographically minimal over a field).
    pub fn residual(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let mut w = v.to_vec();
        for (r, &(c, val)) in self.rows.iter().zip(&self.pivots) {
            let x = w[c];
            if x == 0 {
                continue;
            }
            let t = if self.ring.is_field() {
                x
            } else {
                x / self.ring.p_pow(val)
            };
            self.ring.axpy(&mut w[c..], self.ring.neg(t), &r[c..]);
        }
        Ok(w)
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        Ok(leading(&self.residual(v)?).is_none())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.same_space(other)?;
        for r in &other.rows {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First row of `other` not contained in `self`.
    pub fn first_missing(&self, other: &Subspace) -> Result<Option<Vec<u32>>> {
        self.same_space(other)?;
        for r in &other.rows {
            if !self.contains(r)? {
                return Ok(Some(r.clone()));
            }
        }
        Ok(None)
    }

    fn same_space(&self, o: &Subspace) -> Result<()> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: o.dim });
        }
        if self.ring != o.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.same_space(o)?;
        let mut rows = self.rows.clone();
        rows.extend(o.rows.iter().cloned());
        Subspace::from_rows(self.ring, self.dim, rows)
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace> {
        self.same_space(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Subspace::zero(self.ring, self.dim));
        }
        // (a, b) with a·S = b·O
        let k1 = self.rows.len();
        let k2 = o.rows.len();
        let mut m = Matrix::zeros(self.dim, k1 + k2);
        for (i, r) in self.rows.iter().enumerate() {
            for j in 0..self.dim {
                m.data[j * (k1 + k2) + i] = r[j];
            }
        }
        for (i, r) in o.rows.iter().enumerate() {
            for j in 0..self.dim {
                m.data[j * (k1 + k2) + k1 + i] = self.ring.neg(r[j]);
            }
        }
        let ker = kernel(&m, &self.ring)?;
        let mut rows = Vec::new();
        for kv in &ker.rows {
            let mut v = vec![0; self.dim];
            for i in 0..k1 {
                self.ring.axpy(&mut v, kv[i], &self.rows[i]);
            }
            rows.push(v);
        }
        Subspace::from_rows(self.ring, self.dim, rows)
    }

    /// Image under the coordinate projection onto `coords` (in the given order).
    pub fn project(&self, coords: &[usize]) -> Result<Subspace> {
        let rows = self.rows.iter().map(|r| coords.iter().map(|&c| r[c]).collect()).collect();
        Subspace::from_rows(self.ring, coords.len(), rows)
    }

    /// Image under `v ↦ v·M` with `M` of shape `dim × k`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.rows != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.rows });
        }
        let rows = self.rows.iter().map(|r| row_times(&self.ring, r, m)).collect();
        Subspace::from_rows(self.ring, m.cols, rows)
    }
}

/// `v·M`.
pub fn row_times(ring: &Ring, v: &[u32], m: &Matrix) -> Vec<u32> {
    let mut out = vec![0; m.cols];
    for (i, &x) in v.iter().enumerate() {
        if x != 0 {
            ring.axpy(&mut out, x, m.row(i));
        }
    }
    out
}

/// Null space `{v : M·v = 0}`.
pub fn kernel(m: &Matrix, ring: &Ring) -> Result<Subspace> {
    if !ring.check(&m.data) {
        return Err(Error::InvalidArgument("entry not reduced".into()));
    }
    if ring.is_field() {
        let (rows, piv) = echelon(ring, m.to_rows(), m.cols);
        let pivcols: Vec<usize> = piv.iter().map(|x| x.0).collect();
        let mut is_piv = vec![usize::MAX; m.cols];
        for (k, &c) in pivcols.iter().enumerate() {
            is_piv[c] = k;
        }
        let mut basis = Vec::new();
        for f in 0..m.cols {
            if is_piv[f] != usize::MAX {
                continue;
            }
            let mut v = vec![0; m.cols];
            v[f] = ring.one();
            for (k, &c) in pivcols.iter().enumerate() {
                v[c] = ring.neg(rows[k][f]);
            }
            basis.push(v);
        }
        return Subspace::from_rows(*ring, m.cols, basis);
    }
    let r = m.rows;
    let c = m.cols;
    let aug: Vec<Vec<u32>> = (0..c)
        .map(|j| {
            let mut row = vec![0; r + c];
            for i in 0..r {
                row[i] = m.data[i * c + j];
            }
            row[r + j] = 1;
            row
        })
        .collect();
    let (rows, piv) = echelon(ring, aug, r + c);
    let ker = rows
        .into_iter()
        .zip(piv)
        .filter(|(_, (pc, _))| *pc >= r)
        .map(|(row, _)| row[r..].to_vec())
        .collect();
    Subspace::from_rows(*ring, c, ker)
}

/// Coefficients `x` with `Σ x_i gens_i = target`, if any.
pub fn solve(ring: &Ring, gens: &[Vec<u32>], target: &[u32]) -> Result<Option<Vec<u32>>> {
    let dim = target.len();
    let k = gens.len();
    for g in gens {
        if g.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
        }
    }
    let aug: Vec<Vec<u32>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row = g.clone();
            row.resize(dim + k, 0);
            row[dim + i] = 1;
            row
        })
        .collect();
    let (rows, piv) = echelon(ring, aug, dim + k);
    let mut w = target.to_vec();
    w.resize(dim + k, 0);
    for (r, &(c, val)) in rows.iter().zip(&piv) {
        if c >= dim {
            break;
        }
        let x = w[c];
        if x == 0 {
            continue;
        }
        let t = if ring.is_field() {
            x
        } else {
            let pv = ring.p_pow(val);
            if x % pv != 0 {
                return Ok(None);
            }
            x / pv
        };
        ring.axpy(&mut w[c..], ring.neg(t), &r[c..]);
    }
    if w[..dim].iter().any(|&x| x != 0) {
        return Ok(None);
    }
    Ok(Some(w[dim..].iter().map(|&x| ring.neg(x)).collect()))
}

/// Lexicographically minimal solution of `Σ x_i gens_i = target` (fields only).
pub fn solve_lexmin(ring: &Ring, gens: &[Vec<u32>], target: &[u32]) -> Result<Option<Vec<u32>>> {
    if !ring.is_field() {
        return Err(Error::Unsupported("lexmin solve over a ring".into()));
    }
    let Some(x0) = solve(ring, gens, target)? else { return Ok(None) };
    if gens.is_empty() {
        return Ok(Some(x0));
    }
    let m = Matrix::from_rows(target.len(), gens)?.transpose();
    let ker = kernel(&m, ring)?;
    Ok(Some(ker.residual(&x0)?))
}

/// Incremental row basis over a field: cheap insertion with early rejection of dependent rows.
#[derive(Clone)]
pub struct IncrementalBasis {
    ring: Ring,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivot_of: Vec<usize>,
}

impl IncrementalBasis {
    pub fn new(ring: Ring, dim: usize) -> IncrementalBasis {
        assert!(ring.is_field(), "incremental basis needs a field");
        IncrementalBasis { ring, dim, rows: Vec::new(), pivot_of: vec![usize::MAX; dim] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_in_place(&self, w: &mut [u32]) {
        for c in 0..self.dim {
            let x = w[c];
            if x != 0 {
                let k = self.pivot_of[c];
                if k != usize::MAX {
                    self.ring.axpy(&mut w[c..], self.ring.neg(x), &self.rows[k][c..]);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        leading(&w).is_none()
    }

    /// Returns `true` when `v` enlarged the span.
    pub fn insert(&mut self, v: &[u32]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        match leading(&w) {
            None => Ok(false),
            Some(c) => {
                let inv = self.ring.inv(w[c]).expect("field");
                self.ring.scale(&mut w[c..], inv);
                self.pivot_of[c] = self.rows.len();
                self.rows.push(w);
                Ok(true)
            }
        }
    }

    pub fn into_subspace(self) -> Result<Subspace> {
        Subspace::from_rows(self.ring, self.dim, self.rows)
    }
}

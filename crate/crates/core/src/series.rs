//! Truncated multivariate power series and units of `R[1/(T_1···T_f)]`.

use crate::error::{Error, Result};
use crate::modlin::Ring;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_VARS: usize = 8;

/// Exponent vector of a monomial in at most `MAX_VARS` variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    e: [u8; MAX_VARS],
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn from_slice(v: &[u32]) -> Mono {
        assert!(v.len() <= MAX_VARS);
        let mut e = [0u8; MAX_VARS];
        for (i, &x) in v.iter().enumerate() {
            e[i] = u8::try_from(x).expect("exponent overflow");
        }
        Mono { e }
    }

    pub fn var(i: usize, k: u32) -> Mono {
        let mut m = Mono::one();
        m.e[i] = u8::try_from(k).expect("exponent overflow");
        m
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn set(&mut self, i: usize, k: u32) {
        self.e[i] = u8::try_from(k).expect("exponent overflow");
    }

    pub fn degree(&self) -> u32 {
        self.e.iter().map(|&x| x as u32).sum()
    }

    pub fn to_vec(&self, d: usize) -> Vec<u32> {
        self.e[..d].iter().map(|&x| x as u32).collect()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.e[i].checked_add(o.e[i]).expect("exponent overflow");
        }
        Mono { e }
    }

    pub fn scale(&self, k: u32) -> Mono {
        let mut e = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = u8::try_from(self.e[i] as u32 * k).expect("exponent overflow");
        }
        Mono { e }
    }

    /// Componentwise `self ≥ o`.
    pub fn divisible_by(&self, o: &Mono) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| a >= b)
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if !self.divisible_by(o) {
            return None;
        }
        let mut e = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.e[i] - o.e[i];
        }
        Some(Mono { e })
    }

    /// All monomials in `d` variables of total degree exactly `k`, in graded-lex order.
    pub fn of_degree(d: usize, k: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = [0u32; MAX_VARS];
        fn rec(d: usize, pos: usize, left: u32, cur: &mut [u32; MAX_VARS], out: &mut Vec<Mono>) {
            if pos + 1 == d {
                cur[pos] = left;
                out.push(Mono::from_slice(&cur[..d]));
                return;
            }
            for a in (0..=left).rev() {
                cur[pos] = a;
                rec(d, pos + 1, left - a, cur, out);
            }
        }
        if d == 0 {
            if k == 0 {
                out.push(Mono::one());
            }
            return out;
        }
        rec(d, 0, k, &mut cur, &mut out);
        out
    }

    /// All monomials of total degree `< n`.
    pub fn below(d: usize, n: u32) -> Vec<Mono> {
        (0..n).flat_map(|k| Mono::of_degree(d, k)).collect()
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.e.cmp(&self.e))
    }
}
impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.e[..])
    }
}

/// Power series in `d` variables known modulo total degree `prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    ring: Ring,
    d: usize,
    prec: u32,
    terms: BTreeMap<Mono, u32>,
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.to_text(), self.prec)
    }
}

impl TruncSeries {
    pub fn zero(ring: Ring, d: usize, prec: u32) -> TruncSeries {
        assert!(d <= MAX_VARS);
        TruncSeries { ring, d, prec, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, d: usize, prec: u32, c: u32) -> TruncSeries {
        TruncSeries::monomial(ring, d, prec, Mono::one(), c)
    }

    pub fn one(ring: Ring, d: usize, prec: u32) -> TruncSeries {
        TruncSeries::constant(ring, d, prec, ring.one())
    }

    pub fn monomial(ring: Ring, d: usize, prec: u32, m: Mono, c: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(ring, d, prec);
        s.add_term(m, c);
        s
    }

    pub fn var(ring: Ring, d: usize, prec: u32, i: usize) -> TruncSeries {
        TruncSeries::monomial(ring, d, prec, Mono::var(i, 1), ring.one())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
    pub fn nvars(&self) -> usize {
        self.d
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &u32)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn coeff(&self, m: &Mono) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }
    pub fn constant_term(&self) -> u32 {
        self.coeff(&Mono::one())
    }

    /// Lowest total degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Adds `c·m`; terms at or above the precision are dropped.
    pub fn add_term(&mut self, m: Mono, c: u32) {
        if c == 0 || m.degree() >= self.prec {
            return;
        }
        let e = self.terms.entry(m).or_insert(0);
        *e = self.ring.add(*e, c);
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn truncate(&self, prec: u32) -> TruncSeries {
        let prec = prec.min(self.prec);
        let terms = self.terms.iter().filter(|(m, _)| m.degree() < prec).map(|(m, c)| (*m, *c)).collect();
        TruncSeries { ring: self.ring, d: self.d, prec, terms }
    }

    /// Same terms, with the guaranteed precision declared as `prec` (used when the value is known exactly).
    pub fn with_prec(&self, prec: u32) -> TruncSeries {
        let mut s = self.truncate(prec);
        s.prec = prec;
        s
    }

    fn compat(&self, o: &TruncSeries) -> Result<()> {
        if self.d != o.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: o.d });
        }
        if self.ring != o.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.compat(o)?;
        let mut s = self.truncate(self.prec.min(o.prec));
        for (m, c) in &o.terms {
            s.add_term(*m, *c);
        }
        Ok(s)
    }

    pub fn neg(&self) -> TruncSeries {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = self.ring.neg(*c);
        }
        s
    }

    pub fn sub(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(self.ring, self.d, self.prec);
        for (m, x) in &self.terms {
            s.add_term(*m, self.ring.mul(*x, c));
        }
        s
    }

    pub fn mul_mono(&self, m: &Mono, c: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(self.ring, self.d, self.prec);
        for (k, x) in &self.terms {
            if k.degree() + m.degree() < self.prec {
                s.add_term(k.mul(m), self.ring.mul(*x, c));
            }
        }
        s
    }

    pub fn mul(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.compat(o)?;
        let prec = self.prec.min(o.prec);
        let mut s = TruncSeries::zero(self.ring, self.d, prec);
        for (a, x) in &self.terms {
            let da = a.degree();
            if da >= prec {
                break;
            }
            for (b, y) in &o.terms {
                if da + b.degree() >= prec {
                    break;
                }
                s.add_term(a.mul(b), self.ring.mul(*x, *y));
            }
        }
        Ok(s)
    }

    pub fn pow(&self, mut e: u64) -> Result<TruncSeries> {
        let mut base = self.clone();
        let mut acc = TruncSeries::one(self.ring, self.d, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn invert_unit(&self) -> Result<TruncSeries> {
        let c0 = self.constant_term();
        let inv0 = self.ring.inv(c0).ok_or(Error::NotAUnit)?;
        // u = c0(1 - t), u^{-1} = c0^{-1} Σ t^k
        let mut t = self.scale(inv0);
        t.add_term(Mono::one(), self.ring.neg(self.ring.one()));
        let t = t.neg();
        let mut acc = TruncSeries::one(self.ring, self.d, self.prec);
        let mut pw = acc.clone();
        let ord = t.order().unwrap_or(self.prec).max(1);
        let steps = self.prec / ord + 1;
        for _ in 0..steps {
            pw = pw.mul(&t)?;
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw)?;
        }
        Ok(acc.scale(inv0))
    }

    /// `a ↦ a^p`; the result is known to precision `p·N`.
    pub fn frobenius(&self) -> Result<TruncSeries> {
        if !self.ring.is_field() {
            return Err(Error::Unsupported("frobenius over Z/p^n with n ≥ 2".into()));
        }
        let p = self.ring.p();
        let mut s = TruncSeries::zero(self.ring, self.d, self.prec * p);
        for (m, c) in &self.terms {
            s.add_term(m.scale(p), self.ring.frob(*c));
        }
        Ok(s)
    }

    /// Euler derivation `T_i ∂/∂T_i`.
    pub fn theta(&self, i: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(self.ring, self.d, self.prec);
        for (m, c) in &self.terms {
            let k = m.get(i);
            if k > 0 {
                s.add_term(*m, self.ring.mul(*c, self.ring.from_int(k as i64)));
            }
        }
        s
    }

    /// Coefficient of `T_i^l` as a series in the remaining variables (`T_i` exponent zero).
    pub fn slice(&self, i: usize, l: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(self.ring, self.d, self.prec.saturating_sub(l));
        for (m, c) in &self.terms {
            if m.get(i) == l {
                let mut k = *m;
                k.set(i, 0);
                s.add_term(k, *c);
            }
        }
        s
    }

    /// True iff every stored monomial is divisible by `T^r`.
    pub fn ideal_member(&self, r: &[u32]) -> bool {
        let rm = Mono::from_slice(r);
        self.terms.keys().all(|m| m.divisible_by(&rm))
    }

    /// Writes a unit as `u_0 · ∏_{l ≥ 1} (1 − a_l T_i^l)` with `u_0, a_l` free of `T_i`.
    pub fn unit_factor_decompose(&self, i: usize) -> Result<UnitFactorization> {
        if i >= self.d {
            return Err(Error::InvalidArgument(format!("axis {} out of range", i + 1)));
        }
        if !self.ring.is_unit(self.constant_term()) {
            return Err(Error::NotAUnit);
        }
        let base = self.slice(i, 0).with_prec(self.prec);
        let mut v = self.mul(&base.invert_unit()?)?;
        let mut factors = Vec::new();
        for l in 1..self.prec {
            let a = v.slice(i, l).neg();
            if a.is_zero() {
                continue;
            }
            let mut f = TruncSeries::one(self.ring, self.d, self.prec);
            for (m, c) in a.terms() {
                f.add_term(m.mul(&Mono::var(i, l)), self.ring.neg(*c));
            }
            v = v.mul(&f.invert_unit()?)?;
            factors.push((l, a));
        }
        debug_assert!(v.sub(&TruncSeries::one(self.ring, self.d, self.prec))?.is_zero());
        Ok(UnitFactorization { axis: i, base, factors })
    }

    /// Substitutes `T_j ↦ T_j^k` in every variable (exponents scale by `k`).
    pub fn inflate(&self, k: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(self.ring, self.d, self.prec * k);
        for (m, c) in &self.terms {
            s.add_term(m.scale(k), *c);
        }
        s
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| term_text(*c, m, self.d)).collect();
        parts.join(" + ")
    }

    /// Parses the text produced by [`TruncSeries::to_text`] (and integer-coefficient sums generally).
    pub fn parse(text: &str, ring: Ring, d: usize, prec: u32) -> Result<TruncSeries> {
        let mut s = TruncSeries::zero(ring, d, prec);
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" {
            return Ok(s);
        }
        let bytes = t.as_bytes();
        let mut pos = 0;
        let mut sign = 1i64;
        if t.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty series".into() });
        }
        while pos < bytes.len() {
            if bytes[pos] == b'+' {
                sign = 1;
                pos += 1;
            } else if bytes[pos] == b'-' {
                sign = -1;
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                pos += 1;
            }
            let (c, m) = parse_term(&t[start..pos], start, ring, d)?;
            let c = if sign < 0 { ring.neg(c) } else { c };
            s.add_term(m, c);
            sign = 1;
        }
        Ok(s)
    }
}

pub(crate) fn term_text(c: u32, m: &Mono, d: usize) -> String {
    let mut factors: Vec<String> = Vec::new();
    for i in 0..d {
        match m.get(i) {
            0 => {}
            1 => factors.push(format!("T{}", i + 1)),
            k => factors.push(format!("T{}^{}", i + 1, k)),
        }
    }
    if factors.is_empty() {
        return c.to_string();
    }
    if c == 1 {
        factors.join("*")
    } else {
        format!("{}*{}", c, factors.join("*"))
    }
}

fn parse_term(t: &str, offset: usize, ring: Ring, d: usize) -> Result<(u32, Mono)> {
    if t.is_empty() {
        return Err(Error::Parse { pos: offset, msg: "empty term".into() });
    }
    let mut c: u32 = ring.one();
    let mut m = Mono::one();
    let mut at = offset;
    for f in t.split('*') {
        if f.is_empty() {
            return Err(Error::Parse { pos: at, msg: "empty factor".into() });
        }
        if let Some(rest) = f.strip_prefix('T') {
            let (idx, exp) = match rest.split_once('^') {
                Some((a, b)) => (a, b),
                None => (rest, "1"),
            };
            let i: usize = idx.parse().map_err(|_| Error::Parse { pos: at, msg: format!("bad variable '{}'", f) })?;
            let k: u32 = exp.parse().map_err(|_| Error::Parse { pos: at, msg: format!("bad exponent '{}'", f) })?;
            if i == 0 || i > d {
                return Err(Error::Parse { pos: at, msg: format!("variable T{} outside 1..{}", i, d) });
            }
            m = m.mul(&Mono::var(i - 1, k));
        } else {
            let v: i64 = f.parse().map_err(|_| Error::Parse { pos: at, msg: format!("bad coefficient '{}'", f) })?;
            let v = if ring.is_field() && ring.m() > 1 {
                if v < 0 || v >= ring.order() as i64 {
                    return Err(Error::Parse { pos: at, msg: "coefficient out of range".into() });
                }
                v as u32
            } else {
                ring.from_int(v)
            };
            c = ring.mul(c, v);
        }
        at += f.len() + 1;
    }
    Ok((c, m))
}

#[derive(Clone, Debug)]
pub struct UnitFactorization {
    pub axis: usize,
    /// Part free of `T_axis`.
    pub base: TruncSeries,
    /// `(l, a_l)` with the unit equal to `base · ∏ (1 − a_l T^l)`.
    pub factors: Vec<(u32, TruncSeries)>,
}

impl UnitFactorization {
    pub fn product(&self) -> Result<TruncSeries> {
        let mut acc = self.base.clone();
        for (l, a) in &self.factors {
            let mut f = TruncSeries::one(acc.ring(), acc.nvars(), acc.prec());
            for (m, c) in a.terms() {
                f.add_term(m.mul(&Mono::var(self.axis, *l)), acc.ring().neg(*c));
            }
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }
}

/// `u · ∏ T_i^{z_i}` with `u` a unit power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedUnit {
    pub z: Vec<i32>,
    pub u: TruncSeries,
}

impl LocalizedUnit {
    pub fn new(z: Vec<i32>, u: TruncSeries) -> Result<LocalizedUnit> {
        if z.len() != u.nvars() {
            return Err(Error::DimensionMismatch { expected: u.nvars(), got: z.len() });
        }
        if !u.ring().is_unit(u.constant_term()) {
            return Err(Error::NotAUnit);
        }
        Ok(LocalizedUnit { z, u })
    }

    pub fn from_series(u: TruncSeries) -> Result<LocalizedUnit> {
        LocalizedUnit::new(vec![0; u.nvars()], u)
    }

    /// The coordinate `T_i` as a unit of the localization.
    pub fn coordinate(ring: Ring, d: usize, prec: u32, i: usize) -> LocalizedUnit {
        let mut z = vec![0; d];
        z[i] = 1;
        LocalizedUnit { z, u: TruncSeries::one(ring, d, prec) }
    }

    /// `1 + c·T^m`.
    pub fn one_plus(ring: Ring, d: usize, prec: u32, m: Mono, c: u32) -> LocalizedUnit {
        let mut u = TruncSeries::one(ring, d, prec);
        u.add_term(m, c);
        LocalizedUnit { z: vec![0; d], u }
    }

    pub fn mul(&self, o: &LocalizedUnit) -> Result<LocalizedUnit> {
        let z = self.z.iter().zip(&o.z).map(|(a, b)| a + b).collect();
        Ok(LocalizedUnit { z, u: self.u.mul(&o.u)? })
    }

    /// Axes with a nonzero monomial exponent.
    pub fn inverted_axes(&self) -> Vec<usize> {
        self.z.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, _)| i).collect()
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (i, &k) in self.z.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("T{}", i + 1)),
                _ => parts.push(format!("T{}^{}", i + 1, k)),
            }
        }
        let one = TruncSeries::one(self.u.ring(), self.u.nvars(), self.u.prec());
        if self.u != one || parts.is_empty() {
            parts.push(format!("({})", self.u.to_text()));
        }
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    fn s(text: &str, p: u32, d: usize, n: u32) -> TruncSeries {
        TruncSeries::parse(text, f(p), d, n).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s("1+T1", 3, 1, 3).mul(&s("1-T1", 3, 1, 3)).unwrap(), s("1-T1^2", 3, 1, 3));
        assert!(s("T1", 3, 1, 2).mul(&s("T1", 3, 1, 2)).unwrap().is_zero());
        // schoolbook oracle
        let a = [1u32, 1, 1, 0];
        let b = [1u32, 1, 0, 0];
        let mut conv = [0u32; 4];
        for i in 0..4 {
            for j in 0..4 - i {
                conv[i + j] = (conv[i + j] + a[i] * b[j]) % 2;
            }
        }
        assert_eq!(conv, [1, 0, 0, 1]);
        assert_eq!(s("1+T1+T1^2", 2, 1, 4).mul(&s("1+T1", 2, 1, 4)).unwrap(), s("1+T1^3", 2, 1, 4));
    }

    #[test]
    fn invert_examples() {
        let inv = s("1+T1", 3, 1, 4).invert_unit().unwrap();
        assert_eq!(inv, s("1+2*T1+T1^2+2*T1^3", 3, 1, 4));
        assert_eq!(s("1+T1", 3, 1, 4).mul(&inv).unwrap(), s("1", 3, 1, 4));
        assert_eq!(s("2", 5, 1, 3).invert_unit().unwrap(), s("3", 5, 1, 3));
        assert_eq!(s("T1", 5, 1, 3).invert_unit(), Err(Error::NotAUnit));
    }

    #[test]
    fn frobenius_examples() {
        let a = s("T1+T2", 2, 2, 3).frobenius().unwrap();
        assert_eq!(a, s("T1^2+T2^2", 2, 2, 6));
        assert_eq!(a.prec(), 6);
        assert_eq!(s("2", 3, 1, 3).frobenius().unwrap().constant_term(), 2);
        let b = s("1+T1", 3, 1, 2).frobenius().unwrap();
        assert_eq!(b, s("1+T1^3", 3, 1, 6));
        let z = TruncSeries::one(Ring::zpn(3, 2).unwrap(), 1, 3);
        assert!(z.frobenius().is_err());
    }

    #[test]
    fn unit_factor_examples() {
        let u = s("1-T1", 3, 1, 6);
        let fz = u.unit_factor_decompose(0).unwrap();
        assert_eq!(fz.factors.len(), 1);
        assert_eq!(fz.factors[0].0, 1);
        assert_eq!(fz.factors[0].1, s("1", 3, 1, 5));
        let u = s("1+T1", 3, 1, 6);
        let fz = u.unit_factor_decompose(0).unwrap();
        assert_eq!(fz.factors[0].1.constant_term(), 2);
        assert_eq!(fz.product().unwrap(), u);
        let u = s("1-T1", 3, 1, 6).mul(&s("1-T1^2", 3, 1, 6)).unwrap();
        let fz = u.unit_factor_decompose(0).unwrap();
        let ls: Vec<(u32, u32)> = fz.factors.iter().map(|(l, a)| (*l, a.constant_term())).collect();
        assert_eq!(ls, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn ideal_examples() {
        assert!(s("T1*T2^3", 3, 2, 9).ideal_member(&[1, 1]));
        assert!(!s("T2^3", 3, 2, 9).ideal_member(&[1, 0]));
        assert!(s("T1*T2*T3^3+T1^2*T2*T3^3", 3, 3, 9).ideal_member(&[1, 1, 3]));
    }

    #[test]
    fn text_roundtrip() {
        let a = s("2*T1^2*T3 + T2 + 1", 3, 3, 6);
        assert_eq!(a.to_text(), "1 + T2 + 2*T1^2*T3");
        assert_eq!(TruncSeries::parse(&a.to_text(), f(3), 3, 6).unwrap(), a);
    }

    fn series_strategy(p: u32, d: usize, n: u32) -> impl Strategy<Value = TruncSeries> {
        let monos = Mono::below(d, n);
        prop::collection::vec(0..p, monos.len()).prop_map(move |cs| {
            let mut a = TruncSeries::zero(Ring::prime_field(p).unwrap(), d, n);
            for (m, c) in monos.iter().zip(cs) {
                a.add_term(*m, c);
            }
            a
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in series_strategy(3, 2, 5), b in series_strategy(3, 2, 5), c in series_strategy(3, 2, 5)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn invert_roundtrip(a in series_strategy(5, 2, 5), c0 in 1u32..5) {
            let mut u = a.clone();
            let k = u.constant_term();
            u.add_term(Mono::one(), (c0 + 5 - k) % 5);
            let inv = u.invert_unit().unwrap();
            prop_assert_eq!(u.mul(&inv).unwrap(), TruncSeries::one(u.ring(), 2, 5));
        }

        #[test]
        fn frobenius_hom_and_precision(a in series_strategy(2, 2, 4), b in series_strategy(2, 2, 4), junk in series_strategy(2, 2, 6)) {
            let fa = a.frobenius().unwrap();
            prop_assert_eq!(a.add(&b).unwrap().frobenius().unwrap(), fa.add(&b.frobenius().unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().frobenius().unwrap(), fa.mul(&b.frobenius().unwrap()).unwrap());
            // perturb above degree N = 4
            let mut a2 = a.with_prec(6);
            for (m, c) in junk.terms() { if m.degree() >= 4 { a2.add_term(*m, *c); } }
            let fa2 = a2.frobenius().unwrap().truncate(8);
            prop_assert_eq!(fa2, fa.truncate(8));
        }

        #[test]
        fn unit_decompose_roundtrip(a in series_strategy(3, 2, 5)) {
            let mut u = a.clone();
            let k = u.constant_term();
            u.add_term(Mono::one(), (1 + 3 - k) % 3);
            let fz = u.unit_factor_decompose(0).unwrap();
            prop_assert_eq!(fz.product().unwrap(), u);
        }

        #[test]
        fn parse_print_roundtrip(a in series_strategy(3, 3, 4)) {
            prop_assert_eq!(TruncSeries::parse(&a.to_text(), a.ring(), 3, 4).unwrap(), a);
        }
    }
}

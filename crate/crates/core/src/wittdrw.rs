//! Witt vectors over truncated series and a finite model of `W_nΩ^q(log)` for `n ≤ 2`.
//!
//! Witt vector arithmetic uses the universal sum and product polynomials, built once per
//! `(p, n)` by ghost-component recursion over the integers.
//!
//! Level-`n` forms are modelled by integral forms `Σ a_{K,s} T^{K/p} dlog T_s` with weights
//! in `(1/p)Z^d`. A coefficient vector at weight `k` is admissible when `k ∧ a` is integral,
//! and the forms of level `n` are the admissible vectors modulo
//! `p^n E_{p^n k} + d(p^n E_{p^n k})`, i.e. the images of `V^n` and `dV^n`.
//! `F` multiplies weights by `p`, `V` divides them by `p` and multiplies by `p`, `d` is
//! `a ↦ k ∧ a`, and `R` keeps the representative and passes to the coarser quotient.
//! Everything is computed over `Z/p^3`, which is enough room for levels one and two.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::divmodel::CoordDivisor;
use crate::error::{Error, Result};
use crate::forms::{axes_of, subsets, wedge_sign, Mask};
use crate::modlin::{kernel, Matrix, Ring, Subspace};
use crate::series::{LocalizedUnit, Mono, TruncSeries};

type Poly = BTreeMap<Vec<u32>, BigInt>;

fn poly_var(nv: usize, i: usize) -> Poly {
    let mut e = vec![0; nv];
    e[i] = 1;
    BTreeMap::from([(e, BigInt::one())])
}

fn poly_const(nv: usize, c: BigInt) -> Poly {
    let mut out = Poly::new();
    if !c.is_zero() {
        out.insert(vec![0; nv], c);
    }
    out
}

fn poly_add_into(a: &mut Poly, b: &Poly, sign: i32) {
    for (m, c) in b {
        let e = a.entry(m.clone()).or_insert_with(BigInt::zero);
        if sign >= 0 {
            *e += c;
        } else {
            *e -= c;
        }
        if e.is_zero() {
            a.remove(m);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let e = out.entry(m).or_insert_with(BigInt::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_pow(a: &Poly, mut e: u64, nv: usize) -> Poly {
    let mut base = a.clone();
    let mut acc = poly_const(nv, BigInt::one());
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul(&base, &base);
        }
    }
    acc
}

fn poly_div_exact(a: &Poly, d: &BigInt) -> Option<Poly> {
    let mut out = Poly::new();
    for (m, c) in a {
        let (q, r) = c.div_rem(d);
        if !r.is_zero() {
            return None;
        }
        out.insert(m.clone(), q);
    }
    Some(out)
}

fn poly_eval(a: &Poly, x: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (m, c) in a {
        let mut t = c.clone();
        for (xi, &k) in x.iter().zip(m) {
            if k > 0 {
                t *= num_traits::pow(xi.clone(), k as usize);
            }
        }
        s += t;
    }
    s
}

/// Ghost component `w_i = Σ_{j ≤ i} p^j x_j^{p^{i-j}}` on variables `off..off+i`.
fn ghost_poly(p: u32, i: usize, off: usize, nv: usize) -> Poly {
    let mut out = Poly::new();
    for j in 0..=i {
        let t = poly_pow(&poly_var(nv, off + j), (p as u64).pow((i - j) as u32), nv);
        let t: Poly = t.into_iter().map(|(m, c)| (m, c * BigInt::from(p).pow(j as u32))).collect();
        poly_add_into(&mut out, &t, 1);
    }
    out
}

fn ghost_value(p: u32, x: &[BigInt], i: usize) -> BigInt {
    (0..=i).map(|j| BigInt::from(p).pow(j as u32) * num_traits::pow(x[j].clone(), (p as usize).pow((i - j) as u32))).sum()
}

/// Sum and product polynomials `S_i, P_i` in `x_0..x_{n-1}, y_0..y_{n-1}`.
#[derive(Clone, Debug)]
pub struct WittPolyTable {
    pub p: u32,
    pub n: usize,
    pub sum: Vec<Poly>,
    pub prod: Vec<Poly>,
    sum_mod: Vec<Vec<(Vec<u32>, u32)>>,
    prod_mod: Vec<Vec<(Vec<u32>, u32)>>,
}

impl WittPolyTable {
    pub fn new(p: u32, n: usize) -> Result<WittPolyTable> {
        if !matches!(p, 2 | 3 | 5) || n == 0 || n > 3 {
            return Err(Error::SizeClamp(format!("Witt tables need p ∈ {{2,3,5}} and 1 ≤ n ≤ 3, got p={} n={}", p, n)));
        }
        let nv = 2 * n;
        let build = |combine: &dyn Fn(&Poly, &Poly) -> Poly| -> Result<Vec<Poly>> {
            let mut out: Vec<Poly> = Vec::new();
            for i in 0..n {
                let mut t = combine(&ghost_poly(p, i, 0, nv), &ghost_poly(p, i, n, nv));
                for (j, sj) in out.iter().enumerate() {
                    let pw = poly_pow(sj, (p as u64).pow((i - j) as u32), nv);
                    let pw: Poly = pw.into_iter().map(|(m, c)| (m, c * BigInt::from(p).pow(j as u32))).collect();
                    poly_add_into(&mut t, &pw, -1);
                }
                let si = poly_div_exact(&t, &BigInt::from(p).pow(i as u32))
                    .ok_or_else(|| Error::InvalidArgument(format!("non-integral Witt polynomial at index {}", i)))?;
                out.push(si);
            }
            Ok(out)
        };
        let sum = build(&|a, b| {
            let mut t = a.clone();
            poly_add_into(&mut t, b, 1);
            t
        })?;
        let prod = build(&|a, b| poly_mul(a, b))?;
        let reduce = |v: &[Poly]| -> Vec<Vec<(Vec<u32>, u32)>> {
            v.iter()
                .map(|poly| {
                    poly.iter()
                        .filter_map(|(m, c)| {
                            let r = c.mod_floor(&BigInt::from(p)).to_u32().expect("small");
                            (r != 0).then(|| (m.clone(), r))
                        })
                        .collect()
                })
                .collect()
        };
        let sum_mod = reduce(&sum);
        let prod_mod = reduce(&prod);
        Ok(WittPolyTable { p, n, sum, prod, sum_mod, prod_mod })
    }

    /// Process-wide table for `(p, n)`, built on first use.
    pub fn shared(p: u32, n: usize) -> Result<&'static WittPolyTable> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, usize), &'static WittPolyTable>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("table cache");
        if let Some(t) = guard.get(&(p, n)) {
            return Ok(t);
        }
        let t: &'static WittPolyTable = Box::leak(Box::new(WittPolyTable::new(p, n)?));
        guard.insert((p, n), t);
        Ok(t)
    }

    /// Checks `w_i(S(x, y)) = w_i(x) + w_i(y)` and `w_i(P(x, y)) = w_i(x)·w_i(y)` at integer points.
    pub fn ghost_identities_hold(&self, points: &[(Vec<BigInt>, Vec<BigInt>)]) -> bool {
        points.iter().all(|(x, y)| {
            let mut xy = x.clone();
            xy.extend(y.iter().cloned());
            let s: Vec<BigInt> = self.sum.iter().map(|q| poly_eval(q, &xy)).collect();
            let m: Vec<BigInt> = self.prod.iter().map(|q| poly_eval(q, &xy)).collect();
            (0..self.n).all(|i| {
                let (wx, wy) = (ghost_value(self.p, x, i), ghost_value(self.p, y, i));
                ghost_value(self.p, &s, i) == &wx + &wy && ghost_value(self.p, &m, i) == wx * wy
            })
        })
    }

    /// Number of monomials in `S_i` and `P_i`.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.sum.iter().zip(&self.prod).map(|(s, q)| (s.len(), q.len())).collect()
    }
}

/// Ghost components of an integer Witt vector.
pub fn ghost_components(p: u32, x: &[BigInt]) -> Vec<BigInt> {
    (0..x.len()).map(|i| ghost_value(p, x, i)).collect()
}

/// Witt vector of length `n` with coordinates in `F_p[[T]]` truncated at a common precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    pub coords: Vec<TruncSeries>,
}

fn eval_mod(terms: &[(Vec<u32>, u32)], vars: &[&TruncSeries], cache: &mut HashMap<(usize, u32), TruncSeries>) -> Result<TruncSeries> {
    let proto = vars[0];
    let mut out = TruncSeries::zero(proto.ring(), proto.nvars(), proto.prec());
    for (m, c) in terms {
        let mut t = TruncSeries::constant(proto.ring(), proto.nvars(), proto.prec(), *c);
        for (i, &k) in m.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if vars[i].is_zero() {
                t = TruncSeries::zero(proto.ring(), proto.nvars(), proto.prec());
                break;
            }
            let pw = match cache.get(&(i, k)) {
                Some(s) => s.clone(),
                None => {
                    let s = vars[i].pow(k as u64)?;
                    cache.insert((i, k), s.clone());
                    s
                }
            };
            t = t.mul(&pw)?;
        }
        out = out.add(&t)?;
    }
    Ok(out)
}

impl WittVector {
    pub fn new(coords: Vec<TruncSeries>) -> Result<WittVector> {
        let Some(first) = coords.first() else {
            return Err(Error::InvalidArgument("empty Witt vector".into()));
        };
        if !first.ring().is_prime_field() {
            return Err(Error::Unsupported("Witt vectors over F_p only".into()));
        }
        for c in &coords {
            if c.ring() != first.ring() || c.nvars() != first.nvars() || c.prec() != first.prec() {
                return Err(Error::InvalidArgument("Witt coordinates must share ring, variables and precision".into()));
            }
        }
        Ok(WittVector { coords })
    }

    pub fn zero(ring: Ring, d: usize, prec: u32, n: usize) -> WittVector {
        WittVector { coords: vec![TruncSeries::zero(ring, d, prec); n] }
    }

    pub fn one(ring: Ring, d: usize, prec: u32, n: usize) -> WittVector {
        WittVector::teichmuller(&TruncSeries::one(ring, d, prec), n)
    }

    /// `[x] = (x, 0, …, 0)`.
    pub fn teichmuller(x: &TruncSeries, n: usize) -> WittVector {
        let mut coords = vec![TruncSeries::zero(x.ring(), x.nvars(), x.prec()); n];
        coords[0] = x.clone();
        WittVector { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn p(&self) -> u32 {
        self.coords[0].ring().p()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn combine(&self, o: &WittVector, product: bool) -> Result<WittVector> {
        if self.len() != o.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: o.len() });
        }
        let t = WittPolyTable::shared(self.p(), self.len())?;
        let vars: Vec<&TruncSeries> = self.coords.iter().chain(&o.coords).collect();
        let polys = if product { &t.prod_mod } else { &t.sum_mod };
        let mut cache = HashMap::new();
        let coords = polys.iter().map(|pl| eval_mod(pl, &vars, &mut cache)).collect::<Result<_>>()?;
        Ok(WittVector { coords })
    }

    pub fn add(&self, o: &WittVector) -> Result<WittVector> {
        self.combine(o, false)
    }

    pub fn mul(&self, o: &WittVector) -> Result<WittVector> {
        self.combine(o, true)
    }

    /// `k·a` by repeated addition.
    pub fn times(&self, k: u32) -> Result<WittVector> {
        let c = &self.coords[0];
        let mut acc = WittVector::zero(c.ring(), c.nvars(), c.prec(), self.len());
        for _ in 0..k {
            acc = acc.add(self)?;
        }
        Ok(acc)
    }

    /// Frobenius `W_{n+1} → W_n`: p-th powers of the first `n` coordinates.
    pub fn frobenius(&self) -> Result<WittVector> {
        if self.len() < 2 {
            return Err(Error::InvalidArgument("F needs length ≥ 2".into()));
        }
        let prec = self.coords[0].prec();
        let coords = self.coords[..self.len() - 1].iter().map(|c| Ok(c.frobenius()?.truncate(prec).with_prec(prec))).collect::<Result<_>>()?;
        Ok(WittVector { coords })
    }

    /// Verschiebung `W_n → W_{n+1}`.
    pub fn verschiebung(&self) -> WittVector {
        let c = &self.coords[0];
        let mut coords = vec![TruncSeries::zero(c.ring(), c.nvars(), c.prec())];
        coords.extend(self.coords.iter().cloned());
        WittVector { coords }
    }

    /// Restriction `W_{n+1} → W_n`.
    pub fn restrict(&self) -> Result<WittVector> {
        if self.len() < 2 {
            return Err(Error::InvalidArgument("R needs length ≥ 2".into()));
        }
        Ok(WittVector { coords: self.coords[..self.len() - 1].to_vec() })
    }

    /// Image in weight-graded coordinates: `Σ_j p^j x̃_j(T^{1/p^{n-1}})^{p^{n-1-j}}` over `Z/p^n`,
    /// with exponents recorded as `p^{n-1}` times the weight.
    pub fn weight_image(&self) -> Result<TruncSeries> {
        let p = self.p();
        let n = self.len() as u32;
        let c = &self.coords[0];
        let ring = Ring::zpn(p, n)?;
        let s = p.pow(n - 1);
        let prec = s * c.prec();
        let mut out = TruncSeries::zero(ring, c.nvars(), prec);
        for (j, x) in self.coords.iter().enumerate() {
            let mut g = TruncSeries::zero(ring, c.nvars(), prec);
            for (m, &a) in x.terms() {
                g.add_term(*m, a);
            }
            let t = g.pow((p as u64).pow(n - 1 - j as u32))?.scale(ring.p_pow(j as u32));
            out = out.add(&t)?;
        }
        Ok(out)
    }
}

/// Membership of `a` in the ideal generated by `[T^D]`.
pub fn witt_ideal_member(a: &WittVector, dv: &CoordDivisor) -> Result<bool> {
    let img = a.weight_image()?;
    if dv.0.len() != img.nvars() {
        return Err(Error::DimensionMismatch { expected: img.nvars(), got: dv.0.len() });
    }
    let s = a.p().pow(a.len() as u32 - 1);
    let ok = img.terms().all(|(m, _)| (0..img.nvars()).all(|i| m.get(i) >= s * dv.0[i]));
    Ok(ok)
}

/// Largest supported sizes of the de Rham-Witt model.
pub const DRW_MAX_D: usize = 2;
pub const DRW_MAX_PREC: u32 = 6;

/// Coordinates `(weight, mask)` of the admissible `q`-forms.
#[derive(Clone, Debug)]
struct Layout {
    coords: Vec<(usize, Mask)>,
    index: HashMap<(usize, Mask), usize>,
    /// Per weight: admissible masks, first coordinate, lattice rows in local coordinates.
    masks_at: Vec<Vec<Mask>>,
    offset: Vec<usize>,
    local_lattice: Vec<Vec<Vec<u32>>>,
    lattice: Subspace,
}

/// The level-`n` quotient of the admissible `q`-forms.
#[derive(Clone, Debug)]
pub struct DrwSpace {
    pub level: u32,
    pub q: usize,
    pub relations: Subspace,
}

/// Levels one and two of `W_nΩ^•(log L)` over `F_p[[T_1..T_d]]` below weight `N`, `L` a set of axes.
#[derive(Clone, Debug)]
pub struct DrwModel {
    pub p: u32,
    pub d: usize,
    /// Axes carrying log poles.
    pub log: Mask,
    pub prec: u32,
    ring: Ring,
    /// Weights `K = p·k` with `|K| < p·N`.
    weights: Vec<Mono>,
    windex: HashMap<Mono, usize>,
    layouts: Vec<Layout>,
    spaces: Vec<[DrwSpace; 2]>,
}

/// A class in the level-`level` quotient, held by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrwElement {
    pub level: u32,
    pub q: usize,
    pub v: Vec<u32>,
}

impl DrwModel {
    pub fn new(p: u32, d: usize, log: Mask, prec: u32) -> Result<DrwModel> {
        if !matches!(p, 2 | 3) || d == 0 || d > DRW_MAX_D || prec == 0 || prec > DRW_MAX_PREC {
            return Err(Error::SizeClamp(format!(
                "de Rham-Witt model needs p ∈ {{2,3}}, 1 ≤ d ≤ {}, 1 ≤ N ≤ {}; got p={} d={} N={}",
                DRW_MAX_D, DRW_MAX_PREC, p, d, prec
            )));
        }
        if log >> d != 0 {
            return Err(Error::InvalidArgument("log axes out of range".into()));
        }
        let ring = Ring::zpn(p, 3)?;
        let weights = Mono::below(d, p * prec);
        let windex = weights.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut model = DrwModel { p, d, log, prec, ring, weights, windex, layouts: Vec::new(), spaces: Vec::new() };
        for q in 0..=d {
            let layout = model.build_layout(q)?;
            model.layouts.push(layout);
        }
        for q in 0..=d {
            let s1 = model.build_space(1, q)?;
            let s2 = model.build_space(2, q)?;
            model.spaces.push([s1, s2]);
        }
        Ok(model)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn weights(&self) -> &[Mono] {
        &self.weights
    }

    /// Number of coordinates of the `q`-forms.
    pub fn dim(&self, q: usize) -> usize {
        self.layouts[q].coords.len()
    }

    pub fn coord(&self, q: usize, k: usize) -> (Mono, Mask) {
        let (w, s) = self.layouts[q].coords[k];
        (self.weights[w], s)
    }

    pub fn coord_index(&self, q: usize, k: &Mono, s: Mask) -> Option<usize> {
        let w = *self.windex.get(k)?;
        self.layouts[q].index.get(&(w, s)).copied()
    }

    pub fn lattice(&self, q: usize) -> &Subspace {
        &self.layouts[q].lattice
    }

    pub fn space(&self, level: u32, q: usize) -> Result<&DrwSpace> {
        if !(1..=2).contains(&level) || q > self.d {
            return Err(Error::SizeClamp(format!("level {} degree {} outside the model", level, q)));
        }
        Ok(&self.spaces[q][level as usize - 1])
    }

    fn allowed(&self, k: &Mono, s: Mask) -> bool {
        axes_of(s).into_iter().all(|i| self.log >> i & 1 == 1 || k.get(i) > 0)
    }

    /// `K ∧ e_s` as `(mask, signed coefficient)` pairs.
    fn wedge_k(k: &Mono, s: Mask, d: usize) -> Vec<(Mask, i64)> {
        (0..d)
            .filter(|&i| s >> i & 1 == 0 && k.get(i) != 0)
            .map(|i| {
                let c = k.get(i) as i64;
                (s | 1 << i, if wedge_sign(1 << i, s) { -c } else { c })
            })
            .collect()
    }

    fn build_layout(&self, q: usize) -> Result<Layout> {
        let masks = subsets(self.d, q);
        let mut coords = Vec::new();
        let mut index = HashMap::new();
        let mut rows = Vec::new();
        let mut masks_at = Vec::new();
        let mut offset = Vec::new();
        let mut local_lattice = Vec::new();
        for (w, k) in self.weights.iter().enumerate() {
            let local: Vec<Mask> = masks.iter().copied().filter(|&s| self.allowed(k, s)).collect();
            let base = coords.len();
            offset.push(base);
            for &s in &local {
                index.insert((w, s), coords.len());
                coords.push((w, s));
            }
            let integral = (0..self.d).all(|i| k.get(i) % self.p == 0);
            let local_rows: Vec<Vec<u32>> = if integral || q == self.d || local.is_empty() {
                (0..local.len())
                    .map(|j| {
                        let mut v = vec![0; local.len()];
                        v[j] = 1;
                        v
                    })
                    .collect()
            } else {
                // a with K ∧ a ≡ 0 mod p, i.e. p^2·(K ∧ a) ≡ 0 mod p^3
                let up = subsets(self.d, q + 1);
                let mut m = Matrix::zeros(up.len(), local.len());
                for (j, &s) in local.iter().enumerate() {
                    for (t, c) in DrwModel::wedge_k(k, s, self.d) {
                        let r = up.iter().position(|&u| u == t).expect("mask");
                        let x = self.ring.from_int(c * (self.p * self.p) as i64);
                        m.set(r, j, self.ring.add(m.get(r, j), x));
                    }
                }
                kernel(&m, &self.ring)?.rows().to_vec()
            };
            for lr in &local_rows {
                rows.push((base, lr.clone()));
            }
            masks_at.push(local);
            local_lattice.push(local_rows);
        }
        let dim = coords.len();
        let rows = rows
            .into_iter()
            .map(|(base, lr)| {
                let mut v = vec![0; dim];
                v[base..base + lr.len()].copy_from_slice(&lr);
                v
            })
            .collect();
        let lattice = Subspace::from_rows(self.ring, dim, rows)?;
        Ok(Layout { coords, index, masks_at, offset, local_lattice, lattice })
    }

    fn build_space(&self, level: u32, q: usize) -> Result<DrwSpace> {
        let lay = &self.layouts[q];
        let dim = lay.coords.len();
        let pn = self.ring.p_pow(level);
        let mut rows = Vec::new();
        for k in 0..dim {
            let mut v = vec![0; dim];
            v[k] = pn;
            rows.push(v);
        }
        if q > 0 {
            let low = &self.layouts[q - 1];
            let scale = self.ring.p_pow(level - 1);
            for &(w, t) in &low.coords {
                let kk = self.weights[w];
                let mut v = vec![0; dim];
                for (s, c) in DrwModel::wedge_k(&kk, t, self.d) {
                    let idx = *lay.index.get(&(w, s)).ok_or_else(|| Error::InvalidArgument("d leaves the admissible masks".into()))?;
                    v[idx] = self.ring.add(v[idx], self.ring.mul(scale, self.ring.from_int(c)));
                }
                rows.push(v);
            }
        }
        Ok(DrwSpace { level, q, relations: Subspace::from_rows(self.ring, dim, rows)? })
    }

    /// Class of an admissible representative.
    pub fn element(&self, level: u32, q: usize, v: Vec<u32>) -> Result<DrwElement> {
        let sp = self.space(level, q)?;
        if v.len() != self.dim(q) {
            return Err(Error::DimensionMismatch { expected: self.dim(q), got: v.len() });
        }
        if !self.layouts[q].lattice.contains(&v)? {
            return Err(Error::InvalidArgument("representative is not integral".into()));
        }
        let v = sp.relations.residual(&v)?;
        Ok(DrwElement { level, q, v })
    }

    pub fn zero(&self, level: u32, q: usize) -> Result<DrwElement> {
        self.element(level, q, vec![0; self.dim(q)])
    }

    pub fn add(&self, a: &DrwElement, b: &DrwElement) -> Result<DrwElement> {
        self.same(a, b)?;
        let mut v = a.v.clone();
        self.ring.axpy(&mut v, 1, &b.v);
        self.element(a.level, a.q, v)
    }

    pub fn scale(&self, a: &DrwElement, c: i64) -> Result<DrwElement> {
        let mut v = a.v.clone();
        self.ring.scale(&mut v, self.ring.from_int(c));
        self.element(a.level, a.q, v)
    }

    fn same(&self, a: &DrwElement, b: &DrwElement) -> Result<()> {
        if a.level != b.level || a.q != b.q {
            return Err(Error::InvalidArgument(format!("level/degree mismatch: ({}, {}) vs ({}, {})", a.level, a.q, b.level, b.q)));
        }
        Ok(())
    }

    /// Weight multiplication by `p` on representatives.
    fn sigma(&self, q: usize, v: &[u32]) -> Vec<u32> {
        let lay = &self.layouts[q];
        let mut out = vec![0; v.len()];
        for (k, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (w, s) = lay.coords[k];
            let target = self.weights[w].scale(self.p);
            if let Some(&tw) = self.windex.get(&target) {
                let idx = lay.index[&(tw, s)];
                out[idx] = self.ring.add(out[idx], x);
            }
        }
        out
    }

    /// `F`: level 2 → level 1.
    pub fn frobenius(&self, a: &DrwElement) -> Result<DrwElement> {
        if a.level != 2 {
            return Err(Error::InvalidArgument("F is defined from level 2".into()));
        }
        self.element(1, a.q, self.sigma(a.q, &a.v))
    }

    /// `F` on a representative, landing in the same level (used modulo `dV^{n-1}`).
    pub fn frobenius_rep(&self, q: usize, v: &[u32]) -> Vec<u32> {
        self.sigma(q, v)
    }

    /// `V`: level 1 → level 2.
    pub fn verschiebung(&self, a: &DrwElement) -> Result<DrwElement> {
        if a.level != 1 {
            return Err(Error::InvalidArgument("V is defined from level 1".into()));
        }
        let lay = &self.layouts[a.q];
        let mut out = vec![0; a.v.len()];
        for (k, &x) in a.v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (w, s) = lay.coords[k];
            let kk = self.weights[w];
            if (0..self.d).any(|i| kk.get(i) % self.p != 0) {
                return Err(Error::InvalidArgument("level-1 representative at a fractional weight".into()));
            }
            let mut t = Mono::one();
            for i in 0..self.d {
                t.set(i, kk.get(i) / self.p);
            }
            let idx = lay.index[&(self.windex[&t], s)];
            out[idx] = self.ring.add(out[idx], self.ring.mul(x, self.p));
        }
        self.element(2, a.q, out)
    }

    /// `d: W_nΩ^q → W_nΩ^{q+1}`.
    pub fn d(&self, a: &DrwElement) -> Result<DrwElement> {
        if a.q >= self.d {
            return Err(Error::InvalidArgument("d of a top form".into()));
        }
        let v = self.d_rep(a.q, &a.v)?;
        self.element(a.level, a.q + 1, v)
    }

    fn d_rep(&self, q: usize, v: &[u32]) -> Result<Vec<u32>> {
        let lay = &self.layouts[q];
        let up = &self.layouts[q + 1];
        let mut acc = vec![0; up.coords.len()];
        for (k, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (w, s) = lay.coords[k];
            for (t, c) in DrwModel::wedge_k(&self.weights[w], s, self.d) {
                let idx = up.index[&(w, t)];
                acc[idx] = self.ring.add(acc[idx], self.ring.mul(x, self.ring.from_int(c)));
            }
        }
        acc.iter()
            .map(|&x| {
                if x % self.p != 0 {
                    Err(Error::InvalidArgument("d of a non-integral representative".into()))
                } else {
                    Ok(x / self.p)
                }
            })
            .collect()
    }

    /// `R`: level 2 → level 1.
    pub fn restrict(&self, a: &DrwElement) -> Result<DrwElement> {
        if a.level != 2 {
            return Err(Error::InvalidArgument("R is defined from level 2".into()));
        }
        self.element(1, a.q, a.v.clone())
    }

    /// `p̲`: level 1 → level 2 via a lift.
    pub fn underline_p(&self, a: &DrwElement) -> Result<DrwElement> {
        self.underline_p_lift(a, &a.v)
    }

    /// `p̲` computed from an explicit level-2 lift of `a`; the lift is checked.
    pub fn underline_p_lift(&self, a: &DrwElement, lift: &[u32]) -> Result<DrwElement> {
        if a.level != 1 {
            return Err(Error::InvalidArgument("p̲ is defined from level 1".into()));
        }
        if self.element(1, a.q, lift.to_vec())? != *a {
            return Err(Error::InvalidArgument("not a lift".into()));
        }
        let mut v = lift.to_vec();
        self.ring.scale(&mut v, self.p);
        self.element(2, a.q, v)
    }

    /// Product in the graded algebra.
    pub fn mul(&self, a: &DrwElement, b: &DrwElement) -> Result<DrwElement> {
        if a.level != b.level {
            return Err(Error::InvalidArgument("level mismatch".into()));
        }
        let q = a.q + b.q;
        if q > self.d {
            return self.zero(a.level, self.d);
        }
        let (la, lb, lo) = (&self.layouts[a.q], &self.layouts[b.q], &self.layouts[q]);
        let mut out = vec![0; lo.coords.len()];
        for (i, &x) in a.v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (wa, sa) = la.coords[i];
            for (j, &y) in b.v.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let (wb, sb) = lb.coords[j];
                if sa & sb != 0 {
                    continue;
                }
                let Some(&w) = self.windex.get(&self.weights[wa].mul(&self.weights[wb])) else { continue };
                let c = self.ring.mul(x, y);
                let c = if wedge_sign(sa, sb) { self.ring.neg(c) } else { c };
                let idx = lo.index[&(w, sa | sb)];
                out[idx] = self.ring.add(out[idx], c);
            }
        }
        self.element(a.level, q, out)
    }

    /// `g = f̃(T^{1/p^{n-1}})` over `Z/p^3`, exponents in `K` units.
    fn root_lift(&self, f: &TruncSeries, level: u32) -> Result<TruncSeries> {
        if f.ring() != Ring::prime_field(self.p)? || f.nvars() != self.d {
            return Err(Error::InvalidArgument("expected a series over F_p in the model's variables".into()));
        }
        if f.prec() < self.p.pow(level - 1) * self.prec {
            return Err(Error::InvalidArgument(format!(
                "level {} needs the series to precision {}, got {}",
                level,
                self.p.pow(level - 1) * self.prec,
                f.prec()
            )));
        }
        let stretch = self.p.pow(2 - level);
        let mut g = TruncSeries::zero(self.ring, self.d, self.p * self.prec);
        for (m, &c) in f.terms() {
            g.add_term(m.scale(stretch), c);
        }
        Ok(g)
    }

    fn series_element(&self, level: u32, s: &TruncSeries) -> Result<DrwElement> {
        let mut v = vec![0; self.dim(0)];
        for (m, &c) in s.terms() {
            let idx = self.coord_index(0, m, 0).expect("weight");
            v[idx] = c;
        }
        self.element(level, 0, v)
    }

    /// Teichmüller lift `[f]` at the given level.
    pub fn teichmuller(&self, f: &TruncSeries, level: u32) -> Result<DrwElement> {
        let g = self.root_lift(f, level)?;
        self.series_element(level, &g.pow((self.p as u64).pow(level - 1))?)
    }

    /// `dlog[u]` for a unit of `R[1/T_L]`.
    pub fn dlog(&self, u: &LocalizedUnit, level: u32) -> Result<DrwElement> {
        if self.d < 1 {
            return Err(Error::InvalidArgument("no variables".into()));
        }
        let mut v = vec![0; self.dim(1)];
        for (i, &z) in u.z.iter().enumerate() {
            if z == 0 {
                continue;
            }
            if self.log >> i & 1 == 0 {
                return Err(Error::InvalidArgument(format!("T{} is not invertible here", i + 1)));
            }
            let idx = self.coord_index(1, &Mono::one(), 1 << i).expect("dlog coordinate");
            v[idx] = self.ring.add(v[idx], self.ring.from_int(z as i64));
        }
        let g = self.root_lift(&u.u, level)?;
        let ginv = g.invert_unit()?;
        let div = self.p.pow(2 - level);
        for i in 0..self.d {
            let mut h = TruncSeries::zero(self.ring, self.d, g.prec());
            for (m, &c) in g.terms() {
                if m.get(i) > 0 {
                    h.add_term(*m, self.ring.mul(c, self.ring.from_int((m.get(i) / div) as i64)));
                }
            }
            for (m, &c) in h.mul(&ginv)?.terms() {
                let idx = self.coord_index(1, m, 1 << i).ok_or_else(|| Error::InvalidArgument("dlog leaves the admissible masks".into()))?;
                v[idx] = self.ring.add(v[idx], c);
            }
        }
        self.element(level, 1, v)
    }

    /// `log_p` of the order of the level-`n` module of `q`-forms.
    pub fn log_order(&self, level: u32, q: usize) -> Result<u64> {
        Ok(self.lattice(q).log_card() - self.space(level, q)?.relations.log_card())
    }


    /// Product of local vectors at weights `w1` (degree `q1`) and `w2` (degree `q2`).
    fn local_product(&self, q1: usize, w1: usize, a: &[u32], q2: usize, w2: usize, b: &[u32]) -> Option<(usize, Vec<u32>)> {
        let w = *self.windex.get(&self.weights[w1].mul(&self.weights[w2]))?;
        let q = q1 + q2;
        if q > self.d {
            return None;
        }
        let (ma, mb, mo) = (&self.layouts[q1].masks_at[w1], &self.layouts[q2].masks_at[w2], &self.layouts[q].masks_at[w]);
        let mut out = vec![0; mo.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if x == 0 || y == 0 || ma[i] & mb[j] != 0 {
                    continue;
                }
                let c = self.ring.mul(x, y);
                let c = if wedge_sign(ma[i], mb[j]) { self.ring.neg(c) } else { c };
                let t = mo.iter().position(|&u| u == ma[i] | mb[j]).expect("admissible product");
                out[t] = self.ring.add(out[t], c);
            }
        }
        Some((w, out))
    }

    /// Coefficient generating `W_n(T^D R)` at weight `K/p`: the least `p^j`, `j < n`, with
    /// `p^j K/p` integral and at least `D`.
    fn witt_ideal_coeff(&self, level: u32, k: &Mono, dv: &CoordDivisor) -> Option<u32> {
        (0..level).find_map(|j| {
            let pj = self.p.pow(j);
            let ok = (0..self.d).all(|i| {
                let num = k.get(i) * pj;
                num % self.p == 0 && num / self.p >= dv.0[i]
            });
            ok.then_some(pj)
        })
    }

    /// The differential graded ideal generated by `W_n(T^D R)` in level-`n` `q`-forms,
    /// together with the relations. Its quotient is the forms of the subscheme `T^D = 0`.
    pub fn dg_ideal(&self, level: u32, q: usize, dv: &CoordDivisor) -> Result<Subspace> {
        if dv.0.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: dv.0.len() });
        }
        let lay = &self.layouts[q];
        let mut per_w: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.weights.len()];
        for (w1, k1) in self.weights.iter().enumerate() {
            let Some(c) = self.witt_ideal_coeff(level, k1, dv) else { continue };
            let f0 = vec![c];
            // d(c T^{K/p}) in local coordinates of degree one
            let df: Vec<u32> = if q > 0 && self.d > 0 {
                let mut f = vec![0; self.dim(0)];
                f[self.layouts[0].offset[w1]] = c;
                let g = self.d_rep(0, &f)?;
                let o = self.layouts[1].offset[w1];
                g[o..o + self.layouts[1].masks_at[w1].len()].to_vec()
            } else {
                Vec::new()
            };
            for w2 in 0..self.weights.len() {
                for b in &lay.local_lattice[w2] {
                    if let Some((w, v)) = self.local_product(0, w1, &f0, q, w2, b) {
                        per_w[w].push(v);
                    }
                }
                if q > 0 {
                    for b in &self.layouts[q - 1].local_lattice[w2] {
                        if let Some((w, v)) = self.local_product(1, w1, &df, q - 1, w2, b) {
                            per_w[w].push(v);
                        }
                    }
                }
            }
        }
        let dim = lay.coords.len();
        let mut rows = Vec::new();
        for (w, local) in per_w.into_iter().enumerate() {
            let n = lay.masks_at[w].len();
            if local.is_empty() || n == 0 {
                continue;
            }
            for r in Subspace::from_rows(self.ring, n, local)?.rows() {
                let mut v = vec![0; dim];
                v[lay.offset[w]..lay.offset[w] + n].copy_from_slice(r);
                rows.push(v);
            }
        }
        Subspace::from_rows(self.ring, dim, rows)?.sum(&self.space(level, q)?.relations)
    }

    /// `Ker(W_nΩ^q → ⊕_i W_nΩ^q_{D_i})` with `D_i = r_i Div(T_i)`, with relations.
    pub fn zeros_module(&self, level: u32, q: usize, dv: &CoordDivisor) -> Result<Subspace> {
        let mut acc = self.lattice(q).clone();
        for i in dv.support() {
            let mut single = vec![0; self.d];
            single[i] = dv.0[i];
            acc = acc.intersect(&self.dg_ideal(level, q, &CoordDivisor(single))?)?;
        }
        Ok(acc)
    }

    /// Kernel of `F − 1: W_nΩ^q_tw → W_nΩ^q / dV^{n-1}W_nΩ^{q-1}` on forms of weight ≥ `D`,
    /// returned together with the level-`n` relations.
    pub fn log_kernel(&self, level: u32, q: usize, dv: &CoordDivisor) -> Result<Subspace> {
        let lay = &self.layouts[q];
        let rel = &self.space(level, q)?.relations;
        let dim = lay.coords.len();
        let within = |m: &Mono| (0..self.d).all(|i| m.get(i) >= self.p * dv.0[i]);
        // split lattice and relation rows by weight
        let mut lat_by_w: HashMap<usize, Vec<Vec<u32>>> = HashMap::new();
        for r in self.lattice(q).rows() {
            let w = lay.coords[r.iter().position(|&x| x != 0).expect("nonzero")].0;
            lat_by_w.entry(w).or_default().push(r.clone());
        }
        let mut y_by_w: HashMap<usize, Vec<Vec<u32>>> = HashMap::new();
        for r in rel.rows() {
            let w = lay.coords[r.iter().position(|&x| x != 0).expect("nonzero")].0;
            y_by_w.entry(w).or_default().push(r.clone());
        }
        if q > 0 {
            // dV^{n-1} of (q-1)-forms: d(p·e_t) at level 2, d of admissible forms at level 1
            let low = &self.layouts[q - 1];
            let gens: Vec<Vec<u32>> = if level == 2 {
                (0..low.coords.len())
                    .map(|k| {
                        let mut b = vec![0; low.coords.len()];
                        b[k] = self.p;
                        b
                    })
                    .collect()
            } else {
                self.lattice(q - 1).rows().to_vec()
            };
            for b in gens {
                let w = low.coords[b.iter().position(|&x| x != 0).expect("nonzero")].0;
                let v = self.d_rep(q - 1, &b)?;
                if v.iter().any(|&x| x != 0) {
                    y_by_w.entry(w).or_default().push(v);
                }
            }
        }
        let mut found: Vec<Vec<u32>> = Vec::new();
        for (w0, k0) in self.weights.iter().enumerate() {
            let start = k0.degree() == 0 || (0..self.d).any(|i| k0.get(i) % self.p != 0);
            if !start {
                continue;
            }
            let mut chain = vec![w0];
            if k0.degree() > 0 {
                let mut cur = *k0;
                loop {
                    cur = cur.scale(self.p);
                    match self.windex.get(&cur) {
                        Some(&w) => chain.push(w),
                        None => break,
                    }
                }
            }
            // unknowns: x-generators then y-generators, per chain element
            let mut xg: Vec<Vec<u32>> = Vec::new();
            let mut yg: Vec<Vec<u32>> = Vec::new();
            for &w in &chain {
                if within(&self.weights[w]) {
                    for r in lat_by_w.get(&w).into_iter().flatten() {
                        xg.push(r.clone());
                    }
                }
                for r in y_by_w.get(&w).into_iter().flatten() {
                    yg.push(r.clone());
                }
            }
            if xg.is_empty() {
                continue;
            }
            let coords: Vec<usize> = (0..dim).filter(|&k| chain.contains(&lay.coords[k].0)).collect();
            let cidx: HashMap<usize, usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let ncols = xg.len() + yg.len();
            let mut m = Matrix::zeros(coords.len(), ncols);
            let one = self.ring.one();
            let mone = self.ring.neg(one);
            for (col, g) in xg.iter().enumerate() {
                // F(x) − x, with F(x) at weight 0 coinciding with x
                let img = self.sigma(q, g);
                for (k, &x) in g.iter().enumerate() {
                    if x != 0 {
                        let r = cidx[&k];
                        m.set(r, col, self.ring.add(m.get(r, col), self.ring.mul(x, mone)));
                    }
                }
                for (k, &x) in img.iter().enumerate() {
                    if x != 0 {
                        if let Some(&r) = cidx.get(&k) {
                            m.set(r, col, self.ring.add(m.get(r, col), x));
                        }
                    }
                }
            }
            for (c, g) in yg.iter().enumerate() {
                let col = xg.len() + c;
                for (k, &x) in g.iter().enumerate() {
                    if x != 0 {
                        let r = cidx[&k];
                        m.set(r, col, self.ring.add(m.get(r, col), self.ring.mul(x, mone)));
                    }
                }
            }
            let ker = kernel(&m, &self.ring)?;
            for kv in ker.rows() {
                let mut v = vec![0; dim];
                for (col, g) in xg.iter().enumerate() {
                    self.ring.axpy(&mut v, kv[col], g);
                }
                if v.iter().any(|&x| x != 0) {
                    found.push(v);
                }
            }
        }
        Subspace::from_rows(self.ring, dim, found)?.sum(rel)
    }

    /// `Σ_k c_k g_k` spanned by representatives, together with the level-`n` relations.
    pub fn span(&self, level: u32, q: usize, gens: &[DrwElement]) -> Result<Subspace> {
        let rows = gens.iter().map(|g| g.v.clone()).collect();
        Subspace::from_rows(self.ring, self.dim(q), rows)?.sum(&self.space(level, q)?.relations)
    }

    /// Whether `a` lies in a submodule given by its representatives plus relations.
    pub fn in_module(&self, module: &Subspace, a: &DrwElement) -> Result<bool> {
        module.contains(&a.v)
    }

    /// Text of a canonical representative, `c*T^(K/p)*dlog(T_s)` terms.
    pub fn to_text(&self, a: &DrwElement) -> String {
        let mut parts = Vec::new();
        for (k, &x) in a.v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (m, s) = self.coord(a.q, k);
            let w: Vec<String> = (0..self.d).filter(|&i| m.get(i) > 0).map(|i| format!("T{}^({}/{})", i + 1, m.get(i), self.p)).collect();
            let f: Vec<String> = axes_of(s).iter().map(|i| format!("dlog(T{})", i + 1)).collect();
            let mut t = vec![x.to_string()];
            t.extend(w);
            t.extend(f);
            parts.push(t.join("*"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `k ↦ [k·1]` in `W_n(F_p)`: the additive order of `[1]`.
pub fn additive_order_of_one(p: u32, n: usize) -> Result<u32> {
    let ring = Ring::prime_field(p)?;
    let one = WittVector::one(ring, 1, 1, n);
    let mut acc = one.clone();
    for k in 1..=p.pow(n as u32) {
        if acc.is_zero() {
            return Ok(k);
        }
        acc = acc.add(&one)?;
    }
    Err(Error::InvalidArgument("order exceeds p^n".into()))
}

/// Integer lifts for ghost checks: small deterministic points plus the given extras.
pub fn ghost_points(n: usize, seeds: &[i64]) -> Vec<(Vec<BigInt>, Vec<BigInt>)> {
    seeds
        .windows(2)
        .map(|w| {
            let x = (0..n).map(|i| BigInt::from(w[0] + 3 * i as i64 - 2)).collect();
            let y = (0..n).map(|i| BigInt::from(w[1] - 5 * i as i64 + 1).abs()).collect();
            (x, y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(p: u32, d: usize, prec: u32, terms: &[(&[u32], u32)]) -> TruncSeries {
        let mut s = TruncSeries::zero(Ring::prime_field(p).unwrap(), d, prec);
        for (m, c) in terms {
            s.add_term(Mono::from_slice(m), *c);
        }
        s
    }

    fn random_series(rng: &mut ChaCha8Rng, p: u32, d: usize, prec: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(Ring::prime_field(p).unwrap(), d, prec);
        for m in Mono::below(d, prec) {
            if rng.gen_bool(0.4) {
                s.add_term(m, rng.gen_range(1..p));
            }
        }
        s
    }

    #[test]
    fn ghost_identities() {
        let pts = ghost_points(3, &[0, 1, 2, -3, 7, 11, 4]);
        for p in [2, 3, 5] {
            for n in 1..=3 {
                let t = WittPolyTable::new(p, n).unwrap();
                let pts: Vec<_> = pts.iter().map(|(x, y)| (x[..n].to_vec(), y[..n].to_vec())).collect();
                assert!(t.ghost_identities_hold(&pts), "p={} n={}", p, n);
            }
        }
    }

    #[test]
    fn s1_is_the_carry() {
        let t = WittPolyTable::new(2, 2).unwrap();
        // S_1 = x_1 + y_1 − x_0 y_0 over Z for p = 2
        let mut expect = Poly::new();
        expect.insert(vec![0, 1, 0, 0], BigInt::one());
        expect.insert(vec![0, 0, 0, 1], BigInt::one());
        expect.insert(vec![1, 0, 1, 0], BigInt::from(-1));
        assert_eq!(t.sum[1], expect);
    }

    #[test]
    fn three_ones_in_w2_f3() {
        // 27 + 3x_1 = 3 in the second ghost component of 3·[1] over Z is solved by x_1 = -8 ≡ 1 mod 3
        let ring = Ring::prime_field(3).unwrap();
        let one = WittVector::one(ring, 1, 2, 2);
        let three = one.times(3).unwrap();
        let v1 = WittVector::one(ring, 1, 2, 1).verschiebung();
        assert_eq!(three, v1);
        assert_eq!(three.coords[0].is_zero(), true);
        assert_eq!(three.coords[1].constant_term(), 1);
    }

    #[test]
    fn order_of_one() {
        for (p, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
            assert_eq!(additive_order_of_one(p, n).unwrap(), p.pow(n as u32));
        }
    }

    #[test]
    fn frobenius_verschiebung_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2, 3] {
            for _ in 0..10 {
                let a = WittVector::new(vec![random_series(&mut rng, p, 2, 4), random_series(&mut rng, p, 2, 4)]).unwrap();
                let b = WittVector::new(vec![random_series(&mut rng, p, 2, 4), random_series(&mut rng, p, 2, 4)]).unwrap();
                assert_eq!(a.verschiebung().frobenius().unwrap(), a.times(p).unwrap());
                let lhs = a.verschiebung().mul(&b.verschiebung()).unwrap();
                let rhs = a.mul(&b).unwrap().verschiebung().times(p).unwrap();
                assert_eq!(lhs, rhs);
                let x = &a.coords[0];
                let fx = WittVector::teichmuller(&x.with_prec(4), 3).frobenius().unwrap();
                let xp = x.frobenius().unwrap().truncate(4).with_prec(4);
                assert_eq!(fx, WittVector::teichmuller(&xp, 2));
                let zero = WittVector::zero(x.ring(), 2, 4, 2);
                assert_eq!(a.add(&zero).unwrap(), a);
                assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
                let tx = WittVector::teichmuller(&a.coords[0], 2);
                let ty = WittVector::teichmuller(&b.coords[0], 2);
                assert_eq!(tx.mul(&ty).unwrap(), WittVector::teichmuller(&a.coords[0].mul(&b.coords[0]).unwrap(), 2));
            }
        }
    }

    #[test]
    fn ideal_membership_examples() {
        let ring = Ring::prime_field(2).unwrap();
        let t1sq = WittVector::teichmuller(&series(2, 1, 4, &[(&[2], 1)]), 2);
        let dv = CoordDivisor(vec![1]);
        assert!(witt_ideal_member(&t1sq, &dv).unwrap());
        assert!(!witt_ideal_member(&WittVector::one(ring, 1, 4, 2), &dv).unwrap());
        let vt = WittVector::teichmuller(&series(2, 1, 4, &[(&[1], 1)]), 1).verschiebung();
        assert!(!witt_ideal_member(&vt, &dv).unwrap());
    }

    /// Span oracle: all `[T]·y` with coordinates of degree below 3 over F_2.
    #[test]
    fn ideal_membership_against_enumeration() {
        let ring = Ring::prime_field(2).unwrap();
        let prec = 4;
        let polys: Vec<TruncSeries> = (0u32..8)
            .map(|bits| {
                let mut s = TruncSeries::zero(ring, 1, prec);
                for k in 0..3 {
                    if bits >> k & 1 == 1 {
                        s.add_term(Mono::var(0, k), 1);
                    }
                }
                s
            })
            .collect();
        let t = WittVector::teichmuller(&series(2, 1, prec, &[(&[1], 1)]), 2);
        let mut ideal = Vec::new();
        for a in &polys {
            for b in &polys {
                ideal.push(t.mul(&WittVector::new(vec![a.clone(), b.clone()]).unwrap()).unwrap());
            }
        }
        let dv = CoordDivisor(vec![1]);
        for a in &polys {
            for b in &polys {
                let w = WittVector::new(vec![a.clone(), b.clone()]).unwrap();
                // coordinates are low enough that the enumeration is complete for them
                if a.terms().all(|(m, _)| m.degree() <= 1) && b.terms().all(|(m, _)| m.degree() <= 1) {
                    assert_eq!(witt_ideal_member(&w, &dv).unwrap(), ideal.contains(&w), "{:?}", w);
                }
            }
        }
    }

    #[test]
    fn level_one_matches_forms() {
        for p in [2, 3] {
            for d in 1..=2 {
                for log in 0..(1u32 << d) {
                    let m = DrwModel::new(p, d, log, 4).unwrap();
                    for q in 0..=d {
                        let expected = (0..m.dim(q))
                            .filter(|&k| {
                                let (w, _) = m.coord(q, k);
                                (0..d).all(|i| w.get(i) % p == 0)
                            })
                            .count() as u64;
                        assert_eq!(m.log_order(1, q).unwrap(), expected, "p={} d={} log={} q={}", p, d, log, q);
                    }
                }
            }
        }
    }

    #[test]
    fn structure_identities() {
        let p = 2;
        let m = DrwModel::new(p, 2, 0b01, 4).unwrap();
        let ring = m.ring();
        let _ = ring;
        for q in 0..2 {
            for r in m.lattice(q).rows().to_vec() {
                let x1 = m.element(1, q, r.clone()).unwrap();
                let x2 = m.element(2, q, r.clone()).unwrap();
                // F d V = d
                let lhs = m.frobenius(&m.d(&m.verschiebung(&x1).unwrap()).unwrap()).unwrap();
                assert_eq!(lhs, m.d(&x1).unwrap());
                // d d = 0
                if q + 2 <= 2 {
                    assert_eq!(m.d(&m.d(&x2).unwrap()).unwrap(), m.zero(2, q + 2).unwrap());
                }
                // F V = p
                assert_eq!(m.frobenius(&m.verschiebung(&x1).unwrap()).unwrap(), m.scale(&x1, p as i64).unwrap());
                // R kills V and dV
                assert_eq!(m.restrict(&m.verschiebung(&x1).unwrap()).unwrap(), m.zero(1, q).unwrap());
                assert_eq!(m.restrict(&m.d(&m.verschiebung(&x1).unwrap()).unwrap()).unwrap(), m.zero(1, q + 1).unwrap());
            }
        }
    }

    #[test]
    fn dlog_t_and_restriction() {
        let m = DrwModel::new(3, 1, 0b1, 4).unwrap();
        let ring = Ring::prime_field(3).unwrap();
        let t = LocalizedUnit::coordinate(ring, 1, 12, 0);
        let d2 = m.dlog(&t, 2).unwrap();
        assert_ne!(d2, m.zero(2, 1).unwrap());
        assert_eq!(m.restrict(&d2).unwrap(), m.dlog(&t, 1).unwrap());
    }

    #[test]
    fn frobenius_of_d_teichmuller() {
        let p = 3;
        let m = DrwModel::new(p, 2, 0b11, 3).unwrap();
        let f = series(p, 2, 9, &[(&[0, 0], 1), (&[1, 0], 2), (&[1, 1], 1)]);
        let x = m.teichmuller(&f, 2).unwrap();
        let lhs = m.frobenius(&m.d(&x).unwrap()).unwrap();
        let x1 = m.teichmuller(&f, 1).unwrap();
        let pw = (0..p - 2).try_fold(x1.clone(), |acc, _| m.mul(&acc, &x1)).unwrap();
        let rhs = m.mul(&pw, &m.d(&x1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dlog_is_additive_and_p_is_lift_independent() {
        let p = 2;
        let m = DrwModel::new(p, 2, 0b11, 4).unwrap();
        let ring = Ring::prime_field(p).unwrap();
        let u = LocalizedUnit::new(vec![1, 0], series(p, 2, 8, &[(&[0, 0], 1), (&[1, 1], 1)])).unwrap();
        let v = LocalizedUnit::new(vec![0, 2], series(p, 2, 8, &[(&[0, 0], 1), (&[0, 1], 1), (&[2, 0], 1)])).unwrap();
        let uv = u.mul(&v).unwrap();
        for level in 1..=2 {
            let lhs = m.dlog(&uv, level).unwrap();
            let rhs = m.add(&m.dlog(&u, level).unwrap(), &m.dlog(&v, level).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let x = m.dlog(&LocalizedUnit::one_plus(ring, 2, 8, Mono::var(0, 1), 1), 1).unwrap();
        let base = m.underline_p(&x).unwrap();
        for r in m.space(1, 1).unwrap().relations.rows() {
            let mut lift = x.v.clone();
            m.ring().axpy(&mut lift, 1, r);
            assert_eq!(m.underline_p_lift(&x, &lift).unwrap(), base);
        }
    }

    #[test]
    fn size_clamp() {
        assert!(matches!(DrwModel::new(5, 1, 1, 3), Err(Error::SizeClamp(_))));
        assert!(matches!(DrwModel::new(2, 3, 1, 3), Err(Error::SizeClamp(_))));
        assert!(matches!(WittPolyTable::new(2, 4), Err(Error::SizeClamp(_))));
    }
}

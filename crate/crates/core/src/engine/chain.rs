use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::forms::{below_sign, mask_mono, non_log, subsets, wedge_sign, GradedSpace, LogForm, Mask};
use crate::modlin::{kernel, IncrementalBasis, Matrix, Ring, Subspace};
use crate::series::{LocalizedUnit, Mono, TruncSeries};

/// Per-multidegree generators inside the mask space of a [`GradedSpace`].
pub type Blocks<'a> = dyn Fn(&Mono) -> Vec<Vec<u32>> + Sync + 'a;

pub(crate) fn unit_vec(n: usize, k: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

/// Unit vectors of the masks accepted by `keep`.
pub fn coordinate_block(space: &GradedSpace, keep: impl Fn(Mask) -> bool) -> Vec<Vec<u32>> {
    let nm = space.masks().len();
    space.masks().iter().enumerate().filter(|(_, s)| keep(**s)).map(|(k, _)| unit_vec(nm, k)).collect()
}

/// `d(T^m dlog T_t)` in the mask space of `space` (degree `q`), for every `(q-1)`-mask `t` accepted.
pub fn d_block(ring: &Ring, space: &GradedSpace, m: &Mono, keep: impl Fn(Mask) -> bool) -> Vec<Vec<u32>> {
    let q = space.degree();
    if q == 0 {
        return Vec::new();
    }
    let nm = space.masks().len();
    let idx: HashMap<Mask, usize> = space.masks().iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let mut out = Vec::new();
    for t in subsets(space.nvars(), q - 1) {
        if !keep(t) {
            continue;
        }
        let mut v = vec![0; nm];
        let mut nz = false;
        for j in 0..space.nvars() {
            if t >> j & 1 == 1 {
                continue;
            }
            let c = ring.from_int(m.get(j) as i64);
            if c == 0 {
                continue;
            }
            let c = if below_sign(t, j) { ring.neg(c) } else { c };
            v[idx[&(t | 1 << j)]] = c;
            nz = true;
        }
        if nz {
            out.push(v);
        }
    }
    out
}

/// `d(T^m dlog T_t)` over `t` with `m ≥ 1_{t∖[0,e)}`: the multidegree-`m` part of `dΩ^{q-1}(log A)`.
pub fn d_log_block(ring: &Ring, space: &GradedSpace, m: &Mono, e: usize) -> Vec<Vec<u32>> {
    d_block(ring, space, m, |t| m.divisible_by(&mask_mono(non_log(t, e))))
}

/// Global vector of a mask-space vector placed at multidegree `m`.
pub fn embed(space: &GradedSpace, m: &Mono, local: &[u32]) -> Vec<u32> {
    let mut v = vec![0; space.dim()];
    let nm = space.masks().len();
    let base = space.mono_index(m).expect("monomial in range") * nm;
    v[base..base + nm].copy_from_slice(local);
    v
}

/// Subspace spanned by per-multidegree blocks over every monomial of the space.
pub fn graded_subspace(ring: Ring, space: &GradedSpace, blocks: &Blocks<'_>) -> Result<Subspace> {
    let mut rows = Vec::new();
    for m in space.monos() {
        for v in blocks(m) {
            rows.push(embed(space, m, &v));
        }
    }
    Subspace::from_rows(ring, space.dim(), rows)
}

/// Splits a homogeneous subspace into its per-multidegree pieces (mask-space vectors).
pub fn split_blocks(space: &GradedSpace, sub: &Subspace) -> Result<HashMap<Mono, Vec<Vec<u32>>>> {
    let nm = space.masks().len();
    let mut out: HashMap<Mono, Vec<Vec<u32>>> = HashMap::new();
    for r in sub.rows() {
        let Some(first) = r.iter().position(|&x| x != 0) else { continue };
        let b = first / nm;
        if r.iter().enumerate().any(|(k, &x)| x != 0 && k / nm != b) {
            return Err(Error::InvalidArgument("subspace is not multigraded".into()));
        }
        out.entry(space.monos()[b]).or_default().push(r[b * nm..(b + 1) * nm].to_vec());
    }
    Ok(out)
}

/// The chain `b, pb, p²b, …` below the weight bound, for a base `b` (zero, or not divisible by `p`).
fn chain_of(space: &GradedSpace, b: &Mono, p: u32) -> Vec<Mono> {
    let mut out = vec![*b];
    if b.degree() == 0 {
        return out;
    }
    let mut m = b.scale(p);
    while m.degree() < space.prec() {
        out.push(m);
        m = m.scale(p);
    }
    out
}

fn is_base(m: &Mono, d: usize, p: u32) -> bool {
    m.degree() == 0 || (0..d).any(|i| m.get(i) % p != 0)
}

/// `{x ∈ X : C⁻¹x − x ∈ Y}` below the weight bound, for `X`, `Y` given per multidegree.
///
/// `X` must be stable under `C⁻¹`; the equations split along the chains `b, pb, …` and the
/// top element of each chain is unconstrained, so the result is exactly the truncation of the
/// untruncated kernel.
pub fn chain_kernel(ring: Ring, space: &GradedSpace, xs: &Blocks<'_>, ys: &Blocks<'_>) -> Result<Subspace> {
    if !ring.is_prime_field() {
        return Err(Error::Unsupported("log kernels over F_{p^m} with m > 1".into()));
    }
    let p = ring.p();
    let nm = space.masks().len();
    let mut rows = Vec::new();
    for b in space.monos() {
        if !is_base(b, space.nvars(), p) {
            continue;
        }
        let chain = chain_of(space, b, p);
        let xb: Vec<Vec<Vec<u32>>> = chain.iter().map(|m| xs(m)).collect();
        if b.degree() == 0 {
            for v in &xb[0] {
                rows.push(embed(space, b, v));
            }
            continue;
        }
        let yb: Vec<Vec<Vec<u32>>> = chain.iter().map(|m| ys(m)).collect();
        let mut xoff = Vec::new();
        let mut yoff = Vec::new();
        let mut cols = 0;
        for k in 0..chain.len() {
            xoff.push(cols);
            cols += xb[k].len();
            yoff.push(cols);
            cols += yb[k].len();
        }
        if xb.iter().all(|x| x.is_empty()) {
            continue;
        }
        let nrows = chain.len() * nm;
        let mut mat = Matrix::zeros(nrows, cols);
        let neg1 = ring.neg(1);
        for k in 0..chain.len() {
            for c in 0..nm {
                let row = k * nm + c;
                if k > 0 {
                    for (j, v) in xb[k - 1].iter().enumerate() {
                        mat.set(row, xoff[k - 1] + j, ring.frob(v[c]));
                    }
                }
                for (j, v) in xb[k].iter().enumerate() {
                    mat.set(row, xoff[k] + j, ring.mul(neg1, v[c]));
                }
                for (j, v) in yb[k].iter().enumerate() {
                    mat.set(row, yoff[k] + j, ring.mul(neg1, v[c]));
                }
            }
        }
        let ker = kernel(&mat, &ring)?;
        for kv in ker.rows() {
            let mut g = vec![0; space.dim()];
            let mut nz = false;
            for k in 0..chain.len() {
                let base = space.mono_index(&chain[k]).expect("in range") * nm;
                for (j, v) in xb[k].iter().enumerate() {
                    let a = kv[xoff[k] + j];
                    if a != 0 {
                        nz = true;
                        ring.axpy(&mut g[base..base + nm], a, v);
                    }
                }
            }
            if nz {
                rows.push(g);
            }
        }
    }
    Subspace::from_rows(ring, space.dim(), rows)
}

/// A unit whose `dlog` enters a generator: a coordinate `T_j` or `1 + c·T^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Axis(usize),
    OnePlus(Mono, u32),
}

impl Factor {
    pub fn weight(&self) -> u32 {
        match self {
            Factor::Axis(_) => 0,
            Factor::OnePlus(m, _) => m.degree(),
        }
    }

    pub fn unit(&self, ring: Ring, d: usize, prec: u32) -> LocalizedUnit {
        match *self {
            Factor::Axis(j) => LocalizedUnit::coordinate(ring, d, prec, j),
            Factor::OnePlus(m, c) => LocalizedUnit::one_plus(ring, d, prec, m, c),
        }
    }

    /// `dlog` as `(multidegree, axis, coefficient)` triples below weight `w`.
    fn one_form(&self, ring: &Ring, d: usize, w: u32) -> Vec<(Mono, usize, u32)> {
        match *self {
            Factor::Axis(j) => vec![(Mono::one(), j, 1)],
            Factor::OnePlus(m, c) => {
                let mut out = Vec::new();
                let mut ck = c;
                let mut k = 1;
                while k * m.degree() < w {
                    let sc = if k % 2 == 1 { ck } else { ring.neg(ck) };
                    let km = m.scale(k);
                    for j in 0..d {
                        let a = ring.mul(sc, ring.from_int(m.get(j) as i64));
                        if a != 0 {
                            out.push((km, j, a));
                        }
                    }
                    ck = ring.mul(ck, c);
                    k += 1;
                }
                out
            }
        }
    }
}

/// Coordinates of `dlog x_1 ∧ … ∧ dlog x_q` in `space`.
pub fn product_vector(ring: &Ring, space: &GradedSpace, factors: &[Factor]) -> Vec<u32> {
    let w = space.prec();
    let d = space.nvars();
    let mut acc: BTreeMap<(Mono, Mask), u32> = BTreeMap::new();
    acc.insert((Mono::one(), 0), 1);
    for f in factors {
        let terms = f.one_form(ring, d, w);
        let mut next: BTreeMap<(Mono, Mask), u32> = BTreeMap::new();
        for ((m, s), c) in &acc {
            for (n, j, a) in &terms {
                if s >> j & 1 == 1 {
                    continue;
                }
                let mm = m.mul(n);
                if mm.degree() >= w {
                    continue;
                }
                let mut v = ring.mul(*c, *a);
                if wedge_sign(*s, 1 << j) {
                    v = ring.neg(v);
                }
                let e = next.entry((mm, s | 1 << j)).or_insert(0);
                *e = ring.add(*e, v);
            }
        }
        next.retain(|_, v| *v != 0);
        acc = next;
    }
    let mut out = vec![0; space.dim()];
    for ((m, s), c) in acc {
        if let Some(k) = space.index(&m, s) {
            out[k] = c;
        }
    }
    out
}

pub fn product_form(ring: Ring, d: usize, prec: u32, factors: &[Factor]) -> Result<LogForm> {
    let units: Vec<LocalizedUnit> = factors.iter().map(|f| f.unit(ring, d, prec)).collect();
    if units.is_empty() {
        return Ok(LogForm::function(TruncSeries::one(ring, d, prec)));
    }
    LogForm::dlog_product(&units)
}

/// Factors `1 + c·T^m` with `m ≥ lower`, `min_weight ≤ |m| < w`, `c ∈ F_p^×`.
pub fn one_plus_factors(ring: &Ring, d: usize, w: u32, lower: &[u32], min_weight: u32) -> Vec<Factor> {
    let low = Mono::from_slice(lower);
    let mut out = Vec::new();
    for m in Mono::below(d, w) {
        if m.degree() < min_weight.max(1) || !m.divisible_by(&low) {
            continue;
        }
        for c in 1..ring.p() {
            out.push(Factor::OnePlus(m, c));
        }
    }
    out
}

/// All products `x_1 ∧ x_2 ∧ … ∧ x_q` with `x_1 ∈ first` and a strictly increasing choice of the
/// rest from `rest` (when `first` is `None` all `q` factors come from `rest`), pruned by weight.
pub fn generator_products(first: Option<&[Factor]>, rest: &[Factor], q: usize, w: u32) -> Vec<Vec<Factor>> {
    fn go(rest: &[Factor], start: usize, left: usize, wt: u32, w: u32, cur: &mut Vec<Factor>, out: &mut Vec<Vec<Factor>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..rest.len() {
            let nw = wt + rest[k].weight();
            if nw >= w {
                continue;
            }
            cur.push(rest[k]);
            go(rest, k + 1, left - 1, nw, w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    match first {
        Some(first) => {
            for f in first {
                if f.weight() >= w {
                    continue;
                }
                let mut cur = vec![*f];
                go(rest, 0, q - 1, f.weight(), w, &mut cur, &mut out);
            }
        }
        None => {
            let mut cur = Vec::new();
            go(rest, 0, q, 0, w, &mut cur, &mut out);
        }
    }
    out
}

/// Span of the given products, with the first generator outside `within` if one is supplied.
pub fn span_products(
    ring: Ring,
    space: &GradedSpace,
    products: &[Vec<Factor>],
    within: Option<&Subspace>,
) -> Result<(Subspace, Option<Vec<Factor>>)> {
    let mut basis = IncrementalBasis::new(ring, space.dim());
    let mut stray = None;
    for f in products {
        let v = product_vector(&ring, space, f);
        if basis.insert(&v)? && stray.is_none() {
            if let Some(s) = within {
                if !s.contains(&v)? {
                    stray = Some(f.clone());
                }
            }
        }
    }
    Ok((basis.into_subspace()?, stray))
}

pub fn factors_text(fs: &[Factor]) -> String {
    fs.iter()
        .map(|f| match f {
            Factor::Axis(j) => format!("dlog(T{})", j + 1),
            Factor::OnePlus(m, c) => {
                format!("dlog(1+{})", crate::series::term_text(*c, m, crate::series::MAX_VARS))
            }
        })
        .collect::<Vec<_>>()
        .join("^")
}

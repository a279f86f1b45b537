//! Three candidate twisted form sheaves along `D = Σ r_i Div(T_i)` and their log parts.
//!
//! `GK` is generated by `O(−D)Ω^q` and `dO(−D) ∧ Ω^{q-1}`, `OURS` is `Ω^q(log D_0)(−D)` and `JSZ`
//! is `Ω^q(log D)(−D)`, all inside `Ω^q(log D_red)`.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chain::{chain_kernel, coordinate_block, d_log_block, graded_subspace, product_vector, Factor};
use super::report::{ModelParams, VerificationReport};
use super::thm1::{checked_space, form_text, internal_weight, log_part_lhs, model_ring};
use crate::divmodel::{CoordDivisor, LocalModel};
use crate::error::{Error, Result};
use crate::forms::{below_sign, mask_mono, subsets, GradedSpace, LogForm, Mask};
use crate::modlin::{Ring, Subspace};
use crate::series::{Mono, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheaf {
    Gk,
    Ours,
    Jsz,
}

/// The six subspaces below one weight bound.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub ring: Ring,
    pub space: GradedSpace,
    pub gk: Subspace,
    pub ours: Subspace,
    pub jsz: Subspace,
    pub gk_log: Subspace,
    pub ours_log: Subspace,
    pub jsz_log: Subspace,
}

impl Comparison {
    pub fn plain(&self, s: Sheaf) -> &Subspace {
        match s {
            Sheaf::Gk => &self.gk,
            Sheaf::Ours => &self.ours,
            Sheaf::Jsz => &self.jsz,
        }
    }

    pub fn log(&self, s: Sheaf) -> &Subspace {
        match s {
            Sheaf::Gk => &self.gk_log,
            Sheaf::Ours => &self.ours_log,
            Sheaf::Jsz => &self.jsz_log,
        }
    }

    /// Membership of a form in each plain and log subspace.
    pub fn locate(&self, f: &LogForm) -> Result<HashMap<(Sheaf, bool), bool>> {
        let v = self.space.vector(&f.truncate(self.space.prec()))?;
        let mut out = HashMap::new();
        for s in [Sheaf::Gk, Sheaf::Ours, Sheaf::Jsz] {
            out.insert((s, false), self.plain(s).contains(&v)?);
            out.insert((s, true), self.log(s).contains(&v)?);
        }
        Ok(out)
    }
}

fn ge(m: &Mono, r: &Mono) -> bool {
    m.divisible_by(r)
}

/// `(a · dlog T) ∧ dlog T_t` in the mask space.
fn d_wedge(ring: &Ring, space: &GradedSpace, idx: &HashMap<Mask, usize>, a: &Mono, t: Mask) -> Option<Vec<u32>> {
    let mut v = vec![0; space.masks().len()];
    let mut nz = false;
    for j in 0..space.nvars() {
        if t >> j & 1 == 1 {
            continue;
        }
        let c = ring.from_int(a.get(j) as i64);
        if c == 0 {
            continue;
        }
        v[idx[&(t | 1 << j)]] = if below_sign(t, j) { ring.neg(c) } else { c };
        nz = true;
    }
    nz.then_some(v)
}

/// Plain and log subspaces for `model` (log locus `D_0 = [0, e)`, support `[0, g)`) below weight `w`.
pub fn comparison_subspaces_at(model: &LocalModel, q: usize, w: u32) -> Result<Comparison> {
    if model.e != model.f {
        return Err(Error::Unsupported("comparison needs a model with e = f".into()));
    }
    subspaces(model_ring(model)?, &model.r, model.e, model.g, q, w)
}

fn subspaces(ring: Ring, rv: &[u32], e: usize, g: usize, q: usize, w: u32) -> Result<Comparison> {
    let d = rv.len();
    let space = checked_space(d, q, w)?;
    let r = Mono::from_slice(rv);
    let off = |s: Mask, k: usize| s & !((1u32 << k) - 1);
    let idx: HashMap<Mask, usize> = space.masks().iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let jsz_at = |m: &Mono| coordinate_block(&space, |s| ge(m, &r.mul(&mask_mono(off(s, g)))));
    let ours_at = |m: &Mono| coordinate_block(&space, |s| ge(m, &r.mul(&mask_mono(off(s, e)))));
    let gk_at = |m: &Mono| {
        let mut out = coordinate_block(&space, |s| ge(m, &r.mul(&mask_mono(s))));
        if q >= 1 {
            for t in subsets(d, q - 1) {
                let top = match m.div(&mask_mono(t)) {
                    Some(x) if ge(&x, &r) => x,
                    _ => continue,
                };
                // the span over the box r ≤ a ≤ top is spanned by r and its unit steps
                let mut corners = vec![r];
                for k in 0..d {
                    if top.get(k) > r.get(k) {
                        corners.push(r.mul(&Mono::var(k, 1)));
                    }
                }
                out.extend(corners.iter().filter_map(|a| d_wedge(&ring, &space, &idx, a, t)));
            }
        }
        out
    };
    let ys = |m: &Mono| d_log_block(&ring, &space, m, g);
    let jsz = graded_subspace(ring, &space, &jsz_at)?;
    let ours = graded_subspace(ring, &space, &ours_at)?;
    let gk = graded_subspace(ring, &space, &gk_at)?;
    let jsz_log = chain_kernel(ring, &space, &jsz_at, &ys)?;
    let ours_log = chain_kernel(ring, &space, &ours_at, &ys)?;
    let gk_log = chain_kernel(ring, &space, &gk_at, &ys)?;
    Ok(Comparison { ring, space, gk, ours, jsz, gk_log, ours_log, jsz_log })
}

pub fn comparison_subspaces(model: &LocalModel, q: usize) -> Result<Comparison> {
    comparison_subspaces_at(model, q, internal_weight(q, model.prec))
}

/// A named form with the sides it should land on.
struct Expected {
    name: &'static str,
    form: LogForm,
    inside: (Sheaf, bool),
    outside: (Sheaf, bool),
}

fn remark_witnesses(ring: Ring, q: usize, w: u32) -> Result<Vec<Expected>> {
    let mono = |v: &[u32]| Mono::from_slice(v);
    let mut out = Vec::new();
    if q == 1 {
        // T1 T3³ dT2 = T1 T2 T3³ dlog T2
        out.push(Expected {
            name: "T1*T3^3*d(T2)",
            form: LogForm::monomial(ring, 3, w, 0b010, mono(&[1, 1, 3]), 1),
            inside: (Sheaf::Ours, false),
            outside: (Sheaf::Gk, false),
        });
        // T1 T2 T3² dT3 = T1 T2 T3³ dlog T3
        out.push(Expected {
            name: "T1*T2*T3^2*d(T3)",
            form: LogForm::monomial(ring, 3, w, 0b100, mono(&[1, 1, 3]), 1),
            inside: (Sheaf::Jsz, false),
            outside: (Sheaf::Ours, false),
        });
    }
    if q == 2 {
        let u = Factor::OnePlus(mono(&[1, 1, 3]), 1);
        let space = GradedSpace::new(3, 2, w);
        let f3 = space.form(ring, &product_vector(&ring, &space, &[u, Factor::Axis(2)]));
        let f2 = space.form(ring, &product_vector(&ring, &space, &[u, Factor::Axis(1)]));
        out.push(Expected { name: "dlog(1+T1*T2*T3^3)^dlog(T3)", form: f3, inside: (Sheaf::Jsz, true), outside: (Sheaf::Ours, true) });
        out.push(Expected { name: "dlog(1+T1*T2*T3^3)^dlog(T2)", form: f2, inside: (Sheaf::Ours, true), outside: (Sheaf::Gk, true) });
    }
    Ok(out)
}

fn side_name(s: (Sheaf, bool)) -> String {
    let n = match s.0 {
        Sheaf::Gk => "GK",
        Sheaf::Ours => "OURS",
        Sheaf::Jsz => "JSZ",
    };
    if s.1 {
        format!("{n}_log")
    } else {
        n.to_string()
    }
}

fn chain_checks(c: &Comparison, rep: &mut VerificationReport) -> Result<(bool, bool, bool, bool)> {
    rep.check("GK in OURS", c.ours.contains_subspace(&c.gk)?, format!("{} / {}", c.gk.rank(), c.ours.rank()));
    rep.check("OURS in JSZ", c.jsz.contains_subspace(&c.ours)?, format!("{} / {}", c.ours.rank(), c.jsz.rank()));
    rep.check("GK_log in OURS_log", c.ours_log.contains_subspace(&c.gk_log)?, format!("{} / {}", c.gk_log.rank(), c.ours_log.rank()));
    rep.check("OURS_log in JSZ_log", c.jsz_log.contains_subspace(&c.ours_log)?, format!("{} / {}", c.ours_log.rank(), c.jsz_log.rank()));
    Ok((c.gk != c.ours, c.ours != c.jsz, c.gk_log != c.ours_log, c.ours_log != c.jsz_log))
}

/// The inclusion chain, the log part of `OURS` against the theorem's kernel, and at `p = 3`,
/// `r = (1, 1, 3)` the four separating forms.
pub fn verify_strict_inclusions(model: &LocalModel, q: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new("compare", ModelParams::of(model, q));
    let w = internal_weight(q, model.prec);
    rep.precision_trail.external = model.prec;
    rep.precision_trail.internal_weight = w;
    let c = comparison_subspaces_at(model, q, w)?;
    rep.lhs_dim = c.ours_log.rank();
    rep.rhs_dim = c.jsz_log.rank();
    let (a, b, la, lb) = chain_checks(&c, &mut rep)?;
    rep.info("GK strictly inside OURS", a, "");
    rep.info("OURS strictly inside JSZ", b, "");
    rep.info("GK_log strictly inside OURS_log", la, "");
    rep.info("OURS_log strictly inside JSZ_log", lb, "");
    let lhs = log_part_lhs(model, q)?;
    rep.check("OURS_log is the theorem kernel", lhs.sub == c.ours_log, format!("{} vs {}", lhs.dim(), c.ours_log.rank()));
    if model.p == 3 && model.r == [1, 1, 3] {
        for x in remark_witnesses(c.ring, q, w)? {
            let at = c.locate(&x.form)?;
            let ok = at[&x.inside] && !at[&x.outside];
            rep.check(
                format!("{} in {} not {}", x.name, side_name(x.inside), side_name(x.outside)),
                ok,
                form_text(&x.form, model.e),
            );
            if ok {
                rep.witness(format!("{}\\{}", side_name(x.inside), side_name(x.outside)), x.name);
            }
        }
        if q == 1 {
            let mut f = TruncSeries::zero(c.ring, 3, w);
            f.add_term(Mono::from_slice(&[1, 1, 3]), 1);
            let df = LogForm::function(f).ext_d()?;
            let at = c.locate(&df)?;
            let sides: Vec<String> =
                [Sheaf::Gk, Sheaf::Ours, Sheaf::Jsz].iter().filter(|s| at[&(**s, false)]).map(|s| side_name((*s, false))).collect();
            rep.info("d(T1*T2*T3^3) membership", true, sides.join(","));
        }
    }
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

/// Search space of the explorer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreBounds {
    pub primes: Vec<u32>,
    pub max_d: usize,
    /// Largest multiplicity tried on each axis.
    pub max_mult: u32,
    pub degrees: Vec<usize>,
    pub prec: u32,
}

impl Default for ExploreBounds {
    fn default() -> Self {
        ExploreBounds { primes: vec![2, 3], max_d: 3, max_mult: 3, degrees: vec![1, 2], prec: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreRow {
    pub p: u32,
    /// Multiplicities in the input order.
    pub r: Vec<u32>,
    pub q: usize,
    pub dims: [usize; 6],
    pub gk_ours_strict: bool,
    pub ours_jsz_strict: bool,
    pub gk_ours_log_strict: bool,
    pub ours_jsz_log_strict: bool,
    /// Broken inclusions of the chain; expected empty.
    pub violations: Vec<String>,
}

fn multiplicities(d: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let lo = v.last().copied().unwrap_or(0);
                (lo..=cap).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&x| x > 0));
    out
}

fn explore_one(p: u32, r: &[u32], q: usize, prec: u32) -> Result<ExploreRow> {
    let c = if r.iter().all(|&x| x == 0) {
        // no divisor: every sheaf is Ω^q
        subspaces(Ring::prime_field(p)?, r, 0, 0, q, internal_weight(q, prec))?
    } else {
        comparison_subspaces(&LocalModel::from_divisor(p, &CoordDivisor(r.to_vec()), prec)?.0, q)?
    };
    let mut violations = Vec::new();
    let pairs = [
        ("GK in OURS", &c.gk, &c.ours),
        ("OURS in JSZ", &c.ours, &c.jsz),
        ("GK_log in OURS_log", &c.gk_log, &c.ours_log),
        ("OURS_log in JSZ_log", &c.ours_log, &c.jsz_log),
    ];
    for (name, small, big) in pairs {
        if !big.contains_subspace(small)? {
            violations.push(name.to_string());
        }
    }
    Ok(ExploreRow {
        p,
        r: r.to_vec(),
        q,
        dims: [c.gk.rank(), c.ours.rank(), c.jsz.rank(), c.gk_log.rank(), c.ours_log.rank(), c.jsz_log.rank()],
        gk_ours_strict: c.gk != c.ours,
        ours_jsz_strict: c.ours != c.jsz,
        gk_ours_log_strict: c.gk_log != c.ours_log,
        ours_jsz_log_strict: c.ours_log != c.jsz_log,
        violations,
    })
}

/// Every non-decreasing `r` with entries up to `max_mult`, every `d ≤ max_d`, prime and degree.
pub fn explore(bounds: &ExploreBounds) -> Result<Vec<ExploreRow>> {
    if bounds.max_d == 0 || bounds.max_d > 3 {
        return Err(Error::InvalidArgument(format!("max_d = {} outside 1..=3", bounds.max_d)));
    }
    if bounds.max_mult > 9 {
        return Err(Error::InvalidArgument(format!("max_mult = {} above 9", bounds.max_mult)));
    }
    let mut cells = Vec::new();
    for &p in &bounds.primes {
        for d in 1..=bounds.max_d {
            for r in multiplicities(d, bounds.max_mult) {
                for &q in &bounds.degrees {
                    if q >= 1 && q <= d {
                        cells.push((p, r.clone(), q));
                    }
                }
            }
        }
    }
    cells.par_iter().map(|(p, r, q)| explore_one(*p, r, *q, bounds.prec)).collect()
}

/// The explorer as a report: no chain violations anywhere, and the `p ∤ rs`, `p | t` row found
/// when the bounds reach it.
pub fn explore_report(bounds: &ExploreBounds) -> Result<(VerificationReport, Vec<ExploreRow>)> {
    let t0 = Instant::now();
    let rows = explore(bounds)?;
    let p0 = bounds.primes.first().copied().unwrap_or(3);
    let mut rep = VerificationReport::new("explore", ModelParams::untwisted(p0, bounds.max_d, 0, 0, bounds.prec));
    rep.scenario = "explore".into();
    let bad: Vec<&ExploreRow> = rows.iter().filter(|r| !r.violations.is_empty()).collect();
    rep.check("no chain violations", bad.is_empty(), format!("{} of {} rows", bad.len(), rows.len()));
    for b in bad.iter().take(3) {
        rep.witness(b.violations.join(","), format!("p={} r={:?} q={}", b.p, b.r, b.q));
    }
    if bounds.primes.contains(&3) && bounds.max_d >= 3 && bounds.max_mult >= 3 {
        let hit = |q: usize| rows.iter().find(|x| x.p == 3 && x.r == [1, 1, 3] && x.q == q);
        let plain = hit(1).is_some_and(|x| x.gk_ours_strict && x.ours_jsz_strict);
        let log = hit(2).is_some_and(|x| x.gk_ours_log_strict && x.ours_jsz_log_strict);
        rep.check("p=3 r=(1,1,3) separates plain", plain, "");
        rep.check("p=3 r=(1,1,3) separates log", log || !bounds.degrees.contains(&2), "");
    }
    rep.lhs_dim = rows.len();
    rep.rhs_dim = rows.iter().filter(|x| x.gk_ours_strict || x.ours_jsz_strict).count();
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn remark(q: usize) -> VerificationReport {
        let m = LocalModel::simple(3, 2, 2, 3, vec![1, 1, 3], 6).unwrap();
        verify_strict_inclusions(&m, q).unwrap()
    }

    #[test]
    fn remark_plain() {
        let rep = remark(1);
        assert!(rep.passed(), "{rep:#?}");
        assert_eq!(rep.witnesses.len(), 2);
    }

    #[test]
    fn remark_log() {
        let rep = remark(2);
        assert!(rep.passed(), "{rep:#?}");
        assert_eq!(rep.witnesses.len(), 2);
    }

    #[test]
    fn trivial_divisor_coincides() {
        let row = explore_one(3, &[0, 0], 1, 5).unwrap();
        assert!(!row.gk_ours_strict && !row.ours_jsz_strict && !row.gk_ours_log_strict && !row.ours_jsz_log_strict);
        assert_eq!(row.dims[0], row.dims[2]);
    }

    #[test]
    fn one_variable_row() {
        let row = explore_one(3, &[1], 1, 6).unwrap();
        assert!(row.violations.is_empty());
        // in one variable with p ∤ r the three agree
        assert!(!row.gk_ours_strict && !row.ours_jsz_strict);
    }

    #[test]
    fn multiplicity_enumeration() {
        let v = multiplicities(2, 2);
        assert_eq!(v, vec![vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]);
    }
}

use std::time::Instant;

use super::report::{ModelParams, VerificationReport};
use crate::divmodel::{ceil_div, CoordDivisor, LocalModel};
use crate::error::{Error, Result};
use crate::modlin::{Ring, Subspace};
use crate::series::{LocalizedUnit, Mono};
use crate::wittdrw::{DrwElement, DrwModel};

fn params(p: u32, dv: &CoordDivisor, n: u32, q: usize, prec: u32) -> ModelParams {
    let d = dv.0.len();
    let g = dv.support().len();
    ModelParams { p, m: 1, n, d, e: g, f: g, g, r: dv.0.clone(), q, precision: prec }
}

fn scenario(p: u32, dv: &CoordDivisor, n: u32, prec: u32) -> String {
    let r: Vec<String> = dv.0.iter().map(|x| x.to_string()).collect();
    format!("p{}-r{}-n{}-N{}", p, r.join("."), n, prec)
}

/// A generator `p^i dlog[1 + c T^m]` at level `level`.
#[derive(Clone, Debug)]
pub struct Thm2Generator {
    pub i: u32,
    pub m: Mono,
    pub c: u32,
    pub element: DrwElement,
}

impl Thm2Generator {
    pub fn text(&self, d: usize) -> String {
        let mono: Vec<String> = (0..d).filter(|&j| self.m.get(j) > 0).map(|j| format!("T{}^{}", j + 1, self.m.get(j))).collect();
        let prefix = if self.i == 0 { String::new() } else { format!("p^{}*", self.i) };
        format!("{}dlog(1+{}*{})", prefix, self.c, mono.join("*"))
    }
}

/// Generators of `Σ_{i<n} p^i dlog(1 + (T^{⌈D/p^i⌉}))` at level `n`, one per monomial and scalar.
pub fn thm2_generators(model: &DrwModel, dv: &CoordDivisor, level: u32) -> Result<Vec<Thm2Generator>> {
    let p = model.p;
    let d = model.d;
    let fp = Ring::prime_field(p)?;
    let sprec = p.pow(level - 1) * model.prec;
    let mut out = Vec::new();
    for i in 0..level {
        let lower = ceil_div(dv, p.pow(i))?;
        for m in Mono::below(d, sprec) {
            if m.degree() == 0 || (0..d).any(|j| m.get(j) < lower.0[j]) {
                continue;
            }
            for c in 1..p {
                let u = LocalizedUnit::one_plus(fp, d, sprec, m, c);
                let x = model.dlog(&u, level)?;
                let element = model.scale(&x, p.pow(i) as i64)?;
                out.push(Thm2Generator { i, m, c, element });
            }
        }
    }
    Ok(out)
}

/// `T^M dlog T_s` at integral weights with `M ≥ r + 1_{s∖D_0}`, `D_0` the axes with `p ∤ r_i`.
fn level_one_zeros(model: &DrwModel, dv: &CoordDivisor) -> Result<Subspace> {
    let p = model.p;
    let q = 1;
    let mut rows = Vec::new();
    for k in 0..model.dim(q) {
        let (m, s) = model.coord(q, k);
        let ok = (0..model.d).all(|i| {
            if m.get(i) % p != 0 {
                return false;
            }
            let pole = dv.0[i] > 0 && dv.0[i] % p != 0;
            let bump = u32::from(s >> i & 1 == 1 && !pole);
            m.get(i) / p >= dv.0[i] + bump
        });
        if ok {
            let mut v = vec![0; model.dim(q)];
            v[k] = 1;
            rows.push(v);
        }
    }
    Subspace::from_rows(model.ring(), model.dim(q), rows)?.sum(&model.space(1, q)?.relations)
}

fn check_clamp(p: u32, d: usize, n: u32, q: usize, prec: u32) -> Result<()> {
    if n != 2 || q != 1 || d > 2 || !matches!(p, 2 | 3) || prec > 6 {
        return Err(Error::SizeClamp(format!("level-2 checks need n=2, q=1, d≤2, p∈{{2,3}}, N≤6; got n={n} q={q} d={d} p={p} N={prec}")));
    }
    Ok(())
}

/// Relations are respected by `F`, `V`, `d`, `R` and `p̲`.
fn well_defined(model: &DrwModel, rep: &mut VerificationReport) -> Result<()> {
    let mut ok = true;
    for q in 0..=model.d {
        let s1 = &model.space(1, q)?.relations;
        let s2 = &model.space(2, q)?.relations;
        ok &= s1.contains_subspace(s2)?;
        for r in s2.rows() {
            let x = model.element(2, q, r.clone())?;
            ok &= model.element(1, q, model.frobenius_rep(q, r))? == model.zero(1, q)?;
            if q < model.d {
                ok &= model.d(&x)? == model.zero(2, q + 1)?;
            }
        }
        for r in s1.rows() {
            let x = DrwElement { level: 1, q, v: r.clone() };
            let raw = model.element(1, q, r.clone())?;
            ok &= raw == model.zero(1, q)?;
            let mut pv = r.clone();
            model.ring().scale(&mut pv, model.p);
            ok &= model.element(2, q, pv)? == model.zero(2, q)?;
            let k = r.iter().position(|&c| c != 0).map(|k| model.coord(q, k).0).unwrap_or_default();
            if (0..model.d).all(|i| k.get(i) % model.p == 0) {
                ok &= model.verschiebung(&x)? == model.zero(2, q)?;
            }
            if q < model.d {
                ok &= model.d(&model.element(1, q, r.clone())?)? == model.zero(1, q + 1)?;
            }
        }
    }
    rep.check("operators respect relations", ok, "F, V, d, R and p̲ map relations to relations");
    Ok(())
}

/// Level-2 log forms with zeros along `D`, restricted check: every generator of
/// `Σ p^i dlog(1 + (T^{⌈D/p^i⌉}))` lies in `W_2Ω^1(log D)(−D) ∩ ker(F − 1)`, and `R` maps
/// level-2 generators onto the level-1 ones.
pub fn verify_thm2_divisor(p: u32, dv: &CoordDivisor, n: u32, q: usize, prec: u32) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let d = dv.0.len();
    check_clamp(p, d, n, q, prec)?;
    let mut rep = VerificationReport::new("thm2", params(p, dv, n, q, prec));
    rep.scenario = scenario(p, dv, n, prec);
    rep.precision_trail.external = prec;
    rep.precision_trail.internal_weight = prec;
    let model = DrwModel::new(p, d, 0, prec)?;
    well_defined(&model, &mut rep)?;

    let gens2 = thm2_generators(&model, dv, 2)?;
    let zeros = model.zeros_module(2, 1, dv)?;
    let lhs = zeros.intersect(&model.log_kernel(2, 1, &CoordDivisor::zero(d))?)?;
    rep.check("zeros contain the Gupta-Krishna ideal", zeros.contains_subspace(&model.dg_ideal(2, 1, dv)?)?, "");
    let ours1 = model.zeros_module(1, 1, dv)?;
    rep.check("level-1 zeros match Ω(log D_0)(-D)", ours1 == level_one_zeros(&model, dv)?, "");
    let mut bad = Vec::new();
    for g in &gens2 {
        if !lhs.contains(&g.element.v)? {
            bad.push(g.text(d));
        }
    }
    for b in bad.iter().take(5) {
        rep.witness("rhs\\lhs", b.clone());
    }
    rep.check("rhs in twisted log kernel", bad.is_empty(), format!("{} generators, {} outside", gens2.len(), bad.len()));

    let gens1 = thm2_generators(&model, dv, 1)?;
    let mut missing = 0;
    for g1 in &gens1 {
        let pre = gens2.iter().find(|g| g.i == 0 && g.m == g1.m && g.c == g1.c);
        let hit = match pre {
            Some(g) => model.restrict(&g.element)? == g1.element,
            None => false,
        };
        if !hit {
            missing += 1;
            rep.witness("R-preimage", g1.text(d));
        }
    }
    rep.check("R onto level-1 generators", missing == 0, format!("{} level-1 generators", gens1.len()));

    // ker R ⊇ V + dV on generators of level 1
    let mut kr = true;
    for qq in 0..=1usize {
        for r in model.lattice(qq).rows() {
            let x = model.element(1, qq, r.clone())?;
            let vx = model.verschiebung(&x)?;
            if qq == 1 {
                kr &= model.restrict(&vx)? == model.zero(1, 1)?;
            } else {
                kr &= model.restrict(&model.d(&vx)?)? == model.zero(1, 1)?;
            }
        }
    }
    rep.check("ker R contains V and dV", kr, "");

    let s2 = &model.space(2, 1)?.relations;
    let m2 = model.span(2, 1, &gens2.iter().map(|g| g.element.clone()).collect::<Vec<_>>())?;
    rep.rhs_dim = (m2.log_card() - s2.log_card()) as usize;
    rep.lhs_dim = (lhs.log_card() - s2.log_card()) as usize;
    rep.info("full level-2 equality", m2 == lhs, format!("log_p orders: rhs {}, lhs {}", rep.rhs_dim, rep.lhs_dim));
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

pub fn verify_thm2_restricted(model: &LocalModel, n: u32, q: usize) -> Result<VerificationReport> {
    verify_thm2_divisor(model.p, &model.divisor(), n, q, model.prec)
}

/// The submodules `M_1 ⊆ W_1Ω^1` and `M_2 ⊆ W_2Ω^1` spanned by the generators, with relations.
pub fn thm2_modules(model: &DrwModel, dv: &CoordDivisor) -> Result<(Subspace, Subspace)> {
    let g1: Vec<DrwElement> = thm2_generators(model, dv, 1)?.into_iter().map(|g| g.element).collect();
    let g2: Vec<DrwElement> = thm2_generators(model, dv, 2)?.into_iter().map(|g| g.element).collect();
    Ok((model.span(1, 1, &g1)?, model.span(2, 1, &g2)?))
}

/// `0 → M_1(⌈D/p⌉) →p̲ M_2 →R M_1 → 0` on the generated modules, modulo `dlog(1 + (T)^N)` at level 2.
pub fn verify_cor1_divisor(p: u32, dv: &CoordDivisor, n: u32, prec: u32) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let d = dv.0.len();
    check_clamp(p, d, n, 1, prec)?;
    let mut rep = VerificationReport::new("cor1", params(p, dv, n, 1, prec));
    rep.scenario = scenario(p, dv, n, prec);
    rep.precision_trail.external = prec;
    rep.precision_trail.internal_weight = prec;
    let model = DrwModel::new(p, d, 0, prec)?;
    let ring = model.ring();
    let s1 = model.space(1, 1)?.relations.clone();
    let s2 = model.space(2, 1)?.relations.clone();
    let (m1, m2) = thm2_modules(&model, dv)?;
    rep.lhs_dim = (m2.log_card() - s2.log_card()) as usize;
    rep.rhs_dim = (m1.log_card() - s1.log_card()) as usize;

    let dp = ceil_div(dv, p)?;
    let g0: Vec<DrwElement> = thm2_generators(&model, &dp, 1)?.into_iter().map(|g| g.element).collect();
    let m0 = model.span(1, 1, &g0)?;
    let scaled: Vec<Vec<u32>> = m0
        .rows()
        .iter()
        .map(|r| {
            let mut v = r.clone();
            ring.scale(&mut v, p);
            v
        })
        .collect();
    let pm1 = Subspace::from_rows(ring, model.dim(1), scaled)?.sum(&s2)?;
    let inj = pm1.log_card() - s2.log_card() == m0.log_card() - s1.log_card();
    rep.check("p̲ injective", inj, format!("log_p |M_1| = {}", m0.log_card() - s1.log_card()));
    // dlog of 1 + (T)^N at level 2: R sends it below the precision of level 1
    let edge: Vec<DrwElement> = thm2_generators(&model, dv, 2)?
        .into_iter()
        .filter(|g| g.i == 0 && g.m.degree() >= prec)
        .map(|g| g.element)
        .collect();
    let q2 = model.span(2, 1, &edge)?;
    let ker_r = m2.intersect(&s1)?;
    let pm1q = pm1.sum(&q2)?;
    rep.check(
        "image of p̲ = kernel of R",
        ker_r == pm1q,
        format!("log_p |ker R| = {}, log_p |p̲M_1 + Q| = {}", ker_r.log_card() - s2.log_card(), pm1q.log_card() - s2.log_card()),
    );
    let onto = m2.sum(&s1)? == m1;
    rep.check("R surjective", onto, "");

    // the same sequence on the computed log kernels
    let zd = CoordDivisor::zero(d);
    let l1 = model.zeros_module(1, 1, dv)?.intersect(&model.log_kernel(1, 1, &zd)?)?;
    let l2 = model.zeros_module(2, 1, dv)?.intersect(&model.log_kernel(2, 1, &zd)?)?;
    let pl1: Vec<Vec<u32>> = l1
        .rows()
        .iter()
        .map(|r| {
            let mut v = r.clone();
            ring.scale(&mut v, p);
            v
        })
        .collect();
    let pl1 = Subspace::from_rows(ring, model.dim(1), pl1)?.sum(&s2)?;
    let exact = l2.intersect(&s1)? == pl1 && l2.sum(&s1)? == l1;
    rep.info("same sequence on log kernels", exact, format!("log_p orders {} / {}", l1.log_card() - s1.log_card(), l2.log_card() - s2.log_card()));
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

pub fn verify_cor1(model: &LocalModel, n: u32) -> Result<VerificationReport> {
    verify_cor1_divisor(model.p, &model.divisor(), n, model.prec)
}

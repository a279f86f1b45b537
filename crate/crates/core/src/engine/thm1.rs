use std::time::Instant;

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::chain::{
    chain_kernel, coordinate_block, d_block, d_log_block, generator_products, graded_subspace, one_plus_factors,
    span_products, split_blocks, factors_text, Factor,
};
use super::report::{ModelParams, Rerun, VerificationReport};
use super::FormSubspace;
use crate::divmodel::LocalModel;
use crate::error::{Error, Result};
use crate::forms::{b_filtration, mask_mono, non_log, GradedSpace, LogForm, Mask};
use crate::modlin::{kernel, Matrix, Ring, Subspace};
use crate::series::{Mono, TruncSeries};

/// Largest coordinate space the engine will build.
pub const MAX_SPACE_DIM: usize = 40_000;

pub(crate) fn model_ring(model: &LocalModel) -> Result<Ring> {
    if model.m != 1 {
        return Err(Error::Unsupported("the engine works over the prime field (m = 1)".into()));
    }
    Ring::prime_field(model.p)
}

pub(crate) fn checked_space(d: usize, q: usize, w: u32) -> Result<GradedSpace> {
    let space = GradedSpace::new(d, q, w);
    if space.dim() > MAX_SPACE_DIM {
        return Err(Error::SizeClamp(format!("{} coordinates for d={d}, q={q}, weight<{w}", space.dim())));
    }
    Ok(space)
}

/// Weight bound matching coefficient precision `n` for `q`-forms.
pub fn internal_weight(q: usize, n: u32) -> u32 {
    n + q as u32
}

/// `T^m dlog T_s ∈ T^r Ω(log Div(T_1⋯T_e))`.
pub fn twisted_member(r: &[u32], e: usize, m: &Mono, s: Mask) -> bool {
    m.divisible_by(&Mono::from_slice(r).mul(&mask_mono(non_log(s, e))))
}

/// The log part of `G^r = Ω^q(log A)(−B)` below weight `w`: `x ∈ G` with `C⁻¹x − x ∈ dΩ^{q-1}(log A)`.
pub fn log_part_lhs_at(model: &LocalModel, q: usize, w: u32) -> Result<FormSubspace> {
    let ring = model_ring(model)?;
    let space = checked_space(model.d, q, w)?;
    let (r, e) = (&model.r, model.e);
    let xs = |m: &Mono| coordinate_block(&space, |s| twisted_member(r, e, m, s));
    let ys = |m: &Mono| d_log_block(&ring, &space, m, e);
    let sub = chain_kernel(ring, &space, &xs, &ys)?;
    Ok(FormSubspace { ring, space, sub })
}

pub fn log_part_lhs(model: &LocalModel, q: usize) -> Result<FormSubspace> {
    log_part_lhs_at(model, q, internal_weight(q, model.prec))
}

/// Generators `dlog x_1 ∧ … ∧ dlog x_q` with `x_1 = 1 + c·T^m`, `m ≥ lower`, the rest `T_j (j < f)` or `1 + c·T^n`.
pub fn thm1_products(ring: &Ring, d: usize, q: usize, w: u32, lower: &[u32], f: usize) -> Vec<Vec<Factor>> {
    if q == 0 {
        return Vec::new();
    }
    let first = one_plus_factors(ring, d, w, lower, 1);
    let mut rest: Vec<Factor> = (0..f).map(Factor::Axis).collect();
    rest.extend(one_plus_factors(ring, d, w, &vec![0; d], 1));
    generator_products(Some(&first), &rest, q, w)
}

fn rhs_at(model: &LocalModel, q: usize, w: u32, lower: &[u32], within: Option<&Subspace>) -> Result<(FormSubspace, Option<Vec<Factor>>)> {
    let ring = model_ring(model)?;
    let space = checked_space(model.d, q, w)?;
    let products = thm1_products(&ring, model.d, q, w, lower, model.f);
    let (sub, stray) = span_products(ring, &space, &products, within)?;
    Ok((FormSubspace { ring, space, sub }, stray))
}

/// Span of `dlog x_1 ∧ … ∧ dlog x_q` with `x_1 ∈ 1 + (T^{r̃})` below weight `w`.
pub fn rhs_span_thm1_at(model: &LocalModel, q: usize, w: u32) -> Result<FormSubspace> {
    Ok(rhs_at(model, q, w, &model.r_tilde(), None)?.0)
}

pub fn rhs_span_thm1(model: &LocalModel, q: usize) -> Result<FormSubspace> {
    rhs_span_thm1_at(model, q, internal_weight(q, model.prec))
}

/// Text of a form, in the conventional basis for the widest log locus that works.
pub(crate) fn form_text(f: &LogForm, e: usize) -> String {
    for k in e..=f.nvars() {
        if f.spec_coeffs(k).is_ok() {
            return f.to_text(k);
        }
    }
    format!("{f:?}")
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Thm1Options {
    /// Extra weight above `N + q` used for the computation.
    pub extra_weight: u32,
    /// Use `r` instead of `r̃` for the first slot (negative control).
    pub drop_bump: bool,
    /// On failure, recompute at weight `p·(N + q)` and record the verdict.
    pub rerun_on_failure: bool,
}

fn thm1_compare(model: &LocalModel, q: usize, w: u32, opts: &Thm1Options, rep: &mut VerificationReport) -> Result<bool> {
    let lhs = log_part_lhs_at(model, q, w)?;
    let lower = if opts.drop_bump { model.r.clone() } else { model.r_tilde() };
    let (rhs, stray) = rhs_at(model, q, w, &lower, Some(&lhs.sub))?;
    let n = model.prec;
    rep.lhs_dim = lhs.dim_below(n, model.e)?;
    rep.rhs_dim = rhs.dim_below(n, model.e)?;
    rep.info("internal dims", true, format!("lhs {} rhs {} at weight < {w}", lhs.dim(), rhs.dim()));
    let r_in = lhs.sub.contains_subspace(&rhs.sub)?;
    let l_in = rhs.sub.contains_subspace(&lhs.sub)?;
    rep.check("rhs in lhs", r_in, format!("rank {}", rhs.dim()));
    rep.check("lhs in rhs", l_in, format!("rank {}", lhs.dim()));
    if let Some(fs) = stray {
        rep.witness("rhs\\lhs", factors_text(&fs));
    } else if let Some(v) = lhs.sub.first_missing(&rhs.sub)? {
        rep.witness("rhs\\lhs", form_text(&lhs.form(&v), model.e));
    }
    if let Some(v) = rhs.sub.first_missing(&lhs.sub)? {
        rep.witness("lhs\\rhs", form_text(&lhs.form(&v), model.e));
    }
    Ok(r_in && l_in)
}

/// Equality of the log part of `G^r` with the span of `dlog(1 + (T^{r̃})) ∧ dlog(…)…`.
pub fn verify_thm1(model: &LocalModel, q: usize, opts: &Thm1Options) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new("thm1", ModelParams::of(model, q));
    if q == 0 || q > model.d {
        return Err(Error::InvalidArgument(format!("q = {q} outside 1..={}", model.d)));
    }
    let w = internal_weight(q, model.prec) + opts.extra_weight;
    rep.precision_trail.external = model.prec;
    rep.precision_trail.internal_weight = w;
    let eq = thm1_compare(model, q, w, opts, &mut rep)?;
    if !eq && opts.rerun_on_failure {
        let w2 = internal_weight(q, model.prec) * model.p;
        if GradedSpace::new(model.d, q, w2).dim() <= MAX_SPACE_DIM / 4 {
            let mut tmp = VerificationReport::new("thm1", ModelParams::of(model, q));
            let eq2 = thm1_compare(model, q, w2, opts, &mut tmp)?;
            rep.precision_trail.reruns.push(Rerun { external: model.prec, internal_weight: w2, equal: eq2 });
        }
    }
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

/// Span of `dlog` images of symbols `{x_1, …, x_q}` with `x_1 ≡ 1 mod T^r` and the rest units off `D_0`.
///
/// Only models with `e = f` (log locus `D_0`) are handled.
pub fn milnor_rhs_span(model: &LocalModel, q: usize) -> Result<FormSubspace> {
    if model.e != model.f {
        return Err(Error::Unsupported("symbol span needs a model with e = f".into()));
    }
    Ok(rhs_at(model, q, internal_weight(q, model.prec), &model.r, None)?.0)
}

pub fn verify_bgk_n1(model: &LocalModel, q: usize) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new("bgk", ModelParams::of(model, q));
    let w = internal_weight(q, model.prec);
    rep.precision_trail.external = model.prec;
    rep.precision_trail.internal_weight = w;
    let lhs = log_part_lhs(model, q)?;
    let rhs = milnor_rhs_span(model, q)?;
    rep.lhs_dim = lhs.dim_below(model.prec, model.e)?;
    rep.rhs_dim = rhs.dim_below(model.prec, model.e)?;
    rep.check("symbols in log part", lhs.sub.contains_subspace(&rhs.sub)?, "");
    rep.check("log part in symbols", rhs.sub.contains_subspace(&lhs.sub)?, "");
    let thm1 = rhs_span_thm1(model, q)?;
    rep.info("same span as thm1 generators", thm1.sub == rhs.sub, "");
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

/// `(T^r Ω^q(log A)) ∩ dΩ^{q-1}(log A)` below weight `w`.
pub fn appendix_b_lhs(model: &LocalModel, q: usize, w: u32) -> Result<FormSubspace> {
    let ring = model_ring(model)?;
    let space = checked_space(model.d, q, w)?;
    let g = graded_subspace(ring, &space, &|m: &Mono| coordinate_block(&space, |s| twisted_member(&model.r, model.e, m, s)))?;
    let b1 = b_filtration(ring, model.d, q, model.e, w, 0)?;
    let sub = g.intersect(&b1.steps[0])?;
    Ok(FormSubspace { ring, space, sub })
}

/// `d(T^{r̃} Ω^{q-1}(log Ã))` below weight `w`, `Ã = Div(T_1⋯T_f)`.
pub fn appendix_b_rhs(model: &LocalModel, q: usize, w: u32) -> Result<FormSubspace> {
    let ring = model_ring(model)?;
    let space = checked_space(model.d, q, w)?;
    let rt = model.r_tilde();
    let f = model.f;
    let sub = graded_subspace(ring, &space, &|m: &Mono| d_block(&ring, &space, m, |t| twisted_member(&rt, f, m, t)))?;
    Ok(FormSubspace { ring, space, sub })
}

/// Draws `α ∈ Ω^{q-1}(log A)` with `dα ∈ T_j^r Ω^q` along axis `j` and checks the closed
/// correction `ε`: `dε = 0` and `α − ε ∈ T_j^{r+1} Ω^{q-1}(log A + Div T_j)`.
pub fn epsilon_check(model: &LocalModel, q: usize, j: usize, w: u32, rng: &mut ChaCha8Rng) -> Result<bool> {
    let ring = model_ring(model)?;
    let (d, e, r) = (model.d, model.e, model.r[j]);
    let p = model.p;
    let aspace = checked_space(d, q - 1, w)?;
    let dspace = GradedSpace::new(d, q, w);
    // basis of Ω^{q-1}(log A) and the violating coordinates of d
    let mut basis: Vec<(Mono, Mask)> = Vec::new();
    for m in aspace.monos() {
        for &t in aspace.masks() {
            if m.divisible_by(&mask_mono(non_log(t, e))) {
                basis.push((*m, t));
            }
        }
    }
    let bad = |m: &Mono, s: Mask| {
        let need = if s >> j & 1 == 1 { r + 1 } else { r };
        m.get(j) < need
    };
    let mut bad_idx = std::collections::HashMap::new();
    for k in 0..dspace.dim() {
        let (m, s) = dspace.basis(k);
        if bad(&m, s) {
            let n = bad_idx.len();
            bad_idx.insert(k, n);
        }
    }
    let dforms: Vec<Vec<u32>> = basis
        .iter()
        .map(|(m, t)| {
            let f = LogForm::monomial(ring, d, w, *t, *m, 1).ext_d().expect("q ≤ d");
            dspace.vector(&f).expect("same space")
        })
        .collect();
    let mut mat = Matrix::zeros(bad_idx.len(), basis.len());
    for (c, v) in dforms.iter().enumerate() {
        for (k, &x) in v.iter().enumerate() {
            if x != 0 {
                if let Some(&row) = bad_idx.get(&k) {
                    mat.set(row, c, x);
                }
            }
        }
    }
    let ker = kernel(&mat, &ring)?;
    let mut alpha = LogForm::zero(ring, d, q - 1, w);
    for row in ker.rows() {
        let c = rng.gen_range(0..p);
        for (k, &x) in row.iter().enumerate() {
            if x != 0 {
                alpha.add_term(basis[k].1, basis[k].0, ring.mul(c, x));
            }
        }
    }
    let sign = if (q - 1) % 2 == 0 { 1 } else { ring.neg(1) };
    let tpow = |l: u32| TruncSeries::monomial(ring, d, w, Mono::var(j, l), 1);
    let dlog_t = LogForm::dlog_axis(ring, d, w, j);
    let mut eps = alpha.level(j, 0).0.with_prec(w);
    for i in 1..=r {
        let (a, b) = alpha.level(j, i);
        let (a, b) = (a.with_prec(w), b.with_prec(w));
        if i % p == 0 {
            eps = eps.add(&a.mul_fn(&tpow(i))?)?;
        } else if q >= 2 {
            let inv = ring.inv(ring.from_int(i as i64)).expect("p ∤ i");
            let db = b.ext_d()?.mul_fn(&tpow(i))?.scale(ring.mul(sign, inv));
            eps = eps.sub(&db)?;
        }
        if q >= 2 {
            eps = eps.add(&b.wedge(&dlog_t)?.mul_fn(&tpow(i))?)?;
        }
    }
    let closed = eps.ext_d()?.is_zero();
    let rest = alpha.sub(&eps)?;
    let high = rest.monomials().all(|(_, m, _)| m.get(j) >= r + 1);
    Ok(closed && high)
}

/// `(T^r Ω^q(log A)) ∩ dΩ^{q-1}(log A) = d(T^{r̃} Ω^{q-1}(log Ã))`, plus the `ε` check on random `α`.
pub fn verify_appendix_b(model: &LocalModel, q: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new("appendixB", ModelParams::of(model, q));
    rep.seed = Some(seed);
    let w = internal_weight(q, model.prec);
    rep.precision_trail.external = model.prec;
    rep.precision_trail.internal_weight = w;
    let lhs = appendix_b_lhs(model, q, w)?;
    let rhs = appendix_b_rhs(model, q, w)?;
    rep.lhs_dim = lhs.dim_below(model.prec, model.e)?;
    rep.rhs_dim = rhs.dim_below(model.prec, model.e)?;
    rep.check("rhs in lhs", lhs.sub.contains_subspace(&rhs.sub)?, "");
    rep.check("lhs in rhs", rhs.sub.contains_subspace(&lhs.sub)?, "");
    if let Some(v) = rhs.sub.first_missing(&lhs.sub)? {
        rep.witness("lhs\\rhs", form_text(&lhs.form(&v), model.e));
    }
    if let Some(v) = lhs.sub.first_missing(&rhs.sub)? {
        rep.witness("rhs\\lhs", form_text(&rhs.form(&v), model.e));
    }
    if model.e < model.f && samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = 0;
        for k in 0..samples {
            let j = model.e + k % (model.f - model.e);
            if epsilon_check(model, q, j, w, &mut rng)? {
                ok += 1;
            }
        }
        rep.check("closed correction", ok == samples, format!("{ok}/{samples} samples"));
    }
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

/// Span of `dlog` products of `T_j (j < e)` and `1 + c·T^n`, below weight `w`.
pub fn log_span_untwisted(ring: Ring, space: &GradedSpace, e: usize) -> Result<Subspace> {
    let d = space.nvars();
    let mut rest: Vec<Factor> = (0..e).map(Factor::Axis).collect();
    rest.extend(one_plus_factors(&ring, d, space.prec(), &vec![0; d], 1));
    let products = generator_products(None, &rest, space.degree(), space.prec());
    Ok(span_products(ring, space, &products, None)?.0)
}

/// Exactness at level one of `0 → Ω_log → Ω/B_∞ → Ω/B_∞ → 0` (maps inclusion and `F̄ − 1`).
pub fn verify_ses_finv(p: u32, d: usize, e: usize, q: usize, n: u32) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new("appendixC", ModelParams::untwisted(p, d, e, q, n));
    let ring = Ring::prime_field(p)?;
    let w = internal_weight(q, n);
    rep.precision_trail.external = n;
    rep.precision_trail.internal_weight = w;
    let space = checked_space(d, q, w)?;
    let bf = b_filtration(ring, d, q, e, w, 3)?;
    let stable = bf.stable_at;
    rep.check("B stabilizes", stable.is_some(), format!("{:?}, ranks {:?}", stable, bf.steps.iter().map(|s| s.rank()).collect::<Vec<_>>()));
    let binf = bf.infinity().clone();
    let logs = log_span_untwisted(ring, &space, e)?;
    // A log form whose truncation lies in B_j is only forced to vanish below weight w/p^j.
    let mut inj = true;
    let mut detail = Vec::new();
    for (j, bj) in bf.steps.iter().enumerate().take(stable.unwrap_or(bf.steps.len()) + 1) {
        let cut = w.div_ceil(p.pow(j as u32 + 1));
        let coords: Vec<usize> = (0..space.dim()).filter(|&k| space.basis(k).0.degree() < cut).collect();
        let meet = logs.intersect(bj)?;
        let low = meet.project(&coords)?;
        detail.push(format!("B_{}: rank {} below weight {cut}", j + 1, low.rank()));
        if !low.is_zero() {
            inj = false;
            if let Some(v) = meet.rows().iter().find(|r| coords.iter().any(|&k| r[k] != 0)) {
                rep.witness(format!("log∩B_{}", j + 1), form_text(&space.form(ring, v), e));
            }
        }
    }
    rep.check("log span meets B_j trivially", inj, detail.join("; "));
    rep.info("truncated intersection with B_inf", true, format!("rank {}", logs.intersect(&binf)?.rank()));
    let blocks = split_blocks(&space, &binf)?;
    let xs = |m: &Mono| coordinate_block(&space, |s| m.divisible_by(&mask_mono(non_log(s, e))));
    let ys = |m: &Mono| blocks.get(m).cloned().unwrap_or_default();
    let ker = chain_kernel(ring, &space, &xs, &ys)?;
    let want = logs.sum(&binf)?;
    rep.lhs_dim = ker.rank();
    rep.rhs_dim = want.rank();
    rep.check("kernel of F-1 is log span + B_inf", ker == want, format!("{} vs {}", ker.rank(), want.rank()));
    // F̄ − 1 onto the augmentation ideal
    let mut img = Vec::new();
    let mut targets = Vec::new();
    for k in 0..space.dim() {
        let (m, s) = space.basis(k);
        if m.degree() == 0 || !m.divisible_by(&mask_mono(non_log(s, e))) {
            continue;
        }
        let unit = super::chain::unit_vec(space.dim(), k);
        let mut v = space.cartier_inv_vec(&ring, &unit);
        v[k] = ring.sub(v[k], 1);
        img.push(v);
        targets.push(unit);
    }
    let image = Subspace::from_rows(ring, space.dim(), img)?.sum(&binf)?;
    let target = Subspace::from_rows(ring, space.dim(), targets)?;
    rep.check("F-1 onto augmentation ideal mod B_inf", image.contains_subspace(&target)?, "");
    // dlog T_1 lies outside B_inf
    if e > 0 && q == 1 {
        let v = space.vector(&LogForm::dlog_axis(ring, d, w, 0))?;
        rep.check("dlog T1 not in B_inf", !binf.contains(&v)?, "");
    }
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

pub(crate) fn random_element(ring: &Ring, sub: &Subspace, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut v = vec![0; sub.ambient()];
    for r in sub.rows() {
        let c = rng.gen_range(0..ring.p());
        ring.axpy(&mut v, c, r);
    }
    v
}

//! Writing log forms of `G^r` as sums of `dlog x_1 ∧ … ∧ dlog x_q` with `x_1 ∈ 1 + (T^{r̃})`.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::chain::{product_vector, Factor};
use super::lemma3::{GradedSolver, SliceSpace};
use super::report::{ModelParams, VerificationReport};
use super::thm1::{internal_weight, log_part_lhs, model_ring, random_element, thm1_products};
use super::FormSubspace;
use crate::divmodel::LocalModel;
use crate::error::{Error, Result};
use crate::forms::{GradedSpace, LogForm};
use crate::modlin::{solve, IncrementalBasis, Ring};
use crate::series::LocalizedUnit;

/// One summand `dlog x_1 ∧ … ∧ dlog x_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlogTerm {
    pub units: Vec<LocalizedUnit>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DlogFactorization {
    pub terms: Vec<DlogTerm>,
}

impl DlogFactorization {
    pub fn evaluate(&self, ring: Ring, d: usize, q: usize, prec: u32) -> Result<LogForm> {
        let mut out = LogForm::zero(ring, d, q, prec);
        for t in &self.terms {
            let units: Vec<LocalizedUnit> =
                t.units.iter().map(|u| LocalizedUnit::new(u.z.clone(), u.u.with_prec(prec))).collect::<Result<_>>()?;
            out = out.add(&LogForm::dlog_product(&units)?)?;
        }
        Ok(out)
    }

    /// Every first unit is `1 + (T^lower)` with no inverted axes.
    pub fn first_units_in(&self, lower: &[u32]) -> bool {
        self.terms.iter().all(|t| match t.units.first() {
            Some(x) => {
                if x.z.iter().any(|&z| z != 0) || x.u.constant_term() != 1 {
                    return false;
                }
                let one = crate::series::TruncSeries::one(x.u.ring(), x.u.nvars(), x.u.prec());
                x.u.sub(&one).map(|t| t.ideal_member(lower)).unwrap_or(false)
            }
            None => false,
        })
    }

    /// Unit-expression text, `0` when empty.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| t.units.iter().map(|u| format!("dlog({})", u.to_text())).collect::<Vec<_>>().join("^"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Generators of one filtration level: slices of those whose exact level is `l`, reduced to a basis.
struct Level {
    slice: SliceSpace,
    gens: Vec<usize>,
    slices: Vec<Vec<u32>>,
}

/// Cached data for factoring many forms of one model.
pub struct Factorizer {
    pub model: LocalModel,
    pub q: usize,
    pub axis: usize,
    pub weight: u32,
    pub lhs: FormSubspace,
    products: Vec<Vec<Factor>>,
    vectors: Vec<Vec<u32>>,
    levels: Vec<Level>,
    solvers: Vec<Option<GradedSolver>>,
}

fn level_of(space: &GradedSpace, v: &[u32], i: usize, e: usize) -> Option<u32> {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, _)| {
            let (m, s) = space.basis(k);
            m.get(i) - (i >= e && s >> i & 1 == 1) as u32
        })
        .min()
}

impl Factorizer {
    pub fn new(model: &LocalModel, q: usize) -> Result<Factorizer> {
        let ring = model_ring(model)?;
        if q == 0 || q > model.d {
            return Err(Error::InvalidArgument(format!("q = {q} outside 1..={}", model.d)));
        }
        let (d, e) = (model.d, model.e);
        // the first axis is log when e > 0 and in the support otherwise
        let axis = 0;
        let w = internal_weight(q, model.prec);
        let lhs = log_part_lhs(model, q)?;
        let products = thm1_products(&ring, d, q, w, &model.r_tilde(), model.f);
        let vectors: Vec<Vec<u32>> = products.iter().map(|f| product_vector(&ring, &lhs.space, f)).collect();
        let mut by_level: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (k, v) in vectors.iter().enumerate() {
            if let Some(l) = level_of(&lhs.space, v, axis, e) {
                by_level.entry(l).or_default().push(k);
            }
        }
        let mut levels = Vec::new();
        for l in 0..w {
            let slice = SliceSpace::exact(d, q, e, axis, l, w);
            let mut basis = IncrementalBasis::new(ring, slice.dim());
            let mut gens = Vec::new();
            let mut slices = Vec::new();
            for &k in by_level.get(&l).map(|v| v.as_slice()).unwrap_or(&[]) {
                let sv = slice.vector(&lhs.form(&vectors[k]))?;
                if basis.insert(&sv)? {
                    gens.push(k);
                    slices.push(sv);
                }
            }
            levels.push(Level { slice, gens, slices });
        }
        let solvers = (0..w).map(|_| None).collect();
        Ok(Factorizer { model: model.clone(), q, axis, weight: w, lhs, products, vectors, levels, solvers })
    }

    fn ring(&self) -> Ring {
        self.lhs.ring
    }

    /// The graded-piece solver at level `l`, built on first use.
    fn solver(&mut self, l: u32) -> Result<&GradedSolver> {
        let k = l as usize;
        if self.solvers[k].is_none() {
            let wr = self.weight.saturating_sub(l + 1);
            let s = GradedSolver::new(self.ring(), self.model.d, self.q, self.model.e, self.axis, l, wr)?;
            self.solvers[k] = Some(s);
        }
        Ok(self.solvers[k].as_ref().expect("just built"))
    }

    /// Factorization of `w`, peeling `V_axis^l` levels from the bottom.
    pub fn express(&mut self, w: &LogForm) -> Result<DlogFactorization> {
        let ring = self.ring();
        let mut v = self.lhs.space.vector(&w.truncate(self.weight))?;
        if !self.lhs.sub.contains(&v)? {
            return Err(Error::NotInLogPart("form is not in the log part of the twisted forms".into()));
        }
        let mut coeffs: BTreeMap<usize, u32> = BTreeMap::new();
        for l in 0..self.weight {
            let form = self.lhs.form(&v);
            let Some(lv) = level_of(&self.lhs.space, &v, self.axis, self.model.e) else {
                break;
            };
            if lv > l {
                continue;
            }
            // the class must be in the image of the graded map
            self.solver(l)?.solve(&form).map_err(|e| Error::NoRefinement { level: l, msg: e.to_string() })?;
            let level = &self.levels[l as usize];
            let target = level.slice.vector(&form)?;
            let x = solve(&ring, &level.slices, &target)?.ok_or_else(|| Error::NoRefinement {
                level: l,
                msg: "graded class is not spanned by generators with first slot in the bumped ideal".into(),
            })?;
            for (c, &k) in x.iter().zip(&level.gens) {
                if *c != 0 {
                    ring.axpy(&mut v, ring.neg(*c), &self.vectors[k]);
                    let e = coeffs.entry(k).or_insert(0);
                    *e = ring.add(*e, *c);
                }
            }
        }
        if v.iter().any(|&c| c != 0) {
            return Err(Error::NoRefinement { level: self.weight, msg: "residual left above the working weight".into() });
        }
        let d = self.model.d;
        let prec = self.weight;
        let mut terms = Vec::new();
        for (k, c) in coeffs {
            if c == 0 {
                continue;
            }
            let mut units: Vec<LocalizedUnit> = self.products[k].iter().map(|f| f.unit(ring, d, prec)).collect();
            let x1 = &units[0];
            units[0] = LocalizedUnit::new(x1.z.clone(), x1.u.pow(c as u64)?)?;
            terms.push(DlogTerm { units });
        }
        Ok(DlogFactorization { terms })
    }

    /// A seeded random element of the log part.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> LogForm {
        self.lhs.form(&random_element(&self.ring(), &self.lhs.sub, rng))
    }
}

/// One-shot factorization of a log form of `G^r` for `model`.
pub fn express_as_dlog_products(w: &LogForm, model: &LocalModel) -> Result<DlogFactorization> {
    Factorizer::new(model, w.degree())?.express(w)
}

/// Factors `samples` random log forms and re-evaluates each factorization.
pub fn verify_decompose(model: &LocalModel, q: usize, samples: usize, seed: u64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut rep = VerificationReport::new("decompose", ModelParams::of(model, q));
    rep.seed = Some(seed);
    let mut fz = Factorizer::new(model, q)?;
    rep.precision_trail.external = model.prec;
    rep.precision_trail.internal_weight = fz.weight;
    rep.lhs_dim = fz.lhs.dim_below(model.prec, model.e)?;
    rep.rhs_dim = rep.lhs_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lower = model.r_tilde();
    let (mut ok, mut refine_fail, mut bad_x1) = (0, 0, 0);
    for _ in 0..samples {
        let w = fz.sample(&mut rng);
        match fz.express(&w) {
            Ok(fact) => {
                if !fact.first_units_in(&lower) {
                    bad_x1 += 1;
                    continue;
                }
                let back = fact.evaluate(fz.ring(), model.d, q, fz.weight)?;
                if fz.lhs.space.vector(&back)? == fz.lhs.space.vector(&w)? {
                    ok += 1;
                } else if rep.witnesses.is_empty() {
                    rep.witness("round trip", super::thm1::form_text(&w, model.e));
                }
            }
            Err(Error::NoRefinement { level, msg }) => {
                refine_fail += 1;
                if rep.witnesses.is_empty() {
                    rep.witness(format!("no refinement at level {level}"), format!("{}: {msg}", super::thm1::form_text(&w, model.e)));
                }
            }
            Err(e) => return Err(e),
        }
    }
    rep.check("round trip", ok == samples, format!("{ok}/{samples}"));
    rep.check("first units in bumped ideal", bad_x1 == 0, format!("{bad_x1} outside"));
    rep.check("no refinement failures", refine_fail == 0, format!("{refine_fail} failures"));
    rep.settle();
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_form() {
        let m = LocalModel::simple(3, 2, 2, 3, vec![1, 1, 3], 6).unwrap();
        let ring = Ring::prime_field(3).unwrap();
        let f = express_as_dlog_products(&LogForm::zero(ring, 3, 2, 8), &m).unwrap();
        assert!(f.terms.is_empty());
        assert_eq!(f.to_text(), "0");
    }

    #[test]
    fn remark_witness() {
        let m = LocalModel::simple(3, 2, 2, 3, vec![1, 1, 3], 6).unwrap();
        let ring = Ring::prime_field(3).unwrap();
        let fs = [Factor::OnePlus(crate::series::Mono::from_slice(&[1, 1, 3]), 1), Factor::Axis(1)];
        let w = super::super::chain::product_form(ring, 3, 8, &fs).unwrap();
        let f = express_as_dlog_products(&w, &m).unwrap();
        assert!(f.first_units_in(&m.r_tilde()));
        assert_eq!(f.evaluate(ring, 3, 2, 8).unwrap(), w);
    }

    #[test]
    fn not_in_log_part() {
        let m = LocalModel::simple(3, 0, 1, 1, vec![1], 5).unwrap();
        let ring = Ring::prime_field(3).unwrap();
        // T²dT fails the log condition
        let f = LogForm::monomial(ring, 1, 6, 1, crate::series::Mono::var(0, 3), 1);
        assert!(matches!(express_as_dlog_products(&f, &m), Err(Error::NotInLogPart(_))));
    }

    #[test]
    fn random_round_trips() {
        for (p, e, f, g, r, n) in [(3, 0, 1, 1, vec![1], 5), (2, 1, 2, 2, vec![1, 1], 5), (2, 1, 1, 2, vec![1, 2], 5), (3, 0, 2, 2, vec![1, 2], 5)] {
            let m = LocalModel::simple(p, e, f, g, r, n).unwrap();
            for q in 1..=m.d {
                let rep = verify_decompose(&m, q, 20, 7).unwrap();
                assert!(rep.passed(), "{rep:#?}");
            }
        }
    }
}

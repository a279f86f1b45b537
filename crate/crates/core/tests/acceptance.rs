//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use drwlog_core::divmodel::{CoordDivisor, LocalModel};
use drwlog_core::engine::compare::comparison_subspaces_at;
use drwlog_core::engine::thm1::{appendix_b_lhs, appendix_b_rhs, internal_weight};
use drwlog_core::engine::{
    explore_report, log_part_lhs, rhs_span_thm1, verify_appendix_b, verify_cor1_divisor, verify_decompose, verify_lemma3_grid,
    verify_ses_finv, verify_strict_inclusions, verify_thm1, verify_thm2_divisor, ExploreBounds, Thm1Options, VerificationReport,
};
use drwlog_core::forms::{b_filtration, LogForm};
use drwlog_core::modlin::Ring;
use drwlog_core::series::{Mono, TruncSeries};
use drwlog_core::wittdrw::{WittPolyTable, WittVector};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Budget for the criterion 1 grid.
const THM1_BUDGET: Duration = Duration::from_secs(600);
const THM1_PRECISIONS: [u32; 4] = [5, 6, 7, 8];
const MIN_PATTERNS: usize = 12;
const DECOMPOSE_SAMPLES: usize = 100;
const DECOMPOSE_PRECISION: u32 = 5;
const LEMMA3_MAX_H: u32 = 6;
const LEMMA3_MAX_D: usize = 2;
const LEMMA3_WEIGHT: u32 = 3;
const EPSILON_SAMPLES: usize = 50;
const SES_PRECISIONS: [u32; 3] = [4, 5, 6];
const B_INF_MAX_STEPS: usize = 3;
const REMARK_PRECISION: u32 = 6;
const WITT_SAMPLES: usize = 100;
const WITT_PRECISION: u32 = 6;
const THM2_PRECISIONS: [u32; 3] = [3, 4, 5];
const THM2_MAX_MULT: u32 = 3;
/// Raise of the internal weight for the stability reruns.
const EXTRA_WEIGHT: u32 = 2;
const SEED: u64 = 0x5eed_0001;

/// `(e, f, g, r)` as a function of `p`.
struct Pattern {
    e: usize,
    f: usize,
    g: usize,
    r: fn(u32) -> Vec<u32>,
}

fn patterns() -> Vec<Pattern> {
    vec![
        Pattern { e: 0, f: 1, g: 1, r: |_| vec![1] },
        Pattern { e: 0, f: 0, g: 1, r: |p| vec![p] },
        Pattern { e: 1, f: 1, g: 1, r: |_| vec![1] },
        Pattern { e: 1, f: 1, g: 1, r: |p| vec![p] },
        Pattern { e: 1, f: 2, g: 2, r: |_| vec![1, 1] },
        Pattern { e: 0, f: 1, g: 2, r: |p| vec![1, p] },
        Pattern { e: 1, f: 1, g: 2, r: |p| vec![1, p] },
        Pattern { e: 0, f: 2, g: 2, r: |p| vec![1, p + 1] },
        Pattern { e: 1, f: 2, g: 2, r: |_| vec![0, 1] },
        Pattern { e: 2, f: 2, g: 2, r: |_| vec![1, 2] },
        Pattern { e: 1, f: 2, g: 3, r: |p| vec![1, 1, p] },
        Pattern { e: 0, f: 1, g: 2, r: |p| vec![1, p, 0] },
        Pattern { e: 1, f: 1, g: 1, r: |_| vec![1, 0, 0] },
        Pattern { e: 2, f: 2, g: 3, r: |p| vec![1, 0, p] },
        Pattern { e: 0, f: 0, g: 1, r: |p| vec![2 * p, 0, 0] },
    ]
}

/// Every `(p, pattern, q)` model at precision `n`.
fn grid(n: u32) -> Vec<(LocalModel, usize)> {
    let mut out = Vec::new();
    for p in [2, 3] {
        for pat in patterns() {
            let r = (pat.r)(p);
            let m = LocalModel::simple(p, pat.e, pat.f, pat.g, r, n).expect("pattern is a valid model");
            for q in 1..=m.d.min(2) {
                out.push((m.clone(), q));
            }
        }
    }
    out
}

fn cell(m: &LocalModel, q: usize) -> String {
    format!("p={} e={} f={} g={} r={:?} q={} N={}", m.p, m.e, m.f, m.g, m.r, q, m.prec)
}

fn first_failure(r: &VerificationReport) -> String {
    r.failures().first().map(|s| format!("{}: {}", s.name, s.detail)).unwrap_or_default()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// `T^k dT`, `1 ≤ k < n`, in the log part of `Ω^1(-Div T)` over `F_p`: brute force over all
/// coefficient vectors. A form `Σ a_k T^k dT` is in the kernel of `C⁻¹ − 1` modulo exact forms iff
/// every coefficient of `T^j dT` with `p | j + 1` in `C⁻¹ω − ω` vanishes; below `n` the only such
/// coefficients are `a_{(j+1)/p − 1} − a_j` (higher `a` are free).
fn one_variable_oracle(p: u32, n: u32) -> Vec<Vec<u32>> {
    let len = (n - 1) as usize;
    let mut sols = Vec::new();
    for code in 0..p.pow(len as u32) {
        let a: Vec<u32> = (0..len).map(|k| code / p.pow(k as u32) % p).collect();
        let coef = |k: u32| if k == 0 { 0 } else { a[(k - 1) as usize] };
        let ok = (1..n).filter(|j| (j + 1) % p == 0).all(|j| coef((j + 1) / p - 1) == coef(j));
        if ok {
            sols.push(a);
        }
    }
    sols
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let pats = patterns();
    let bump = pats.iter().any(|p| p.e < p.f);
    let regimes = pats.iter().any(|p| p.e > 0) && bump && pats.iter().any(|p| p.f < p.g);
    let mut cells = 0;
    let mut bad = Vec::new();
    for n in THM1_PRECISIONS {
        for (m, q) in grid(n) {
            let rep = verify_thm1(&m, q, &Thm1Options::default()).expect("thm1 runs");
            cells += 1;
            if !rep.passed() {
                bad.push(format!("{} ({})", cell(&m, q), first_failure(&rep)));
            }
        }
    }
    // the d = 1, p = 3, B = Div(T), N = 5 cell
    let m = LocalModel::simple(3, 0, 1, 1, vec![1], 5).expect("model");
    let rep = verify_thm1(&m, 1, &Thm1Options::default()).expect("thm1 runs");
    let lhs = log_part_lhs(&m, 1).expect("lhs");
    let rhs = rhs_span_thm1(&m, 1).expect("rhs");
    let coords = lhs.spec_coords(5, 0);
    let proj = lhs.sub.project(&coords).expect("projection");
    let sols = one_variable_oracle(3, 5);
    let position = |k: u32| coords.iter().position(|&c| lhs.space.basis(c).0 == Mono::var(0, k + 1)).expect("coordinate");
    let mut oracle_agrees = sols.len() == 27;
    for code in 0..81u32 {
        let a: Vec<u32> = (0..4).map(|k| code / 3u32.pow(k) % 3).collect();
        let mut v = vec![0; coords.len()];
        for k in 1..5 {
            v[position(k)] = a[(k - 1) as usize];
        }
        oracle_agrees &= proj.contains(&v).expect("contains") == sols.contains(&a);
    }
    let basis_ok = [1u32, 3, 4].iter().all(|&k| {
        let f = LogForm::monomial(lhs.ring, 1, internal_weight(1, 5), 1, Mono::var(0, k + 1), 1);
        lhs.contains(&f).unwrap() && rhs.contains(&f).unwrap()
    });
    let special = rep.passed() && rep.lhs_dim == 3 && rep.rhs_dim == 3 && oracle_agrees && basis_ok;
    let elapsed = t0.elapsed();
    let pass = bad.is_empty() && pats.len() >= MIN_PATTERNS && regimes && special && elapsed < THM1_BUDGET;
    let mut detail = format!(
        "{cells} cells, {} patterns, {} unequal; p=3 B=Div(T) N=5 dims {}={} basis {{T dT, T^3 dT, T^4 dT}} {}; {:.1}s of {}s",
        pats.len(),
        bad.len(),
        rep.lhs_dim,
        rep.rhs_dim,
        if oracle_agrees && basis_ok { "matches oracle" } else { "DIFFERS from oracle" },
        elapsed.as_secs_f64(),
        THM1_BUDGET.as_secs()
    );
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(pass, detail)
}

fn criterion_2() -> Outcome {
    let mut total = 0;
    let mut bad = Vec::new();
    let mut scen = 0;
    for (k, (m, q)) in grid(DECOMPOSE_PRECISION).into_iter().enumerate() {
        let rep = verify_decompose(&m, q, DECOMPOSE_SAMPLES, SEED + k as u64).expect("decompose runs");
        scen += 1;
        total += DECOMPOSE_SAMPLES;
        if !rep.passed() {
            bad.push(format!("{} ({})", cell(&m, q), first_failure(&rep)));
        }
    }
    let mut detail = format!("{scen} scenarios x {DECOMPOSE_SAMPLES} samples = {total}; {} scenarios with failures", bad.len());
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(bad.is_empty(), detail)
}

fn criterion_3() -> Outcome {
    let reps = verify_lemma3_grid(&[2, 3], LEMMA3_MAX_D, LEMMA3_MAX_H, LEMMA3_WEIGHT).expect("lemma3 grid runs");
    let mut cases = BTreeSet::new();
    for r in &reps {
        for s in r.sub_results.iter().filter(|s| s.name == "case") {
            cases.insert(s.detail.clone());
        }
    }
    let bad: Vec<&VerificationReport> = reps.iter().filter(|r| !r.passed()).collect();
    let all_cases = (1..=7).all(|c| cases.contains(&c.to_string()));
    let mut detail = format!(
        "{} cells (p in {{2,3}}, d <= {LEMMA3_MAX_D}, h <= {LEMMA3_MAX_H}), cases seen {:?}, {} failing",
        reps.len(),
        cases,
        bad.len()
    );
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {} ({})", b.scenario, first_failure(b)));
    }
    outcome(bad.is_empty() && all_cases, detail)
}

fn criterion_4() -> Outcome {
    let mut cells = 0;
    let mut eps_models = 0;
    let mut bad = Vec::new();
    for n in THM1_PRECISIONS {
        for (k, (m, q)) in grid(n).into_iter().enumerate() {
            let rep = verify_appendix_b(&m, q, EPSILON_SAMPLES, SEED + k as u64).expect("twisted span check runs");
            cells += 1;
            if rep.sub_results.iter().any(|s| s.name == "closed correction") {
                eps_models += 1;
            }
            if !rep.passed() {
                bad.push(format!("{} ({})", cell(&m, q), first_failure(&rep)));
            }
        }
    }
    let mut detail = format!("{cells} cells equal: {}; epsilon check on {eps_models} models with e < f, {EPSILON_SAMPLES} samples each", cells - bad.len());
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(bad.is_empty() && eps_models > 0, detail)
}

fn criterion_5() -> Outcome {
    let mut cells = 0;
    let mut worst = 0;
    let mut bad = Vec::new();
    for p in [2u32, 3] {
        for d in 1..=2usize {
            for e in 0..=d {
                for q in 1..=d {
                    for n in SES_PRECISIONS {
                        let rep = verify_ses_finv(p, d, e, q, n).expect("exact sequence check runs");
                        let ring = Ring::prime_field(p).unwrap();
                        let bf = b_filtration(ring, d, q, e, internal_weight(q, n), B_INF_MAX_STEPS).expect("B filtration");
                        cells += 1;
                        match bf.stable_at {
                            Some(k) => worst = worst.max(k),
                            None => bad.push(format!("p={p} d={d} e={e} q={q} N={n}: B not stable in {B_INF_MAX_STEPS} steps")),
                        }
                        if !rep.passed() {
                            bad.push(format!("p={p} d={d} e={e} q={q} N={n} ({})", first_failure(&rep)));
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!("{cells} cells; injectivity, middle exactness, surjectivity onto the augmentation ideal; B_inf reached by step {worst} (limit {B_INF_MAX_STEPS})");
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(bad.is_empty(), detail)
}

fn remark_model(n: u32) -> LocalModel {
    LocalModel::simple(3, 2, 2, 3, vec![1, 1, 3], n).expect("remark model")
}

fn criterion_6() -> Outcome {
    let m = remark_model(REMARK_PRECISION);
    let plain = verify_strict_inclusions(&m, 1).expect("compare runs");
    let log = verify_strict_inclusions(&m, 2).expect("compare runs");
    let (ex, rows) = explore_report(&ExploreBounds::default()).expect("explorer runs");
    let violations: usize = rows.iter().map(|r| r.violations.len()).sum();
    let wit = plain.witnesses.len() + log.witnesses.len();
    let pass = plain.passed() && log.passed() && wit == 4 && ex.passed() && violations == 0;
    let mut names: Vec<String> = plain.witnesses.iter().chain(&log.witnesses).map(|w| format!("{} in {}", w.form, w.side)).collect();
    names.sort();
    outcome(pass, format!("{wit}/4 witnesses on their sides [{}]; explorer: {} rows, {violations} chain violations", names.join("; "), rows.len()))
}

fn integer_ghost(p: u32, x: &[BigInt]) -> Vec<BigInt> {
    (0..x.len())
        .map(|i| (0..=i).map(|j| BigInt::from(p).pow(j as u32) * x[j].pow(p.pow((i - j) as u32))).sum())
        .collect()
}

fn eval_poly(poly: &std::collections::BTreeMap<Vec<u32>, BigInt>, vars: &[BigInt]) -> BigInt {
    poly.iter()
        .map(|(exps, c)| exps.iter().zip(vars).fold(c.clone(), |acc, (&e, v)| acc * v.pow(e)))
        .sum()
}

fn random_series(rng: &mut ChaCha8Rng, ring: Ring, d: usize) -> TruncSeries {
    let mut s = TruncSeries::zero(ring, d, WITT_PRECISION);
    for m in Mono::below(d, WITT_PRECISION) {
        if rng.gen_bool(0.4) {
            s.add_term(m, rng.gen_range(0..ring.p()));
        }
    }
    s
}

fn random_witt(rng: &mut ChaCha8Rng, ring: Ring, d: usize, n: usize) -> WittVector {
    WittVector::new((0..n).map(|_| random_series(rng, ring, d)).collect()).expect("witt vector")
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    // ghost identities against integer points, with the ghost map written out here
    let mut ghost_ok = true;
    let mut tables = 0;
    for p in [2u32, 3, 5] {
        for n in 1..=3usize {
            let t = WittPolyTable::new(p, n).expect("table");
            tables += 1;
            for _ in 0..20 {
                let x: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-6i64..7))).collect();
                let y: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-6i64..7))).collect();
                let vars: Vec<BigInt> = x.iter().chain(&y).cloned().collect();
                let s: Vec<BigInt> = t.sum.iter().map(|pl| eval_poly(pl, &vars)).collect();
                let pr: Vec<BigInt> = t.prod.iter().map(|pl| eval_poly(pl, &vars)).collect();
                let (gx, gy) = (integer_ghost(p, &x), integer_ghost(p, &y));
                let (gs, gp) = (integer_ghost(p, &s), integer_ghost(p, &pr));
                for i in 0..n {
                    ghost_ok &= gs[i] == &gx[i] + &gy[i] && gp[i] == &gx[i] * &gy[i];
                }
            }
        }
    }
    // 3·[1] in W_2(F_3): over Z, (3, x_1) with 3^3 + 3 x_1 = 3, so x_1 = -8 ≡ 1
    let ring3 = Ring::prime_field(3).unwrap();
    let x1 = (3 - 27) / 3;
    let expect = WittVector::new(vec![
        TruncSeries::zero(ring3, 1, 1),
        TruncSeries::constant(ring3, 1, 1, ring3.from_int(x1)),
    ])
    .unwrap();
    let one = WittVector::teichmuller(&TruncSeries::one(ring3, 1, 1), 2);
    let three = one.add(&one).unwrap().add(&one).unwrap();
    let v1 = WittVector::new(vec![TruncSeries::one(ring3, 1, 1)]).unwrap().verschiebung();
    let w2_ok = three == expect && three == v1;
    // FV = p, F[x] = [x^p], V(x)V(y) = pV(xy)
    let mut fv = 0;
    let mut ft = 0;
    let mut vv = 0;
    for k in 0..WITT_SAMPLES {
        let p = [2u32, 3, 5][k % 3];
        let ring = Ring::prime_field(p).unwrap();
        let d = 1 + k % 2;
        let n = 1 + k % 2;
        let x = random_witt(&mut rng, ring, d, n);
        let y = random_witt(&mut rng, ring, d, n);
        if x.verschiebung().frobenius().unwrap() == x.times(p).unwrap() {
            fv += 1;
        }
        let s = random_series(&mut rng, ring, d);
        if WittVector::teichmuller(&s, n + 1).frobenius().unwrap() == WittVector::teichmuller(&s.pow(p as u64).unwrap(), n) {
            ft += 1;
        }
        let lhs = x.verschiebung().mul(&y.verschiebung()).unwrap();
        let rhs = x.mul(&y).unwrap().verschiebung().times(p).unwrap();
        if lhs == rhs {
            vv += 1;
        }
    }
    let pass = ghost_ok && w2_ok && fv == WITT_SAMPLES && ft == WITT_SAMPLES && vv == WITT_SAMPLES;
    outcome(
        pass,
        format!(
            "ghost identities on {tables} tables: {}; 3[1] = V(1) in W_2(F_3): {w2_ok}; FV=p {fv}/{WITT_SAMPLES}, F[x]=[x^p] {ft}/{WITT_SAMPLES}, V(x)V(y)=pV(xy) {vv}/{WITT_SAMPLES}",
            if ghost_ok { "hold" } else { "FAIL" }
        ),
    )
}

fn divisors(d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v: Vec<u32>| (0..=THM2_MAX_MULT).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn criterion_8() -> Outcome {
    let mut cells = 0;
    let mut full_eq = 0;
    let mut bad = Vec::new();
    for p in [2u32, 3] {
        for d in 1..=2 {
            for r in divisors(d) {
                for n in THM2_PRECISIONS {
                    let dv = CoordDivisor(r.clone());
                    let a = verify_thm2_divisor(p, &dv, 2, 1, n).expect("thm2 runs");
                    let b = verify_cor1_divisor(p, &dv, 2, n).expect("cor1 runs");
                    cells += 1;
                    if a.sub_results.iter().any(|s| s.informational && s.name == "full level-2 equality" && s.pass) {
                        full_eq += 1;
                    }
                    for rep in [&a, &b] {
                        if !rep.passed() {
                            bad.push(format!("{} {} ({})", rep.suite, rep.scenario, first_failure(rep)));
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "{cells} cells: containment, R onto level-1 generators, p-multiplication exactness; {} failing. Informational: full level-2 equality seen in {full_eq}/{cells} (not claimed)",
        bad.len()
    );
    if let Some(b) = bad.first() {
        detail.push_str(&format!("; first: {b}"));
    }
    outcome(bad.is_empty(), detail)
}

fn appendix_b_equal(m: &LocalModel, q: usize, w: u32) -> bool {
    let l = appendix_b_lhs(m, q, w).expect("lhs");
    let r = appendix_b_rhs(m, q, w).expect("rhs");
    l.sub == r.sub
}

fn remark_verdicts(m: &LocalModel, q: usize, w: u32) -> [bool; 8] {
    let c = comparison_subspaces_at(m, q, w).expect("comparison");
    [
        c.ours.contains_subspace(&c.gk).unwrap(),
        c.jsz.contains_subspace(&c.ours).unwrap(),
        c.ours_log.contains_subspace(&c.gk_log).unwrap(),
        c.jsz_log.contains_subspace(&c.ours_log).unwrap(),
        c.gk != c.ours,
        c.ours != c.jsz,
        c.gk_log != c.ours_log,
        c.ours_log != c.jsz_log,
    ]
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let mut flips = Vec::new();
    for n in THM1_PRECISIONS {
        for (m, q) in grid(n) {
            let base = verify_thm1(&m, q, &Thm1Options::default()).unwrap().passed();
            let up = LocalModel { prec: n + 1, ..m.clone() };
            let at_n1 = verify_thm1(&up, q, &Thm1Options::default()).unwrap().passed();
            let wide = verify_thm1(&m, q, &Thm1Options { extra_weight: EXTRA_WEIGHT, ..Default::default() }).unwrap().passed();
            let w = internal_weight(q, n);
            let b0 = appendix_b_equal(&m, q, w);
            let b1 = appendix_b_equal(&up, q, internal_weight(q, n + 1));
            let b2 = appendix_b_equal(&m, q, w + EXTRA_WEIGHT);
            checked += 2;
            if !(base == at_n1 && base == wide) {
                flips.push(format!("thm1 {}", cell(&m, q)));
            }
            if !(b0 == b1 && b0 == b2) {
                flips.push(format!("appendixB {}", cell(&m, q)));
            }
        }
    }
    let m = remark_model(REMARK_PRECISION);
    let up = remark_model(REMARK_PRECISION + 1);
    for q in 1..=2 {
        let w = internal_weight(q, REMARK_PRECISION);
        let v0 = remark_verdicts(&m, q, w);
        let v1 = remark_verdicts(&up, q, internal_weight(q, REMARK_PRECISION + 1));
        let v2 = remark_verdicts(&m, q, w + EXTRA_WEIGHT);
        let r0 = verify_strict_inclusions(&m, q).unwrap();
        let r1 = verify_strict_inclusions(&up, q).unwrap();
        checked += 1;
        if v0 != v1 || v0 != v2 || r0.passed() != r1.passed() || r0.witnesses != r1.witnesses {
            flips.push(format!("compare q={q}"));
        }
    }
    let mut detail = format!("{checked} verdicts rerun at N+1 and at internal weight +{EXTRA_WEIGHT}; {} flips", flips.len());
    if let Some(f) = flips.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome(flips.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("log part equals dlog span", criterion_1),
        ("decomposition round trip", criterion_2),
        ("p-multiple case lemma", criterion_3),
        ("twisted dlog span and epsilon check", criterion_4),
        ("F-inverse exact sequence", criterion_5),
        ("filtration separations", criterion_6),
        ("Witt layer", criterion_7),
        ("level-2 generation and p-multiplication sequence", criterion_8),
        ("stability under N+1 and extra weight", criterion_9),
    ];
    let filter: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = k + 1;
        if filter.as_ref().is_some_and(|v| !v.contains(&id)) {
            continue;
        }
        let t0 = Instant::now();
        let o = f();
        all &= o.pass;
        println!("criterion {id} {} {name}: {} [{:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, t0.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use serde::{Deserialize, Serialize};

use crate::divmodel::LocalModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub d: usize,
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub r: Vec<u32>,
    pub q: usize,
    pub precision: u32,
}

impl ModelParams {
    pub fn of(model: &LocalModel, q: usize) -> ModelParams {
        ModelParams {
            p: model.p,
            m: model.m,
            n: model.n,
            d: model.d,
            e: model.e,
            f: model.f,
            g: model.g,
            r: model.r.clone(),
            q,
            precision: model.prec,
        }
    }

    /// Parameters of an untwisted model (`B = 0`), which [`LocalModel`] does not represent.
    pub fn untwisted(p: u32, d: usize, e: usize, q: usize, precision: u32) -> ModelParams {
        ModelParams { p, m: 1, n: 1, d, e, f: e, g: e, r: vec![0; d], q, precision }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Which containment the vector breaks, e.g. `lhs\rhs`.
    pub side: String,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubResult {
    pub name: String,
    pub pass: bool,
    /// Recorded but not part of the verdict.
    #[serde(default)]
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rerun {
    pub external: u32,
    pub internal_weight: u32,
    pub equal: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionTrail {
    /// Coefficient-degree precision `N`.
    pub external: u32,
    /// Weight bound used for the computation.
    pub internal_weight: u32,
    #[serde(default)]
    pub reruns: Vec<Rerun>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub scenario: String,
    pub suite: String,
    pub params: ModelParams,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub equal: bool,
    pub witnesses: Vec<Witness>,
    pub sub_results: Vec<SubResult>,
    pub seed: Option<u64>,
    pub precision_trail: PrecisionTrail,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: &str, params: ModelParams) -> VerificationReport {
        VerificationReport {
            schema: 1,
            scenario: String::new(),
            suite: suite.into(),
            params,
            lhs_dim: 0,
            rhs_dim: 0,
            equal: false,
            witnesses: Vec::new(),
            sub_results: Vec::new(),
            seed: None,
            precision_trail: PrecisionTrail::default(),
            elapsed_ms: 0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.sub_results.push(SubResult { name: name.into(), pass, informational: false, detail: detail.into() });
        pass
    }

    pub fn info(&mut self, name: impl Into<String>, value: bool, detail: impl Into<String>) {
        self.sub_results.push(SubResult { name: name.into(), pass: value, informational: true, detail: detail.into() });
    }

    pub fn witness(&mut self, side: impl Into<String>, form: impl Into<String>) {
        self.witnesses.push(Witness { side: side.into(), form: form.into() });
    }

    /// Sets `equal` to the conjunction of the non-informational sub-results.
    pub fn settle(&mut self) {
        self.equal = self.sub_results.iter().all(|s| s.pass || s.informational);
    }

    pub fn passed(&self) -> bool {
        self.equal && self.sub_results.iter().all(|s| s.pass || s.informational)
    }

    pub fn failures(&self) -> Vec<&SubResult> {
        self.sub_results.iter().filter(|s| !s.pass && !s.informational).collect()
    }
}

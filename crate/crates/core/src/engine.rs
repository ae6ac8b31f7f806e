//! The level-lowering recursion for `[M_Lambda : L_N]` over `g_n`.
//!
//! At level `n` the top component is moved by a minimal twisting word `w`
//! into standard Levi form `J'`. After the `n`-dot transport the top
//! component is central for the Levi `l_{J'}` and is dropped, and
//!
//! ```text
//! [M_Lambda : L_N] = sum_alpha p_{J'}(alpha) [M_{(lambda'_0 - alpha, ...)} : L_{N'}]
//! ```
//!
//! one level down inside `l_{J'}`. Level zero is a KL polynomial at `q = 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{cone, PartitionCache};
use crate::error::{Error, Result};
use crate::kl::{base_multiplicity, BaseOutcome, KlCache};
use crate::root_datum::{LeviDatum, RootDatum, RootVector, Weight};
use crate::trunc_weights::{same_block, shifted_dot, twisting_candidates_in, TruncatedWeight};

/// Which minimal-length twisting word to use when several exist.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    First,
    Last,
}

/// The `rho`-shift used to transport weights along the twisting word.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Transport {
    /// `w(lambda_0 + (n+1) rho) - (n+1) rho`, the weights of twisted Vermas.
    #[default]
    Twisting,
    /// `w(lambda_0 + n rho) - n rho`, the literal `n`-dot action. Kept for
    /// comparison; it disagrees with explicit modules in some blocks.
    Literal,
}

impl Transport {
    fn shift(self, level: usize) -> usize {
        match self {
            Transport::Twisting => level + 1,
            Transport::Literal => level,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MultiplicityQuery {
    /// Simple roots (0-based) of the Levi to compute in; `None` for all of `g`.
    pub levi: Option<Vec<usize>>,
    pub lambda: TruncatedWeight,
    pub nu: TruncatedWeight,
}

impl MultiplicityQuery {
    pub fn new(lambda: TruncatedWeight, nu: TruncatedWeight) -> Self {
        MultiplicityQuery { levi: None, lambda, nu }
    }

    pub fn level(&self) -> usize {
        self.lambda.level()
    }
}

/// One node of the audit trace. Simple-root indices and words are 1-based.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityTrace {
    pub levi: Vec<usize>,
    pub level: usize,
    pub lambda: TruncatedWeight,
    pub nu: TruncatedWeight,
    pub value: u64,
    pub step: Step,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// Tails differ: the two weights live in different Jordan blocks.
    DifferentBlock { note: String },
    /// `lambda_0 - nu_0` is not a nonnegative integral combination of the Levi's simple roots.
    NotBelow,
    Equal,
    Base { outcome: BaseOutcome },
    Reduce(Box<Reduction>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Reduction {
    /// Twisting word `w`, rightmost letter applied first.
    pub word: Vec<usize>,
    pub condition_b: bool,
    /// Standard Levi `J'` of `w(lambda_n)` inside the current Levi.
    pub twisted_levi: Vec<usize>,
    pub twisted_lambda: TruncatedWeight,
    pub twisted_nu: TruncatedWeight,
    pub note: String,
    /// `lambda'_0 - nu'_0` over the simple roots; every `alpha` is bounded by it.
    pub bound: RootVector,
    pub contributions: Vec<Contribution>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Contribution {
    pub alpha: RootVector,
    pub partition: u64,
    pub value: u64,
    /// Present when the term is nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub child: Option<Arc<MultiplicityTrace>>,
}

impl MultiplicityTrace {
    /// Recomputes every reduction level from its recorded terms.
    pub fn verify(&self) -> bool {
        match &self.step {
            Step::DifferentBlock { .. } | Step::NotBelow => self.value == 0,
            Step::Equal => self.value == 1,
            Step::Base { outcome } => self.value == outcome.value(),
            Step::Reduce(r) => {
                let bounded = r.contributions.iter().all(|c| {
                    c.alpha.iter().zip(&r.bound).all(|(a, b)| 0 <= *a && a <= b)
                });
                let sum: u64 = r.contributions.iter().map(|c| c.partition * c.value).sum();
                let children = r.contributions.iter().all(|c| match &c.child {
                    Some(t) => t.value == c.value && t.verify(),
                    None => c.value == 0 || c.partition == 0,
                });
                bounded && children && sum == self.value
            }
        }
    }

    /// The first reduction node along the trace, if any.
    pub fn reduction(&self) -> Option<&Reduction> {
        match &self.step {
            Step::Reduce(r) => Some(r),
            _ => None,
        }
    }
}

/// `(base - beta, value)` pairs with nonzero value.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityTable {
    pub lambda: TruncatedWeight,
    pub depth: usize,
    pub entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub beta: RootVector,
    pub nu0: Weight,
    pub value: u64,
}

type MemoKey = (Vec<usize>, TruncatedWeight, TruncatedWeight);

pub struct Engine {
    datum: Arc<RootDatum>,
    kl: Arc<KlCache>,
    tie_break: TieBreak,
    transport: Transport,
    memo: Mutex<HashMap<MemoKey, Arc<MultiplicityTrace>>>,
    levis: Mutex<HashMap<Vec<usize>, Arc<LeviDatum>>>,
    partitions: Mutex<HashMap<Vec<usize>, Arc<PartitionCache>>>,
}

impl Engine {
    pub fn new(datum: Arc<RootDatum>) -> Self {
        Self::with_cache(datum, Arc::new(KlCache::new()))
    }

    pub fn with_cache(datum: Arc<RootDatum>, kl: Arc<KlCache>) -> Self {
        Engine {
            datum,
            kl,
            tie_break: TieBreak::First,
            transport: Transport::Twisting,
            memo: Mutex::new(HashMap::new()),
            levis: Mutex::new(HashMap::new()),
            partitions: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn with_transport(mut self, transport: Transport) -> Self {
        self.transport = transport;
        self
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn kl_cache(&self) -> &Arc<KlCache> {
        &self.kl
    }

    pub fn multiplicity(&self, lambda: &TruncatedWeight, nu: &TruncatedWeight) -> Result<u64> {
        Ok(self.traced(lambda, nu)?.value)
    }

    pub fn traced(&self, lambda: &TruncatedWeight, nu: &TruncatedWeight) -> Result<Arc<MultiplicityTrace>> {
        let all: Vec<usize> = (0..self.datum.rank()).collect();
        self.check(lambda, nu)?;
        self.compute(&all, lambda, nu)
    }

    pub fn run(&self, query: &MultiplicityQuery) -> Result<(u64, Arc<MultiplicityTrace>)> {
        self.check(&query.lambda, &query.nu)?;
        let levi = match &query.levi {
            Some(j) => self.levi(j)?.simple().to_vec(),
            None => (0..self.datum.rank()).collect(),
        };
        let trace = self.compute(&levi, &query.lambda, &query.nu)?;
        Ok((trace.value, trace))
    }

    /// All `[M_Lambda : L_{(lambda_0 - beta, ...)}]` with `ht beta <= depth`.
    pub fn multiplicity_table(&self, lambda: &TruncatedWeight, depth: usize) -> Result<MultiplicityTable> {
        let all: Vec<usize> = (0..self.datum.rank()).collect();
        let betas = cone(self.datum.rank(), &all, depth);
        let values: Vec<Result<(RootVector, Weight, u64)>> = betas
            .par_iter()
            .map(|b| {
                let nu0 = lambda.head() - &self.datum.root_to_weight(&b.0);
                let v = self.multiplicity(lambda, &lambda.with_head(nu0.clone()))?;
                Ok((b.0.clone(), nu0, v))
            })
            .collect();
        let mut entries = Vec::new();
        for r in values {
            let (beta, nu0, value) = r?;
            if value > 0 {
                entries.push(TableEntry { beta, nu0, value });
            }
        }
        Ok(MultiplicityTable { lambda: lambda.clone(), depth, entries })
    }

    fn check(&self, lambda: &TruncatedWeight, nu: &TruncatedWeight) -> Result<()> {
        let r = self.datum.rank();
        for t in [lambda, nu] {
            if t.rank() != r {
                return Err(Error::Dimension { expected: r, got: t.rank() });
            }
        }
        if lambda.level() != nu.level() {
            return Err(Error::Dimension { expected: lambda.level() + 1, got: nu.level() + 1 });
        }
        Ok(())
    }

    fn levi(&self, j: &[usize]) -> Result<Arc<LeviDatum>> {
        if let Some(l) = self.levis.lock().unwrap().get(j) {
            return Ok(l.clone());
        }
        let l = Arc::new(LeviDatum::new(&self.datum, j)?);
        self.levis.lock().unwrap().insert(j.to_vec(), l.clone());
        Ok(l)
    }

    fn partition(&self, j: &[usize]) -> Result<Arc<PartitionCache>> {
        if let Some(p) = self.partitions.lock().unwrap().get(j) {
            return Ok(p.clone());
        }
        let p = Arc::new(PartitionCache::for_levi(&self.datum, &*self.levi(j)?));
        self.partitions.lock().unwrap().insert(j.to_vec(), p.clone());
        Ok(p)
    }

    fn compute(&self, j: &[usize], lambda: &TruncatedWeight, nu: &TruncatedWeight) -> Result<Arc<MultiplicityTrace>> {
        let key = (j.to_vec(), lambda.clone(), nu.clone());
        if let Some(t) = self.memo.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let (value, step) = self.step(j, lambda, nu)?;
        let trace = Arc::new(MultiplicityTrace {
            levi: j.iter().map(|i| i + 1).collect(),
            level: lambda.level(),
            lambda: lambda.clone(),
            nu: nu.clone(),
            value,
            step,
        });
        self.memo.lock().unwrap().insert(key, trace.clone());
        Ok(trace)
    }

    fn step(&self, j: &[usize], lambda: &TruncatedWeight, nu: &TruncatedWeight) -> Result<(u64, Step)> {
        if !same_block(lambda, nu) {
            return Ok((0, Step::DifferentBlock { note: "different Jordan block".into() }));
        }
        let levi = self.levi(j)?;
        if !self.datum.dominance_leq(nu.head(), lambda.head(), &levi) {
            return Ok((0, Step::NotBelow));
        }
        if lambda == nu {
            return Ok((1, Step::Equal));
        }
        if lambda.level() == 0 {
            let outcome = base_multiplicity(&self.datum, &levi, lambda.head(), nu.head(), &self.kl)?;
            return Ok((outcome.value(), Step::Base { outcome }));
        }

        let mut candidates = twisting_candidates_in(&self.datum, &levi, lambda.top())?;
        let tw = match self.tie_break {
            TieBreak::First => candidates.swap_remove(0),
            TieBreak::Last => candidates.pop().expect("at least one candidate"),
        };
        let k = self.transport.shift(lambda.level());
        let lam_t = shifted_dot(&self.datum, &tw.w, lambda, k);
        let nu_t = shifted_dot(&self.datum, &tw.w, nu, k);
        let lower_lam = lam_t.drop_top()?;
        let lower_nu = nu_t.drop_top()?;
        let j2 = tw.levi.simple().to_vec();
        let note = format!(
            "top component {} is central for the Levi {:?}; shifted away and dropped",
            lam_t.top(),
            j2.iter().map(|i| i + 1).collect::<Vec<_>>()
        );

        let r = self.datum.rank();
        let diff = lam_t.head() - nu_t.head();
        let bound = self.datum.integral_root_coords(&diff);
        let in_cone = bound
            .as_ref()
            .is_some_and(|b| b.iter().enumerate().all(|(i, &c)| c >= 0 && (c == 0 || j2.contains(&i))));
        let bound = bound.unwrap_or_else(|| vec![0; r]);
        let mut contributions = Vec::new();
        let mut value = 0u64;
        if in_cone {
            let p = self.partition(&j2)?;
            for alpha in box_below(&bound, &j2) {
                let pa = p.count(&alpha)?;
                if pa == 0 {
                    continue;
                }
                let head = lam_t.head() - &self.datum.root_to_weight(&alpha);
                let child = self.compute(&j2, &lower_lam.with_head(head), &lower_nu)?;
                value += pa * child.value;
                contributions.push(Contribution {
                    alpha,
                    partition: pa,
                    value: child.value,
                    child: (child.value > 0).then_some(child),
                });
            }
        }
        let reduction = Reduction {
            word: tw.w.word_one_based(),
            condition_b: tw.condition_b,
            twisted_levi: j2.iter().map(|i| i + 1).collect(),
            twisted_lambda: lam_t,
            twisted_nu: nu_t,
            note,
            bound,
            contributions,
        };
        Ok((value, Step::Reduce(Box::new(reduction))))
    }
}

/// All `alpha` with `0 <= alpha <= bound` coordinatewise, supported on `support`.
fn box_below(bound: &[i64], support: &[usize]) -> Vec<RootVector> {
    let mut out = vec![vec![0; bound.len()]];
    for &i in support {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=bound[i]).map(move |c| {
                    let mut w = v.clone();
                    w[i] = c;
                    w
                })
            })
            .collect();
    }
    out
}

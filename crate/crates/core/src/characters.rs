//! Kostant's partition function and depth-truncated formal characters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::q;
use crate::root_datum::{height, LeviDatum, RootDatum, RootVector, Weight};
use crate::trunc_weights::{BlockLabel, TruncatedWeight};

/// A vector in `Z_{>=0} Delta`, ordered by height and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Beta(pub RootVector);

impl Beta {
    pub fn zero(rank: usize) -> Self {
        Beta(vec![0; rank])
    }

    pub fn height(&self) -> i64 {
        height(&self.0)
    }

    pub fn plus(&self, other: &Beta) -> Beta {
        Beta(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Beta {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height().cmp(&other.height()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Beta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All `beta` supported on `support` with height at most `depth`, in order.
pub fn cone(rank: usize, support: &[usize], depth: usize) -> Vec<Beta> {
    fn rec(support: &[usize], left: usize, cur: &mut Vec<i64>, out: &mut Vec<Beta>) {
        match support.split_first() {
            None => out.push(Beta(cur.clone())),
            Some((&i, rest)) => {
                for k in 0..=left {
                    cur[i] = k as i64;
                    rec(rest, left - k, cur, out);
                }
                cur[i] = 0;
            }
        }
    }
    let mut out = Vec::new();
    rec(support, depth, &mut vec![0; rank], &mut out);
    out.sort();
    out
}

/// Memoized counts of multisets of a fixed list of positive roots.
#[derive(Debug)]
pub struct PartitionCache {
    roots: Vec<RootVector>,
    memo: Mutex<HashMap<RootVector, u64>>,
}

impl PartitionCache {
    /// Kostant's partition function of a datum, in its own simple coordinates.
    pub fn for_datum(datum: &RootDatum) -> Self {
        Self::from_roots(datum.positive_roots().to_vec())
    }

    /// Partition function of a Levi's positive roots, in ambient coordinates.
    pub fn for_levi(datum: &RootDatum, levi: &LeviDatum) -> Self {
        Self::from_roots(levi.root_indices().iter().map(|&k| datum.positive_roots()[k].clone()).collect())
    }

    /// Each root repeated `colors` times: the PBW monomial count of `n+1`
    /// copies of the lowering subalgebra when `colors = n + 1`.
    pub fn colored(roots: &[RootVector], colors: usize) -> Self {
        Self::from_roots(roots.iter().flat_map(|r| std::iter::repeat_n(r.clone(), colors)).collect())
    }

    pub fn from_roots(roots: Vec<RootVector>) -> Self {
        PartitionCache { roots, memo: Mutex::new(HashMap::new()) }
    }

    pub fn count(&self, beta: &[i64]) -> Result<u64> {
        if beta.iter().any(|&c| c < 0) {
            return Err(Error::Contract(format!("partition function of a non-positive vector {beta:?}")));
        }
        if let Some(&v) = self.memo.lock().unwrap().get(beta) {
            return Ok(v);
        }
        let mut local = HashMap::new();
        let v = self.ordered(beta, 0, &mut local);
        self.memo.lock().unwrap().insert(beta.to_vec(), v);
        Ok(v)
    }

    /// Multisets drawn from `roots[from..]`.
    fn ordered(&self, beta: &[i64], from: usize, memo: &mut HashMap<(RootVector, usize), u64>) -> u64 {
        if beta.iter().all(|&c| c == 0) {
            return 1;
        }
        if from == self.roots.len() {
            return 0;
        }
        let key = (beta.to_vec(), from);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = self.ordered(beta, from + 1, memo);
        let rest: RootVector = beta.iter().zip(&self.roots[from]).map(|(a, b)| a - b).collect();
        if rest.iter().all(|&c| c >= 0) {
            total += self.ordered(&rest, from, memo);
        }
        memo.insert(key, total);
        total
    }
}

pub fn kostant_partition(datum: &RootDatum, beta: &[i64]) -> Result<u64> {
    PartitionCache::for_datum(datum).count(beta)
}

/// A character truncated to heights `<= depth` below `base`; the entry at
/// `beta` is the dimension of the weight space `base - beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCharacter {
    pub base: Weight,
    pub depth: usize,
    table: BTreeMap<Beta, u64>,
}

impl FormalCharacter {
    pub fn new(base: Weight, depth: usize) -> Self {
        FormalCharacter { base, depth, table: BTreeMap::new() }
    }

    pub fn set(&mut self, beta: Beta, value: u64) {
        if beta.height() as usize > self.depth {
            return;
        }
        if value == 0 {
            self.table.remove(&beta);
        } else {
            self.table.insert(beta, value);
        }
    }

    pub fn coefficient(&self, beta: &[i64]) -> u64 {
        self.table.get(&Beta(beta.to_vec())).copied().unwrap_or(0)
    }

    /// Nonzero entries in height-then-lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Beta, u64)> {
        self.table.iter().map(|(b, &v)| (b, v))
    }

    pub fn truncate(&self, depth: usize) -> FormalCharacter {
        let table = self.table.iter().filter(|(b, _)| b.height() as usize <= depth).map(|(b, &v)| (b.clone(), v)).collect();
        FormalCharacter { base: self.base.clone(), depth: depth.min(self.depth), table }
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    base: Weight,
    depth: usize,
    entries: Vec<(RootVector, u64)>,
}

impl Serialize for FormalCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson {
            base: self.base.clone(),
            depth: self.depth,
            entries: self.table.iter().map(|(b, &v)| (b.0.clone(), v)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(d)?;
        let mut ch = FormalCharacter::new(raw.base, raw.depth);
        for (b, v) in raw.entries {
            ch.set(Beta(b), v);
        }
        Ok(ch)
    }
}

/// Verma character over the Levi `levi` (use [`LeviDatum::full`] for `g`),
/// computed by peeling one level at a time:
/// `ch M(g_n) = sum_gamma p(gamma) ch M(g_{n-1})` shifted by `gamma`.
pub fn verma_character(datum: &RootDatum, levi: &LeviDatum, lambda: &TruncatedWeight, depth: usize) -> Result<FormalCharacter> {
    let r = datum.rank();
    let p = PartitionCache::for_levi(datum, levi);
    let window = cone(r, levi.simple(), depth);
    let mut layer: BTreeMap<Beta, u64> = BTreeMap::new();
    for b in &window {
        layer.insert(b.clone(), p.count(&b.0)?);
    }
    for _ in 0..lambda.level() {
        let mut next = BTreeMap::new();
        for b in &window {
            let mut total = 0;
            for g in &window {
                let rest: RootVector = b.0.iter().zip(&g.0).map(|(x, y)| x - y).collect();
                if rest.iter().all(|&c| c >= 0) {
                    total += p.count(&g.0)? * layer[&Beta(rest)];
                }
            }
            next.insert(b.clone(), total);
        }
        layer = next;
    }
    let mut ch = FormalCharacter::new(lambda.head().clone(), depth);
    for (b, v) in layer {
        ch.set(b, v);
    }
    Ok(ch)
}

/// Verma character by direct enumeration of PBW monomials in the lowering
/// operators `f_{gamma,i}`, `gamma` a positive Levi root and `0 <= i <= n`.
pub fn verma_character_by_monomials(
    datum: &RootDatum,
    levi: &LeviDatum,
    lambda: &TruncatedWeight,
    depth: usize,
) -> FormalCharacter {
    let generators: Vec<&RootVector> = levi
        .root_indices()
        .iter()
        .flat_map(|&k| std::iter::repeat_n(&datum.positive_roots()[k], lambda.level() + 1))
        .collect();
    let mut counts: HashMap<RootVector, u64> = HashMap::new();
    fn walk(gens: &[&RootVector], from: usize, cur: &mut RootVector, left: i64, counts: &mut HashMap<RootVector, u64>) {
        *counts.entry(cur.clone()).or_insert(0) += 1;
        for (k, g) in gens.iter().enumerate().skip(from) {
            let h = height(g);
            if h > left {
                continue;
            }
            cur.iter_mut().zip(g.iter()).for_each(|(c, x)| *c += x);
            walk(gens, k, cur, left - h, counts);
            cur.iter_mut().zip(g.iter()).for_each(|(c, x)| *c -= x);
        }
    }
    walk(&generators, 0, &mut vec![0; datum.rank()], depth as i64, &mut counts);
    let mut ch = FormalCharacter::new(lambda.head().clone(), depth);
    for (b, v) in counts {
        ch.set(Beta(b), v);
    }
    ch
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionEntry {
    pub weight: Weight,
    pub multiplicity: u64,
}

/// Multiplicities of `L_{(base - beta, mu)}` in a character, keyed by `beta`.
#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub base: Weight,
    pub block: BlockLabel,
    pub depth: usize,
    pub entries: BTreeMap<Beta, DecompositionEntry>,
}

impl Decomposition {
    pub fn multiplicity(&self, beta: &[i64]) -> u64 {
        self.entries.get(&Beta(beta.to_vec())).map_or(0, |e| e.multiplicity)
    }

    pub fn multiplicity_of(&self, datum: &RootDatum, nu0: &Weight) -> u64 {
        match datum.integral_root_coords(&(&self.base - nu0)) {
            Some(beta) if beta.iter().all(|&c| c >= 0) => self.multiplicity(&beta),
            _ => 0,
        }
    }
}

/// Writes `ch` as a sum of simple characters `L_{(eta, mu)}`, greedily from
/// the top. `simple` returns the simple character at the requested depth.
pub fn decompose_in_block<F>(datum: &RootDatum, ch: &FormalCharacter, mu: &BlockLabel, simple: F) -> Result<Decomposition>
where
    F: FnMut(&TruncatedWeight, usize) -> Result<FormalCharacter>,
{
    decompose_ordered(datum, ch, mu, simple, |_| {})
}

/// As [`decompose_in_block`], with a hook that may permute the visiting
/// order among weights of equal height.
pub fn decompose_ordered<F, O>(
    datum: &RootDatum,
    ch: &FormalCharacter,
    mu: &BlockLabel,
    mut simple: F,
    mut reorder: O,
) -> Result<Decomposition>
where
    F: FnMut(&TruncatedWeight, usize) -> Result<FormalCharacter>,
    O: FnMut(&mut Vec<Beta>),
{
    let mut residual: BTreeMap<Beta, i128> = ch.entries().map(|(b, v)| (b.clone(), v as i128)).collect();
    let mut order: Vec<Beta> = residual.keys().cloned().collect();
    reorder(&mut order);
    order.sort_by_key(Beta::height);
    let mut entries = BTreeMap::new();
    for beta in order {
        let r = residual.get(&beta).copied().unwrap_or(0);
        if r < 0 {
            return Err(Error::Inconsistent { beta: beta.0, residual: r });
        }
        if r == 0 {
            continue;
        }
        let eta = &ch.base - &datum.root_to_weight(&beta.0);
        let remaining = ch.depth - beta.height() as usize;
        let simple_ch = simple(&TruncatedWeight::from_block(eta.clone(), mu), remaining)?;
        if simple_ch.coefficient(&vec![0; datum.rank()]) != 1 {
            return Err(Error::Internal(format!("simple character of {eta} lacks a highest weight line")));
        }
        for (gamma, c) in simple_ch.entries() {
            if gamma.height() as usize > remaining {
                continue;
            }
            *residual.entry(beta.plus(gamma)).or_insert(0) -= r * c as i128;
        }
        entries.insert(beta, DecompositionEntry { weight: eta, multiplicity: r as u64 });
    }
    if let Some((b, &v)) = residual.iter().find(|(_, &v)| v != 0) {
        return Err(Error::Inconsistent { beta: b.0.clone(), residual: v });
    }
    Ok(Decomposition { base: ch.base.clone(), block: mu.clone(), depth: ch.depth, entries })
}

/// Character of the simple `g`-module `L(m)` for `sl2`, `m` in fundamental
/// coordinates; used for small closed-form checks.
pub fn sl2_simple_character(m: &Weight, depth: usize) -> FormalCharacter {
    let mut ch = FormalCharacter::new(m.clone(), depth);
    let top = m.0[0];
    let finite = top.is_integer() && top >= q(0);
    for k in 0..=depth {
        if !finite || q(k as i128) <= top {
            ch.set(Beta(vec![k as i64]), 1);
        }
    }
    ch
}

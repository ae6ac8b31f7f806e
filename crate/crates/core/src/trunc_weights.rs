//! Truncated weights `(lambda_0, ..., lambda_n)`, Jordan block labels,
//! singular subsystems, standard Levi detection, the minimal twisting word,
//! the n-dot action and the linkage test.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::q;
use crate::root_datum::{height, LeviDatum, RootDatum, RootVector, Weight, WeylElement};

/// A weight of `h_n`: one `h`-weight per power of `t`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedWeight {
    components: Vec<Weight>,
}

impl TruncatedWeight {
    pub fn new(components: Vec<Weight>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Contract("a truncated weight needs at least one component".into()));
        };
        let r = first.rank();
        if let Some(bad) = components.iter().find(|c| c.rank() != r) {
            return Err(Error::Dimension { expected: r, got: bad.rank() });
        }
        Ok(TruncatedWeight { components })
    }

    /// Validates the component count and rank against a datum and level.
    pub fn checked(components: Vec<Weight>, datum: &RootDatum, n: usize) -> Result<Self> {
        if components.len() != n + 1 {
            return Err(Error::Dimension { expected: n + 1, got: components.len() });
        }
        let w = Self::new(components)?;
        if w.rank() != datum.rank() {
            return Err(Error::Dimension { expected: datum.rank(), got: w.rank() });
        }
        Ok(w)
    }

    pub fn from_ints(components: &[&[i64]]) -> Self {
        Self::new(components.iter().map(|c| Weight::from_ints(c)).collect()).expect("non-empty")
    }

    pub fn level(&self) -> usize {
        self.components.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.components[0].rank()
    }

    pub fn components(&self) -> &[Weight] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Weight {
        &self.components[i]
    }

    pub fn head(&self) -> &Weight {
        &self.components[0]
    }

    /// `lambda_n`.
    pub fn top(&self) -> &Weight {
        self.components.last().expect("non-empty")
    }

    pub fn block(&self) -> BlockLabel {
        BlockLabel { tail: self.components[1..].to_vec() }
    }

    /// Same weight with component 0 replaced.
    pub fn with_head(&self, head: Weight) -> Self {
        let mut components = self.components.clone();
        components[0] = head;
        TruncatedWeight { components }
    }

    /// `lambda_{<= n-1}`: drops the last component.
    pub fn drop_top(&self) -> Result<Self> {
        if self.level() == 0 {
            return Err(Error::Contract("cannot lower the level below zero".into()));
        }
        Ok(TruncatedWeight { components: self.components[..self.components.len() - 1].to_vec() })
    }

    pub fn from_block(head: Weight, block: &BlockLabel) -> Self {
        let mut components = vec![head];
        components.extend(block.tail.iter().cloned());
        TruncatedWeight { components }
    }
}

impl fmt::Debug for TruncatedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// The Jordan block label `(lambda_1, ..., lambda_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockLabel {
    pub tail: Vec<Weight>,
}

impl BlockLabel {
    pub fn level(&self) -> usize {
        self.tail.len()
    }
}

/// `Phi_nu`: all roots (both signs) whose coroot pairs to zero with `nu`.
pub fn singular_roots(datum: &RootDatum, nu: &Weight) -> Vec<RootVector> {
    let pos: Vec<RootVector> = singular_positive(datum, &LeviDatum::full(datum), nu)
        .into_iter()
        .map(|k| datum.positive_roots()[k].clone())
        .collect();
    let mut all = pos.clone();
    all.extend(pos.iter().map(|b| b.iter().map(|x| -x).collect::<RootVector>()));
    all
}

/// Ambient indices of the Levi's positive roots that are singular for `nu`.
pub fn singular_positive(datum: &RootDatum, levi: &LeviDatum, nu: &Weight) -> Vec<usize> {
    levi.root_indices().iter().copied().filter(|&k| datum.pairing_positive(nu, k).is_zero()).collect()
}

/// The standard Levi whose roots are exactly `roots`, if there is one.
pub fn standard_levi(datum: &RootDatum, roots: &[RootVector]) -> Option<LeviDatum> {
    let positive: Vec<usize> = roots.iter().filter_map(|b| datum.root_index(b)).collect();
    standard_levi_indices(datum, &positive)
}

fn standard_levi_indices(datum: &RootDatum, positive: &[usize]) -> Option<LeviDatum> {
    let roots = datum.positive_roots();
    let j: Vec<usize> = positive
        .iter()
        .filter(|&&k| height(&roots[k]) == 1)
        .filter_map(|&k| roots[k].iter().position(|&c| c == 1))
        .collect();
    let levi = LeviDatum::new(datum, &j).ok()?;
    let mine: HashSet<usize> = positive.iter().copied().collect();
    let theirs: HashSet<usize> = levi.root_indices().iter().copied().collect();
    (mine == theirs).then_some(levi)
}

/// A minimal-length Weyl group element moving `mu` into standard Levi form.
#[derive(Debug)]
pub struct TwistingWord {
    pub w: WeylElement,
    pub levi: LeviDatum,
    /// Whether `((s_{a_{i-1}} ... s_{a_1}) mu)(h_{a_i}) != 0` held at every step.
    pub condition_b: bool,
}

pub fn find_twisting_word(datum: &RootDatum, mu: &Weight) -> Result<TwistingWord> {
    find_twisting_word_in(datum, &LeviDatum::full(datum), mu)
}

/// Breadth-first search over the Levi's Weyl group in length order, ties
/// broken by lexicographic reduced word. Returns the first `w` for which the
/// singular subsystem of `w(mu)` inside the Levi is standard.
pub fn find_twisting_word_in(datum: &RootDatum, levi: &LeviDatum, mu: &Weight) -> Result<TwistingWord> {
    Ok(twisting_candidates_in(datum, levi, mu)?.swap_remove(0))
}

/// Every minimal-length twisting word, in lexicographic order.
pub fn twisting_candidates_in(datum: &RootDatum, levi: &LeviDatum, mu: &Weight) -> Result<Vec<TwistingWord>> {
    let mut layer = vec![datum.identity()];
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(layer[0].rho_image().to_vec());
    while !layer.is_empty() {
        let found: Vec<TwistingWord> = layer
            .iter()
            .filter_map(|w| {
                let singular = singular_positive(datum, levi, &w.act(mu));
                standard_levi_indices(datum, &singular).map(|found| TwistingWord {
                    w: w.clone(),
                    levi: found,
                    condition_b: check_condition_b(datum, w, mu),
                })
            })
            .collect();
        if !found.is_empty() {
            return Ok(found);
        }
        let mut next: Vec<WeylElement> = Vec::new();
        for w in &layer {
            for &j in levi.simple() {
                let mut word = w.word().to_vec();
                word.push(j);
                let child = datum.element(&word)?;
                if child.length() == w.length() + 1 && seen.insert(child.rho_image().to_vec()) {
                    next.push(child);
                }
            }
        }
        next.sort_by(|a, b| a.word().cmp(b.word()));
        layer = next;
    }
    Err(Error::Internal(format!("no Weyl group element puts {mu} in standard Levi form")))
}

/// For `w = s_{a_k} ... s_{a_1}`, checks `<(s_{a_{i-1}} ... s_{a_1}) mu, a_i^vee> != 0`.
pub fn check_condition_b(datum: &RootDatum, w: &WeylElement, mu: &Weight) -> bool {
    let mut current = mu.clone();
    for &a in w.word().iter().rev() {
        if current.0[a].is_zero() {
            return false;
        }
        current = datum.reflect(a, &current);
    }
    true
}

/// `w .n lambda`: `w(lambda_0 + n rho) - n rho` on component 0 and the plain
/// action on the others, with `n` the level of `lambda`.
pub fn n_dot(datum: &RootDatum, w: &WeylElement, lambda: &TruncatedWeight) -> TruncatedWeight {
    shifted_dot(datum, w, lambda, lambda.level())
}

/// The weight transport realized by twisting functors on `O(g_n)`: the
/// `(n+1)`-dot action, which is the ordinary dot action when `n = 0`.
pub fn twist(datum: &RootDatum, w: &WeylElement, lambda: &TruncatedWeight) -> TruncatedWeight {
    shifted_dot(datum, w, lambda, lambda.level() + 1)
}

/// `w(lambda_0 + k rho) - k rho` on component 0, plain action elsewhere.
pub fn shifted_dot(datum: &RootDatum, w: &WeylElement, lambda: &TruncatedWeight, k: usize) -> TruncatedWeight {
    let shift = datum.rho().scale(q(k as i128));
    let mut components = Vec::with_capacity(lambda.components.len());
    components.push(&w.act(&(lambda.head() + &shift)) - &shift);
    components.extend(lambda.components[1..].iter().map(|c| w.act(c)));
    TruncatedWeight { components }
}

pub fn same_block(a: &TruncatedWeight, b: &TruncatedWeight) -> bool {
    a.level() == b.level() && a.components[1..] == b.components[1..]
}

/// The coset `base + Q Phi_J` of weights sharing a central character.
#[derive(Debug, Clone)]
pub struct LinkageClass {
    pub base: Weight,
    pub span: Vec<usize>,
}

impl LinkageClass {
    pub fn contains(&self, datum: &RootDatum, other: &Weight) -> bool {
        let diff = other - &self.base;
        datum.root_coords(&diff).iter().enumerate().all(|(i, c)| c.is_zero() || self.span.contains(&i))
    }
}

/// Equality of central characters within a block whose `lambda_n` has
/// standard singular subsystem `levi`: `lambda_0 - lambda'_0` must lie in
/// the rational span of the Levi's roots.
pub fn linked(datum: &RootDatum, a: &TruncatedWeight, b: &TruncatedWeight, levi: &LeviDatum) -> Result<bool> {
    if !same_block(a, b) {
        return Err(Error::Contract("linkage is only defined inside one Jordan block".into()));
    }
    let singular = singular_positive(datum, &LeviDatum::full(datum), a.top());
    if singular != levi.root_indices() {
        return Err(Error::Contract(format!(
            "singular subsystem of {} is not the standard Levi {:?}",
            a.top(),
            levi.simple()
        )));
    }
    let class = LinkageClass { base: a.head().clone(), span: levi.simple().to_vec() };
    Ok(class.contains(datum, b.head()))
}

/// Componentwise `lambda + delta` for a `delta` vanishing on the Levi's
/// coroots; composition multiplicities are unchanged by such shifts.
pub fn central_shift(lambda: &TruncatedWeight, delta: &TruncatedWeight, levi: &LeviDatum) -> Result<TruncatedWeight> {
    if lambda.level() != delta.level() || lambda.rank() != delta.rank() {
        return Err(Error::Dimension { expected: lambda.components.len(), got: delta.components.len() });
    }
    for (i, d) in delta.components.iter().enumerate() {
        if let Some(&j) = levi.simple().iter().find(|&&j| !d.0[j].is_zero()) {
            return Err(Error::Contract(format!(
                "shift component {i} pairs nontrivially with simple coroot {}",
                j + 1
            )));
        }
    }
    let components = lambda.components.iter().zip(&delta.components).map(|(a, b)| a + b).collect();
    Ok(TruncatedWeight { components })
}

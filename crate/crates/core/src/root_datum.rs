//! Finite root systems: roots, coroots, Weyl group elements, Bruhat and
//! dominance orders.
//!
//! Weights are stored in fundamental-weight coordinates, i.e. as their
//! values on the simple coroots. Roots are stored as integer coefficient
//! vectors over the simple roots.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::CartanType;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{q, serde_qvec, Q};
use crate::weyl::WeylGroup;

/// Integer coefficients of a root (or root-lattice element) over the simple roots.
pub type RootVector = Vec<i64>;

pub fn height(beta: &[i64]) -> i64 {
    beta.iter().sum()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(#[serde(with = "serde_qvec")] pub Vec<Q>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| q(x as i128)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: Q) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::rational::format_q).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Debug)]
pub struct RootDatum {
    cartan: Vec<Vec<i64>>,
    cartan_type: Option<CartanType>,
    /// Positive roots ordered by height, then with earlier simple roots first.
    positive: Vec<RootVector>,
    index: HashMap<RootVector, usize>,
    /// Coefficients of each positive coroot over the simple coroots.
    coroots: Vec<Vec<i64>>,
    /// Symmetrizing weights: `(alpha_i, alpha_j) = sym[i] * cartan[i][j]`.
    sym: Vec<i64>,
    cartan_inverse: linalg::Matrix,
    weyl: OnceLock<std::result::Result<WeylGroup, Error>>,
}

impl RootDatum {
    pub fn new(t: &CartanType) -> Self {
        let mut d = Self::from_cartan_matrix(t.cartan_matrix()).expect("Cartan types are valid");
        d.cartan_type = Some(t.clone());
        d
    }

    /// Builds a datum from an arbitrary (possibly reducible, possibly empty)
    /// finite-type Cartan matrix. Entry `[i][j]` is `<alpha_j, alpha_i^vee>`.
    pub fn from_cartan_matrix(cartan: Vec<Vec<i64>>) -> Result<Self> {
        let r = cartan.len();
        if cartan.iter().any(|row| row.len() != r) {
            return Err(Error::CartanType("Cartan matrix is not square".into()));
        }
        for i in 0..r {
            for j in 0..r {
                let (a, b) = (cartan[i][j], cartan[j][i]);
                let ok = if i == j { a == 2 } else { a <= 0 && (a == 0) == (b == 0) && a * b < 4 };
                if !ok {
                    return Err(Error::CartanType(format!("not a finite-type Cartan matrix: {cartan:?}")));
                }
            }
        }
        let sym = symmetrizer(&cartan)?;
        let qm: linalg::Matrix = cartan.iter().map(|row| row.iter().map(|&x| q(x as i128)).collect()).collect();
        let cartan_inverse = if r == 0 {
            Vec::new()
        } else {
            linalg::inverse(&qm).ok_or_else(|| Error::CartanType("singular Cartan matrix".into()))?
        };

        let positive = root_closure(&cartan);
        if positive.len() > 10_000 {
            return Err(Error::CartanType("root system is not finite".into()));
        }
        let index = positive.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let coroots = positive
            .iter()
            .map(|beta| {
                let norm = inner(&cartan, &sym, beta, beta);
                beta.iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        let num = 2 * c * sym[i];
                        debug_assert_eq!(num % norm, 0);
                        num / norm
                    })
                    .collect()
            })
            .collect();
        Ok(RootDatum {
            cartan,
            cartan_type: None,
            positive,
            index,
            coroots,
            sym,
            cartan_inverse,
            weyl: OnceLock::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_type(&self) -> Option<&CartanType> {
        self.cartan_type.as_ref()
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive.len()
    }

    /// Index of a positive root, if `beta` is one.
    pub fn root_index(&self, beta: &[i64]) -> Option<usize> {
        self.index.get(beta).copied()
    }

    /// True for positive and negative roots alike.
    pub fn is_root(&self, beta: &[i64]) -> bool {
        if self.index.contains_key(beta) {
            return true;
        }
        let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
        self.index.contains_key(&neg)
    }

    pub fn simple_root(&self, i: usize) -> RootVector {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    pub fn coroot(&self, k: usize) -> &[i64] {
        &self.coroots[k]
    }

    /// `(beta, gamma)` for the invariant form normalized by the symmetrizer.
    pub fn inner(&self, beta: &[i64], gamma: &[i64]) -> i64 {
        inner(&self.cartan, &self.sym, beta, gamma)
    }

    /// `<beta, alpha_i^vee>` for a root-lattice vector.
    pub fn root_pairing_simple(&self, beta: &[i64], i: usize) -> i64 {
        self.cartan[i].iter().zip(beta).map(|(a, c)| a * c).sum()
    }

    /// `<lambda, beta^vee>` for any root `beta` (either sign).
    pub fn pairing(&self, lambda: &Weight, beta: &[i64]) -> Q {
        let (k, sign) = self.signed_index(beta).expect("pairing against a non-root");
        let v: Q = self.coroots[k].iter().zip(&lambda.0).map(|(&c, x)| x * q(c as i128)).sum();
        if sign { v } else { -v }
    }

    /// `<lambda, beta_k^vee>` for the `k`-th positive root.
    pub fn pairing_positive(&self, lambda: &Weight, k: usize) -> Q {
        self.coroots[k].iter().zip(&lambda.0).map(|(&c, x)| x * q(c as i128)).sum()
    }

    fn signed_index(&self, beta: &[i64]) -> Option<(usize, bool)> {
        if let Some(&k) = self.index.get(beta) {
            return Some((k, true));
        }
        let neg: Vec<i64> = beta.iter().map(|x| -x).collect();
        self.index.get(&neg).map(|&k| (k, false))
    }

    /// The root-lattice vector as a weight (fundamental coordinates).
    pub fn root_to_weight(&self, beta: &[i64]) -> Weight {
        Weight(
            self.cartan
                .iter()
                .map(|row| q(row.iter().zip(beta).map(|(a, c)| a * c).sum::<i64>() as i128))
                .collect(),
        )
    }

    /// Coordinates of a weight over the simple roots (rational in general).
    pub fn root_coords(&self, lambda: &Weight) -> Vec<Q> {
        self.cartan_inverse
            .iter()
            .map(|row| row.iter().zip(&lambda.0).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// Integral root coordinates, when the weight lies in the root lattice.
    pub fn integral_root_coords(&self, lambda: &Weight) -> Option<RootVector> {
        self.root_coords(lambda)
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer() as i64))
            .collect()
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![q(1); self.rank()])
    }

    /// `s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i`.
    pub fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        let c = lambda.0[i];
        Weight(lambda.0.iter().enumerate().map(|(k, x)| x - c * q(self.cartan[k][i] as i128)).collect())
    }

    /// Simple reflection on a root-lattice vector.
    pub fn reflect_root(&self, i: usize, beta: &[i64]) -> RootVector {
        let c = self.root_pairing_simple(beta, i);
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    }

    /// Reflection in an arbitrary positive root `k`.
    pub fn reflect_in(&self, k: usize, lambda: &Weight) -> Weight {
        let c = self.pairing_positive(lambda, k);
        let beta = self.root_to_weight(&self.positive[k]);
        lambda - &beta.scale(c)
    }

    /// Builds the element with the given word (0-based simple indices,
    /// applied right to left). The stored word is the lexicographically
    /// smallest reduced expression.
    pub fn element(&self, word: &[usize]) -> Result<WeylElement> {
        if let Some(&bad) = word.iter().find(|&&i| i >= self.rank()) {
            return Err(Error::Contract(format!("simple reflection index {bad} out of range")));
        }
        let mut image = self.rho_image_identity();
        for &i in word.iter().rev() {
            reflect_int(&self.cartan, i, &mut image);
        }
        Ok(self.element_from_rho_image(image))
    }

    pub fn identity(&self) -> WeylElement {
        self.element(&[]).expect("empty word")
    }

    fn rho_image_identity(&self) -> Vec<i64> {
        vec![1; self.rank()]
    }

    /// Recovers an element from `w(rho)`; the word is built by repeatedly
    /// stripping the smallest left descent.
    pub(crate) fn element_from_rho_image(&self, image: Vec<i64>) -> WeylElement {
        let mut v = image.clone();
        let mut word = Vec::new();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            word.push(i);
            reflect_int(&self.cartan, i, &mut v);
        }
        let r = self.rank();
        let mut fund: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        for &i in &word {
            // fund <- fund * S_i; only column i changes.
            for row in fund.iter_mut() {
                let delta: i64 = (0..r).map(|k| row[k] * self.cartan[k][i]).sum();
                row[i] -= delta;
            }
        }
        WeylElement { word, fund, rho_image: image }
    }

    pub fn weyl_act(&self, w: &WeylElement, v: &Weight) -> Weight {
        w.act(v)
    }

    /// `w(beta)` for a root-lattice vector.
    pub fn act_root(&self, w: &WeylElement, beta: &[i64]) -> RootVector {
        let mut out = beta.to_vec();
        for &i in w.word.iter().rev() {
            out = self.reflect_root(i, &out);
        }
        out
    }

    pub fn product(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        let mut word = a.word.clone();
        word.extend_from_slice(&b.word);
        self.element(&word).expect("indices already validated")
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let word: Vec<usize> = w.word.iter().rev().copied().collect();
        self.element(&word).expect("indices already validated")
    }

    /// Number of positive roots sent to negative roots by `w`.
    pub fn inversion_count(&self, w: &WeylElement) -> usize {
        self.positive.iter().filter(|beta| self.act_root(w, beta).iter().any(|&c| c < 0)).count()
    }

    /// Bruhat order, decided by the lifting property along left descents.
    pub fn bruhat_leq(&self, x: &WeylElement, y: &WeylElement) -> bool {
        let mut xv = x.rho_image.clone();
        let mut yv = y.rho_image.clone();
        while let Some(i) = yv.iter().position(|&c| c < 0) {
            if xv[i] < 0 {
                reflect_int(&self.cartan, i, &mut xv);
            }
            reflect_int(&self.cartan, i, &mut yv);
        }
        xv.iter().all(|&c| c > 0)
    }

    /// `hi - lo` lies in `Z_{>=0}` span of the simple roots indexed by `j`.
    pub fn dominance_leq(&self, lo: &Weight, hi: &Weight, j: &LeviDatum) -> bool {
        let diff = hi - lo;
        let coords = self.root_coords(&diff);
        coords.iter().enumerate().all(|(i, c)| {
            if j.contains(i) {
                c.is_integer() && !c.is_negative()
            } else {
                c.is_zero()
            }
        })
    }

    /// The materialized Weyl group; fails above a size budget.
    pub fn weyl_group(&self) -> Result<&WeylGroup> {
        self.weyl
            .get_or_init(|| WeylGroup::build(self, crate::weyl::MAX_ORDER))
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub(crate) fn reflect_int(cartan: &[Vec<i64>], i: usize, v: &mut [i64]) {
    let c = v[i];
    for (k, x) in v.iter_mut().enumerate() {
        *x -= c * cartan[k][i];
    }
}

fn inner(cartan: &[Vec<i64>], sym: &[i64], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            s += ai * bj * sym[i] * cartan[i][j];
        }
    }
    s
}

/// Positive integers `d` with `d_i a_ij = d_j a_ji`, smallest per component.
fn symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<i64>> {
    let r = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        let mut component = vec![start];
        d[start] = Some(q(1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                let dj = d[i].unwrap() * Q::new(cartan[i][j] as i128, cartan[j][i] as i128);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        component.push(j);
                        stack.push(j);
                    }
                    Some(existing) if existing != dj => {
                        return Err(Error::CartanType("Cartan matrix is not symmetrizable".into()))
                    }
                    _ => {}
                }
            }
        }
        let lcm = component.iter().fold(1i128, |acc, &i| num_integer::lcm(acc, *d[i].unwrap().denom()));
        for &i in &component {
            d[i] = Some(d[i].unwrap() * q(lcm));
        }
    }
    Ok(d.into_iter().map(|x| x.unwrap().to_integer() as i64).collect())
}

/// Positive roots by closure under adding simple roots, using root strings.
fn root_closure(cartan: &[Vec<i64>]) -> Vec<RootVector> {
    let r = cartan.len();
    let mut roots: Vec<RootVector> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut known: std::collections::HashSet<RootVector> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() && roots.len() <= 10_000 {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                // p = largest k with beta - k alpha_i a root
                let mut p = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if known.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = cartan[i].iter().zip(beta).map(|(a, c)| a * c).sum();
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
    roots
}

/// A Weyl group element: its lexicographically smallest reduced word
/// (0-based simple indices, applied right to left) and cached actions.
#[derive(Clone)]
pub struct WeylElement {
    word: Vec<usize>,
    /// Matrix of the action on fundamental-weight coordinates.
    fund: Vec<Vec<i64>>,
    /// `w(rho)`, which identifies the element.
    rho_image: Vec<i64>,
}

impl WeylElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn rho_image(&self) -> &[i64] {
        &self.rho_image
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.fund
    }

    pub fn act(&self, v: &Weight) -> Weight {
        Weight(
            self.fund
                .iter()
                .map(|row| row.iter().zip(&v.0).map(|(&a, x)| x * q(a as i128)).sum())
                .collect(),
        )
    }

    /// 1-based word, the form used on the command line.
    pub fn word_one_based(&self) -> Vec<usize> {
        self.word.iter().map(|i| i + 1).collect()
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.rho_image == other.rho_image
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rho_image.hash(state);
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        f.write_str(&parts.join(""))
    }
}

/// A standard Levi subalgebra: a subset `J` of the simple roots together
/// with the root datum it generates.
#[derive(Debug)]
pub struct LeviDatum {
    simple: Vec<usize>,
    /// Indices (into the ambient positive roots) of the roots in `Z_{>=0} J`.
    roots: Vec<usize>,
    sub: RootDatum,
}

impl LeviDatum {
    pub fn new(datum: &RootDatum, j: &[usize]) -> Result<Self> {
        let mut simple = j.to_vec();
        simple.sort_unstable();
        simple.dedup();
        if let Some(&bad) = simple.iter().find(|&&i| i >= datum.rank()) {
            return Err(Error::Contract(format!("simple index {bad} out of range")));
        }
        let roots = datum
            .positive_roots()
            .iter()
            .enumerate()
            .filter(|(_, beta)| beta.iter().enumerate().all(|(i, &c)| c == 0 || simple.contains(&i)))
            .map(|(k, _)| k)
            .collect();
        let sub_cartan = simple
            .iter()
            .map(|&a| simple.iter().map(|&b| datum.cartan_matrix()[a][b]).collect())
            .collect();
        let sub = RootDatum::from_cartan_matrix(sub_cartan)?;
        Ok(LeviDatum { simple, roots, sub })
    }

    pub fn full(datum: &RootDatum) -> Self {
        let all: Vec<usize> = (0..datum.rank()).collect();
        Self::new(datum, &all).expect("full Levi")
    }

    pub fn cartan(datum: &RootDatum) -> Self {
        Self::new(datum, &[]).expect("empty Levi")
    }

    pub fn simple(&self) -> &[usize] {
        &self.simple
    }

    pub fn contains(&self, i: usize) -> bool {
        self.simple.binary_search(&i).is_ok()
    }

    /// Ambient indices of the Levi's positive roots.
    pub fn root_indices(&self) -> &[usize] {
        &self.roots
    }

    pub fn sub_datum(&self) -> &RootDatum {
        &self.sub
    }

    /// Restricts an ambient root-lattice vector supported on `J` to `J` coordinates.
    pub fn to_sub_coords(&self, beta: &[i64]) -> RootVector {
        self.simple.iter().map(|&i| beta[i]).collect()
    }

    pub fn from_sub_coords(&self, beta: &[i64], rank: usize) -> RootVector {
        let mut v = vec![0; rank];
        for (k, &i) in self.simple.iter().enumerate() {
            v[i] = beta[k];
        }
        v
    }
}

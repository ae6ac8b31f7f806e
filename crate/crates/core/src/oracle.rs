//! Brute-force truncated Verma modules over `g_n` with exact matrices.
//!
//! Vectors are combinations of PBW monomials `f_{c_1} ... f_{c_k} v`,
//! `c_1 <= ... <= c_k`, in the lowering generators `f_{gamma,i}`. A
//! generator's id is `root * (n + 1) + degree`, so the PBW order is by root
//! (height first) and then by degree.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::Serialize;

use crate::characters::{verma_character, Beta, Decomposition, FormalCharacter};
use crate::chevalley::{BasisKind, ChevalleyBasis};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{q, Q};
use crate::root_datum::{height, LeviDatum, RootDatum, RootVector, Weight};
use crate::trunc_weights::{same_block, singular_positive, TruncatedWeight};

pub type Monomial = Vec<u16>;
type Vector = BTreeMap<Monomial, Q>;

/// Default cap on the total number of PBW monomials in one module.
pub const DEFAULT_BUDGET: usize = 60_000;

fn add_to(v: &mut Vector, m: Monomial, c: Q) {
    use std::collections::btree_map::Entry;
    match v.entry(m) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

struct Straightener {
    basis: Arc<ChevalleyBasis>,
    n: usize,
    highest: Vec<Weight>,
    /// `g_n` index of each lowering generator id.
    fgen: Vec<usize>,
    memo: HashMap<(usize, Monomial), Vector>,
}

impl Straightener {
    fn fid(&self, root: usize, degree: usize) -> u16 {
        (root * (self.n + 1) + degree) as u16
    }

    /// `x . (m v)` for a `g_n` basis element `x`.
    fn act(&mut self, x: usize, m: &[u16]) -> Vector {
        let key = (x, m.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let dim = self.basis.dim();
        let (degree, b) = (x / dim, x % dim);
        let kind = self.basis.kind(b);
        let mut out = Vector::new();
        if let BasisKind::F(k) = kind {
            let c = self.fid(k, degree);
            if m.first().is_none_or(|&first| c <= first) {
                let mut mm = Vec::with_capacity(m.len() + 1);
                mm.push(c);
                mm.extend_from_slice(m);
                out.insert(mm, q(1));
                self.memo.insert(key, out.clone());
                return out;
            }
        }
        match m.split_first() {
            None => {
                if let BasisKind::H(j) = kind {
                    let c = self.highest[degree].0[j];
                    if !c.is_zero() {
                        out.insert(Vec::new(), c);
                    }
                }
            }
            Some((&first, rest)) => {
                let fx = self.fgen[first as usize];
                for (mm, c) in self.act(x, rest) {
                    for (mm2, c2) in self.act(fx, &mm) {
                        add_to(&mut out, mm2, c * c2);
                    }
                }
                for (z, c) in self.basis.bracket_n(self.n, x, fx) {
                    for (mm2, c2) in self.act(z, rest) {
                        add_to(&mut out, mm2, c2 * q(c as i128));
                    }
                }
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

/// A Verma module over `g_n`, cut off below height `depth`.
pub struct TruncatedModule {
    datum: Arc<RootDatum>,
    basis: Arc<ChevalleyBasis>,
    highest: TruncatedWeight,
    depth: usize,
    spaces: BTreeMap<Beta, Vec<Monomial>>,
    position: HashMap<Monomial, usize>,
    straightener: Mutex<Straightener>,
}

impl TruncatedModule {
    pub fn level(&self) -> usize {
        self.highest.level()
    }

    pub fn highest(&self) -> &TruncatedWeight {
        &self.highest
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn basis(&self) -> &ChevalleyBasis {
        &self.basis
    }

    /// Weight spaces in height order, each with its ordered monomial basis.
    pub fn spaces(&self) -> impl Iterator<Item = (&Beta, &[Monomial])> {
        self.spaces.iter().map(|(b, v)| (b, v.as_slice()))
    }

    pub fn dim(&self, beta: &[i64]) -> usize {
        self.spaces.get(&Beta(beta.to_vec())).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(Vec::len).sum()
    }

    pub fn character(&self) -> FormalCharacter {
        let mut ch = FormalCharacter::new(self.highest.head().clone(), self.depth);
        for (b, v) in &self.spaces {
            ch.set(b.clone(), v.len() as u64);
        }
        ch
    }

    /// `g_n` index of `x_i` for a `g` basis vector `x`.
    pub fn generator(&self, x: usize, degree: usize) -> usize {
        degree * self.basis.dim() + x
    }

    /// Root-lattice weight carried by a `g_n` basis element.
    pub fn generator_weight(&self, x: usize) -> RootVector {
        self.basis.weight(x % self.basis.dim())
    }

    /// `x . (m v)` expanded in PBW monomials.
    pub fn act(&self, x: usize, m: &[u16]) -> BTreeMap<Monomial, Q> {
        self.straightener.lock().unwrap().act(x, m)
    }

    /// Matrix of `x` from `M^beta` to the weight space it lands in, or `None`
    /// when that space lies outside the window.
    pub fn matrix(&self, x: usize, beta: &Beta) -> Option<(Beta, Matrix)> {
        let source = self.spaces.get(beta)?;
        let w = self.generator_weight(x);
        let target = Beta(beta.0.iter().zip(&w).map(|(b, c)| b - c).collect());
        let rows = self.spaces.get(&target)?.len();
        let mut m = linalg::zeros(rows, source.len());
        let mut st = self.straightener.lock().unwrap();
        for (col, mono) in source.iter().enumerate() {
            for (img, c) in st.act(x, mono) {
                let row = self.position[&img];
                m[row][col] = c;
            }
        }
        Some((target, m))
    }
}

/// Constructs `M_Lambda` over `g_n` to the given depth.
pub fn build_verma(datum: &Arc<RootDatum>, n: usize, lambda: &TruncatedWeight, depth: usize) -> Result<TruncatedModule> {
    if lambda.level() != n {
        return Err(Error::Dimension { expected: n + 1, got: lambda.level() + 1 });
    }
    let basis = Arc::new(ChevalleyBasis::new(datum)?);
    build_with(datum.clone(), basis, lambda, depth, DEFAULT_BUDGET)
}

fn build_with(
    datum: Arc<RootDatum>,
    basis: Arc<ChevalleyBasis>,
    lambda: &TruncatedWeight,
    depth: usize,
    budget: usize,
) -> Result<TruncatedModule> {
    if lambda.rank() != datum.rank() {
        return Err(Error::Dimension { expected: datum.rank(), got: lambda.rank() });
    }
    let n = lambda.level();
    let roots = datum.positive_roots();
    let gens: Vec<(usize, usize)> = (0..roots.len()).flat_map(|k| (0..=n).map(move |d| (k, d))).collect();
    let mut spaces: BTreeMap<Beta, Vec<Monomial>> = BTreeMap::new();
    let mut total = 0usize;

    let mut stack: Vec<(Monomial, RootVector, i64)> = vec![(Vec::new(), vec![0; datum.rank()], 0)];
    while let Some((m, w, h)) = stack.pop() {
        total += 1;
        if total > budget {
            return Err(Error::Resource { beta: w, dim: spaces.values().map(Vec::len).max().unwrap_or(0), total, budget });
        }
        let from = m.last().map_or(0, |&c| c as usize);
        for (id, &(k, _)) in gens.iter().enumerate().skip(from) {
            let gh = height(&roots[k]);
            if h + gh > depth as i64 {
                continue;
            }
            let mut m2 = m.clone();
            m2.push(id as u16);
            let w2 = w.iter().zip(&roots[k]).map(|(a, b)| a + b).collect();
            stack.push((m2, w2, h + gh));
        }
        spaces.entry(Beta(w)).or_default().push(m);
    }
    let mut position = HashMap::new();
    for v in spaces.values_mut() {
        v.sort();
        for (i, m) in v.iter().enumerate() {
            position.insert(m.clone(), i);
        }
    }
    let fgen = gens.iter().map(|&(k, d)| d * basis.dim() + basis.f(k)).collect();
    let straightener = Straightener { basis: basis.clone(), n, highest: lambda.components().to_vec(), fgen, memo: HashMap::new() };
    Ok(TruncatedModule {
        datum,
        basis,
        highest: lambda.clone(),
        depth,
        spaces,
        position,
        straightener: Mutex::new(straightener),
    })
}

/// Per-weight-space data of a simple quotient computation.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceReport {
    pub beta: RootVector,
    pub dim: usize,
    pub radical_dim: usize,
}

/// Character of the simple quotient `L_Lambda` together with the
/// maximal-submodule slice dimensions.
///
/// `Q_beta` is a row basis of functionals on `M^beta` whose joint kernel is
/// the maximal submodule: a vector lies in it iff every `e_{alpha_j,i}`
/// sends it into the maximal submodule one level up, and `Q_0 = [1]`.
pub fn simple_quotient(module: &TruncatedModule) -> (FormalCharacter, Vec<SpaceReport>) {
    let datum = module.datum.clone();
    let r = datum.rank();
    let mut functionals: HashMap<Beta, Matrix> = HashMap::new();
    let mut ch = FormalCharacter::new(module.highest.head().clone(), module.depth);
    let mut report = Vec::new();
    for (beta, mons) in module.spaces() {
        let dim = mons.len();
        let q_beta = if beta.height() == 0 {
            vec![vec![q(1)]]
        } else {
            let mut stack: Matrix = Vec::new();
            for j in 0..r {
                let alpha = datum.simple_root(j);
                let k = datum.root_index(&alpha).unwrap();
                for degree in 0..=module.level() {
                    let x = module.generator(module.basis.e(k), degree);
                    let Some((target, e)) = module.matrix(x, beta) else { continue };
                    let qt = &functionals[&target];
                    if qt.is_empty() {
                        continue;
                    }
                    stack.extend(linalg::mul(qt, &e, dim));
                }
            }
            linalg::row_space(stack)
        };
        ch.set(beta.clone(), q_beta.len() as u64);
        report.push(SpaceReport { beta: beta.0.clone(), dim, radical_dim: dim - q_beta.len() });
        functionals.insert(beta.clone(), q_beta);
    }
    (ch, report)
}

/// Character of the joint kernel of all `e_{gamma,i}` with `gamma` outside
/// the Levi `levi`, which must be the singular subsystem of the top component.
pub fn invariants_character(module: &TruncatedModule, levi: &LeviDatum) -> Result<FormalCharacter> {
    let datum = &module.datum;
    let full = LeviDatum::full(datum);
    let mut singular = singular_positive(datum, &full, module.highest.top());
    singular.sort_unstable();
    if singular != levi.root_indices() {
        return Err(Error::Contract(format!(
            "the singular roots of {} do not form the Levi {:?}",
            module.highest.top(),
            levi.simple()
        )));
    }
    let outside: Vec<usize> = (0..datum.num_positive_roots()).filter(|k| !levi.root_indices().contains(k)).collect();
    let mut ch = FormalCharacter::new(module.highest.head().clone(), module.depth);
    for (beta, mons) in module.spaces() {
        let mut stack: Matrix = Vec::new();
        for &k in &outside {
            for degree in 0..=module.level() {
                if let Some((_, m)) = module.matrix(module.generator(module.basis.e(k), degree), beta) {
                    stack.extend(m);
                }
            }
        }
        ch.set(beta.clone(), (mons.len() - linalg::rank(&stack)) as u64);
    }
    Ok(ch)
}

/// Checks `[x, y] v = x(y v) - y(x v)` for all generator pairs and all
/// monomials whose images stay inside the window.
pub fn check_relations(module: &TruncatedModule) -> Result<()> {
    let dim_n = module.basis.dim() * (module.level() + 1);
    let n = module.level();
    for (beta, mons) in module.spaces() {
        for x in 0..dim_n {
            for y in 0..dim_n {
                let reach = |g: usize| height(&module.generator_weight(g)).max(0);
                if beta.height() + reach(x) + reach(y) > module.depth as i64 {
                    continue;
                }
                for m in mons {
                    let mut lhs = Vector::new();
                    for (z, c) in module.basis.bracket_n(n, x, y) {
                        for (mm, c2) in module.act(z, m) {
                            add_to(&mut lhs, mm, c2 * q(c as i128));
                        }
                    }
                    let mut rhs = Vector::new();
                    for (mm, c) in module.act(y, m) {
                        for (mm2, c2) in module.act(x, &mm) {
                            add_to(&mut rhs, mm2, c * c2);
                        }
                    }
                    for (mm, c) in module.act(x, m) {
                        for (mm2, c2) in module.act(y, &mm) {
                            add_to(&mut rhs, mm2, -(c * c2));
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::Internal(format!("relation fails for generators ({x}, {y}) on {m:?}")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks that `h_{j,0}` acts by `lambda_0 - beta` and that each `h_{j,i}`,
/// `i >= 1`, has the single generalized eigenvalue `lambda_i(h_j)`.
pub fn check_eigenvalues(module: &TruncatedModule) -> Result<()> {
    let datum = &module.datum;
    for (beta, mons) in module.spaces() {
        let d = mons.len();
        let weight = module.highest.head() - &datum.root_to_weight(&beta.0);
        for j in 0..datum.rank() {
            for degree in 0..=module.level() {
                let (_, m) = module.matrix(module.generator(module.basis.h(j), degree), beta).expect("h preserves weights");
                let c = if degree == 0 { weight.0[j] } else { module.highest.component(degree).0[j] };
                let mut shifted = m.clone();
                for (i, row) in shifted.iter_mut().enumerate() {
                    row[i] -= c;
                }
                let ok = if degree == 0 {
                    linalg::is_zero(&shifted)
                } else {
                    let mut p = shifted.clone();
                    for _ in 1..d {
                        p = linalg::mul(&p, &shifted, d);
                    }
                    linalg::is_zero(&p)
                };
                if !ok {
                    return Err(Error::Internal(format!("h_{{{j},{degree}}} has a wrong eigenvalue on {:?}", beta.0)));
                }
            }
        }
    }
    Ok(())
}

/// JSON summary of one oracle run.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub highest: TruncatedWeight,
    pub depth: usize,
    pub spaces: Vec<SpaceReport>,
    pub verma: FormalCharacter,
    pub simple: FormalCharacter,
}

/// Memoizing front end: simple characters are cached per highest weight.
pub struct Oracle {
    datum: Arc<RootDatum>,
    basis: Arc<ChevalleyBasis>,
    budget: usize,
    simple: Mutex<HashMap<TruncatedWeight, FormalCharacter>>,
}

impl Oracle {
    pub fn new(datum: Arc<RootDatum>) -> Result<Self> {
        let basis = Arc::new(ChevalleyBasis::new(&datum)?);
        Ok(Oracle { datum, basis, budget: DEFAULT_BUDGET, simple: Mutex::new(HashMap::new()) })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn build_verma(&self, lambda: &TruncatedWeight, depth: usize) -> Result<TruncatedModule> {
        build_with(self.datum.clone(), self.basis.clone(), lambda, depth, self.budget)
    }

    pub fn simple_character(&self, lambda: &TruncatedWeight, depth: usize) -> Result<FormalCharacter> {
        if let Some(ch) = self.simple.lock().unwrap().get(lambda) {
            if ch.depth >= depth {
                return Ok(ch.truncate(depth));
            }
        }
        let module = self.build_verma(lambda, depth)?;
        let (ch, _) = simple_quotient(&module);
        self.simple.lock().unwrap().insert(lambda.clone(), ch.clone());
        Ok(ch)
    }

    /// Composition multiplicities of `M_Lambda` within the depth window.
    pub fn decomposition(&self, lambda: &TruncatedWeight, depth: usize) -> Result<Decomposition> {
        let full = LeviDatum::full(&self.datum);
        let ch = verma_character(&self.datum, &full, lambda, depth)?;
        crate::characters::decompose_in_block(&self.datum, &ch, &lambda.block(), |eta, d| self.simple_character(eta, d))
    }

    /// `[M_Lambda : L_N]`, computed with a window of the given depth.
    pub fn multiplicity(&self, lambda: &TruncatedWeight, nu: &TruncatedWeight, depth: usize) -> Result<u64> {
        if !same_block(lambda, nu) {
            return Ok(0);
        }
        let Some(beta) = self.datum.integral_root_coords(&(lambda.head() - nu.head())) else {
            return Ok(0);
        };
        if beta.iter().any(|&c| c < 0) {
            return Ok(0);
        }
        if height(&beta) > depth as i64 {
            return Err(Error::Contract(format!("depth {depth} is below the height of {beta:?}")));
        }
        Ok(self.decomposition(lambda, depth)?.multiplicity(&beta))
    }

    pub fn report(&self, lambda: &TruncatedWeight, depth: usize) -> Result<OracleReport> {
        let module = self.build_verma(lambda, depth)?;
        let (simple, spaces) = simple_quotient(&module);
        Ok(OracleReport { highest: lambda.clone(), depth, spaces, verma: module.character(), simple })
    }
}

/// `[M_Lambda : L_N]` with a fresh oracle.
pub fn oracle_multiplicity(datum: &Arc<RootDatum>, lambda: &TruncatedWeight, nu: &TruncatedWeight, depth: usize) -> Result<u64> {
    Oracle::new(datum.clone())?.multiplicity(lambda, nu, depth)
}

/// Simple character with a fresh oracle.
pub fn simple_character(datum: &Arc<RootDatum>, lambda: &TruncatedWeight, depth: usize) -> Result<FormalCharacter> {
    Oracle::new(datum.clone())?.simple_character(lambda, depth)
}

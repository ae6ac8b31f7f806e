//! Kazhdan-Lusztig polynomials and BGG category O multiplicities for `g`
//! itself (the level-zero base case).

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::root_datum::{LeviDatum, RootDatum, RootVector, Weight, WeylElement};
use crate::weyl::WeylGroup;

/// `P_{x,y}` as coefficients of `q^0, q^1, ...`; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KLPolynomial {
    pub coeffs: Vec<u64>,
}

impl KLPolynomial {
    pub fn one() -> Self {
        KLPolynomial { coeffs: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_at_one(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    fn from_raw(raw: &[i64]) -> Self {
        let mut coeffs: Vec<u64> = raw
            .iter()
            .map(|&c| u64::try_from(c).expect("Kazhdan-Lusztig coefficients are nonnegative"))
            .collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        KLPolynomial { coeffs }
    }
}

impl fmt::Display for KLPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "q".to_string(),
                (1, c) => format!("{c}q"),
                (k, 1) => format!("q^{k}"),
                (k, c) => format!("{c}q^{k}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

type Poly = Vec<i64>;

fn poly_add_shifted(acc: &mut Poly, p: &[i64], shift: usize, scale: i64) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (k, &c) in p.iter().enumerate() {
        acc[k + shift] += scale * c;
    }
}

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Memoized Kazhdan-Lusztig polynomials of one Weyl group, computed column by
/// column with the classical recursion along a left descent of `y`.
#[derive(Debug)]
pub struct KlTable {
    datum: Arc<RootDatum>,
    columns: Mutex<HashMap<usize, Arc<Vec<Poly>>>>,
}

impl KlTable {
    pub fn new(datum: Arc<RootDatum>) -> Result<Self> {
        datum.weyl_group()?;
        Ok(KlTable { datum, columns: Mutex::new(HashMap::new()) })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn group(&self) -> &WeylGroup {
        self.datum.weyl_group().expect("checked at construction")
    }

    pub fn polynomial(&self, x: &WeylElement, y: &WeylElement) -> KLPolynomial {
        let g = self.group();
        self.by_index(g.index_of(x), g.index_of(y))
    }

    pub fn by_index(&self, x: usize, y: usize) -> KLPolynomial {
        KLPolynomial::from_raw(&self.column(y)[x])
    }

    fn cached(&self, y: usize) -> Option<Arc<Vec<Poly>>> {
        self.columns.lock().unwrap().get(&y).cloned()
    }

    fn column(&self, y: usize) -> Arc<Vec<Poly>> {
        if let Some(c) = self.cached(y) {
            return c;
        }
        let computed = Arc::new(self.compute_column(y));
        self.columns.lock().unwrap().entry(y).or_insert(computed).clone()
    }

    fn compute_column(&self, y: usize) -> Vec<Poly> {
        let g = self.group();
        let n = g.order();
        let mut out = vec![Vec::new(); n];
        let Some(s) = g.first_left_descent(y) else {
            out[0] = vec![1];
            return out;
        };
        let v = g.left_mul(y, s);
        let cv = self.column(v);
        let lv = g.length(v);
        let ly = g.length(y);

        // z < v with s z < z and mu(z, v) != 0
        let mut mus = Vec::new();
        for z in 0..n {
            if z == v || cv[z].is_empty() || g.length(g.left_mul(z, s)) > g.length(z) {
                continue;
            }
            let d = lv - g.length(z);
            if d % 2 == 1 {
                let mu = cv[z].get((d - 1) / 2).copied().unwrap_or(0);
                if mu != 0 {
                    mus.push((z, mu, self.column(z)));
                }
            }
        }

        for x in 0..n {
            if !g.bruhat_leq(x, y) {
                continue;
            }
            let sx = g.left_mul(x, s);
            let descends = g.length(sx) < g.length(x);
            let mut p: Poly = Vec::new();
            let (shift_sx, shift_x) = if descends { (0, 1) } else { (1, 0) };
            poly_add_shifted(&mut p, &cv[sx], shift_sx, 1);
            poly_add_shifted(&mut p, &cv[x], shift_x, 1);
            for (z, mu, cz) in &mus {
                if !cz[x].is_empty() {
                    poly_add_shifted(&mut p, &cz[x], (ly - g.length(*z)) / 2, -mu);
                }
            }
            out[x] = trim(p);
        }
        out
    }

    /// All computed columns, keyed by reduced words (for persistence).
    fn snapshot(&self) -> PersistedTable {
        let g = self.group();
        let cols = self.columns.lock().unwrap();
        let mut columns: Vec<PersistedColumn> = cols
            .iter()
            .map(|(&y, col)| PersistedColumn {
                y: g.element(y).word().to_vec(),
                entries: col
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_empty())
                    .map(|(x, p)| (g.element(x).word().to_vec(), p.clone()))
                    .collect(),
            })
            .collect();
        columns.sort_by(|a, b| a.y.len().cmp(&b.y.len()).then_with(|| a.y.cmp(&b.y)));
        PersistedTable { cartan: self.datum.cartan_matrix().to_vec(), columns }
    }

    fn restore(&self, table: PersistedTable) -> Result<()> {
        let g = self.group();
        let mut cols = self.columns.lock().unwrap();
        for column in table.columns {
            let y = g.index_of(&self.datum.element(&column.y)?);
            let mut polys = vec![Vec::new(); g.order()];
            for (xw, p) in column.entries {
                polys[g.index_of(&self.datum.element(&xw)?)] = p;
            }
            cols.entry(y).or_insert_with(|| Arc::new(polys));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PersistedColumn {
    y: Vec<usize>,
    entries: Vec<(Vec<usize>, Vec<i64>)>,
}

#[derive(Serialize, Deserialize)]
struct PersistedTable {
    cartan: Vec<Vec<i64>>,
    columns: Vec<PersistedColumn>,
}

/// Process-wide KL tables keyed by Cartan matrix, optionally persisted as
/// JSON files in a directory.
#[derive(Debug, Default)]
pub struct KlCache {
    tables: Mutex<HashMap<Vec<Vec<i64>>, Arc<KlTable>>>,
    dir: Option<PathBuf>,
}

impl KlCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        KlCache { tables: Mutex::new(HashMap::new()), dir: Some(dir.into()) }
    }

    pub fn table(&self, cartan: &[Vec<i64>]) -> Result<Arc<KlTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(cartan) {
            return Ok(t.clone());
        }
        let datum = Arc::new(RootDatum::from_cartan_matrix(cartan.to_vec())?);
        let table = KlTable::new(datum)?;
        if let Some(path) = self.file_for(cartan) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                let stored: PersistedTable = serde_json::from_str(&text)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                if stored.cartan == cartan {
                    table.restore(stored)?;
                }
            }
        }
        let table = Arc::new(table);
        Ok(self.tables.lock().unwrap().entry(cartan.to_vec()).or_insert(table).clone())
    }

    fn file_for(&self, cartan: &[Vec<i64>]) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let tag: Vec<String> = cartan.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")).collect();
        let tag = if tag.is_empty() { "empty".to_string() } else { tag.join("__") };
        Some(dir.join(format!("kl_{tag}.json")))
    }

    /// Writes every table to the cache directory (no-op without one).
    pub fn persist(&self) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
        let tables: Vec<Arc<KlTable>> = self.tables.lock().unwrap().values().cloned().collect();
        for t in tables {
            let path = self.file_for(t.datum.cartan_matrix()).expect("dir set");
            let text = serde_json::to_string(&t.snapshot()).map_err(|e| Error::Io(e.to_string()))?;
            std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

/// The roots `alpha` of a Levi with `<lambda + rho, alpha^vee>` integral,
/// presented as an abstract root datum on its simple roots.
#[derive(Debug)]
pub struct IntegralSubsystem {
    /// Ambient indices of the integral positive roots.
    pub positive: Vec<usize>,
    /// Ambient indices of its simple roots (indecomposable integral positive roots).
    pub simple: Vec<usize>,
    pub datum: RootDatum,
}

impl IntegralSubsystem {
    /// Reflection in the `k`-th simple root of the subsystem.
    pub fn reflect(&self, ambient: &RootDatum, k: usize, v: &Weight) -> Weight {
        ambient.reflect_in(self.simple[k], v)
    }

    pub fn pairing(&self, ambient: &RootDatum, v: &Weight, k: usize) -> Q {
        ambient.pairing_positive(v, self.simple[k])
    }
}

pub fn integral_subsystem(datum: &RootDatum, levi: &LeviDatum, lambda0: &Weight) -> IntegralSubsystem {
    let shifted = lambda0 + &datum.rho();
    let positive: Vec<usize> = levi
        .root_indices()
        .iter()
        .copied()
        .filter(|&k| datum.pairing_positive(&shifted, k).is_integer())
        .collect();
    let roots = datum.positive_roots();
    let members: std::collections::HashSet<&RootVector> = positive.iter().map(|&k| &roots[k]).collect();
    let simple: Vec<usize> = positive
        .iter()
        .copied()
        .filter(|&k| {
            !positive.iter().any(|&a| {
                let rest: RootVector = roots[k].iter().zip(&roots[a]).map(|(x, y)| x - y).collect();
                members.contains(&rest)
            })
        })
        .collect();
    let cartan: Vec<Vec<i64>> = simple
        .iter()
        .map(|&a| {
            simple
                .iter()
                .map(|&b| {
                    let beta = datum.root_to_weight(&roots[b]);
                    datum.pairing_positive(&beta, a).to_integer() as i64
                })
                .collect()
        })
        .collect();
    let datum = RootDatum::from_cartan_matrix(cartan).expect("integral subsystems are root systems");
    IntegralSubsystem { positive, simple, datum }
}

/// Block data of a weight under the dot action of its integral Weyl group.
#[derive(Debug, Clone, Serialize)]
pub struct BlockDescriptor {
    pub integral_positive_roots: Vec<RootVector>,
    pub integral_simple_roots: Vec<RootVector>,
    /// The dot-dominant representative `lambda^+` of the orbit.
    pub dominant_rep: Weight,
    /// Subsystem simple indices fixing `lambda^+` under the dot action.
    #[serde(serialize_with = "one_based")]
    pub stabilizer: Vec<usize>,
}

/// Audit record of one level-zero evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct BaseCaseRecord {
    pub block: BlockDescriptor,
    /// `lambda = x . lambda^+`, word over the subsystem's simple reflections.
    #[serde(serialize_with = "one_based")]
    pub x: Vec<usize>,
    /// `nu = y . lambda^+`, `y` longest in its stabilizer coset.
    #[serde(serialize_with = "one_based")]
    pub y: Vec<usize>,
    pub kl: KLPolynomial,
    pub value: u64,
}

fn one_based<S: serde::Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i + 1))
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseOutcome {
    Equal,
    NotBelow,
    DifferentOrbit,
    Kl(BaseCaseRecord),
}

impl BaseOutcome {
    pub fn value(&self) -> u64 {
        match self {
            BaseOutcome::Equal => 1,
            BaseOutcome::NotBelow | BaseOutcome::DifferentOrbit => 0,
            BaseOutcome::Kl(r) => r.value,
        }
    }
}

/// Moves `v` into the dominant chamber of the subsystem; returns the
/// dominant point and the word `x` with `v = x(v^+)`.
fn to_dominant(ambient: &RootDatum, sub: &IntegralSubsystem, v: &Weight) -> (Weight, Vec<usize>) {
    let mut v = v.clone();
    let mut word = Vec::new();
    while let Some(k) = (0..sub.simple.len()).find(|&k| sub.pairing(ambient, &v, k).is_negative()) {
        v = sub.reflect(ambient, k, &v);
        word.push(k);
    }
    (v, word)
}

/// `[M_{lambda0} : L_{nu0}]` in category O of the Levi `levi` (level zero).
///
/// With `lambda^+` the dot-dominant point of the integral orbit,
/// `lambda0 = x . lambda^+` and `nu0 = y . lambda^+` where `y` is longest in
/// its coset modulo the stabilizer, the multiplicity is `P_{x,y}(1)`.
pub fn base_multiplicity(
    datum: &RootDatum,
    levi: &LeviDatum,
    lambda0: &Weight,
    nu0: &Weight,
    cache: &KlCache,
) -> Result<BaseOutcome> {
    if lambda0.rank() != datum.rank() || nu0.rank() != datum.rank() {
        return Err(Error::Dimension { expected: datum.rank(), got: lambda0.rank().min(nu0.rank()) });
    }
    if lambda0 == nu0 {
        return Ok(BaseOutcome::Equal);
    }
    if !datum.dominance_leq(nu0, lambda0, levi) {
        return Ok(BaseOutcome::NotBelow);
    }
    let sub = integral_subsystem(datum, levi, lambda0);
    let rho = datum.rho();
    let (top, xw) = to_dominant(datum, &sub, &(lambda0 + &rho));
    let (other, yw) = to_dominant(datum, &sub, &(nu0 + &rho));
    if top != other {
        return Ok(BaseOutcome::DifferentOrbit);
    }
    let stabilizer: Vec<usize> =
        (0..sub.simple.len()).filter(|&k| sub.pairing(datum, &top, k).is_zero()).collect();

    let table = cache.table(sub.datum.cartan_matrix())?;
    let g = table.group();
    let x = g.index_of(&sub.datum.element(&xw)?);
    let mut y = g.index_of(&sub.datum.element(&yw)?);
    while let Some(k) = stabilizer.iter().copied().find(|&k| g.length(g.right_mul(y, k)) > g.length(y)) {
        y = g.right_mul(y, k);
    }
    let kl = table.by_index(x, y);
    let roots = datum.positive_roots();
    let record = BaseCaseRecord {
        block: BlockDescriptor {
            integral_positive_roots: sub.positive.iter().map(|&k| roots[k].clone()).collect(),
            integral_simple_roots: sub.simple.iter().map(|&k| roots[k].clone()).collect(),
            dominant_rep: &top - &rho,
            stabilizer,
        },
        x: g.element(x).word().to_vec(),
        y: g.element(y).word().to_vec(),
        value: kl.eval_at_one(),
        kl,
    };
    Ok(BaseOutcome::Kl(record))
}

//! Chevalley basis structure constants and their extension to `g ⊗ C[t]/t^{n+1}`.
//!
//! Basis of `g`: `e_k` for the positive roots (`0..N`), `f_k = e_{-k}`
//! (`N..2N`), then the simple coroots `h_i` (`2N..2N+r`).

use std::collections::HashMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::root_datum::{RootDatum, RootVector};

/// A sparse element of `g` or `g_n`: `(basis index, coefficient)` pairs.
pub type Sparse = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
pub struct ChevalleyBasis {
    rank: usize,
    npos: usize,
    /// All roots, positive ones first, indexed like the `e` basis vectors.
    roots: Vec<RootVector>,
    table: Vec<Vec<Sparse>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    E(usize),
    F(usize),
    H(usize),
}

impl ChevalleyBasis {
    pub fn new(datum: &RootDatum) -> Result<Self> {
        let npos = datum.num_positive_roots();
        let rank = datum.rank();
        let mut roots: Vec<RootVector> = datum.positive_roots().to_vec();
        roots.extend(datum.positive_roots().iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let index: HashMap<RootVector, usize> = roots.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let mut constants = Constants { datum, roots: &roots, index: &index, npos, memo: HashMap::new() };

        let dim = 2 * npos + rank;
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for a in 0..2 * npos {
            for b in 0..2 * npos {
                let sum: RootVector = roots[a].iter().zip(&roots[b]).map(|(x, y)| x + y).collect();
                if sum.iter().all(|&c| c == 0) {
                    let k = a.min(b);
                    let sign = if a < npos { 1 } else { -1 };
                    table[a][b] = datum
                        .coroot(k)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (2 * npos + i, sign * c))
                        .collect();
                } else if let Some(&c) = index.get(&sum) {
                    table[a][b] = vec![(c, constants.n(a, b))];
                }
            }
            for i in 0..rank {
                let c = datum.root_pairing_simple(&roots[a], i);
                if c != 0 {
                    table[2 * npos + i][a] = vec![(a, c)];
                    table[a][2 * npos + i] = vec![(a, -c)];
                }
            }
        }
        let basis = ChevalleyBasis { rank, npos, roots, table };
        basis.check()?;
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        2 * self.npos + self.rank
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_positive_roots(&self) -> usize {
        self.npos
    }

    pub fn e(&self, k: usize) -> usize {
        k
    }

    pub fn f(&self, k: usize) -> usize {
        self.npos + k
    }

    pub fn h(&self, i: usize) -> usize {
        2 * self.npos + i
    }

    pub fn kind(&self, b: usize) -> BasisKind {
        if b < self.npos {
            BasisKind::E(b)
        } else if b < 2 * self.npos {
            BasisKind::F(b - self.npos)
        } else {
            BasisKind::H(b - 2 * self.npos)
        }
    }

    /// Root of a basis vector; zero for the Cartan part.
    pub fn weight(&self, b: usize) -> RootVector {
        if b < 2 * self.npos {
            self.roots[b].clone()
        } else {
            vec![0; self.rank]
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> &Sparse {
        &self.table[a][b]
    }

    /// `[x_i, y_j] = [x, y]_{i+j}` in `g_n`; basis index is `degree * dim + b`.
    pub fn bracket_n(&self, n: usize, a: usize, b: usize) -> Sparse {
        let dim = self.dim();
        let (i, x) = (a / dim, a % dim);
        let (j, y) = (b / dim, b % dim);
        if i + j > n {
            return Vec::new();
        }
        self.table[x][y].iter().map(|&(c, v)| ((i + j) * dim + c, v)).collect()
    }

    fn check(&self) -> Result<()> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                let mut s = self.table[a][b].clone();
                s.extend(self.table[b][a].iter().cloned());
                if !collect(s).is_empty() {
                    return Err(Error::Internal(format!("bracket not antisymmetric on ({a}, {b})")));
                }
            }
        }
        for a in 0..dim {
            for b in a + 1..dim {
                for c in b + 1..dim {
                    let mut s = self.nested(a, b, c);
                    s.extend(self.nested(b, c, a));
                    s.extend(self.nested(c, a, b));
                    if !collect(s).is_empty() {
                        return Err(Error::Internal(format!("Jacobi identity fails on ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[x, [y, z]]`.
    fn nested(&self, x: usize, y: usize, z: usize) -> Sparse {
        self.table[y][z].iter().flat_map(|&(w, c)| self.table[x][w].iter().map(move |&(u, d)| (u, c * d))).collect()
    }
}

/// Sums duplicate indices and drops zeros; output sorted by index.
pub fn collect(terms: Sparse) -> Sparse {
    let mut m: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
    for (k, v) in terms {
        *m.entry(k).or_insert(0) += v;
    }
    m.into_iter().filter(|&(_, v)| v != 0).collect()
}

struct Constants<'a> {
    datum: &'a RootDatum,
    roots: &'a [RootVector],
    index: &'a HashMap<RootVector, usize>,
    npos: usize,
    memo: HashMap<(usize, usize), i64>,
}

impl Constants<'_> {
    fn neg(&self, a: usize) -> usize {
        if a < self.npos { a + self.npos } else { a - self.npos }
    }

    fn norm(&self, a: usize) -> i64 {
        self.datum.inner(&self.roots[a], &self.roots[a])
    }

    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s: RootVector = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index.get(&s).copied()
    }

    fn diff(&self, a: usize, b: usize) -> Option<usize> {
        self.sum(a, self.neg(b))
    }

    /// `N_{a,b}` for roots `a`, `b` with `a + b` a root.
    fn n(&mut self, a: usize, b: usize) -> i64 {
        if let Some(&v) = self.memo.get(&(a, b)) {
            return v;
        }
        let npos = self.npos;
        let v = match (a < npos, b < npos) {
            (true, true) => self.positive(a, b),
            (false, false) => -self.n(self.neg(a), self.neg(b)),
            _ => {
                // With a + b + c = 0: N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b).
                let c = self.neg(self.sum(a, b).expect("a + b is a root"));
                let (num, den) = if (b < npos) == (c < npos) {
                    (self.n(b, c) * self.norm(c), self.norm(a))
                } else {
                    (self.n(c, a) * self.norm(c), self.norm(b))
                };
                debug_assert_eq!(num % den, 0);
                num / den
            }
        };
        self.memo.insert((a, b), v);
        v
    }

    fn positive(&mut self, a: usize, b: usize) -> i64 {
        if a > b {
            return -self.n(b, a);
        }
        let xi = self.sum(a, b).expect("a + b is a root");
        let a1 = (0..xi).find(|&k| self.diff(xi, k).is_some()).expect("non-simple root has an extraspecial pair");
        let b1 = self.diff(xi, a1).unwrap();
        let n1 = self.p_string(a1, b1) + 1;
        if a == a1 {
            return n1;
        }
        // Non-extraspecial special pair, expressed through the extraspecial one.
        let (mut num, mut den) = (0i128, 1i128);
        let add = |num: &mut i128, den: &mut i128, t: i128, d: i128| {
            let nn = *num * d + t * *den;
            let dd = *den * d;
            let g = nn.gcd(&dd).max(1);
            *num = nn / g;
            *den = dd / g;
        };
        let (na1, nb1) = (self.neg(a1), self.neg(b1));
        if let Some(r) = self.diff(b, a1) {
            let t = self.n(b, na1) as i128 * self.n(a, nb1) as i128;
            add(&mut num, &mut den, t, self.norm(r) as i128);
        }
        if let Some(r) = self.diff(a, a1) {
            let t = self.n(na1, a) as i128 * self.n(b, nb1) as i128;
            add(&mut num, &mut den, t, self.norm(r) as i128);
        }
        let total = num * self.norm(xi) as i128;
        let d = den * n1 as i128;
        debug_assert_eq!(total % d, 0);
        (total / d) as i64
    }

    /// Largest `p` with `b - p a` a root.
    fn p_string(&self, a: usize, b: usize) -> i64 {
        let mut p = 0;
        let mut cur = b;
        while let Some(next) = self.diff(cur, a) {
            p += 1;
            cur = next;
        }
        p
    }
}

//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use trunco::{RootDatum, Weight};

/// Laurent polynomial in `v`: exponent -> coefficient.
pub type Laurent = BTreeMap<i32, i64>;

fn add(a: &mut Laurent, b: &Laurent, scale: i64, shift: i32) {
    for (&k, &c) in b {
        let e = a.entry(k + shift).or_insert(0);
        *e += scale * c;
        if *e == 0 {
            a.remove(&(k + shift));
        }
    }
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&k, &c) in a {
        add(&mut out, b, c, k);
    }
    out
}

fn bar(a: &Laurent) -> Laurent {
    a.iter().map(|(&k, &c)| (-k, c)).collect()
}

/// Weyl group as the orbit of `rho`: element -> (word applied right to left, length).
pub struct Orbit {
    pub elements: Vec<Vec<i64>>,
    pub words: Vec<Vec<usize>>,
    pub lengths: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
    cartan: Vec<Vec<i64>>,
}

impl Orbit {
    pub fn new(datum: &RootDatum) -> Self {
        let r = datum.rank();
        let cartan = datum.cartan_matrix().to_vec();
        let rho = vec![1i64; r];
        let mut elements = vec![rho.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(rho, 0usize)]);
        let mut k = 0;
        while k < elements.len() {
            for i in 0..r {
                let img = reflect(&cartan, i, &elements[k]);
                if !index.contains_key(&img) {
                    index.insert(img.clone(), elements.len());
                    let mut w = vec![i];
                    w.extend(&words[k]);
                    elements.push(img);
                    words.push(w);
                }
            }
            k += 1;
        }
        // l(w) = #{beta > 0 : <w rho, beta^vee> < 0}.
        let lengths = elements
            .iter()
            .map(|e| {
                let wt = Weight::from_ints(e);
                (0..datum.num_positive_roots()).filter(|&b| datum.pairing_positive(&wt, b) < 0.into()).count()
            })
            .collect();
        Orbit { elements, words, lengths, index, cartan }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Index of `s_i w`.
    pub fn left(&self, i: usize, w: usize) -> usize {
        self.index[&reflect(&self.cartan, i, &self.elements[w])]
    }

    /// Index of the product of the given word (applied right to left).
    pub fn product(&self, word: &[usize]) -> usize {
        let mut w = self.index[&vec![1i64; self.cartan.len()]];
        for &i in word.iter().rev() {
            w = self.left(i, w);
        }
        w
    }
}

fn reflect(cartan: &[Vec<i64>], i: usize, v: &[i64]) -> Vec<i64> {
    let c = v[i];
    v.iter().enumerate().map(|(k, &x)| x - c * cartan[k][i]).collect()
}

/// KL polynomials from the bar involution on the Hecke algebra (standard
/// basis `H_w`, `H_s^2 = 1 + (v^{-1} - v) H_s`). Returns `P[x][y]` as
/// coefficient lists in `q`, indexed like `orbit.elements`.
pub fn bar_involution_kl(orbit: &Orbit) -> Vec<Vec<Vec<i64>>> {
    let n = orbit.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&w| orbit.lengths[w]);

    // bar(H_x) = sum_y r[y][x] H_y, built from bar(H_s) = H_s + (v - v^{-1}).
    let mut r: Vec<Vec<Laurent>> = vec![vec![Laurent::new(); n]; n];
    for &x in &order {
        if orbit.lengths[x] == 0 {
            r[x][x] = Laurent::from([(0, 1)]);
            continue;
        }
        let (s, rest) = (orbit.words[x][0], orbit.product(&orbit.words[x][1..]));
        let column: Vec<Laurent> = (0..n).map(|y| r[y][rest].clone()).collect();
        let mut out = vec![Laurent::new(); n];
        for (y, c) in column.iter().enumerate() {
            if c.is_empty() {
                continue;
            }
            // H_s H_y
            let sy = orbit.left(s, y);
            add(&mut out[sy], c, 1, 0);
            if orbit.lengths[sy] < orbit.lengths[y] {
                add(&mut out[y], &mul(c, &Laurent::from([(-1, 1), (1, -1)])), 1, 0);
            }
            // (v - v^{-1}) H_y
            add(&mut out[y], &mul(c, &Laurent::from([(1, 1), (-1, -1)])), 1, 0);
        }
        for (y, c) in out.into_iter().enumerate() {
            r[y][x] = c;
        }
    }

    let mut p = vec![vec![Vec::new(); n]; n];
    for w in 0..n {
        let mut h: Vec<Laurent> = vec![Laurent::new(); n];
        h[w] = Laurent::from([(0, 1)]);
        for &y in order.iter().rev() {
            if y == w || orbit.lengths[y] >= orbit.lengths[w] {
                continue;
            }
            let mut rhs = Laurent::new();
            for x in 0..n {
                if x != y && !h[x].is_empty() && !r[y][x].is_empty() {
                    add(&mut rhs, &mul(&bar(&h[x]), &r[y][x]), 1, 0);
                }
            }
            for (&k, &c) in &rhs {
                assert_eq!(rhs.get(&-k).copied().unwrap_or(0), -c, "bar-invariance system is inconsistent");
            }
            h[y] = rhs.into_iter().filter(|&(k, _)| k > 0).collect();
        }
        for y in 0..n {
            if h[y].is_empty() {
                continue;
            }
            let d = (orbit.lengths[w] - orbit.lengths[y]) as i32;
            let mut coeffs = Vec::new();
            for (&k, &c) in &h[y] {
                let i = ((d - k) / 2) as usize;
                assert_eq!((d - k) % 2, 0);
                if coeffs.len() <= i {
                    coeffs.resize(i + 1, 0);
                }
                coeffs[i] = c;
            }
            p[y][w] = coeffs;
        }
    }
    p
}

/// Lower Bruhat interval of `y`: all products of subwords of a reduced word.
pub fn subword_interval(orbit: &Orbit, y: usize) -> HashSet<usize> {
    let word = &orbit.words[y];
    let mut out = HashSet::new();
    for mask in 0u32..(1 << word.len()) {
        let sub: Vec<usize> = word.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
        out.insert(orbit.product(&sub));
    }
    out
}

/// Coefficients of `prod_{beta > 0} 1 / (1 - x^beta)` up to the given height.
pub fn partition_series(datum: &RootDatum, max_height: i64) -> HashMap<Vec<i64>, u64> {
    let mut series: HashMap<Vec<i64>, u64> = HashMap::from([(vec![0; datum.rank()], 1)]);
    for beta in datum.positive_roots() {
        let h: i64 = beta.iter().sum();
        let mut next = HashMap::new();
        for (m, &c) in &series {
            let mut cur = m.clone();
            let mut height: i64 = m.iter().sum();
            while height <= max_height {
                *next.entry(cur.clone()).or_insert(0) += c;
                cur = cur.iter().zip(beta).map(|(a, b)| a + b).collect();
                height += h;
            }
        }
        series = next;
    }
    series
}

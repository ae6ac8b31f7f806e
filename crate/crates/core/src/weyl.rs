//! Exhaustively materialized Weyl groups with multiplication tables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::root_datum::{reflect_int, RootDatum, WeylElement};

/// Largest group we are willing to tabulate (|W(F4)| = 1152, |W(B6)| = 46080).
pub const MAX_ORDER: usize = 60_000;

#[derive(Debug)]
pub struct WeylGroup {
    rank: usize,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    longest: usize,
}

impl WeylGroup {
    /// Breadth-first enumeration; elements are stored sorted by length and
    /// then by their lexicographically minimal reduced word.
    pub(crate) fn build(datum: &RootDatum, max_order: usize) -> Result<Self> {
        let r = datum.rank();
        let cartan = datum.cartan_matrix();
        let mut elements = vec![datum.identity()];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(elements[0].rho_image().to_vec(), 0);
        let mut layer = vec![0usize];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &p in &layer {
                for i in 0..r {
                    // w s_i (rho) = w(rho - alpha_i)
                    let parent = &elements[p];
                    let mut arg = vec![1i64; r];
                    reflect_int(cartan, i, &mut arg);
                    let image: Vec<i64> = parent
                        .matrix()
                        .iter()
                        .map(|row| row.iter().zip(&arg).map(|(a, b)| a * b).sum())
                        .collect();
                    if index.contains_key(&image) {
                        continue;
                    }
                    let child = datum.element_from_rho_image(image.clone());
                    if child.length() != parent.length() + 1 {
                        continue;
                    }
                    index.insert(image, elements.len());
                    next.push(elements.len());
                    elements.push(child);
                    if elements.len() > max_order {
                        return Err(Error::Contract(format!(
                            "Weyl group exceeds the tabulation budget of {max_order} elements"
                        )));
                    }
                }
            }
            layer = next;
        }
        elements.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.word().cmp(b.word())));
        let index: HashMap<Vec<i64>, usize> =
            elements.iter().enumerate().map(|(k, w)| (w.rho_image().to_vec(), k)).collect();
        let mut left = vec![vec![0; r]; elements.len()];
        let mut right = vec![vec![0; r]; elements.len()];
        for (k, w) in elements.iter().enumerate() {
            for i in 0..r {
                let mut l = w.rho_image().to_vec();
                reflect_int(cartan, i, &mut l);
                left[k][i] = index[&l];
                let mut arg = vec![1i64; r];
                reflect_int(cartan, i, &mut arg);
                let rimg: Vec<i64> =
                    w.matrix().iter().map(|row| row.iter().zip(&arg).map(|(a, b)| a * b).sum()).collect();
                right[k][i] = index[&rimg];
            }
        }
        let longest = elements.len() - 1;
        Ok(WeylGroup { rank: r, elements, index, left, right, longest })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[w.rho_image()]
    }

    pub fn length(&self, k: usize) -> usize {
        self.elements[k].length()
    }

    /// Index of `s_i w`.
    pub fn left_mul(&self, k: usize, i: usize) -> usize {
        self.left[k][i]
    }

    /// Index of `w s_i`.
    pub fn right_mul(&self, k: usize, i: usize) -> usize {
        self.right[k][i]
    }

    pub fn longest(&self) -> usize {
        self.longest
    }

    /// Smallest `i` with `s_i w < w`.
    pub fn first_left_descent(&self, k: usize) -> Option<usize> {
        self.elements[k].rho_image().iter().position(|&c| c < 0)
    }

    /// Bruhat order on indices via the lifting property.
    pub fn bruhat_leq(&self, mut x: usize, mut y: usize) -> bool {
        while let Some(i) = self.first_left_descent(y) {
            let sx = self.left[x][i];
            if self.length(sx) < self.length(x) {
                x = sx;
            }
            y = self.left[y][i];
        }
        x == 0
    }
}

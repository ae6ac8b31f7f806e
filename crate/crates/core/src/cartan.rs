//! Cartan types and their Cartan matrices (Bourbaki numbering).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A simple type such as `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::CartanType(format!("{family:?}{rank} is not a valid type")))
        }
    }

    /// Entry `[i][j]` is `<alpha_j, alpha_i^vee>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.family {
            Family::A => (1..r).for_each(|i| link(i - 1, i, -1, -1)),
            Family::B => {
                (1..r - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(r - 2, r - 1, -1, -2);
            }
            Family::C => {
                (1..r - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(r - 2, r - 1, -2, -1);
            }
            Family::D => {
                (1..r - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(r - 3, r - 1, -1, -1);
            }
            Family::E => {
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                (3..r).for_each(|i| link(i - 1, i, -1, -1));
            }
            Family::F => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
            Family::G => link(0, 1, -3, -1),
        }
        a
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// A semisimple type: a product of simple factors, e.g. `A1xA1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub factors: Vec<SimpleType>,
}

impl CartanType {
    pub fn simple(family: Family, rank: usize) -> Result<Self> {
        Ok(CartanType { factors: vec![SimpleType::new(family, rank)?] })
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }

    /// Block-diagonal Cartan matrix of the product.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut a = vec![vec![0i64; r]; r];
        let mut offset = 0;
        for factor in &self.factors {
            let block = factor.cartan_matrix();
            for (i, row) in block.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    a[offset + i][offset + j] = x;
                }
            }
            offset += factor.rank;
        }
        a
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::CartanType("empty type string".into()));
        }
        let factors = s
            .split(['x', 'X'])
            .map(|part| {
                let part = part.trim();
                let mut chars = part.chars();
                let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
                    Some('A') => Family::A,
                    Some('B') => Family::B,
                    Some('C') => Family::C,
                    Some('D') => Family::D,
                    Some('E') => Family::E,
                    Some('F') => Family::F,
                    Some('G') => Family::G,
                    _ => return Err(Error::CartanType(format!("unknown family in {part:?}"))),
                };
                let rank: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| Error::CartanType(format!("bad rank in {part:?}")))?;
                SimpleType::new(family, rank)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CartanType { factors })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

//! Permutations, permutation groups, and the automorphism groups of orthosets.

mod group;
mod search;
mod transitivity;

pub use group::PermGroup;
pub use search::{automorphism_group, find_automorphism, is_automorphism};
pub use transitivity::*;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("group enumeration exceeded its budget of {budget} elements")]
    GroupTooLarge { budget: u64 },
    #[error("the two points must be distinct")]
    EqualPoints,
    #[error("permutation is not an automorphism of the orthoset")]
    NotAutomorphism,
    #[error("permutation acts on {found} points, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("{0}")]
    InvalidArgument(String),
}

/// A bijection of `0..n`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { img: (0..n).collect() }
    }

    pub fn from_images(img: Vec<usize>) -> Result<Self, PermError> {
        let n = img.len();
        let mut seen = vec![false; n];
        for &x in &img {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotBijection(n));
            }
        }
        Ok(Permutation { img })
    }

    /// Builds from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(PermError::NotBijection(n));
                }
                img[x] = c[(i + 1) % c.len()];
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.img
    }

    pub fn apply(&self, p: usize) -> usize {
        self.img[p]
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { img: other.img.iter().map(|&x| self.img[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { img: inv }
    }

    /// `g⁻¹ ∘ self ∘ g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().compose(self).compose(g)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Nontrivial cycles, each starting at its least point, in order of that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.img[s] == s {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.img[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.img[x];
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_lcm(acc, c.len() as u64))
    }

    pub fn fixes(&self, p: usize) -> bool {
        self.img[p] == p
    }

    /// Least point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.img.iter().enumerate().position(|(i, &x)| i != x)
    }
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn num_lcm(a: u64, b: u64) -> u64 {
    a / num_gcd(a, b) * b
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for c in self.cycles() {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.img.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let img = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(img).map_err(serde::de::Error::custom)
    }
}

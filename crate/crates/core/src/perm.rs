//! Permutations of `{1..d}` and enumeration of small symmetric groups.
//!
//! Composition uses the right-action convention throughout the crate:
//! `apply(compose(g, h), i) == apply(h, apply(g, i))`, so that `x^(gh) = (x^g)^h`.
//! Points are 1-based in the public API; [`Perm::map_index`] is the 0-based
//! view used when a permutation acts on graph vertices.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest degree accepted by [`enumerate_sym`].
pub const MAX_ENUMERATION_DEGREE: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("image sequence is not a bijection of 1..={0}")]
    NotBijection(usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("enumeration degree {0} outside 1..={MAX_ENUMERATION_DEGREE}")]
    EnumerationGuard(usize),
    #[error("colour {value} outside 1..={m}")]
    ColourRange { value: usize, m: usize },
}

/// A colour in `1..=m`. The palette size is carried by the context.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colour(u8);

impl Colour {
    pub const MAX_PALETTE: usize = u8::MAX as usize;

    pub fn new(value: usize, m: usize) -> Result<Self, PermError> {
        if value == 0 || value > m || value > Self::MAX_PALETTE {
            return Err(PermError::ColourRange { value, m });
        }
        Ok(Colour(value as u8))
    }

    /// Caller guarantees `1 <= value <= 255`.
    pub(crate) fn from_raw(value: u8) -> Self {
        debug_assert!(value > 0);
        Colour(value)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn raw(self) -> u8 {
        self.0
    }

    /// The colour `pi` sends this one to.
    pub fn permuted(self, pi: &Perm) -> Colour {
        Colour(pi.apply(self.get()) as u8)
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A bijection of `{1..d}`, stored as 0-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its 1-based image sequence.
    pub fn from_images(images: &[usize]) -> Result<Perm, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &img in images {
            if img == 0 || img > d || seen[img - 1] {
                return Err(PermError::NotBijection(d));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u32);
        }
        Ok(Perm { images: out })
    }

    /// Builds a permutation from 0-based images.
    pub fn from_indices(images: Vec<usize>) -> Result<Perm, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &img in &images {
            if img >= d || seen[img] {
                return Err(PermError::NotBijection(d));
            }
            seen[img] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation of degree `degree` from disjoint 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm, PermError> {
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &point) in cycle.iter().enumerate() {
                if point == 0 || point > degree {
                    return Err(PermError::OutOfRange { point, degree });
                }
                if touched[point - 1] {
                    return Err(PermError::NotBijection(degree));
                }
                touched[point - 1] = true;
                images[point - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Perm::from_images(&images)
    }

    /// The transposition `(a b)`; `a == b` gives the identity.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Perm, PermError> {
        if a == b {
            if a == 0 || a > degree {
                return Err(PermError::OutOfRange { point: a, degree });
            }
            return Ok(Perm::identity(degree));
        }
        Perm::from_cycles(degree, &[&[a, b]])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    /// Image of the 1-based point `i`. Panics when `i` is out of range.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn checked_apply(&self, i: usize) -> Result<usize, PermError> {
        if i == 0 || i > self.degree() {
            return Err(PermError::OutOfRange {
                point: i,
                degree: self.degree(),
            });
        }
        Ok(self.apply(i))
    }

    /// 0-based view: image of index `i` in `0..degree`.
    #[inline]
    pub fn map_index(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Perm {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Order exactly two; the identity is not an involution.
    pub fn is_involution(&self) -> bool {
        !self.is_identity()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, &img)| self.images[img as usize] == i as u32)
    }

    /// Disjoint cycles including fixed points, each starting at its smallest
    /// point, sorted by that point. 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur + 1);
                cur = self.images[cur] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        lengths
    }

    /// Number of 2-cycles.
    pub fn two_cycle_count(&self) -> usize {
        self.cycle_type().iter().filter(|&&l| l == 2).count()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &img)| *i as u32 == img)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(Vec::len)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Canonical decomposition into transpositions whose right-action product
    /// is `self`: each cycle `(c1 c2 .. ck)` becomes `(c1 c2)(c1 c3)..(c1 ck)`,
    /// cycles taken in order of their smallest point.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for cycle in self.cycles() {
            for &c in &cycle[1..] {
                out.push((cycle[0], c));
            }
        }
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation with fixed points omitted, `()` for the identity.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "({})", c.iter().join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Perm::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// All `d!` permutations of `{1..d}` in lexicographic order of image sequence.
pub fn enumerate_sym(d: usize) -> Result<Vec<Perm>, PermError> {
    if d == 0 || d > MAX_ENUMERATION_DEGREE {
        return Err(PermError::EnumerationGuard(d));
    }
    Ok((0..d as u32)
        .permutations(d)
        .map(|images| Perm { images })
        .collect())
}

/// Fixed-point-free involutions of `{1..d}`, lexicographic.
pub fn fixed_point_free_involutions(d: usize) -> Result<Vec<Perm>, PermError> {
    Ok(enumerate_sym(d)?
        .into_iter()
        .filter(|p| p.is_involution() && p.fixed_points().is_empty())
        .collect())
}

/// `m^(k^2) > m * (k!)^2`, in exact integer arithmetic.
///
/// Counts double cosets of a `k`-set stabiliser against the rank `m + 1`
/// of a point stabiliser.
pub fn double_coset_lower_bound(m: usize, k: usize) -> bool {
    let m_big = BigUint::from(m);
    let lhs = m_big.pow((k * k) as u32);
    let fact: BigUint = (1..=k).map(BigUint::from).product();
    let rhs = &m_big * &fact * &fact;
    lhs > rhs
}

//! Image-array permutations on `0..degree`.
//!
//! Composition convention used everywhere in this crate: `p.compose(&q)`
//! applies `p` first and then `q`, i.e. `(pq)(x) = q(p(x))`. This is the
//! natural convention for right actions (automorphisms). Connection elements
//! such as `s_i = r_{i-1} r_i` are written as functions acting on the left;
//! for those use [`Permutation::after`], which reads like function
//! composition: `a.after(&b)` applies `b` first.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &x) in images.iter().enumerate() {
            let x = x as usize;
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} of point {i} is out of range for degree {n}"
                )));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("point {x} is hit twice")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Trusted constructor for image arrays produced internally.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let x = x as usize;
                if x >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle point {x} out of range for degree {degree}"
                    )));
                }
                if touched[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears in more than one cycle position"
                    )));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn into_images(self) -> Vec<u32> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// `self` first, then `other`.
    pub fn try_compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(self.compose(other))
    }

    /// `self` first, then `other`. Panics on degree mismatch; use
    /// [`Permutation::try_compose`] for untrusted input.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    /// Function composition `self ∘ other`: `other` is applied first.
    pub fn after(&self, other: &Permutation) -> Permutation {
        other.compose(self)
    }

    /// Composition of a sequence written as a product of functions:
    /// `product_of_functions([a, b, c]) = a ∘ b ∘ c`, so `c` acts first.
    pub fn product_of_functions<'a, I>(degree: usize, factors: I) -> Permutation
    where
        I: IntoIterator<Item = &'a Permutation>,
        I::IntoIter: DoubleEndedIterator,
    {
        factors
            .into_iter()
            .rev()
            .fold(Permutation::identity(degree), |acc, f| acc.compose(f))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut x = self.images[start];
            while x as usize != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    fn cycle_lengths(&self) -> Vec<u64> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lens.push(len);
        }
        lens
    }

    /// Order as the lcm of the cycle lengths.
    ///
    /// Panics if the order does not fit in a `u64`; see [`Permutation::order_big`].
    pub fn order(&self) -> u64 {
        self.cycle_lengths().into_iter().fold(1u64, |acc, l| {
            let g = acc.gcd(&l);
            (acc / g)
                .checked_mul(l)
                .expect("permutation order overflows u64")
        })
    }

    pub fn order_big(&self) -> BigUint {
        self.cycle_lengths()
            .into_iter()
            .fold(BigUint::from(1u32), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// Length of the cycle through `point`.
    pub fn cycle_length_of(&self, point: u32) -> usize {
        let mut len = 1;
        let mut x = self.image(point);
        while x != point {
            x = self.image(x);
            len += 1;
        }
        len
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 == x)
            .map(|(i, _)| i as u32)
    }

    /// Smallest moved point, if any.
    pub fn first_moved(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// Disjoint-union sum: `self` on `0..d1`, `other` shifted onto `d1..d1+d2`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&x| x + shift));
        Permutation { images }
    }

    /// Restricts to a union of orbits given as a sorted point list; the
    /// result acts on positions within `points`.
    pub fn restrict(&self, points: &[u32]) -> Result<Permutation> {
        let mut pos = vec![u32::MAX; self.degree()];
        for (k, &p) in points.iter().enumerate() {
            pos[p as usize] = k as u32;
        }
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let q = pos[self.image(p) as usize];
            if q == u32::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "point set is not invariant: {p} maps outside"
                )));
            }
            images.push(q);
        }
        Ok(Permutation { images })
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(d: usize, c: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(d, c).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let p = cyc(5, &[&[0, 3, 1], &[2, 4]]);
        let id = Permutation::identity(5);
        assert_eq!(id.compose(&p), p);
        assert_eq!(p.compose(&id), p);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn compose_is_left_to_right() {
        let a = cyc(3, &[&[0, 1]]);
        let b = cyc(3, &[&[1, 2]]);
        let ab = a.compose(&b);
        // hand enumeration: 0 ->a 1 ->b 2; 1 ->a 0 ->b 0; 2 ->a 2 ->b 1
        assert_eq!(ab.images(), &[2, 0, 1]);
        assert_eq!(ab, cyc(3, &[&[0, 2, 1]]));
        // after() is function composition
        assert_eq!(b.after(&a), ab);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(
            a.try_compose(&b),
            Err(Error::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(Permutation::identity(4).order(), 1);
        assert_eq!(cyc(4, &[&[0, 1, 2, 3]]).order(), 4);
        let p = cyc(5, &[&[0, 1], &[2, 3, 4]]);
        // repeated composition oracle
        let mut q = p.clone();
        let mut k = 1;
        while !q.is_identity() {
            q = q.compose(&p);
            k += 1;
        }
        assert_eq!(k, 6);
        assert_eq!(p.order(), 6);
        assert_eq!(p.order_big(), BigUint::from(6u32));
    }

    #[test]
    fn powers() {
        let p = cyc(5, &[&[0, 1, 2, 3, 4]]);
        assert_eq!(p.pow(5), Permutation::identity(5));
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.pow(2), p.compose(&p));
        assert_eq!(p.pow(-3), p.pow(2));
    }

    #[test]
    fn product_of_functions_applies_last_factor_first() {
        let a = cyc(3, &[&[0, 1]]);
        let b = cyc(3, &[&[1, 2]]);
        let p = Permutation::product_of_functions(3, [&a, &b]);
        assert_eq!(p, b.compose(&a));
    }

    #[test]
    fn restrict_and_direct_sum() {
        let p = cyc(4, &[&[0, 1], &[2, 3]]);
        let r = p.restrict(&[2, 3]).unwrap();
        assert_eq!(r.images(), &[1, 0]);
        assert!(p.restrict(&[1, 2]).is_err());
        let s = r.direct_sum(&Permutation::identity(2));
        assert_eq!(s.images(), &[1, 0, 2, 3]);
    }

    #[test]
    fn display_uses_cycle_notation() {
        assert_eq!(cyc(4, &[&[0, 2], &[1, 3]]).to_string(), "(0 2)(1 3)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
    }
}

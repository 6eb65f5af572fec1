//! The maniplex `2s^M` on `Fl(M) × U × Z_2`, where `U` is the group of
//! zero-sum vectors in `Z_s^m` indexed by the facets of `M`.
//!
//! Flags are indexed as `(Φ·|U| + u)·2 + δ`, where `u` is the mixed-radix
//! value of the free coordinates `x_1, …, x_{m-1}` (`x_1` least significant)
//! and `x_0 = -Σ x_j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maniplex::{Maniplex, RootedManiplex, Symmetry};
use crate::permcore::Permutation;

/// A vector of `U`: residues mod `s` with zero coordinate sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UVector {
    coords: Vec<u32>,
    s: u32,
}

impl UVector {
    pub fn new(coords: Vec<u32>, s: u32) -> Result<Self> {
        if coords.iter().any(|&x| x >= s) {
            return Err(Error::OutOfRange(format!("coordinates must be below {s}")));
        }
        let sum: u64 = coords.iter().map(|&x| x as u64).sum();
        if !sum.is_multiple_of(s as u64) {
            return Err(Error::Precondition(format!(
                "coordinate sum {sum} is not 0 mod {s}"
            )));
        }
        Ok(UVector { coords, s })
    }

    pub fn zero(m: usize, s: u32) -> Self {
        UVector {
            coords: vec![0; m],
            s,
        }
    }

    /// `a_j = e_j - e_0` (so `a_0 = 0`).
    pub fn a(j: usize, m: usize, s: u32) -> Self {
        let mut v = Self::zero(m, s);
        if j != 0 {
            v.coords[j] = 1 % s;
            v.coords[0] = (s - 1) % s;
        }
        v
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn add(&self, other: &UVector) -> UVector {
        UVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| (a + b) % self.s)
                .collect(),
            s: self.s,
        }
    }

    pub fn neg(&self) -> UVector {
        UVector {
            coords: self.coords.iter().map(|&a| (self.s - a) % self.s).collect(),
            s: self.s,
        }
    }

    pub fn scale(&self, k: i64) -> UVector {
        let s = self.s as i64;
        UVector {
            coords: self
                .coords
                .iter()
                .map(|&a| (a as i64 * k).rem_euclid(s) as u32)
                .collect(),
            s: self.s,
        }
    }

    /// `(xγ)_{π(j)} = x_j` for a permutation `π` of the facet labels.
    pub fn permute(&self, pi: &[u32]) -> UVector {
        let mut coords = vec![0; self.coords.len()];
        for (j, &x) in self.coords.iter().enumerate() {
            coords[pi[j] as usize] = x;
        }
        UVector { coords, s: self.s }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    /// Additive order in `U`.
    pub fn order(&self) -> u32 {
        (1..=self.s)
            .find(|&k| self.scale(k as i64).is_zero())
            .unwrap_or(self.s)
    }

    fn encode(&self) -> u64 {
        let mut u = 0u64;
        for &x in self.coords[1..].iter().rev() {
            u = u * self.s as u64 + x as u64;
        }
        u
    }

    fn decode(mut u: u64, m: usize, s: u32) -> Self {
        let mut coords = vec![0u32; m];
        let mut sum = 0u64;
        for c in coords.iter_mut().skip(1) {
            *c = (u % s as u64) as u32;
            sum += *c as u64;
            u /= s as u64;
        }
        coords[0] = ((s as u64 - sum % s as u64) % s as u64) as u32;
        UVector { coords, s }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSMFlag {
    pub flag: u32,
    pub x: UVector,
    pub delta: u8,
}

/// `2s^M` together with the labelling of the facets of `M`.
#[derive(Clone, Debug)]
pub struct TwoSM {
    pub maniplex: RootedManiplex,
    pub s: u32,
    /// Number of facets of `M`.
    pub m: usize,
    /// Facet label `j` of each flag of `M` (`F_0` contains the base flag).
    pub facet_index: Vec<u32>,
    base_flags: usize,
    u_size: u64,
}

#[derive(Serialize)]
pub struct TwoSMMeta {
    pub m: usize,
    pub s: u32,
    pub construction: &'static str,
}

impl TwoSM {
    pub fn meta(&self) -> TwoSMMeta {
        TwoSMMeta {
            m: self.m,
            s: self.s,
            construction: "two_s_m",
        }
    }

    pub fn u_size(&self) -> u64 {
        self.u_size
    }

    pub fn encode(&self, f: &TwoSMFlag) -> u32 {
        ((f.flag as u64 * self.u_size + f.x.encode()) * 2 + f.delta as u64) as u32
    }

    pub fn decode(&self, index: u32) -> TwoSMFlag {
        let index = index as u64;
        let delta = (index % 2) as u8;
        let rest = index / 2;
        TwoSMFlag {
            flag: (rest / self.u_size) as u32,
            x: UVector::decode(rest % self.u_size, self.m, self.s),
            delta,
        }
    }

    fn map_flags(&self, f: impl Fn(TwoSMFlag) -> TwoSMFlag) -> Permutation {
        let n = self.maniplex.flag_count() as u32;
        let images = (0..n).map(|i| self.encode(&f(self.decode(i)))).collect();
        Permutation::from_images(images).expect("flag map is a bijection")
    }

    fn is_automorphism(&self, p: &Permutation) -> bool {
        self.maniplex
            .maniplex
            .adjacency()
            .iter()
            .all(|r| r.compose(p) == p.compose(r))
    }

    /// `τ_y: (Φ, x, δ) ↦ (Φ, x + y, δ)`.
    pub fn translation(&self, y: &UVector) -> Result<Permutation> {
        if y.coords.len() != self.m || y.s != self.s {
            return Err(Error::Precondition("vector does not belong to U".into()));
        }
        Ok(self.map_flags(|f| TwoSMFlag { x: f.x.add(y), ..f }))
    }

    /// `χ: (Φ, x, δ) ↦ (Φ, -x, 1-δ)`.
    pub fn chi(&self) -> Permutation {
        self.map_flags(|f| TwoSMFlag {
            x: f.x.neg(),
            delta: 1 - f.delta,
            ..f
        })
    }

    /// `τ_{a_j}` for `1 ≤ j < m` and `χ`, each checked to commute with every `r̂_i`.
    pub fn translation_chi_automorphisms(&self) -> Result<Vec<(String, Permutation)>> {
        let mut out = Vec::with_capacity(self.m);
        for j in 1..self.m {
            out.push((
                format!("tau_a{j}"),
                self.translation(&UVector::a(j, self.m, self.s))?,
            ));
        }
        out.push(("chi".to_string(), self.chi()));
        for (name, p) in &out {
            if !self.is_automorphism(p) {
                return Err(Error::Verification(format!(
                    "{name} is not an automorphism"
                )));
            }
        }
        Ok(out)
    }

    /// `γ̄: (Φ, x, δ) ↦ (Φγ, xγ + δ a_{0γ}, δ)` for an automorphism `γ` of `M`
    /// given as a flag permutation.
    pub fn lift_automorphism(&self, base: &Maniplex, gamma: &Permutation) -> Result<Permutation> {
        if gamma.degree() != self.base_flags || base.flag_count() != self.base_flags {
            return Err(Error::DegreeMismatch(self.base_flags, gamma.degree()));
        }
        if !base
            .adjacency()
            .iter()
            .all(|r| r.compose(gamma) == gamma.compose(r))
        {
            return Err(Error::Precondition("γ is not an automorphism of M".into()));
        }
        let mut pi = vec![u32::MAX; self.m];
        for (flag, &j) in self.facet_index.iter().enumerate() {
            let image = self.facet_index[gamma.image(flag as u32) as usize];
            if pi[j as usize] == u32::MAX {
                pi[j as usize] = image;
            } else if pi[j as usize] != image {
                return Err(Error::Precondition("γ does not permute the facets".into()));
            }
        }
        let a0 = UVector::a(pi[0] as usize, self.m, self.s);
        let lifted = self.map_flags(|f| {
            let mut x = f.x.permute(&pi);
            if f.delta == 1 {
                x = x.add(&a0);
            }
            TwoSMFlag {
                flag: gamma.image(f.flag),
                x,
                delta: f.delta,
            }
        });
        if !self.is_automorphism(&lifted) {
            return Err(Error::Verification(
                "lifted map is not an automorphism".into(),
            ));
        }
        Ok(lifted)
    }
}

/// Builds `2s^M` with base flag `(Φ_0, 0, 0)`.
pub fn build_two_s_m(m: &RootedManiplex, s: u32) -> Result<TwoSM> {
    if s == 0 {
        return Err(Error::Precondition("s must be positive".into()));
    }
    if let Some(c) = m.validate().first_failure() {
        return Err(Error::Precondition(format!(
            "M is not a maniplex: {} ({})",
            c.axiom,
            c.detail.clone().unwrap_or_default()
        )));
    }
    let facets = m.facets();
    let nf = facets.len();
    // F_0 is the base facet; the others keep the canonical order
    let base_block = facets.block_of[m.base_flag as usize];
    let relabel = |b: u32| -> u32 {
        if b == base_block {
            0
        } else if b < base_block {
            b + 1
        } else {
            b
        }
    };
    let facet_index: Vec<u32> = facets.block_of.iter().map(|&b| relabel(b)).collect();
    let u_size = (s as u64)
        .checked_pow(nf as u32 - 1)
        .ok_or_else(|| Error::Limit("|U| overflows".into()))?;
    let total = m.flag_count() as u64 * u_size * 2;
    if total > u32::MAX as u64 / 2 {
        return Err(Error::Limit(format!("2s^M would have {total} flags")));
    }
    let mut t = TwoSM {
        maniplex: Maniplex::polygon(2)?.rooted(0)?,
        s,
        m: nf,
        facet_index,
        base_flags: m.flag_count(),
        u_size,
    };
    let n = m.rank();
    let mut adjacency = Vec::with_capacity(n + 1);
    for i in 0..n {
        let r = m.maniplex.r(i);
        adjacency.push(t.permutation_on(total, |f| TwoSMFlag {
            flag: r.image(f.flag),
            ..f
        }));
    }
    let a: Vec<UVector> = (0..nf).map(|j| UVector::a(j, nf, s)).collect();
    let facet_index = t.facet_index.clone();
    adjacency.push(t.permutation_on(total, |f| {
        let aj = &a[facet_index[f.flag as usize] as usize];
        let step = if f.delta == 0 { aj.clone() } else { aj.neg() };
        TwoSMFlag {
            flag: f.flag,
            x: f.x.add(&step),
            delta: 1 - f.delta,
        }
    }));
    let base = t.encode(&TwoSMFlag {
        flag: m.base_flag,
        x: UVector::zero(nf, s),
        delta: 0,
    });
    t.maniplex = Maniplex::new(adjacency)?.rooted(base)?;
    Ok(t)
}

impl TwoSM {
    fn permutation_on(&self, total: u64, f: impl Fn(TwoSMFlag) -> TwoSMFlag + Sync) -> Permutation {
        use rayon::prelude::*;
        let images: Vec<u32> = (0..total as u32)
            .into_par_iter()
            .map(|i| self.encode(&f(self.decode(i))))
            .collect();
        Permutation::from_images(images).expect("generator is a bijection")
    }
}

/// True iff every `(n-2)`-face of `M` lies in two distinct facets.
pub fn ridges_in_two_facets(m: &RootedManiplex) -> bool {
    let facets = m.facets();
    let last = m.maniplex.r(m.rank() - 1);
    (0..m.flag_count() as u32)
        .all(|x| facets.block_of[x as usize] != facets.block_of[last.image(x) as usize])
}

/// Schläfli symbol of `2s^M`, read off the built maniplex.
pub fn two_s_m_type(m: &RootedManiplex, s: u32) -> Result<Vec<u64>> {
    if !ridges_in_two_facets(m) {
        return Err(Error::Precondition(
            "some (n-2)-face of M lies in a single facet".into(),
        ));
    }
    Ok(build_two_s_m(m, s)?.maniplex.schlafli_unchecked())
}

#[derive(Clone, Debug, Serialize)]
pub struct AutStructureReport {
    pub automorphisms_of_m: usize,
    pub automorphisms: usize,
    pub expected: u64,
    pub passed: bool,
}

/// Counts the automorphisms of `2s^M` and compares with `|Aut(M)|·2·s^{m-1}`.
pub fn verify_aut_structure(m: &RootedManiplex, s: u32) -> Result<AutStructureReport> {
    if m.classify_symmetry() != Symmetry::Regular {
        return Err(Error::Precondition("M is not regular".into()));
    }
    if !ridges_in_two_facets(m) {
        return Err(Error::Precondition(
            "some (n-2)-face of M lies in a single facet".into(),
        ));
    }
    let t = build_two_s_m(m, s)?;
    let aut_m = m.automorphism_count();
    let automorphisms = t.maniplex.automorphism_count();
    let expected = aut_m as u64 * 2 * t.u_size;
    Ok(AutStructureReport {
        automorphisms_of_m: aut_m,
        automorphisms,
        expected,
        passed: automorphisms as u64 == expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> RootedManiplex {
        Maniplex::polygon(4).unwrap().rooted(0).unwrap()
    }

    #[test]
    fn u_vectors() {
        assert!(UVector::new(vec![1, 1, 0], 2).is_ok());
        assert!(UVector::new(vec![1, 0, 0], 2).is_err());
        let a = UVector::a(2, 4, 3);
        assert_eq!(a.coords(), &[2, 0, 1, 0]);
        assert!(a.add(&a.neg()).is_zero());
        assert_eq!(a.order(), 3);
        let v = UVector::new(vec![1, 2, 0, 0], 3).unwrap();
        assert_eq!(UVector::decode(v.encode(), 4, 3), v);
    }

    #[test]
    fn square_gives_128_flags() {
        let t = build_two_s_m(&square(), 2).unwrap();
        assert_eq!(t.maniplex.flag_count(), 128);
        assert!(t.maniplex.validate().passed());
        let rn = t.maniplex.maniplex.r(2);
        assert!(rn.compose(rn).is_identity());
        assert_eq!(t.maniplex.schlafli().unwrap(), vec![4, 4]);
        assert_eq!(
            build_two_s_m(&square(), 1).unwrap().maniplex.flag_count(),
            16
        );
        assert!(build_two_s_m(&square(), 0).is_err());
    }

    #[test]
    fn flag_encoding_round_trips() {
        let t = build_two_s_m(&square(), 3).unwrap();
        for i in 0..t.maniplex.flag_count() as u32 {
            assert_eq!(t.encode(&t.decode(i)), i);
        }
        let b = t.decode(t.maniplex.base_flag);
        assert_eq!((b.flag, b.delta), (0, 0));
        assert!(b.x.is_zero());
    }

    #[test]
    fn automorphism_generators() {
        let t = build_two_s_m(&square(), 3).unwrap();
        let gens = t.translation_chi_automorphisms().unwrap();
        assert_eq!(gens.len(), 4);
        let chi = t.chi();
        assert!(chi.compose(&chi).is_identity());
        assert!(t.translation(&UVector::zero(4, 3)).unwrap().is_identity());
        let y = UVector::new(vec![1, 2, 0, 0], 3).unwrap();
        let ty = t.translation(&y).unwrap();
        let conj = Permutation::product_of_functions(ty.degree(), [&chi, &ty, &chi]);
        assert_eq!(conj, t.translation(&y.neg()).unwrap());
    }

    #[test]
    fn lifted_automorphisms() {
        let sq = square();
        let t = build_two_s_m(&sq, 2).unwrap();
        let id = Permutation::identity(8);
        assert!(t
            .lift_automorphism(&sq.maniplex, &id)
            .unwrap()
            .is_identity());
        let gamma = sq.maniplex.find_rooted_automorphism(0, 3).unwrap();
        let lg = t.lift_automorphism(&sq.maniplex, &gamma).unwrap();
        let lgi = t.lift_automorphism(&sq.maniplex, &gamma.inverse()).unwrap();
        assert!(lg.compose(&lgi).is_identity());
        // flags of the base facet with x = 0, δ = 0 map inside it
        for flag in 0..8 {
            let f = TwoSMFlag {
                flag,
                x: UVector::zero(4, 2),
                delta: 0,
            };
            let g = t.decode(lg.image(t.encode(&f)));
            assert_eq!((g.flag, g.delta), (gamma.image(flag), 0));
            assert!(g.x.is_zero());
        }
        // γ^{-1} τ_y γ = τ_{yγ}
        let y = UVector::new(vec![1, 1, 0, 0], 2).unwrap();
        let mut pi = vec![0u32; 4];
        for flag in 0..8u32 {
            pi[t.facet_index[flag as usize] as usize] = t.facet_index[gamma.image(flag) as usize];
        }
        let lhs = lgi.compose(&t.translation(&y).unwrap()).compose(&lg);
        assert_eq!(lhs, t.translation(&y.permute(&pi)).unwrap());
        let not_aut = Permutation::from_cycles(8, &[&[0, 1]]).unwrap();
        assert!(t.lift_automorphism(&sq.maniplex, &not_aut).is_err());
    }

    #[test]
    fn square_automorphism_count() {
        let r = verify_aut_structure(&square(), 2).unwrap();
        assert_eq!(r.expected, 128);
        assert!(r.passed, "{} automorphisms", r.automorphisms);
    }

    #[test]
    fn torus_types() {
        use crate::toroidal::{build_toroidal_map, Family, TorusParams};
        let m = build_toroidal_map(TorusParams::new(Family::F44, 2, 0).unwrap()).unwrap();
        let t = build_two_s_m(&m, 2).unwrap();
        assert_eq!(t.maniplex.flag_count(), 512);
        assert_eq!(two_s_m_type(&m, 2).unwrap(), vec![4, 4, 4]);
        assert_eq!(two_s_m_type(&m, 3).unwrap(), vec![4, 4, 6]);
        let r = verify_aut_structure(&m, 2).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

//! Finite permutation groups backed by a deterministic Schreier–Sims
//! stabilizer chain.

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permcore::Permutation;

const NOT_IN_ORBIT: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    // position in `reps` for every point, NOT_IN_ORBIT otherwise
    slot: Vec<u32>,
    // reps[k] maps `point` to orbit[k]
    reps: Vec<Permutation>,
    reps_inv: Vec<Permutation>,
    // Schreier generators (orbit point, generator index) known to sift
    checked: HashSet<(u32, u32)>,
}

impl Level {
    fn new(degree: usize, point: u32) -> Self {
        let mut slot = vec![NOT_IN_ORBIT; degree];
        slot[point as usize] = 0;
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            slot,
            reps: vec![Permutation::identity(degree)],
            reps_inv: vec![Permutation::identity(degree)],
            checked: HashSet::new(),
        }
    }

    /// Extends orbit and transversal after generators were appended.
    /// Existing representatives are kept, so earlier sifting results stay valid.
    fn extend_orbit(&mut self) {
        let mut k = 0;
        while k < self.orbit.len() {
            let beta = self.orbit[k];
            for g in &self.gens {
                let gamma = g.image(beta);
                if self.slot[gamma as usize] == NOT_IN_ORBIT {
                    let rep = self.reps[k].compose(g);
                    self.slot[gamma as usize] = self.orbit.len() as u32;
                    self.orbit.push(gamma);
                    self.reps_inv.push(rep.inverse());
                    self.reps.push(rep);
                }
            }
            k += 1;
        }
    }

    #[inline]
    fn rep_inv(&self, beta: u32) -> Option<&Permutation> {
        match self.slot[beta as usize] {
            NOT_IN_ORBIT => None,
            k => Some(&self.reps_inv[k as usize]),
        }
    }
}

/// Base and strong generating set of a permutation group.
///
/// Base points are chosen deterministically: whenever a new base point is
/// needed, the least point moved by the element that forced it is taken.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        let gens: Vec<Permutation> = {
            let mut seen = HashSet::new();
            generators
                .iter()
                .filter(|g| !g.is_identity() && seen.insert((*g).clone()))
                .cloned()
                .collect()
        };
        if gens.is_empty() {
            return chain;
        }
        for g in &gens {
            if chain.levels.iter().all(|l| g.image(l.point) == l.point) {
                let p = g.first_moved().expect("non-identity");
                chain.levels.push(Level::new(degree, p));
            }
        }
        for g in &gens {
            // g belongs to S_0..S_j where j is the first base point it moves
            for l in chain.levels.iter_mut() {
                l.gens.push(g.clone());
                if g.image(l.point) != l.point {
                    break;
                }
            }
        }
        for l in chain.levels.iter_mut() {
            l.extend_orbit();
        }
        chain.complete();
        chain
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` if it went all the way through).
    fn strip(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (i, l) in self.levels.iter().enumerate().skip(start) {
            let beta = g.image(l.point);
            match l.rep_inv(beta) {
                None => return (g, i),
                Some(u_inv) => {
                    if !u_inv.is_identity() {
                        g = g.compose(u_inv);
                    }
                }
            }
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let lvl = i as usize;
            let mut k = 0;
            while k < self.levels[lvl].orbit.len() {
                let beta = self.levels[lvl].orbit[k];
                let ngens = self.levels[lvl].gens.len();
                for gi in 0..ngens {
                    if self.levels[lvl].checked.contains(&(beta, gi as u32)) {
                        continue;
                    }
                    let level = &self.levels[lvl];
                    let x = &level.gens[gi];
                    let gamma = x.image(beta);
                    let ux = level.reps[k].compose(x);
                    let h = ux.compose(level.rep_inv(gamma).expect("orbit is closed"));
                    let (residue, j) = if h.is_identity() {
                        (h, self.levels.len())
                    } else {
                        self.strip(h, lvl + 1)
                    };
                    if j == self.levels.len() && residue.is_identity() {
                        self.levels[lvl].checked.insert((beta, gi as u32));
                        continue;
                    }
                    if j == self.levels.len() {
                        let p = residue.first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(self.degree, p));
                    }
                    for l in (lvl + 1)..=j {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].extend_orbit();
                    }
                    i = j as isize;
                    continue 'outer;
                }
                k += 1;
            }
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        self.levels
            .iter()
            .flat_map(|l| l.gens.iter())
            .filter(|g| seen.insert((*g).clone()))
            .cloned()
            .collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.strip(p.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    /// Visits every group element once. The callback returns `false` to stop early.
    pub fn for_each_element<F: FnMut(&Permutation) -> bool>(&self, mut f: F) {
        let k = self.levels.len();
        if k == 0 {
            f(&Permutation::identity(self.degree));
            return;
        }
        // g = u_{k-1} · … · u_0 with u_i ranging over the transversal of level i
        let mut idx = vec![0usize; k];
        let mut partial: Vec<Permutation> = Vec::with_capacity(k + 1);
        partial.push(Permutation::identity(self.degree));
        for l in (0..k).rev() {
            let next = partial.last().unwrap().compose(&self.levels[l].reps[0]);
            partial.push(next);
        }
        loop {
            if !f(partial.last().unwrap()) {
                return;
            }
            // advance the mixed-radix counter, lowest level fastest
            let mut l = 0;
            loop {
                if l == k {
                    return;
                }
                idx[l] += 1;
                if idx[l] < self.levels[l].reps.len() {
                    break;
                }
                idx[l] = 0;
                l += 1;
            }
            // partial[d] is the product over levels k-1 down to k-d
            partial.truncate(k - l);
            for m in (0..=l).rev() {
                let next = partial
                    .last()
                    .unwrap()
                    .compose(&self.levels[m].reps[idx[m]]);
                partial.push(next);
            }
        }
    }
}

/// A finite permutation group given by named generators.
///
/// The stabilizer chain is computed on first use and cached; the cache is a
/// `OnceLock`, so a group can be shared across threads.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<(String, Permutation)>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<(String, Permutation)>) -> Result<Self> {
        for (name, g) in &generators {
            if g.degree() != degree {
                return Err(Error::Schema(format!(
                    "generator {name} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    /// Generators named `g0, g1, …`.
    pub fn from_perms(degree: usize, perms: Vec<Permutation>) -> Result<Self> {
        Self::new(
            degree,
            perms
                .into_iter()
                .enumerate()
                .map(|(i, p)| (format!("g{i}"), p))
                .collect(),
        )
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[(String, Permutation)] {
        &self.generators
    }

    pub fn perms(&self) -> Vec<Permutation> {
        self.generators.iter().map(|(_, p)| p.clone()).collect()
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| {
            let gens: Vec<Permutation> = self.generators.iter().map(|(_, p)| p.clone()).collect();
            StabChain::new(self.degree, &gens)
        })
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, p.degree()));
        }
        Ok(self.chain().contains(p))
    }

    pub fn orbit(&self, x: u32) -> Result<Vec<u32>> {
        orbit(self, x)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || orbit_of(self.degree, self.perms().iter(), 0).len() == self.degree
    }

    pub fn for_each_element<F: FnMut(&Permutation) -> bool>(&self, f: F) {
        self.chain().for_each_element(f)
    }

    /// True iff every point stabilizer is trivial.
    pub fn acts_freely(&self) -> bool {
        let order = self.order();
        orbits(self.degree, &self.perms())
            .iter()
            .all(|o| BigUint::from(o.len()) == order)
    }
}

fn orbit_of<'a, I>(degree: usize, gens: I, x: u32) -> Vec<u32>
where
    I: Iterator<Item = &'a Permutation> + Clone,
{
    let mut seen = vec![false; degree];
    let mut queue = VecDeque::from([x]);
    seen[x as usize] = true;
    let mut out = vec![x];
    while let Some(y) = queue.pop_front() {
        for g in gens.clone() {
            let z = g.image(y);
            if !seen[z as usize] {
                seen[z as usize] = true;
                out.push(z);
                queue.push_back(z);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Orbit of `x` under the group's generators, in ascending order.
pub fn orbit(group: &PermGroup, x: u32) -> Result<Vec<u32>> {
    if x as usize >= group.degree {
        return Err(Error::OutOfRange(format!(
            "point {x} for degree {}",
            group.degree
        )));
    }
    Ok(orbit_of(
        group.degree,
        group.generators.iter().map(|(_, p)| p),
        x,
    ))
}

/// All orbits of `gens`, each ascending, ordered by least element.
pub fn orbits(degree: usize, gens: &[Permutation]) -> Vec<Vec<u32>> {
    let mut assigned = vec![false; degree];
    let mut out = Vec::new();
    for x in 0..degree as u32 {
        if assigned[x as usize] {
            continue;
        }
        let o = orbit_of(degree, gens.iter(), x);
        for &y in &o {
            assigned[y as usize] = true;
        }
        out.push(o);
    }
    out
}

/// Serialized form: `{"degree": d, "generators": [{"name": str, "images": [int]}]}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct GroupFile {
    pub degree: usize,
    pub generators: Vec<NamedGenerator>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct NamedGenerator {
    pub name: String,
    pub images: Vec<u32>,
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupFile {
            degree: self.degree,
            generators: self
                .generators
                .iter()
                .map(|(n, p)| NamedGenerator {
                    name: n.clone(),
                    images: p.images().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = GroupFile::deserialize(d)?;
        let mut gens = Vec::with_capacity(file.generators.len());
        for (k, g) in file.generators.into_iter().enumerate() {
            let p = Permutation::from_images(g.images)
                .map_err(|e| D::Error::custom(format!("generators[{k}] ({}): {e}", g.name)))?;
            gens.push((g.name, p));
        }
        PermGroup::new(file.degree, gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(d: usize, c: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(d, c).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::trivial(3);
        assert_eq!(g.order(), BigUint::from(1u32));
        assert!(g.contains(&Permutation::identity(3)).unwrap());
        assert_eq!(g.orbit(0).unwrap(), vec![0]);
    }

    #[test]
    fn symmetric_group_on_three_points() {
        let g = PermGroup::from_perms(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(g.order(), BigUint::from(6u32));
    }

    #[test]
    fn membership() {
        let c3 = PermGroup::from_perms(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert!(!c3.contains(&cyc(3, &[&[0, 1]])).unwrap());
        let s3 = PermGroup::from_perms(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])]).unwrap();
        assert!(s3.contains(&cyc(3, &[&[0, 2]])).unwrap());
        assert!(c3.contains(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn orbits_of_small_groups() {
        let g = PermGroup::from_perms(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(g.orbit(0).unwrap(), vec![0, 1, 2]);
        let h = PermGroup::from_perms(4, vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[2, 3]])]).unwrap();
        assert_eq!(h.orbit(2).unwrap(), vec![2, 3]);
        assert!(h.orbit(9).is_err());
    }

    #[test]
    fn element_enumeration_visits_each_element_once() {
        let g = PermGroup::from_perms(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1]])])
            .unwrap();
        let mut seen = HashSet::new();
        g.for_each_element(|p| {
            assert!(seen.insert(p.clone()));
            true
        });
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn large_symmetric_group_order() {
        let n = 30;
        let cycle: Vec<u32> = (0..n as u32).collect();
        let g = PermGroup::from_perms(n, vec![cyc(n, &[&cycle]), cyc(n, &[&[0, 1]])]).unwrap();
        let fact: BigUint = (1..=n as u32).map(BigUint::from).product();
        assert_eq!(g.order(), fact);
    }

    #[test]
    fn free_action() {
        let c4 = PermGroup::from_perms(4, vec![cyc(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert!(c4.acts_freely());
        let s3 = PermGroup::from_perms(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])]).unwrap();
        assert!(!s3.acts_freely());
    }
}

//! Maniplexes as edge-coloured flag graphs.
//!
//! A rank-`n` maniplex is stored as `n` fixed-point-free involutions
//! `r_0, …, r_{n-1}` on the flag set `0..N`. Connection elements act on the
//! left: `r_i r_j Φ` means `r_j` first. All derived permutations use the
//! crate-wide left-to-right `compose`, so `s_i = r_{i-1} r_i` is
//! `r_i.compose(r_{i-1})`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permcore::{orbits, PermGroup, Permutation};

/// A partition of `0..N` into blocks, each sorted, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<Vec<u32>>,
    pub block_of: Vec<u32>,
}

impl Partition {
    pub fn from_blocks(degree: usize, blocks: Vec<Vec<u32>>) -> Self {
        let mut block_of = vec![u32::MAX; degree];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                block_of[x as usize] = b as u32;
            }
        }
        Partition { blocks, block_of }
    }

    /// Orbits of the group generated by `gens`.
    pub fn orbits_of(degree: usize, gens: &[Permutation]) -> Self {
        Self::from_blocks(degree, orbits(degree, gens))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Maniplex {
    rank: usize,
    adjacency: Vec<Permutation>,
}

impl Maniplex {
    /// Checks shapes only; call [`Maniplex::validate`] for the axioms.
    pub fn new(adjacency: Vec<Permutation>) -> Result<Self> {
        if adjacency.is_empty() {
            return Err(Error::Precondition(
                "a maniplex needs rank at least 1".into(),
            ));
        }
        let n = adjacency[0].degree();
        if let Some(p) = adjacency.iter().find(|p| p.degree() != n) {
            return Err(Error::DegreeMismatch(n, p.degree()));
        }
        Ok(Maniplex {
            rank: adjacency.len(),
            adjacency,
        })
    }

    /// Like [`Maniplex::new`] but fails unless every axiom holds.
    pub fn new_validated(adjacency: Vec<Permutation>) -> Result<Self> {
        let m = Self::new(adjacency)?;
        let report = m.validate();
        match report.first_failure() {
            None => Ok(m),
            Some(c) => Err(Error::Verification(format!(
                "maniplex axiom {} fails: {}",
                c.axiom,
                c.detail.clone().unwrap_or_default()
            ))),
        }
    }

    /// The flag graph of a `p`-gon. Flag `2k + e` lies on edge `k` (joining
    /// vertices `k` and `k+1`) at vertex `k + e`.
    pub fn polygon(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::Precondition(format!(
                "polygon needs p >= 2, got {p}"
            )));
        }
        let n = 2 * p as u32;
        let r0: Vec<u32> = (0..n).map(|f| f ^ 1).collect();
        let r1: Vec<u32> = (0..n)
            .map(|f| {
                if f % 2 == 1 {
                    (f + 1) % n
                } else {
                    (f + n - 1) % n
                }
            })
            .collect();
        Self::new(vec![
            Permutation::from_images(r0)?,
            Permutation::from_images(r1)?,
        ])
    }

    /// The flag graph of a map on a closed surface given by its faces, each a
    /// cyclic list of vertex labels. Edges are identified by their endpoint
    /// pairs, so every pair of consecutive vertices must occur in exactly two
    /// face boundaries.
    ///
    /// Flag `(f, k, e)` sits in face `f` on the edge from `face[k]` to
    /// `face[k+1]`, at vertex `face[k+e]`.
    pub fn from_faces(faces: &[Vec<u32>]) -> Result<Self> {
        let mut offset = Vec::with_capacity(faces.len());
        let mut total = 0u32;
        for f in faces {
            if f.len() < 2 {
                return Err(Error::Precondition(
                    "faces need at least two vertices".into(),
                ));
            }
            offset.push(total);
            total += 2 * f.len() as u32;
        }
        let flag = |f: usize, k: usize, e: u32| offset[f] + 2 * k as u32 + e;
        let mut sides: std::collections::HashMap<(u32, u32), Vec<(usize, usize)>> =
            std::collections::HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..f.len() {
                let (u, v) = (f[k], f[(k + 1) % f.len()]);
                sides.entry((u.min(v), u.max(v))).or_default().push((fi, k));
            }
        }
        let n = total as usize;
        let (mut r0, mut r1, mut r2) = (vec![0; n], vec![0; n], vec![0; n]);
        for (fi, f) in faces.iter().enumerate() {
            let len = f.len();
            for k in 0..len {
                for e in 0..2u32 {
                    let x = flag(fi, k, e) as usize;
                    r0[x] = flag(fi, k, 1 - e);
                    r1[x] = if e == 0 {
                        flag(fi, (k + len - 1) % len, 1)
                    } else {
                        flag(fi, (k + 1) % len, 0)
                    };
                    let vertex = f[(k + e as usize) % len];
                    let (u, v) = (f[k], f[(k + 1) % len]);
                    let occ = &sides[&(u.min(v), u.max(v))];
                    if occ.len() != 2 {
                        return Err(Error::Precondition(format!(
                            "edge {{{u},{v}}} lies on {} face sides, expected 2",
                            occ.len()
                        )));
                    }
                    let &(gi, j) = occ.iter().find(|&&(g, j)| (g, j) != (fi, k)).unwrap();
                    let g = &faces[gi];
                    let e2 = if g[j] == vertex { 0 } else { 1 };
                    r2[x] = flag(gi, j, e2);
                }
            }
        }
        Self::new(vec![
            Permutation::from_images(r0)?,
            Permutation::from_images(r1)?,
            Permutation::from_images(r2)?,
        ])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flag_count(&self) -> usize {
        self.adjacency[0].degree()
    }

    /// `r_i`, the `i`-adjacency involution.
    pub fn r(&self, i: usize) -> &Permutation {
        &self.adjacency[i]
    }

    pub fn adjacency(&self) -> &[Permutation] {
        &self.adjacency
    }

    pub fn connection_group(&self) -> PermGroup {
        PermGroup::new(
            self.flag_count(),
            self.adjacency
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("r{i}"), p.clone()))
                .collect(),
        )
        .expect("adjacency degrees agree")
    }

    /// Same flags with colours reversed (`i ↦ n-1-i`).
    pub fn dual(&self) -> Maniplex {
        Maniplex {
            rank: self.rank,
            adjacency: self.adjacency.iter().rev().cloned().collect(),
        }
    }

    pub fn rooted(self, base_flag: u32) -> Result<RootedManiplex> {
        RootedManiplex::new(self, base_flag)
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.flag_count();
        let mut checks = Vec::new();

        let mut detail = None;
        'inv: for (i, r) in self.adjacency.iter().enumerate() {
            for x in 0..n as u32 {
                let y = r.image(x);
                if y == x {
                    detail = Some(format!("r{i} fixes flag {x}"));
                    break 'inv;
                }
                if r.image(y) != x {
                    detail = Some(format!("r{i} is not an involution at flag {x}"));
                    break 'inv;
                }
            }
        }
        checks.push(AxiomCheck::new("fixed_point_free_involutions", detail));

        let mut detail = None;
        'distinct: for x in 0..n as u32 {
            for i in 0..self.rank {
                for j in (i + 1)..self.rank {
                    if self.adjacency[i].image(x) == self.adjacency[j].image(x) {
                        detail = Some(format!("r{i} and r{j} agree on flag {x}"));
                        break 'distinct;
                    }
                }
            }
        }
        checks.push(AxiomCheck::new("distinct_adjacencies", detail));

        let mut detail = None;
        'commute: for i in 0..self.rank {
            for j in (i + 2)..self.rank {
                let (a, b) = (&self.adjacency[i], &self.adjacency[j]);
                for x in 0..n as u32 {
                    if b.image(a.image(x)) != a.image(b.image(x)) {
                        detail = Some(format!("r{i} and r{j} do not commute at flag {x}"));
                        break 'commute;
                    }
                }
            }
        }
        checks.push(AxiomCheck::new("commuting_distant_colours", detail));

        let reach = bfs_order(self, 0).len();
        let detail = (reach != n).then(|| format!("{reach} of {n} flags reachable from flag 0"));
        checks.push(AxiomCheck::new("connected", detail));

        ValidationReport { checks }
    }

    /// 2-colouring of the flag graph with `base` white, if it is bipartite.
    pub fn is_orientable(&self, base: u32) -> Option<Orientation> {
        let n = self.flag_count();
        let mut colour: Vec<Option<bool>> = vec![None; n];
        colour[base as usize] = Some(true);
        let mut queue = VecDeque::from([base]);
        while let Some(x) = queue.pop_front() {
            let c = colour[x as usize].unwrap();
            for r in &self.adjacency {
                let y = r.image(x);
                match colour[y as usize] {
                    None => {
                        colour[y as usize] = Some(!c);
                        queue.push_back(y);
                    }
                    Some(d) if d == c => return None,
                    _ => {}
                }
            }
        }
        let (mut white, mut black) = (Vec::new(), Vec::new());
        for (x, c) in colour.iter().enumerate() {
            match c {
                Some(true) => white.push(x as u32),
                Some(false) => black.push(x as u32),
                None => return None,
            }
        }
        Some(Orientation { white, black })
    }

    /// Facets: orbits of `⟨r_0, …, r_{n-2}⟩`.
    pub fn facets(&self) -> Partition {
        Partition::orbits_of(
            self.flag_count(),
            &self.adjacency[..self.rank.saturating_sub(1)],
        )
    }

    /// Orbits of `⟨r_i : i ∈ colours⟩`.
    pub fn faces_of(&self, colours: &[usize]) -> Partition {
        let gens: Vec<Permutation> = colours.iter().map(|&i| self.adjacency[i].clone()).collect();
        Partition::orbits_of(self.flag_count(), &gens)
    }

    /// The colour-preserving automorphism sending `from` to `to`, if any.
    pub fn find_rooted_automorphism(&self, from: u32, to: u32) -> Option<Permutation> {
        let map = forced_map(self, from, self, to)?;
        let mut hit = vec![false; map.len()];
        for &y in &map {
            if std::mem::replace(&mut hit[y as usize], true) {
                return None;
            }
        }
        Some(Permutation::from_images_unchecked(map))
    }

    /// Proper 2-colouring (±1) of the facets such that facets meeting at an
    /// `(n-2)`-face differ; the base facet (containing `base`) gets `+1`.
    pub fn dually_bipartite_colouring(&self, base: u32) -> Option<FacetColouring> {
        if self.rank < 2 {
            return None;
        }
        let facets = self.facets();
        let last = &self.adjacency[self.rank - 1];
        let mut colour = vec![0i8; facets.len()];
        let start = facets.block_of[base as usize] as usize;
        colour[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for &x in &facets.blocks[f] {
                let g = facets.block_of[last.image(x) as usize] as usize;
                if colour[g] == 0 {
                    colour[g] = -colour[f];
                    queue.push_back(g);
                } else if colour[g] == colour[f] {
                    return None;
                }
            }
        }
        debug_assert!({
            // facets alternate around each (n-2)-face, so those cycles are even
            let rot = last.compose(&self.adjacency[self.rank - 2]);
            rot.cycles().iter().all(|c| c.len() % 2 == 0)
        });
        Some(FacetColouring { facets, colour })
    }
}

/// BFS order of the flags reachable from `start`.
fn bfs_order(m: &Maniplex, start: u32) -> Vec<u32> {
    let mut seen = vec![false; m.flag_count()];
    seen[start as usize] = true;
    let mut order = vec![start];
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        for r in &m.adjacency {
            let y = r.image(x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                order.push(y);
            }
        }
        k += 1;
    }
    order
}

/// The unique colour-preserving map `src → dst` with `from ↦ to`, obtained by
/// forced extension along edges and checked on every edge. Returns `None` on
/// a conflict. `src` must be connected.
fn forced_map(src: &Maniplex, from: u32, dst: &Maniplex, to: u32) -> Option<Vec<u32>> {
    if src.rank != dst.rank {
        return None;
    }
    let mut map = vec![u32::MAX; src.flag_count()];
    map[from as usize] = to;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x as usize];
        for (r, q) in src.adjacency.iter().zip(&dst.adjacency) {
            let y = r.image(x);
            let fy = q.image(fx);
            match map[y as usize] {
                u32::MAX => {
                    map[y as usize] = fy;
                    queue.push_back(y);
                }
                v if v != fy => return None,
                _ => {}
            }
        }
    }
    if map.contains(&u32::MAX) {
        return None;
    }
    Some(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

impl AxiomCheck {
    fn new(axiom: &'static str, failure: Option<String>) -> Self {
        AxiomCheck {
            axiom,
            passed: failure.is_none(),
            detail: failure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub white: Vec<u32>,
    pub black: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetColouring {
    pub facets: Partition,
    /// `+1` or `-1` per facet, indexed like `facets.blocks`.
    pub colour: Vec<i8>,
}

impl FacetColouring {
    pub fn of_flag(&self, flag: u32) -> i8 {
        self.colour[self.facets.block_of[flag as usize] as usize]
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    Regular,
    Chiral,
    Other,
}

/// A maniplex with a distinguished base flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ManiplexFile", into = "ManiplexFile")]
pub struct RootedManiplex {
    pub maniplex: Maniplex,
    pub base_flag: u32,
}

/// On-disk form: `{"rank", "flags", "adjacency", "base_flag"}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct ManiplexFile {
    rank: usize,
    flags: usize,
    adjacency: Vec<Vec<u32>>,
    base_flag: u32,
}

impl TryFrom<ManiplexFile> for RootedManiplex {
    type Error = Error;
    fn try_from(f: ManiplexFile) -> Result<Self> {
        if f.adjacency.len() != f.rank {
            return Err(Error::Schema(format!(
                "rank is {} but {} adjacency arrays are given",
                f.rank,
                f.adjacency.len()
            )));
        }
        let mut adjacency = Vec::with_capacity(f.rank);
        for (i, a) in f.adjacency.into_iter().enumerate() {
            if a.len() != f.flags {
                return Err(Error::Schema(format!(
                    "adjacency[{i}] has {} entries, expected {}",
                    a.len(),
                    f.flags
                )));
            }
            let p = Permutation::from_images(a)
                .map_err(|e| Error::Schema(format!("adjacency[{i}]: {e}")))?;
            adjacency.push(p);
        }
        let m = Maniplex::new(adjacency).map_err(|e| Error::Schema(e.to_string()))?;
        if let Some(c) = m.validate().first_failure() {
            return Err(Error::Schema(format!(
                "adjacency violates {}: {}",
                c.axiom,
                c.detail.clone().unwrap_or_default()
            )));
        }
        RootedManiplex::new(m, f.base_flag).map_err(|e| Error::Schema(e.to_string()))
    }
}

impl From<RootedManiplex> for ManiplexFile {
    fn from(r: RootedManiplex) -> Self {
        ManiplexFile {
            rank: r.maniplex.rank,
            flags: r.maniplex.flag_count(),
            base_flag: r.base_flag,
            adjacency: r
                .maniplex
                .adjacency
                .into_iter()
                .map(Permutation::into_images)
                .collect(),
        }
    }
}

impl RootedManiplex {
    pub fn new(maniplex: Maniplex, base_flag: u32) -> Result<Self> {
        if base_flag as usize >= maniplex.flag_count() {
            return Err(Error::OutOfRange(format!(
                "base flag {base_flag} of {} flags",
                maniplex.flag_count()
            )));
        }
        Ok(RootedManiplex {
            maniplex,
            base_flag,
        })
    }

    pub fn rank(&self) -> usize {
        self.maniplex.rank
    }

    pub fn flag_count(&self) -> usize {
        self.maniplex.flag_count()
    }

    pub fn validate(&self) -> ValidationReport {
        self.maniplex.validate()
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.maniplex.is_orientable(self.base_flag)
    }

    pub fn rotation_system(&self) -> Result<RotationSystem> {
        RotationSystem::of_maniplex(self)
    }

    /// `Φ_0^{i,i-1} = r_{i-1} r_i Φ_0`, the image of the base flag under the
    /// abstract rotation `σ_i` (1-based).
    pub fn rotation_target(&self, i: usize) -> u32 {
        let m = &self.maniplex;
        m.r(i - 1).image(m.r(i).image(self.base_flag))
    }

    pub fn classify_symmetry(&self) -> Symmetry {
        let m = &self.maniplex;
        let rotary = (1..m.rank).all(|i| {
            m.find_rooted_automorphism(self.base_flag, self.rotation_target(i))
                .is_some()
        });
        if !rotary {
            return Symmetry::Other;
        }
        let reflexible = m
            .find_rooted_automorphism(self.base_flag, m.r(0).image(self.base_flag))
            .is_some();
        if reflexible {
            Symmetry::Regular
        } else {
            Symmetry::Chiral
        }
    }

    /// `p_i = order(r_{i-1} r_i)`, for rotary maniplexes only.
    pub fn schlafli(&self) -> Result<Vec<u64>> {
        if self.classify_symmetry() == Symmetry::Other {
            return Err(Error::Precondition(
                "Schläfli symbol requested for a non-rotary maniplex".into(),
            ));
        }
        Ok(self.schlafli_unchecked())
    }

    /// Orders of `r_{i-1} r_i` without checking rotarity.
    pub fn schlafli_unchecked(&self) -> Vec<u64> {
        let m = &self.maniplex;
        (1..m.rank)
            .map(|i| m.r(i).compose(m.r(i - 1)).order())
            .collect()
    }

    pub fn facets(&self) -> Partition {
        self.maniplex.facets()
    }

    pub fn base_facet(&self) -> Vec<u32> {
        let f = self.facets();
        f.blocks[f.block_of[self.base_flag as usize] as usize].clone()
    }

    /// The base facet as a rooted rank-`(n-1)` maniplex; flags are renumbered
    /// by position within the (sorted) facet.
    pub fn base_facet_maniplex(&self) -> Result<RootedManiplex> {
        if self.rank() < 2 {
            return Err(Error::Precondition(
                "rank-1 maniplexes have no facets".into(),
            ));
        }
        let flags = self.base_facet();
        let adjacency = self.maniplex.adjacency[..self.rank() - 1]
            .iter()
            .map(|r| r.restrict(&flags))
            .collect::<Result<Vec<_>>>()?;
        let base = flags
            .binary_search(&self.base_flag)
            .expect("base in its facet") as u32;
        RootedManiplex::new(Maniplex::new(adjacency)?, base)
    }

    /// Colour-preserving homomorphism `self → other` with base ↦ base, if any.
    pub fn covers(&self, other: &RootedManiplex) -> Result<Option<Vec<u32>>> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(forced_map(
            &self.maniplex,
            self.base_flag,
            &other.maniplex,
            other.base_flag,
        ))
    }

    /// Rooted isomorphism test (same flag count and a covering map).
    pub fn is_isomorphic(&self, other: &RootedManiplex) -> bool {
        self.flag_count() == other.flag_count() && matches!(self.covers(other), Ok(Some(_)))
    }

    pub fn dually_bipartite_colouring(&self) -> Option<FacetColouring> {
        self.maniplex.dually_bipartite_colouring(self.base_flag)
    }

    /// Number of flags `Ψ` admitting an automorphism `Φ_0 ↦ Ψ`, i.e. the
    /// order of the automorphism group (which acts freely on flags).
    pub fn automorphism_count(&self) -> usize {
        use rayon::prelude::*;
        (0..self.flag_count() as u32)
            .into_par_iter()
            .filter(|&psi| {
                self.maniplex
                    .find_rooted_automorphism(self.base_flag, psi)
                    .is_some()
            })
            .count()
    }
}

/// The permutations `s_1, …, s_{n-1}` of the white flags.
///
/// For a maniplex, `s_i` is the restriction of `r_{i-1} r_i`. The same type
/// also describes any group given by generators acting on a point set with a
/// chosen base point (for example the arrows of a GPR-graph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    /// Flag index of each point (identity when built from bare generators).
    pub white_flags: Vec<u32>,
    /// `sigma[i-1] = s_i`.
    pub sigma: Vec<Permutation>,
    /// Position of the base point.
    pub base: u32,
}

impl RotationSystem {
    pub fn new(sigma: Vec<Permutation>, base: u32) -> Result<Self> {
        let degree = sigma.first().map(|p| p.degree()).unwrap_or(1);
        if let Some(p) = sigma.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, p.degree()));
        }
        if base as usize >= degree {
            return Err(Error::OutOfRange(format!("base {base} of {degree} points")));
        }
        Ok(RotationSystem {
            white_flags: (0..degree as u32).collect(),
            sigma,
            base,
        })
    }

    pub fn of_maniplex(m: &RootedManiplex) -> Result<Self> {
        let orientation = m.orientation().ok_or_else(|| {
            Error::Precondition("rotation system requested for a non-orientable maniplex".into())
        })?;
        let white = orientation.white;
        let mut pos = vec![u32::MAX; m.flag_count()];
        for (k, &f) in white.iter().enumerate() {
            pos[f as usize] = k as u32;
        }
        let mp = &m.maniplex;
        let sigma = (1..m.rank())
            .map(|i| {
                let images = white
                    .iter()
                    .map(|&f| pos[mp.r(i - 1).image(mp.r(i).image(f)) as usize])
                    .collect();
                Permutation::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        let base = pos[m.base_flag as usize];
        Ok(RotationSystem {
            white_flags: white,
            sigma,
            base,
        })
    }

    /// Rank `n` of the maniplex (one more than the number of generators).
    pub fn rank(&self) -> usize {
        self.sigma.len() + 1
    }

    pub fn degree(&self) -> usize {
        self.white_flags.len()
    }

    /// `s_i` for `1 ≤ i ≤ n-1`.
    pub fn s(&self, i: usize) -> &Permutation {
        &self.sigma[i - 1]
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(
            self.degree(),
            self.sigma
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("s{}", i + 1), p.clone()))
                .collect(),
        )
        .expect("generator degrees agree")
    }

    /// `τ_{i,j}` for `-1 ≤ i, j ≤ n`: `s_{i+1} ⋯ s_j` (as a product of
    /// functions) for `0 ≤ i < j ≤ n-1`, the inverse for `i > j`, and the
    /// identity when `i = j`, `i = -1` or `j = n`.
    pub fn tau(&self, i: i64, j: i64) -> Result<Permutation> {
        let n = self.rank() as i64;
        for v in [i, j] {
            if v < -1 || v > n {
                return Err(Error::OutOfRange(format!("tau index {v} for rank {n}")));
            }
        }
        let id = Permutation::identity(self.degree());
        if i == j {
            return Ok(id);
        }
        if i > j {
            return Ok(self.tau(j, i)?.inverse());
        }
        if i == -1 || j == n {
            return Ok(id);
        }
        let factors: Vec<&Permutation> = ((i + 1)..=j)
            .map(|k| &self.sigma[(k - 1) as usize])
            .collect();
        Ok(Permutation::product_of_functions(self.degree(), factors))
    }

    /// True iff `|⟨s_i⟩|` equals every orbit length.
    pub fn acts_freely(&self) -> bool {
        self.group().acts_freely()
    }

    /// Checks `⟨τ_{i,j}: i,j∈I⟩ ∩ ⟨τ_{i,j}: i,j∈J⟩ = ⟨τ_{i,j}: i,j∈I∩J⟩`
    /// for all `I, J ⊆ {0, …, n-1}` through orbits of the base point, which
    /// identify subgroups with point sets under a free action.
    pub fn intersection_property_check(&self) -> Result<IntersectionCheck> {
        let group = self.group();
        let order = group.order();
        for o in orbits(self.degree(), &self.sigma) {
            if num_bigint::BigUint::from(o.len()) != order {
                return Err(Error::NonFreeAction(format!(
                    "orbit of point {} has {} points but the group has order {order}",
                    o[0],
                    o.len()
                )));
            }
        }
        let n = self.rank();
        let subsets = 1usize << n;
        let mut orbit_of_subset: Vec<Vec<bool>> = Vec::with_capacity(subsets);
        for mask in 0..subsets {
            let members: Vec<i64> = (0..n as i64).filter(|&k| mask & (1 << k) != 0).collect();
            let mut gens = Vec::new();
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    gens.push(self.tau(i, j)?);
                }
            }
            let mut seen = vec![false; self.degree()];
            seen[self.base as usize] = true;
            let mut stack = vec![self.base];
            while let Some(x) = stack.pop() {
                for g in &gens {
                    let y = g.image(x);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        stack.push(y);
                    }
                }
            }
            orbit_of_subset.push(seen);
        }
        for i in 0..subsets {
            for j in (i + 1)..subsets {
                let (a, b, c) = (
                    &orbit_of_subset[i],
                    &orbit_of_subset[j],
                    &orbit_of_subset[i & j],
                );
                let holds = (0..self.degree()).all(|x| (a[x] && b[x]) == c[x]);
                if !holds {
                    let set = |m: usize| (0..n).filter(|k| m & (1 << k) != 0).collect();
                    return Ok(IntersectionCheck {
                        holds: false,
                        witness: Some((set(i), set(j))),
                    });
                }
            }
        }
        Ok(IntersectionCheck {
            holds: true,
            witness: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionCheck {
    pub holds: bool,
    /// First failing pair `(I, J)`.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> RootedManiplex {
        Maniplex::polygon(4).unwrap().rooted(0).unwrap()
    }

    fn hemicube() -> Maniplex {
        Maniplex::from_faces(&[vec![0, 3, 1, 2], vec![0, 1, 3, 2], vec![0, 3, 2, 1]]).unwrap()
    }

    fn cube() -> Maniplex {
        Maniplex::from_faces(&[
            vec![0, 1, 2, 3],
            vec![4, 7, 6, 5],
            vec![0, 4, 5, 1],
            vec![1, 5, 6, 2],
            vec![2, 6, 7, 3],
            vec![3, 7, 4, 0],
        ])
        .unwrap()
    }

    fn square_pyramid() -> Maniplex {
        Maniplex::from_faces(&[
            vec![0, 1, 2, 3],
            vec![0, 4, 1],
            vec![1, 4, 2],
            vec![2, 4, 3],
            vec![3, 4, 0],
        ])
        .unwrap()
    }

    #[test]
    fn square_is_a_valid_polygon() {
        let sq = square();
        assert_eq!(sq.flag_count(), 8);
        assert!(sq.validate().passed());
        assert_eq!(sq.schlafli().unwrap(), vec![4]);
        assert_eq!(sq.facets().len(), 4);
        assert_eq!(sq.classify_symmetry(), Symmetry::Regular);
        assert_eq!(sq.maniplex.connection_group().order(), 8u32.into());
    }

    #[test]
    fn fixed_point_is_reported() {
        let mut r0: Vec<u32> = (0..8).map(|f| f ^ 1).collect();
        r0[0] = 0;
        r0[1] = 1;
        let m = Maniplex::new(vec![
            Permutation::from_images(r0).unwrap(),
            Maniplex::polygon(4).unwrap().r(1).clone(),
        ])
        .unwrap();
        let report = m.validate();
        assert!(!report.passed());
        assert!(!report.check("fixed_point_free_involutions").unwrap().passed);
    }

    #[test]
    fn orientation_of_square_and_hemicube() {
        let o = square().orientation().unwrap();
        assert_eq!(o.white.len(), 4);
        let h = hemicube();
        assert!(h.validate().passed());
        assert_eq!(h.flag_count(), 24);
        assert!(h.is_orientable(0).is_none());
        assert_eq!(
            h.clone().rooted(0).unwrap().classify_symmetry(),
            Symmetry::Regular
        );
    }

    #[test]
    fn square_rotation_system() {
        let rs = square().rotation_system().unwrap();
        assert_eq!(rs.degree(), 4);
        assert_eq!(rs.s(1).order(), 4);
        assert_eq!(rs.s(1).cycles().len(), 1);
        assert!(rs.intersection_property_check().unwrap().holds);
    }

    #[test]
    fn tau_cases() {
        let m = cube().rooted(0).unwrap();
        let rs = m.rotation_system().unwrap();
        let id = Permutation::identity(rs.degree());
        assert_eq!(rs.tau(1, 1).unwrap(), id);
        assert_eq!(rs.tau(-1, 2).unwrap(), id);
        assert_eq!(rs.tau(0, 3).unwrap(), id);
        assert_eq!(rs.tau(0, 1).unwrap(), *rs.s(1));
        assert_eq!(rs.tau(1, 2).unwrap(), *rs.s(2));
        assert_eq!(rs.tau(1, 0).unwrap(), rs.s(1).inverse());
        assert!(rs.tau(0, 5).is_err());
        // Φ0 τ_{0,2} = Φ0^{2,0}
        let t = rs.tau(0, 2).unwrap();
        let target = m.maniplex.r(0).image(m.maniplex.r(2).image(m.base_flag));
        assert_eq!(rs.white_flags[t.image(rs.base) as usize], target);
    }

    #[test]
    fn cube_is_regular_of_type_4_3() {
        let m = cube().rooted(0).unwrap();
        assert!(m.validate().passed());
        assert_eq!(m.flag_count(), 48);
        assert_eq!(m.classify_symmetry(), Symmetry::Regular);
        assert_eq!(m.schlafli().unwrap(), vec![4, 3]);
        assert_eq!(m.automorphism_count(), 48);
        let rs = m.rotation_system().unwrap();
        assert_eq!(rs.group().order(), 24u32.into());
        assert!(rs.intersection_property_check().unwrap().holds);
        // three faces meet at each vertex, so the faces cannot be 2-coloured
        assert!(m.dually_bipartite_colouring().is_none());
        assert!(m.base_facet_maniplex().unwrap().is_isomorphic(&square()));
    }

    #[test]
    fn pyramid_is_not_rotary() {
        let m = square_pyramid().rooted(0).unwrap();
        assert!(m.validate().passed());
        assert_eq!(m.classify_symmetry(), Symmetry::Other);
        assert!(m.schlafli().is_err());
    }

    #[test]
    fn polygon_colouring_and_covers() {
        let sq = square();
        let c = sq.dually_bipartite_colouring().unwrap();
        assert_eq!(c.of_flag(0), 1);
        let tri = Maniplex::polygon(3).unwrap().rooted(0).unwrap();
        assert!(tri.dually_bipartite_colouring().is_none());
        let oct = Maniplex::polygon(8).unwrap().rooted(0).unwrap();
        assert!(oct.covers(&sq).unwrap().is_some());
        assert!(sq.covers(&oct).unwrap().is_none());
        assert!(tri.covers(&sq).unwrap().is_none());
        assert!(sq
            .covers(&sq)
            .unwrap()
            .unwrap()
            .iter()
            .enumerate()
            .all(|(i, &x)| i as u32 == x));
        assert!(sq.covers(&cube().rooted(0).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let sq = square();
        let text = serde_json::to_string(&sq).unwrap();
        let back: RootedManiplex = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sq);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let bad = r#"{"rank":1,"flags":3,"adjacency":[[1,2,0]],"base_flag":0}"#;
        assert!(serde_json::from_str::<RootedManiplex>(bad).is_err());
    }
}

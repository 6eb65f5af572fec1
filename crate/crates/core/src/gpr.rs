//! GPR-graphs: one permutation per arrow label `1..=n`.
//!
//! An arrow with label `k` goes from `x` to `σ_k(x)`; loops are fixed points.
//! Products of arrow permutations are read as products of functions, the
//! same way as connection elements.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maniplex::{Partition, RootedManiplex, RotationSystem, Symmetry};
use crate::permcore::{PermGroup, Permutation};
use crate::report::{ExtensionReport, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GprGraph {
    arrows: Vec<Permutation>,
    vertices: usize,
    /// Distinguished vertex (the base flag for Cayley GPR-graphs).
    pub base: u32,
}

impl GprGraph {
    pub fn new(vertices: usize, arrows: Vec<Permutation>, base: u32) -> Result<Self> {
        if let Some(p) = arrows.iter().find(|p| p.degree() != vertices) {
            return Err(Error::DegreeMismatch(vertices, p.degree()));
        }
        if vertices > 0 && base as usize >= vertices {
            return Err(Error::OutOfRange(format!(
                "base {base} of {vertices} vertices"
            )));
        }
        Ok(GprGraph {
            arrows,
            vertices,
            base,
        })
    }

    pub fn rank(&self) -> usize {
        self.arrows.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    /// `σ_k` for `1 ≤ k ≤ n`.
    pub fn sigma(&self, k: usize) -> &Permutation {
        &self.arrows[k - 1]
    }

    pub fn arrows(&self) -> &[Permutation] {
        &self.arrows
    }

    fn check_labels(&self, labels: &[usize]) -> Result<()> {
        match labels.iter().find(|&&k| k == 0 || k > self.rank()) {
            Some(&k) => Err(Error::GeneratorIndex {
                index: k,
                count: self.rank(),
            }),
            None => Ok(()),
        }
    }

    /// `I`-components: orbits under the arrows with labels in `I`.
    pub fn components(&self, labels: &[usize]) -> Result<Partition> {
        self.check_labels(labels)?;
        let gens: Vec<Permutation> = labels.iter().map(|&k| self.sigma(k).clone()).collect();
        Ok(Partition::orbits_of(self.vertices, &gens))
    }

    /// The group generated by all arrows, generators named `s1, …, sn`.
    pub fn group(&self) -> PermGroup {
        self.group_of(&(1..=self.rank()).collect::<Vec<_>>())
    }

    /// The subgroup generated by the listed labels.
    pub fn group_of(&self, labels: &[usize]) -> PermGroup {
        PermGroup::new(
            self.vertices,
            labels
                .iter()
                .map(|&k| (format!("s{k}"), self.sigma(k).clone()))
                .collect(),
        )
        .expect("arrow degrees agree")
    }

    /// The same graph with one more arrow label.
    pub fn with_arrow(&self, sigma: Permutation) -> Result<GprGraph> {
        let mut arrows = self.arrows.clone();
        arrows.push(sigma);
        GprGraph::new(self.vertices, arrows, self.base)
    }

    /// `copies` disjoint copies; copy `ℓ` occupies vertices `ℓV..(ℓ+1)V`.
    pub fn disjoint_copies(&self, copies: usize) -> GprGraph {
        let arrows = self
            .arrows
            .iter()
            .map(|p| {
                let mut images = Vec::with_capacity(copies * self.vertices);
                for l in 0..copies {
                    let shift = (l * self.vertices) as u32;
                    images.extend(p.images().iter().map(|&x| x + shift));
                }
                Permutation::from_images(images).expect("shifted copies form a permutation")
            })
            .collect();
        GprGraph {
            arrows,
            vertices: copies * self.vertices,
            base: self.base,
        }
    }

    /// Rotation system view with the base vertex as base point.
    pub fn rotation_system(&self) -> Result<RotationSystem> {
        RotationSystem::new(self.arrows.clone(), self.base)
    }
}

/// The Cayley GPR-graph: white flags with the `s_k` arrows.
pub fn cayley_gpr(m: &RootedManiplex) -> Result<GprGraph> {
    if m.classify_symmetry() == Symmetry::Other {
        return Err(Error::Precondition(
            "Cayley GPR-graph requested for a non-rotary maniplex".into(),
        ));
    }
    let rs = m.rotation_system()?;
    GprGraph::new(rs.degree(), rs.sigma, rs.base)
}

/// Forced extension of `root ↦ image` along arrows with labels `1..=h.rank()`.
/// `vertices` must be the component of `root` in `g`.
fn forced_isomorphism(
    g: &GprGraph,
    vertices: &[u32],
    root: u32,
    h: &GprGraph,
    image: u32,
) -> Option<HashMap<u32, u32>> {
    let labels = h.rank();
    let mut map = HashMap::with_capacity(vertices.len());
    let mut used = vec![false; h.num_vertices()];
    map.insert(root, image);
    used[image as usize] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let fx = map[&x];
        for k in 1..=labels {
            let y = g.sigma(k).image(x);
            let fy = h.sigma(k).image(fx);
            match map.get(&y) {
                Some(&v) if v != fy => return None,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut used[fy as usize], true) {
                        return None;
                    }
                    map.insert(y, fy);
                    queue.push_back(y);
                }
            }
        }
    }
    (map.len() == vertices.len() && map.len() == h.num_vertices()).then_some(map)
}

/// Whether the component `vertices` of `g` (using labels `1..=h.rank()`) is
/// isomorphic to `h` as a labelled directed graph.
pub fn rooted_digraph_isomorphic(g: &GprGraph, vertices: &[u32], h: &GprGraph) -> bool {
    if vertices.len() != h.num_vertices() || h.rank() > g.rank() || vertices.is_empty() {
        return false;
    }
    let root = vertices[0];
    (0..h.num_vertices() as u32).any(|y| forced_isomorphism(g, vertices, root, h, y).is_some())
}

/// `σ_k ∘ σ_{k+1} ∘ ⋯ ∘ σ_n`.
fn suffix_product(g: &GprGraph, k: usize) -> Permutation {
    let factors: Vec<&Permutation> = (k..=g.rank()).map(|i| g.sigma(i)).collect();
    Permutation::product_of_functions(g.num_vertices(), factors)
}

/// Checks the four conditions under which `g` (labels `1..=n`) is a
/// GPR-graph of a chiral `(n+1)`-polytope with facets isomorphic to `k`.
pub fn verify_extension_criterion(g: &GprGraph, k: &RootedManiplex) -> Result<ExtensionReport> {
    let n = g.rank();
    if k.rank() != n {
        return Err(Error::RankMismatch(n, k.rank()));
    }
    if n < 2 {
        return Err(Error::Precondition(
            "extension criterion needs n >= 2".into(),
        ));
    }
    let cay = cayley_gpr(k)?;
    let facet_labels: Vec<usize> = (1..n).collect();
    let comps = g.components(&facet_labels)?;

    let cond_i = || {
        let bad = comps
            .blocks
            .par_iter()
            .position_first(|c| !rooted_digraph_isomorphic(g, c, &cay));
        match bad {
            None => Verdict::new(
                "i_components_isomorphic",
                true,
                format!(
                    "{} components, each isomorphic to the Cayley GPR-graph",
                    comps.len()
                ),
            ),
            Some(i) => Verdict::new(
                "i_components_isomorphic",
                false,
                format!(
                    "component containing vertex {} is not isomorphic",
                    comps.blocks[i][0]
                ),
            ),
        }
    };

    let cond_ii = || {
        let bad = (1..n).find(|&kk| {
            let p = suffix_product(g, kk);
            !p.compose(&p).is_identity()
        });
        match bad {
            None => Verdict::new(
                "ii_relations",
                true,
                format!("(σ_k⋯σ_{n})² = id for k = 1..{}", n - 1),
            ),
            Some(kk) => Verdict::new("ii_relations", false, format!("(σ_{kk}⋯σ_{n})² ≠ id")),
        }
    };

    let cond_iii = || {
        let facet_group = g.group_of(&facet_labels);
        let sn = g.sigma(n);
        let ord = sn.order();
        let mut power = sn.clone();
        for j in 1..ord {
            if facet_group.chain().contains(&power) {
                return Verdict::new(
                    "iii_trivial_intersection",
                    false,
                    format!("σ_{n}^{j} lies in ⟨σ_1, …, σ_{}⟩", n - 1),
                );
            }
            power = power.compose(sn);
        }
        Verdict::new(
            "iii_trivial_intersection",
            true,
            format!("no power σ_{n}^j with 1 ≤ j < {ord} lies in the facet group"),
        )
    };

    let cond_iv = || -> Result<Verdict> {
        let mut missing = Vec::new();
        for kk in 2..n {
            let d_labels: Vec<usize> = (kk..=n).collect();
            let c_labels: Vec<usize> = (kk..n).collect();
            let d = g.components(&d_labels)?;
            let c = g.components(&c_labels)?;
            let mut meet: HashMap<(u32, u32), usize> = HashMap::new();
            for x in 0..g.num_vertices() {
                *meet.entry((comps.block_of[x], d.block_of[x])).or_default() += 1;
            }
            let found = c.blocks.iter().any(|block| {
                let x = block[0] as usize;
                meet[&(comps.block_of[x], d.block_of[x])] == block.len()
            });
            if !found {
                missing.push(kk);
            }
        }
        Ok(if missing.is_empty() {
            Verdict::new(
                "iv_component_intersection",
                true,
                format!("witnessed for k = 2..{}", n - 1),
            )
        } else {
            Verdict::new(
                "iv_component_intersection",
                false,
                format!("no witness for k in {missing:?}"),
            )
        })
    };

    let ((v1, v2), (v3, v4)) = rayon::join(
        || rayon::join(cond_i, cond_ii),
        || rayon::join(cond_iii, cond_iv),
    );
    let v4 = v4?;
    let group = g.group();
    Ok(ExtensionReport {
        verdicts: vec![v1, v2, v3, v4],
        schlafli: g.arrows.iter().map(|p| p.order()).collect(),
        group_order: group.order().to_string(),
    })
}

/// The relations satisfied by `t = σ_{n-1} σ_n` in a chiral extension, read
/// with `n` the number of arrow labels of `g`: `t² = id`,
/// `t s_{n-2} t = s_{n-2}^{-1}`, `t s_{n-3} t = s_{n-3} s_{n-2}²` and
/// `t s_i t = s_i` for `1 ≤ i ≤ n-4`. Relations with index `≤ 0` are skipped.
pub fn check_tau_relations(g: &GprGraph, t: &Permutation) -> Result<bool> {
    if t.degree() != g.num_vertices() {
        return Err(Error::DegreeMismatch(g.num_vertices(), t.degree()));
    }
    let n = g.rank() as i64;
    let conj = |s: &Permutation| Permutation::product_of_functions(s.degree(), [t, s, t]);
    if !t.compose(t).is_identity() {
        return Ok(false);
    }
    if n - 2 >= 1 {
        let s = g.sigma((n - 2) as usize);
        if conj(s) != s.inverse() {
            return Ok(false);
        }
    }
    if n - 3 >= 1 {
        let s = g.sigma((n - 3) as usize);
        let s2 = g.sigma((n - 2) as usize);
        if conj(s) != Permutation::product_of_functions(s.degree(), [s, s2, s2]) {
            return Ok(false);
        }
    }
    for i in 1..=(n - 4) {
        let s = g.sigma(i as usize);
        if conj(s) != *s {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GprFile {
    vertices: usize,
    rank: usize,
    #[serde(default)]
    base: u32,
    #[serde(default, skip_serializing_if = "is_dense")]
    encoding: Encoding,
    arrows: serde_json::Value,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Dense,
    /// Each label lists its non-loop arrows as `[source, target]` pairs.
    Sparse,
}

fn is_dense(e: &Encoding) -> bool {
    *e == Encoding::Dense
}

impl GprGraph {
    pub(crate) fn to_file(&self, encoding: Encoding) -> GprFile {
        let arrows = match encoding {
            Encoding::Dense => {
                serde_json::to_value(self.arrows.iter().map(|p| p.images()).collect::<Vec<_>>())
            }
            Encoding::Sparse => serde_json::to_value(
                self.arrows
                    .iter()
                    .map(|p| {
                        (0..self.vertices as u32)
                            .filter(|&x| p.image(x) != x)
                            .map(|x| [x, p.image(x)])
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            ),
        }
        .expect("integer arrays serialize");
        GprFile {
            vertices: self.vertices,
            rank: self.rank(),
            base: self.base,
            encoding,
            arrows,
        }
    }

    pub(crate) fn from_file(f: GprFile) -> Result<Self> {
        let images: Vec<Vec<u32>> = match f.encoding {
            Encoding::Dense => serde_json::from_value(f.arrows)
                .map_err(|e| Error::Schema(format!("arrows: {e}")))?,
            Encoding::Sparse => {
                let pairs: Vec<Vec<[u32; 2]>> = serde_json::from_value(f.arrows)
                    .map_err(|e| Error::Schema(format!("arrows: {e}")))?;
                let mut out = Vec::with_capacity(pairs.len());
                for (k, list) in pairs.into_iter().enumerate() {
                    let mut img: Vec<u32> = (0..f.vertices as u32).collect();
                    for [s, t] in list {
                        if s as usize >= f.vertices || t as usize >= f.vertices {
                            return Err(Error::Schema(format!(
                                "arrows[{k}]: arrow {s} -> {t} out of range"
                            )));
                        }
                        img[s as usize] = t;
                    }
                    out.push(img);
                }
                out
            }
        };
        if images.len() != f.rank {
            return Err(Error::Schema(format!(
                "rank is {} but {} arrow lists are given",
                f.rank,
                images.len()
            )));
        }
        let mut arrows = Vec::with_capacity(images.len());
        for (k, img) in images.into_iter().enumerate() {
            if img.len() != f.vertices {
                return Err(Error::Schema(format!(
                    "arrows[{k}] has {} entries, expected {}",
                    img.len(),
                    f.vertices
                )));
            }
            arrows.push(
                Permutation::from_images(img)
                    .map_err(|e| Error::Schema(format!("arrows[{k}]: {e}")))?,
            );
        }
        GprGraph::new(f.vertices, arrows, f.base).map_err(|e| Error::Schema(e.to_string()))
    }
}

impl Serialize for GprGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file(Encoding::Dense).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GprGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GprGraph::from_file(GprFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maniplex::Maniplex;
    use crate::toroidal::{build_toroidal_map, Family, TorusParams};

    fn torus(b: i64, c: i64) -> RootedManiplex {
        build_toroidal_map(TorusParams::new(Family::F44, b, c).unwrap()).unwrap()
    }

    #[test]
    fn cayley_of_square() {
        let sq = Maniplex::polygon(4).unwrap().rooted(0).unwrap();
        let g = cayley_gpr(&sq).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.sigma(1).cycles().len(), 1);
        assert_eq!(g.group().order(), 4u32.into());
    }

    #[test]
    fn cayley_of_chiral_torus() {
        let g = cayley_gpr(&torus(2, 1)).unwrap();
        assert_eq!(g.num_vertices(), 20);
        assert_eq!((g.sigma(1).order(), g.sigma(2).order()), (4, 4));
        assert_eq!(g.group().order(), 20u32.into());
        assert!(g.group().acts_freely());
    }

    #[test]
    fn components_by_labels() {
        let g = cayley_gpr(&torus(2, 1)).unwrap();
        assert_eq!(g.components(&[]).unwrap().len(), 20);
        assert_eq!(g.components(&[1, 2]).unwrap().len(), 1);
        assert_eq!(g.components(&[1]).unwrap().len(), 5);
        assert!(g.components(&[3]).is_err());
    }

    #[test]
    fn isomorphism_of_cayley_graphs() {
        let a = cayley_gpr(&torus(2, 1)).unwrap();
        let b = cayley_gpr(&torus(3, 1)).unwrap();
        let all: Vec<u32> = (0..20).collect();
        assert!(rooted_digraph_isomorphic(&a, &all, &a));
        assert!(!rooted_digraph_isomorphic(
            &b,
            &(0..40).collect::<Vec<_>>(),
            &a
        ));
        // the mirror image (1,2) has the same size but is not isomorphic as a labelled digraph
        let m = cayley_gpr(&torus(1, 2)).unwrap();
        assert!(!rooted_digraph_isomorphic(&m, &all, &a));
    }

    #[test]
    fn criterion_rejects_trivial_last_arrow() {
        let k = torus(3, 1);
        let cay = cayley_gpr(&k).unwrap();
        let copies = cay.disjoint_copies(2);
        let g = copies
            .with_arrow(Permutation::identity(copies.num_vertices()))
            .unwrap();
        let report = verify_extension_criterion(&g, &k).unwrap();
        assert!(report.verdict("i_components_isomorphic").unwrap().passed);
        // ⟨id⟩ meets every subgroup trivially; the relations are what break
        assert!(report.verdict("iii_trivial_intersection").unwrap().passed);
        assert!(!report.verdict("ii_relations").unwrap().passed);
        assert!(!report.passed());
        let inv = copies.sigma(2).inverse();
        let g = copies.with_arrow(inv).unwrap();
        let report = verify_extension_criterion(&g, &k).unwrap();
        assert!(!report.verdict("iii_trivial_intersection").unwrap().passed);
        assert!(verify_extension_criterion(&cay, &k).is_err());
    }

    #[test]
    fn tau_relations_fail_for_identity() {
        let g = cayley_gpr(&torus(3, 1)).unwrap();
        let g = g.with_arrow(Permutation::identity(40)).unwrap();
        assert!(!check_tau_relations(&g, &Permutation::identity(40)).unwrap());
        assert!(check_tau_relations(&g, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn json_encodings_round_trip() {
        let g = cayley_gpr(&torus(2, 1)).unwrap();
        let dense = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GprGraph>(&dense).unwrap(), g);
        let sparse = serde_json::to_string(&g.to_file(Encoding::Sparse)).unwrap();
        assert!(sparse.contains("\"encoding\":\"sparse\""));
        assert_eq!(serde_json::from_str::<GprGraph>(&sparse).unwrap(), g);
    }
}

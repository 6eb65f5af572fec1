//! Chiral extensions of dually-bipartite chiral polytopes with regular
//! facets, built from a perfect matching on `2s` copies of the Cayley
//! GPR-graph.
//!
//! Vertices are pairs `(Φ, ℓ)` of a white flag of `K` (by position in the
//! rotation system) and a copy `ℓ ∈ Z_{2s}`, stored at index `ℓ·W + Φ`.
//! The matching gives an involution `t`, and the new arrow is
//! `s_n = s_{n-1}^{-1} t` (`t` acts first).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpr::{cayley_gpr, check_tau_relations, verify_extension_criterion, GprGraph};
use crate::maniplex::{Partition, RootedManiplex, RotationSystem, Symmetry};
use crate::permcore::{GroupWord, Letter, Permutation};
use crate::report::{ExtensionReport, Verdict};

/// A word in `s_1, …, s_{n-2}` (letter index `i-1` stands for `s_i`) that
/// maps `from` to `to`, found by breadth-first search.
pub fn facet_word(rs: &RotationSystem, from: u32, to: u32) -> Result<GroupWord> {
    let tree = FacetTree::new(rs, from);
    tree.word_to(to).ok_or_else(|| {
        Error::Precondition(format!(
            "flag {to} is not in the facet orbit of flag {from}"
        ))
    })
}

/// BFS tree of the `⟨s_1, …, s_{n-2}⟩`-orbit of a white flag.
struct FacetTree {
    // parent[x] = (previous point, generator index), root maps to itself
    parent: Vec<Option<(u32, usize)>>,
    root: u32,
    members: Vec<u32>,
}

impl FacetTree {
    fn new(rs: &RotationSystem, root: u32) -> Self {
        let gens = &rs.sigma[..rs.rank().saturating_sub(2)];
        let mut parent = vec![None; rs.degree()];
        parent[root as usize] = Some((root, usize::MAX));
        let mut members = vec![root];
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for (g, p) in gens.iter().enumerate() {
                let y = p.image(x);
                if parent[y as usize].is_none() {
                    parent[y as usize] = Some((x, g));
                    members.push(y);
                }
            }
            k += 1;
        }
        FacetTree {
            parent,
            root,
            members,
        }
    }

    fn word_to(&self, mut x: u32) -> Option<GroupWord> {
        let mut letters = Vec::new();
        self.parent[x as usize]?;
        while x != self.root {
            let (prev, g) = self.parent[x as usize].expect("tree is connected");
            letters.push(Letter::new(g, 1));
            x = prev;
        }
        letters.reverse();
        Some(GroupWord::from_letters(letters))
    }
}

/// Image of a word in `s_1, …, s_{n-2}` under the involutory automorphism
/// with `s_{n-2} ↦ s_{n-2}^{-1}`, `s_{n-3} ↦ s_{n-3} s_{n-2}²` and
/// `s_i ↦ s_i` otherwise. Letters act in order, so `s_{n-3} s_{n-2}²` is
/// spelled `s_{n-2}, s_{n-2}, s_{n-3}`.
pub fn rho_bar(w: &GroupWord, n: usize) -> Result<GroupWord> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "rho_bar needs rank n >= 3, got {n}"
        )));
    }
    let last = n - 3; // index of s_{n-2}
    let mut out = Vec::with_capacity(w.len());
    for l in &w.letters {
        if l.generator > last {
            return Err(Error::GeneratorIndex {
                index: l.generator,
                count: last + 1,
            });
        }
        if l.generator == last {
            out.push(l.inverse());
        } else if last >= 1 && l.generator == last - 1 {
            if l.exponent > 0 {
                out.extend([Letter::new(last, 1), Letter::new(last, 1), *l]);
            } else {
                out.extend([*l, Letter::new(last, -1), Letter::new(last, -1)]);
            }
        } else {
            out.push(*l);
        }
    }
    Ok(GroupWord::from_letters(out))
}

/// One edge of the matching, `a = (flag, copy)` and `b` likewise.
pub type DbVertex = (u32, u32);

/// Where each `{1..n-2}`-component in each copy is attached to the matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Anchor {
    flag: u32,
    partner_flag: u32,
    partner_copy: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StepCounts {
    pub step1_base: usize,
    pub step2_first_component: usize,
    pub step3_facet_bases: usize,
    pub step4_total: usize,
}

#[derive(Clone, Debug)]
pub struct Matching {
    /// Number of copies `2s`.
    pub copies: u32,
    /// Number of white flags of `K`.
    pub white: u32,
    /// The matched partner of every vertex (index `ℓ·W + Φ`).
    pub partner: Vec<u32>,
    pub steps: StepCounts,
}

impl Matching {
    pub fn vertex(&self, v: DbVertex) -> u32 {
        v.1 * self.white + v.0
    }

    pub fn split(&self, index: u32) -> DbVertex {
        (index % self.white, index / self.white)
    }

    /// Unordered edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(DbVertex, DbVertex)> {
        (0..self.partner.len() as u32)
            .filter(|&a| a < self.partner[a as usize])
            .map(|a| (self.split(a), self.split(self.partner[a as usize])))
            .collect()
    }

    pub fn involution(&self) -> Result<Permutation> {
        Permutation::from_images(self.partner.clone())
    }
}

/// Step 3 choice of the representative of `F ∩ E_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Representative {
    /// Least white-flag index (the reproducible default).
    #[default]
    Least,
    /// Uniform choice from a ChaCha8 stream with this seed.
    Seeded(u64),
}

struct Prepared {
    rs: RotationSystem,
    /// Colour `±1` of each white flag.
    colour: Vec<i8>,
    facet_parts: Partition,
    n: usize,
}

fn prepare(k: &RootedManiplex) -> Result<Prepared> {
    let n = k.rank();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "K must have rank >= 3, got {n}"
        )));
    }
    if k.classify_symmetry() != Symmetry::Chiral {
        return Err(Error::Precondition("K is not chiral".into()));
    }
    let facet = k.base_facet_maniplex()?;
    if facet.classify_symmetry() != Symmetry::Regular {
        return Err(Error::Precondition(
            "the facets of K are not regular".into(),
        ));
    }
    let colouring = k
        .dually_bipartite_colouring()
        .ok_or_else(|| Error::Precondition("K is not dually bipartite".into()))?;
    let rs = k.rotation_system()?;
    if !rs.intersection_property_check()?.holds {
        return Err(Error::Precondition(
            "the rotation group of K fails the intersection property".into(),
        ));
    }
    let colour: Vec<i8> = rs
        .white_flags
        .iter()
        .map(|&f| colouring.of_flag(f))
        .collect();
    debug_assert_eq!(colour[rs.base as usize], 1);
    let facet_parts = Partition::orbits_of(rs.degree(), &rs.sigma[..n - 2]);
    Ok(Prepared {
        rs,
        colour,
        facet_parts,
        n,
    })
}

fn step(l: u32, c: i8, copies: u32) -> u32 {
    let sign = if l.is_multiple_of(2) { c as i64 } else { -(c as i64) };
    (l as i64 + sign).rem_euclid(copies as i64) as u32
}

/// The perfect matching of Steps 1–4 on `2s` copies of the white flags.
pub fn build_matching(k: &RootedManiplex, s: u32, choice: Representative) -> Result<Matching> {
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    let p = prepare(k)?;
    build_matching_prepared(&p, s, choice)
}

fn build_matching_prepared(p: &Prepared, s: u32, choice: Representative) -> Result<Matching> {
    let rs = &p.rs;
    let n = p.n;
    let w = rs.degree() as u32;
    let copies = 2 * s;
    let comps = &p.facet_parts;
    let ncomp = comps.len();
    let mut anchors: Vec<Option<Anchor>> = vec![None; ncomp * copies as usize];
    let slot = |f: u32, l: u32| comps.block_of[f as usize] as usize * copies as usize + l as usize;
    let mut steps = StepCounts::default();

    let set = |anchors: &mut Vec<Option<Anchor>>, f: u32, l: u32, a: Anchor| -> Result<()> {
        let i = slot(f, l);
        match anchors[i] {
            None => {
                anchors[i] = Some(a);
                Ok(())
            }
            Some(old) if old == a => Ok(()),
            Some(old) => Err(Error::Verification(format!(
                "component of flag {f} in copy {l} anchored twice ({} and {})",
                old.flag, a.flag
            ))),
        }
    };

    // Steps 1 and 2: the s_{n-1}-orbit of Φ_0
    let last = rs.s(n - 1);
    let ord = last.order() as i64;
    let base = rs.base;
    for j in 0..ord {
        let a = last.pow(j).image(base);
        let b = last.pow(-j).image(base);
        if p.colour[a as usize] != p.colour[b as usize] {
            return Err(Error::Verification(format!(
                "s_(n-1)^{j} Φ0 and its inverse image have different colours"
            )));
        }
        for l in 0..copies {
            let l2 = step(l, p.colour[a as usize], copies);
            set(
                &mut anchors,
                a,
                l,
                Anchor {
                    flag: a,
                    partner_flag: b,
                    partner_copy: l2,
                },
            )?;
            if a < b || (a == b && l < l2) {
                if j == 0 {
                    steps.step1_base += 1;
                } else {
                    steps.step2_first_component += 1;
                }
            }
        }
    }

    // Step 3: E_k = orbit of Φ0 under ⟨s_k, …, s_{n-1}⟩
    let mut e: Vec<Vec<bool>> = Vec::with_capacity(n);
    for kk in 1..n {
        let gens: Vec<Permutation> = rs.sigma[kk - 1..].to_vec();
        let mut mark = vec![false; w as usize];
        for x in crate::permcore::orbits(w as usize, &gens)
            .into_iter()
            .find(|o| o.contains(&base))
            .expect("base lies in some orbit")
        {
            mark[x as usize] = true;
        }
        e.push(mark);
    }
    let in_e = |kk: usize, x: u32| e[kk - 1][x as usize];
    let mut rng = match choice {
        Representative::Least => None,
        Representative::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    for kk in 1..=n - 2 {
        for block in &comps.blocks {
            let meets_k = block.iter().any(|&x| in_e(kk, x));
            let meets_next = block.iter().any(|&x| in_e(kk + 1, x));
            if !meets_k || meets_next {
                continue;
            }
            let candidates: Vec<u32> = block.iter().copied().filter(|&x| in_e(kk, x)).collect();
            for l in (1..copies).step_by(2) {
                let phi = match rng.as_mut() {
                    None => candidates[0],
                    Some(r) => *candidates.choose(r).expect("nonempty"),
                };
                let l2 = step(l, p.colour[phi as usize], copies);
                let a = Anchor {
                    flag: phi,
                    partner_flag: phi,
                    partner_copy: l2,
                };
                set(&mut anchors, phi, l, a)?;
                set(
                    &mut anchors,
                    phi,
                    l2,
                    Anchor {
                        partner_copy: l,
                        ..a
                    },
                )?;
                steps.step3_facet_bases += 1;
            }
        }
    }

    if let Some(i) = anchors.iter().position(|a| a.is_none()) {
        return Err(Error::Verification(format!(
            "component {} in copy {} received no matched vertex",
            i / copies as usize,
            i % copies as usize
        )));
    }

    // Step 4: (wΦ_F, ℓ) is matched with (w̄Ψ_F, ℓ') where Ψ_F is the partner of the anchor
    let gens = &rs.sigma[..n - 2];
    let inverses: Vec<Permutation> = gens.iter().map(|g| g.inverse()).collect();
    let mut partner = vec![u32::MAX; (w * copies) as usize];
    for (ci, block) in comps.blocks.iter().enumerate() {
        for l in 0..copies {
            let a = anchors[ci * copies as usize + l as usize].expect("checked above");
            let tree = FacetTree::new(rs, a.flag);
            debug_assert_eq!(tree.members.len(), block.len());
            for &x in block {
                let word = tree.word_to(x).expect("component is one orbit");
                let y = rho_bar(&word, n)?.apply_to_point(gens, &inverses, a.partner_flag)?;
                partner[(l * w + x) as usize] = a.partner_copy * w + y;
            }
        }
    }
    steps.step4_total = partner.len() / 2;

    for (v, &u) in partner.iter().enumerate() {
        if u as usize == v || partner[u as usize] as usize != v {
            return Err(Error::Verification(format!(
                "matching is not a perfect involution at vertex {v}"
            )));
        }
    }
    Ok(Matching {
        copies,
        white: w,
        partner,
        steps,
    })
}

#[derive(Clone, Debug)]
pub struct DbExtensionResult {
    pub graph: GprGraph,
    pub t: Permutation,
    pub matching: Matching,
    pub report: ExtensionReport,
    pub last_entry: u64,
    pub s: u32,
}

/// The GPR-graph with arrows `1..n-1` from `Cay(K)` on every copy and arrow
/// `n = s_{n-1}^{-1} t`, verified against the extension criterion.
pub fn extend_dually_bipartite(
    k: &RootedManiplex,
    s: u32,
    choice: Representative,
) -> Result<DbExtensionResult> {
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    let prepared = prepare(k)?;
    let matching = build_matching_prepared(&prepared, s, choice)?;
    let n = prepared.n;
    let t = matching.involution()?;
    let copies = cayley_gpr(k)?.disjoint_copies(matching.copies as usize);
    let sn = t.compose(&copies.sigma(n - 1).inverse());
    let graph = copies.with_arrow(sn)?;

    let mut report = verify_extension_criterion(&graph, k)?;
    let involutive = t.compose(&t).is_identity() && t.fixed_points().next().is_none();
    report.verdicts.push(Verdict::new(
        "perfect_involution",
        involutive,
        format!("{} matched pairs", matching.partner.len() / 2),
    ));
    let tau_ok = check_tau_relations(&graph, &t)?;
    report.verdicts.push(Verdict::new(
        "tau_relations",
        tau_ok,
        "t with s_(n-2), s_(n-3), s_i",
    ));
    let orbit_len = graph.sigma(n).cycle_length_of(graph.base);
    report.verdicts.push(Verdict::new(
        "base_orbit_length",
        orbit_len == 2 * s as usize,
        format!(
            "⟨σ_n⟩-orbit of the base vertex has length {orbit_len}, expected {}",
            2 * s
        ),
    ));
    let last_entry = graph.sigma(n).order();
    report.verdicts.push(Verdict::new(
        "last_entry_divisible",
        last_entry % (2 * s as u64) == 0,
        format!("last entry {last_entry}, 2s = {}", 2 * s),
    ));
    if !report.passed() {
        let failed: Vec<String> = report
            .failures()
            .iter()
            .map(|v| format!("{} ({})", v.condition, v.detail))
            .collect();
        return Err(Error::Verification(failed.join("; ")));
    }
    Ok(DbExtensionResult {
        graph,
        t,
        matching,
        report,
        last_entry,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toroidal::{build_toroidal_map, Family, TorusParams};

    fn torus(b: i64, c: i64) -> RootedManiplex {
        build_toroidal_map(TorusParams::new(Family::F44, b, c).unwrap()).unwrap()
    }

    #[test]
    fn facet_words_round_trip() {
        let k = torus(3, 1);
        let rs = k.rotation_system().unwrap();
        let gens = &rs.sigma[..1];
        let tree = FacetTree::new(&rs, rs.base);
        assert!(facet_word(&rs, rs.base, rs.base).unwrap().is_empty());
        let one = rs.s(1).image(rs.base);
        assert_eq!(
            facet_word(&rs, rs.base, one).unwrap().letters,
            vec![Letter::new(0, 1)]
        );
        for &x in &tree.members {
            let w = facet_word(&rs, rs.base, x).unwrap();
            assert_eq!(w.evaluate(gens).unwrap().image(rs.base), x);
        }
        let outside = (0..rs.degree() as u32)
            .find(|x| !tree.members.contains(x))
            .unwrap();
        assert!(facet_word(&rs, rs.base, outside).is_err());
    }

    #[test]
    fn rho_bar_substitution() {
        assert!(rho_bar(&GroupWord::empty(), 3).unwrap().is_empty());
        let w = GroupWord::from_letters(vec![Letter::new(0, 1)]);
        assert_eq!(rho_bar(&w, 3).unwrap().letters, vec![Letter::new(0, -1)]);
        let w = GroupWord::from_letters(vec![Letter::new(0, 1), Letter::new(1, -1)]);
        assert_eq!(
            rho_bar(&w, 4).unwrap().letters,
            vec![
                Letter::new(1, 1),
                Letter::new(1, 1),
                Letter::new(0, 1),
                Letter::new(1, 1)
            ]
        );
        assert!(rho_bar(&GroupWord::from_letters(vec![Letter::new(2, 1)]), 4).is_err());
    }

    #[test]
    fn matching_is_perfect_and_flips_parity() {
        let k = torus(3, 1);
        let m = build_matching(&k, 1, Representative::Least).unwrap();
        assert_eq!(m.partner.len(), 80);
        for ((_, l1), (_, l2)) in m.edges() {
            assert_ne!(l1 % 2, l2 % 2);
        }
        assert_eq!(m.edges().len(), 40);
    }

    #[test]
    fn preconditions_are_enforced() {
        assert!(build_matching(&torus(2, 1), 1, Representative::Least).is_err());
        assert!(build_matching(&torus(2, 0), 1, Representative::Least).is_err());
        assert!(build_matching(&torus(3, 1), 0, Representative::Least).is_err());
    }

    #[test]
    fn extension_of_3_1() {
        for s in 1..=2 {
            let r = extend_dually_bipartite(&torus(3, 1), s, Representative::Least).unwrap();
            assert!(r.report.passed(), "{:?}", r.report);
            assert_eq!(r.last_entry % (2 * s as u64), 0);
        }
    }

    #[test]
    fn seeded_choice_still_extends() {
        let r = extend_dually_bipartite(&torus(3, 1), 2, Representative::Seeded(7)).unwrap();
        assert!(r.report.passed());
    }
}

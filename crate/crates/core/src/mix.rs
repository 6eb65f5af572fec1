//! Mixing of rotation groups and chiral extensions built from a regular
//! quotient of the facet.
//!
//! The mix of two groups with paired generators `g_i`, `h_i` is the group
//! generated by `g_i ⊔ h_i` acting on the disjoint union of their point sets
//! (the points of the left factor come first).

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpr::{cayley_gpr, GprGraph};
use crate::maniplex::{IntersectionCheck, RootedManiplex, RotationSystem, Symmetry};
use crate::permcore::{PermGroup, Permutation};
use crate::report::{ExtensionReport, Verdict};
use crate::two_s_m::build_two_s_m;

/// The mix `G ◇ H` of two generated permutation groups.
#[derive(Clone, Debug)]
pub struct DiamondGroup {
    pub left: PermGroup,
    pub right: PermGroup,
    pub product: PermGroup,
}

impl DiamondGroup {
    pub fn order(&self) -> BigUint {
        self.product.order()
    }

    /// Paired generators on `A ⊔ B`.
    pub fn generators(&self) -> Vec<Permutation> {
        self.product.perms()
    }

    /// True iff the first projection is injective, i.e. `|G ◇ H| = |G|`.
    pub fn collapses_to_left(&self) -> bool {
        self.order() == self.left.order()
    }
}

/// Forms `G ◇ H` from generator `i` of `g` paired with generator `pairing[i]`
/// of `h`; `None` pairs generators by position.
pub fn diamond(g: &PermGroup, h: &PermGroup, pairing: Option<&[usize]>) -> Result<DiamondGroup> {
    let left = g.generators();
    let right = h.generators();
    let order: Vec<usize> = match pairing {
        Some(p) => p.to_vec(),
        None => (0..right.len()).collect(),
    };
    if order.len() != left.len() {
        return Err(Error::Precondition(format!(
            "generator counts differ: {} and {}",
            left.len(),
            order.len()
        )));
    }
    if let Some(&j) = order.iter().find(|&&j| j >= right.len()) {
        return Err(Error::GeneratorIndex {
            index: j,
            count: right.len(),
        });
    }
    let gens = left
        .iter()
        .zip(&order)
        .map(|((name, a), &j)| (name.clone(), a.direct_sum(&right[j].1)))
        .collect();
    let product = PermGroup::new(g.degree() + h.degree(), gens)?;
    Ok(DiamondGroup {
        left: g.clone(),
        right: h.clone(),
        product,
    })
}

fn diamond_of_perms(a: &[Permutation], b: &[Permutation]) -> Result<DiamondGroup> {
    let ga = PermGroup::from_perms(degree_of(a)?, a.to_vec())?;
    let gb = PermGroup::from_perms(degree_of(b)?, b.to_vec())?;
    diamond(&ga, &gb, None)
}

fn degree_of(gens: &[Permutation]) -> Result<usize> {
    let d = gens
        .first()
        .map(|p| p.degree())
        .ok_or_else(|| Error::Precondition("empty generator list".into()))?;
    match gens.iter().find(|p| p.degree() != d) {
        Some(p) => Err(Error::DegreeMismatch(d, p.degree())),
        None => Ok(d),
    }
}

/// `(s_1^{-1}, s_1² s_2, s_3, …, s_{n-1})`, with `s_2` acting first in `s_1² s_2`.
pub fn enantiomorph_generators(rs: &RotationSystem) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = rs.sigma.clone();
    if let Some(s1) = rs.sigma.first() {
        out[0] = s1.inverse();
        if let Some(s2) = rs.sigma.get(1) {
            out[1] = s2.compose(s1).compose(s1);
        }
    }
    out
}

/// True iff `σ_i ↦ σ'_i` (the enantiomorphic generators) extends to a group
/// automorphism, tested as `|G ◇ G'| = |G|`.
pub fn is_regular_via_mix(rs: &RotationSystem) -> Result<bool> {
    if rs.sigma.is_empty() {
        return Ok(true);
    }
    Ok(diamond_of_perms(&rs.sigma, &enantiomorph_generators(rs))?.collapses_to_left())
}

/// Checks the hypotheses for transferring the intersection property from
/// `Λ` to `Γ` along `γ_i ↦ λ_i`: the map is a homomorphism (`|Γ ◇ Λ| = |Γ|`)
/// and it is one-to-one on the facet subgroup `⟨γ_1, …, γ_{n-2}⟩`.
pub fn lemma_pre_quotient_check(gamma: &[Permutation], lambda: &[Permutation]) -> Result<bool> {
    if gamma.len() != lambda.len() {
        return Err(Error::Precondition(format!(
            "generator counts differ: {} and {}",
            gamma.len(),
            lambda.len()
        )));
    }
    let k = gamma.len().saturating_sub(1);
    let (hom, facet) = rayon::join(
        || diamond_of_perms(gamma, lambda).map(|d| d.collapses_to_left()),
        || -> Result<bool> {
            if k == 0 {
                return Ok(true);
            }
            let d = diamond_of_perms(&gamma[..k], &lambda[..k])?;
            Ok(d.collapses_to_left() && d.left.order() == d.right.order())
        },
    );
    Ok(hom? && facet?)
}

type Witness = (Vec<usize>, Vec<usize>);

/// Intersection property of `⟨σ_1, …, σ_{n-1}⟩` without assuming a free action.
///
/// Uses the recursive criterion for rotation groups: the property holds for
/// `⟨σ_a, …, σ_b⟩` iff it holds for `⟨σ_a, …, σ_{b-1}⟩` and `⟨σ_{a+1}, …, σ_b⟩`
/// and these two meet exactly in `⟨σ_{a+1}, …, σ_{b-1}⟩` (for two generators:
/// `⟨σ_a⟩ ∩ ⟨σ_b⟩ = 1`). Each intersection is computed by listing the
/// smaller subgroup and testing membership in the larger one; `limit` caps
/// the number of listed elements. A failure is witnessed by the generator
/// labels of the two intervals whose subgroups meet in too much.
pub fn intersection_property_groups(
    sigma: &[Permutation],
    limit: u64,
) -> Result<IntersectionCheck> {
    let m = sigma.len();
    if m <= 1 {
        return Ok(IntersectionCheck {
            holds: true,
            witness: None,
        });
    }
    let degree = degree_of(sigma)?;
    let group = |a: usize, b: usize| -> PermGroup {
        PermGroup::from_perms(degree, sigma[a..=b].to_vec()).expect("degrees agree")
    };
    // intervals [a, b] of generator positions, shortest first
    for len in 2..=m {
        let intervals: Vec<usize> = (0..=m - len).collect();
        let results: Vec<Result<Option<Witness>>> = intervals
            .par_iter()
            .map(|&a| {
                let b = a + len - 1;
                let (left, right) = (group(a, b - 1), group(a + 1, b));
                let middle = if len == 2 {
                    BigUint::from(1u32)
                } else {
                    group(a + 1, b - 1).order()
                };
                let (small, large) = if left.order() <= right.order() {
                    (&left, &right)
                } else {
                    (&right, &left)
                };
                if small.order() > BigUint::from(limit) {
                    return Err(Error::Limit(format!(
                        "both subgroups exceed {limit} elements"
                    )));
                }
                let chain = large.chain();
                let mut common = 0u64;
                small.for_each_element(|g| {
                    if chain.contains(g) {
                        common += 1;
                    }
                    true
                });
                let witness = (
                    (a..b).map(|i| i + 1).collect::<Vec<_>>(),
                    (a + 1..=b).map(|i| i + 1).collect::<Vec<_>>(),
                );
                Ok((BigUint::from(common) != middle).then_some(witness))
            })
            .collect();
        for r in results {
            if let Some(w) = r? {
                return Ok(IntersectionCheck {
                    holds: false,
                    witness: Some(w),
                });
            }
        }
    }
    Ok(IntersectionCheck {
        holds: true,
        witness: None,
    })
}

/// `σ_i^{p_i} = 1` with `σ_i` of order exactly `p_i`, and
/// `(σ_i σ_{i+1} ⋯ σ_j)² = 1` for `i < j`.
pub fn satisfies_rotation_relations(sigma: &[Permutation], p: &[u64]) -> bool {
    if sigma.len() != p.len() {
        return false;
    }
    let orders = sigma.iter().zip(p).all(|(s, &q)| s.order() == q);
    let products = (0..sigma.len()).all(|i| {
        ((i + 1)..sigma.len()).all(|j| {
            let prod = Permutation::product_of_functions(sigma[i].degree(), &sigma[i..=j]);
            prod.compose(&prod).is_identity()
        })
    });
    orders && products
}

/// Result of mixing a chiral extension with `2s^R`.
#[derive(Clone, Debug, Serialize)]
pub struct MixExtensionResult {
    /// `Γ_s` acting on the vertices of `P` followed by the white flags of `2s^R`.
    pub graph: GprGraph,
    pub report: ExtensionReport,
    /// Last entry `q` of the type of `P`.
    pub q: u64,
    pub s: u32,
    pub last_entry: u64,
    pub expected_last_entry: u64,
}

/// Element cap for listing subgroups in the intersection check.
pub const INTERSECTION_LIMIT: u64 = 2_000_000;

/// Builds `Γ_s = Aut⁺(P) ◇ Aut⁺(2s^R)` for a chiral extension `P` of `K`
/// (given by its GPR-graph) and a regular quotient `R` of `K`, and checks
/// that it is the rotation group of a chiral extension of `K` of type
/// `{p_1, …, p_{n-1}, lcm(q, 2s)}`.
pub fn regular_quotient_extension(
    p: &GprGraph,
    k: &RootedManiplex,
    r: &RootedManiplex,
    s: u32,
) -> Result<MixExtensionResult> {
    let n = k.rank();
    if p.rank() != n {
        return Err(Error::RankMismatch(n, p.rank()));
    }
    if r.rank() != n {
        return Err(Error::RankMismatch(n, r.rank()));
    }
    if s == 0 {
        return Err(Error::Precondition("s must be positive".into()));
    }
    if k.classify_symmetry() != Symmetry::Chiral {
        return Err(Error::Precondition("K is not chiral".into()));
    }
    if r.classify_symmetry() != Symmetry::Regular {
        return Err(Error::Precondition("R is not regular".into()));
    }
    if r.facets().len() < 2 {
        return Err(Error::Precondition("R has a single facet".into()));
    }
    if k.covers(r)?.is_none() {
        return Err(Error::Precondition("K does not cover R".into()));
    }
    let k_gpr = cayley_gpr(k)?;
    let aut_k = BigUint::from(k_gpr.num_vertices());
    let facet_mix = diamond_of_perms(&p.arrows()[..n - 1], k_gpr.arrows())?;
    if !(facet_mix.collapses_to_left() && facet_mix.order() == aut_k) {
        return Err(Error::Precondition(
            "the facet group of P is not the rotation group of K".into(),
        ));
    }

    let two = build_two_s_m(r, s)?;
    let two_rs = RotationSystem::of_maniplex(&two.maniplex)?;
    let right = &two_rs.sigma;
    let gens: Vec<Permutation> = p
        .arrows()
        .iter()
        .zip(right)
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    let a_size = p.num_vertices();
    let graph = GprGraph::new(a_size + two_rs.degree(), gens.clone(), p.base)?;
    let gamma = graph.group();
    let q = p.sigma(n).order();
    let expected = q.lcm(&(2 * s as u64));
    let last = gens[n - 1].order();
    let schlafli: Vec<u64> = gens.iter().map(|g| g.order()).collect();
    let p_types: Vec<u64> = p
        .arrows()
        .iter()
        .zip(right)
        .map(|(a, b)| a.order().lcm(&b.order()))
        .collect();

    let mut verdicts = Vec::new();
    let facet_order = PermGroup::from_perms(graph.num_vertices(), gens[..n - 1].to_vec())?.order();
    verdicts.push(Verdict::new(
        "facet_group_is_aut_k",
        facet_order == aut_k,
        format!("|facet group| = {facet_order}, |Aut+(K)| = {aut_k}"),
    ));
    let (pre, ip) = rayon::join(
        || lemma_pre_quotient_check(&gens, p.arrows()),
        || intersection_property_groups(&gens, INTERSECTION_LIMIT),
    );
    let pre = pre?;
    verdicts.push(Verdict::new(
        "projection_hypotheses",
        pre,
        "projection onto Aut+(P) is a homomorphism, one-to-one on the facet group",
    ));
    let ip = ip?;
    verdicts.push(Verdict::new(
        "intersection_property",
        ip.holds,
        match &ip.witness {
            Some((i, j)) => format!("fails for generators {i:?} and {j:?}"),
            None => "holds".to_string(),
        },
    ));
    verdicts.push(Verdict::new(
        "rotation_relations",
        satisfies_rotation_relations(&gens, &p_types),
        format!("p_i = {p_types:?}"),
    ));
    verdicts.push(Verdict::new(
        "last_entry_lcm",
        last == expected,
        format!("order {last}, lcm({q}, {}) = {expected}", 2 * s),
    ));
    let regular = is_regular_via_mix(&graph.rotation_system()?)?;
    let facets_chiral = k.classify_symmetry() == Symmetry::Chiral;
    verdicts.push(Verdict::new(
        "chiral",
        !regular && facets_chiral,
        format!("regular via mix: {regular}, facets chiral: {facets_chiral}"),
    ));
    let report = ExtensionReport {
        verdicts,
        schlafli,
        group_order: gamma.order().to_string(),
    };
    if !report.passed() {
        let failed: Vec<String> = report
            .failures()
            .iter()
            .map(|v| format!("{}: {}", v.condition, v.detail))
            .collect();
        return Err(Error::Verification(failed.join("; ")));
    }
    Ok(MixExtensionResult {
        graph,
        report,
        q,
        s,
        last_entry: last,
        expected_last_entry: expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extend_db::{extend_dually_bipartite, Representative};
    use crate::maniplex::Maniplex;
    use crate::toroidal::{build_toroidal_map, Family, TorusParams};

    fn torus(b: i64, c: i64) -> RootedManiplex {
        build_toroidal_map(TorusParams::new(Family::F44, b, c).unwrap()).unwrap()
    }

    fn rotation_group(m: &RootedManiplex) -> PermGroup {
        m.rotation_system().unwrap().group()
    }

    #[test]
    fn diamond_orders() {
        let g = rotation_group(&torus(4, 2));
        let triv = PermGroup::new(
            1,
            (0..2)
                .map(|i| (format!("e{i}"), Permutation::identity(1)))
                .collect(),
        )
        .unwrap();
        assert_eq!(diamond(&g, &triv, None).unwrap().order(), g.order());
        assert_eq!(diamond(&g, &g, None).unwrap().order(), g.order());
        let r = rotation_group(&torus(2, 0));
        let d = diamond(&g, &r, None).unwrap();
        assert_eq!(d.order(), BigUint::from(80u32));
        assert!(d.collapses_to_left());
        let one = PermGroup::from_perms(3, vec![Permutation::identity(3)]).unwrap();
        assert!(diamond(&g, &one, None).is_err());
        assert!(diamond(&g, &r, Some(&[0, 5])).is_err());
    }

    #[test]
    fn diamond_order_bounds() {
        let a = rotation_group(&torus(2, 1));
        let b = rotation_group(&torus(1, 1));
        let d = diamond(&a, &b, None).unwrap().order();
        let (oa, ob) = (a.order(), b.order());
        assert_eq!(&d % &oa, BigUint::from(0u32));
        assert_eq!(&d % &ob, BigUint::from(0u32));
        assert_eq!((&oa * &ob) % &d, BigUint::from(0u32));
    }

    #[test]
    fn enantiomorph_is_involutory() {
        let rs = torus(2, 1).rotation_system().unwrap();
        let once = enantiomorph_generators(&rs);
        let twice = enantiomorph_generators(&RotationSystem::new(once.clone(), rs.base).unwrap());
        assert_eq!(twice, rs.sigma);
        assert_ne!(once, rs.sigma);
        let poly = Maniplex::polygon(5).unwrap().rooted(0).unwrap();
        let prs = poly.rotation_system().unwrap();
        assert_eq!(enantiomorph_generators(&prs), vec![prs.s(1).inverse()]);
    }

    #[test]
    fn regularity_via_mix() {
        assert!(is_regular_via_mix(&torus(2, 0).rotation_system().unwrap()).unwrap());
        assert!(!is_regular_via_mix(&torus(2, 1).rotation_system().unwrap()).unwrap());
        let poly = Maniplex::polygon(6).unwrap().rooted(0).unwrap();
        assert!(is_regular_via_mix(&poly.rotation_system().unwrap()).unwrap());
    }

    #[test]
    fn pre_quotient_hypotheses() {
        let g = torus(4, 2).rotation_system().unwrap().sigma;
        assert!(lemma_pre_quotient_check(&g, &g).unwrap());
        // ⟨σ_1⟩ has order 4 on both sides
        let r = torus(2, 0).rotation_system().unwrap().sigma;
        assert!(lemma_pre_quotient_check(&g, &r).unwrap());
        let collapsed = vec![Permutation::identity(g[0].degree()), g[1].clone()];
        assert!(!lemma_pre_quotient_check(&g, &collapsed).unwrap());
        assert!(lemma_pre_quotient_check(&g, &g[..1]).is_err());
    }

    #[test]
    fn group_intersection_matches_orbit_check() {
        let e = extend_dually_bipartite(&torus(3, 1), 1, Representative::Least).unwrap();
        let rs = e.graph.rotation_system().unwrap();
        assert!(!rs.acts_freely());
        assert!(
            intersection_property_groups(&rs.sigma, INTERSECTION_LIMIT)
                .unwrap()
                .holds
        );
        let mut cases = vec![e.graph.group_of(&[1, 2]).perms()]
            .into_iter()
            .map(|g| RotationSystem::new(g, 0).unwrap())
            .collect::<Vec<_>>();
        for (b, c) in [(2, 1), (2, 0), (3, 1)] {
            cases.push(torus(b, c).rotation_system().unwrap());
        }
        for rs in cases {
            let orbit = rs.intersection_property_check().unwrap();
            let group = intersection_property_groups(&rs.sigma, INTERSECTION_LIMIT).unwrap();
            assert_eq!(orbit.holds, group.holds);
        }
        // σ_3 = σ_2^{-1} breaks ⟨σ_2⟩ ∩ ⟨σ_3⟩ = 1
        let k = torus(2, 1).rotation_system().unwrap();
        let bad = vec![k.s(1).clone(), k.s(2).clone(), k.s(2).inverse()];
        let check = intersection_property_groups(&bad, INTERSECTION_LIMIT).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some((vec![2], vec![3])));
    }

    #[test]
    fn rotation_relations() {
        let rs = torus(2, 1).rotation_system().unwrap();
        assert!(satisfies_rotation_relations(&rs.sigma, &[4, 4]));
        assert!(!satisfies_rotation_relations(&rs.sigma, &[4, 8]));
    }

    #[test]
    fn quotient_extension_lcm() {
        let k = torus(3, 1);
        let r = torus(1, 1);
        let p = extend_dually_bipartite(&k, 1, Representative::Least).unwrap();
        let q = p.last_entry;
        for s in [2u32, 3] {
            let m = regular_quotient_extension(&p.graph, &k, &r, s).unwrap();
            assert_eq!(m.last_entry, q.lcm(&(2 * s as u64)));
            assert_eq!(&m.report.schlafli[..2], &[4, 4]);
            assert!(m.report.passed());
        }
        assert!(regular_quotient_extension(&p.graph, &k, &torus(2, 0), 2).is_err());
        assert!(regular_quotient_extension(&p.graph, &k, &r, 0).is_err());
    }
}

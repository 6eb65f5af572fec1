//! Toroidal maps `{4,4}_(b,c)`, `{3,6}_(b,c)` and `{6,3}_(b,c)` as quotients
//! of the plane tessellations by the lattice `Λ_(b,c)`.
//!
//! Points are integer coordinates: in the square basis for `{4,4}`, in a
//! basis `e1, e2` at 60° for `{3,6}`. A flag of the tessellation is a triple
//! `(v, u, w)` of a vertex and two adjacent unit directions: the edge leaves
//! `v` along `u` and the face is the one spanned by `u` and `w`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maniplex::{Maniplex, RootedManiplex};
use crate::permcore::Permutation;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "44")]
    F44,
    #[serde(rename = "36")]
    F36,
    #[serde(rename = "63")]
    F63,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s
            .trim_matches(|c| c == '{' || c == '}')
            .replace(',', "")
            .as_str()
        {
            "44" => Ok(Family::F44),
            "36" => Ok(Family::F36),
            "63" => Ok(Family::F63),
            other => Err(Error::Precondition(format!(
                "unknown family {other:?} (expected 44, 36 or 63)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F44 => "{4,4}",
            Family::F36 => "{3,6}",
            Family::F63 => "{6,3}",
        })
    }
}

impl Family {
    pub fn schlafli(self) -> [u64; 2] {
        match self {
            Family::F44 => [4, 4],
            Family::F36 => [3, 6],
            Family::F63 => [6, 3],
        }
    }

    /// Rotation of the underlying lattice by one step (90° or 60°).
    fn rotate(self, (x, y): (i64, i64)) -> (i64, i64) {
        match self {
            Family::F44 => (-y, x),
            Family::F36 | Family::F63 => (-y, x + y),
        }
    }

    fn rotation_steps(self) -> usize {
        match self {
            Family::F44 => 4,
            _ => 6,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusParams {
    pub family: Family,
    pub b: i64,
    pub c: i64,
}

impl TorusParams {
    pub fn new(family: Family, b: i64, c: i64) -> Result<Self> {
        if (b, c) == (0, 0) {
            return Err(Error::Precondition("(b, c) must be nonzero".into()));
        }
        Ok(TorusParams { family, b, c })
    }

    /// `|Λ_(b,c)|` index in the vertex lattice: `b²+c²` or `b²+bc+c²`.
    pub fn vertex_count(&self) -> u64 {
        let (b, c) = (self.b as i128, self.c as i128);
        let v = match self.family {
            Family::F44 => b * b + c * c,
            _ => b * b + b * c + c * c,
        };
        v as u64
    }

    pub fn flag_count(&self) -> u64 {
        match self.family {
            Family::F44 => 8 * self.vertex_count(),
            _ => 12 * self.vertex_count(),
        }
    }

    pub fn facet_count(&self) -> u64 {
        match self.family {
            Family::F44 => self.vertex_count(),
            Family::F36 => 2 * self.vertex_count(),
            Family::F63 => self.vertex_count(),
        }
    }

    /// `(b, c)` rotated into the sector `b > 0, c ≥ 0`; describes the same map.
    pub fn normalized(&self) -> (i64, i64) {
        let mut v = (self.b, self.c);
        for _ in 0..self.family.rotation_steps() {
            if v.0 > 0 && v.1 >= 0 {
                return v;
            }
            v = self.family.rotate(v);
        }
        unreachable!("rotations cover every nonzero vector")
    }

    fn lattice(&self) -> Lattice {
        let v1 = (self.b, self.c);
        Lattice::new(v1, self.family.rotate(v1))
    }
}

impl fmt::Display for TorusParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_({},{})", self.family, self.b, self.c)
    }
}

/// A full-rank sublattice of `Z²` with a triangular basis `(a, x), (0, d)`,
/// giving canonical coset representatives `(i, j)` with `0 ≤ i < a`, `0 ≤ j < d`.
#[derive(Clone, Debug)]
struct Lattice {
    a: i64,
    x: i64,
    d: i64,
}

impl Lattice {
    fn new(v1: (i64, i64), v2: (i64, i64)) -> Self {
        let det = (v1.0 * v2.1 - v1.1 * v2.0).abs();
        let eg = v1.0.extended_gcd(&v2.0);
        let (g, m, k) = if eg.gcd < 0 {
            (-eg.gcd, -eg.x, -eg.y)
        } else {
            (eg.gcd, eg.x, eg.y)
        };
        let x = m * v1.1 + k * v2.1;
        let d = det / g;
        Lattice {
            a: g,
            x: x.rem_euclid(d),
            d,
        }
    }

    fn index(&self) -> i64 {
        self.a * self.d
    }

    fn reduce(&self, (p, q): (i64, i64)) -> (i64, i64) {
        let t = p.div_euclid(self.a);
        let i = p - t * self.a;
        let j = (q - t * self.x).rem_euclid(self.d);
        (i, j)
    }

    fn class(&self, v: (i64, i64)) -> usize {
        let (i, j) = self.reduce(v);
        (i * self.d + j) as usize
    }

    fn contains(&self, v: (i64, i64)) -> bool {
        self.reduce(v) == (0, 0)
    }

    fn representative(&self, class: usize) -> (i64, i64) {
        let class = class as i64;
        (class / self.d, class % self.d)
    }
}

const SQUARE_DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
const HEX_DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

fn sub(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 - b.0, a.1 - b.1)
}

fn neg(a: (i64, i64)) -> (i64, i64) {
    (-a.0, -a.1)
}

/// Builds the flag graph; `next` maps a flag `(v, u, w)` to its three neighbours.
fn build(
    lattice: &Lattice,
    dirs: &[(i64, i64)],
    next: impl Fn((i64, i64), (i64, i64), (i64, i64)) -> [((i64, i64), (i64, i64), (i64, i64)); 3],
) -> Result<Maniplex> {
    let k = dirs.len();
    let dir_index = |u: (i64, i64)| dirs.iter().position(|&d| d == u).expect("unit direction");
    // local index 2a + e: u = dirs[a], w = dirs[a + 1] (e = 0) or dirs[a - 1] (e = 1)
    let local = |u: (i64, i64), w: (i64, i64)| {
        let a = dir_index(u);
        let b = dir_index(w);
        if b == (a + 1) % k {
            2 * a
        } else {
            debug_assert_eq!(b, (a + k - 1) % k);
            2 * a + 1
        }
    };
    let per_vertex = 2 * k;
    let vertices = lattice.index() as usize;
    let n = vertices * per_vertex;
    let mut adj = vec![vec![0u32; n]; 3];
    for class in 0..vertices {
        let v = lattice.representative(class);
        for a in 0..k {
            for e in 0..2 {
                let u = dirs[a];
                let w = if e == 0 {
                    dirs[(a + 1) % k]
                } else {
                    dirs[(a + k - 1) % k]
                };
                let x = class * per_vertex + 2 * a + e;
                for (i, (v2, u2, w2)) in next(v, u, w).into_iter().enumerate() {
                    adj[i][x] = (lattice.class(v2) * per_vertex + local(u2, w2)) as u32;
                }
            }
        }
    }
    Maniplex::new(
        adj.into_iter()
            .map(Permutation::from_images)
            .collect::<Result<Vec<_>>>()?,
    )
}

/// The toroidal map; base flag 0 is `(origin, e1, e2)`.
pub fn build_toroidal_map(p: TorusParams) -> Result<RootedManiplex> {
    if (p.b, p.c) == (0, 0) {
        return Err(Error::Precondition("(b, c) must be nonzero".into()));
    }
    let lattice = p.lattice();
    let m = match p.family {
        Family::F44 => build(&lattice, &SQUARE_DIRS, |v, u, w| {
            [(add(v, u), neg(u), w), (v, w, u), (v, u, neg(w))]
        })?,
        Family::F36 | Family::F63 => {
            let m = build(&lattice, &HEX_DIRS, |v, u, w| {
                [(add(v, u), neg(u), sub(w, u)), (v, w, u), (v, u, sub(u, w))]
            })?;
            if p.family == Family::F63 {
                m.dual()
            } else {
                m
            }
        }
    };
    m.rooted(0)
}

/// True iff the map is chiral: `bc(b−c) ≠ 0` after rotating `(b, c)` into
/// the sector `b > 0, c ≥ 0`.
pub fn is_chiral_params(p: TorusParams) -> bool {
    let (b, c) = p.normalized();
    b * c * (b - c) != 0
}

/// The regular toroidal map of the same family with the most facets (at
/// least two) that `p` covers, searched among `Λ_(d,0)` and `Λ_(d,d)`.
pub fn regular_quotient(p: TorusParams) -> Result<Option<(TorusParams, RootedManiplex)>> {
    let lattice = p.lattice();
    let v1 = (p.b, p.c);
    let v2 = p.family.rotate(v1);
    let bound = p.b.abs().max(p.c.abs());
    let mut best: Option<TorusParams> = None;
    for d in 1..=bound {
        for q in [
            TorusParams::new(p.family, d, 0)?,
            TorusParams::new(p.family, d, d)?,
        ] {
            let coarse = q.lattice();
            if !(coarse.contains(v1) && coarse.contains(v2)) || q.facet_count() < 2 {
                continue;
            }
            debug_assert!(coarse.index() <= lattice.index());
            if best.is_none_or(|b| q.facet_count() > b.facet_count()) {
                best = Some(q);
            }
        }
    }
    best.map(|q| build_toroidal_map(q).map(|m| (q, m)))
        .transpose()
}

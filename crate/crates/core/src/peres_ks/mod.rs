//! The Peres 33-ray set, its completion to orthonormal bases, and an
//! exhaustive search for Kochen-Specker value maps.

mod io;
mod solver;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::exact_algebra::{canonicalize, cross, AlgebraError, Ray, Vec3Exact};

pub use io::{certificate_json, parse_ray_set, to_dot, write_ray_set};
pub use solver::{check_assignment, solve_coloring, SearchCertificate, SearchResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KsError {
    #[error("ray id {id} is out of range for {count} rays")]
    RayOutOfRange { id: usize, count: usize },
    #[error("basis repeats ray id {0}")]
    RepeatedRay(usize),
    #[error("rays {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Deduplicated canonical rays with dense ids in insertion order.
#[derive(Clone, Debug, Default)]
pub struct RaySet {
    rays: Vec<Ray>,
    index: HashMap<Ray, usize>,
}

impl RaySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Collects rays, dropping later duplicates.
    pub fn from_rays<I: IntoIterator<Item = Ray>>(rays: I) -> Self {
        let mut s = RaySet::new();
        for r in rays {
            s.insert(r);
        }
        s
    }

    /// Returns the id of `ray`, adding it if absent.
    pub fn insert(&mut self, ray: Ray) -> usize {
        if let Some(&id) = self.index.get(&ray) {
            return id;
        }
        let id = self.rays.len();
        self.index.insert(ray.clone(), id);
        self.rays.push(ray);
        id
    }

    pub fn id_of(&self, ray: &Ray) -> Option<usize> {
        self.index.get(ray).copied()
    }

    pub fn contains(&self, ray: &Ray) -> bool {
        self.index.contains_key(ray)
    }

    pub fn get(&self, id: usize) -> Option<&Ray> {
        self.rays.get(id)
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }
}

impl std::ops::Index<usize> for RaySet {
    type Output = Ray;
    fn index(&self, id: usize) -> &Ray {
        &self.rays[id]
    }
}

/// Three distinct ray ids, stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    members: [usize; 3],
}

impl Basis {
    pub fn new(ids: [usize; 3]) -> Result<Self, KsError> {
        let mut members = ids;
        members.sort_unstable();
        if members[0] == members[1] || members[1] == members[2] {
            return Err(KsError::RepeatedRay(members[1]));
        }
        Ok(Basis { members })
    }

    /// Like [`Basis::new`], and additionally checks exact pairwise orthogonality in `rays`.
    pub fn checked(rays: &RaySet, ids: [usize; 3]) -> Result<Self, KsError> {
        let b = Basis::new(ids)?;
        for &id in &b.members {
            if id >= rays.len() {
                return Err(KsError::RayOutOfRange { id, count: rays.len() });
            }
        }
        let [i, j, k] = b.members;
        for (p, q) in [(i, j), (i, k), (j, k)] {
            if !rays[p].is_orthogonal(&rays[q]) {
                return Err(KsError::NotOrthogonal(p, q));
            }
        }
        Ok(b)
    }

    pub fn members(&self) -> [usize; 3] {
        self.members
    }

    pub fn contains(&self, id: usize) -> bool {
        self.members.contains(&id)
    }
}

/// Boolean variables (one per ray) constrained so that each basis holds exactly one `true`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringProblem {
    ray_count: usize,
    bases: Vec<Basis>,
}

impl ColoringProblem {
    pub fn new(ray_count: usize, bases: Vec<Basis>) -> Result<Self, KsError> {
        for b in &bases {
            for id in b.members() {
                if id >= ray_count {
                    return Err(KsError::RayOutOfRange { id, count: ray_count });
                }
            }
        }
        Ok(ColoringProblem { ray_count, bases })
    }

    pub fn ray_count(&self) -> usize {
        self.ray_count
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    /// The problem restricted to the listed bases (ray ids unchanged).
    pub fn restricted(&self, basis_indices: &[usize]) -> Self {
        ColoringProblem { ray_count: self.ray_count, bases: basis_indices.iter().map(|&k| self.bases[k]).collect() }
    }
}

const PERES_SEEDS: [[(i64, i64); 3]; 4] =
    [[(0, 0), (0, 0), (1, 0)], [(0, 0), (1, 0), (1, 0)], [(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 0), (0, 1)]];

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Orbit of `seed` under coordinate permutations and sign flips, as canonical rays
/// in first-seen order.
pub fn orbit(seed: &Vec3Exact) -> Vec<Ray> {
    let comps = seed.components();
    let mut seen = RaySet::new();
    for p in PERMUTATIONS {
        for signs in 0..8u8 {
            let c: Vec<_> = (0..3)
                .map(|i| {
                    let x = comps[p[i]].clone();
                    if signs & (1 << i) != 0 {
                        -x
                    } else {
                        x
                    }
                })
                .collect();
            let v = Vec3Exact::new(c[0].clone(), c[1].clone(), c[2].clone());
            seen.insert(canonicalize(&v).expect("seed vectors are nonzero"));
        }
    }
    seen.rays
}

/// The 33 Peres rays: orbits of (0,0,1), (0,1,1), (0,1,√2) and (1,1,√2).
pub fn peres_33() -> RaySet {
    RaySet::from_rays(PERES_SEEDS.iter().flat_map(|s| orbit(&Vec3Exact::from_pairs(*s))))
}

/// Completes every exactly-orthogonal pair of `s` to a basis via the cross product.
///
/// Returns the enlarged ray set (original ids preserved, new rays appended)
/// and the distinct bases in discovery order.
pub fn complete_bases(s: &RaySet) -> (RaySet, Vec<Basis>) {
    let mut out = s.clone();
    let mut seen = HashSet::new();
    let mut bases = Vec::new();
    let n = s.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if !s[i].is_orthogonal(&s[j]) {
                continue;
            }
            let w = cross(s[i].vector(), s[j].vector()).expect("orthogonal nonzero vectors are independent");
            let k = out.insert(canonicalize(&w).expect("cross product is nonzero"));
            let b = Basis::new([i, j, k]).expect("completion ray differs from both inputs");
            if seen.insert(b) {
                bases.push(b);
            }
        }
    }
    (out, bases)
}

/// Pairs `(i, j)`, `i < j`, whose rays are exactly orthogonal.
pub fn orthogonality_graph(s: &RaySet) -> Vec<(usize, usize)> {
    let n = s.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if s[i].is_orthogonal(&s[j]) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// The complete Peres structure: 57 rays, 40 bases, and the coloring problem over them.
#[derive(Clone, Debug)]
pub struct PeresStructure {
    pub rays: RaySet,
    pub bases: Vec<Basis>,
}

impl PeresStructure {
    pub fn build() -> Self {
        let (rays, bases) = complete_bases(&peres_33());
        PeresStructure { rays, bases }
    }

    pub fn problem(&self) -> ColoringProblem {
        ColoringProblem::new(self.rays.len(), self.bases.clone()).expect("completion ids are in range")
    }
}

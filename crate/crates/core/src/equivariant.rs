//! Groups acting on the palette, equivariant pair colourings, and graphs built
//! from semiregular orbits.
//!
//! A [`FiniteGroup`] carries a colour action `phi`. A [`PairColouring`] stores
//! `f(1, y)` for every nonidentity `y` and evaluates
//! `f(x, y) = f(1, y x^-1)^phi(x)`, which is equivariant by construction;
//! symmetry is the property that has to be checked. An [`OrbitGraphSpec`] lays
//! `N` copies of the group side by side, colours edges inside an orbit with
//! `f` and edges between orbits `i < j` with `colour(y_i, z_j) =
//! b_ij(y z^-1)^phi(z)`, so right multiplication by `g` permutes colours by
//! `phi(g)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColouredGraph, GraphError, GraphFile, WitnessQuery};
use crate::perm::{self, Colour, Perm, PermError};

/// Largest group accepted by [`FiniteGroup::check_axioms`].
pub const AXIOM_GUARD: usize = 10_000;
/// Associativity is exhaustive up to this size and sampled above it.
pub const EXHAUSTIVE_ASSOCIATIVITY: usize = 200;
pub const SAMPLED_TRIPLES: usize = 1_000_000;
/// Pair-colouring laws are checked exhaustively up to this group size.
pub const EXHAUSTIVE_LAWS: usize = 48;
/// `sym_complement` verifies every element up to this palette size.
pub const EXHAUSTIVE_COMPLEMENT: usize = 5;
const SAMPLED_ELEMENTS: usize = 32;

#[derive(Debug, Error)]
pub enum EquivariantError {
    #[error("permutation set is not a group: {0}")]
    NotClosed(String),
    #[error("malformed group table: {0}")]
    Table(String),
    #[error("involution {element} acts as {perm} without fixed colours")]
    FixedPointFreeInvolution { element: usize, perm: Perm },
    #[error("f is undefined on the diagonal (x = y = {0})")]
    Diagonal(usize),
    #[error("element {element} out of range for a group of size {size}")]
    ElementRange { element: usize, size: usize },
    #[error("orbit count must be at least 1")]
    NoOrbits,
    #[error("invalid base values: {0}")]
    InvalidBase(String),
    #[error("query vertex {vertex} lies outside the {vertices} existing vertices")]
    QueryOutOfRange { vertex: usize, vertices: usize },
    #[error("palette size {0} must be odd and at least 3 for a complement")]
    EvenPalette(usize),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("spec file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite group given by its multiplication table, with element 0 the
/// identity, and a colour action `phi` on `{1..m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    size: usize,
    m: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    phi: Vec<Perm>,
}

impl FiniteGroup {
    /// Wraps a table without checking the group axioms; see
    /// [`FiniteGroup::check_axioms`]. Only the shape is validated.
    pub fn from_raw(mul: Vec<Vec<usize>>, phi: Vec<Perm>) -> Result<Self, EquivariantError> {
        let size = mul.len();
        if size == 0 {
            return Err(EquivariantError::Table("empty group".into()));
        }
        if phi.len() != size {
            return Err(EquivariantError::Table(format!(
                "{} phi entries for {size} elements",
                phi.len()
            )));
        }
        let m = phi[0].degree();
        if phi.iter().any(|p| p.degree() != m) {
            return Err(EquivariantError::Table("phi degrees differ".into()));
        }
        let mut flat = Vec::with_capacity(size * size);
        for row in &mul {
            if row.len() != size {
                return Err(EquivariantError::Table("table is not square".into()));
            }
            for &e in row {
                if e >= size {
                    return Err(EquivariantError::ElementRange { element: e, size });
                }
                flat.push(e as u32);
            }
        }
        let inv = (0..size)
            .map(|a| {
                (0..size)
                    .find(|&b| flat[a * size + b] == 0)
                    .unwrap_or(0) as u32
            })
            .collect();
        Ok(FiniteGroup {
            size,
            m,
            mul: flat,
            inv,
            phi,
        })
    }

    /// The permutation group on `{1..m}` formed by `perms`, acting on itself
    /// tautologically. The identity gets label 0; the others keep their
    /// first-occurrence order.
    pub fn from_perms(perms: &[Perm]) -> Result<Self, EquivariantError> {
        let first = perms
            .first()
            .ok_or_else(|| EquivariantError::NotClosed("empty set".into()))?;
        let m = first.degree();
        let identity = Perm::identity(m);
        if !perms.contains(&identity) {
            return Err(EquivariantError::NotClosed("identity missing".into()));
        }
        let mut elements = vec![identity];
        for p in perms {
            if p.degree() != m {
                return Err(PermError::DegreeMismatch {
                    left: m,
                    right: p.degree(),
                }
                .into());
            }
            if !elements.contains(p) {
                elements.push(p.clone());
            }
        }
        let index: HashMap<&Perm, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut mul = Vec::with_capacity(elements.len());
        for a in &elements {
            let mut row = Vec::with_capacity(elements.len());
            for b in &elements {
                let ab = a.compose(b)?;
                let label = index.get(&ab).ok_or_else(|| {
                    EquivariantError::NotClosed(format!("{a} * {b} = {ab} is missing"))
                })?;
                row.push(*label);
            }
            mul.push(row);
        }
        FiniteGroup::from_raw(mul, elements)
    }

    pub fn trivial(m: usize) -> Self {
        FiniteGroup {
            size: 1,
            m,
            mul: vec![0],
            inv: vec![0],
            phi: vec![Perm::identity(m)],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Degree of the colour action.
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn phi(&self, a: usize) -> &Perm {
        &self.phi[a]
    }

    pub fn is_involution(&self, a: usize) -> bool {
        a != 0 && self.mul(a, a) == 0
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut t = 1;
        while x != 0 {
            x = self.mul(x, a);
            t += 1;
            if t > self.size {
                break;
            }
        }
        t
    }

    /// Elements acting trivially on the colours.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.size).filter(|&g| self.phi[g].is_identity()).collect()
    }

    /// The table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul
            .chunks(self.size)
            .map(|row| row.iter().map(|&e| e as usize).collect())
            .collect()
    }

    pub fn check_axioms(&self) -> bool {
        self.axiom_violation().is_none()
    }

    /// First failed group or homomorphism law, if any.
    pub fn axiom_violation(&self) -> Option<String> {
        let n = self.size;
        if n > AXIOM_GUARD {
            return Some(format!("size {n} exceeds the guard {AXIOM_GUARD}"));
        }
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Some(format!("0 is not an identity for {a}"));
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != 0 || self.mul(ai, a) != 0 {
                return Some(format!("{a} has no two-sided inverse"));
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            (self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)))
                .then(|| format!("({a} {b}) {c} != {a} ({b} {c})"))
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if let Some(v) = assoc(a, b, c) {
                            return Some(v);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if let Some(v) = assoc(a, b, c) {
                    return Some(v);
                }
            }
        }
        if !self.phi[0].is_identity() {
            return Some("phi(identity) is not the identity".into());
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = &self.phi[self.mul(a, b)];
                let rhs = self.phi[a].compose(&self.phi[b]).expect("degrees agree");
                if *lhs != rhs {
                    return Some(format!("phi({a} {b}) != phi({a}) phi({b})"));
                }
            }
        }
        None
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            size: self.size,
            mul: self.table(),
            phi: self.phi.clone(),
        }
    }

    pub fn from_file(file: &GroupFile) -> Result<Self, EquivariantError> {
        if file.mul.len() != file.size {
            return Err(EquivariantError::Format("size does not match table".into()));
        }
        let group = FiniteGroup::from_raw(file.mul.clone(), file.phi.clone())?;
        if let Some(v) = group.axiom_violation() {
            return Err(EquivariantError::Format(v));
        }
        Ok(group)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub size: usize,
    pub mul: Vec<Vec<usize>>,
    pub phi: Vec<Perm>,
}

/// Equivariant symmetric colouring of pairs of distinct group elements,
/// stored as its values `f(1, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColouring {
    group: Arc<FiniteGroup>,
    /// `base[y] = f(1, y)`; `base[0]` is unused and zero.
    base: Vec<u8>,
}

impl PairColouring {
    /// Chooses `f(1, y)` at random subject to
    /// `f(1, y^-1) = f(1, y)^phi(y^-1)`; an involution `s` must take a colour
    /// fixed by `phi(s)`.
    pub fn build(group: Arc<FiniteGroup>, seed: u64) -> Result<Self, EquivariantError> {
        let m = group.m();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut base = vec![0u8; group.size()];
        for y in 1..group.size() {
            if base[y] != 0 {
                continue;
            }
            let yi = group.inv(y);
            if yi == y {
                let fixed = group.phi(y).fixed_points();
                let c = fixed.choose(&mut rng).ok_or_else(|| {
                    EquivariantError::FixedPointFreeInvolution {
                        element: y,
                        perm: group.phi(y).clone(),
                    }
                })?;
                base[y] = *c as u8;
            } else {
                let c = rng.gen_range(1..=m);
                base[y] = c as u8;
                base[yi] = group.phi(yi).apply(c) as u8;
            }
        }
        Ok(PairColouring { group, base })
    }

    /// Validates explicitly given values `f(1, y)` for every `y != 0`.
    pub fn from_base(
        group: Arc<FiniteGroup>,
        values: &BTreeMap<usize, Colour>,
    ) -> Result<Self, EquivariantError> {
        let mut base = vec![0u8; group.size()];
        for (&y, c) in values {
            if y == 0 || y >= group.size() {
                return Err(EquivariantError::InvalidBase(format!("no base value at {y}")));
            }
            if c.get() > group.m() {
                return Err(EquivariantError::InvalidBase(format!("colour {c} out of range")));
            }
            base[y] = c.get() as u8;
        }
        for y in 1..group.size() {
            if base[y] == 0 {
                return Err(EquivariantError::InvalidBase(format!("missing value at {y}")));
            }
            let yi = group.inv(y);
            if group.phi(yi).apply(base[y] as usize) != base[yi] as usize {
                return Err(EquivariantError::InvalidBase(format!(
                    "f(1, {yi}) is not f(1, {y}) moved by phi({yi})"
                )));
            }
        }
        Ok(PairColouring { group, base })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// `f(1, y)`, or `None` for the identity.
    pub fn base(&self, y: usize) -> Option<Colour> {
        (y != 0 && y < self.base.len()).then(|| Colour::from_raw(self.base[y]))
    }

    pub fn base_values(&self) -> BTreeMap<usize, Colour> {
        (1..self.base.len())
            .map(|y| (y, Colour::from_raw(self.base[y])))
            .collect()
    }

    /// `f(x, y) = f(1, y x^-1)^phi(x)`.
    pub fn f_of(&self, x: usize, y: usize) -> Result<Colour, EquivariantError> {
        let size = self.group.size();
        for e in [x, y] {
            if e >= size {
                return Err(EquivariantError::ElementRange { element: e, size });
            }
        }
        if x == y {
            return Err(EquivariantError::Diagonal(x));
        }
        Ok(self.f_unchecked(x, y))
    }

    #[inline]
    fn f_unchecked(&self, x: usize, y: usize) -> Colour {
        let g = &self.group;
        let b = self.base[g.mul(y, g.inv(x))] as usize;
        Colour::from_raw(g.phi(x).apply(b) as u8)
    }

    /// Checks symmetry `f(x,y) = f(y,x)` and equivariance
    /// `f(xg, yg) = f(x,y)^phi(g)`.
    pub fn check_laws(&self, mode: LawCheck) -> LawReport {
        let g = &self.group;
        let n = g.size();
        let mut report = LawReport::default();
        let check = |x: usize, y: usize, h: usize, report: &mut LawReport| {
            let fxy = self.f_unchecked(x, y);
            if h == 0 {
                report.symmetry_checked += 1;
                if fxy != self.f_unchecked(y, x) {
                    report.symmetry_violations.push((x, y));
                }
            }
            report.equivariance_checked += 1;
            if self.f_unchecked(g.mul(x, h), g.mul(y, h)) != fxy.permuted(g.phi(h)) {
                report.equivariance_violations.push((x, y, h));
            }
        };
        match mode {
            LawCheck::Exhaustive => {
                for x in 0..n {
                    for y in (0..n).filter(|&y| y != x) {
                        for h in 0..n {
                            check(x, y, h, &mut report);
                        }
                    }
                }
            }
            LawCheck::Sampled { triples, seed } => {
                if n < 2 {
                    return report;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..triples {
                    let x = rng.gen_range(0..n);
                    let y = (x + rng.gen_range(1..n)) % n;
                    let h = rng.gen_range(0..n);
                    check(x, y, 0, &mut report);
                    check(x, y, h, &mut report);
                }
            }
        }
        report
    }

    /// Exhaustive up to [`EXHAUSTIVE_LAWS`] elements, else `triples` samples.
    pub fn default_law_check(&self, triples: usize, seed: u64) -> LawReport {
        if self.group.size() <= EXHAUSTIVE_LAWS {
            self.check_laws(LawCheck::Exhaustive)
        } else {
            self.check_laws(LawCheck::Sampled { triples, seed })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawCheck {
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub symmetry_checked: usize,
    pub equivariance_checked: usize,
    pub symmetry_violations: Vec<(usize, usize)>,
    pub equivariance_violations: Vec<(usize, usize, usize)>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.symmetry_violations.is_empty() && self.equivariance_violations.is_empty()
    }
}

/// Vertex `x_i`: element `x` of orbit `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitVertex {
    pub orbit: usize,
    pub element: usize,
}

/// `N` semiregular orbits of a group with intra-orbit colouring `f` and, for
/// each `i < j`, the colours `b_ij(x)` of the edges `{x_i, 1_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGraphSpec {
    colouring: PairColouring,
    orbits: usize,
    /// `inter[j (j-1) / 2 + i]` holds `b_ij` for `i < j`.
    inter: Vec<Vec<u8>>,
    seed: u64,
}

impl OrbitGraphSpec {
    /// Draws every `b_ij` uniformly from the palette.
    pub fn new(colouring: PairColouring, orbits: usize, seed: u64) -> Result<Self, EquivariantError> {
        if orbits == 0 {
            return Err(EquivariantError::NoOrbits);
        }
        let size = colouring.group.size();
        let m = colouring.group.m();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inter = Vec::with_capacity(orbits * (orbits - 1) / 2);
        for _j in 1..orbits {
            for _i in 0.._j {
                inter.push((0..size).map(|_| rng.gen_range(1..=m) as u8).collect());
            }
        }
        Ok(OrbitGraphSpec {
            colouring,
            orbits,
            inter,
            seed,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.colouring.group
    }

    pub fn colouring(&self) -> &PairColouring {
        &self.colouring
    }

    pub fn orbits(&self) -> usize {
        self.orbits
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vertex_count(&self) -> usize {
        self.orbits * self.group().size()
    }

    pub fn vertex(&self, v: OrbitVertex) -> usize {
        v.orbit * self.group().size() + v.element
    }

    pub fn label(&self, v: usize) -> OrbitVertex {
        let size = self.group().size();
        OrbitVertex {
            orbit: v / size,
            element: v % size,
        }
    }

    /// `b_ij(x)`, the colour of `{x_i, 1_j}`, for `i < j`.
    pub fn inter_colour(&self, i: usize, j: usize, x: usize) -> Option<Colour> {
        if i >= j || j >= self.orbits {
            return None;
        }
        self.inter[j * (j - 1) / 2 + i]
            .get(x)
            .map(|&c| Colour::from_raw(c))
    }

    pub fn assemble(&self) -> ColouredGraph {
        let g = self.group();
        let size = g.size();
        ColouredGraph::from_fn(self.vertex_count(), g.m(), |u, v| {
            let (i, x) = (u / size, u % size);
            let (j, y) = (v / size, v % size);
            if i == j {
                self.colouring.f_unchecked(x, y)
            } else {
                // u < v, so i < j
                let b = self.inter[j * (j - 1) / 2 + i][g.mul(x, g.inv(y))] as usize;
                Colour::from_raw(g.phi(y).apply(b) as u8)
            }
        })
        .expect("palette validated by the group")
    }

    /// Right multiplication `x_i -> (x g)_i` as a vertex permutation.
    pub fn action_vertex_perm(&self, g: usize) -> Perm {
        let group = self.group();
        let size = group.size();
        let images = (0..self.vertex_count())
            .map(|v| (v / size) * size + group.mul(v % size, g))
            .collect();
        Perm::from_indices(images).expect("right multiplication is a bijection")
    }

    /// Checks every group element.
    pub fn verify_colour_group(&self) -> Result<ColourGroupReport, EquivariantError> {
        let all: Vec<usize> = (0..self.group().size()).collect();
        self.verify_elements(&all, true)
    }

    /// Checks the identity, the kernel, and a seeded sample of other elements.
    pub fn verify_colour_group_sampled(
        &self,
        count: usize,
        seed: u64,
    ) -> Result<ColourGroupReport, EquivariantError> {
        let group = self.group();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = group.kernel();
        let mut rest: Vec<usize> = (0..group.size()).filter(|g| !chosen.contains(g)).collect();
        rest.shuffle(&mut rng);
        chosen.extend(rest.into_iter().take(count));
        chosen.sort_unstable();
        self.verify_elements(&chosen, false)
    }

    fn verify_elements(
        &self,
        elements: &[usize],
        exhaustive: bool,
    ) -> Result<ColourGroupReport, EquivariantError> {
        let graph = self.assemble();
        let group = self.group();
        let identity = Perm::identity(group.m());
        let kernel = group.kernel();
        let mut report = ColourGroupReport {
            group_size: group.size(),
            orbits: self.orbits,
            vertices: graph.n(),
            exhaustive,
            checked_elements: elements.len(),
            failures: Vec::new(),
            kernel: kernel.clone(),
            kernel_colour_preserving: true,
            colour_preserving: Vec::new(),
        };
        for &g in elements {
            let s = self.action_vertex_perm(g);
            if let Some(pair) = graph.first_inconsistency(&s, group.phi(g))? {
                report.failures.push(ElementFailure {
                    element: g,
                    phi: group.phi(g).clone(),
                    pair,
                });
            }
            if graph.is_colour_consistent(&s, &identity)? {
                report.colour_preserving.push(g);
            } else if kernel.contains(&g) {
                report.kernel_colour_preserving = false;
            }
        }
        Ok(report)
    }

    /// Appends orbit `N` with `b_jN` chosen so that `1_N` is joined by colour
    /// `c` to every vertex of `U_c`; other entries are seeded-random.
    pub fn add_witness_orbit(&self, query: &WitnessQuery) -> Result<Self, EquivariantError> {
        let vertices = self.vertex_count();
        let size = self.group().size();
        let m = self.group().m();
        if query.parts().len() != m {
            return Err(GraphError::InvalidQuery(format!(
                "{} parts for palette size {m}",
                query.parts().len()
            ))
            .into());
        }
        let mut forced = HashMap::new();
        for (v, c) in query.members() {
            if v >= vertices {
                return Err(EquivariantError::QueryOutOfRange { vertex: v, vertices });
            }
            forced.insert(v, c);
        }
        let new_orbit = self.orbits;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(new_orbit as u64);
        let mut spec = self.clone();
        for j in 0..new_orbit {
            // phi(1) is the identity, so colour(y_j, 1_N) = b_jN(y).
            let map = (0..size)
                .map(|y| match forced.get(&(j * size + y)) {
                    Some(&c) => c,
                    None => rng.gen_range(1..=m) as u8,
                })
                .collect();
            spec.inter.push(map);
        }
        spec.orbits += 1;
        Ok(spec)
    }

    pub fn to_file(&self) -> SpecFile {
        let mut inter = BTreeMap::new();
        for j in 1..self.orbits {
            for i in 0..j {
                inter.insert(
                    format!("{i},{j}"),
                    self.inter[j * (j - 1) / 2 + i].iter().map(|&c| c as usize).collect(),
                );
            }
        }
        SpecFile {
            group: self.group().to_file(),
            base: self
                .colouring
                .base_values()
                .into_iter()
                .map(|(y, c)| (y.to_string(), c.get()))
                .collect(),
            orbits: self.orbits,
            inter,
            seed: self.seed,
        }
    }

    pub fn from_file(file: &SpecFile) -> Result<Self, EquivariantError> {
        let group = Arc::new(FiniteGroup::from_file(&file.group)?);
        let m = group.m();
        let mut values = BTreeMap::new();
        for (key, &c) in &file.base {
            let y: usize = key
                .parse()
                .map_err(|_| EquivariantError::Format(format!("bad base key {key:?}")))?;
            values.insert(y, Colour::new(c, m)?);
        }
        let colouring = PairColouring::from_base(group.clone(), &values)?;
        if file.orbits == 0 {
            return Err(EquivariantError::NoOrbits);
        }
        let expected = file.orbits * (file.orbits - 1) / 2;
        if file.inter.len() != expected {
            return Err(EquivariantError::Format(format!(
                "{} inter maps, expected {expected}",
                file.inter.len()
            )));
        }
        let mut inter = Vec::with_capacity(expected);
        for j in 1..file.orbits {
            for i in 0..j {
                let map = file
                    .inter
                    .get(&format!("{i},{j}"))
                    .ok_or_else(|| EquivariantError::Format(format!("missing inter map {i},{j}")))?;
                if map.len() != group.size() {
                    return Err(EquivariantError::Format(format!("inter map {i},{j} has wrong length")));
                }
                let mut row = Vec::with_capacity(map.len());
                for &c in map {
                    row.push(Colour::new(c, m)?.get() as u8);
                }
                inter.push(row);
            }
        }
        Ok(OrbitGraphSpec {
            colouring,
            orbits: file.orbits,
            inter,
            seed: file.seed,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("spec serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, EquivariantError> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    /// The assembled graph in the graph file format plus a vertex label table.
    pub fn assembled_json(&self) -> String {
        let file = LabelledGraphFile {
            graph: self.assemble().to_file(),
            vertices: (0..self.vertex_count()).map(|v| self.label(v)).collect(),
        };
        serde_json::to_string(&file).expect("graph serialization is infallible")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub group: GroupFile,
    pub base: BTreeMap<String, usize>,
    #[serde(rename = "N")]
    pub orbits: usize,
    pub inter: BTreeMap<String, Vec<usize>>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledGraphFile {
    #[serde(flatten)]
    pub graph: GraphFile,
    pub vertices: Vec<OrbitVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementFailure {
    pub element: usize,
    pub phi: Perm,
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct ColourGroupReport {
    pub group_size: usize,
    pub orbits: usize,
    pub vertices: usize,
    pub exhaustive: bool,
    pub checked_elements: usize,
    /// Elements whose vertex action does not permute colours by `phi`.
    pub failures: Vec<ElementFailure>,
    /// `{g : phi(g) = 1}`.
    pub kernel: Vec<usize>,
    pub kernel_colour_preserving: bool,
    /// Checked elements fixing every colour.
    pub colour_preserving: Vec<usize>,
}

impl ColourGroupReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.kernel_colour_preserving
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel.len()
    }

    /// Among checked elements, the colour-preserving ones are exactly the kernel.
    pub fn kernel_law_holds(&self) -> bool {
        self.colour_preserving
            .iter()
            .all(|g| self.kernel.binary_search(g).is_ok())
            && (!self.exhaustive || self.colour_preserving == self.kernel)
    }
}

/// Sym(m) on its natural action, for odd `m`: pair colouring, orbit graph
/// and verification. Every element is checked for `m <= 5`; larger `m`
/// checks a seeded sample.
pub fn sym_complement(
    m: usize,
    orbits: usize,
    seed: u64,
) -> Result<(OrbitGraphSpec, ColourGroupReport), EquivariantError> {
    if m.is_multiple_of(2) || m < 3 {
        return Err(EquivariantError::EvenPalette(m));
    }
    let group = Arc::new(FiniteGroup::from_perms(&perm::enumerate_sym(m)?)?);
    let colouring = PairColouring::build(group, seed).map_err(|e| match e {
        EquivariantError::FixedPointFreeInvolution { .. } => {
            EquivariantError::Internal(format!("odd palette produced {e}"))
        }
        other => other,
    })?;
    let spec = OrbitGraphSpec::new(colouring, orbits, seed)?;
    let report = if m <= EXHAUSTIVE_COMPLEMENT {
        spec.verify_colour_group()?
    } else {
        spec.verify_colour_group_sampled(SAMPLED_ELEMENTS, seed)?
    };
    Ok((spec, report))
}

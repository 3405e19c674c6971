//! Finite m-edge-coloured complete graphs.
//!
//! Vertices are `0..n`. Colours are stored densely, one byte per unordered
//! pair, indexed by the larger endpoint first so that appending a vertex only
//! appends a row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{self, Colour, Perm, PermError};

/// Default vertex bound for [`ColouredGraph::check_no_fpf_colour_involution`].
pub const OBSTRUCTION_GUARD: usize = 7;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("palette size {0} is below 2")]
    PaletteTooSmall(usize),
    #[error("palette size {0} exceeds {max}", max = Colour::MAX_PALETTE)]
    PaletteTooLarge(usize),
    #[error("palette size mismatch: {left} vs {right}")]
    PaletteMismatch { left: usize, right: usize },
    #[error("{what} permutation has degree {got}, expected {expected}")]
    DegreeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("palette size {0} is odd; the obstruction needs an even palette")]
    OddPalette(usize),
    #[error("{n} vertices exceeds the exhaustion guard {guard}")]
    ExhaustionGuard { n: usize, guard: usize },
    #[error("invalid witness query: {0}")]
    InvalidQuery(String),
    #[error("no witness for vertex {vertex}: graph is not saturated enough")]
    WitnessMissing { vertex: usize },
    #[error("invalid partial isomorphism: {0}")]
    InvalidPartialIso(String),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[inline]
fn pair_index(u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    b * (b - 1) / 2 + a
}

fn check_palette(m: usize) -> Result<(), GraphError> {
    if m < 2 {
        return Err(GraphError::PaletteTooSmall(m));
    }
    if m > Colour::MAX_PALETTE {
        return Err(GraphError::PaletteTooLarge(m));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColouredGraph {
    m: usize,
    n: usize,
    colours: Vec<u8>,
}

impl ColouredGraph {
    /// Builds a graph by asking `colour_of(u, v)` (with `u < v`) for every pair.
    pub fn from_fn<F>(n: usize, m: usize, mut colour_of: F) -> Result<Self, GraphError>
    where
        F: FnMut(usize, usize) -> Colour,
    {
        check_palette(m)?;
        let mut colours = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for v in 1..n {
            for u in 0..v {
                let c = colour_of(u, v);
                if c.get() > m {
                    return Err(PermError::ColourRange { value: c.get(), m }.into());
                }
                colours.push(c.raw());
            }
        }
        Ok(ColouredGraph { m, n, colours })
    }

    /// Every pair coloured independently and uniformly from `1..=m`.
    pub fn random(n: usize, m: usize, seed: u64) -> Result<Self, GraphError> {
        check_palette(m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(n, m, |_, _| Colour::from_raw(rng.gen_range(1..=m) as u8))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.colours.len()
    }

    /// Panics if `u == v` or either vertex is out of range.
    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Colour {
        assert!(u != v, "no colour on the diagonal");
        assert!(u < self.n && v < self.n, "vertex out of range");
        Colour::from_raw(self.colours[pair_index(u, v)])
    }

    #[inline]
    fn raw(&self, u: usize, v: usize) -> u8 {
        self.colours[pair_index(u, v)]
    }

    /// Unordered pairs `(u, v, colour)` with `u < v`, lexicographic.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Colour)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).map(move |v| (u, v, self.colour(u, v))))
    }

    /// Number of pairs of each colour; index 0 is colour 1.
    pub fn histogram(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.m];
        for &c in &self.colours {
            counts[c as usize - 1] += 1;
        }
        counts
    }

    /// Appends a vertex joined to vertex `w` by `colours[w]`.
    pub fn push_vertex(&mut self, colours: &[Colour]) -> Result<usize, GraphError> {
        if colours.len() != self.n {
            return Err(GraphError::Format(format!(
                "new vertex needs {} colours, got {}",
                self.n,
                colours.len()
            )));
        }
        for c in colours {
            if c.get() > self.m {
                return Err(PermError::ColourRange { value: c.get(), m: self.m }.into());
            }
        }
        self.colours.extend(colours.iter().map(|c| c.raw()));
        self.n += 1;
        Ok(self.n - 1)
    }

    /// The graph with every colour `c` replaced by `pi(c)`.
    pub fn recolour(&self, pi: &Perm) -> Result<Self, GraphError> {
        self.expect_degree("colour", pi, self.m)?;
        let table: Vec<u8> = (0..=self.m)
            .map(|c| if c == 0 { 0 } else { pi.apply(c) as u8 })
            .collect();
        Ok(ColouredGraph {
            m: self.m,
            n: self.n,
            colours: self.colours.iter().map(|&c| table[c as usize]).collect(),
        })
    }

    fn expect_degree(&self, what: &'static str, p: &Perm, expected: usize) -> Result<(), GraphError> {
        if p.degree() != expected {
            return Err(GraphError::DegreeMismatch {
                what,
                expected,
                got: p.degree(),
            });
        }
        Ok(())
    }

    /// Whether `colour(s(u), s(v)) == pi(colour(u, v))` for every pair.
    pub fn is_colour_consistent(&self, s: &Perm, pi: &Perm) -> Result<bool, GraphError> {
        Ok(self.first_inconsistency(s, pi)?.is_none())
    }

    /// Some pair `(u, v)`, `u < v`, violating consistency, if one exists.
    pub fn first_inconsistency(
        &self,
        s: &Perm,
        pi: &Perm,
    ) -> Result<Option<(usize, usize)>, GraphError> {
        self.expect_degree("vertex", s, self.n)?;
        self.expect_degree("colour", pi, self.m)?;
        let table: Vec<u8> = (0..=self.m)
            .map(|c| if c == 0 { 0 } else { pi.apply(c) as u8 })
            .collect();
        let img: Vec<usize> = (0..self.n).map(|v| s.map_index(v)).collect();
        let mut idx = 0;
        for v in 1..self.n {
            let sv = img[v];
            for (u, &su) in img[..v].iter().enumerate() {
                if self.raw(su, sv) != table[self.colours[idx] as usize] {
                    return Ok(Some((u, v)));
                }
                idx += 1;
            }
        }
        Ok(None)
    }

    /// Exhaustive check that no vertex permutation with a 2-cycle induces a
    /// fixed-point-free involution on the colours.
    pub fn check_no_fpf_colour_involution(&self) -> Result<ObstructionReport, GraphError> {
        self.check_no_fpf_colour_involution_with_guard(OBSTRUCTION_GUARD)
    }

    pub fn check_no_fpf_colour_involution_with_guard(
        &self,
        guard: usize,
    ) -> Result<ObstructionReport, GraphError> {
        if self.m % 2 == 1 {
            return Err(GraphError::OddPalette(self.m));
        }
        if self.n > guard {
            return Err(GraphError::ExhaustionGuard { n: self.n, guard });
        }
        let colour_involutions = perm::fixed_point_free_involutions(self.m)?;
        let mut report = ObstructionReport {
            m: self.m,
            n: self.n,
            vertex_perms: 0,
            colour_involutions: colour_involutions.clone(),
            pairs_checked: 0,
            citations: Vec::new(),
            consistent_pairs: Vec::new(),
        };
        if self.n < 2 {
            return Ok(report);
        }
        for s in perm::enumerate_sym(self.n)? {
            let swaps: Vec<(usize, usize)> = (0..self.n)
                .filter_map(|u| {
                    let v = s.map_index(u);
                    (u < v && s.map_index(v) == u).then_some((u, v))
                })
                .collect();
            if swaps.is_empty() {
                continue;
            }
            report.vertex_perms += 1;
            for pi in &colour_involutions {
                report.pairs_checked += 1;
                if self.is_colour_consistent(&s, pi)? {
                    report.consistent_pairs.push((s.clone(), pi.clone()));
                    continue;
                }
                let cited = swaps.iter().find_map(|&(u, v)| {
                    let c = self.colour(u, v);
                    let image = c.permuted(pi);
                    (image != c).then_some(ObstructionCitation {
                        vertex_perm: s.clone(),
                        colour_perm: pi.clone(),
                        edge: (u, v),
                        colour: c,
                        image,
                    })
                });
                report.citations.extend(cited);
            }
        }
        Ok(report)
    }

    /// Smallest vertex outside every part joined by colour `i` to all of `U_i`.
    pub fn find_witness(&self, query: &WitnessQuery) -> Option<usize> {
        debug_assert_eq!(query.parts.len(), self.m);
        let members: Vec<(usize, u8)> = query.members().collect();
        (0..self.n).find(|&v| {
            members
                .iter()
                .all(|&(u, c)| u != v && self.raw(u, v) == c)
        })
    }

    /// Repeatedly sweeps all witness queries of total size `<= k`, appending a
    /// witness vertex for every unsatisfied one. Stops after a sweep with no
    /// additions or after `rounds` sweeps.
    pub fn saturate(&self, k: usize, seed: u64, rounds: usize) -> Result<Saturation, GraphError> {
        if k == 0 || rounds == 0 {
            return Err(GraphError::InvalidQuery(
                "saturation needs k >= 1 and rounds >= 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut graph = self.clone();
        let mut added = 0;
        for sweep in 1..=rounds {
            let mut added_this_sweep = 0;
            for query in WitnessQuery::all(graph.n, graph.m, k) {
                if graph.find_witness(&query).is_some() {
                    continue;
                }
                let forced: BTreeMap<usize, u8> = query.members().collect();
                let colours: Vec<Colour> = (0..graph.n)
                    .map(|w| match forced.get(&w) {
                        Some(&c) => Colour::from_raw(c),
                        None => Colour::from_raw(rng.gen_range(1..=graph.m) as u8),
                    })
                    .collect();
                graph.push_vertex(&colours)?;
                added_this_sweep += 1;
            }
            added += added_this_sweep;
            if added_this_sweep == 0 {
                return Ok(Saturation {
                    graph,
                    achieved: true,
                    sweeps: sweep,
                    added,
                });
            }
        }
        Ok(Saturation {
            graph,
            achieved: false,
            sweeps: rounds,
            added,
        })
    }

    /// All queries of total size `<= k` that have no witness.
    pub fn unsatisfied_queries(&self, k: usize) -> Vec<WitnessQuery> {
        WitnessQuery::all(self.n, self.m, k)
            .filter(|q| self.find_witness(q).is_none())
            .collect()
    }

    /// Greedy colour-preserving injection of `small` into `self`. Succeeds
    /// whenever `self` has witnesses for all queries of size `< small.n()`.
    pub fn embed(&self, small: &ColouredGraph) -> Result<Vec<usize>, GraphError> {
        if small.m != self.m {
            return Err(GraphError::PaletteMismatch {
                left: small.m,
                right: self.m,
            });
        }
        let mut image: Vec<usize> = Vec::with_capacity(small.n);
        for h in 0..small.n {
            let mut parts = vec![Vec::new(); self.m];
            for (prev, &img) in image.iter().enumerate() {
                parts[small.colour(prev, h).get() - 1].push(img);
            }
            let query = WitnessQuery { parts };
            let w = self
                .find_witness(&query)
                .ok_or(GraphError::WitnessMissing { vertex: h })?;
            image.push(w);
        }
        Ok(image)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            m: self.m,
            n: self.n,
            colours: self.pairs().map(|(u, v, c)| [u, v, c.get()]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self, GraphError> {
        check_palette(file.m)?;
        let n = file.n;
        let total = n * n.saturating_sub(1) / 2;
        let mut colours = vec![0u8; total];
        for &[u, v, c] in &file.colours {
            if u >= v || v >= n {
                return Err(GraphError::Format(format!(
                    "pair [{u}, {v}] must satisfy u < v < n = {n}"
                )));
            }
            if c == 0 || c > file.m {
                return Err(GraphError::Format(format!(
                    "pair [{u}, {v}] has colour {c} outside 1..={}",
                    file.m
                )));
            }
            let slot = &mut colours[pair_index(u, v)];
            if *slot != 0 {
                return Err(GraphError::Format(format!("duplicate pair [{u}, {v}]")));
            }
            *slot = c as u8;
        }
        if let Some(pos) = colours.iter().position(|&c| c == 0) {
            let v = (0..n).find(|&v| v * (v + 1) / 2 > pos).unwrap_or(0);
            let u = pos - v * (v - 1) / 2;
            return Err(GraphError::Format(format!("missing pair [{u}, {v}]")));
        }
        Ok(ColouredGraph { m: file.m, n, colours })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    /// Graphviz export of the complete graph; edges carry `color_index`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph coloured {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  {v};");
        }
        for (u, v, c) in self.pairs() {
            let _ = writeln!(out, "  {u} -- {v} [color_index={c}];");
        }
        out.push_str("}\n");
        out
    }
}

/// On-disk graph format: every unordered pair once as `[u, v, colour]`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub m: usize,
    pub n: usize,
    pub colours: Vec<[usize; 3]>,
}

/// Why a particular `(s, pi)` pair fails: the 2-cycle `{u, v}` of `s` whose
/// colour `pi` moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCitation {
    pub vertex_perm: Perm,
    pub colour_perm: Perm,
    pub edge: (usize, usize),
    pub colour: Colour,
    pub image: Colour,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub m: usize,
    pub n: usize,
    /// Vertex permutations with at least one 2-cycle.
    pub vertex_perms: usize,
    pub colour_involutions: Vec<Perm>,
    pub pairs_checked: usize,
    pub citations: Vec<ObstructionCitation>,
    /// Pairs found colour-consistent; any entry is a counterexample.
    pub consistent_pairs: Vec<(Perm, Perm)>,
}

impl ObstructionReport {
    pub fn passed(&self) -> bool {
        self.consistent_pairs.is_empty() && self.citations.len() == self.pairs_checked
    }

    pub fn is_vacuous(&self) -> bool {
        self.pairs_checked == 0
    }
}

#[derive(Clone, Debug)]
pub struct Saturation {
    pub graph: ColouredGraph,
    pub achieved: bool,
    pub sweeps: usize,
    pub added: usize,
}

/// Disjoint vertex sets `U_1..U_m`; `parts[i]` holds `U_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WitnessQuery {
    parts: Vec<Vec<usize>>,
}

impl WitnessQuery {
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for part in &parts {
            for &v in part {
                if !seen.insert(v) {
                    return Err(GraphError::InvalidQuery(format!(
                        "vertex {v} appears in more than one part"
                    )));
                }
            }
        }
        Ok(WitnessQuery { parts })
    }

    pub fn empty(m: usize) -> Self {
        WitnessQuery {
            parts: vec![Vec::new(); m],
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn total_size(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// `(vertex, colour)` for every vertex in some part.
    pub fn members(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, part)| part.iter().map(move |&u| (u, i as u8 + 1)))
    }

    pub fn validate(&self, graph: &ColouredGraph) -> Result<(), GraphError> {
        if self.parts.len() != graph.m {
            return Err(GraphError::InvalidQuery(format!(
                "{} parts for palette size {}",
                self.parts.len(),
                graph.m
            )));
        }
        for (u, _) in self.members() {
            if u >= graph.n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n: graph.n });
            }
        }
        Ok(())
    }

    /// Every query over vertices `0..n` with total size `<= k`, ordered by
    /// total size, then vertex set (lexicographic), then colour assignment.
    pub fn all(n: usize, m: usize, k: usize) -> impl Iterator<Item = WitnessQuery> {
        (0..=k.min(n)).flat_map(move |size| {
            (0..n).combinations(size).flat_map(move |vertices| {
                let assignments: Box<dyn Iterator<Item = Vec<usize>>> = if size == 0 {
                    Box::new(std::iter::once(Vec::new()))
                } else {
                    Box::new((0..size).map(|_| 0..m).multi_cartesian_product())
                };
                assignments.map(move |colours| {
                    let mut parts = vec![Vec::new(); m];
                    for (&v, &c) in vertices.iter().zip(&colours) {
                        parts[c].push(v);
                    }
                    WitnessQuery { parts }
                })
            })
        })
    }
}

/// Injective colour-preserving partial map from graph A to graph B.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialIso {
    forward: BTreeMap<usize, usize>,
    backward: BTreeMap<usize, usize>,
}

impl PartialIso {
    pub fn new(pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut iso = PartialIso::default();
        for &(a, b) in pairs {
            iso.insert(a, b)?;
        }
        Ok(iso)
    }

    fn insert(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        if self.forward.contains_key(&a) || self.backward.contains_key(&b) {
            return Err(GraphError::InvalidPartialIso(format!(
                "{a} -> {b} breaks injectivity"
            )));
        }
        self.forward.insert(a, b);
        self.backward.insert(b, a);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn get(&self, a: usize) -> Option<usize> {
        self.forward.get(&a).copied()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.forward.iter().map(|(&a, &b)| (a, b)).collect()
    }

    pub fn inverse(&self) -> PartialIso {
        PartialIso {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn is_colour_preserving(&self, a: &ColouredGraph, b: &ColouredGraph) -> bool {
        let pairs = self.pairs();
        pairs.iter().all(|&(x, y)| x < a.n && y < b.n)
            && pairs.iter().tuple_combinations().all(|(&(x1, y1), &(x2, y2))| {
                a.colour(x1, x2) == b.colour(y1, y2)
            })
    }
}

/// One forth step: maps `v` to a witness in `b` for the colours `v` sees on
/// the domain of `p`.
pub fn extend_iso(
    a: &ColouredGraph,
    b: &ColouredGraph,
    p: &PartialIso,
    v: usize,
) -> Result<PartialIso, GraphError> {
    if a.m != b.m {
        return Err(GraphError::PaletteMismatch { left: a.m, right: b.m });
    }
    if v >= a.n {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: a.n });
    }
    if p.forward.contains_key(&v) {
        return Err(GraphError::InvalidPartialIso(format!("{v} already mapped")));
    }
    let mut parts = vec![Vec::new(); a.m];
    for (&u, &image) in &p.forward {
        parts[a.colour(u, v).get() - 1].push(image);
    }
    let w = b
        .find_witness(&WitnessQuery { parts })
        .ok_or(GraphError::WitnessMissing { vertex: v })?;
    let mut extended = p.clone();
    extended.insert(v, w)?;
    Ok(extended)
}

/// Alternates forth steps (smallest unmapped vertex of `a`) and back steps
/// (smallest unmapped vertex of `b`) until `p` has `target` pairs.
pub fn back_and_forth(
    a: &ColouredGraph,
    b: &ColouredGraph,
    start: &PartialIso,
    target: usize,
) -> Result<PartialIso, GraphError> {
    let mut p = start.clone();
    let mut forth = true;
    while p.len() < target {
        if forth {
            let v = (0..a.n)
                .find(|v| !p.forward.contains_key(v))
                .ok_or(GraphError::VertexOutOfRange { vertex: a.n, n: a.n })?;
            p = extend_iso(a, b, &p, v)?;
        } else {
            let w = (0..b.n)
                .find(|w| !p.backward.contains_key(w))
                .ok_or(GraphError::VertexOutOfRange { vertex: b.n, n: b.n })?;
            p = extend_iso(b, a, &p.inverse(), w)?.inverse();
        }
        forth = !forth;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: usize) -> Colour {
        Colour::new(v, 255).unwrap()
    }

    fn edge(m: usize, colour: usize) -> ColouredGraph {
        ColouredGraph::from_fn(2, m, |_, _| c(colour)).unwrap()
    }

    #[test]
    fn random_basics() {
        let g = ColouredGraph::random(0, 3, 1).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.pair_count(), 0);
        for seed in 0..20 {
            let g = ColouredGraph::random(2, 4, seed).unwrap();
            assert_eq!(g.pair_count(), 1);
            assert!((1..=4).contains(&g.colour(0, 1).get()));
        }
        assert!(matches!(
            ColouredGraph::random(3, 1, 0),
            Err(GraphError::PaletteTooSmall(1))
        ));
        assert_eq!(
            ColouredGraph::random(30, 3, 9).unwrap(),
            ColouredGraph::random(30, 3, 9).unwrap()
        );
    }

    #[test]
    fn random_colours_are_near_uniform() {
        let mut counts = [0usize; 3];
        for seed in 0..100 {
            let g = ColouredGraph::random(60, 3, seed).unwrap();
            for (i, h) in g.histogram().into_iter().enumerate() {
                counts[i] += h;
            }
        }
        let total: usize = counts.iter().sum();
        assert_eq!(total, 100 * 60 * 59 / 2);
        for h in counts {
            let freq = h as f64 / total as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.05 / 3.0, "{freq}");
        }
    }

    #[test]
    fn recolour_examples() {
        let g = ColouredGraph::random(8, 3, 4).unwrap();
        assert_eq!(g.recolour(&Perm::identity(3)).unwrap(), g);
        let t = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        assert_eq!(edge(2, 1).recolour(&t).unwrap().colour(0, 1).get(), 2);
        let pi = Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(g.recolour(&pi).unwrap().recolour(&pi.inverse()).unwrap(), g);
        assert!(matches!(
            g.recolour(&Perm::identity(2)),
            Err(GraphError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn consistency_examples() {
        let g = edge(2, 1);
        let swap = Perm::from_cycles(2, &[&[1, 2]]).unwrap();
        let id = Perm::identity(2);
        assert!(g.is_colour_consistent(&id, &id).unwrap());
        assert!(!g.is_colour_consistent(&swap, &swap).unwrap());
        assert!(g.is_colour_consistent(&swap, &id).unwrap());
        assert!(g.is_colour_consistent(&Perm::identity(3), &id).is_err());
    }

    #[test]
    fn obstruction_m2_n2() {
        for colour in 1..=2 {
            let report = edge(2, colour).check_no_fpf_colour_involution().unwrap();
            assert_eq!(report.vertex_perms, 1);
            assert_eq!(report.colour_involutions.len(), 1);
            assert_eq!(report.pairs_checked, 1);
            assert!(report.passed());
            assert_eq!(report.citations[0].edge, (0, 1));
        }
    }

    #[test]
    fn obstruction_m4_n4() {
        let g = ColouredGraph::random(4, 4, 17).unwrap();
        let report = g.check_no_fpf_colour_involution().unwrap();
        assert_eq!(report.colour_involutions.len(), 3);
        // types 2+1+1 (6 perms) and 2+2 (3 perms)
        assert_eq!(report.vertex_perms, 9);
        assert_eq!(report.pairs_checked, 27);
        assert!(report.passed());
    }

    #[test]
    fn obstruction_vacuous_and_errors() {
        for n in 0..2 {
            let g = ColouredGraph::random(n, 2, 0).unwrap();
            let report = g.check_no_fpf_colour_involution().unwrap();
            assert!(report.is_vacuous());
            assert!(report.passed());
        }
        let odd = ColouredGraph::random(3, 3, 0).unwrap();
        assert!(matches!(
            odd.check_no_fpf_colour_involution(),
            Err(GraphError::OddPalette(3))
        ));
        let big = ColouredGraph::random(8, 2, 0).unwrap();
        assert!(matches!(
            big.check_no_fpf_colour_involution(),
            Err(GraphError::ExhaustionGuard { n: 8, guard: 7 })
        ));
    }

    #[test]
    fn witness_examples() {
        let g = ColouredGraph::random(5, 3, 2).unwrap();
        assert_eq!(g.find_witness(&WitnessQuery::empty(3)), Some(0));
        let e = edge(2, 1);
        let q = WitnessQuery::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(e.find_witness(&q), None);
        assert!(WitnessQuery::new(vec![vec![0], vec![0]]).is_err());
        assert!(WitnessQuery::new(vec![vec![7], vec![]]).unwrap().validate(&e).is_err());
    }

    #[test]
    fn query_enumeration_counts() {
        // 1 + n*m + C(n,2)*m^2
        assert_eq!(WitnessQuery::all(4, 3, 2).count(), 1 + 12 + 6 * 9);
        assert_eq!(WitnessQuery::all(1, 2, 3).count(), 1 + 2);
        assert_eq!(WitnessQuery::all(0, 2, 2).count(), 1);
        let first: Vec<_> = WitnessQuery::all(3, 2, 1).take(3).collect();
        assert_eq!(first[0].total_size(), 0);
        assert_eq!(first[1].parts(), &[vec![0], vec![]]);
        assert_eq!(first[2].parts(), &[vec![], vec![0]]);
    }

    #[test]
    fn saturate_fixpoint_is_unchanged() {
        let g = ColouredGraph::random(3, 2, 0).unwrap();
        let once = g.saturate(1, 5, 10).unwrap();
        assert!(once.achieved);
        let again = once.graph.saturate(1, 99, 3).unwrap();
        assert!(again.achieved);
        assert_eq!(again.added, 0);
        assert_eq!(again.graph, once.graph);
    }

    #[test]
    fn saturate_single_vertex_first_sweep() {
        // By hand: the empty query is met by vertex 0; {0} in U_1 forces
        // vertex 1 with colour(0,1)=1; {0} in U_2 is then unmet by vertex 1,
        // forcing vertex 2 with colour(0,2)=2.
        let g = ColouredGraph::random(1, 2, 0).unwrap();
        let one = g.saturate(1, 3, 1).unwrap();
        assert_eq!(one.graph.n(), 3);
        assert_eq!(one.graph.colour(0, 1).get(), 1);
        assert_eq!(one.graph.colour(0, 2).get(), 2);
        for c in 0..2 {
            let mut parts = vec![vec![], vec![]];
            parts[c].push(0);
            assert!(one.graph.find_witness(&WitnessQuery::new(parts).unwrap()).is_some());
        }
    }

    #[test]
    fn saturate_m3_k2() {
        let g = ColouredGraph::random(3, 3, 11).unwrap();
        let sat = g.saturate(2, 12, 8).unwrap();
        assert!(sat.achieved);
        assert!(sat.graph.unsatisfied_queries(2).is_empty());
        assert_eq!(g.saturate(2, 12, 8).unwrap().graph, sat.graph);
    }

    #[test]
    fn embed_examples() {
        // an n-vertex graph only needs witnesses for queries of size n - 1
        let g = ColouredGraph::random(3, 3, 1).unwrap().saturate(2, 2, 8).unwrap();
        assert!(g.achieved);
        let g = g.graph;
        let empty = ColouredGraph::random(0, 3, 0).unwrap();
        assert!(g.embed(&empty).unwrap().is_empty());
        for colour in 1..=3 {
            let map = g.embed(&edge(3, colour)).unwrap();
            assert_eq!(g.colour(map[0], map[1]).get(), colour);
        }
        let tri = ColouredGraph::from_fn(3, 3, |u, v| c(u + v)).unwrap();
        assert_eq!(tri.colour(0, 1).get(), 1);
        assert_eq!(tri.colour(0, 2).get(), 2);
        assert_eq!(tri.colour(1, 2).get(), 3);
        let map = g.embed(&tri).unwrap();
        for (u, v, col) in tri.pairs() {
            assert_eq!(g.colour(map[u], map[v]), col);
        }
        let bare = edge(3, 2);
        assert!(matches!(bare.embed(&tri), Err(GraphError::WitnessMissing { .. })));
    }

    #[test]
    fn extend_iso_examples() {
        let a = ColouredGraph::random(3, 3, 21).unwrap().saturate(2, 1, 8).unwrap().graph;
        let b = ColouredGraph::random(3, 3, 22).unwrap().saturate(2, 2, 8).unwrap().graph;
        let p = extend_iso(&a, &b, &PartialIso::default(), 4).unwrap();
        assert_eq!(p.pairs(), vec![(4, 0)]);
        let start = PartialIso::new(&[(0, 5)]).unwrap();
        let v = (1..a.n()).find(|&v| a.colour(0, v).get() == 2).unwrap();
        let p = extend_iso(&a, &b, &start, v).unwrap();
        assert_eq!(b.colour(5, p.get(v).unwrap()).get(), 2);
        assert!(extend_iso(&a, &b, &start, 0).is_err());
        let full = back_and_forth(&a, &b, &start, 3).unwrap();
        assert_eq!(full.len(), 3);
        assert!(full.is_colour_preserving(&a, &b));
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let g = ColouredGraph::random(6, 4, 3).unwrap();
        let text = g.to_json();
        assert_eq!(ColouredGraph::from_json(&text).unwrap(), g);
        let empty = ColouredGraph::random(0, 2, 0).unwrap();
        assert_eq!(empty.to_json(), r#"{"m":2,"n":0,"colours":[]}"#);
        let missing = r#"{"m":2,"n":3,"colours":[[0,1,1],[0,2,2]]}"#;
        assert!(ColouredGraph::from_json(missing).unwrap_err().to_string().contains("missing pair [1, 2]"));
        let dup = r#"{"m":2,"n":2,"colours":[[0,1,1],[0,1,2]]}"#;
        assert!(ColouredGraph::from_json(dup).is_err());
        let range = r#"{"m":2,"n":2,"colours":[[0,1,3]]}"#;
        assert!(ColouredGraph::from_json(range).is_err());
        let order = r#"{"m":2,"n":2,"colours":[[1,0,1]]}"#;
        assert!(ColouredGraph::from_json(order).is_err());
    }

    #[test]
    fn dot_export() {
        let dot = edge(2, 2).to_dot();
        assert!(dot.contains("0 -- 1 [color_index=2];"));
    }

    mod props {
        use super::*;
        use crate::perm::enumerate_sym;
        use proptest::prelude::*;

        fn perm_strategy(d: usize) -> impl Strategy<Value = Perm> {
            Just((1..=d).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_images(&v).unwrap())
        }

        proptest! {
            #[test]
            fn recolour_is_a_right_action(
                seed in any::<u64>(), n in 0usize..12, p in perm_strategy(4), q in perm_strategy(4)
            ) {
                let g = ColouredGraph::random(n, 4, seed).unwrap();
                let pq = p.compose(&q).unwrap();
                prop_assert_eq!(g.recolour(&pq).unwrap(), g.recolour(&p).unwrap().recolour(&q).unwrap());
            }

            #[test]
            fn json_round_trip(seed in any::<u64>(), n in 0usize..15, m in 2usize..6) {
                let g = ColouredGraph::random(n, m, seed).unwrap();
                prop_assert_eq!(ColouredGraph::from_json(&g.to_json()).unwrap(), g);
            }

            #[test]
            fn no_fpf_colour_involution_is_induced(seed in any::<u64>(), n in 0usize..=6, m in prop::sample::select(vec![2usize, 4])) {
                let g = ColouredGraph::random(n, m, seed).unwrap();
                prop_assert!(g.check_no_fpf_colour_involution().unwrap().passed());
            }

            #[test]
            fn consistency_closed_under_composition(seed in any::<u64>(), n in 2usize..6) {
                let g = ColouredGraph::random(n, 2, seed).unwrap();
                let vs = enumerate_sym(n).unwrap();
                let cs = enumerate_sym(2).unwrap();
                let consistent: Vec<(Perm, Perm)> = vs.iter()
                    .flat_map(|s| cs.iter().map(move |pi| (s.clone(), pi.clone())))
                    .filter(|(s, pi)| g.is_colour_consistent(s, pi).unwrap())
                    .collect();
                for (s1, p1) in consistent.iter().take(12) {
                    for (s2, p2) in consistent.iter().take(12) {
                        let s = s1.compose(s2).unwrap();
                        let pi = p1.compose(p2).unwrap();
                        prop_assert!(g.is_colour_consistent(&s, &pi).unwrap());
                    }
                }
            }
        }
    }
}

//! Combinatorial reduction data of an sncd-model.
//!
//! A [`ReductionGraph`] is the dual graph of the special fiber: one vertex per
//! irreducible component `E_i`, labeled with its multiplicity `N_i` and genus
//! `g(E_i)`, and one edge per intersection point. Parallel edges are kept as
//! separate list entries; loops are rejected because components of a strict
//! normal crossings fiber are smooth.
//!
//! Graphs are validated on construction. Every other operation assumes a valid
//! graph and derives intersection numbers from `C_k . E_i = 0`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A labeled vertex of a validated graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub multiplicity: u64,
    pub genus: u64,
}

impl Vertex {
    pub fn new(id: impl Into<String>, multiplicity: u64, genus: u64) -> Self {
        Vertex {
            id: id.into(),
            multiplicity,
            genus,
        }
    }
}

/// Unvalidated vertex as it appears in input documents. Signed fields so that
/// negative values surface as validation failures rather than parse errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawVertex {
    pub id: String,
    pub multiplicity: i64,
    pub genus: i64,
}

/// Unvalidated graph data: the input to [`validate`] and [`ReductionGraph::from_raw`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub name: Option<String>,
    pub vertices: Vec<RawVertex>,
    pub edges: Vec<(String, String)>,
}

impl RawGraph {
    pub fn vertex(&mut self, id: &str, multiplicity: i64, genus: i64) -> &mut Self {
        self.vertices.push(RawVertex {
            id: id.to_string(),
            multiplicity,
            genus,
        });
        self
    }

    pub fn edge(&mut self, a: &str, b: &str) -> &mut Self {
        self.edges.push((a.to_string(), b.to_string()));
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Invariant {
    NonEmpty,
    UniqueIds,
    PositiveMultiplicity,
    NonNegativeGenus,
    KnownEndpoints,
    NoLoops,
    Connected,
    CoprimeMultiplicities,
    IntegralSelfIntersection,
    PositiveGenus,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::NonEmpty => "graph must have at least one vertex",
            Invariant::UniqueIds => "vertex ids must be unique",
            Invariant::PositiveMultiplicity => "multiplicity must be >= 1",
            Invariant::NonNegativeGenus => "genus must be >= 0",
            Invariant::KnownEndpoints => "edge endpoints must be existing vertices",
            Invariant::NoLoops => "loops forbidden",
            Invariant::Connected => "graph must be connected",
            Invariant::CoprimeMultiplicities => "gcd of multiplicities must be 1",
            Invariant::IntegralSelfIntersection => {
                "sum of neighbour multiplicities must be divisible by the vertex multiplicity"
            }
            Invariant::PositiveGenus => "derived genus must be a positive integer",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: Invariant,
    /// Offending vertex id or edge description, when there is one.
    pub subject: Option<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Some(s) => write!(f, "{} [{}]: {}", self.invariant, s, self.detail),
            None => write!(f, "{}: {}", self.invariant, self.detail),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, invariant: Invariant) -> bool {
        self.violations.iter().any(|v| v.invariant == invariant)
    }

    fn push(&mut self, invariant: Invariant, subject: Option<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            invariant,
            subject,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return f.write_str("pass");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid reduction graph:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge #{0}")]
    UnknownEdge(usize),
    #[error("self-intersection of `{0}` is not an integer")]
    NonIntegralSelfIntersection(String),
    #[error("inconsistent geometry: {0}")]
    InconsistentGeometry(String),
    #[error("graph is not a minimal sncd-model")]
    NotMinimal,
    #[error("vertex `{vertex}` is not contractible: {reason}")]
    NotContractible { vertex: String, reason: String },
    #[error("contracting `{0}` would create a self-intersecting component")]
    WouldCreateLoop(String),
    #[error("no principal component reachable from `{0}`")]
    NoPrincipalFound(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// Runs every structural invariant on raw data and reports all violations.
pub fn validate(raw: &RawGraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    if raw.vertices.is_empty() {
        report.push(Invariant::NonEmpty, None, "no vertices");
        return report;
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (k, v) in raw.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), k).is_some() {
            report.push(Invariant::UniqueIds, Some(v.id.clone()), "duplicate id");
        }
        if v.multiplicity < 1 {
            report.push(
                Invariant::PositiveMultiplicity,
                Some(v.id.clone()),
                format!("multiplicity {}", v.multiplicity),
            );
        }
        if v.genus < 0 {
            report.push(
                Invariant::NonNegativeGenus,
                Some(v.id.clone()),
                format!("genus {}", v.genus),
            );
        }
    }

    let n = raw.vertices.len();
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (a, b) in &raw.edges {
        let subject = Some(format!("{a}--{b}"));
        match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(&i), Some(&j)) => {
                if i == j {
                    report.push(Invariant::NoLoops, subject, "both endpoints are the same vertex");
                } else {
                    edges.push((i, j));
                }
            }
            _ => report.push(Invariant::KnownEndpoints, subject, "endpoint not declared"),
        }
    }
    if !report.is_pass() {
        return report;
    }

    // connectivity
    let mut adjacency = vec![Vec::new(); n];
    for &(i, j) in &edges {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    for (k, reached) in seen.iter().enumerate() {
        if !reached {
            report.push(
                Invariant::Connected,
                Some(raw.vertices[k].id.clone()),
                "not reachable from the first vertex",
            );
        }
    }

    let gcd = raw
        .vertices
        .iter()
        .fold(0u64, |acc, v| acc.gcd(&(v.multiplicity as u64)));
    if gcd != 1 {
        report.push(
            Invariant::CoprimeMultiplicities,
            None,
            format!("gcd of multiplicities is {gcd}"),
        );
    }

    let mut integral = true;
    for (k, v) in raw.vertices.iter().enumerate() {
        let sum: i128 = adjacency[k]
            .iter()
            .map(|&w| raw.vertices[w].multiplicity as i128)
            .sum();
        if sum % v.multiplicity as i128 != 0 {
            integral = false;
            report.push(
                Invariant::IntegralSelfIntersection,
                Some(v.id.clone()),
                format!("{} does not divide {}", v.multiplicity, sum),
            );
        }
    }

    if integral {
        let mut twice: i128 = 0;
        for (k, v) in raw.vertices.iter().enumerate() {
            let sum: i128 = adjacency[k]
                .iter()
                .map(|&w| raw.vertices[w].multiplicity as i128)
                .sum();
            let mult = v.multiplicity as i128;
            let self_int = -sum / mult;
            twice += mult * (2 * v.genus as i128 - 2 - self_int);
        }
        if twice % 2 != 0 {
            report.push(Invariant::PositiveGenus, None, "adjunction sum is odd");
        } else if 1 + twice / 2 < 1 {
            report.push(
                Invariant::PositiveGenus,
                None,
                format!("derived genus {}", 1 + twice / 2),
            );
        }
    }
    report
}

/// Index of an edge in [`ReductionGraph::edges`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// Validated dual graph of the special fiber of an sncd-model.
#[derive(Clone, Debug)]
pub struct ReductionGraph {
    name: Option<String>,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
    incident: Vec<Vec<usize>>,
    self_intersections: Vec<i64>,
    genus: u64,
}

impl PartialEq for ReductionGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl ReductionGraph {
    /// Builds and validates a graph from labeled vertices and id pairs.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(String, String)>) -> Result<Self, GraphError> {
        let raw = RawGraph {
            name: None,
            vertices: vertices
                .into_iter()
                .map(|v| RawVertex {
                    id: v.id,
                    multiplicity: v.multiplicity.try_into().unwrap_or(i64::MAX),
                    genus: v.genus.try_into().unwrap_or(i64::MAX),
                })
                .collect(),
            edges,
        };
        Self::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawGraph) -> Result<Self, GraphError> {
        let report = validate(raw);
        if !report.is_pass() {
            return Err(GraphError::Invalid(report));
        }
        let vertices: Vec<Vertex> = raw
            .vertices
            .iter()
            .map(|v| Vertex::new(v.id.clone(), v.multiplicity as u64, v.genus as u64))
            .collect();
        let index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.id.clone(), k))
            .collect();
        let edges: Vec<(usize, usize)> = raw
            .edges
            .iter()
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        Ok(Self::assemble(raw.name.clone(), vertices, edges, index))
    }

    fn assemble(
        name: Option<String>,
        vertices: Vec<Vertex>,
        edges: Vec<(usize, usize)>,
        index: HashMap<String, usize>,
    ) -> Self {
        let mut incident = vec![Vec::new(); vertices.len()];
        for (e, &(i, j)) in edges.iter().enumerate() {
            incident[i].push(e);
            incident[j].push(e);
        }
        let self_intersections: Vec<i64> = (0..vertices.len())
            .map(|k| {
                let sum: u64 = incident[k]
                    .iter()
                    .map(|&e| vertices[other_end(edges[e], k)].multiplicity)
                    .sum();
                -((sum / vertices[k].multiplicity) as i64)
            })
            .collect();
        let twice: i128 = vertices
            .iter()
            .zip(&self_intersections)
            .map(|(v, &s)| v.multiplicity as i128 * (2 * v.genus as i128 - 2 - s as i128))
            .sum();
        ReductionGraph {
            name,
            vertices,
            edges,
            index,
            incident,
            self_intersections,
            genus: (1 + twice / 2) as u64,
        }
    }

    fn rebuild(&self, vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let raw = RawGraph {
            name: self.name.clone(),
            vertices: vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    multiplicity: v.multiplicity as i64,
                    genus: v.genus as i64,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|&(i, j)| (vertices[i].id.clone(), vertices[j].id.clone()))
                .collect(),
        };
        Self::from_raw(&raw)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            name: self.name.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| RawVertex {
                    id: v.id.clone(),
                    multiplicity: v.multiplicity as i64,
                    genus: v.genus as i64,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| (self.vertices[i].id.clone(), self.vertices[j].id.clone()))
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as vertex positions (indices into [`Self::vertices`]).
    pub fn edge_indices(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &str, &str)> + '_ {
        self.edges.iter().enumerate().map(|(e, &(i, j))| {
            (
                EdgeId(e),
                self.vertices[i].id.as_str(),
                self.vertices[j].id.as_str(),
            )
        })
    }

    pub fn position(&self, id: &str) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex, GraphError> {
        Ok(&self.vertices[self.position(id)?])
    }

    /// Edge indices incident to the vertex at position `k`.
    pub fn incident_edges(&self, k: usize) -> &[usize] {
        &self.incident[k]
    }

    /// Positions of the opposite endpoints of the edges at `k`, with repetition.
    pub fn neighbours(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[k]
            .iter()
            .map(move |&e| other_end(self.edges[e], k))
    }

    pub fn degree(&self, id: &str) -> Result<usize, GraphError> {
        Ok(self.incident[self.position(id)?].len())
    }

    pub fn degree_at(&self, k: usize) -> usize {
        self.incident[k].len()
    }

    /// `E_v^2 = -(sum of opposite multiplicities) / N_v`.
    pub fn self_intersection(&self, id: &str) -> Result<i64, GraphError> {
        Ok(self.self_intersections[self.position(id)?])
    }

    pub fn self_intersection_at(&self, k: usize) -> i64 {
        self.self_intersections[k]
    }

    /// Arithmetic genus of the generic fiber, from adjunction on the fibered surface.
    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// `|edges| - |vertices| + 1`.
    pub fn first_betti(&self) -> u64 {
        (self.edges.len() + 1 - self.vertices.len()) as u64
    }

    pub fn genus_sum(&self) -> u64 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = u64> + '_ {
        self.vertices.iter().map(|v| v.multiplicity)
    }

    fn is_principal_at(&self, k: usize) -> bool {
        self.vertices[k].genus >= 1 || self.incident[k].len() >= 3
    }

    /// Components of positive genus, and rational components meeting the rest
    /// of the fiber in at least three points.
    pub fn principal_components(&self) -> Vec<String> {
        let mut ids: Vec<String> = (0..self.vertices.len())
            .filter(|&k| self.is_principal_at(k))
            .map(|k| self.vertices[k].id.clone())
            .collect();
        ids.sort();
        ids
    }

    /// A (-1)-curve that can be blown down without leaving the sncd class.
    fn is_contractible_at(&self, k: usize) -> bool {
        let v = &self.vertices[k];
        let deg = self.incident[k].len();
        if v.genus != 0 || self.self_intersections[k] != -1 || deg == 0 || deg > 2 {
            return false;
        }
        if deg == 2 {
            let mut nb = self.neighbours(k);
            let (a, b) = (nb.next(), nb.next());
            return a != b;
        }
        true
    }

    /// True iff no vertex can be blown down: no genus-0 component of degree
    /// at most two with self-intersection -1 (and, in degree two, two distinct
    /// neighbours).
    pub fn is_minimal(&self) -> bool {
        !(0..self.vertices.len()).any(|k| self.is_contractible_at(k))
    }

    /// Ids of all vertices eligible for [`Self::blow_down`], sorted.
    pub fn contractible_vertices(&self) -> Vec<String> {
        let mut ids: Vec<String> = (0..self.vertices.len())
            .filter(|&k| self.is_contractible_at(k))
            .map(|k| self.vertices[k].id.clone())
            .collect();
        ids.sort();
        ids
    }

    /// Rational (-1)-curves of degree two whose both intersection points lie on
    /// the same component. They cannot be contracted inside the sncd class.
    pub fn loop_obstructed_vertices(&self) -> Vec<String> {
        let mut ids: Vec<String> = (0..self.vertices.len())
            .filter(|&k| {
                self.vertices[k].genus == 0
                    && self.self_intersections[k] == -1
                    && self.incident[k].len() == 2
                    && !self.is_contractible_at(k)
            })
            .map(|k| self.vertices[k].id.clone())
            .collect();
        ids.sort();
        ids
    }

    /// lcm of the multiplicities of the principal components; 1 if there are none.
    pub fn stabilization_index(&self) -> Result<u64, GraphError> {
        if !self.is_minimal() {
            return Err(GraphError::NotMinimal);
        }
        Ok((0..self.vertices.len())
            .filter(|&k| self.is_principal_at(k))
            .fold(1u64, |acc, k| acc.lcm(&self.vertices[k].multiplicity)))
    }

    fn fresh_id(&self) -> String {
        (1..)
            .map(|n| format!("e{n}"))
            .find(|id| !self.index.contains_key(id))
            .expect("unbounded id supply")
    }

    /// Blow up a point of `E_v` not lying on any other component.
    pub fn blow_up_free_point(&self, id: &str) -> Result<Self, GraphError> {
        let k = self.position(id)?;
        let mut vertices = self.vertices.clone();
        vertices.push(Vertex::new(self.fresh_id(), self.vertices[k].multiplicity, 0));
        let mut edges = self.edges.clone();
        edges.push((k, vertices.len() - 1));
        self.rebuild(vertices, edges)
    }

    /// Blow up the intersection point represented by `edge`.
    pub fn blow_up_edge(&self, edge: EdgeId) -> Result<Self, GraphError> {
        let &(i, j) = self
            .edges
            .get(edge.0)
            .ok_or(GraphError::UnknownEdge(edge.0))?;
        let mut vertices = self.vertices.clone();
        vertices.push(Vertex::new(
            self.fresh_id(),
            self.vertices[i].multiplicity + self.vertices[j].multiplicity,
            0,
        ));
        let new = vertices.len() - 1;
        let mut edges = self.edges.clone();
        edges.remove(edge.0);
        edges.push((i, new));
        edges.push((new, j));
        self.rebuild(vertices, edges)
    }

    /// Castelnuovo contraction of a rational (-1)-curve of degree at most two.
    pub fn blow_down(&self, id: &str) -> Result<Self, GraphError> {
        let k = self.position(id)?;
        let v = &self.vertices[k];
        let deg = self.incident[k].len();
        let refuse = |reason: String| GraphError::NotContractible {
            vertex: id.to_string(),
            reason,
        };
        if v.genus != 0 {
            return Err(refuse(format!("genus {}", v.genus)));
        }
        if self.self_intersections[k] != -1 {
            return Err(refuse(format!(
                "self-intersection {}",
                self.self_intersections[k]
            )));
        }
        if deg == 0 || deg > 2 {
            return Err(refuse(format!("degree {deg}")));
        }
        let nbs: Vec<usize> = self.neighbours(k).collect();
        if deg == 2 && nbs[0] == nbs[1] {
            return Err(GraphError::WouldCreateLoop(id.to_string()));
        }

        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a != k && b != k)
            .collect();
        if deg == 2 {
            edges.push((nbs[0], nbs[1]));
        }
        let shift = |p: usize| if p > k { p - 1 } else { p };
        let edges = edges.into_iter().map(|(a, b)| (shift(a), shift(b))).collect();
        let mut vertices = self.vertices.clone();
        vertices.remove(k);
        self.rebuild(vertices, edges)
    }

    /// Blows down eligible vertices, smallest id first, until none remain.
    pub fn minimize(&self) -> Self {
        self.minimize_with(|_| 0)
    }

    /// Like [`Self::minimize`], but `choose` picks which of the currently
    /// eligible vertices (sorted by id) to contract next.
    pub fn minimize_with(&self, mut choose: impl FnMut(&[String]) -> usize) -> Self {
        let mut current = self.clone();
        loop {
            let eligible = current.contractible_vertices();
            if eligible.is_empty() {
                return current;
            }
            let pick = choose(&eligible).min(eligible.len() - 1);
            current = current
                .blow_down(&eligible[pick])
                .expect("eligible vertex must contract to a valid graph");
        }
    }

    /// Contracts the rational chains (genus 0, degree 2) of a minimal graph and
    /// returns the multiplicities that survive together with the saturation
    /// index of the resulting log regular model.
    pub fn contract_chains(&self) -> Result<ChainContraction, GraphError> {
        if !self.is_minimal() {
            return Err(GraphError::NotMinimal);
        }
        let mut kept: Vec<u64> = (0..self.vertices.len())
            .filter(|&k| self.vertices[k].genus >= 1 || self.incident[k].len() != 2)
            .map(|k| self.vertices[k].multiplicity)
            .collect();
        if kept.is_empty() {
            // A cycle of rational curves has no principal component, so its
            // index is 1. One component survives the contraction; the resolved
            // nodal fiber (multiplicities 1 and 2) shows it must be one of
            // smallest multiplicity.
            let smallest = self.multiplicities().min().expect("non-empty graph");
            kept.push(smallest);
        }
        kept.sort_unstable();
        let saturation_index = kept.iter().fold(1u64, |acc, n| acc.lcm(n));
        Ok(ChainContraction {
            multiplicities: kept,
            saturation_index,
        })
    }

    /// Walks from a rational tail of multiplicity `N_0 > 1` along its chain to
    /// the first principal component and returns it.
    pub fn principal_dominating(&self, id: &str) -> Result<String, GraphError> {
        let start = self.position(id)?;
        if !self.is_minimal() {
            return Err(GraphError::PreconditionFailed("graph is not minimal".into()));
        }
        let v0 = &self.vertices[start];
        if v0.genus != 0 || self.incident[start].len() != 1 || v0.multiplicity <= 1 {
            return Err(GraphError::PreconditionFailed(format!(
                "`{id}` must be a rational tail of multiplicity > 1"
            )));
        }
        let n0 = v0.multiplicity;
        let mut prev = start;
        let mut cur = self.neighbours(start).next().expect("degree one");
        for _ in 0..self.vertices.len() {
            if self.is_principal_at(cur) {
                let nt = self.vertices[cur].multiplicity;
                if nt % n0 != 0 || nt <= n0 {
                    return Err(GraphError::InconsistentGeometry(format!(
                        "principal `{}` has multiplicity {nt}, not a strict multiple of {n0}",
                        self.vertices[cur].id
                    )));
                }
                return Ok(self.vertices[cur].id.clone());
            }
            if self.incident[cur].len() != 2 {
                break;
            }
            let next = self.neighbours(cur).find(|&w| w != prev);
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        Err(GraphError::NoPrincipalFound(id.to_string()))
    }

    /// Labeled multigraph isomorphism, ignoring vertex ids.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.vertices.len() != other.vertices.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        if self.fingerprint() != other.fingerprint() {
            return false;
        }
        if self.vertices.len() > ISOMORPHISM_SEARCH_LIMIT {
            return true;
        }
        let a = self.edge_multiplicity_matrix();
        let b = other.edge_multiplicity_matrix();
        let n = self.vertices.len();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        isomorphism_search(self, other, &a, &b, 0, &mut map, &mut used)
    }

    fn label_at(&self, k: usize) -> (u64, u64, usize) {
        let v = &self.vertices[k];
        (v.multiplicity, v.genus, self.incident[k].len())
    }

    fn fingerprint(&self) -> Vec<((u64, u64, usize), Vec<(u64, u64, usize)>)> {
        let mut fp: Vec<_> = (0..self.vertices.len())
            .map(|k| {
                let mut nb: Vec<_> = self.neighbours(k).map(|w| self.label_at(w)).collect();
                nb.sort_unstable();
                (self.label_at(k), nb)
            })
            .collect();
        fp.sort_unstable();
        fp
    }

    fn edge_multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0; n]; n];
        for &(i, j) in &self.edges {
            m[i][j] += 1;
            m[j][i] += 1;
        }
        m
    }

    /// Vertex labels keyed by id, handy for assertions.
    pub fn labels(&self) -> BTreeMap<String, (u64, u64)> {
        self.vertices
            .iter()
            .map(|v| (v.id.clone(), (v.multiplicity, v.genus)))
            .collect()
    }

    /// Sorted multiset of multiplicities.
    pub fn multiplicity_multiset(&self) -> Vec<u64> {
        let mut m: Vec<u64> = self.multiplicities().collect();
        m.sort_unstable();
        m
    }

    /// Vertex positions selected by `ids`.
    pub fn positions<'a>(
        &self,
        ids: impl IntoIterator<Item = &'a str>,
    ) -> Result<BTreeSet<usize>, GraphError> {
        ids.into_iter().map(|id| self.position(id)).collect()
    }
}

/// Above this size isomorphism falls back to comparing invariant fingerprints.
pub const ISOMORPHISM_SEARCH_LIMIT: usize = 12;

fn isomorphism_search(
    g: &ReductionGraph,
    h: &ReductionGraph,
    a: &[Vec<usize>],
    b: &[Vec<usize>],
    k: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = map.len();
    if k == n {
        return true;
    }
    for cand in 0..n {
        if used[cand] || g.label_at(k) != h.label_at(cand) {
            continue;
        }
        if (0..k).any(|p| a[k][p] != b[cand][map[p]]) {
            continue;
        }
        map[k] = cand;
        used[cand] = true;
        if isomorphism_search(g, h, a, b, k + 1, map, used) {
            return true;
        }
        used[cand] = false;
    }
    map[k] = usize::MAX;
    false
}

fn other_end((i, j): (usize, usize), k: usize) -> usize {
    if i == k {
        j
    } else {
        i
    }
}

/// Result of contracting the rational chains of a minimal sncd-model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainContraction {
    /// Multiplicities of the components that survive, sorted.
    pub multiplicities: Vec<u64>,
    /// lcm of `multiplicities`.
    pub saturation_index: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[(&str, u64, u64)], es: &[(&str, &str)]) -> ReductionGraph {
        ReductionGraph::new(
            vs.iter().map(|&(id, n, g)| Vertex::new(id, n, g)).collect(),
            es.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect(),
        )
        .unwrap()
    }

    fn kodaira_ii() -> ReductionGraph {
        graph(
            &[("c", 6, 0), ("t3", 3, 0), ("t2", 2, 0), ("t1", 1, 0)],
            &[("c", "t3"), ("c", "t2"), ("c", "t1")],
        )
    }

    fn cycle(n: usize) -> ReductionGraph {
        let ids: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
        let vs: Vec<(&str, u64, u64)> = ids.iter().map(|s| (s.as_str(), 1, 0)).collect();
        let es: Vec<(&str, &str)> = (0..n)
            .map(|k| (ids[k].as_str(), ids[(k + 1) % n].as_str()))
            .collect();
        graph(&vs, &es)
    }

    #[test]
    fn validate_examples() {
        let mut raw = RawGraph::default();
        raw.vertex("a", 1, 2);
        assert!(validate(&raw).is_pass());

        let mut raw = RawGraph::default();
        raw.vertex("a", 2, 0).vertex("b", 2, 0).edge("a", "b");
        let report = validate(&raw);
        assert!(report.violates(Invariant::CoprimeMultiplicities));

        let mut raw = RawGraph::default();
        raw.vertex("c", 6, 0)
            .vertex("a", 3, 0)
            .vertex("b", 2, 0)
            .vertex("d", 1, 0)
            .edge("c", "a")
            .edge("c", "b")
            .edge("c", "d");
        assert!(validate(&raw).is_pass());
    }

    #[test]
    fn validate_rejects_loops_and_unknown_endpoints() {
        let mut raw = RawGraph::default();
        raw.vertex("a", 1, 1).edge("a", "a");
        assert!(validate(&raw).violates(Invariant::NoLoops));

        let mut raw = RawGraph::default();
        raw.vertex("a", 1, 1).edge("a", "zz");
        assert!(validate(&raw).violates(Invariant::KnownEndpoints));
    }

    #[test]
    fn validate_reports_disconnected_and_nonintegral() {
        let mut raw = RawGraph::default();
        raw.vertex("a", 1, 1).vertex("b", 1, 1);
        let r = validate(&raw);
        assert!(r.violates(Invariant::Connected));
        assert_eq!(r.violations[0].subject.as_deref(), Some("b"));

        let mut raw = RawGraph::default();
        raw.vertex("a", 2, 1).vertex("b", 1, 0).edge("a", "b");
        let r = validate(&raw);
        assert!(r.violates(Invariant::IntegralSelfIntersection));
    }

    #[test]
    fn validate_rejects_bad_labels_and_genus_zero() {
        let mut raw = RawGraph::default();
        raw.vertex("a", 0, -1);
        let r = validate(&raw);
        assert!(r.violates(Invariant::PositiveMultiplicity));
        assert!(r.violates(Invariant::NonNegativeGenus));

        // a single rational component has genus 0
        let mut raw = RawGraph::default();
        raw.vertex("a", 1, 0);
        assert!(validate(&raw).violates(Invariant::PositiveGenus));
    }

    #[test]
    fn self_intersection_examples() {
        let g = kodaira_ii();
        assert_eq!(g.self_intersection("c").unwrap(), -1);
        assert_eq!(g.self_intersection("t1").unwrap(), -6);
        let single = graph(&[("a", 1, 3)], &[]);
        assert_eq!(single.self_intersection("a").unwrap(), 0);
        let c = cycle(4);
        for v in c.vertices() {
            assert_eq!(c.self_intersection(&v.id).unwrap(), -2);
        }
        assert!(matches!(
            g.self_intersection("nope"),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn genus_examples() {
        assert_eq!(kodaira_ii().genus(), 1);
        assert_eq!(graph(&[("a", 1, 5)], &[]).genus(), 5);
        let g2 = graph(
            &[("c", 2, 1), ("a", 1, 0), ("b", 1, 0)],
            &[("c", "a"), ("c", "b")],
        );
        assert_eq!(g2.genus(), 2);
    }

    #[test]
    fn betti_and_principal() {
        assert_eq!(cycle(3).first_betti(), 1);
        assert_eq!(kodaira_ii().first_betti(), 0);
        assert_eq!(kodaira_ii().principal_components(), vec!["c".to_string()]);
        assert!(cycle(5).principal_components().is_empty());
        assert_eq!(graph(&[("a", 1, 2)], &[]).principal_components(), vec!["a"]);
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(kodaira_ii().stabilization_index().unwrap(), 6);
        assert_eq!(cycle(4).stabilization_index().unwrap(), 1);
        let i0star = graph(
            &[("c", 2, 0), ("a", 1, 0), ("b", 1, 0), ("d", 1, 0), ("e", 1, 0)],
            &[("c", "a"), ("c", "b"), ("c", "d"), ("c", "e")],
        );
        assert_eq!(i0star.stabilization_index().unwrap(), 2);
        assert!(i0star.is_minimal());
        let blown = kodaira_ii().blow_up_free_point("t1").unwrap();
        assert_eq!(blown.stabilization_index(), Err(GraphError::NotMinimal));
    }

    #[test]
    fn blow_ups_and_downs() {
        let g = graph(&[("a", 1, 1)], &[]);
        let b = g.blow_up_free_point("a").unwrap();
        assert_eq!(b.vertex_count(), 2);
        assert_eq!(b.edge_count(), 1);
        assert!(!b.is_minimal());
        assert_eq!(b.genus(), 1);

        let c = kodaira_ii().blow_up_free_point("c").unwrap();
        assert_eq!(c.vertex_count(), 5);
        assert_eq!(c.vertex("e1").unwrap().multiplicity, 6);

        let two = cycle(2);
        let e = two.blow_up_edge(EdgeId(0)).unwrap();
        assert_eq!(e.vertex("e1").unwrap().multiplicity, 2);
        assert_eq!(e.first_betti(), 1);

        let k = kodaira_ii();
        let (eid, _, _) = k.edges().find(|(_, _, b)| *b == "t3").unwrap();
        let kb = k.blow_up_edge(eid).unwrap();
        assert_eq!(kb.vertex("e1").unwrap().multiplicity, 9);
        assert_eq!(kb.genus(), 1);

        assert!(k.blow_up_free_point("x").is_err());
        assert_eq!(k.blow_up_edge(EdgeId(7)), Err(GraphError::UnknownEdge(7)));
    }

    #[test]
    fn blow_down_inverts_blow_up() {
        let k = kodaira_ii();
        let b = k.blow_up_free_point("t2").unwrap();
        assert_eq!(b.blow_down("e1").unwrap(), k);
        let e = k.blow_up_edge(EdgeId(1)).unwrap();
        assert!(e.blow_down("e1").unwrap().is_isomorphic(&k));
        let c = cycle(3);
        assert!(matches!(
            c.blow_down("v0"),
            Err(GraphError::NotContractible { .. })
        ));
    }

    #[test]
    fn blow_down_refuses_loop() {
        // the resolved nodal cubic: a double point blown up once
        let g = graph(&[("e", 1, 0), ("f", 2, 0)], &[("e", "f"), ("e", "f")]);
        assert_eq!(g.self_intersection("f").unwrap(), -1);
        assert_eq!(g.blow_down("f"), Err(GraphError::WouldCreateLoop("f".into())));
        assert!(g.is_minimal());
        assert_eq!(g.loop_obstructed_vertices(), vec!["f".to_string()]);
        assert_eq!(g.minimize(), g);
    }

    #[test]
    fn minimize_examples() {
        let k = kodaira_ii();
        assert_eq!(k.minimize(), k);
        let e = k.blow_up_edge(EdgeId(0)).unwrap();
        assert!(e.minimize().is_isomorphic(&k));
        let twice = k.blow_up_free_point("t3").unwrap();
        let (eid, _, _) = twice.edges().find(|(_, _, b)| *b == "e1").unwrap();
        let twice = twice.blow_up_edge(eid).unwrap();
        assert!(!twice.is_minimal());
        assert!(twice.minimize().is_isomorphic(&k));
        assert!(twice.minimize_with(|c| c.len() - 1).is_isomorphic(&k));
    }

    #[test]
    fn contract_chains_examples() {
        let k = kodaira_ii();
        let c = k.contract_chains().unwrap();
        assert_eq!(c.multiplicities, vec![1, 2, 3, 6]);
        assert_eq!(c.saturation_index, 6);
        let c = cycle(5).contract_chains().unwrap();
        assert_eq!(c.saturation_index, 1);
        let i1 = crate::catalog::kodaira_graph(crate::catalog::KodairaType::I1Resolved).unwrap();
        assert_eq!(i1.contract_chains().unwrap().saturation_index, 1);
        let not_min = k.blow_up_free_point("c").unwrap();
        assert_eq!(not_min.contract_chains(), Err(GraphError::NotMinimal));
    }

    #[test]
    fn principal_dominating_examples() {
        let k = kodaira_ii();
        assert_eq!(k.principal_dominating("t3").unwrap(), "c");
        assert!(matches!(
            k.principal_dominating("t1"),
            Err(GraphError::PreconditionFailed(_))
        ));
        assert!(matches!(
            k.principal_dominating("c"),
            Err(GraphError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn isomorphism_ignores_ids() {
        let a = kodaira_ii();
        let b = graph(
            &[("x", 1, 0), ("y", 6, 0), ("z", 2, 0), ("w", 3, 0)],
            &[("y", "x"), ("z", "y"), ("w", "y")],
        );
        assert!(a.is_isomorphic(&b));
        let c = graph(
            &[("c", 6, 0), ("t3", 3, 0), ("t2", 2, 0), ("t1", 1, 1)],
            &[("c", "t3"), ("c", "t2"), ("c", "t1")],
        );
        assert!(!a.is_isomorphic(&c));
    }
}

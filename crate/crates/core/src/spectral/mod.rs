//! Graphs from group actions and their spectral measurements.
//!
//! The canonical operator everywhere is the Markov average: apply every
//! generator map with weight 1/m and sum. Generator lists are closed under
//! inverses before a graph is built, so the operator is self-adjoint;
//! duplicate generators are kept as multi-edges so averages over sampled
//! multisets mean what they say.

pub mod baseline;
pub mod eigen;
pub mod expansion;
pub mod kazhdan;

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsgs::Bsgs;
use crate::construction::GeneratingFamily;
use crate::error::{LabError, Result};
use crate::perm::Permutation;
use crate::SCHEMA_VERSION;

/// Vertex-count ceiling for the exact dense eigensolver.
pub const DENSE_VERTEX_CAP: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Vertices are the elements of the generated group.
    Cayley,
    /// Vertices are the points the family permutes.
    SchreierPoints,
    /// Vertices are ordered r-tuples of distinct points.
    SchreierTuples,
}

/// A graph presented matrix-free: one vertex permutation per generator.
/// The generator list is inverse-closed (smallest symmetric multiset
/// containing the input, i.e. multiplicity(g) = max(in(g), in(g⁻¹))).
#[derive(Clone, Debug)]
pub struct ActionGraph {
    kind: GraphKind,
    n: usize,
    maps: Vec<Vec<u32>>,
    labels: Vec<String>,
}

impl ActionGraph {
    /// Builds a graph from explicit vertex permutations, closing the
    /// multiset under inverses.
    pub fn from_maps(kind: GraphKind, gens: &[Permutation], labels: &[String]) -> Result<ActionGraph> {
        if gens.is_empty() {
            return Err(LabError::Invalid("a graph needs at least one generator".into()));
        }
        if gens.len() != labels.len() {
            return Err(LabError::Invalid("one label per generator required".into()));
        }
        let n = gens[0].degree();
        for g in gens {
            if g.degree() != n {
                return Err(LabError::Invalid("generator degrees disagree".into()));
            }
        }
        let (closed, labels) = inverse_closure(gens, labels);
        Ok(ActionGraph {
            kind,
            n,
            maps: closed.iter().map(|g| g.images().to_vec()).collect(),
            labels,
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generator maps after inverse closure (= regularity degree).
    pub fn m(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Applies the Markov operator:
    /// (Δv)(u) = (1/m) Σ_g v(g(u)).
    /// Chunked over vertices; the per-vertex generator order is fixed, so
    /// results are bit-identical regardless of thread count.
    pub fn apply_markov(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        let inv_m = 1.0 / self.maps.len() as f64;
        let chunk = 1024;
        out.par_chunks_mut(chunk).enumerate().for_each(|(ci, block)| {
            let base = ci * chunk;
            for (i, slot) in block.iter_mut().enumerate() {
                let u = base + i;
                let mut acc = 0.0;
                for map in &self.maps {
                    acc += v[map[u] as usize];
                }
                *slot = acc * inv_m;
            }
        });
    }

    /// Markov image of a vector, allocating the output.
    pub fn markov(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.apply_markov(v, &mut out);
        out
    }

    /// Number of vertices reachable from vertex 0.
    pub fn component_of_zero(&self) -> usize {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for map in &self.maps {
                let w = map[u] as usize;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_of_zero() == self.n
    }

    /// DOT rendering of the underlying undirected multigraph (loops kept),
    /// intended for small graphs.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for (gi, map) in self.maps.iter().enumerate() {
            for u in 0..self.n {
                let v = map[u] as usize;
                // Emit each undirected edge once: from its smaller endpoint,
                // under the first map that sends that endpoint across.
                if u <= v && self.first_realizer(u, v) == gi {
                    let _ = writeln!(out, "  {u} -- {v} [label=\"{}\"];", self.labels[gi]);
                }
            }
        }
        out.push_str("}\n");
        out
    }

    fn first_realizer(&self, u: usize, v: usize) -> usize {
        for (gi, map) in self.maps.iter().enumerate() {
            if map[u] as usize == v {
                return gi;
            }
        }
        unreachable!("edge not produced by any generator")
    }

    /// Matrix Market coordinate form of the Markov operator (symmetric,
    /// lower triangle, 1-based indices).
    pub fn to_matrix_market(&self) -> String {
        let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
        let w = 1.0 / self.m() as f64;
        for map in &self.maps {
            for u in 0..self.n {
                let v = map[u] as usize;
                let key = if u >= v { (u, v) } else { (v, u) };
                *weights.entry(key).or_insert(0.0) += if u == v { w } else { w / 2.0 };
            }
        }
        let mut entries: Vec<((usize, usize), f64)> = weights.into_iter().collect();
        entries.sort_by_key(|&(k, _)| k);
        let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
        let _ = writeln!(out, "{} {} {}", self.n, self.n, entries.len());
        for ((u, v), wt) in entries {
            let _ = writeln!(out, "{} {} {wt:.17e}", u + 1, v + 1);
        }
        out
    }
}

/// The smallest inverse-closed multiset containing `gens`:
/// multiplicity(g) = max(count(g), count(g⁻¹)). Order: first occurrence in
/// `gens`, then newly added inverses in generator order.
pub(crate) fn inverse_closure(
    gens: &[Permutation],
    labels: &[String],
) -> (Vec<Permutation>, Vec<String>) {
    let mut count: HashMap<&Permutation, usize> = HashMap::new();
    for g in gens {
        *count.entry(g).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut out_labels = Vec::new();
    let mut emitted: HashMap<Permutation, usize> = HashMap::new();
    for (g, l) in gens.iter().zip(labels) {
        let want = (*count.get(g).unwrap()).max(*count.get(&g.inverse()).unwrap_or(&0));
        let have = emitted.entry(g.clone()).or_insert(0);
        if *have < want {
            *have += 1;
            out.push(g.clone());
            out_labels.push(l.clone());
        }
    }
    for (g, l) in gens.iter().zip(labels) {
        let inv = g.inverse();
        let want = (*count.get(g).unwrap()).max(*count.get(&inv).unwrap_or(&0));
        let have = emitted.entry(inv.clone()).or_insert(0);
        while *have < want {
            *have += 1;
            out.push(inv.clone());
            out_labels.push(format!("{l}^-1"));
        }
    }
    (out, out_labels)
}

/// Builds the action graph of a family.
///
/// * `Cayley`: vertices are the elements of the group the family generates,
///   enumerated through a chain (so the order must fit in `max_vertices`);
///   edges are left multiplications.
/// * `SchreierPoints`: vertices are the points 0..degree.
/// * `SchreierTuples`: vertices are ordered `r`-tuples of distinct points.
pub fn build_action_graph(
    family: &GeneratingFamily,
    kind: GraphKind,
    r: Option<usize>,
    max_vertices: usize,
) -> Result<ActionGraph> {
    let labels: Vec<String> = family.labels().iter().map(|l| l.source.clone()).collect();
    match kind {
        GraphKind::SchreierPoints => {
            if family.degree() > max_vertices {
                return Err(LabError::Budget(format!(
                    "{} vertices exceed the budget of {max_vertices}",
                    family.degree()
                )));
            }
            ActionGraph::from_maps(kind, family.elements(), &labels)
        }
        GraphKind::Cayley => {
            let chain = Bsgs::build(family.elements(), 0)?;
            let elements = chain.elements(max_vertices)?;
            cayley_graph(&elements, family.elements(), &labels)
        }
        GraphKind::SchreierTuples => {
            let r = r.ok_or_else(|| {
                LabError::Invalid("the tuple graph needs the tuple length r".into())
            })?;
            tuple_graph(family, r, max_vertices)
        }
    }
}

/// Cayley graph on an explicit element list (vertex i = elements[i]) with
/// edges g ↦ s∘g. A non-generating edge set yields a disconnected graph,
/// which is reported by `is_connected`, not an error.
pub fn cayley_graph(
    elements: &[Permutation],
    edge_gens: &[Permutation],
    labels: &[String],
) -> Result<ActionGraph> {
    let index: HashMap<&Permutation, usize> =
        elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
    if index.len() != elements.len() {
        return Err(LabError::Invalid("duplicate group elements in the vertex list".into()));
    }
    let maps: Result<Vec<Permutation>> = edge_gens
        .iter()
        .map(|s| {
            let images: Result<Vec<u32>> = elements
                .iter()
                .map(|g| {
                    let sg = s.compose(g)?;
                    index
                        .get(&sg)
                        .map(|&i| i as u32)
                        .ok_or_else(|| {
                            LabError::Invalid(
                                "edge generator leaves the vertex element list".into(),
                            )
                        })
                })
                .collect();
            Permutation::from_images(images?)
        })
        .collect();
    ActionGraph::from_maps(GraphKind::Cayley, &maps?, labels)
}

/// Graph on ordered r-tuples of distinct points, acted on componentwise.
fn tuple_graph(family: &GeneratingFamily, r: usize, max_vertices: usize) -> Result<ActionGraph> {
    let n = family.degree();
    if r < 1 || r > n {
        return Err(LabError::Invalid(format!("tuple length {r} out of range 1..={n}")));
    }
    let mut count: usize = 1;
    for i in 0..r {
        count = count
            .checked_mul(n - i)
            .filter(|&c| c <= max_vertices)
            .ok_or_else(|| {
                LabError::Budget(format!(
                    "tuple vertex count exceeds the budget of {max_vertices}"
                ))
            })?;
    }
    let mut tuples: Vec<Vec<usize>> = Vec::with_capacity(count);
    let mut cur = Vec::with_capacity(r);
    let mut used = vec![false; n];
    enumerate_tuples(n, r, &mut cur, &mut used, &mut tuples);
    debug_assert_eq!(tuples.len(), count);
    let index: HashMap<&[usize], usize> =
        tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();

    let labels: Vec<String> = family.labels().iter().map(|l| l.source.clone()).collect();
    let maps: Result<Vec<Permutation>> = family
        .elements()
        .iter()
        .map(|g| {
            let images: Result<Vec<u32>> = tuples
                .iter()
                .map(|t| {
                    let image = g.act_on_tuple(t)?;
                    Ok(index[image.as_slice()] as u32)
                })
                .collect();
            Permutation::from_images(images?)
        })
        .collect();
    ActionGraph::from_maps(GraphKind::SchreierTuples, &maps?, &labels)
}

fn enumerate_tuples(
    n: usize,
    r: usize,
    cur: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == r {
        out.push(cur.clone());
        return;
    }
    for x in 0..n {
        if !used[x] {
            used[x] = true;
            cur.push(x);
            enumerate_tuples(n, r, cur, used, out);
            cur.pop();
            used[x] = false;
        }
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Dense,
    PowerDeflation,
    Lanczos,
}

/// Spectral measurement of the Markov operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralReport {
    pub schema_version: u32,
    pub method: EigenMethod,
    pub vertex_count: usize,
    pub generator_count: usize,
    /// Largest eigenvalues by signed value, descending (λ₁ first).
    pub top_eigenvalues: Vec<f64>,
    /// Second-largest eigenvalue by signed value.
    pub lambda2: f64,
    /// 1 − λ₂.
    pub gap: f64,
    /// max |λ_i| over i ≥ 2 (drives walk mixing bounds).
    pub max_abs_tail: f64,
    pub residual: f64,
    pub iterations: usize,
    pub tol: f64,
    pub seed: u64,
}

impl SpectralReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<SpectralReport> {
        let report: SpectralReport = serde_json::from_str(text)?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(LabError::Invalid(format!(
                "spectral report schema version {} (this build reads {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }
}

/// Expansion measurement: the exact constant with a witness when the graph
/// was small enough to brute-force, and/or a spectral sandwich interval.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub schema_version: u32,
    pub vertex_count: usize,
    pub generator_count: usize,
    /// Exact expansion constant as an integer ratio |∂A|/|A|.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact_value: Option<f64>,
    /// Witness subset attaining the exact constant.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper: Option<f64>,
}

impl ExpansionReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<ExpansionReport> {
        let report: ExpansionReport = serde_json::from_str(text)?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(LabError::Invalid(format!(
                "expansion report schema version {} (this build reads {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }
}

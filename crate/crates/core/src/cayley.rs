//! Coloured Cayley-ball graphs, full subgraphs, the right action `S·Γ_1`,
//! and the finite checks of the extension property and formula (F).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::config::{self, Configuration, Pattern};
use crate::error::{Error, Result};
use crate::words::{ElementId, ElementStore};

/// A finite coloured digraph with at most one edge per colour and direction
/// at every vertex. Vertices are `0..vertex_count()`.
pub trait Host: Sync {
    fn vertex_count(&self) -> usize;
    fn label_count(&self) -> usize;
    fn succ(&self, v: usize, label: usize) -> Option<usize>;
    fn pred(&self, v: usize, label: usize) -> Option<usize>;
    /// Word length of the vertex (0 for abstract graphs).
    fn radius_of(&self, v: usize) -> usize;

    /// Undirected neighbours, sorted and deduplicated.
    fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.label_count())
            .flat_map(|l| [self.succ(v, l), self.pred(v, l)])
            .flatten()
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The ball `Γ_n` as a full subgraph of the Cayley graph. Vertex `i` is
/// `ElementId(i)`.
#[derive(Clone, Copy, Debug)]
pub struct CayleyBall<'a> {
    store: &'a ElementStore,
    radius: usize,
    size: usize,
}

impl<'a> CayleyBall<'a> {
    pub fn new(store: &'a ElementStore, radius: usize) -> Result<Self> {
        let size = store.ball_size(radius)?;
        Ok(CayleyBall { store, radius, size })
    }

    pub fn store(&self) -> &'a ElementStore {
        self.store
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn contains(&self, u: ElementId) -> bool {
        u.index() < self.size
    }

    pub fn vertices(&self) -> impl Iterator<Item = ElementId> {
        (0..self.size as u32).map(ElementId)
    }

    /// Edges `(u, α, uα)` ordered by source then label.
    pub fn edges(&self) -> Vec<(ElementId, usize, ElementId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for l in 0..self.store.label_count() {
                if let Some(v) = self.store.succ(u, l).filter(|v| self.contains(*v)) {
                    out.push((u, l, v));
                }
            }
        }
        out
    }

    /// Edge list: vertex count, then `source label target` per line.
    pub fn edge_list(&self) -> String {
        let names = &self.store.presentation().generators;
        let mut s = format!("{}\n", self.size);
        for (u, l, v) in self.edges() {
            s.push_str(&format!("{} {} {}\n", u.0, names[l], v.0));
        }
        s
    }

    /// The whole ball as a subgraph.
    pub fn as_subgraph(&self) -> Subgraph<'a> {
        Subgraph { host: *self, vertices: self.vertices().collect() }
    }

    pub fn subgraph(&self, vertices: impl IntoIterator<Item = ElementId>) -> Result<Subgraph<'a>> {
        let vertices: BTreeSet<ElementId> = vertices.into_iter().collect();
        if let Some(v) = vertices.iter().find(|v| !self.contains(**v)) {
            return Err(Error::HorizonExceeded { requested: self.store.length(*v), horizon: self.radius });
        }
        Ok(Subgraph { host: *self, vertices: vertices.into_iter().collect() })
    }
}

impl Host for CayleyBall<'_> {
    fn vertex_count(&self) -> usize {
        self.size
    }

    fn label_count(&self) -> usize {
        self.store.label_count()
    }

    fn succ(&self, v: usize, label: usize) -> Option<usize> {
        self.store.succ(ElementId(v as u32), label).map(|w| w.index()).filter(|&w| w < self.size)
    }

    fn pred(&self, v: usize, label: usize) -> Option<usize> {
        self.store.pred(ElementId(v as u32), label).map(|w| w.index()).filter(|&w| w < self.size)
    }

    fn radius_of(&self, v: usize) -> usize {
        self.store.length(ElementId(v as u32))
    }
}

/// Builds `Γ_n` with its induced edges.
pub fn build_ball(store: &ElementStore, n: usize) -> Result<CayleyBall<'_>> {
    CayleyBall::new(store, n)
}

/// Explicit coloured digraph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    labels: usize,
    out: Vec<Option<u32>>,
    inc: Vec<Option<u32>>,
    lengths: Vec<usize>,
}

impl LabeledGraph {
    /// Fails with `Domain` when two edges share a colour and an endpoint
    /// direction.
    pub fn from_edges(n: usize, labels: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let mut g = LabeledGraph { n, labels, out: vec![None; n * labels], inc: vec![None; n * labels], lengths: vec![0; n] };
        for &(s, l, t) in edges {
            if s >= n || t >= n || l >= labels {
                return Err(Error::Domain(format!("edge ({s},{l},{t}) out of range")));
            }
            let o = &mut g.out[s * labels + l];
            let i = &mut g.inc[t * labels + l];
            if o.is_some() || i.is_some() {
                return Err(Error::Domain(format!("two edges of colour {l} at one endpoint")));
            }
            *o = Some(t as u32);
            *i = Some(s as u32);
        }
        Ok(g)
    }

    pub fn with_lengths(mut self, lengths: Vec<usize>) -> Self {
        assert_eq!(lengths.len(), self.n);
        self.lengths = lengths;
        self
    }

    /// Edges ordered by source then label.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for s in 0..self.n {
            for l in 0..self.labels {
                if let Some(t) = self.out[s * self.labels + l] {
                    e.push((s, l, t as usize));
                }
            }
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().filter(|o| o.is_some()).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Full subgraph on `vertices` (in the given order).
    pub fn induced(&self, vertices: &[usize]) -> LabeledGraph {
        let pos: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for l in 0..self.labels {
                if let Some(j) = self.succ(v, l).and_then(|w| pos.get(&w)) {
                    edges.push((i, l, *j));
                }
            }
        }
        LabeledGraph::from_edges(vertices.len(), self.labels, &edges)
            .expect("induced subgraph keeps degree bounds")
            .with_lengths(vertices.iter().map(|&v| self.lengths[v]).collect())
    }

    /// Vertex sets of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

impl Host for LabeledGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn label_count(&self) -> usize {
        self.labels
    }

    fn succ(&self, v: usize, label: usize) -> Option<usize> {
        self.out[v * self.labels + label].map(|w| w as usize)
    }

    fn pred(&self, v: usize, label: usize) -> Option<usize> {
        self.inc[v * self.labels + label].map(|w| w as usize)
    }

    fn radius_of(&self, v: usize) -> usize {
        self.lengths[v]
    }
}

/// A vertex set of a ball, always read as a full subgraph.
#[derive(Clone, Debug)]
pub struct Subgraph<'a> {
    host: CayleyBall<'a>,
    vertices: Vec<ElementId>,
}

impl<'a> Subgraph<'a> {
    pub fn host(&self) -> &CayleyBall<'a> {
        &self.host
    }

    /// Sorted vertex set.
    pub fn vertices(&self) -> &[ElementId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Maximal word length among the vertices.
    pub fn radius(&self) -> usize {
        self.vertices.iter().map(|&v| self.host.store.length(v)).max().unwrap_or(0)
    }

    /// Local copy with vertex `i` = `vertices()[i]`.
    pub fn to_graph(&self) -> LabeledGraph {
        let pos: BTreeMap<ElementId, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let store = self.host.store;
        let mut edges = Vec::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            for l in 0..store.label_count() {
                if let Some(j) = store.succ(v, l).and_then(|w| pos.get(&w)) {
                    edges.push((i, l, *j));
                }
            }
        }
        LabeledGraph::from_edges(self.vertices.len(), store.label_count(), &edges)
            .expect("Cayley graph is cancellative inside the horizon")
            .with_lengths(self.vertices.iter().map(|&v| store.length(v)).collect())
    }

    pub fn is_connected(&self) -> bool {
        self.to_graph().is_connected()
    }

    /// Isomorphism class; `Disconnected`/`EmptySubgraph` otherwise.
    pub fn configuration(&self) -> Result<Configuration> {
        Ok(config::canonicalize(&self.to_graph())?.config)
    }

    /// `S·Γ_1 = S ∪ S·G` as a full subgraph of `host`.
    pub fn right_extend(&self, host: &CayleyBall<'a>) -> Result<Subgraph<'a>> {
        let store = self.host.store;
        let mut out: BTreeSet<ElementId> = self.vertices.iter().copied().collect();
        for &v in &self.vertices {
            for a in 0..store.letter_count() {
                let w = store.mul(v, a).filter(|w| host.contains(*w)).ok_or(Error::HorizonExceeded {
                    requested: store.length(v) + 1,
                    horizon: host.radius,
                })?;
                out.insert(w);
            }
        }
        Ok(Subgraph { host: *host, vertices: out.into_iter().collect() })
    }
}

/// Outcome of [`check_extension_property`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionReport {
    pub subgraphs: usize,
    pub classes: usize,
    pub isomorphisms_checked: usize,
    pub failures: Vec<String>,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every pair of isomorphic connected full subgraphs of `Γ_n` with at
/// most `k` vertices and every isomorphism `φ` between them, checks that
/// `φ̂(αβ) = φ(α)β` is well defined (I') and is an isomorphism
/// `𝕊_1Γ_1 ≅ 𝕊_2Γ_1` (c).
pub fn check_extension_property(store: &ElementStore, n: usize, k: usize) -> Result<ExtensionReport> {
    if n + 1 > store.horizon() {
        return Err(Error::HorizonExceeded { requested: n + 1, horizon: store.horizon() });
    }
    let ball = CayleyBall::new(store, n)?;
    let outer = CayleyBall::new(store, n + 1)?;
    let mut classes: BTreeMap<Configuration, Vec<Vec<ElementId>>> = BTreeMap::new();
    for (c, sets) in config::connected_subsets_by_class(&ball, k) {
        classes.insert(c, sets);
    }
    let subgraphs = classes.values().map(Vec::len).sum();
    let work: Vec<(&Configuration, &Vec<ElementId>, &Vec<ElementId>)> = classes
        .iter()
        .flat_map(|(c, sets)| sets.iter().flat_map(move |a| sets.iter().map(move |b| (c, a, b))))
        .collect();
    let results: Vec<(usize, Vec<String>)> = work
        .par_iter()
        .map(|(c, s1, s2)| {
            let g1 = ball.subgraph(s1.iter().copied()).expect("inside ball");
            let g2 = ball.subgraph(s2.iter().copied()).expect("inside ball");
            let isos = config::isomorphisms(&g1.to_graph(), &g2.to_graph());
            let mut fails = Vec::new();
            for iso in &isos {
                if let Err(msg) = extend_isomorphism(store, &outer, s1, s2, iso) {
                    fails.push(format!("{c}: {} -> {}: {msg}", render_set(store, s1), render_set(store, s2)));
                }
            }
            (isos.len(), fails)
        })
        .collect();
    let mut report = ExtensionReport { subgraphs, classes: classes.len(), ..Default::default() };
    for (count, fails) in results {
        report.isomorphisms_checked += count;
        report.failures.extend(fails);
    }
    Ok(report)
}

fn render_set(store: &ElementStore, s: &[ElementId]) -> String {
    let parts: Vec<String> = s.iter().map(|&v| store.render(v)).collect();
    format!("{{{}}}", parts.join(","))
}

fn extend_isomorphism(
    store: &ElementStore,
    outer: &CayleyBall<'_>,
    s1: &[ElementId],
    s2: &[ElementId],
    iso: &[usize],
) -> std::result::Result<(), String> {
    let mut map: BTreeMap<ElementId, ElementId> = BTreeMap::new();
    for (i, &a) in s1.iter().enumerate() {
        let b = s2[iso[i]];
        let mut pairs = vec![(a, b)];
        for g in 0..store.letter_count() {
            let x = store.mul(a, g).ok_or("product leaves the horizon")?;
            let y = store.mul(b, g).ok_or("product leaves the horizon")?;
            pairs.push((x, y));
        }
        for (x, y) in pairs {
            if let Some(prev) = map.insert(x, y) {
                if prev != y {
                    return Err(format!("not well defined at {}", store.render(x)));
                }
            }
        }
    }
    let image: BTreeSet<ElementId> = map.values().copied().collect();
    if image.len() != map.len() {
        return Err("extension is not injective".into());
    }
    let e1 = outer.subgraph(map.keys().copied()).map_err(|e| e.to_string())?;
    let e2 = outer.subgraph(image.iter().copied()).map_err(|e| e.to_string())?;
    let g1 = e1.to_graph();
    let g2 = e2.to_graph();
    let pos2: BTreeMap<ElementId, usize> = e2.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let perm: Vec<usize> = e1.vertices().iter().map(|v| pos2[&map[v]]).collect();
    if g1.edge_count() != g2.edge_count() {
        return Err("edge counts differ after extension".into());
    }
    for (s, l, t) in g1.edges() {
        if g2.succ(perm[s], l) != Some(perm[t]) {
            return Err(format!("edge {} -{l}-> {} not preserved", store.render(e1.vertices()[s]), store.render(e1.vertices()[t])));
        }
    }
    Ok(())
}

/// Outcome of [`check_formula_f`] for one configuration and radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaReport {
    pub config: Configuration,
    pub extended: Configuration,
    pub n: usize,
    /// `A(SΓ_1, Γ_n)`.
    pub lhs: usize,
    /// `A(S, Γ_{n-1})`.
    pub rhs: usize,
    /// `#S · #(Γ̇_n ∩ D)`.
    pub bound: usize,
}

impl FormulaReport {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs && self.lhs - self.rhs <= self.bound
    }

    pub fn equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Checks `0 ≤ A(SΓ_1, Γ_n) − A(S, Γ_{n−1}) ≤ #S·#(Γ̇_n ∩ D)`, using the
/// first representative of `S` found in the store.
pub fn check_formula_f(store: &ElementStore, s: &Configuration, n: usize) -> Result<FormulaReport> {
    if n == 0 || n > store.horizon() {
        return Err(Error::HorizonExceeded { requested: n, horizon: store.horizon() });
    }
    let top = CayleyBall::new(store, store.horizon())?;
    let pattern = Pattern::new(s);
    let rep = config::first_representative(&top, &pattern).ok_or(Error::NoRepresentativeInHorizon)?;
    let rep = top.subgraph(rep)?;
    let outer = CayleyBall::new(store, rep.radius() + 1)
        .map_err(|_| Error::HorizonExceeded { requested: rep.radius() + 1, horizon: store.horizon() })?;
    let extended = rep.right_extend(&outer)?.configuration()?;
    let lhs = config::count_embeddings(&Pattern::new(&extended), &CayleyBall::new(store, n)?);
    let rhs = config::count_embeddings(&pattern, &CayleyBall::new(store, n - 1)?);
    let dead = if n < store.horizon() {
        store.dead_elements(n)?.into_iter().filter(|&g| store.length(g) == n).count()
    } else {
        0
    };
    Ok(FormulaReport { config: s.clone(), extended, n, lhs, rhs, bound: s.size() * dead })
}

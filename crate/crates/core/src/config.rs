//! Connected configurations: canonical forms, embedding counts, enumeration
//! and the invariants `L(S)` and `d(S)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cayley::{CayleyBall, Host, LabeledGraph};
use crate::error::{Error, Result};
use crate::words::{ElementId, ElementStore};

/// Canonical form of a connected coloured digraph: `[n, s_1, l_1, t_1, …]`
/// with the edge triples sorted. The derived order is (size, form).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Arc<[u32]>);

impl Configuration {
    /// `[pt]`.
    pub fn point() -> Self {
        Configuration(Arc::from(vec![1u32]))
    }

    /// A single edge of colour `label`.
    pub fn edge(label: usize) -> Self {
        Configuration(Arc::from(vec![2, 0, label as u32, 1]))
    }

    /// Canonicalizes an arbitrary edge list on `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let labels = edges.iter().map(|e| e.1 + 1).max().unwrap_or(1);
        Ok(canonicalize(&LabeledGraph::from_edges(n, labels, edges)?)?.config)
    }

    pub fn size(&self) -> usize {
        self.0[0] as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        self.0[1..].chunks(3).map(|c| (c[0] as usize, c[1] as usize, c[2] as usize)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (self.0.len() - 1) / 3
    }

    pub fn form(&self) -> &[u32] {
        &self.0
    }

    /// Canonically numbered graph (root 0).
    pub fn graph(&self) -> LabeledGraph {
        let edges = self.edges();
        let labels = edges.iter().map(|e| e.1 + 1).max().unwrap_or(1);
        LabeledGraph::from_edges(self.size(), labels, &edges).expect("canonical form is a valid graph")
    }

    /// Text form with generator names in place of colour indices.
    pub fn describe(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .edges()
            .iter()
            .map(|&(s, l, t)| format!("{s}-{}->{t}", names.get(l).cloned().unwrap_or_else(|| l.to_string())))
            .collect();
        format!("{}[{}]", self.size(), parts.join(" "))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges().iter().map(|(s, l, t)| format!("{s}.{l}.{t}")).collect();
        write!(f, "{}[{}]", self.size(), parts.join(" "))
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// Parses the `Display` form; the input need not be canonical.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("configuration `{s}`"));
        let (n, rest) = s.trim().split_once('[').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let body = rest.strip_suffix(']').ok_or_else(bad)?;
        let mut edges = Vec::new();
        for tok in body.split_whitespace() {
            let f: Vec<usize> = tok.split('.').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            if f.len() != 3 {
                return Err(bad());
            }
            edges.push((f[0], f[1], f[2]));
        }
        Configuration::from_edges(n, &edges)
    }
}

/// Result of [`canonicalize`]: the form and every vertex ordering attaining
/// it (`orderings[i][j]` = input vertex numbered `j`). Their number is the
/// order of the automorphism group.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub config: Configuration,
    pub orderings: Vec<Vec<usize>>,
}

fn traversal<H: Host>(g: &H, root: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut num = vec![usize::MAX; n];
    let mut order = vec![root];
    num[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for l in 0..g.label_count() {
            for w in [g.succ(v, l), g.pred(v, l)].into_iter().flatten() {
                if num[w] == usize::MAX {
                    num[w] = order.len();
                    order.push(w);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Canonical form: the minimum over roots of the serialization of the
/// label-ordered breadth-first numbering.
pub fn canonicalize(g: &LabeledGraph) -> Result<Canonical> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptySubgraph);
    }
    let edges = g.edges();
    let mut best: Option<Vec<u32>> = None;
    let mut orderings = Vec::new();
    for root in 0..n {
        let order = traversal(g, root).ok_or(Error::Disconnected)?;
        let mut num = vec![0u32; n];
        for (i, &v) in order.iter().enumerate() {
            num[v] = i as u32;
        }
        let mut triples: Vec<[u32; 3]> = edges.iter().map(|&(s, l, t)| [num[s], l as u32, num[t]]).collect();
        triples.sort_unstable();
        let mut form = Vec::with_capacity(1 + 3 * triples.len());
        form.push(n as u32);
        form.extend(triples.into_iter().flatten());
        match best.as_ref().map(|b| form.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(form);
                orderings = vec![order];
            }
            Some(std::cmp::Ordering::Equal) => orderings.push(order),
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    Ok(Canonical { config: Configuration(Arc::from(best.expect("nonempty"))), orderings })
}

/// Forced extension plan of a connected configuration from its root.
#[derive(Clone, Debug)]
pub struct Pattern {
    config: Configuration,
    edges: Vec<(usize, usize, usize)>,
    plan: Vec<(usize, usize, bool)>,
    aut: usize,
}

impl Pattern {
    pub fn new(config: &Configuration) -> Self {
        Self::from_graph(config.clone(), &config.graph())
    }

    fn from_graph(config: Configuration, g: &LabeledGraph) -> Self {
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut plan = vec![(0, 0, true); n];
        let mut queue = VecDeque::from([0]);
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for l in 0..g.label_count() {
                for (w, fwd) in [(g.succ(v, l), true), (g.pred(v, l), false)] {
                    if let Some(w) = w.filter(|&w| !seen[w]) {
                        seen[w] = true;
                        plan[w] = (v, l, fwd);
                        queue.push_back(w);
                    }
                }
            }
        }
        let steps = order[1..].iter().map(|&w| plan[w]).collect::<Vec<_>>();
        // plan indices are traversal positions
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let plan = steps.into_iter().map(|(p, l, f)| (pos[p], l, f)).collect();
        let edges = g.edges().into_iter().map(|(s, l, t)| (pos[s], l, pos[t])).collect();
        let mut p = Pattern { config, edges, plan, aut: 1 };
        p.aut = p.count_anchors(g).max(1);
        p
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn size(&self) -> usize {
        self.plan.len() + 1
    }

    /// Number of label-preserving automorphisms.
    pub fn automorphisms(&self) -> usize {
        self.aut
    }

    /// Image of an embedding rooted at `anchor`, in plan order.
    pub fn embed<H: Host>(&self, host: &H, anchor: usize, img: &mut Vec<usize>) -> bool {
        img.clear();
        img.push(anchor);
        for &(p, l, fwd) in &self.plan {
            let w = if fwd { host.succ(img[p], l) } else { host.pred(img[p], l) };
            match w {
                Some(w) if !img.contains(&w) => img.push(w),
                _ => return false,
            }
        }
        for &(s, l, t) in &self.edges {
            if host.succ(img[s], l) != Some(img[t]) {
                return false;
            }
        }
        let mut induced = 0;
        for &v in img.iter() {
            for l in 0..host.label_count() {
                if host.succ(v, l).is_some_and(|w| img.contains(&w)) {
                    induced += 1;
                }
            }
        }
        induced == self.edges.len()
    }

    fn usable<H: Host>(&self, host: &H) -> bool {
        self.edges.iter().all(|e| e.1 < host.label_count()) && self.size() <= host.vertex_count()
    }

    fn count_anchors<H: Host>(&self, host: &H) -> usize {
        if !self.usable(host) {
            return 0;
        }
        let mut img = Vec::new();
        (0..host.vertex_count()).filter(|&a| self.embed(host, a, &mut img)).count()
    }

    /// Embedding counts split by the maximal vertex radius of the image.
    pub fn radius_histogram<H: Host>(&self, host: &H, max_radius: usize) -> Vec<usize> {
        let mut hist = vec![0usize; max_radius + 1];
        if !self.usable(host) {
            return hist;
        }
        let v = host.vertex_count();
        let add = |mut h: Vec<usize>, a: usize, img: &mut Vec<usize>| {
            if self.embed(host, a, img) {
                let r = img.iter().map(|&x| host.radius_of(x)).max().unwrap_or(0);
                if r <= max_radius {
                    h[r] += 1;
                }
            }
            h
        };
        let raw = if v < 512 {
            let mut img = Vec::new();
            (0..v).fold(hist.clone(), |h, a| add(h, a, &mut img))
        } else {
            (0..v)
                .into_par_iter()
                .fold(|| (hist.clone(), Vec::new()), |(h, mut img), a| (add(h, a, &mut img), img))
                .map(|(h, _)| h)
                .reduce(|| hist.clone(), |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
        };
        for (h, r) in hist.iter_mut().zip(raw) {
            *h = r / self.aut;
        }
        hist
    }

    /// Distinct image vertex sets (sorted), ordered by (radius, vertices).
    pub fn images<H: Host>(&self, host: &H) -> Vec<Vec<usize>> {
        if !self.usable(host) {
            return Vec::new();
        }
        let mut img = Vec::new();
        let mut out = BTreeSet::new();
        for a in 0..host.vertex_count() {
            if self.embed(host, a, &mut img) {
                let mut set = img.clone();
                set.sort_unstable();
                let r = set.iter().map(|&x| host.radius_of(x)).max().unwrap_or(0);
                out.insert((r, set));
            }
        }
        out.into_iter().map(|(_, s)| s).collect()
    }
}

/// `A(S, T)`: the number of full subgraphs of `host` isomorphic to `S`.
pub fn count_embeddings<H: Host>(pattern: &Pattern, host: &H) -> usize {
    pattern.count_anchors(host) / pattern.aut
}

/// `A(S, T)` for configurations.
pub fn count_in_config(s: &Configuration, t: &Configuration) -> usize {
    count_embeddings(&Pattern::new(s), &t.graph())
}

/// `A(S, Γ_n)` for `n = 0..=order`.
pub fn embedding_counts_by_radius(store: &ElementStore, s: &Configuration, order: usize) -> Result<Vec<usize>> {
    let ball = CayleyBall::new(store, order)?;
    let hist = Pattern::new(s).radius_histogram(&ball, order);
    Ok(hist
        .iter()
        .scan(0, |acc, h| {
            *acc += h;
            Some(*acc)
        })
        .collect())
}

/// All label-preserving isomorphisms `g1 → g2` (as vertex maps) for
/// connected graphs.
pub fn isomorphisms(g1: &LabeledGraph, g2: &LabeledGraph) -> Vec<Vec<usize>> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() || !g1.is_connected() {
        return Vec::new();
    }
    let n = g1.vertex_count();
    let order = traversal(g1, 0).expect("connected");
    let pattern = Pattern::from_graph(Configuration::point(), g1);
    let mut img = Vec::new();
    let mut out = Vec::new();
    if !pattern.usable(g2) {
        return out;
    }
    for a in 0..n {
        if pattern.embed(g2, a, &mut img) {
            let mut map = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                map[v] = img[i];
            }
            out.push(map);
        }
    }
    out
}

fn induced<H: Host>(host: &H, verts: &[usize]) -> LabeledGraph {
    let mut edges = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        for l in 0..host.label_count() {
            if let Some(j) = host.succ(v, l).and_then(|w| verts.iter().position(|&x| x == w)) {
                edges.push((i, l, j));
            }
        }
    }
    LabeledGraph::from_edges(verts.len(), host.label_count(), &edges)
        .expect("host degree bounds")
        .with_lengths(verts.iter().map(|&v| host.radius_of(v)).collect())
}

/// Calls `visit` once for every connected vertex set of size at most `k`
/// whose smallest vertex is `root`.
pub fn for_each_connected_from<H: Host>(host: &H, root: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == 0 {
        return;
    }
    let ext: Vec<usize> = host.neighbours(root).into_iter().filter(|&u| u > root).collect();
    let mut sub = vec![root];
    esu(host, root, k, &mut sub, ext, visit);
}

fn esu<H: Host>(host: &H, root: usize, k: usize, sub: &mut Vec<usize>, mut ext: Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    visit(sub);
    if sub.len() == k {
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for u in host.neighbours(w) {
            if u > root
                && !sub.contains(&u)
                && !next.contains(&u)
                && !sub.iter().any(|&s| host.neighbours(s).contains(&u))
            {
                next.push(u);
            }
        }
        sub.push(w);
        esu(host, root, k, sub, next, visit);
        sub.pop();
    }
}

/// Every connected vertex set of the ball with at most `k` vertices,
/// grouped by class; sets sorted within each class.
pub fn connected_subsets_by_class(ball: &CayleyBall<'_>, k: usize) -> BTreeMap<Configuration, Vec<Vec<ElementId>>> {
    let per_root: Vec<Vec<(Configuration, Vec<ElementId>)>> = (0..ball.vertex_count())
        .into_par_iter()
        .map(|root| {
            let mut found = Vec::new();
            for_each_connected_from(ball, root, k, &mut |set| {
                let mut s = set.to_vec();
                s.sort_unstable();
                let c = canonicalize(&induced(ball, &s)).expect("connected").config;
                found.push((c, s.into_iter().map(|v| ElementId(v as u32)).collect()));
            });
            found
        })
        .collect();
    let mut out: BTreeMap<Configuration, Vec<Vec<ElementId>>> = BTreeMap::new();
    for (c, s) in per_root.into_iter().flatten() {
        out.entry(c).or_default().push(s);
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// A configuration found in a ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEntry {
    pub config: Configuration,
    /// `min{n : A(S, Γ_n) ≠ 0}`.
    pub first_radius: usize,
    /// Representative of least radius (then least vertex ids).
    pub representative: Vec<ElementId>,
}

/// All connected configurations with at most `max_size` vertices occurring
/// in the ball, ordered by (size, form).
pub fn enumerate_connected(ball: &CayleyBall<'_>, max_size: usize) -> Vec<ConfigEntry> {
    type Best = BTreeMap<Configuration, (usize, Vec<usize>)>;
    let merge = |mut a: Best, b: Best| {
        for (c, v) in b {
            match a.get(&c) {
                Some(old) if *old <= v => {}
                _ => {
                    a.insert(c, v);
                }
            }
        }
        a
    };
    let best: Best = (0..ball.vertex_count())
        .into_par_iter()
        .map(|root| {
            let mut local = Best::new();
            for_each_connected_from(ball, root, max_size, &mut |set| {
                let mut s = set.to_vec();
                s.sort_unstable();
                let r = s.iter().map(|&v| ball.radius_of(v)).max().unwrap_or(0);
                let c = canonicalize(&induced(ball, &s)).expect("connected").config;
                let cand = (r, s);
                match local.get(&c) {
                    Some(old) if *old <= cand => {}
                    _ => {
                        local.insert(c, cand);
                    }
                }
            });
            local
        })
        .reduce(Best::new, merge);
    best.into_iter()
        .map(|(config, (first_radius, rep))| ConfigEntry {
            config,
            first_radius,
            representative: rep.into_iter().map(|v| ElementId(v as u32)).collect(),
        })
        .collect()
}

/// Representative of least (radius, vertex ids) inside `ball`.
pub fn first_representative(ball: &CayleyBall<'_>, pattern: &Pattern) -> Option<Vec<ElementId>> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut img = Vec::new();
    if !pattern.usable(ball) {
        return None;
    }
    for a in 0..ball.vertex_count() {
        if let Some((r, _)) = &best {
            if ball.radius_of(a) > *r {
                break;
            }
        }
        if pattern.embed(ball, a, &mut img) {
            let mut s = img.clone();
            s.sort_unstable();
            let r = s.iter().map(|&v| ball.radius_of(v)).max().unwrap_or(0);
            let cand = (r, s);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.map(|(_, s)| s.into_iter().map(|v| ElementId(v as u32)).collect())
}

const REPRESENTATIVE_SAMPLE: usize = 12;

fn reduce_by_gcd(store: &ElementStore, rep: &[ElementId]) -> Result<Vec<ElementId>> {
    let g = store.gcd_l(rep)?;
    let mut out = rep.iter().map(|&u| store.left_quotient(g, u)).collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// `𝕊_0 = gcd_l(𝕊)^{-1}𝕊`, checked against further representatives.
pub fn minimal_representative(store: &ElementStore, s: &Configuration) -> Result<Vec<ElementId>> {
    let top = CayleyBall::new(store, store.horizon())?;
    let pattern = Pattern::new(s);
    let first = first_representative(&top, &pattern).ok_or(Error::NoRepresentativeInHorizon)?;
    let s0 = reduce_by_gcd(store, &first)?;
    if store.gcd_l(&s0)? != store.identity() {
        return Err(Error::RepresentativeDependence);
    }
    let radius = first.iter().map(|&v| store.length(v)).max().unwrap_or(0);
    let near = CayleyBall::new(store, (radius + 2).min(store.horizon()))?;
    for rep in pattern.images(&near).into_iter().take(REPRESENTATIVE_SAMPLE) {
        let rep: Vec<ElementId> = rep.into_iter().map(|v| ElementId(v as u32)).collect();
        if reduce_by_gcd(store, &rep)? != s0 {
            return Err(Error::RepresentativeDependence);
        }
    }
    Ok(s0)
}

/// `L(S)`: maximal length over the minimal representative.
pub fn radius_l(store: &ElementStore, s: &Configuration) -> Result<usize> {
    Ok(minimal_representative(store, s)?.iter().map(|&v| store.length(v)).max().unwrap_or(0))
}

/// Undirected graph diameter.
pub fn diameter_d(s: &Configuration) -> usize {
    let g = s.graph();
    let n = g.vertex_count();
    let mut best = 0;
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            for w in g.neighbours(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    q.push_back(w);
                }
            }
        }
        best = best.max(dist.into_iter().max().unwrap_or(0));
    }
    best
}

/// CSV `form,size,first_radius,L,d`; `L` is empty where undefined.
pub fn catalog_csv(store: &ElementStore, entries: &[ConfigEntry]) -> String {
    let rows: Vec<String> = entries
        .par_iter()
        .map(|e| {
            let l = radius_l(store, &e.config).map(|l| l.to_string()).unwrap_or_default();
            format!("{},{},{},{},{}\n", e.config, e.config.size(), e.first_radius, l, diameter_d(&e.config))
        })
        .collect();
    let mut s = String::from("form,size,first_radius,L,d\n");
    s.extend(rows);
    s
}

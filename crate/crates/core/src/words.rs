//! Word problem and element enumeration.
//!
//! Elements of length `n` are the congruence classes of length-`n` words.
//! Since every relation preserves length, a class of length `n` is a class
//! of pairs `(prefix class of length n-1, last letter)` modulo the rewrites
//! that touch the last letter, so each stratum is closed with a union-find
//! over `#sphere(n-1) · #G` nodes. Free groups use free reduction instead.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{Letter, Presentation, PresentationKind, Word};

/// Default cap on the number of enumerated elements.
pub const DEFAULT_CLASS_CAP: usize = 10_000_000;

const NONE: u32 = u32::MAX;

/// Dense identifier of an enumerated element. Identifiers are ordered by
/// length, then by canonical word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const IDENTITY: ElementId = ElementId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    // the smaller index becomes the root, so roots are class minima
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// All elements of length at most `horizon`, with canonical words and a
/// partial right-multiplication table.
#[derive(Clone, Debug)]
pub struct ElementStore {
    presentation: Presentation,
    horizon: usize,
    letters: usize,
    labels: usize,
    words: Vec<Word>,
    offsets: Vec<usize>,
    lengths: Vec<u16>,
    mul: Vec<u32>,
    pred: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct StoreFile {
    format: String,
    version: u32,
    presentation: String,
    horizon: usize,
    offsets: Vec<usize>,
    words: Vec<Vec<Letter>>,
    mul: Vec<u32>,
}

const STORE_FORMAT: &str = "growth-element-store";
const STORE_VERSION: u32 = 1;

impl ElementStore {
    pub fn build(p: &Presentation, horizon: usize) -> Result<Self> {
        Self::build_with_cap(p, horizon, DEFAULT_CLASS_CAP)
    }

    /// Enumerates every element of length `<= horizon`, failing once more
    /// than `cap` elements have been produced.
    pub fn build_with_cap(p: &Presentation, horizon: usize, cap: usize) -> Result<Self> {
        let report = p.validate();
        if let Some(c) = report.failures().next() {
            return Err(Error::InvalidPresentation(format!(
                "{}: {}",
                c.name,
                c.failure.clone().unwrap_or_default()
            )));
        }
        let (words, offsets, mul) = if p.kind == PresentationKind::FreeGroup {
            build_free_group(p.rank(), horizon, cap)?
        } else {
            build_monoid(p, horizon, cap)?
        };
        Ok(Self::assemble(p.clone(), horizon, words, offsets, mul))
    }

    fn assemble(presentation: Presentation, horizon: usize, words: Vec<Word>, offsets: Vec<usize>, mul: Vec<u32>) -> Self {
        let group = presentation.is_group();
        let f = presentation.rank();
        let letters = if group { 2 * f } else { f };
        let labels = f;
        let n = words.len();
        let mut lengths = vec![0u16; n];
        for k in 0..=horizon {
            for l in &mut lengths[offsets[k]..offsets[k + 1]] {
                *l = k as u16;
            }
        }
        let mut pred = vec![NONE; n * labels];
        for u in 0..n {
            for g in 0..labels {
                if group {
                    pred[u * labels + g] = mul[u * letters + g + f];
                } else {
                    let v = mul[u * letters + g];
                    if v != NONE && pred[v as usize * labels + g] == NONE {
                        pred[v as usize * labels + g] = u as u32;
                    }
                }
            }
        }
        ElementStore { presentation, horizon, letters, labels, words, offsets, lengths, mul, pred }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `#G`: generators used for lengths and for `Γ_1` (both signs for a free group).
    pub fn letter_count(&self) -> usize {
        self.letters
    }

    /// Number of edge colours of the Cayley graph.
    pub fn label_count(&self) -> usize {
        self.labels
    }

    pub fn is_group(&self) -> bool {
        self.presentation.is_group()
    }

    /// Whether lengths are additive (true for every monoid handled here).
    pub fn is_homogeneous(&self) -> bool {
        !self.is_group()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn identity(&self) -> ElementId {
        ElementId::IDENTITY
    }

    fn check_radius(&self, n: usize) -> Result<()> {
        if n > self.horizon {
            Err(Error::HorizonExceeded { requested: n, horizon: self.horizon })
        } else {
            Ok(())
        }
    }

    pub fn sphere_size(&self, n: usize) -> Result<usize> {
        self.check_radius(n)?;
        Ok(self.offsets[n + 1] - self.offsets[n])
    }

    pub fn ball_size(&self, n: usize) -> Result<usize> {
        self.check_radius(n)?;
        Ok(self.offsets[n + 1])
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        (0..=self.horizon).map(|n| self.offsets[n + 1] - self.offsets[n]).collect()
    }

    pub fn ball_sizes(&self) -> Vec<usize> {
        self.offsets[1..].to_vec()
    }

    /// Elements of length exactly `n`.
    pub fn sphere(&self, n: usize) -> Result<impl Iterator<Item = ElementId>> {
        self.check_radius(n)?;
        Ok((self.offsets[n]..self.offsets[n + 1]).map(|i| ElementId(i as u32)))
    }

    /// Elements of length at most `n`; always the id prefix `0..#Γ_n`.
    pub fn ball(&self, n: usize) -> Result<impl Iterator<Item = ElementId>> {
        self.check_radius(n)?;
        Ok((0..self.offsets[n + 1]).map(|i| ElementId(i as u32)))
    }

    pub fn length(&self, u: ElementId) -> usize {
        self.lengths[u.index()] as usize
    }

    /// Canonical (lexicographically minimal, or freely reduced) word.
    pub fn word(&self, u: ElementId) -> &Word {
        &self.words[u.index()]
    }

    pub fn render(&self, u: ElementId) -> String {
        let s = self.presentation.render_word(self.word(u));
        if s.is_empty() {
            "e".to_string()
        } else {
            s
        }
    }

    /// `u·α` for a generator (or inverse letter of a free group), when the
    /// product lies inside the horizon.
    pub fn mul(&self, u: ElementId, letter: usize) -> Option<ElementId> {
        let v = self.mul[u.index() * self.letters + letter];
        (v != NONE).then_some(ElementId(v))
    }

    /// Target of the outgoing edge of colour `label` at `u`.
    pub fn succ(&self, u: ElementId, label: usize) -> Option<ElementId> {
        self.mul(u, label)
    }

    /// Source of the incoming edge of colour `label` at `u`.
    pub fn pred(&self, u: ElementId, label: usize) -> Option<ElementId> {
        let v = self.pred[u.index() * self.labels + label];
        (v != NONE).then_some(ElementId(v))
    }

    /// Element represented by a word of length at most the horizon.
    pub fn evaluate(&self, w: &Word) -> Result<ElementId> {
        self.check_radius(w.len())?;
        self.multiply_word(self.identity(), w.letters())
    }

    fn multiply_word(&self, start: ElementId, letters: &[Letter]) -> Result<ElementId> {
        let mut cur = start;
        for &l in letters {
            if l as usize >= self.letters {
                return Err(Error::UnknownGenerator(format!("#{l}")));
            }
            cur = self.mul(cur, l as usize).ok_or(Error::HorizonExceeded {
                requested: self.length(cur) + 1,
                horizon: self.horizon,
            })?;
        }
        Ok(cur)
    }

    /// Canonical word congruent to `w`.
    pub fn normalize(&self, w: &Word) -> Result<Word> {
        Ok(self.word(self.evaluate(w)?).clone())
    }

    /// Product `u·v`.
    pub fn product(&self, u: ElementId, v: ElementId) -> Result<ElementId> {
        self.multiply_word(u, self.word(v).letters())
    }

    /// All left divisors `d` of `u` (`d·x = u`), sorted: the classes of all
    /// prefixes of all words representing `u`. For a free group the prefixes
    /// of the reduced word.
    pub fn left_divisors(&self, u: ElementId) -> Vec<ElementId> {
        if self.is_group() {
            let w = self.word(u).letters();
            let mut out: Vec<_> = (0..=w.len())
                .map(|k| self.multiply_word(self.identity(), &w[..k]).expect("prefix within ball"))
                .collect();
            out.sort();
            return out;
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![u];
        seen.insert(u);
        while let Some(x) = stack.pop() {
            for g in 0..self.labels {
                if let Some(p) = self.pred(x, g) {
                    if seen.insert(p) {
                        stack.push(p);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Greatest common left divisor of a nonempty set.
    pub fn gcd_l(&self, set: &[ElementId]) -> Result<ElementId> {
        let (first, rest) = set.split_first().ok_or(Error::Domain("gcd of an empty set".into()))?;
        let mut common: BTreeSet<ElementId> = self.left_divisors(*first).into_iter().collect();
        for &u in rest {
            let divs: BTreeSet<ElementId> = self.left_divisors(u).into_iter().collect();
            common = common.intersection(&divs).copied().collect();
        }
        let top = common.iter().map(|&d| self.length(d)).max().unwrap_or(0);
        let tops: Vec<ElementId> = common.iter().copied().filter(|&d| self.length(d) == top).collect();
        if tops.len() != 1 {
            return Err(Error::GcdNotUnique(tops.len()));
        }
        let g = tops[0];
        let divs: BTreeSet<ElementId> = self.left_divisors(g).into_iter().collect();
        if !common.is_subset(&divs) {
            return Err(Error::GcdNotUnique(2));
        }
        Ok(g)
    }

    /// The unique `x` with `d·x = u`.
    pub fn left_quotient(&self, d: ElementId, u: ElementId) -> Result<ElementId> {
        if self.is_group() {
            let f = self.presentation.rank();
            let mut letters: Vec<Letter> = self
                .word(d)
                .letters()
                .iter()
                .rev()
                .map(|&l| ((l as usize + f) % (2 * f)) as Letter)
                .collect();
            letters.extend_from_slice(self.word(u).letters());
            let reduced = free_reduce(&letters, f);
            return self.evaluate(&Word(reduced));
        }
        let divisors: BTreeSet<ElementId> = self.left_divisors(u).into_iter().collect();
        if !divisors.contains(&d) {
            return Err(Error::NotADivisor);
        }
        let mut path = Vec::new();
        let mut cur = d;
        // every step stays inside the divisors of u and gains one letter
        while cur != u {
            let (g, next) = (0..self.letters)
                .filter_map(|g| self.mul(cur, g).map(|v| (g, v)))
                .find(|(_, v)| divisors.contains(v))
                .ok_or(Error::NotADivisor)?;
            path.push(g as Letter);
            cur = next;
        }
        self.evaluate(&Word(path))
    }

    /// Least-length witness `(a, b)` with `a·u = b·v`, searching multipliers
    /// of length at most `bound` for the longer of `u`, `v`.
    pub fn common_right_multiple(&self, u: ElementId, v: ElementId, bound: usize) -> Option<(ElementId, ElementId)> {
        let (lu, lv) = (self.length(u), self.length(v));
        let base = lu.max(lv);
        for total in base..=(base + bound).min(self.horizon) {
            let mut left: BTreeMap<ElementId, ElementId> = BTreeMap::new();
            for a in self.sphere(total - lu).ok()? {
                if let Ok(w) = self.product(a, u) {
                    left.entry(w).or_insert(a);
                }
            }
            let mut best: Option<(ElementId, ElementId, ElementId)> = None;
            for b in self.sphere(total - lv).ok()? {
                if let Ok(w) = self.product(b, v) {
                    if let Some(&a) = left.get(&w) {
                        if best.is_none_or(|(bw, _, _)| w < bw) {
                            best = Some((w, a, b));
                        }
                    }
                }
            }
            if let Some((_, a, b)) = best {
                return Some((a, b));
            }
        }
        None
    }

    /// `{g ∈ Γ_n : l(gα) ≤ l(g) for every α ∈ G}`.
    pub fn dead_elements(&self, n: usize) -> Result<Vec<ElementId>> {
        if n >= self.horizon {
            return Err(Error::HorizonExceeded { requested: n + 1, horizon: self.horizon });
        }
        Ok(self
            .ball(n)?
            .filter(|&g| {
                (0..self.letters).all(|a| {
                    let h = self.mul(g, a).expect("product inside horizon");
                    self.length(h) <= self.length(g)
                })
            })
            .collect())
    }

    /// Scan of the multiplication table for failures of left or right
    /// cancellation inside the horizon.
    pub fn cancellativity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen: BTreeMap<(u32, usize), u32> = BTreeMap::new();
        for u in 0..self.len() {
            let mut targets = BTreeMap::new();
            for g in 0..self.letters {
                let v = self.mul[u * self.letters + g];
                if v == NONE {
                    continue;
                }
                if let Some(h) = targets.insert(v, g) {
                    out.push(format!("{}·{} = {}·{}", self.render(ElementId(u as u32)), h, self.render(ElementId(u as u32)), g));
                }
                if let Some(w) = seen.insert((v, g), u as u32) {
                    out.push(format!(
                        "{}·{g} = {}·{g}",
                        self.render(ElementId(w)),
                        self.render(ElementId(u as u32))
                    ));
                }
            }
        }
        out
    }

    /// CSV table `n,sphere,ball`.
    pub fn counts_csv(&self) -> String {
        let mut s = String::from("n,sphere,ball\n");
        let spheres = self.sphere_sizes();
        let balls = self.ball_sizes();
        for n in 0..=self.horizon {
            s.push_str(&format!("{n},{},{}\n", spheres[n], balls[n]));
        }
        s
    }

    /// Versioned cache encoding; `from_cache_bytes` inverts it exactly.
    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let file = StoreFile {
            format: STORE_FORMAT.to_string(),
            version: STORE_VERSION,
            presentation: self.presentation.to_canonical_json(),
            horizon: self.horizon,
            offsets: self.offsets.clone(),
            words: self.words.iter().map(|w| w.0.clone()).collect(),
            mul: self.mul.clone(),
        };
        serde_json::to_vec(&file).expect("store serializes")
    }

    pub fn from_cache_bytes(bytes: &[u8]) -> Result<Self> {
        let file: StoreFile = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        if file.format != STORE_FORMAT || file.version != STORE_VERSION {
            return Err(Error::Parse(format!("unsupported store format {} v{}", file.format, file.version)));
        }
        let p = Presentation::from_json(&file.presentation)?;
        let letters = if p.is_group() { 2 * p.rank() } else { p.rank() };
        let n = file.words.len();
        if file.offsets.len() != file.horizon + 2 || file.offsets.last() != Some(&n) || file.mul.len() != n * letters {
            return Err(Error::Parse("inconsistent store tables".into()));
        }
        let words = file.words.into_iter().map(Word).collect();
        Ok(Self::assemble(p, file.horizon, words, file.offsets, file.mul))
    }
}

fn free_reduce(letters: &[Letter], f: usize) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&last) if (last as usize + f) % (2 * f) == l as usize => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

type Tables = (Vec<Word>, Vec<usize>, Vec<u32>);

fn build_free_group(f: usize, horizon: usize, cap: usize) -> Result<Tables> {
    let letters = 2 * f;
    let inverse = |l: usize| (l + f) % letters;
    let mut words = vec![Word::empty()];
    let mut parent = vec![NONE];
    let mut offsets = vec![0, 1];
    for n in 1..=horizon {
        let (lo, hi) = (offsets[n - 1], offsets[n]);
        for i in lo..hi {
            let last = words[i].0.last().map(|&l| l as usize);
            for g in 0..letters {
                if Some(inverse(g)) == last {
                    continue;
                }
                let mut w = words[i].0.clone();
                w.push(g as Letter);
                words.push(Word(w));
                parent.push(i as u32);
            }
        }
        if words.len() > cap {
            return Err(Error::BudgetExceeded { cap, length: n });
        }
        offsets.push(words.len());
    }
    let mut mul = vec![NONE; words.len() * letters];
    for (child, &p) in parent.iter().enumerate().skip(1) {
        let g = *words[child].0.last().unwrap() as usize;
        mul[p as usize * letters + g] = child as u32;
        mul[child * letters + inverse(g)] = p;
    }
    Ok((words, offsets, mul))
}

fn build_monoid(p: &Presentation, horizon: usize, cap: usize) -> Result<Tables> {
    let f = p.rank();
    let mut words = vec![Word::empty()];
    let mut offsets = vec![0, 1];
    let mut mul: Vec<u32> = vec![NONE; f];

    for n in 1..=horizon {
        let (lo, hi) = (offsets[n - 1], offsets[n]);
        let prev = hi - lo;
        let node = |c: usize, g: usize| ((c - lo) * f + g) as u32;
        let mut uf = UnionFind::new(prev * f);
        let walk = |mul: &Vec<u32>, start: usize, letters: &[Letter]| -> usize {
            letters.iter().fold(start, |cur, &l| mul[cur * f + l as usize] as usize)
        };
        for (lhs, rhs) in &p.relations {
            let k = lhs.len();
            if k > n {
                continue;
            }
            for x in offsets[n - k]..offsets[n - k + 1] {
                let a = walk(&mul, x, &lhs.0[..k - 1]);
                let b = walk(&mul, x, &rhs.0[..k - 1]);
                uf.union(node(a, lhs.0[k - 1] as usize), node(b, rhs.0[k - 1] as usize));
            }
        }
        // roots are class minima, and node order is (canonical prefix, letter)
        // order, so ascending roots give classes in lexicographic order
        let base = words.len();
        let mut class_of_root: BTreeMap<u32, u32> = BTreeMap::new();
        let mut roots = Vec::with_capacity(prev * f);
        for x in 0..(prev * f) as u32 {
            let r = uf.find(x);
            roots.push(r);
            if r == x {
                class_of_root.insert(r, (base + class_of_root.len()) as u32);
            }
        }
        if base + class_of_root.len() > cap {
            return Err(Error::BudgetExceeded { cap, length: n });
        }
        for &r in class_of_root.keys() {
            let c = lo + r as usize / f;
            let g = r as usize % f;
            let mut w = words[c].0.clone();
            w.push(g as Letter);
            words.push(Word(w));
        }
        mul.resize(words.len() * f, NONE);
        for x in 0..prev * f {
            let c = lo + x / f;
            mul[c * f + x % f] = class_of_root[&roots[x]];
        }
        offsets.push(words.len());
    }
    Ok((words, offsets, mul))
}

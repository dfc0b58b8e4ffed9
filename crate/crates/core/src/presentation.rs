//! Monoid presentations: homogeneous relations, Artin monoids built from a
//! Coxeter matrix, free monoids and free groups.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Index of a generator in a presentation's ordered generator list.
pub type Letter = u8;

/// A word over the generators, stored as generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Alternating word `⟨xy⟩^m = xyxy…` of length `m`.
    pub fn alternating(x: Letter, y: Letter, m: usize) -> Self {
        Word((0..m).map(|i| if i % 2 == 0 { x } else { y }).collect())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Symmetric Coxeter matrix; `None` off the diagonal encodes `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    size: usize,
    entries: Vec<Option<u32>>,
}

impl CoxeterMatrix {
    /// Builds a matrix from rows, where `0` encodes `∞`.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidCoxeter("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidCoxeter(format!("row {i} has length {}", row.len())));
            }
            for (j, &m) in row.iter().enumerate() {
                let e = if m == 0 { None } else { Some(m) };
                if i == j && e != Some(1) {
                    return Err(Error::InvalidCoxeter(format!("diagonal entry ({i},{i}) must be 1")));
                }
                if i != j && matches!(e, Some(v) if v < 2) {
                    return Err(Error::InvalidCoxeter(format!("entry ({i},{j}) must be >= 2 or infinite")));
                }
                entries.push(e);
            }
        }
        let m = CoxeterMatrix { size, entries };
        for i in 0..size {
            for j in 0..size {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidCoxeter(format!("not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(m)
    }

    /// Matrix of a Coxeter diagram given by its labelled bonds `(i, j, m)`;
    /// every other off-diagonal pair commutes (`m = 2`).
    pub fn from_bonds(size: usize, bonds: &[(usize, usize, Option<u32>)]) -> Self {
        let mut entries = vec![Some(2); size * size];
        for i in 0..size {
            entries[i * size + i] = Some(1);
        }
        for &(i, j, m) in bonds {
            entries[i * size + j] = m;
            entries[j * size + i] = m;
        }
        CoxeterMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `m(i,j)`, with `None` for `∞`.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.entries[i * self.size + j]
    }

    /// Rows with `0` standing for `∞`, the file encoding.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).unwrap_or(0)).collect())
            .collect()
    }

    /// Principal submatrix on the given index subset (in the given order).
    pub fn restrict(&self, subset: &[usize]) -> CoxeterMatrix {
        let size = subset.len();
        let mut entries = Vec::with_capacity(size * size);
        for &i in subset {
            for &j in subset {
                entries.push(self.get(i, j));
            }
        }
        CoxeterMatrix { size, entries }
    }

    /// Standard matrices by catalog name: `A<l>`, `B<l>`, `D<l>`, `E6`, `E7`,
    /// `E8`, `F4`, `G2`, `H3`, `H4`, `I2:<p>`.
    pub fn catalog(name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Coxeter type `{name}`"));
        let path = |l: usize, labels: &dyn Fn(usize) -> u32| {
            let bonds: Vec<_> = (0..l.saturating_sub(1)).map(|i| (i, i + 1, Some(labels(i)))).collect();
            CoxeterMatrix::from_bonds(l, &bonds)
        };
        if let Some(p) = name.strip_prefix("I2:") {
            let p: u32 = p.parse().map_err(|_| bad())?;
            if p < 3 {
                return Err(Error::Domain("I2(p) requires p >= 3".into()));
            }
            return Ok(CoxeterMatrix::from_bonds(2, &[(0, 1, Some(p))]));
        }
        let (family, rank) = name.split_at(1);
        let rank: usize = rank.parse().map_err(|_| bad())?;
        let m = match (family, rank) {
            ("A", l) if l >= 1 => path(l, &|_| 3),
            ("B", l) if l >= 2 => path(l, &|i| if i + 2 == l { 4 } else { 3 }),
            ("D", l) if l >= 4 => {
                let mut bonds: Vec<_> = (0..l - 2).map(|i| (i, i + 1, Some(3))).collect();
                bonds.push((l - 3, l - 1, Some(3)));
                CoxeterMatrix::from_bonds(l, &bonds)
            }
            ("E", l @ 6..=8) => {
                // 0-2-3-4-..., with 1 attached to 3
                let mut bonds = vec![(0, 2, Some(3)), (1, 3, Some(3))];
                bonds.extend((2..l - 1).map(|i| (i, i + 1, Some(3))));
                CoxeterMatrix::from_bonds(l, &bonds)
            }
            ("F", 4) => path(4, &|i| if i == 1 { 4 } else { 3 }),
            ("G", 2) => path(2, &|_| 6),
            ("H", l @ 3..=4) => path(l, &|i| if i == 0 { 5 } else { 3 }),
            _ => return Err(bad()),
        };
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PresentationKind {
    HomogeneousMonoid,
    Artin,
    FreeMonoid,
    FreeGroup,
}

impl PresentationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PresentationKind::HomogeneousMonoid => "homogeneous-monoid",
            PresentationKind::Artin => "artin",
            PresentationKind::FreeMonoid => "free-monoid",
            PresentationKind::FreeGroup => "free-group",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "homogeneous-monoid" | "homogeneous" => PresentationKind::HomogeneousMonoid,
            "artin" => PresentationKind::Artin,
            "free-monoid" => PresentationKind::FreeMonoid,
            "free-group" => PresentationKind::FreeGroup,
            other => return Err(Error::Parse(format!("unknown presentation kind `{other}`"))),
        })
    }
}

impl fmt::Display for PresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finite presentation. For [`PresentationKind::FreeGroup`] the generator
/// list holds the `f` free generators; their inverses are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub kind: PresentationKind,
    pub generators: Vec<String>,
    pub relations: Vec<(Word, Word)>,
    pub coxeter: Option<CoxeterMatrix>,
}

fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

/// Artin presentation `⟨αβ⟩^m = ⟨βα⟩^m` for every pair with finite `m`,
/// pairs ordered by generator index.
pub fn artin_presentation(m: &CoxeterMatrix, names: &[String]) -> Result<Presentation> {
    if names.len() != m.size() {
        return Err(Error::SizeMismatch { names: names.len(), size: m.size() });
    }
    let mut relations = Vec::new();
    for i in 0..m.size() {
        for j in i + 1..m.size() {
            if let Some(mij) = m.get(i, j) {
                let (x, y) = (i as Letter, j as Letter);
                relations.push((Word::alternating(x, y, mij as usize), Word::alternating(y, x, mij as usize)));
            }
        }
    }
    Ok(Presentation {
        kind: PresentationKind::Artin,
        generators: names.to_vec(),
        relations,
        coxeter: Some(m.clone()),
    })
}

/// Outcome of one invariant check in a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failure.is_some())
    }
}

impl Presentation {
    pub fn free_monoid(f: usize) -> Self {
        Presentation {
            kind: PresentationKind::FreeMonoid,
            generators: default_names(f),
            relations: Vec::new(),
            coxeter: None,
        }
    }

    pub fn free_group(f: usize) -> Self {
        Presentation {
            kind: PresentationKind::FreeGroup,
            generators: default_names(f),
            relations: Vec::new(),
            coxeter: None,
        }
    }

    pub fn artin(m: &CoxeterMatrix) -> Self {
        artin_presentation(m, &default_names(m.size())).expect("default names match size")
    }

    /// Homogeneous monoid from relations written as generator-name strings.
    pub fn homogeneous(generators: &[&str], relations: &[(&str, &str)]) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let mut p = Presentation {
            kind: PresentationKind::HomogeneousMonoid,
            generators,
            relations: Vec::new(),
            coxeter: None,
        };
        for (l, r) in relations {
            let lw = p.parse_word(l)?;
            let rw = p.parse_word(r)?;
            p.relations.push((lw, rw));
        }
        Ok(p)
    }

    /// Catalog name: a Coxeter type (see [`CoxeterMatrix::catalog`]),
    /// `Free:<f>` or `FreeGroup:<f>`.
    pub fn catalog(name: &str) -> Result<Self> {
        if let Some(f) = name.strip_prefix("FreeGroup:") {
            let f: usize = f.parse().map_err(|_| Error::Parse(format!("bad rank in `{name}`")))?;
            if f == 0 {
                return Err(Error::Domain("free group needs f >= 1".into()));
            }
            return Ok(Presentation::free_group(f));
        }
        if let Some(f) = name.strip_prefix("Free:") {
            let f: usize = f.parse().map_err(|_| Error::Parse(format!("bad rank in `{name}`")))?;
            if f == 0 {
                return Err(Error::Domain("free monoid needs f >= 1".into()));
            }
            return Ok(Presentation::free_monoid(f));
        }
        Ok(Presentation::artin(&CoxeterMatrix::catalog(name)?))
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_group(&self) -> bool {
        self.kind == PresentationKind::FreeGroup
    }

    fn single_char_names(&self) -> bool {
        self.generators.iter().all(|g| g.chars().count() == 1)
    }

    /// Parses a word. With single-character generator names the word is read
    /// character by character; otherwise names are separated by whitespace
    /// or `.`.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let lookup = |tok: &str| {
            self.generators
                .iter()
                .position(|g| g == tok)
                .map(|i| i as Letter)
                .ok_or_else(|| Error::UnknownGenerator(tok.to_string()))
        };
        let letters = if self.single_char_names() {
            s.chars()
                .filter(|c| !c.is_whitespace() && *c != '.')
                .map(|c| lookup(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.split(|c: char| c.is_whitespace() || c == '.')
                .filter(|t| !t.is_empty())
                .map(lookup)
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(letters))
    }

    /// Renders a word with generator names. Free-group inverse letters
    /// (indices `f..2f`) are rendered in upper case or with a `^-1` suffix.
    pub fn render_word(&self, w: &Word) -> String {
        let f = self.rank();
        let name = |l: Letter| -> String {
            let l = l as usize;
            if l < f {
                self.generators[l].clone()
            } else {
                let g = &self.generators[l - f];
                if g.chars().count() == 1 && g.chars().all(|c| c.is_lowercase()) {
                    g.to_uppercase()
                } else {
                    format!("{g}^-1")
                }
            }
        };
        if self.single_char_names() {
            w.0.iter().map(|&l| name(l)).collect()
        } else {
            w.0.iter().map(|&l| name(l)).collect::<Vec<_>>().join(" ")
        }
    }

    fn word_in_range(&self, w: &Word) -> bool {
        w.0.iter().all(|&l| (l as usize) < self.rank())
    }

    /// Checks every structural invariant and reports each outcome.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let mut push = |name: &'static str, failure: Option<String>| checks.push(Check { name, failure });

        push(
            "nonempty-generators",
            self.generators.is_empty().then(|| "no generators".to_string()),
        );
        let mut seen = BTreeMap::new();
        let dup = self.generators.iter().find(|g| seen.insert(g.as_str(), ()).is_some());
        push("distinct-generators", dup.map(|g| format!("duplicate generator `{g}`")));
        push(
            "generator-count",
            (self.generators.len() > 100).then(|| "at most 100 generators supported".to_string()),
        );

        let unknown = self.relations.iter().position(|(l, r)| !self.word_in_range(l) || !self.word_in_range(r));
        push("known-letters", unknown.map(|i| format!("relation {i} uses an unknown letter")));

        let unequal = self
            .relations
            .iter()
            .position(|(l, r)| l.len() != r.len() || l.is_empty());
        push(
            "homogeneous",
            unequal.map(|i| format!("relation {i} has unequal lengths or an empty side")),
        );

        let free = matches!(self.kind, PresentationKind::FreeMonoid | PresentationKind::FreeGroup);
        push(
            "free-has-no-relations",
            (free && !self.relations.is_empty()).then(|| "free presentation carries relations".to_string()),
        );

        let artin_failure = match (self.kind, &self.coxeter) {
            (PresentationKind::Artin, None) => Some("artin presentation without Coxeter matrix".to_string()),
            (PresentationKind::Artin, Some(m)) => match artin_presentation(m, &self.generators) {
                Err(e) => Some(e.to_string()),
                Ok(expected) if expected.relations != self.relations => {
                    Some("relations differ from the Coxeter matrix".to_string())
                }
                Ok(_) => None,
            },
            (_, Some(_)) => Some("Coxeter matrix on a non-artin presentation".to_string()),
            (_, None) => None,
        };
        push("artin-relations", artin_failure);
        ValidationReport { checks }
    }

    /// Canonical JSON: sorted keys, no insignificant whitespace.
    pub fn to_canonical_json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), json!(self.kind.as_str()));
        obj.insert("generators".into(), json!(self.generators));
        match &self.coxeter {
            Some(m) if self.kind == PresentationKind::Artin => {
                obj.insert("coxeter".into(), json!(m.to_rows()));
            }
            _ => {
                let rels: Vec<Value> = self
                    .relations
                    .iter()
                    .map(|(l, r)| json!([self.render_word(l), self.render_word(r)]))
                    .collect();
                obj.insert("relations".into(), Value::Array(rels));
            }
        }
        // serde_json's default map is ordered by key
        Value::Object(obj).to_string()
    }

    /// Parses the JSON presentation format.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing `kind`".into()))
            .and_then(PresentationKind::parse)?;
        let generators: Vec<String> = match v.get("generators") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|g| g.as_str().map(str::to_string).ok_or_else(|| Error::Parse("generator must be a string".into())))
                .collect::<Result<_>>()?,
            _ => return Err(Error::Parse("missing `generators`".into())),
        };
        if let Some(cox) = v.get("coxeter") {
            let rows: Vec<Vec<u32>> =
                serde_json::from_value(cox.clone()).map_err(|e| Error::Parse(format!("coxeter: {e}")))?;
            let m = CoxeterMatrix::from_rows(&rows)?;
            if kind != PresentationKind::Artin {
                return Err(Error::Parse("`coxeter` given for a non-artin kind".into()));
            }
            return artin_presentation(&m, &generators);
        }
        if kind == PresentationKind::Artin {
            return Err(Error::Parse("artin presentation requires `coxeter`".into()));
        }
        let mut p = Presentation { kind, generators, relations: Vec::new(), coxeter: None };
        if let Some(rels) = v.get("relations") {
            let rels = rels.as_array().ok_or_else(|| Error::Parse("`relations` must be a list".into()))?;
            for r in rels {
                let pair = r.as_array().filter(|a| a.len() == 2).ok_or_else(|| Error::Parse("relation must be a pair".into()))?;
                let side = |x: &Value| -> Result<Word> {
                    match x {
                        Value::String(s) => p.parse_word(s),
                        Value::Array(a) => {
                            let joined: Vec<&str> = a.iter().filter_map(Value::as_str).collect();
                            p.parse_word(&joined.join(" "))
                        }
                        _ => Err(Error::Parse("word must be a string or list".into())),
                    }
                };
                let l = side(&pair[0])?;
                let r = side(&pair[1])?;
                p.relations.push((l, r));
            }
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: &Presentation, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    #[test]
    fn artin_a2_relation() {
        let m = CoxeterMatrix::from_rows(&[vec![1, 3], vec![3, 1]]).unwrap();
        let p = artin_presentation(&m, &["a".into(), "b".into()]).unwrap();
        assert_eq!(p.relations, vec![(w(&p, "aba"), w(&p, "bab"))]);
    }

    #[test]
    fn artin_rank_one_has_no_relations() {
        let m = CoxeterMatrix::from_rows(&[vec![1]]).unwrap();
        let p = artin_presentation(&m, &["a".into()]).unwrap();
        assert!(p.relations.is_empty());
    }

    #[test]
    fn artin_b2_relation() {
        let m = CoxeterMatrix::from_rows(&[vec![1, 4], vec![4, 1]]).unwrap();
        let p = artin_presentation(&m, &["a".into(), "b".into()]).unwrap();
        assert_eq!(p.relations, vec![(w(&p, "abab"), w(&p, "baba"))]);
    }

    #[test]
    fn artin_size_mismatch() {
        let m = CoxeterMatrix::catalog("A3").unwrap();
        assert_eq!(
            artin_presentation(&m, &["a".into()]),
            Err(Error::SizeMismatch { names: 1, size: 3 })
        );
    }

    #[test]
    fn artin_skips_infinite_bonds_and_orders_pairs() {
        let m = CoxeterMatrix::from_rows(&[vec![1, 0, 2], vec![0, 1, 3], vec![2, 3, 1]]).unwrap();
        let p = Presentation::artin(&m);
        let got: Vec<_> = p.relations.iter().map(|(l, r)| (p.render_word(l), p.render_word(r))).collect();
        assert_eq!(got, vec![("ac".into(), "ca".into()), ("bcb".into(), "cbc".into())]);
        assert_eq!(Presentation::artin(&m), p);
    }

    #[test]
    fn validation_outcomes() {
        assert!(Presentation::catalog("A2").unwrap().validate().passed());
        let bad = Presentation::homogeneous(&["a", "b"], &[("ab", "a")]).unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert_eq!(report.failures().next().unwrap().name, "homogeneous");
        assert_eq!(
            Presentation::homogeneous(&["a", "b"], &[("ac", "ca")]),
            Err(Error::UnknownGenerator("c".into()))
        );
        let mut raw = Presentation::free_monoid(2);
        raw.kind = PresentationKind::HomogeneousMonoid;
        raw.relations.push((Word(vec![0, 2]), Word(vec![2, 0])));
        assert_eq!(raw.validate().failures().next().unwrap().name, "known-letters");
    }

    #[test]
    fn coxeter_matrix_checks() {
        assert!(CoxeterMatrix::from_rows(&[vec![1, 3], vec![4, 1]]).is_err());
        assert!(CoxeterMatrix::from_rows(&[vec![2, 3], vec![3, 1]]).is_err());
        assert!(CoxeterMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).is_err());
        let inf = CoxeterMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(inf.get(0, 1), None);
        assert_eq!(inf.to_rows(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn json_round_trip_is_canonical() {
        for name in ["A2", "B3", "Free:2", "FreeGroup:2"] {
            let p = Presentation::catalog(name).unwrap();
            let text = p.to_canonical_json();
            let back = Presentation::from_json(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(back.to_canonical_json(), text);
        }
        let p = Presentation::from_json(r#"{ "relations": [["ab","ba"]], "generators": ["a","b"], "kind": "homogeneous-monoid" }"#)
            .unwrap();
        assert_eq!(p.to_canonical_json(), r#"{"generators":["a","b"],"kind":"homogeneous-monoid","relations":[["ab","ba"]]}"#);
    }

    #[test]
    fn catalog_shapes() {
        let e8 = CoxeterMatrix::catalog("E8").unwrap();
        assert_eq!(e8.size(), 8);
        assert_eq!(e8.get(1, 3), Some(3));
        let i7 = CoxeterMatrix::catalog("I2:7").unwrap();
        assert_eq!(i7.get(0, 1), Some(7));
        assert!(CoxeterMatrix::catalog("D3").is_err());
        assert!(CoxeterMatrix::catalog("Q2").is_err());
    }
}

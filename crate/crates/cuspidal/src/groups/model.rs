use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::word::{free_reduce, Word};

/// Group family with enough structure to compute normal forms.
#[derive(Clone, Debug)]
pub enum Family {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    FreeProduct { factors: Vec<Family> },
    External(ExternalModel),
}

impl Family {
    pub fn generator_count(&self) -> usize {
        match self {
            Family::Free { rank } | Family::FreeAbelian { rank } => *rank,
            Family::FreeProduct { factors } => factors.iter().map(Family::generator_count).sum(),
            Family::External(m) => m.perms.len(),
        }
    }
}

/// Finite group model: vertices acted on by generator permutations.
///
/// Elements are identified with the orbit of `identity`, so the action
/// must reach every vertex from there, and words acting identically are
/// equal. Canonical words are shortlex-least.
#[derive(Clone, Debug)]
pub struct ExternalModel {
    pub n: usize,
    pub identity: u32,
    perms: Vec<Vec<u32>>,
    inv_perms: Vec<Vec<u32>>,
    canonical: Vec<Vec<i16>>,
}

impl ExternalModel {
    pub fn new(n: usize, identity: u32, perms: Vec<Vec<u32>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("external model needs at least one vertex"));
        }
        if (identity as usize) >= n {
            return Err(Error::input("external model identity out of range"));
        }
        let mut inv_perms = Vec::with_capacity(perms.len());
        for (gi, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::input(format!(
                    "generator {gi}: permutation has length {} but the model has {n} vertices",
                    p.len()
                )));
            }
            let mut inv = vec![u32::MAX; n];
            for (src, &dst) in p.iter().enumerate() {
                if (dst as usize) >= n {
                    return Err(Error::input(format!(
                        "generator {gi}: image {dst} out of range"
                    )));
                }
                if inv[dst as usize] != u32::MAX {
                    return Err(Error::input(format!(
                        "generator {gi}: not a permutation (vertex {dst} hit twice)"
                    )));
                }
                inv[dst as usize] = src as u32;
            }
            inv_perms.push(inv);
        }
        let canonical = shortlex_words(n, identity, &perms, &inv_perms)?;
        Ok(ExternalModel { n, identity, perms, inv_perms, canonical })
    }

    fn apply(&self, v: u32, letter: i16) -> u32 {
        let g = Word::letter_gen(letter);
        if letter > 0 {
            self.perms[g][v as usize]
        } else {
            self.inv_perms[g][v as usize]
        }
    }

    /// Evaluates letters whose generator indices start at `base`.
    pub(crate) fn evaluate_at(&self, base: usize, letters: &[i16]) -> u32 {
        letters.iter().fold(self.identity, |v, &l| {
            let local = (Word::letter_gen(l) - base) as i16 + 1;
            self.apply(v, local * l.signum())
        })
    }

    pub(crate) fn canonical_at(&self, base: usize, v: u32) -> Vec<i16> {
        self.canonical[v as usize]
            .iter()
            .map(|&l| if l > 0 { l + base as i16 } else { l - base as i16 })
            .collect()
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.n
    }

    fn neighbor_sets(&self) -> Vec<Vec<u32>> {
        let mut nbrs = vec![Vec::new(); self.n];
        for v in 0..self.n as u32 {
            for g in 0..self.perms.len() {
                for table in [&self.perms[g], &self.inv_perms[g]] {
                    let to = table[v as usize];
                    if to != v && !nbrs[v as usize].contains(&to) {
                        nbrs[v as usize].push(to);
                    }
                }
            }
        }
        nbrs
    }

    /// BFS distances over the orbit graph (simple, undirected by perm
    /// symmetry of generators with their inverses).
    pub(crate) fn bfs_orbit(&self, start: u32) -> Vec<u32> {
        let nbrs = self.neighbor_sets();
        let mut dist = vec![u32::MAX; self.n];
        dist[start as usize] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &to in &nbrs[v as usize] {
                if dist[to as usize] == u32::MAX {
                    dist[to as usize] = dist[v as usize] + 1;
                    queue.push_back(to);
                }
            }
        }
        dist
    }

    /// Number of geodesic paths identity -> target in the orbit graph.
    pub(crate) fn count_orbit_geodesics(&self, target: u32) -> u64 {
        let nbrs = self.neighbor_sets();
        let dist = self.bfs_orbit(self.identity);
        let mut order: Vec<u32> = (0..self.n as u32)
            .filter(|&v| dist[v as usize] != u32::MAX)
            .collect();
        order.sort_by_key(|&v| dist[v as usize]);
        let mut count = vec![0u64; self.n];
        count[self.identity as usize] = 1;
        for &v in &order {
            if v == self.identity {
                continue;
            }
            let mut acc: u64 = 0;
            for &u in &nbrs[v as usize] {
                if dist[u as usize] + 1 == dist[v as usize] {
                    acc = acc.saturating_add(count[u as usize]);
                }
            }
            count[v as usize] = acc;
        }
        count[target as usize]
    }
}

/// Shortlex-least word reaching each vertex from the identity, by BFS
/// trying letters in the order +1, -1, +2, -2, ...
fn shortlex_words(
    n: usize,
    identity: u32,
    perms: &[Vec<u32>],
    inv_perms: &[Vec<u32>],
) -> Result<Vec<Vec<i16>>> {
    let mut words: Vec<Option<Vec<i16>>> = vec![None; n];
    words[identity as usize] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(identity);
    while let Some(v) = queue.pop_front() {
        let base = words[v as usize].clone().unwrap();
        for g in 0..perms.len() {
            for (letter, table) in [((g as i16) + 1, &perms[g]), (-(g as i16) - 1, &inv_perms[g])] {
                let to = table[v as usize];
                if words[to as usize].is_none() {
                    let mut w = base.clone();
                    w.push(letter);
                    words[to as usize] = Some(w);
                    queue.push_back(to);
                }
            }
        }
    }
    words
        .into_iter()
        .enumerate()
        .map(|(v, w)| {
            w.ok_or_else(|| {
                Error::input(format!("external model vertex {v} unreachable from identity"))
            })
        })
        .collect()
}

/// A group with named generators and a computable normal form.
#[derive(Clone, Debug)]
pub struct GroupModel {
    family: Family,
    names: Vec<String>,
    name_index: HashMap<String, usize>,
}

impl GroupModel {
    pub fn new(family: Family, names: Option<Vec<String>>) -> Result<Self> {
        let count = family.generator_count();
        let names = match names {
            Some(ns) => {
                if ns.len() != count {
                    return Err(Error::input(format!(
                        "expected {count} generator names, got {}",
                        ns.len()
                    )));
                }
                ns
            }
            None => default_names(count),
        };
        let mut name_index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(|c: char| c.is_whitespace() || c == '^' || c == '*') {
                return Err(Error::input(format!("bad generator name {n:?}")));
            }
            if name_index.insert(n.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate generator name {n:?}")));
            }
        }
        Ok(GroupModel { family, names, name_index })
    }

    pub fn free(rank: usize) -> Self {
        GroupModel::new(Family::Free { rank }, None).unwrap()
    }

    pub fn free_abelian(rank: usize) -> Self {
        GroupModel::new(Family::FreeAbelian { rank }, None).unwrap()
    }

    pub fn free_product(factors: Vec<Family>) -> Self {
        GroupModel::new(Family::FreeProduct { factors }, None).unwrap()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    /// Canonical form of `w`. Two words are equal in the group iff their
    /// normal forms have identical letters.
    pub fn normal_form(&self, w: &Word) -> Word {
        Word::from_trusted(nf(&self.family, 0, w.letters()))
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Word {
        self.normal_form(&a.concat(b))
    }

    pub fn inverse(&self, a: &Word) -> Word {
        self.normal_form(&a.inverse())
    }

    pub fn is_identity(&self, a: &Word) -> bool {
        self.normal_form(a).is_empty()
    }

    /// Word length of the normal form: the word metric in the standard
    /// generators for the built-in families, graph distance from the
    /// identity for external models.
    pub fn word_length(&self, a: &Word) -> usize {
        self.normal_form(a).len()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*') {
            if token.is_empty() || token == "e" || token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e.parse().map_err(|_| {
                        Error::input(format!("bad exponent in token {token:?}"))
                    })?;
                    (n, exp)
                }
                None => (token, 1),
            };
            let &idx = self
                .name_index
                .get(name)
                .ok_or_else(|| Error::input(format!("unknown generator {name:?}")))?;
            let letter = (idx as i16 + 1) * if exp < 0 { -1 } else { 1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(Word::from_trusted(letters))
    }

    /// Render with power notation: `a^3 b^-2`. The identity prints as `e`.
    pub fn display_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".to_owned();
        }
        let mut out = String::new();
        let mut i = 0;
        let ls = w.letters();
        while i < ls.len() {
            let l = ls[i];
            let mut j = i;
            while j < ls.len() && ls[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if l > 0 { run } else { -run };
            if !out.is_empty() {
                out.push(' ');
            }
            let name = &self.names[Word::letter_gen(l)];
            if exp == 1 {
                out.push_str(name);
            } else {
                let _ = write!(out, "{name}^{exp}");
            }
            i = j;
        }
        out
    }
}

fn default_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

/// Normal form for the letters of a word, where this family's generators
/// occupy global indices `[base, base + generator_count)`.
fn nf(family: &Family, base: usize, letters: &[i16]) -> Vec<i16> {
    match family {
        Family::Free { .. } => free_reduce(letters),
        Family::FreeAbelian { rank } => {
            let mut exps = vec![0i64; *rank];
            for &l in letters {
                let g = Word::letter_gen(l) - base;
                exps[g] += if l > 0 { 1 } else { -1 };
            }
            let mut out = Vec::new();
            for (g, &e) in exps.iter().enumerate() {
                let letter = ((base + g) as i16 + 1) * if e < 0 { -1 } else { 1 };
                for _ in 0..e.unsigned_abs() {
                    out.push(letter);
                }
            }
            out
        }
        Family::FreeProduct { factors } => {
            let mut offsets = Vec::with_capacity(factors.len());
            let mut acc = base;
            for f in factors {
                offsets.push(acc);
                acc += f.generator_count();
            }
            let factor_of = |letter: i16| -> usize {
                let g = Word::letter_gen(letter);
                match offsets.binary_search(&g) {
                    Ok(i) => i,
                    Err(i) => i - 1,
                }
            };
            // Stack of normalized syllables; adjacent entries always lie in
            // distinct factors. A syllable only mutates while on top.
            let mut stack: Vec<(usize, Vec<i16>)> = Vec::new();
            for &l in letters {
                let f = factor_of(l);
                match stack.last_mut() {
                    Some((tf, syl)) if *tf == f => {
                        syl.push(l);
                        let reduced = nf(&factors[f], offsets[f], syl);
                        if reduced.is_empty() {
                            stack.pop();
                        } else {
                            *syl = reduced;
                        }
                    }
                    _ => {
                        let reduced = nf(&factors[f], offsets[f], &[l]);
                        if !reduced.is_empty() {
                            stack.push((f, reduced));
                        }
                    }
                }
            }
            stack.into_iter().flat_map(|(_, syl)| syl).collect()
        }
        Family::External(m) => m.canonical_at(base, m.evaluate_at(base, letters)),
    }
}

/// Splits a free-product normal form into `(factor, syllable letters)` runs.
pub(crate) fn syllables(factors: &[Family], base: usize, letters: &[i16]) -> Vec<(usize, Vec<i16>)> {
    let mut offsets = Vec::with_capacity(factors.len());
    let mut acc = base;
    for f in factors {
        offsets.push(acc);
        acc += f.generator_count();
    }
    let factor_of = |letter: i16| -> usize {
        let g = Word::letter_gen(letter);
        match offsets.binary_search(&g) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    };
    let mut out: Vec<(usize, Vec<i16>)> = Vec::new();
    for &l in letters {
        let f = factor_of(l);
        match out.last_mut() {
            Some((tf, syl)) if *tf == f => syl.push(l),
            _ => out.push((f, vec![l])),
        }
    }
    out
}

pub(crate) fn factor_offsets(factors: &[Family], base: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(factors.len());
    let mut acc = base;
    for f in factors {
        offsets.push(acc);
        acc += f.generator_count();
    }
    offsets
}

// ---------------------------------------------------------------------------
// On-disk group description.

/// JSON shape of a group family, e.g.
/// `{"family":"free_product","factors":[{"family":"free","rank":1},{"family":"free_abelian","rank":2}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    FreeProduct { factors: Vec<FamilySpec> },
    External(ExternalSpec),
}

/// Permutation presentation of a finite model.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExternalSpec {
    pub vertices: usize,
    #[serde(default)]
    pub identity: u32,
    pub permutations: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubgroupSpecFile {
    pub name: String,
    pub generators: Vec<String>,
}

/// Top-level group description file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupSpecFile {
    #[serde(flatten)]
    pub family: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subgroups: Vec<SubgroupSpecFile>,
}

/// A named peripheral subgroup with its generator words.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    pub name: String,
    pub generators: Vec<Word>,
}

fn family_from_spec(spec: &FamilySpec) -> Result<Family> {
    Ok(match spec {
        FamilySpec::Free { rank } => Family::Free { rank: *rank },
        FamilySpec::FreeAbelian { rank } => Family::FreeAbelian { rank: *rank },
        FamilySpec::FreeProduct { factors } => Family::FreeProduct {
            factors: factors.iter().map(family_from_spec).collect::<Result<_>>()?,
        },
        FamilySpec::External(e) => Family::External(ExternalModel::new(
            e.vertices,
            e.identity,
            e.permutations.clone(),
        )?),
    })
}

impl GroupSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Materializes the model and its named subgroups.
    pub fn build(&self) -> Result<(GroupModel, Vec<SubgroupSpec>)> {
        let family = family_from_spec(&self.family)?;
        let model = GroupModel::new(family, self.generator_names.clone())?;
        let mut subs = Vec::with_capacity(self.subgroups.len());
        let mut seen = std::collections::HashSet::new();
        for s in &self.subgroups {
            if !seen.insert(s.name.clone()) {
                return Err(Error::input(format!("duplicate subgroup name {:?}", s.name)));
            }
            let generators = s
                .generators
                .iter()
                .map(|g| model.parse_word(g))
                .collect::<Result<Vec<_>>>()?;
            subs.push(SubgroupSpec { name: s.name.clone(), generators });
        }
        Ok((model, subs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: &GroupModel, s: &str) -> Word {
        m.parse_word(s).unwrap()
    }

    #[test]
    fn free_normal_form_reduces() {
        let m = GroupModel::free(2);
        let x = w(&m, "a b b^-1 a a^-1");
        assert_eq!(m.display_word(&m.normal_form(&x)), "a");
    }

    #[test]
    fn abelian_normal_form_sorts() {
        let m = GroupModel::free_abelian(2);
        let x = w(&m, "b a b a^-1 a b^-1");
        assert_eq!(m.display_word(&m.normal_form(&x)), "a b");
        assert_eq!(m.word_length(&w(&m, "a^-3 b^2")), 5);
    }

    #[test]
    fn free_product_syllable_collapse() {
        // Z * Z^2 with a | b,c: a b c b^-1 a = a c a.
        let m = GroupModel::free_product(vec![
            Family::Free { rank: 1 },
            Family::FreeAbelian { rank: 2 },
        ]);
        let x = w(&m, "a b c b^-1 a");
        assert_eq!(m.display_word(&m.normal_form(&x)), "a c a");
        // Inner cancellation joins outer syllables: a b b^-1 a = a^2.
        let y = w(&m, "a b b^-1 a");
        assert_eq!(m.display_word(&m.normal_form(&y)), "a^2");
    }

    #[test]
    fn nested_free_product_normal_form() {
        // (Z * Z) * Z^1: generators a, b | c.
        let m = GroupModel::free_product(vec![
            Family::FreeProduct {
                factors: vec![Family::Free { rank: 1 }, Family::Free { rank: 1 }],
            },
            Family::Free { rank: 1 },
        ]);
        let x = w(&m, "a b^-1 c c^-1 b a");
        assert_eq!(m.display_word(&m.normal_form(&x)), "a^2");
    }

    #[test]
    fn external_model_roundtrip() {
        // Cyclic group of order 4 as a permutation model.
        let m = GroupModel::new(
            Family::External(ExternalModel::new(4, 0, vec![vec![1, 2, 3, 0]]).unwrap()),
            None,
        )
        .unwrap();
        assert_eq!(m.word_length(&w(&m, "a^3")), 1); // a^3 = a^-1
        assert!(m.is_identity(&w(&m, "a^4")));
        assert_eq!(m.display_word(&m.normal_form(&w(&m, "a^2"))), "a^2");
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let m = GroupModel::free(3);
        let x = w(&m, "a^2 b^-3 c");
        assert_eq!(m.display_word(&x), "a^2 b^-3 c");
        assert_eq!(m.display_word(&Word::identity()), "e");
        assert!(m.parse_word("q").is_err());
    }

    #[test]
    fn spec_file_parses_free_product_with_subgroups() {
        let text = r#"{
            "family": "free_product",
            "factors": [{"family": "free", "rank": 1}, {"family": "free_abelian", "rank": 2}],
            "subgroups": [{"name": "H1", "generators": ["b", "c"]}]
        }"#;
        let spec = GroupSpecFile::parse(text).unwrap();
        let (model, subs) = spec.build().unwrap();
        assert_eq!(model.generator_count(), 3);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].generators.len(), 2);
        assert_eq!(model.display_word(&subs[0].generators[1]), "c");
    }

    #[test]
    fn custom_names_respected() {
        let m = GroupModel::new(
            Family::FreeAbelian { rank: 2 },
            Some(vec!["b".into(), "c".into()]),
        )
        .unwrap();
        assert_eq!(m.display_word(&m.normal_form(&w(&m, "c b"))), "b c");
    }
}

//! Coset bookkeeping for finitely generated subgroups.
//!
//! Each backend computes a canonical key for the left coset gH: two
//! elements get equal keys iff they lie in the same coset, and g is in H
//! iff its key equals the identity's. Keys are exact, not sampled.
//!
//! Backends: Stallings-folded automata for subgroups of free groups,
//! integer row reduction for sublattices of free abelian groups, and a
//! single-factor reduction for free products whose subgroup lives inside
//! one factor. External models would need a membership table and are
//! reported as unsupported.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::model::{factor_offsets, syllables, Family};
use super::word::Word;

/// Canonical left-coset key. Opaque outside this module except for
/// equality and hashing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CosetKey {
    Element(Vec<i16>),
    Folded { state: u32, rest: Vec<i16> },
    Residue(Vec<i64>),
    Syllabic { prefix: Vec<i16>, inner: Box<CosetKey> },
}

#[derive(Clone, Debug)]
pub(crate) enum Backend {
    /// The trivial subgroup: every element is its own coset.
    Trivial,
    Stallings(StallingsAutomaton),
    Lattice(LatticeIndex),
    /// Subgroup contained in one free-product factor. `span` is the
    /// global generator index range of that factor.
    Syllable {
        span: (usize, usize),
        offset: usize,
        inner: Box<Backend>,
    },
}

impl Backend {
    /// Key of the left coset of the element with normal-form `letters`.
    /// Letters use global indices relative to the model the backend was
    /// built for; `base` is this backend's own letter offset.
    pub(crate) fn coset_key(&self, base: usize, letters: &[i16]) -> CosetKey {
        match self {
            Backend::Trivial => CosetKey::Element(letters.to_vec()),
            Backend::Stallings(aut) => {
                let inv: Vec<i16> = letters
                    .iter()
                    .rev()
                    .map(|&l| {
                        let local = (Word::letter_gen(l) - base) as i16 + 1;
                        -(local * l.signum())
                    })
                    .collect();
                let (state, rest) = aut.trace(&inv);
                CosetKey::Folded { state, rest }
            }
            Backend::Lattice(lat) => {
                let mut v = vec![0i64; lat.rank];
                for &l in letters {
                    v[Word::letter_gen(l) - base] += if l > 0 { 1 } else { -1 };
                }
                CosetKey::Residue(lat.residue(v))
            }
            Backend::Syllable { span, offset, inner, .. } => {
                let in_span =
                    |l: i16| (span.0..span.1).contains(&Word::letter_gen(l));
                let cut = letters.len()
                    - letters.iter().rev().take_while(|&&l| in_span(l)).count();
                let (prefix, tail) = letters.split_at(cut);
                CosetKey::Syllabic {
                    prefix: prefix.to_vec(),
                    inner: Box::new(inner.coset_key(*offset, tail)),
                }
            }
        }
    }
}

/// Builds the coset backend for the subgroup of `family` generated by
/// `gens` (normal-form letter vectors, global indices starting at `base`).
pub(crate) fn build_backend(family: &Family, base: usize, gens: &[Vec<i16>]) -> Result<Backend> {
    let live: Vec<&Vec<i16>> = gens.iter().filter(|g| !g.is_empty()).collect();
    if live.is_empty() {
        return Ok(Backend::Trivial);
    }
    match family {
        Family::Free { .. } => {
            let local: Vec<Vec<i16>> = live
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&l| {
                            let loc = (Word::letter_gen(l) - base) as i16 + 1;
                            loc * l.signum()
                        })
                        .collect()
                })
                .collect();
            Ok(Backend::Stallings(StallingsAutomaton::build(&local)))
        }
        Family::FreeAbelian { rank } => {
            let rows: Vec<Vec<i64>> = live
                .iter()
                .map(|g| {
                    let mut v = vec![0i64; *rank];
                    for &l in g.iter() {
                        v[Word::letter_gen(l) - base] += if l > 0 { 1 } else { -1 };
                    }
                    v
                })
                .collect();
            Ok(Backend::Lattice(LatticeIndex::build(*rank, rows)))
        }
        Family::FreeProduct { factors } => {
            let offsets = factor_offsets(factors, base);
            let mut factor_idx: Option<usize> = None;
            for g in &live {
                let sylls = syllables(factors, base, g);
                if sylls.len() != 1 {
                    return Err(Error::unsupported(
                        "subgroup generators that mix free-product factors",
                    ));
                }
                let f = sylls[0].0;
                if *factor_idx.get_or_insert(f) != f {
                    return Err(Error::unsupported(
                        "subgroup generators spread over several free-product factors",
                    ));
                }
            }
            let f = factor_idx.unwrap();
            let offset = offsets[f];
            let span = (offset, offset + factors[f].generator_count());
            let inner_gens: Vec<Vec<i16>> = live.iter().map(|g| (*g).clone()).collect();
            let inner = build_backend(&factors[f], offset, &inner_gens)?;
            Ok(Backend::Syllable { span, offset, inner: Box::new(inner) })
        }
        Family::External(_) => Err(Error::unsupported(
            "subgroup membership in external models",
        )),
    }
}

// ---------------------------------------------------------------------------
// Stallings folding.

/// Folded core graph of a subgroup of a free group. States are dense ids,
/// transitions deterministic; `trace` runs a reduced word from the root
/// and reports where it gets stuck.
#[derive(Clone, Debug)]
pub(crate) struct StallingsAutomaton {
    trans: Vec<HashMap<i16, u32>>,
    root: u32,
}

impl StallingsAutomaton {
    fn build(gens: &[Vec<i16>]) -> Self {
        // Wedge of loops at the root, one per generator word. Edge lists
        // may hold several edges per label until folding finishes.
        let mut edges: Vec<Vec<(i16, u32)>> = vec![Vec::new()];
        let root = 0u32;
        for g in gens {
            let mut cur = root;
            for (i, &l) in g.iter().enumerate() {
                let next = if i + 1 == g.len() {
                    root
                } else {
                    edges.push(Vec::new());
                    (edges.len() - 1) as u32
                };
                edges[cur as usize].push((l, next));
                edges[next as usize].push((-l, cur));
                cur = next;
            }
        }
        // Fold: whenever a state has two distinct targets on one label,
        // merge the targets. Union-find with repeated sweeps; sizes here
        // are tiny so the quadratic worst case is irrelevant.
        let mut parent: Vec<u32> = (0..edges.len() as u32).collect();
        fn find(parent: &mut Vec<u32>, mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        loop {
            let mut changed = false;
            let mut merged: Vec<HashMap<i16, Vec<u32>>> = vec![HashMap::new(); edges.len()];
            for (s, es) in edges.iter().enumerate() {
                let rs = find(&mut parent, s as u32);
                for &(l, t) in es {
                    let rt = find(&mut parent, t);
                    let slot = merged[rs as usize].entry(l).or_default();
                    if !slot.contains(&rt) {
                        slot.push(rt);
                    }
                }
            }
            for es in &merged {
                for targets in es.values() {
                    for pair in targets.windows(2) {
                        let (a, b) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
                        if a != b {
                            parent[a.max(b) as usize] = a.min(b);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                // Rebuild deterministic transitions over representatives.
                let mut dense: HashMap<u32, u32> = HashMap::new();
                let mut order: Vec<u32> = Vec::new();
                for s in 0..edges.len() as u32 {
                    let r = find(&mut parent, s);
                    if !dense.contains_key(&r) {
                        dense.insert(r, order.len() as u32);
                        order.push(r);
                    }
                }
                let mut out: Vec<HashMap<i16, u32>> = vec![HashMap::new(); order.len()];
                for (s, es) in edges.iter().enumerate() {
                    let rs = dense[&find(&mut parent, s as u32)];
                    for &(l, t) in es {
                        let rt = dense[&find(&mut parent, t)];
                        out[rs as usize].insert(l, rt);
                    }
                }
                let new_root = dense[&find(&mut parent, root)];
                return StallingsAutomaton { trans: out, root: new_root };
            }
        }
    }

    /// Runs a freely reduced word from the root, returning the state where
    /// reading stops and the unread suffix.
    fn trace(&self, letters: &[i16]) -> (u32, Vec<i16>) {
        let mut state = self.root;
        for (i, &l) in letters.iter().enumerate() {
            match self.trans[state as usize].get(&l) {
                Some(&next) => state = next,
                None => return (state, letters[i..].to_vec()),
            }
        }
        (state, Vec::new())
    }
}

// ---------------------------------------------------------------------------
// Integer lattices.

/// Row-echelon basis of a sublattice of Z^rank, supporting canonical
/// residues modulo the lattice.
#[derive(Clone, Debug)]
pub(crate) struct LatticeIndex {
    rank: usize,
    /// Echelon rows, ascending pivot column, positive pivots.
    rows: Vec<(usize, Vec<i64>)>,
}

impl LatticeIndex {
    fn build(rank: usize, mut work: Vec<Vec<i64>>) -> Self {
        let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
        for col in 0..rank {
            loop {
                let mut idx: Vec<usize> =
                    (0..work.len()).filter(|&i| work[i][col] != 0).collect();
                if idx.is_empty() {
                    break;
                }
                if idx.len() == 1 {
                    let mut row = work.swap_remove(idx[0]);
                    if row[col] < 0 {
                        for x in row.iter_mut() {
                            *x = -*x;
                        }
                    }
                    rows.push((col, row));
                    break;
                }
                // Euclidean step: reduce everyone by the smallest pivot.
                idx.sort_by_key(|&i| work[i][col].unsigned_abs());
                let small = work[idx[0]].clone();
                for &i in &idx[1..] {
                    let q = work[i][col].div_euclid(small[col]);
                    for c in 0..rank {
                        work[i][c] -= q * small[c];
                    }
                }
            }
            work.retain(|r| r.iter().any(|&x| x != 0));
        }
        LatticeIndex { rank, rows }
    }

    /// Canonical representative of `v` modulo the lattice: pivot
    /// coordinates land in `[0, pivot)`, processed in column order.
    fn residue(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (col, row) in &self.rows {
            let q = v[*col].div_euclid(row[*col]);
            if q != 0 {
                for c in *col..self.rank {
                    v[c] -= q * row[c];
                }
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::model::GroupModel;

    fn backend_for(model: &GroupModel, gens: &[&str]) -> Backend {
        let words: Vec<Vec<i16>> = gens
            .iter()
            .map(|g| model.normal_form(&model.parse_word(g).unwrap()).letters().to_vec())
            .collect();
        build_backend(model.family(), 0, &words).unwrap()
    }

    fn key(model: &GroupModel, b: &Backend, w: &str) -> CosetKey {
        let nf = model.normal_form(&model.parse_word(w).unwrap());
        b.coset_key(0, nf.letters())
    }

    #[test]
    fn free_cyclic_subgroup_cosets() {
        let m = GroupModel::free(2);
        let b = backend_for(&m, &["a"]);
        let id = key(&m, &b, "e");
        assert_eq!(key(&m, &b, "a^5"), id);
        assert_eq!(key(&m, &b, "a^-3"), id);
        assert_ne!(key(&m, &b, "b"), id);
        // gH depends only on g modulo right a-runs: b a^k all share a key.
        assert_eq!(key(&m, &b, "b a"), key(&m, &b, "b a^-7"));
        assert_ne!(key(&m, &b, "b a"), key(&m, &b, "a b"));
    }

    #[test]
    fn free_nontrivial_folding() {
        // H = <a b, a^2> in F2. a b a^-1... known: b a^-1 = (ab)^-1 a^2 in H?
        // (ab)^-1 a^2 = b^-1 a^-1 a^2 = b^-1 a. Check both directions.
        let m = GroupModel::free(2);
        let b = backend_for(&m, &["a b", "a^2"]);
        let id = key(&m, &b, "e");
        assert_eq!(key(&m, &b, "a b"), id);
        assert_eq!(key(&m, &b, "a^2"), id);
        assert_eq!(key(&m, &b, "b^-1 a"), id);
        assert_eq!(key(&m, &b, "a b a^2"), id);
        assert_ne!(key(&m, &b, "a"), id);
        assert_ne!(key(&m, &b, "b a"), id);
    }

    #[test]
    fn lattice_residues() {
        // H = <(2,0),(0,3)> in Z^2: 6 cosets.
        let m = GroupModel::free_abelian(2);
        let b = backend_for(&m, &["a^2", "b^3"]);
        let mut keys = std::collections::HashSet::new();
        for x in -4i32..=4 {
            for y in -4i32..=4 {
                keys.insert(key(&m, &b, &format!("a^{x} b^{y}")));
            }
        }
        assert_eq!(keys.len(), 6);
        assert_eq!(key(&m, &b, "a^2 b^-3"), key(&m, &b, "e"));
    }

    #[test]
    fn lattice_skew_generators() {
        // <(2,1),(0,5)>: index 10; (2,1)+(0,5) and (4,2) both inside.
        let m = GroupModel::free_abelian(2);
        let b = backend_for(&m, &["a^2 b", "b^5"]);
        let id = key(&m, &b, "e");
        assert_eq!(key(&m, &b, "a^2 b^6"), id);
        assert_eq!(key(&m, &b, "a^4 b^2"), id);
        assert_ne!(key(&m, &b, "a^2"), id);
        let mut keys = std::collections::HashSet::new();
        for x in 0i32..10 {
            for y in 0i32..10 {
                keys.insert(key(&m, &b, &format!("a^{x} b^{y}")));
            }
        }
        assert_eq!(keys.len(), 10);
    }

    #[test]
    fn product_single_factor_subgroup() {
        // Z * Z^2, H = <b, c> = the Z^2 factor.
        let m = GroupModel::free_product(vec![
            Family::Free { rank: 1 },
            Family::FreeAbelian { rank: 2 },
        ]);
        let b = backend_for(&m, &["b", "c"]);
        let id = key(&m, &b, "e");
        assert_eq!(key(&m, &b, "b^2 c^-1"), id);
        assert_ne!(key(&m, &b, "a"), id);
        // a b^j all lie in the coset a H.
        assert_eq!(key(&m, &b, "a b"), key(&m, &b, "a c^4"));
        assert_ne!(key(&m, &b, "a b"), key(&m, &b, "b a"));
        assert_ne!(key(&m, &b, "a"), key(&m, &b, "a^2"));
        // But a and a b share the coset.
        assert_eq!(key(&m, &b, "a"), key(&m, &b, "a b"));
    }

    #[test]
    fn trivial_subgroup_and_unsupported() {
        let m = GroupModel::free(1);
        let words: Vec<Vec<i16>> = vec![vec![]];
        let b = build_backend(m.family(), 0, &words).unwrap();
        assert!(matches!(b, Backend::Trivial));

        let fp = GroupModel::free_product(vec![
            Family::Free { rank: 1 },
            Family::Free { rank: 1 },
        ]);
        let mixed = vec![fp.parse_word("a b").unwrap().letters().to_vec()];
        assert!(build_backend(fp.family(), 0, &mixed).is_err());
    }
}

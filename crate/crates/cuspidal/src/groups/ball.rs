use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{UnitGraph, VertexId};

use super::membership::{build_backend, Backend, CosetKey};
use super::model::{GroupModel, SubgroupSpec};
use super::word::Word;

pub const DEFAULT_VERTEX_BUDGET: u64 = 5_000_000;

/// All cosets of one marked subgroup that meet a ball, with the vertex
/// trace of each. Trace order is by first-enumerated vertex; vertices
/// within a trace ascend.
pub struct TraceSet {
    pub subgroup: String,
    /// Normal forms of the subgroup generators.
    pub generators: Vec<Word>,
    pub traces: Vec<Vec<VertexId>>,
    backend: Backend,
    key_to_trace: HashMap<CosetKey, usize>,
}

impl TraceSet {
    /// Index of the trace holding the coset of an element with the given
    /// normal form, if that coset meets the ball.
    pub fn trace_of_normal_form(&self, nf: &Word) -> Option<usize> {
        let key = self.backend.coset_key(0, nf.letters());
        self.key_to_trace.get(&key).copied()
    }

    /// Whether the element with the given normal form lies in the subgroup.
    pub fn contains(&self, nf: &Word) -> bool {
        self.backend.coset_key(0, nf.letters())
            == self.backend.coset_key(0, &[])
    }
}

/// Radius-`R` ball in a Cayley graph, with marked horosphere traces.
///
/// The generating set is the model's standard one extended by any
/// multi-letter subgroup generators, so each marked subgroup is generated
/// by moves of the graph and its coset traces induce connected subgraphs.
/// Edges join g to g·s for moves s; vertex 0 is the identity.
pub struct CayleyBall {
    model: GroupModel,
    graph: UnitGraph,
    radius: u32,
    words: Vec<Word>,
    index: HashMap<Word, u32>,
    depths: Vec<u32>,
    moves: Vec<Word>,
    traces: Vec<TraceSet>,
}

pub fn cayley_ball(
    model: &GroupModel,
    radius: u32,
    subgroups: &[SubgroupSpec],
    vertex_budget: u64,
) -> Result<CayleyBall> {
    if radius == 0 {
        return Err(Error::input("ball radius must be at least 1"));
    }

    // Moves: standard generators, then multi-letter subgroup generators
    // (the generating-set extension). A word and its inverse give the same
    // edges, so only one of each pair is kept.
    let mut moves: Vec<Word> = (0..model.generator_count())
        .map(|g| Word::single(g as i16 + 1))
        .collect();
    let mut move_set: std::collections::HashSet<Word> = moves.iter().cloned().collect();
    for sub in subgroups {
        for g in &sub.generators {
            let nf = model.normal_form(g);
            if nf.len() < 2 {
                continue;
            }
            let inv = model.inverse(&nf);
            if move_set.contains(&nf) || move_set.contains(&inv) {
                continue;
            }
            move_set.insert(nf.clone());
            moves.push(nf);
        }
    }
    let mut directed: Vec<Word> = Vec::with_capacity(moves.len() * 2);
    for m in &moves {
        directed.push(m.clone());
        let inv = model.inverse(m);
        if inv != *m {
            directed.push(inv);
        }
    }

    let mut words: Vec<Word> = vec![Word::identity()];
    let mut index: HashMap<Word, u32> = HashMap::new();
    index.insert(Word::identity(), 0);
    let mut depths: Vec<u32> = vec![0];
    let mut frontier: Vec<u32> = vec![0];
    for layer in 1..=radius {
        let mut next: Vec<u32> = Vec::new();
        for &u in &frontier {
            let uw = words[u as usize].clone();
            for m in &directed {
                let v = model.multiply(&uw, m);
                if index.contains_key(&v) {
                    continue;
                }
                if words.len() as u64 >= vertex_budget {
                    return Err(Error::Resource {
                        needed: vertex_budget + 1,
                        budget: vertex_budget,
                    });
                }
                let id = words.len() as u32;
                index.insert(v.clone(), id);
                words.push(v);
                depths.push(layer);
                next.push(id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (u, uw) in words.iter().enumerate() {
        for m in &directed {
            let v = model.multiply(uw, m);
            if let Some(&vid) = index.get(&v) {
                edges.push((u as u32, vid));
            }
        }
    }
    let labels: Vec<String> = words.iter().map(|w| model.display_word(w)).collect();
    let graph = UnitGraph::from_edges(words.len(), &edges)?.with_labels(labels)?;

    let mut trace_sets = Vec::with_capacity(subgroups.len());
    for sub in subgroups {
        let gen_nfs: Vec<Word> = sub.generators.iter().map(|g| model.normal_form(g)).collect();
        let gen_letters: Vec<Vec<i16>> = gen_nfs.iter().map(|g| g.letters().to_vec()).collect();
        let backend = build_backend(model.family(), 0, &gen_letters)?;
        let mut key_to_trace: HashMap<CosetKey, usize> = HashMap::new();
        let mut traces: Vec<Vec<VertexId>> = Vec::new();
        for (v, w) in words.iter().enumerate() {
            let key = backend.coset_key(0, w.letters());
            let idx = *key_to_trace.entry(key).or_insert_with(|| {
                traces.push(Vec::new());
                traces.len() - 1
            });
            traces[idx].push(VertexId(v as u32));
        }
        trace_sets.push(TraceSet {
            subgroup: sub.name.clone(),
            generators: gen_nfs,
            traces,
            backend,
            key_to_trace,
        });
    }

    Ok(CayleyBall {
        model: model.clone(),
        graph,
        radius,
        words,
        index,
        depths,
        moves,
        traces: trace_sets,
    })
}

impl CayleyBall {
    pub fn graph(&self) -> &UnitGraph {
        &self.graph
    }

    pub fn into_graph(self) -> UnitGraph {
        self.graph
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn origin(&self) -> VertexId {
        VertexId(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn word_of(&self, v: VertexId) -> &Word {
        &self.words[v.idx()]
    }

    /// Word length in the generating set actually used (= BFS layer).
    pub fn depth_of(&self, v: VertexId) -> u32 {
        self.depths[v.idx()]
    }

    pub fn vertex_of(&self, w: &Word) -> Option<VertexId> {
        self.index.get(&self.model.normal_form(w)).map(|&i| VertexId(i))
    }

    /// The moves defining edges: standard generators plus any extension
    /// words. Reports must echo this set.
    pub fn moves(&self) -> &[Word] {
        &self.moves
    }

    pub fn trace_sets(&self) -> &[TraceSet] {
        &self.traces
    }

    pub fn trace_set(&self, subgroup: &str) -> Result<&TraceSet> {
        self.traces
            .iter()
            .find(|t| t.subgroup == subgroup)
            .ok_or_else(|| Error::input(format!("no marked subgroup named {subgroup:?}")))
    }

    /// Vertices of the trace of g's coset, for g inside the ball.
    pub fn coset_trace(&self, subgroup: &str, g: &Word) -> Result<&[VertexId]> {
        let nf = self.model.normal_form(g);
        if !self.index.contains_key(&nf) {
            return Err(Error::input(format!(
                "element {} is outside the ball",
                self.model.display_word(&nf)
            )));
        }
        let ts = self.trace_set(subgroup)?;
        let idx = ts.trace_of_normal_form(&nf).ok_or_else(|| {
            Error::input(format!("coset of {} meets no trace", self.model.display_word(&nf)))
        })?;
        Ok(&ts.traces[idx])
    }
}

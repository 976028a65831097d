//! Co-authorship networks induced by a result set, exact betweenness
//! centrality, and re-ranking by the most central author of each document.
//!
//! Betweenness is Freeman's measure on the unweighted, undirected graph with
//! every unordered pair `{s, t}` counted once:
//!
//! ```text
//! C_B(v) = Σ_{s ≠ v ≠ t} σ_st(v) / σ_st
//! ```
//!
//! It is computed with Brandes' accumulation (one BFS plus one backward sweep
//! per source, O(V·E) overall, with sources processed in small batches). Disconnected pairs contribute nothing, so the
//! values are summed within components.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::index::{Index, RankedList};
use crate::record::AuthorKey;
use crate::RerankError;

/// Upper bound on graph nodes before the author-centrality stratagem refuses
/// to run.
pub const DEFAULT_NODE_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoauthorGraph {
    nodes: Vec<AuthorKey>,
    adjacency: Vec<Vec<u32>>,
    /// Undirected edges as `(low, high)` node indices, with the ids of the
    /// documents that produced them.
    provenance: BTreeMap<(u32, u32), Vec<String>>,
}

impl CoauthorGraph {
    /// Induce the graph from the documents of a result set. Every document
    /// with k ≥ 2 authors contributes its k(k−1)/2 author pairs; every author
    /// becomes a node, so solo authors without co-authored papers in the set
    /// stay isolated.
    pub fn from_results(results: &RankedList, index: &Index) -> Result<Self, RerankError> {
        Self::from_results_capped(results, index, usize::MAX)
    }

    /// As [`from_results`](Self::from_results), failing with
    /// [`RerankError::GraphTooLarge`] once the node count exceeds `cap`.
    pub fn from_results_capped(
        results: &RankedList,
        index: &Index,
        cap: usize,
    ) -> Result<Self, RerankError> {
        let mut docs = Vec::with_capacity(results.len());
        for e in &results.entries {
            let doc = index
                .doc(&e.doc_id)
                .ok_or_else(|| RerankError::UnknownDoc(e.doc_id.clone()))?;
            docs.push((doc.record.id.as_str(), doc.authors.as_slice()));
        }
        let names: BTreeSet<&AuthorKey> = docs.iter().flat_map(|(_, a)| a.iter()).collect();
        if names.len() > cap {
            return Err(RerankError::GraphTooLarge { nodes: names.len(), cap });
        }
        let nodes: Vec<AuthorKey> = names.into_iter().cloned().collect();
        let slot = |k: &AuthorKey| nodes.binary_search(k).expect("author collected above") as u32;

        let mut provenance: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
        for (id, authors) in docs {
            let ids: Vec<u32> = authors.iter().map(slot).collect();
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    let key = if a < b { (a, b) } else { (b, a) };
                    provenance.entry(key).or_default().push(String::from(id));
                }
            }
        }
        for docs in provenance.values_mut() {
            docs.sort_unstable();
            docs.dedup();
        }
        Ok(Self::assemble(nodes, provenance))
    }

    /// Build a graph directly from author pairs plus extra isolated nodes.
    /// Self-pairs are ignored.
    pub fn from_edges<'a>(
        edges: impl IntoIterator<Item = (&'a AuthorKey, &'a AuthorKey)>,
        isolated: impl IntoIterator<Item = &'a AuthorKey>,
    ) -> Self {
        let edges: Vec<(&AuthorKey, &AuthorKey)> = edges.into_iter().collect();
        let mut names: BTreeSet<&AuthorKey> = isolated.into_iter().collect();
        for (a, b) in &edges {
            names.insert(a);
            names.insert(b);
        }
        let nodes: Vec<AuthorKey> = names.into_iter().cloned().collect();
        let mut provenance = BTreeMap::new();
        for (a, b) in edges {
            let a = nodes.binary_search(a).expect("inserted") as u32;
            let b = nodes.binary_search(b).expect("inserted") as u32;
            if a != b {
                provenance.insert((a.min(b), a.max(b)), Vec::new());
            }
        }
        Self::assemble(nodes, provenance)
    }

    fn assemble(nodes: Vec<AuthorKey>, provenance: BTreeMap<(u32, u32), Vec<String>>) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        // BTreeMap order keeps every neighbour list sorted.
        for &(a, b) in provenance.keys() {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        CoauthorGraph { nodes, adjacency, provenance }
    }

    /// Authors in ascending key order.
    pub fn nodes(&self) -> &[AuthorKey] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.provenance.len()
    }

    pub fn neighbours(&self, node: usize) -> &[u32] {
        &self.adjacency[node]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }

    /// Edges as author pairs with the first author ordered before the second.
    pub fn edges(&self) -> impl Iterator<Item = (&AuthorKey, &AuthorKey)> {
        self.provenance
            .keys()
            .map(|&(a, b)| (&self.nodes[a as usize], &self.nodes[b as usize]))
    }

    /// Documents that contributed the edge between `a` and `b`.
    pub fn edge_documents(&self, a: &AuthorKey, b: &AuthorKey) -> Option<&[String]> {
        let a = self.nodes.binary_search(a).ok()? as u32;
        let b = self.nodes.binary_search(b).ok()? as u32;
        self.provenance.get(&(a.min(b), a.max(b))).map(Vec::as_slice)
    }
}

/// Betweenness value per graph node.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityTable {
    entries: Vec<(AuthorKey, f64)>,
}

impl CentralityTable {
    pub fn get(&self, author: &AuthorKey) -> Option<f64> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(author))
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// `(author, betweenness)` in ascending author order.
    pub fn iter(&self) -> impl Iterator<Item = (&AuthorKey, f64)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Exact unnormalized betweenness of every author.
pub fn betweenness(graph: &CoauthorGraph) -> CentralityTable {
    let values = brandes(&graph.adjacency);
    CentralityTable { entries: graph.nodes.iter().cloned().zip(values).collect() }
}

/// Sources swept together, one bit each in a [`Lanes`] mask.
const LANES: usize = 64;
type Lanes = u64;

/// Per-vertex state for a batch of sources: path counts σ during the forward
/// sweep, overwritten in place by (1 + δ) / σ during the backward sweep.
#[derive(Clone, Copy)]
#[repr(align(64))]
struct Row([f64; LANES]);

impl Row {
    const ZERO: Row = Row([0.0; LANES]);
}

fn lanes_of(mut mask: Lanes) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        (mask != 0).then(|| {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            k
        })
    })
}

/// Brandes' accumulation over an undirected adjacency list. Each unordered
/// pair is counted once.
///
/// Sources run in batches of [`LANES`], level-synchronously: a vertex is
/// expanded once per distinct BFS level it holds across the batch rather than
/// once per source, and per-source state is touched only along shortest-path
/// edges.
pub fn brandes(adjacency: &[Vec<u32>]) -> Vec<f64> {
    let n = adjacency.len();

    // Relabel in BFS order: batches then hold nearby sources, which share
    // most of their level structure, and neighbours get nearby rows.
    // Isolated vertices lie on no path and are left out.
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut label = vec![u32::MAX; n];
    for root in 0..n {
        if label[root] != u32::MAX || adjacency[root].is_empty() {
            continue;
        }
        let mut head = order.len();
        label[root] = head as u32;
        order.push(root as u32);
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            for &w in &adjacency[v] {
                if label[w as usize] == u32::MAX {
                    label[w as usize] = order.len() as u32;
                    order.push(w);
                }
            }
        }
    }
    let m = order.len();
    let mut offsets = Vec::with_capacity(m + 1);
    let mut targets = Vec::new();
    offsets.push(0usize);
    for &v in &order {
        let start = targets.len();
        targets.extend(adjacency[v as usize].iter().map(|&w| label[w as usize]));
        targets[start..].sort_unstable();
        offsets.push(targets.len());
    }
    let neighbours = |v: usize| &targets[offsets[v]..offsets[v + 1]];

    let mut centrality = vec![0.0f64; m];
    let mut rows = vec![Row::ZERO; m];
    // Lanes that reached a vertex at an earlier level, and including the
    // level being discovered.
    let mut seen = vec![0 as Lanes; m];
    let mut reached = vec![0 as Lanes; m];
    // Lanes in which a vertex sits one level below the one being swept back.
    let mut child = vec![0 as Lanes; m];
    // (vertex, lanes at this level), level d is levels[bounds[d]..bounds[d + 1]].
    let mut levels: Vec<(u32, Lanes)> = Vec::with_capacity(m);
    let mut bounds: Vec<usize> = Vec::new();

    for base in (0..m).step_by(LANES) {
        levels.clear();
        bounds.clear();
        bounds.push(0);
        for (k, s) in (base..m.min(base + LANES)).enumerate() {
            let bit = 1 << k;
            seen[s] = bit;
            reached[s] = bit;
            rows[s].0[k] = 1.0;
            levels.push((s as u32, bit));
        }
        bounds.push(levels.len());

        loop {
            let (lo, hi) = (bounds[bounds.len() - 2], bounds[bounds.len() - 1]);
            for i in lo..hi {
                let (v, at) = levels[i];
                let sigma_v = rows[v as usize];
                for &w in neighbours(v as usize) {
                    let w = w as usize;
                    let onto = at & !seen[w];
                    if onto == 0 {
                        continue;
                    }
                    if reached[w] == seen[w] {
                        levels.push((w as u32, 0));
                    }
                    reached[w] |= onto;
                    let row = &mut rows[w];
                    for k in lanes_of(onto) {
                        row.0[k] += sigma_v.0[k];
                    }
                }
            }
            if levels.len() == hi {
                break;
            }
            for entry in &mut levels[hi..] {
                let w = entry.0 as usize;
                entry.1 = reached[w] & !seen[w];
                seen[w] = reached[w];
            }
            bounds.push(levels.len());
        }

        // Pull form of the dependency recursion: with
        // weight(w) = (1 + δ(w)) / σ(w), δ(v) = σ(v) · Σ_{children w} weight(w).
        // Deeper levels are finished first. Sources accrue nothing in their
        // own lane, so level 0 is skipped.
        let depth = bounds.len() - 1;
        for level in (1..depth).rev() {
            let below = if level + 1 < depth { bounds[level + 1]..bounds[level + 2] } else { 0..0 };
            for &(w, at) in &levels[below.clone()] {
                child[w as usize] = at;
            }
            for &(v, at) in &levels[bounds[level]..bounds[level + 1]] {
                let v = v as usize;
                let mut pulled = [0.0f64; LANES];
                for &w in neighbours(v) {
                    let onto = at & child[w as usize];
                    if onto == 0 {
                        continue;
                    }
                    let row = &rows[w as usize];
                    for k in lanes_of(onto) {
                        pulled[k] += row.0[k];
                    }
                }
                let row = &mut rows[v];
                let mut total = 0.0;
                for k in lanes_of(at) {
                    let dependency = row.0[k] * pulled[k];
                    row.0[k] = (1.0 + dependency) / row.0[k];
                    total += dependency;
                }
                centrality[v] += total;
            }
            for &(w, _) in &levels[below] {
                child[w as usize] = 0;
            }
        }

        for &(v, _) in &levels {
            let v = v as usize;
            rows[v] = Row::ZERO;
            seen[v] = 0;
            reached[v] = 0;
        }
    }

    let mut out = vec![0.0f64; n];
    for (c, &v) in centrality.iter().zip(&order) {
        // Every unordered pair was visited from both ends.
        out[v as usize] = c / 2.0;
    }
    out
}

/// Highest-betweenness author of a document and that value. Documents with no
/// author in the table score 0 with no author.
pub fn document_centrality(authors: &[AuthorKey], table: &CentralityTable) -> (Option<AuthorKey>, f64) {
    let mut best: (Option<&AuthorKey>, f64) = (None, 0.0);
    for a in authors {
        if let Some(v) = table.get(a) {
            if best.0.is_none() || v > best.1 {
                best = (Some(a), v);
            }
        }
    }
    (best.0.cloned(), best.1)
}

/// Order by document centrality, then the incoming TF-IDF score, then doc id.
/// Entry scores become the centrality values.
pub fn rerank_with_table(
    results: &RankedList,
    index: &Index,
    table: &CentralityTable,
) -> Result<RankedList, RerankError> {
    let mut keyed: Vec<(f64, f64, &str)> = Vec::with_capacity(results.len());
    for e in &results.entries {
        let doc = index
            .doc(&e.doc_id)
            .ok_or_else(|| RerankError::UnknownDoc(e.doc_id.clone()))?;
        let (_, c) = document_centrality(&doc.authors, table);
        keyed.push((c, e.score, e.doc_id.as_str()));
    }
    keyed.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| b.1.total_cmp(&a.1))
            .then_with(|| a.2.cmp(b.2))
    });
    let ordered = keyed.into_iter().map(|(c, _, id)| (String::from(id), c)).collect();
    Ok(RankedList::from_ordered(results.query.clone(), ordered))
}

/// Build the result-set graph, compute betweenness and re-rank.
pub fn rerank_author_centrality(
    results: &RankedList,
    index: &Index,
    node_cap: usize,
) -> Result<RankedList, RerankError> {
    let graph = CoauthorGraph::from_results_capped(results, index, node_cap)?;
    let table = betweenness(&graph);
    rerank_with_table(results, index, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{normalize_author, BibRecord, Corpus};
    use alloc::borrow::ToOwned;

    fn key(s: &str) -> AuthorKey {
        normalize_author(s).unwrap()
    }

    fn graph(edges: &[(&str, &str)]) -> CoauthorGraph {
        let keys: Vec<(AuthorKey, AuthorKey)> = edges.iter().map(|(a, b)| (key(a), key(b))).collect();
        CoauthorGraph::from_edges(keys.iter().map(|(a, b)| (a, b)), [])
    }

    fn values(g: &CoauthorGraph) -> Vec<(String, f64)> {
        betweenness(g).iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn path_triangle_star() {
        assert_eq!(
            values(&graph(&[("a", "b"), ("b", "c")])),
            [("a".to_owned(), 0.0), ("b".to_owned(), 1.0), ("c".to_owned(), 0.0)]
        );
        assert!(values(&graph(&[("a", "b"), ("b", "c"), ("a", "c")])).iter().all(|(_, v)| *v == 0.0));
        let star = betweenness(&graph(&[("c", "l1"), ("c", "l2"), ("c", "l3"), ("c", "l4")]));
        assert_eq!(star.get(&key("c")), Some(6.0));
        assert_eq!(star.get(&key("l1")), Some(0.0));
    }

    #[test]
    fn closing_a_path_lowers_the_middle() {
        let open = betweenness(&graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]));
        let closed = betweenness(&graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("a", "e")]));
        assert_eq!(open.get(&key("c")), Some(4.0));
        assert!(closed.get(&key("c")).unwrap() < 4.0);
    }

    #[test]
    fn empty_and_isolated() {
        assert!(betweenness(&graph(&[])).is_empty());
        let iso = key("solo");
        let g = CoauthorGraph::from_edges([], [&iso]);
        assert_eq!(betweenness(&g).get(&iso), Some(0.0));
    }

    fn index(docs: &[(&str, &[&str])]) -> Index {
        let records: Vec<BibRecord> = docs
            .iter()
            .map(|(id, authors)| BibRecord {
                id: (*id).to_owned(),
                title: "network".to_owned(),
                authors: authors.iter().map(|a| (*a).to_owned()).collect(),
                ..Default::default()
            })
            .collect();
        Index::build(&Corpus::try_from(records).unwrap())
    }

    #[test]
    fn graph_from_results() {
        let ix = index(&[("d1", &["A", "B", "C"]), ("d2", &["B", "D"]), ("d3", &["E"]), ("d4", &[])]);
        let results = ix.search_tfidf("network", 10).unwrap();
        let g = CoauthorGraph::from_results(&results, &ix).unwrap();
        assert_eq!(g.node_count(), 5);
        let edges: Vec<(String, String)> = g.edges().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let expect = [("a", "b"), ("a", "c"), ("b", "c"), ("b", "d")];
        assert_eq!(edges, expect.map(|(a, b)| (a.to_owned(), b.to_owned())));
        assert_eq!(g.edge_documents(&key("b"), &key("d")), Some(&["d2".to_owned()][..]));
        assert!(g.neighbours(4).is_empty());

        assert_eq!(
            CoauthorGraph::from_results_capped(&results, &ix, 4),
            Err(RerankError::GraphTooLarge { nodes: 5, cap: 4 })
        );
    }

    #[test]
    fn rerank_prefers_central_authors() {
        // Path a-b-c from d2/d3; d1 is a solo paper by b.
        let ix = index(&[("d1", &["b"]), ("d2", &["a", "b"]), ("d3", &["b", "c"]), ("d4", &["z"])]);
        let base = RankedList::from_ordered(
            "q".to_owned(),
            [("d4", 4.0), ("d3", 3.0), ("d2", 2.0), ("d1", 1.0)]
                .iter()
                .map(|&(id, s)| (id.to_owned(), s))
                .collect(),
        );
        let out = rerank_author_centrality(&base, &ix, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(out.ids(), ["d3", "d2", "d1", "d4"]);
        assert_eq!(out.entries[2].score, 1.0);
        assert_eq!(out.entries[3].score, 0.0);
    }

    #[test]
    fn solo_authors_keep_baseline_order() {
        let ix = index(&[("a", &["x"]), ("b", &["y"]), ("c", &["z"])]);
        let base = ix.search_tfidf("network", 10).unwrap();
        let out = rerank_author_centrality(&base, &ix, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(out.ids(), base.ids());
        assert!(out.entries.iter().all(|e| e.score == 0.0));
        let empty = RankedList::from_ordered("q".to_owned(), Vec::new());
        assert!(rerank_author_centrality(&empty, &ix, DEFAULT_NODE_CAP).unwrap().is_empty());
    }
}

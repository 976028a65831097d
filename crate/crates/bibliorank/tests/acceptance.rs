//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bibliorank::corpus::{read_corpus, write_corpus};
use bibliorank::gen::{generate, issn_for, GenConfig};
use bibliorank_core::bradford::{journal_yields, partition_zones, rerank_mult, rerank_pure, Zone};
use bibliorank_core::coauthor::{betweenness, rerank_author_centrality, CoauthorGraph};
use bibliorank_core::eval::kendall_tau;
use bibliorank_core::record::{normalize_author, AuthorKey, BibRecord, Corpus};
use bibliorank_core::text::tokenize;
use bibliorank_core::{Index, RankedList, Stratagem, DEFAULT_NODE_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if let false = $cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(elapsed: Duration, budget_s: f64, what: &str) -> Result<(), String> {
    ensure!(
        elapsed.as_secs_f64() < budget_s,
        "{what} took {:.2}s, budget {budget_s}s",
        elapsed.as_secs_f64()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Betweenness

/// All simple s–t paths by DFS; the shortest ones share one unit of credit.
fn brute_betweenness(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn paths(adj: &[Vec<usize>], path: &mut Vec<usize>, t: usize, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in &adj[v] {
            if !path.contains(&w) {
                path.push(w);
                paths(adj, path, t, out);
                path.pop();
            }
        }
    }
    let mut cb = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let mut found = Vec::new();
            paths(&adj, &mut vec![s], t, &mut found);
            let Some(len) = found.iter().map(Vec::len).min() else { continue };
            let shortest: Vec<_> = found.into_iter().filter(|p| p.len() == len).collect();
            let share = 1.0 / shortest.len() as f64;
            for p in &shortest {
                for &v in &p[1..p.len() - 1] {
                    cb[v] += share;
                }
            }
        }
    }
    cb
}

fn production_betweenness(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<f64> {
    let keys: Vec<AuthorKey> = (0..n).map(|i| normalize_author(&format!("v{i}")).unwrap()).collect();
    let graph = CoauthorGraph::from_edges(edges.iter().map(|&(a, b)| (&keys[a], &keys[b])), keys.iter());
    let table = betweenness(&graph);
    keys.iter().map(|k| table.get(k).unwrap()).collect()
}

fn betweenness_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB3);
    let mut worst = 0.0f64;
    for g in 0..1000 {
        let n = rng.random_range(1..=8);
        let density: f64 = rng.random_range(0.1..0.9);
        let mut edges = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random_bool(density) {
                    edges.insert((a, b));
                }
            }
        }
        let fast = production_betweenness(n, &edges);
        let slow = brute_betweenness(n, &edges);
        for (f, s) in fast.iter().zip(&slow) {
            worst = worst.max((f - s).abs());
            ensure!((f - s).abs() <= 1e-9, "graph {g} (n={n}, edges {edges:?}): {fast:?} vs oracle {slow:?}");
        }
    }
    let path = production_betweenness(3, &BTreeSet::from([(0, 1), (1, 2)]));
    ensure!(path == [0.0, 1.0, 0.0], "path a-b-c gave {path:?}");
    let star = production_betweenness(5, &BTreeSet::from([(0, 1), (0, 2), (0, 3), (0, 4)]));
    ensure!(star == [6.0, 0.0, 0.0, 0.0, 0.0], "4-leaf star gave {star:?}");
    within(started.elapsed(), 10.0, "1000 graphs")?;
    Ok(format!("1000 graphs, max |Δ| = {worst:.1e}, {:.2}s", started.elapsed().as_secs_f64()))
}

// ---------------------------------------------------------------------------
// Synthetic corpora sweep

const QUERIES: [&str; 4] = ["information retrieval", "bradford scattering", "network centrality", "citation"];

fn build(records: Vec<BibRecord>) -> Index {
    Index::build(&Corpus::try_from(records).expect("generator ids are unique"))
}

fn issn<'a>(index: &'a Index, id: &str) -> Option<&'a str> {
    index.doc(id).and_then(|d| d.record.issn.as_deref())
}

fn sorted_ids(list: &RankedList) -> Vec<&str> {
    let mut ids = list.ids();
    ids.sort_unstable();
    ids
}

fn check_blocks(index: &Index, base: &RankedList, pure: &RankedList) -> Result<(), String> {
    let yields = journal_yields(base, index).map_err(|e| e.to_string())?;
    let mut closed: BTreeSet<Option<&str>> = BTreeSet::new();
    let mut current: Option<Option<&str>> = None;
    let mut last = usize::MAX;
    for e in &pure.entries {
        let j = issn(index, &e.doc_id);
        if current != Some(j) {
            if let Some(prev) = current {
                closed.insert(prev);
            }
            ensure!(!closed.contains(&j), "journal {j:?} is not contiguous");
            let y = j.map_or(0, |i| yields.yield_of(i));
            ensure!(y <= last, "block yield {y} after {last}");
            last = y;
            current = Some(j);
        }
    }
    if let (Some(first), Some(max)) = (pure.entries.first(), yields.iter().map(|(_, y)| y).max()) {
        let y = issn(index, &first.doc_id).map_or(0, |i| yields.yield_of(i));
        ensure!(y == max, "rank 1 from a journal of yield {y}, max is {max}");
    }
    Ok(())
}

fn check_mult(index: &Index, base: &RankedList, mult: &RankedList) -> Result<(), String> {
    let yields = journal_yields(base, index).map_err(|e| e.to_string())?;
    let mut naive: Vec<(&str, f64)> = base
        .entries
        .iter()
        .map(|e| {
            let factor = issn(index, &e.doc_id).map_or(1, |i| yields.yield_of(i));
            (e.doc_id.as_str(), e.score * factor as f64)
        })
        .collect();
    naive.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(b.0)));
    let got: Vec<(&str, f64)> = mult.entries.iter().map(|e| (e.doc_id.as_str(), e.score)).collect();
    ensure!(got == naive, "multiplicative order differs from recomputation");
    Ok(())
}

fn check_zones(index: &Index, base: &RankedList) -> Result<bool, String> {
    let table = journal_yields(base, index).map_err(|e| e.to_string())?;
    if table.journal_count() < 3 {
        return Ok(false);
    }
    let p = partition_zones(&table).map_err(|e| e.to_string())?;
    let zones: Vec<Zone> = p.iter().map(|(_, _, z)| z).collect();
    ensure!(zones.windows(2).all(|w| w[0] <= w[1]), "zones interleave: {zones:?}");
    for z in [Zone::Core, Zone::Zone2, Zone::Zone3] {
        ensure!(!p.members(z).is_empty(), "{z:?} is empty");
    }
    // Minimal prefix by direct scan of the sorted yields.
    let mut ys: Vec<usize> = table.iter().map(|(_, y)| y).collect();
    ys.sort_unstable_by(|a, b| b.cmp(a));
    let need = table.total_with_issn().div_ceil(3);
    let minimal = (1..=ys.len()).find(|&m| ys[..m].iter().sum::<usize>() >= need).unwrap();
    ensure!(
        p.members(Zone::Core).len() == minimal,
        "core has {} journals, minimal prefix is {minimal}",
        p.members(Zone::Core).len()
    );
    Ok(true)
}

#[derive(Default)]
struct Sweep {
    elapsed: Duration,
    corpora: usize,
    blocks: Vec<String>,
    mult: Vec<String>,
    permutation: Vec<String>,
    zones: Vec<String>,
    zone_corpora: usize,
    rankings: usize,
}

fn sweep() -> Sweep {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB4AD);
    let mut s = Sweep::default();
    for c in 0..500 {
        let docs = rng.random_range(100..=2000);
        let cfg = GenConfig {
            docs,
            journals: rng.random_range(3..=50),
            authors: docs / 3 + 5,
            seed: rng.random(),
        };
        let index = build(generate(cfg));
        let query = QUERIES[c % QUERIES.len()];
        let base = index.search_tfidf(query, usize::MAX).expect("query has tokens");
        s.corpora += 1;
        let tag = |msg: String| format!("corpus {c} {cfg:?} `{query}`: {msg}");

        for st in Stratagem::ALL {
            match st.apply(&base, &index, DEFAULT_NODE_CAP) {
                Ok(out) => {
                    s.rankings += 1;
                    if sorted_ids(&out) != sorted_ids(&base) || out.len() != base.len() {
                        s.permutation.push(tag(format!("{st} is not a permutation")));
                    }
                    match st {
                        Stratagem::Bradford => {
                            if let Err(e) = check_blocks(&index, &base, &out) {
                                s.blocks.push(tag(e));
                            }
                            let again = rerank_pure(&out, &index).unwrap();
                            if again.ids() != out.ids() {
                                s.blocks.push(tag("pure re-ranking not idempotent".into()));
                            }
                        }
                        Stratagem::BradfordMult => {
                            if let Err(e) = check_mult(&index, &base, &out) {
                                s.mult.push(tag(e));
                            }
                        }
                        _ => {}
                    }
                }
                Err(e) => s.permutation.push(tag(format!("{st} failed: {e}"))),
            }
        }
        match check_zones(&index, &base) {
            Ok(true) => s.zone_corpora += 1,
            Ok(false) => {}
            Err(e) => s.zones.push(tag(e)),
        }
    }
    s.elapsed = started.elapsed();
    s
}

fn report(failures: &[String]) -> Result<(), String> {
    match failures.first() {
        None => Ok(()),
        Some(first) => Err(format!("{} failures; first: {first}", failures.len())),
    }
}

fn bradford_blocks(s: &Sweep) -> Outcome {
    report(&s.blocks)?;
    within(s.elapsed, 30.0, "500-corpus sweep")?;
    Ok(format!("{} corpora, sweep {:.2}s", s.corpora, s.elapsed.as_secs_f64()))
}

fn unit_yield_tau() -> Result<usize, String> {
    let mut checked = 0;
    for seed in 0..20 {
        let mut records = generate(GenConfig { docs: 150 + seed as usize * 10, journals: 5, authors: 60, seed });
        for (i, r) in records.iter_mut().enumerate() {
            if r.issn.is_some() {
                r.issn = Some(issn_for(10_000 + i));
            }
        }
        let index = build(records);
        let base = index.search_tfidf("information", usize::MAX).unwrap();
        let mult = rerank_mult(&base, &index).unwrap();
        let tau = kendall_tau(&base.ids(), &mult.ids()).map_err(|e| e.to_string())?;
        ensure!(tau == 1.0, "seed {seed}: tau(tfidf, bradford_mult) = {tau} with unit yields");
        checked += 1;
    }
    Ok(checked)
}

fn multiplicative_oracle(s: &Sweep) -> Outcome {
    report(&s.mult)?;
    let unit = unit_yield_tau()?;
    Ok(format!("{} corpora, 0 mismatches; tau = 1.0 on {unit} unit-yield corpora", s.corpora))
}

fn permutation_safety(s: &Sweep) -> Outcome {
    report(&s.permutation)?;
    Ok(format!("{} stratagem outputs", s.rankings))
}

fn zone_partition(s: &Sweep) -> Outcome {
    report(&s.zones)?;
    ensure!(s.zone_corpora > 0, "no corpus had three journals");
    Ok(format!("{} corpora with >= 3 journals", s.zone_corpora))
}

// ---------------------------------------------------------------------------
// TF-IDF

fn naive_scores(records: &[BibRecord], query: &str) -> BTreeMap<String, f64> {
    let n = records.len() as f64;
    let docs: Vec<Vec<String>> = records.iter().map(|r| tokenize(&r.indexable_text())).collect();
    let terms: BTreeSet<String> = tokenize(query).into_iter().collect();
    let mut out = BTreeMap::new();
    for (r, toks) in records.iter().zip(&docs) {
        let mut score = 0.0;
        let mut matched = false;
        for t in &terms {
            let tf = toks.iter().filter(|x| *x == t).count();
            if tf > 0 {
                matched = true;
                let df = docs.iter().filter(|d| d.contains(t)).count() as f64;
                score += tf as f64 * (((n + 1.0) / (df + 1.0)).ln() + 1.0);
            }
        }
        if matched {
            out.insert(r.id.clone(), score);
        }
    }
    out
}

fn tfidf_oracle() -> Outcome {
    let queries = ["information", "retrieval science", "bradford scattering zone", "stratagem dynamics law"];
    let mut compared = 0;
    for docs in 1..=50 {
        let records = generate(GenConfig { docs, journals: 4, authors: 20, seed: docs as u64 });
        let index = build(records.clone());
        for q in queries {
            let ranked = index.search_tfidf(q, usize::MAX).unwrap();
            let oracle = naive_scores(&records, q);
            ensure!(ranked.len() == oracle.len(), "{docs} docs `{q}`: {} hits vs {}", ranked.len(), oracle.len());
            for e in &ranked.entries {
                let want = oracle[&e.doc_id];
                ensure!((e.score - want).abs() <= 1e-9, "{docs} docs `{q}` {}: {} vs {want}", e.doc_id, e.score);
                compared += 1;
            }
        }
    }
    let single = build(vec![BibRecord { id: "d".into(), title: "law".into(), ..Default::default() }]);
    let score = single.search_tfidf("law", 1).unwrap().entries[0].score;
    ensure!(score == 1.0, "single-doc single-term score {score}");
    Ok(format!("{compared} scores within 1e-9; single-term score 1.0"))
}

// ---------------------------------------------------------------------------
// CLI determinism

fn bibliorank(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bibliorank"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{args:?} exited {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus.jsonl");
    let ix = dir.path().join("ix");
    let path = |p: &Path| p.to_str().unwrap().to_owned();
    bibliorank(&["gen", "--docs", "800", "--journals", "20", "--authors", "300", "--seed", "11", "--out", &path(&corpus)])?;
    bibliorank(&["ingest", "--input", &path(&corpus), "--out", &path(&ix)])?;
    let mut lines = 0;
    for mode in ["tfidf", "bradford", "bradford_mult", "authcent"] {
        let args = ["search", "--index", &path(&ix), "--query", "network centrality", "--rank", mode, "--top", "50"];
        let first = bibliorank(&args)?;
        let second = bibliorank(&args)?;
        ensure!(first == second, "{mode}: stdout differs between runs");
        ensure!(!first.is_empty(), "{mode}: no output");
        lines += first.iter().filter(|&&b| b == b'\n').count();
    }
    Ok(format!("4 modes byte-identical ({lines} lines each pair)"))
}

// ---------------------------------------------------------------------------
// Performance

fn performance() -> Outcome {
    let records = generate(GenConfig { docs: 50_000, journals: 200, authors: 20_000, seed: 50 });
    let mut jsonl = Vec::new();
    write_corpus(&mut jsonl, &records).map_err(|e| e.to_string())?;
    drop(records);

    let started = Instant::now();
    let loaded = read_corpus(jsonl.as_slice()).map_err(|e| e.to_string())?;
    let index = Index::build(&loaded.corpus);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    bibliorank::store::save_index(dir.path(), &index).map_err(|e| e.to_string())?;
    let indexing = started.elapsed();
    ensure!(index.doc_count() == 50_000, "indexed {} docs", index.doc_count());
    within(indexing, 60.0, "indexing 50,000 docs")?;

    let index = build(generate(GenConfig { docs: 30_000, journals: 100, authors: 10_000, seed: 51 }));
    let base = index.search_tfidf("information", usize::MAX).unwrap();
    let started = Instant::now();
    let graph = CoauthorGraph::from_results(&base, &index).map_err(|e| e.to_string())?;
    let ranked = rerank_author_centrality(&base, &index, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let rerank = started.elapsed();
    ensure!(graph.node_count() <= 10_000, "graph has {} nodes", graph.node_count());
    ensure!(ranked.len() == base.len(), "lost documents");
    // The timed span builds the graph twice; the budget still holds.
    within(rerank, 5.0, "authcent re-rank")?;
    Ok(format!(
        "index 50k docs {:.2}s; authcent {} docs / {} nodes / {} edges {:.2}s",
        indexing.as_secs_f64(),
        base.len(),
        graph.node_count(),
        graph.edge_count(),
        rerank.as_secs_f64()
    ))
}

fn main() {
    let mut failed = 0;
    let mut emit = |name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(why) => {
            failed += 1;
            println!("FAIL  {name}: {why}");
        }
    };
    emit("betweenness oracle equivalence", betweenness_oracle());
    let sweep = sweep();
    emit("bradford block law", bradford_blocks(&sweep));
    emit("multiplicative oracle", multiplicative_oracle(&sweep));
    emit("permutation safety", permutation_safety(&sweep));
    emit("zone partition", zone_partition(&sweep));
    emit("tf-idf oracle", tfidf_oracle());
    emit("cli determinism", cli_determinism());
    emit("performance floor", performance());
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

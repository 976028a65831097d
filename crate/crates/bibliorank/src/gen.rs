//! Seeded synthetic corpora with Bradford-like journal scattering and a
//! skewed author population.

use bibliorank_core::BibRecord;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub docs: usize,
    pub journals: usize,
    pub authors: usize,
    pub seed: u64,
}

/// Share of documents published outside any ISSN-bearing journal.
const NO_ISSN_RATE: f64 = 0.1;

/// Ordered by intended frequency; the head words occur in most documents.
pub const VOCABULARY: [&str; 48] = [
    "information", "retrieval", "science", "network", "journal", "search", "analysis",
    "model", "scholarly", "citation", "library", "digital", "bibliometric", "ranking",
    "author", "collaboration", "centrality", "relevance", "query", "evaluation", "core",
    "zone", "scattering", "productivity", "community", "knowledge", "social", "structure",
    "users", "system", "indicators", "impact", "periphery", "literature", "documents",
    "coauthorship", "betweenness", "distribution", "measure", "precision", "recall",
    "thesaurus", "vocabulary", "classification", "federated", "heterogeneity", "dynamics",
    "stratagem",
];

const SURNAMES: [&str; 40] = [
    "Meyer", "Schmidt", "Novak", "Garcia", "Rossi", "Dubois", "Kowalski", "Jansen",
    "Silva", "Nielsen", "Horvat", "Popescu", "Ivanova", "Lindqvist", "Costa", "Weber",
    "Tanaka", "Kim", "Chen", "Singh", "Okafor", "Haddad", "Moreau", "Fischer",
    "Petrov", "Larsen", "Bauer", "Romano", "Kovacs", "Ferreira", "Yilmaz", "Andersen",
    "Wagner", "Hoffmann", "Sato", "Nguyen", "Murphy", "Walsh", "Berg", "Koch",
];

const FIELDS: [&str; 12] = [
    "Information Science", "Documentation", "Scientometrics", "Social Research",
    "Library Studies", "Knowledge Organization", "Sociology", "Communication",
    "Informetrics", "Computing", "Science Policy", "Digital Libraries",
];

fn zipf_weights(n: usize, exponent: f64) -> Vec<f64> {
    (1..=n).map(|r| 1.0 / (r as f64).powf(exponent)).collect()
}

/// ISSN with a valid mod-11 check character.
pub fn issn_for(serial: usize) -> String {
    let body = format!("{:07}", (1_000_000 + serial * 7_919) % 10_000_000);
    let sum: u32 = body
        .bytes()
        .zip((2..=8).rev())
        .map(|(b, w)| u32::from(b - b'0') * w)
        .sum();
    let check = match (11 - sum % 11) % 11 {
        10 => 'X',
        d => char::from_digit(d, 10).unwrap(),
    };
    format!("{}-{}{}", &body[..4], &body[4..], check)
}

/// Distinct display name for every author index.
pub fn author_name(i: usize) -> String {
    let surname = SURNAMES[i % SURNAMES.len()];
    let q = i / SURNAMES.len();
    let letter = |n: usize| char::from(b'A' + (n % 26) as u8);
    match q {
        0..26 => format!("{surname}, {}.", letter(q)),
        26..702 => format!("{surname}, {}. {}.", letter(q), letter(q / 26 - 1)),
        _ => format!("{surname}, {}. {q}", letter(q)),
    }
}

fn journal_name(j: usize) -> String {
    let field = FIELDS[j % FIELDS.len()];
    match j / FIELDS.len() {
        0 => format!("Journal of {field}"),
        n => format!("{field} Review {}", n + 1),
    }
}

fn words(rng: &mut ChaCha8Rng, dist: &WeightedIndex<f64>, count: usize) -> Vec<&'static str> {
    (0..count).map(|_| VOCABULARY[dist.sample(rng)]).collect()
}

/// Generate `cfg.docs` records. Identical configs give identical corpora.
pub fn generate(cfg: GenConfig) -> Vec<BibRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vocab = WeightedIndex::new(zipf_weights(VOCABULARY.len(), 0.9)).expect("non-empty vocabulary");
    let journals = (cfg.journals > 0)
        .then(|| WeightedIndex::new(zipf_weights(cfg.journals, 1.0)).expect("journals > 0"));
    let authors = (cfg.authors > 0)
        .then(|| WeightedIndex::new(zipf_weights(cfg.authors, 0.7)).expect("authors > 0"));
    let team_size = WeightedIndex::new([30.0, 35.0, 20.0, 15.0]).expect("static weights");
    let width = cfg.docs.to_string().len().max(6);

    (0..cfg.docs)
        .map(|i| {
            let title_len = rng.random_range(4..=9);
            let title = words(&mut rng, &vocab, title_len).join(" ");
            let abstract_len = rng.random_range(15..=40);
            let abstract_text = words(&mut rng, &vocab, abstract_len).join(" ");
            let kw_len = rng.random_range(1..=4);
            let keywords = words(&mut rng, &vocab, kw_len).into_iter().map(String::from).collect();

            let mut byline: Vec<usize> = Vec::new();
            if let Some(dist) = &authors {
                let want = (team_size.sample(&mut rng) + 1).min(cfg.authors);
                while byline.len() < want {
                    let a = dist.sample(&mut rng);
                    if !byline.contains(&a) {
                        byline.push(a);
                    }
                }
            }

            let (journal, issn) = match &journals {
                Some(dist) if !rng.random_bool(NO_ISSN_RATE) => {
                    let j = dist.sample(&mut rng);
                    (journal_name(j), Some(issn_for(j)))
                }
                _ => (String::new(), None),
            };

            BibRecord {
                id: format!("doc{i:0width$}"),
                title,
                abstract_text,
                keywords,
                authors: byline.into_iter().map(author_name).collect(),
                journal,
                issn,
                year: Some(rng.random_range(1980..=2013)),
            }
        })
        .collect()
}

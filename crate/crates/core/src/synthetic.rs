//! Deterministic synthetic corpora for tests, examples and benchmarks.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Category, Corpus, LinkEvent, NormClass, Page, PageId, PopulationPoint, PopulationSeries};
use crate::time::{Month, Timestamp};

const DAY: i64 = 86_400;

const THEMES: [(&[&str; 10], &[&str; 10], NormClass); 3] = [
    (
        &[
            "Neutral_point_of_view",
            "Verifiability",
            "No_original_research",
            "Identifying_reliable_sources",
            "Citing_sources",
            "Notability",
            "Quotations",
            "Fringe_theories",
            "Article_titles",
            "Reliable_source_examples",
        ],
        &["article", "source", "neutral", "verify", "cite", "reliable", "fact", "balance", "quote", "research"],
        NormClass::UserContent,
    ),
    (
        &[
            "Civility",
            "Assume_good_faith",
            "No_personal_attacks",
            "Harassment",
            "Etiquette",
            "Dispute_resolution",
            "Talk_page_guidelines",
            "Consensus",
            "Ownership_of_content",
            "Please_do_not_bite_the_newcomers",
        ],
        &["civil", "talk", "personal", "attack", "faith", "dispute", "harass", "polite", "discuss", "newcomer"],
        NormClass::UserUser,
    ),
    (
        &[
            "Blocking_policy",
            "Banning_policy",
            "Administrators",
            "Deletion_policy",
            "Protection_policy",
            "Vandalism",
            "Arbitration",
            "Appealing_a_block",
            "Sockpuppetry",
            "Edit_warring",
        ],
        &["block", "ban", "admin", "delete", "protect", "vandal", "sanction", "arbitrate", "appeal", "tool"],
        NormClass::UserAdmin,
    ),
];

const SHARED_WORDS: [&str; 6] = ["page", "edit", "editor", "policy", "community", "wikipedia"];

/// Thirty pages in three planted themes of ten, created 2002 to 2008.
///
/// Each theme is a densely linked block led by its first page, the block
/// leaders cite each other, and a few pages link across blocks. Page text
/// draws mostly from a theme vocabulary and attention counters grow with
/// in-degree. The output is identical on every call.
pub fn fixture_corpus() -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f_726d);
    let mut pages = Vec::new();
    for (t, (titles, words, class)) in THEMES.iter().enumerate() {
        for (j, title) in titles.iter().enumerate() {
            let id = PageId((t * 10 + j) as u32);
            let year = 2002 + (j as i32 * 7) / 10;
            let created = Timestamp(Timestamp::year_start(year).secs() + rng.random_range(0..300) * DAY);
            let category = match j {
                0 | 1 => Category::Policy,
                2..=5 => Category::Guideline,
                6 | 7 => Category::Essay,
                _ => Category::Proposal,
            };
            let mut p = Page::new(id, *title, category, created);
            let mut tokens: BTreeMap<String, u64> = BTreeMap::new();
            for _ in 0..32 {
                let w = words[rng.random_range(0..words.len())];
                *tokens.entry(w.to_string()).or_insert(0) += 1;
            }
            for _ in 0..8 {
                let w = SHARED_WORDS[rng.random_range(0..SHARED_WORDS.len())];
                *tokens.entry(w.to_string()).or_insert(0) += 1;
            }
            p.token_counts = tokens;
            p.norm_class = Some(*class);
            p.page_size_bytes = rng.random_range(2_000..40_000);
            pages.push(p);
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for t in 0..3 {
        let base = t * 10;
        for j in 1..10 {
            pairs.push((base + j, base));
            if j >= 2 {
                pairs.push((base + j, base + 1));
                pairs.push((base + j, base + j - 1));
            }
            if j >= 4 {
                pairs.push((base + j, base + 2 + (j % 3)));
            }
        }
        pairs.push((base, base + 1));
        pairs.push((base + 1, base + 3));
        pairs.push((base, (base + 10) % 30));
    }
    pairs.extend([(5, 17), (14, 21), (23, 4), (27, 11), (9, 20)]);
    pairs.sort_unstable();
    pairs.dedup();
    pairs.retain(|&(a, b)| a != b);

    let mut links = Vec::new();
    let mut in_degree = vec![0u64; pages.len()];
    for (a, b) in pairs {
        let floor = pages[a].created_at.max(pages[b].created_at);
        let first_seen_at = Timestamp(floor.secs() + rng.random_range(1..120) * DAY);
        links.push(LinkEvent { src: PageId(a as u32), dst: PageId(b as u32), first_seen_at });
        in_degree[b] += 1;
    }
    for (p, &d) in pages.iter_mut().zip(&in_degree) {
        let base = 1 + d;
        p.page_views = base * 40_000 + rng.random_range(0..30_000);
        p.n_edits = base * 300 + rng.random_range(0..400);
        p.n_talk_edits = base * 200 + rng.random_range(0..300);
        p.n_editors = base * 60 + rng.random_range(0..80);
    }

    let mut points = Vec::new();
    let mut month = Month::new(2002, 1);
    let mut users = 120u64;
    while month < Month::new(2009, 1) {
        points.push(PopulationPoint { month, active_users: users });
        users += rng.random_range(20..60);
        month = month.next();
    }
    let population = PopulationSeries::new(points).expect("months increase");
    Corpus::new(pages, links, population).expect("fixture is valid")
}

/// Preferential-attachment growth: a seed clique of `m + 1` pages created
/// at the start of `first_year`, then the remaining pages spread evenly
/// over the following `years`. Each newcomer links to `m` distinct
/// existing pages chosen with probability proportional to in-degree + 1.
pub fn preferential_attachment_corpus(n: usize, m: usize, first_year: i32, years: i32, seed: u64) -> Corpus {
    assert!(n > m && m >= 1 && years >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Timestamp::year_start(first_year + 1).secs();
    let span = Timestamp::year_start(first_year + 1 + years).secs() - start;
    let grown = (n - m - 1) as i64;
    let mut pages = Vec::with_capacity(n);
    let mut links = Vec::new();
    let mut in_degree = vec![0u64; n];
    for i in 0..n {
        let created = if i <= m {
            Timestamp::year_start(first_year)
        } else {
            Timestamp(start + (i - m) as i64 * span / (grown + 1))
        };
        let category = [Category::Policy, Category::Guideline, Category::Essay][i % 3];
        pages.push(Page::new(PageId(i as u32), format_title(i), category, created));
        let targets: Vec<usize> = if i <= m {
            (0..=m).filter(|&j| j != i).collect()
        } else {
            let mut chosen: Vec<usize> = Vec::with_capacity(m);
            while chosen.len() < m {
                let total: u64 = (0..i).filter(|j| !chosen.contains(j)).map(|j| in_degree[j] + 1).sum();
                let mut r = rng.random_range(0..total);
                for j in (0..i).filter(|j| !chosen.contains(j)) {
                    let w = in_degree[j] + 1;
                    if r < w {
                        chosen.push(j);
                        break;
                    }
                    r -= w;
                }
            }
            chosen
        };
        for j in targets {
            in_degree[j] += 1;
            links.push(LinkEvent { src: PageId(i as u32), dst: PageId(j as u32), first_seen_at: created });
        }
    }
    Corpus::new(pages, links, PopulationSeries::default()).expect("generated corpus is valid")
}

fn format_title(i: usize) -> String {
    let mut s = String::from("Norm_");
    let digits = i.to_string();
    for _ in digits.len()..4 {
        s.push('0');
    }
    s.push_str(&digits);
    s
}

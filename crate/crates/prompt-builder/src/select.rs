//! Similarity-ranked demonstration selection.

use crate::{DemoPool, DemoSelectionConfig, Demonstration, PromptError};
use relational_model::{jaccard_tokens, tokenize};
use std::collections::BTreeSet;

/// Picks A×B demonstrations for a test question: the A databases
/// whose pooled question text best overlaps it, then the B best
/// items within each. Ties fall back to corpus order. The result is
/// ordered least similar first, so the strongest match is adjacent
/// to the test block; cross-domain pools never draw from the test
/// item's own database.
pub fn select_demonstrations(
    corpus: &[Demonstration],
    test_question: &str,
    test_db_id: &str,
    cfg: &DemoSelectionConfig,
) -> Result<Vec<Demonstration>, PromptError> {
    let needed = cfg.num_databases * cfg.per_database;
    let question = tokenize(test_question);

    let eligible: Vec<(usize, &Demonstration)> = corpus
        .iter()
        .enumerate()
        .filter(|(_, d)| {
            cfg.pool == DemoPool::InDomain || !d.db_id.eq_ignore_ascii_case(test_db_id)
        })
        .collect();

    // Databases in first-appearance order, each with its item indices.
    let mut dbs: Vec<(&str, Vec<usize>)> = Vec::new();
    for (idx, demo) in &eligible {
        match dbs.iter_mut().find(|(id, _)| id.eq_ignore_ascii_case(&demo.db_id)) {
            Some((_, items)) => items.push(*idx),
            None => dbs.push((&demo.db_id, vec![*idx])),
        }
    }

    // Only databases that can supply a full quota of B items count.
    let mut ranked_dbs: Vec<(usize, f64, &Vec<usize>)> = dbs
        .iter()
        .enumerate()
        .filter(|(_, (_, items))| items.len() >= cfg.per_database)
        .map(|(pos, (_, items))| {
            let mut pooled = BTreeSet::new();
            for &idx in items {
                pooled.extend(tokenize(&corpus[idx].question));
            }
            (pos, jaccard_tokens(&question, &pooled), items)
        })
        .collect();
    if ranked_dbs.len() < cfg.num_databases {
        return Err(PromptError::InsufficientPool {
            needed,
            reason: format!(
                "only {} database(s) hold {} item(s) each",
                ranked_dbs.len(),
                cfg.per_database
            ),
        });
    }
    ranked_dbs.sort_by(|(pa, sa, _), (pb, sb, _)| sb.total_cmp(sa).then(pa.cmp(pb)));
    ranked_dbs.truncate(cfg.num_databases);

    // Within each chosen database, the B closest questions.
    let mut chosen: Vec<Vec<&Demonstration>> = Vec::new();
    for (_, _, items) in &ranked_dbs {
        let mut scored: Vec<(usize, f64)> = items
            .iter()
            .map(|&idx| (idx, jaccard_tokens(&question, &tokenize(&corpus[idx].question))))
            .collect();
        scored.sort_by(|(ia, sa), (ib, sb)| sb.total_cmp(sa).then(ia.cmp(ib)));
        scored.truncate(cfg.per_database);
        scored.reverse();
        chosen.push(scored.into_iter().map(|(idx, _)| &corpus[idx]).collect());
    }

    // Least similar database first, best match last overall.
    chosen.reverse();
    Ok(chosen.into_iter().flatten().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DemoPool;

    fn demo(db: &str, question: &str) -> Demonstration {
        Demonstration {
            question: question.into(),
            db_id: db.into(),
            serialized_table: format!("{db}(a, b)"),
            gold_vql: "VISUALIZE bar SELECT a, b FROM t".into(),
        }
    }

    fn corpus() -> Vec<Demonstration> {
        vec![
            demo("flights", "How many flights per carrier?"),
            demo("flights", "Show total delay by airport as a bar chart"),
            demo("pets", "How many pets per owner?"),
            demo("pets", "Average pet weight by species"),
            demo("stores", "Total sales per store as a pie chart"),
            demo("stores", "How many stores per city?"),
        ]
    }

    fn cfg(a: usize, b: usize, pool: DemoPool) -> DemoSelectionConfig {
        DemoSelectionConfig { num_databases: a, per_database: b, pool }
    }

    #[test]
    fn quota_and_database_count_hold() {
        let picked = select_demonstrations(
            &corpus(),
            "How many owners per city?",
            "towns",
            &cfg(2, 2, DemoPool::InDomain),
        )
        .unwrap();
        assert_eq!(picked.len(), 4);
        let dbs: BTreeSet<&str> = picked.iter().map(|d| d.db_id.as_str()).collect();
        assert_eq!(dbs.len(), 2);
    }

    #[test]
    fn most_relevant_item_comes_last() {
        let picked = select_demonstrations(
            &corpus(),
            "How many pets per owner are there?",
            "towns",
            &cfg(2, 2, DemoPool::InDomain),
        )
        .unwrap();
        assert_eq!(picked.last().unwrap().question, "How many pets per owner?");
    }

    #[test]
    fn cross_domain_excludes_the_test_database() {
        let picked = select_demonstrations(
            &corpus(),
            "How many pets per owner?",
            "pets",
            &cfg(2, 2, DemoPool::CrossDomain),
        )
        .unwrap();
        assert!(picked.iter().all(|d| d.db_id != "pets"));
    }

    #[test]
    fn single_database_pool_cannot_cover_cross_domain() {
        let only_pets = vec![demo("pets", "How many pets?"), demo("pets", "Weight by species")];
        let err = select_demonstrations(
            &only_pets,
            "How many pets?",
            "pets",
            &cfg(1, 1, DemoPool::CrossDomain),
        )
        .unwrap_err();
        assert!(matches!(err, PromptError::InsufficientPool { needed: 1, .. }));
    }

    #[test]
    fn four_databases_one_each() {
        let mut pool = corpus();
        pool.push(demo("towns", "Population per town"));
        let picked = select_demonstrations(
            &pool,
            "Population per city?",
            "other",
            &cfg(4, 1, DemoPool::InDomain),
        )
        .unwrap();
        let dbs: BTreeSet<&str> = picked.iter().map(|d| d.db_id.as_str()).collect();
        assert_eq!(dbs.len(), 4);
    }

    #[test]
    fn short_databases_do_not_count_toward_the_quota() {
        let pool = vec![
            demo("solo", "Only one item here"),
            demo("pets", "How many pets per owner?"),
            demo("pets", "Average pet weight by species"),
        ];
        let picked =
            select_demonstrations(&pool, "How many?", "other", &cfg(1, 2, DemoPool::InDomain))
                .unwrap();
        assert!(picked.iter().all(|d| d.db_id == "pets"));
        assert!(select_demonstrations(&pool, "How many?", "other", &cfg(2, 2, DemoPool::InDomain))
            .is_err());
    }
}

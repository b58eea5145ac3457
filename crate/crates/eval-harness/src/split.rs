//! Seeded dataset splits.

use crate::{BenchmarkItem, EvalError};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Whether splits may share databases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Items split uniformly; a database may span parts.
    InDomain,
    /// Databases are partitioned first; no part shares one.
    CrossDomain,
}

fn part_sizes(n: usize, ratios: (u32, u32, u32)) -> (usize, usize) {
    let total = (ratios.0 + ratios.1 + ratios.2) as usize;
    assert!(total > 0, "ratios must not all be zero");
    (n * ratios.0 as usize / total, n * ratios.1 as usize / total)
}

/// Splits items into (train, valid, test) by the ratio triple,
/// deterministically under the seed. In-domain mode shuffles items;
/// cross-domain mode shuffles databases and keeps each database's
/// items together, so the parts share none.
pub fn split_dataset(
    items: &[BenchmarkItem],
    mode: SplitMode,
    ratios: (u32, u32, u32),
    seed: u64,
) -> Result<(Vec<BenchmarkItem>, Vec<BenchmarkItem>, Vec<BenchmarkItem>), EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        SplitMode::InDomain => {
            let mut shuffled: Vec<BenchmarkItem> = items.to_vec();
            shuffled.shuffle(&mut rng);
            let (train_n, valid_n) = part_sizes(shuffled.len(), ratios);
            let test = shuffled.split_off(train_n + valid_n);
            let valid = shuffled.split_off(train_n);
            Ok((shuffled, valid, test))
        }
        SplitMode::CrossDomain => {
            let mut dbs: Vec<&str> = Vec::new();
            for item in items {
                if !dbs.contains(&item.db_id.as_str()) {
                    dbs.push(&item.db_id);
                }
            }
            if dbs.len() < 3 {
                return Err(EvalError::TooFewDatabases { found: dbs.len() });
            }
            dbs.shuffle(&mut rng);
            let (train_n, valid_n) = part_sizes(dbs.len(), ratios);
            let pick = |slice: &[&str]| -> Vec<BenchmarkItem> {
                items.iter().filter(|i| slice.contains(&i.db_id.as_str())).cloned().collect()
            };
            Ok((
                pick(&dbs[..train_n]),
                pick(&dbs[train_n..train_n + valid_n]),
                pick(&dbs[train_n + valid_n..]),
            ))
        }
    }
}

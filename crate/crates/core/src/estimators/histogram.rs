use crate::error::{Error, Result};
use crate::sampler::OutcomeBatch;

/// Counts for one distinct outcome; `plus + minus == theta` when signs exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HistogramEntry {
    pub outcome: u32,
    pub theta: u64,
    pub plus: u64,
    pub minus: u64,
}

/// Distinct outcomes in ascending order with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionHistogram {
    entries: Vec<HistogramEntry>,
    total: u64,
    signed: bool,
}

impl CollisionHistogram {
    pub fn entries(&self) -> &[HistogramEntry] {
        &self.entries
    }

    /// `N_M`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn max_theta(&self) -> u64 {
        self.entries.iter().map(|e| e.theta).max().unwrap_or(0)
    }
}

/// Groups a batch by outcome in one pass (dense counting when the outcome
/// range is small, sorting otherwise).
pub fn build_histogram(batch: &OutcomeBatch) -> Result<CollisionHistogram> {
    let n = batch.b_values.len();
    if n == 0 {
        return Err(Error::InvalidConfig("empty outcome batch".into()));
    }
    let signs = batch.r_signs.as_deref();
    if let Some(s) = signs {
        if s.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.len() });
        }
    }
    let max = *batch.b_values.iter().max().expect("nonempty") as usize;
    let mut entries = Vec::new();
    if max < (4 * n).max(1 << 16) {
        let mut plus = vec![0u64; max + 1];
        let mut minus = vec![0u64; max + 1];
        match signs {
            Some(s) => {
                for (&b, &r) in batch.b_values.iter().zip(s) {
                    if r > 0 {
                        plus[b as usize] += 1;
                    } else {
                        minus[b as usize] += 1;
                    }
                }
            }
            None => batch.b_values.iter().for_each(|&b| plus[b as usize] += 1),
        }
        for (j, (&p, &m)) in plus.iter().zip(&minus).enumerate() {
            if p + m > 0 {
                entries.push(HistogramEntry { outcome: j as u32, theta: p + m, plus: p, minus: m });
            }
        }
    } else {
        let mut pairs: Vec<(u32, i8)> = match signs {
            Some(s) => batch.b_values.iter().copied().zip(s.iter().copied()).collect(),
            None => batch.b_values.iter().map(|&b| (b, 1)).collect(),
        };
        pairs.sort_unstable_by_key(|p| p.0);
        for (b, r) in pairs {
            match entries.last_mut() {
                Some(e) if e.outcome == b => {
                    e.theta += 1;
                    if r > 0 {
                        e.plus += 1
                    } else {
                        e.minus += 1
                    }
                }
                _ => entries.push(HistogramEntry {
                    outcome: b,
                    theta: 1,
                    plus: u64::from(r > 0),
                    minus: u64::from(r < 0),
                }),
            }
        }
    }
    Ok(CollisionHistogram { entries, total: n as u64, signed: signs.is_some() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_repeated_outcomes() {
        let h = build_histogram(&OutcomeBatch::unsigned(vec![0, 0, 1, 0])).unwrap();
        assert_eq!(h.entries().iter().map(|e| (e.outcome, e.theta)).collect::<Vec<_>>(), vec![(0, 3), (1, 1)]);
    }

    #[test]
    fn counts_signs() {
        let h = build_histogram(&OutcomeBatch::signed(vec![0, 0, 0], vec![1, -1, 1]).unwrap()).unwrap();
        assert_eq!(h.entries()[0], HistogramEntry { outcome: 0, theta: 3, plus: 2, minus: 1 });
    }

    #[test]
    fn sparse_path_matches_dense_path() {
        let b = vec![5_000_000, 3, 5_000_000, 3, 7];
        let h = build_histogram(&OutcomeBatch::unsigned(b)).unwrap();
        let got: Vec<_> = h.entries().iter().map(|e| (e.outcome, e.theta)).collect();
        assert_eq!(got, vec![(3, 2), (7, 1), (5_000_000, 2)]);
    }
}

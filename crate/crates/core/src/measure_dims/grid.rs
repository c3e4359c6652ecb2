use crate::error::{Error, Result};
use crate::game::Measure;

pub const DEFAULT_GRID_BUDGET: u64 = 1_000_000;

/// Number of compositions of g into n parts.
pub fn grid_size(n_labels: usize, g: u32) -> u64 {
    // C(g + n - 1, n - 1), saturating.
    let k = (n_labels - 1) as u64;
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c * (g as u128 + i as u128) / i as u128;
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

pub fn measure_grid(n_labels: usize, g: u32) -> Result<Vec<Measure>> {
    measure_grid_with_budget(n_labels, g, DEFAULT_GRID_BUDGET)
}

/// Every measure with weights in multiples of 1/g, lexicographically
/// descending in the weight vector (deltas on low labels first).
pub fn measure_grid_with_budget(n_labels: usize, g: u32, budget: u64) -> Result<Vec<Measure>> {
    let size = grid_size(n_labels, g);
    if size > budget {
        return Err(Error::GridTooLarge {
            size,
            limit: budget,
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    let mut w = vec![0u32; n_labels];
    fill(&mut w, 0, g, g, &mut out);
    Ok(out)
}

fn fill(w: &mut [u32], i: usize, left: u32, g: u32, out: &mut Vec<Measure>) {
    if i + 1 == w.len() {
        w[i] = left;
        out.push(Measure::new(w.to_vec(), g).expect("weights sum to g"));
        return;
    }
    for v in (0..=left).rev() {
        w[i] = v;
        fill(w, i + 1, left - v, g, out);
    }
    w[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let g = measure_grid(2, 2).unwrap();
        let want: Vec<Measure> = vec![
            Measure::new(vec![2, 0], 2).unwrap(),
            Measure::new(vec![1, 1], 2).unwrap(),
            Measure::new(vec![0, 2], 2).unwrap(),
        ];
        assert_eq!(g, want);
        assert_eq!(measure_grid(3, 1).unwrap().len(), 3);
        assert_eq!(measure_grid(6, 3).unwrap().len(), 56);
        assert_eq!(grid_size(6, 3), 56);
        assert!(matches!(
            measure_grid_with_budget(6, 6, 100),
            Err(Error::GridTooLarge { size: 462, .. })
        ));
    }
}

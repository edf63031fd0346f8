//! The tridiagonal matrix model with normal diagonal, Gamma superdiagonal and
//! unit subdiagonal, and Monte-Carlo estimation of joint cumulants of traces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::cumulant_polynomial;
use crate::partition::all_set_partitions;
use crate::perm::NumericalPartition;

/// `Tri_N` with `Tri(i,i) = ξ_i`, `Tri(i,i+1) = η_i` and `Tri(i+1,i) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSample {
    diagonal: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalSample {
    pub fn from_entries(diagonal: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || upper.len() + 1 != diagonal.len() {
            return Err(Error::SizeMismatch(diagonal.len(), upper.len() + 1));
        }
        Ok(TridiagonalSample { diagonal, upper })
    }

    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `tr Tri^k`, computed from the returning walks of length `k` at each
    /// diagonal position (a walk of length `k` never strays beyond `k/2`).
    pub fn trace_power(&self, k: u32) -> f64 {
        let n = self.n();
        let k = k as usize;
        if k == 0 {
            return n as f64;
        }
        let reach = k / 2;
        let mut cur = vec![0.0; 2 * reach + 1];
        let mut next = cur.clone();
        let mut total = 0.0;
        for i in 0..n {
            let lo = i.saturating_sub(reach);
            let hi = (i + reach).min(n - 1);
            cur.fill(0.0);
            cur[i - lo] = 1.0;
            for _ in 0..k {
                for r in lo..=hi {
                    let x = r - lo;
                    let mut s = self.diagonal[r] * cur[x];
                    if r < hi {
                        s += self.upper[r] * cur[x + 1];
                    }
                    if r > lo {
                        s += cur[x - 1];
                    }
                    next[x] = s;
                }
                std::mem::swap(&mut cur, &mut next);
            }
            total += cur[i - lo];
        }
        total
    }
}

/// Draws `Tri_N` using `rng`; `η_i` is a sum of `i` unit exponentials.
pub fn sample_tridiagonal_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> TridiagonalSample {
    let diagonal = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let upper = (1..n).map(|i| (0..i).map(|_| rng.sample::<f64, _>(Exp1)).sum()).collect();
    TridiagonalSample { diagonal, upper }
}

pub fn sample_tridiagonal(n: usize, seed: u64) -> Result<TridiagonalSample> {
    if n == 0 {
        return Err(Error::Invalid("matrix size must be positive".into()));
    }
    Ok(sample_tridiagonal_with(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Sum by recursive halving.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        len if len <= 8 => xs.iter().sum(),
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// A Monte-Carlo estimate of `κ(tr Tri^{λ_1}, …, tr Tri^{λ_ℓ})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub lambda: Vec<usize>,
    #[serde(rename = "N")]
    pub levels: usize,
    pub samples: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: i128,
    pub seed: u64,
}

impl McEstimate {
    /// Distance from the exact value in units of the reported standard error.
    pub fn z_score(&self) -> f64 {
        (self.estimate - self.exact as f64) / self.stderr
    }
}

const GROUPS: usize = 100;

/// Estimates the joint cumulant from `samples` independent draws, split into
/// groups with their own random streams. The estimator is the k-statistic for
/// `ℓ ≤ 3` and the plug-in cumulant beyond; the error is a grouped jackknife.
pub fn mc_cumulant(lambda: &NumericalPartition, levels: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::Invalid("at least two samples are needed".into()));
    }
    if levels == 0 || lambda.is_empty() {
        return Err(Error::Invalid("empty matrix or partition".into()));
    }
    let l = lambda.len();
    let groups = GROUPS.min(samples);
    let powers: Vec<u32> = lambda.parts().iter().map(|&p| p as u32).collect();
    let draws: Vec<Vec<Vec<f64>>> = (0..groups)
        .into_par_iter()
        .map(|g| {
            let count = samples / groups + usize::from(g < samples % groups);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(g as u64);
            (0..count)
                .map(|_| {
                    let t = sample_tridiagonal_with(levels, &mut rng);
                    powers.iter().map(|&k| t.trace_power(k)).collect()
                })
                .collect()
        })
        .collect();
    let mean: Vec<f64> = (0..l)
        .map(|c| {
            let partial: Vec<f64> = draws.iter().map(|d| pairwise_sum(&d.iter().map(|x| x[c]).collect::<Vec<_>>())).collect();
            pairwise_sum(&partial) / samples as f64
        })
        .collect();
    let subsets = 1usize << l;
    let group_sums: Vec<Vec<f64>> = draws
        .par_iter()
        .map(|d| {
            (0..subsets)
                .map(|s| {
                    let prods: Vec<f64> = d
                        .iter()
                        .map(|x| (0..l).filter(|c| s >> c & 1 == 1).map(|c| x[c] - mean[c]).product())
                        .collect();
                    pairwise_sum(&prods)
                })
                .collect()
        })
        .collect();
    let counts: Vec<f64> = draws.iter().map(|d| d.len() as f64).collect();
    let total: Vec<f64> = (0..subsets)
        .map(|s| pairwise_sum(&group_sums.iter().map(|g| g[s]).collect::<Vec<_>>()))
        .collect();
    let partitions = all_set_partitions(l);
    let estimator = |sums: &[f64], n: f64| estimate_from_sums(l, &mean, &partitions, sums, n);
    let estimate = estimator(&total, samples as f64);
    let leave_out: Vec<f64> = (0..groups)
        .map(|g| {
            let sums: Vec<f64> = (0..subsets).map(|s| total[s] - group_sums[g][s]).collect();
            estimator(&sums, samples as f64 - counts[g])
        })
        .collect();
    let avg = pairwise_sum(&leave_out) / groups as f64;
    let spread: Vec<f64> = leave_out.iter().map(|x| (x - avg).powi(2)).collect();
    let stderr = ((groups as f64 - 1.0) / groups as f64 * pairwise_sum(&spread)).sqrt();
    Ok(McEstimate {
        lambda: lambda.parts().to_vec(),
        levels,
        samples,
        estimate,
        stderr,
        exact: cumulant_polynomial(lambda)?.evaluate(levels as i128),
        seed,
    })
}

/// The estimator from centered product sums `sums[S] = Σ ∏_{c∈S} (x_c − mean_c)`.
fn estimate_from_sums(
    l: usize,
    mean: &[f64],
    partitions: &[crate::partition::SetPartition],
    sums: &[f64],
    n: f64,
) -> f64 {
    let s = |cs: &[usize]| sums[cs.iter().fold(0, |acc, &c| acc | (1 << c))];
    match l {
        1 => mean[0] + s(&[0]) / n,
        2 => (n * s(&[0, 1]) - s(&[0]) * s(&[1])) / (n * (n - 1.0)),
        3 => {
            let (a, b, c) = (s(&[0]), s(&[1]), s(&[2]));
            let cross = s(&[0, 1]) * c + s(&[0, 2]) * b + s(&[1, 2]) * a;
            (n * n * s(&[0, 1, 2]) - n * cross + 2.0 * a * b * c) / (n * (n - 1.0) * (n - 2.0))
        }
        _ => partitions
            .iter()
            .map(|p| {
                let k = p.num_blocks();
                let mu = if k % 2 == 1 { 1.0 } else { -1.0 } * (1..k).map(|x| x as f64).product::<f64>();
                mu * p.blocks().iter().map(|b| s(b) / n).product::<f64>()
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_is_a_normal() {
        let t = sample_tridiagonal(1, 3).unwrap();
        assert!(t.upper().is_empty());
        assert_eq!(t.trace_power(3), t.diagonal()[0].powi(3));
        assert!(sample_tridiagonal(0, 3).is_err());
    }

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(sample_tridiagonal(6, 11).unwrap(), sample_tridiagonal(6, 11).unwrap());
    }

    #[test]
    fn trace_power_matches_dense_product() {
        let t = sample_tridiagonal(7, 5).unwrap();
        let n = t.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = t.diagonal()[i];
            if i + 1 < n {
                m[i][i + 1] = t.upper()[i];
                m[i + 1][i] = 1.0;
            }
        }
        let mut p = m.clone();
        for k in 1..=6u32 {
            let tr: f64 = (0..n).map(|i| p[i][i]).sum();
            assert!((tr - t.trace_power(k)).abs() < 1e-9 * (1.0 + tr.abs()), "k={k}");
            p = (0..n).map(|i| (0..n).map(|j| (0..n).map(|r| p[i][r] * m[r][j]).sum()).collect()).collect();
        }
    }

    #[test]
    fn second_moment_of_trace() {
        let est = mc_cumulant(&NumericalPartition::new(vec![2]).unwrap(), 10, 20_000, 1).unwrap();
        assert_eq!(est.exact, 100);
        assert!(est.z_score().abs() < 4.0, "{est:?}");
    }

    #[test]
    fn plug_in_agrees_with_k_statistics_on_large_samples() {
        let sums_from = |xs: &[[f64; 2]]| {
            let m = [0, 1].map(|c| xs.iter().map(|x| x[c]).sum::<f64>() / xs.len() as f64);
            let mut sums = vec![0.0; 4];
            for x in xs {
                for s in 0..4usize {
                    sums[s] += (0..2).filter(|c| s >> c & 1 == 1).map(|c| x[c] - m[c]).product::<f64>();
                }
            }
            (m, sums)
        };
        let xs: Vec<[f64; 2]> = (0..50).map(|i| [i as f64, (i * i % 7) as f64]).collect();
        let (m, sums) = sums_from(&xs);
        let parts = all_set_partitions(2);
        let n = xs.len() as f64;
        let k = estimate_from_sums(2, &m, &parts, &sums, n);
        let plug: f64 = parts
            .iter()
            .map(|p| {
                let kb = p.num_blocks();
                let mu = if kb % 2 == 1 { 1.0 } else { -1.0 };
                mu * p.blocks().iter().map(|b| sums[b.iter().fold(0, |a, &c| a | (1 << c))] / n).product::<f64>()
            })
            .sum();
        assert!((k * (n - 1.0) / n - plug).abs() < 1e-9);
    }
}

//! Exhaustive and randomized instance generation: all small profiles for
//! the enumeration suites, seeded random elections, random weight vectors,
//! and random geometric (L1) instances with exact rational coordinates.

use crate::election::{Election, WeightVector};
use crate::metric::MetricSpace;
use crate::ratio::{rat_usize, Rat};
use num::bigint::BigInt;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All strict rankings of `0..m` in lexicographic order (`m!` of them).
pub fn all_rankings(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..m).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..m.saturating_sub(1))
            .rev()
            .find(|&i| current[i] < current[i + 1])
        else {
            return out;
        };
        let j = (i + 1..m).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

/// Iterates over every profile of `n` voters over `m` candidates
/// (`(m!)^n` elections).
pub fn all_profiles(n: usize, m: usize) -> impl Iterator<Item = Election> {
    let rankings = all_rankings(m);
    let total = rankings
        .len()
        .checked_pow(n as u32)
        .expect("profile space too large");
    (0..total).map(move |mut code| {
        let profile = (0..n)
            .map(|_| {
                let r = rankings[code % rankings.len()].clone();
                code /= rankings.len();
                r
            })
            .collect();
        Election::new(profile).unwrap()
    })
}

/// Every election with `1 <= n <= max_n`, `1 <= m <= max_m`.
pub fn all_small_elections(max_n: usize, max_m: usize) -> impl Iterator<Item = Election> {
    (1..=max_n).flat_map(move |n| (1..=max_m).flat_map(move |m| all_profiles(n, m)))
}

/// Seeded random profile; every ranking drawn uniformly.
pub fn random_election(n: usize, m: usize, seed: u64) -> Election {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_election_with(&mut rng, n, m)
}

pub fn random_election_with(rng: &mut impl Rng, n: usize, m: usize) -> Election {
    let rankings = (0..n)
        .map(|_| {
            let mut r: Vec<usize> = (0..m).collect();
            // Fisher-Yates
            for i in (1..m).rev() {
                r.swap(i, rng.gen_range(0..=i));
            }
            r
        })
        .collect();
    Election::new(rankings).unwrap()
}

/// Random normalized weight vector with small denominators (integer counts
/// 0..=9 over their sum; at least one positive).
pub fn random_weights_with(rng: &mut impl Rng, k: usize) -> WeightVector {
    loop {
        let counts: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=9)).collect();
        if counts.iter().sum::<u64>() > 0 {
            return WeightVector::from_counts(&counts).unwrap();
        }
    }
}

/// A sampled geometric instance: points in `[0,1]^dim` on the `1/10^6`
/// grid, L1 distances, induced profile (ties broken by candidate index),
/// and the smallest decisiveness parameter the instance satisfies.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    /// Voter coordinates first, then candidates; entries are numerators
    /// over the fixed denominator `10^6`.
    pub coordinates: Vec<Vec<u32>>,
    pub metric: MetricSpace,
    pub election: Election,
    pub min_alpha: Rat,
}

pub const COORD_DENOM: u32 = 1_000_000;

pub fn random_instance(n: usize, m: usize, dim: usize, seed: u64) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance_with(&mut rng, n, m, dim)
}

pub fn random_instance_with(rng: &mut impl Rng, n: usize, m: usize, dim: usize) -> RandomInstance {
    assert!(n >= 1 && m >= 1 && dim >= 1);
    let coordinates: Vec<Vec<u32>> = (0..n + m)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..=COORD_DENOM)).collect())
        .collect();
    let denom = BigInt::from(COORD_DENOM);
    let l1 = |x: &[u32], y: &[u32]| -> Rat {
        let sum: i64 = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| (i64::from(a) - i64::from(b)).abs())
            .sum();
        Rat::new(BigInt::from(sum), denom.clone())
    };
    let size = n + m;
    let mut d = vec![vec![Rat::zero(); size]; size];
    for x in 0..size {
        for y in x + 1..size {
            let v = l1(&coordinates[x], &coordinates[y]);
            d[x][y] = v.clone();
            d[y][x] = v;
        }
    }
    let metric = MetricSpace::validate(n, m, d).expect("L1 distances always form a pseudometric");
    let election = metric.induced_profile();
    let min_alpha = metric
        .min_alpha(&election)
        .expect("induced profile is consistent by construction");
    RandomInstance {
        coordinates,
        metric,
        election,
        min_alpha,
    }
}

/// Random vector summing to `n` with entries in `[0, n/w)`, for the
/// summation-bound checks. `w` must lie in `(0, 1]`; needs `m >= 2`
/// when `w = 1`.
pub fn random_feasible_vector_with(rng: &mut impl Rng, m: usize, w: &Rat, n: &Rat) -> Vec<Rat> {
    assert!(m >= 2);
    loop {
        let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=20)).collect();
        if counts.iter().sum::<u64>() == 0 {
            continue;
        }
        let total = rat_usize(counts.iter().sum::<u64>() as usize);
        let xs: Vec<Rat> = counts
            .iter()
            .map(|&c| rat_usize(c as usize) * n / &total)
            .collect();
        let cap = n / w;
        if xs.iter().all(|x| *x < cap) {
            return xs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranking_counts() {
        assert_eq!(all_rankings(1).len(), 1);
        assert_eq!(all_rankings(3).len(), 6);
        assert_eq!(all_rankings(4).len(), 24);
        // Lexicographic start and end.
        let r = all_rankings(3);
        assert_eq!(r[0], vec![0, 1, 2]);
        assert_eq!(r[5], vec![2, 1, 0]);
    }

    #[test]
    fn profile_space_size() {
        assert_eq!(all_profiles(4, 3).count(), 1296);
        assert_eq!(all_small_elections(3, 3).count(), 3 + 14 + 258);
    }

    #[test]
    fn random_election_is_seed_deterministic() {
        let a = random_election(5, 4, 42);
        let b = random_election(5, 4, 42);
        assert_eq!(a, b);
        assert_ne!(a, random_election(5, 4, 43));
    }

    #[test]
    fn random_instance_is_consistent() {
        let inst = random_instance(4, 3, 2, 7);
        assert!(inst.metric.consistent_with(&inst.election).unwrap());
        assert!(inst
            .metric
            .is_alpha_decisive(&inst.election, &inst.min_alpha)
            .unwrap());
        let same = random_instance(4, 3, 2, 7);
        assert_eq!(inst.election, same.election);
        assert_eq!(inst.min_alpha, same.min_alpha);
    }
}

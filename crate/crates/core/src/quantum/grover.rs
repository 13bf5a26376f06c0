//! Grover search over an index set `0..N` with `M` marked indices.
//!
//! The statevector starts uniform; each iteration applies the phase oracle
//! `|x> -> (-1)^B(x) |x>` and then the reflection `2|phi><phi| - I`, done as
//! the rank-one update `a <- 2 * mean(a) - a`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{amp_sum, norm_sqr, sample_index, QueryLedger};
use crate::{Error, Result};

/// Largest domain simulated amplitude by amplitude.
pub const STATEVECTOR_MAX: usize = 1 << 20;

fn check_counts(n: u64, m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::NoMarkedElement);
    }
    if m > n {
        return Err(Error::param("more marked elements than the domain holds"));
    }
    Ok(())
}

/// `floor((pi/4) * sqrt(N/M))`.
pub fn grover_iterations(n: u64, m: u64) -> Result<u64> {
    check_counts(n, m)?;
    Ok(libm::floor(FRAC_PI_4 * libm::sqrt(n as f64 / m as f64)) as u64)
}

/// `sin^2((2R + 1) * asin(sqrt(M/N)))`.
pub fn grover_success_prob(n: u64, m: u64, r: u64) -> Result<f64> {
    check_counts(n, m)?;
    let theta = libm::asin(libm::sqrt(m as f64 / n as f64));
    let s = libm::sin((2 * r + 1) as f64 * theta);
    Ok(s * s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroverInstance {
    domain_size: usize,
    marked: Vec<usize>,
    iterations: u64,
    seed: u64,
}

impl GroverInstance {
    /// `marked` is sorted and deduplicated; every entry must be `< domain_size`.
    pub fn new(domain_size: usize, mut marked: Vec<usize>, iterations: u64, seed: u64) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::param("empty search domain"));
        }
        marked.sort_unstable();
        marked.dedup();
        if marked.last().is_some_and(|&m| m >= domain_size) {
            return Err(Error::param("marked index outside the domain"));
        }
        Ok(GroverInstance {
            domain_size,
            marked,
            iterations,
            seed,
        })
    }

    /// Instance marking every index where `predicate` holds.
    pub fn from_predicate(
        domain_size: usize,
        predicate: impl Fn(usize) -> bool,
        iterations: u64,
        seed: u64,
    ) -> Result<Self> {
        let marked = (0..domain_size).filter(|&i| predicate(i)).collect();
        GroverInstance::new(domain_size, marked, iterations, seed)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Clone, Debug)]
pub struct GroverRun {
    /// Measurement distribution over `0..N`.
    pub probabilities: Vec<f64>,
    /// Total probability on marked indices.
    pub marked_probability: f64,
    pub ledger: QueryLedger,
    /// Largest `|norm^2 - 1|` seen after any operator.
    pub max_norm_drift: f64,
}

fn evolve(inst: &GroverInstance) -> Result<(Vec<Complex64>, QueryLedger, f64)> {
    let n = inst.domain_size;
    if n > STATEVECTOR_MAX {
        return Err(Error::capacity(alloc::format!(
            "statevector of {n} amplitudes exceeds {STATEVECTOR_MAX}"
        )));
    }
    let mut amps = alloc::vec![Complex64::new(1.0 / libm::sqrt(n as f64), 0.0); n];
    let mut ledger = QueryLedger::new();
    let mut drift = (norm_sqr(&amps) - 1.0).abs();
    for _ in 0..inst.iterations {
        for &i in &inst.marked {
            amps[i] = -amps[i];
        }
        ledger.charge(1);
        drift = drift.max((norm_sqr(&amps) - 1.0).abs());

        let mean = amp_sum(&amps) / n as f64;
        for a in amps.iter_mut() {
            *a = 2.0 * mean - *a;
        }
        drift = drift.max((norm_sqr(&amps) - 1.0).abs());
    }
    Ok((amps, ledger, drift))
}

pub fn grover_run_statevector(inst: &GroverInstance) -> Result<GroverRun> {
    let (amps, ledger, max_norm_drift) = evolve(inst)?;
    let probabilities: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
    let marked_probability = inst.marked.iter().map(|&i| probabilities[i]).sum();
    Ok(GroverRun {
        probabilities,
        marked_probability,
        ledger,
        max_norm_drift,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroverSample {
    pub index: usize,
    pub iterations: u64,
    pub ledger: QueryLedger,
}

/// One measurement after `iterations` Grover iterations.
///
/// Up to [`STATEVECTOR_MAX`] the amplitudes are simulated. Beyond that the
/// marked/unmarked split is drawn from the closed form and the index is
/// uniform within its class, which is exact because the evolution never
/// distinguishes members of a class.
pub fn grover_sample_marked<R: Rng>(
    domain_size: usize,
    marked: &[usize],
    iterations: u64,
    rng: &mut R,
) -> Result<GroverSample> {
    let inst = GroverInstance::new(domain_size, marked.to_vec(), iterations, 0)?;
    let mut ledger = QueryLedger::new();
    let index = if inst.marked.is_empty() {
        // the oracle is the identity and the uniform state is a fixed point
        ledger.charge(iterations);
        rng.gen_range(0..domain_size)
    } else if domain_size <= STATEVECTOR_MAX {
        let (amps, l, _) = evolve(&inst)?;
        ledger = l;
        sample_index(&amps, rng)
    } else {
        ledger.charge(iterations);
        let m = inst.marked.len();
        let p_marked = grover_success_prob(domain_size as u64, m as u64, iterations)?;
        if rng.gen::<f64>() < p_marked {
            inst.marked[rng.gen_range(0..m)]
        } else {
            // uniform over unmarked indices
            loop {
                let i = rng.gen_range(0..domain_size);
                if inst.marked.binary_search(&i).is_err() {
                    break i;
                }
            }
        }
    };
    Ok(GroverSample {
        index,
        iterations,
        ledger,
    })
}

/// Result of [`grover_search_unknown`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownSearch {
    /// A marked index, if one was measured.
    pub index: Option<usize>,
    pub measurements: u32,
    pub ledger: QueryLedger,
}

/// Grover search when the number of marked indices is unknown, following
/// Boyer, Brassard, Hoyer and Tapp: each measurement runs `j` iterations
/// with `j` uniform below a bound `m` that starts at 1 and grows by 6/5
/// after every miss, capped at `sqrt(N)`. The search gives up after
/// `patience` misses at the cap. Each measured index is checked against
/// `marked` classically.
pub fn grover_search_unknown<R: Rng>(
    domain_size: usize,
    marked: &[usize],
    patience: u32,
    rng: &mut R,
) -> Result<UnknownSearch> {
    if patience == 0 {
        return Err(Error::param("patience must be at least 1"));
    }
    let mut sorted = marked.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let cap = libm::sqrt(domain_size as f64);
    let mut bound = 1.0f64;
    let mut misses_at_cap = 0;
    let mut ledger = QueryLedger::new();
    let mut measurements = 0;
    loop {
        let j = rng.gen_range(0..libm::ceil(bound).max(1.0) as u64);
        let s = grover_sample_marked(domain_size, &sorted, j, rng)?;
        ledger.charge(s.ledger.queries());
        measurements += 1;
        if sorted.binary_search(&s.index).is_ok() {
            return Ok(UnknownSearch {
                index: Some(s.index),
                measurements,
                ledger,
            });
        }
        if bound >= cap {
            misses_at_cap += 1;
            if misses_at_cap >= patience {
                return Ok(UnknownSearch {
                    index: None,
                    measurements,
                    ledger,
                });
            }
        }
        bound = (bound * 1.2).min(cap);
    }
}

/// Grover search for an index satisfying `predicate`, iteration count tuned
/// for a single marked element. The caller verifies the result.
pub fn grover_sample(predicate: impl Fn(usize) -> bool, domain_size: usize, seed: u64) -> Result<GroverSample> {
    let marked: Vec<usize> = (0..domain_size).filter(|&i| predicate(i)).collect();
    let iterations = grover_iterations(domain_size as u64, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grover_sample_marked(domain_size, &marked, iterations, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn iteration_counts() {
        assert_eq!(grover_iterations(4, 1).unwrap(), 1);
        assert_eq!(grover_iterations(7, 7).unwrap(), 0);
        assert_eq!(grover_iterations(1 << 16, 1).unwrap(), 201);
        assert_eq!(grover_iterations(4, 0), Err(Error::NoMarkedElement));
        assert!(grover_iterations(4, 5).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert!((grover_success_prob(4, 1, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((grover_success_prob(16, 3, 0).unwrap() - 3.0 / 16.0).abs() < 1e-15);
        assert!(grover_success_prob(1 << 16, 1, 201).unwrap() >= 0.99);
    }

    #[test]
    fn unknown_count_search_finds_any_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in [1usize, 2, 4, 9, 64, 128, 200] {
            let marked: Vec<usize> = (0..m).map(|i| (i * 37) % 256).collect();
            for _ in 0..20 {
                let s = grover_search_unknown(256, &marked, 5, &mut rng).unwrap();
                assert!(marked.contains(&s.index.unwrap()), "m = {m}");
            }
        }
        let none = grover_search_unknown(256, &[], 3, &mut rng).unwrap();
        assert_eq!(none.index, None);
        assert!(none.ledger.queries() > 0);
    }

    #[test]
    fn four_element_search_is_certain() {
        let inst = GroverInstance::new(4, vec![2], 1, 0).unwrap();
        let run = grover_run_statevector(&inst).unwrap();
        assert!((run.probabilities[2] - 1.0).abs() < 1e-15);
        assert_eq!(run.ledger.queries(), 1);
        for seed in 0..10 {
            assert_eq!(grover_sample(|i| i == 2, 4, seed).unwrap().index, 2);
        }
    }

    #[test]
    fn statevector_matches_closed_form_at_1024() {
        let inst = GroverInstance::new(1024, vec![77], 25, 0).unwrap();
        let run = grover_run_statevector(&inst).unwrap();
        let closed = grover_success_prob(1024, 1, 25).unwrap();
        assert!((run.marked_probability - closed).abs() < 1e-9);
        assert!(run.max_norm_drift < 1e-12);
    }

    #[test]
    fn capacity_guard() {
        let inst = GroverInstance::new(STATEVECTOR_MAX + 1, vec![0], 1, 0).unwrap();
        assert!(matches!(grover_run_statevector(&inst), Err(Error::Capacity(_))));
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = grover_sample(|i| i % 97 == 5, 1 << 10, 42).unwrap();
        let b = grover_sample(|i| i % 97 == 5, 1 << 10, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn closed_form_sampler_above_statevector_limit() {
        let n = STATEVECTOR_MAX * 2;
        let marked = [123_456usize];
        let r = grover_iterations(n as u64, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hits = (0..50)
            .filter(|_| grover_sample_marked(n, &marked, r, &mut rng).unwrap().index == marked[0])
            .count();
        assert!(hits >= 48);
    }
}

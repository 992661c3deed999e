//! Shared fixtures for the benchmarks: a standard rank-3 presentation and
//! seeded random words, so benchmark inputs are reproducible across runs.

use artin_geodesic::presentation::rank3;
use artin_geodesic::{CoxeterLabel, Letter, Presentation, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed shared by all benchmark inputs.
pub const BENCH_SEED: u64 = 0x9e3779b97f4a7c15;

/// The rank-3 presentation with labels m(a,b) = 3, m(a,c) = 2, m(b,c) = 5.
pub fn braid325() -> Presentation {
    rank3(
        CoxeterLabel::Finite(3),
        CoxeterLabel::Finite(2),
        CoxeterLabel::Finite(5),
    )
}

/// A uniformly random word of the given length over the presentation's
/// letters.
pub fn random_word(len: usize, pres: &Presentation, rng: &mut impl Rng) -> Word {
    let gens: Vec<_> = pres.generators().collect();
    Word(
        (0..len)
            .map(|_| Letter {
                name: gens[rng.gen_range(0..gens.len())],
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
            })
            .collect(),
    )
}

/// One random word per requested length, all drawn from [`BENCH_SEED`].
pub fn inputs(lengths: &[usize], pres: &Presentation) -> Vec<(usize, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(BENCH_SEED);
    lengths
        .iter()
        .map(|&len| (len, random_word(len, pres, &mut rng)))
        .collect()
}

//! Seeded samplers for words, automorphisms and perturbed expansions.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::automorphism::{catalogue, FreeGroupAutomorphism};
use super::expansion::{free_expansion_with_logs, Expansion};
use super::group::GroupWord;
use crate::free_lie::{FreeLie, LieElement};
use crate::rational::ratio;

/// A random freely reduced word of the given length.
pub fn random_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> GroupWord {
    let mut w = GroupWord::empty();
    while w.len() < len {
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        w = w.mul(&GroupWord(vec![(rng.gen_range(0..n), e)]));
    }
    w
}

/// A left-normed commutator `[[..[a_1, a_2], ..], a_weight]` of signed generators,
/// avoiding `avoid`, with the first two entries distinct so it is nontrivial.
pub fn random_commutator<R: Rng>(
    n: usize,
    weight: usize,
    avoid: Option<usize>,
    rng: &mut R,
) -> GroupWord {
    let pool: Vec<usize> = (0..n).filter(|&i| Some(i) != avoid).collect();
    assert!(pool.len() >= 2 || weight == 1, "not enough generators for a commutator");
    let signed = |i: usize, rng: &mut R| {
        if rng.gen_bool(0.5) {
            GroupWord::generator(i)
        } else {
            GroupWord::generator_inverse(i)
        }
    };
    let first = *pool.choose(rng).expect("nonempty pool");
    let mut c = signed(first, rng);
    for step in 1..weight {
        let next = loop {
            let j = *pool.choose(rng).expect("nonempty pool");
            if step > 1 || j != first {
                break j;
            }
        };
        c = GroupWord::commutator(&c, &signed(next, rng));
    }
    c
}

/// One basic element of the Andreadakis term `A(m)` of `Aut(F_n)`.
fn basic_filtered<R: Rng>(n: usize, m: usize, rng: &mut R) -> FreeGroupAutomorphism {
    let mut kinds = vec![0u8];
    if n >= 3 {
        kinds.push(1);
    }
    if m == 1 {
        kinds.push(2);
    }
    match *kinds.choose(rng).expect("nonempty") {
        0 => catalogue::conjugation(n, &random_commutator(n, m, None, rng)),
        1 => {
            let i = rng.gen_range(0..n);
            catalogue::multiply_by(n, i, &random_commutator(n, m + 1, Some(i), rng))
        }
        _ => {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            catalogue::partial_conjugation(n, i, j)
        }
    }
}

/// A random automorphism in `A(m)`: a product of one or two basic elements,
/// each inverted with probability one half.
pub fn random_filtered_automorphism<R: Rng>(n: usize, m: usize, rng: &mut R) -> FreeGroupAutomorphism {
    assert!(n >= 2 && m >= 1);
    let factors = rng.gen_range(1..=2);
    let mut phi = FreeGroupAutomorphism::identity(n);
    for _ in 0..factors {
        let mut f = basic_filtered(n, m, rng);
        if rng.gen_bool(0.5) {
            f = f.inverse();
        }
        phi = phi.compose(&f);
    }
    phi.renamed(format!("A{m}-sample"))
}

/// A product of `len` random Nielsen generators.
pub fn random_automorphism<R: Rng>(n: usize, len: usize, rng: &mut R) -> FreeGroupAutomorphism {
    let gens = catalogue::nielsen_generators(n);
    let mut phi = FreeGroupAutomorphism::identity(n);
    for _ in 0..len {
        phi = phi.compose(gens.choose(rng).expect("nonempty"));
    }
    phi.renamed("aut-sample")
}

/// A product of `len` random surface mapping-class generators or their inverses.
pub fn random_mapping_class<R: Rng>(g: usize, len: usize, rng: &mut R) -> FreeGroupAutomorphism {
    let gens = catalogue::surface_generators(g);
    let mut phi = FreeGroupAutomorphism::identity(2 * g);
    for _ in 0..len {
        let f = gens.choose(rng).expect("nonempty");
        phi = if rng.gen_bool(0.5) {
            phi.compose(f)
        } else {
            phi.compose(&f.inverse())
        };
    }
    phi.renamed("mcg-sample")
}

/// A random Lie element of degrees `2..=depth`; each basis coefficient is
/// present with probability `density` and is a small nonzero rational.
pub fn random_lie_tail<R: Rng>(lie: &FreeLie, density: f64, rng: &mut R) -> LieElement {
    let mut a = lie.zero();
    for k in 2..=lie.depth() {
        for i in 0..lie.dim(k) {
            if rng.gen_bool(density) {
                let num = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let den = rng.gen_range(1..=3);
                a.add_coeff(k, i, ratio(num, den));
            }
        }
    }
    a
}

/// A free-group expansion `ℓ_i = X_i + (random Lie tail)`, distinct from exp-Magnus.
pub fn perturbed_free_expansion<R: Rng>(lie: Arc<FreeLie>, rng: &mut R) -> Expansion {
    let logs = (0..lie.letters())
        .map(|i| &lie.letter(i) + &random_lie_tail(&lie, 1.0, rng))
        .collect();
    free_expansion_with_logs(lie, logs).expect("letter plus higher terms is normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn filtered_samples_act_trivially_on_homology() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3] {
            for m in 1..=3 {
                for _ in 0..5 {
                    let phi = random_filtered_automorphism(n, m, &mut rng);
                    assert!(phi.acts_trivially_on_homology(), "{phi}");
                }
            }
        }
    }

    #[test]
    fn commutators_have_the_requested_weight_and_avoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let c = random_commutator(3, 3, Some(1), &mut rng);
            assert!(!c.is_empty());
            assert!(c.letters().iter().all(|&(g, _)| g != 1));
            assert!(c.abelianization(3).iter().all(|x| *x == ratio(0, 1)));
        }
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let a = random_automorphism(3, 6, &mut ChaCha8Rng::seed_from_u64(11));
        let b = random_automorphism(3, 6, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(a, b);
    }
}

use std::sync::{Arc, OnceLock};

use liexp::ce_cohomology::*;
use liexp::derivations::*;
use liexp::expansions::random::{
    perturbed_free_expansion, random_automorphism, random_commutator, random_filtered_automorphism,
    random_mapping_class, random_word,
};
use liexp::expansions::*;
use liexp::formal_connection::*;
use liexp::free_lie::{is_lyndon, lyndon_basis, witt_dim, FreeLie, HomogeneousIdeal, LieElement, QuotientLie};
use liexp::linalg::{Matrix, Vector};
use liexp::rational::{binomial, rat, ratio, Rational};
use liexp::tensor::{bch, coassociativity_sides, TruncatedTensor, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

// ---------------------------------------------------------------- tensor algebra

fn tensor_strategy(letters: usize, depth: usize) -> impl Strategy<Value = TruncatedTensor> {
    let term = (prop::collection::vec(0..letters as u8, 0..=depth), -4i64..=4, 1i64..=3);
    prop::collection::vec(term, 0..7).prop_map(move |terms| {
        TruncatedTensor::from_terms(
            letters,
            depth,
            terms.into_iter().map(|(w, n, d)| (Word(w), ratio(n, d))),
        )
    })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=6)
}

fn random_lie(lie: &FreeLie, degrees: std::ops::RangeInclusive<usize>, rng: &mut ChaCha8Rng) -> LieElement {
    let mut out = lie.zero();
    for k in degrees {
        let v: Vector = (0..lie.dim(k)).map(|_| small(rng)).collect();
        out += &lie.from_component(k, &v);
    }
    out
}

/// `(ε⊗1)Δa` and `(1⊗ε)Δa`.
fn counit_sides(a: &TruncatedTensor) -> (TruncatedTensor, TruncatedTensor) {
    let delta = a.coproduct();
    let pick = |left: bool| {
        TruncatedTensor::from_terms(
            a.letters(),
            a.depth(),
            delta.terms().filter_map(|((u, v), c)| match left {
                true if u.is_empty() => Some((v.clone(), c.clone())),
                false if v.is_empty() => Some((u.clone(), c.clone())),
                _ => None,
            }),
        )
    };
    (pick(true), pick(false))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_associative_and_unital(
        (a, b, c) in shape().prop_flat_map(|(n, d)| (tensor_strategy(n, d), tensor_strategy(n, d), tensor_strategy(n, d)))
    ) {
        let one = TruncatedTensor::one(a.letters(), a.depth());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&one * &a, a.clone());
        prop_assert_eq!(&a * &one, a);
    }

    #[test]
    fn coproduct_is_multiplicative(
        (a, b) in shape().prop_flat_map(|(n, d)| (tensor_strategy(n, d), tensor_strategy(n, d)))
    ) {
        let lhs = (&a * &b).coproduct();
        let rhs = a.coproduct().mul(&b.coproduct()).total_truncate();
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn counit_and_coassociativity(a in shape().prop_flat_map(|(n, d)| tensor_strategy(n, d))) {
        let (left, right) = counit_sides(&a);
        prop_assert_eq!(&left, &a);
        prop_assert_eq!(&right, &a);
        let (l, r) = coassociativity_sides(&a);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn exp_and_log_exchange_primitives_and_grouplikes(seed in any::<u64>(), (n, depth) in (1usize..=3, 1usize..=6)) {
        let mut rng = rng(seed);
        let lie = FreeLie::new(n, depth);
        let x = lie.tensor_embed(&random_lie(&lie, 1..=depth, &mut rng));
        prop_assert!(x.is_primitive());
        let g = x.exp().unwrap();
        prop_assert!(g.is_grouplike());
        let back = g.log().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert!(back.is_primitive());
        prop_assert_eq!(back.exp().unwrap(), g.clone());
        // a product of group-likes is group-like, so its log is primitive
        let y = lie.tensor_embed(&random_lie(&lie, 1..=depth, &mut rng));
        let gy = &g * &y.exp().unwrap();
        prop_assert!(gy.is_grouplike());
        prop_assert!(gy.log().unwrap().is_primitive());
        prop_assert_eq!(gy.log().unwrap(), bch(&x, &y).unwrap());
    }

    #[test]
    fn non_lie_elements_are_not_primitive(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let lie = FreeLie::new(2, 4);
        let x = lie.tensor_embed(&random_lie(&lie, 1..=4, &mut rng));
        // a nonzero square of a letter is never primitive
        let bump = TruncatedTensor::from_terms(2, 4, [(Word(vec![0, 0]), rat(1))]);
        let y = &x + &bump;
        prop_assert!(!y.is_primitive());
        prop_assert!(!y.exp().unwrap().is_grouplike());
    }
}

// ---------------------------------------------------------------- free Lie algebra

/// Counts words all of whose proper rotations are strictly larger.
fn necklace_count(n: usize, k: usize) -> u64 {
    let mut count = 0;
    let mut w = vec![0u8; k];
    loop {
        let smallest = (1..k).all(|r| {
            let rotated: Vec<u8> = w[r..].iter().chain(&w[..r]).copied().collect();
            w < rotated
        });
        if smallest {
            count += 1;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            if (w[i] as usize) + 1 < n {
                w[i] += 1;
                w[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

#[test]
fn lyndon_counts_match_the_witt_formula() {
    for n in 1..=4 {
        for k in 1..=8 {
            let basis = lyndon_basis(n, k);
            assert_eq!(basis.len() as u64, witt_dim(n, k), "n={n} k={k}");
            assert_eq!(necklace_count(n, k), witt_dim(n, k), "n={n} k={k}");
            assert!(basis.words.iter().all(|w| is_lyndon(&w.0)));
            assert!(basis.words.windows(2).all(|p| p[0].0 < p[1].0));
        }
    }
}

#[test]
fn genus_one_quotient_is_abelian() {
    for depth in 2..=7 {
        let q = QuotientLie::surface(1, depth);
        assert_eq!(q.dim(1), 2);
        for k in 2..=depth {
            assert_eq!(q.dim(k), 0, "depth={depth} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_embeds_as_the_commutator(seed in any::<u64>(), n in 1usize..=3, depth in 2usize..=6) {
        let mut rng = rng(seed);
        let lie = FreeLie::new(n, depth);
        let a = random_lie(&lie, 1..=depth, &mut rng);
        let b = random_lie(&lie, 1..=depth, &mut rng);
        let lhs = lie.tensor_embed(&lie.bracket_truncated(&a, &b));
        let rhs = lie.tensor_embed(&a).commutator(&lie.tensor_embed(&b));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lie.lie_coords_all(&rhs).unwrap(), lie.bracket_truncated(&a, &b));
    }

    #[test]
    fn generated_ideals_are_closed(seed in any::<u64>(), n in 2usize..=3, count in 1usize..=2) {
        let mut rng = rng(seed);
        let depth = if n == 2 { 6 } else { 5 };
        let lie = FreeLie::new(n, depth);
        let gens: Vec<LieElement> = (0..count)
            .map(|_| {
                let k = rng.gen_range(2..=3);
                random_lie(&lie, k..=k, &mut rng)
            })
            .collect();
        let ideal = HomogeneousIdeal::generated_by(&lie, gens.clone(), depth).unwrap();
        prop_assert!(ideal.closure_certificate(&lie));
        for g in &gens {
            prop_assert!(ideal.contains(&lie, g));
        }
        for k in 2..depth {
            for v in ideal.span(k).basis() {
                let a = lie.from_component(k, v);
                for h in 0..n {
                    prop_assert!(ideal.contains(&lie, &lie.bracket_truncated(&a, &lie.letter(h))));
                }
                // brackets with arbitrary elements, not only letters, stay inside
                let x = random_lie(&lie, 1..=depth, &mut rng);
                prop_assert!(ideal.contains(&lie, &lie.bracket_truncated(&a, &x)));
            }
        }
    }
}

// ---------------------------------------------------------------- expansions

fn symplectic_expansions() -> &'static [Expansion] {
    static CELL: OnceLock<Vec<Expansion>> = OnceLock::new();
    CELL.get_or_init(|| vec![symplectic_expansion(1, 4).unwrap(), symplectic_expansion(2, 3).unwrap()])
}

fn assert_normalized(theta: &Expansion) -> Result<(), TestCaseError> {
    let n = theta.generators();
    for (i, img) in theta.images().iter().enumerate() {
        prop_assert!(img.is_grouplike(), "image {i} is not group-like");
        prop_assert_eq!(img.homogeneous(1), TruncatedTensor::letter(n, theta.depth(), i).homogeneous(1));
    }
    prop_assert!(theta.certificate().iter().all(LieElement::is_zero));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expansions_are_grouplike_and_normalized(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng(seed);
        let lie = Arc::new(FreeLie::new(n, 4));
        assert_normalized(&free_expansion(n, 4))?;
        let perturbed = perturbed_free_expansion(lie, &mut rng);
        assert_normalized(&perturbed)?;
        let phi = random_automorphism(n, 3, &mut rng);
        assert_normalized(&transport_expansion(&phi, &perturbed).unwrap())?;
        for theta in symplectic_expansions() {
            assert_normalized(theta)?;
            let g = theta.generators() / 2;
            let psi = random_mapping_class(g, 2, &mut rng);
            assert_normalized(&transport_expansion(&psi, theta).unwrap())?;
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng(seed);
        let perturbed = perturbed_free_expansion(Arc::new(FreeLie::new(n, 4)), &mut rng);
        let mut cases = vec![perturbed];
        cases.extend(symplectic_expansions().iter().cloned());
        for theta in &cases {
            let gens = theta.generators();
            let u = random_word(gens, rng.gen_range(0..=5), &mut rng);
            let v = random_word(gens, rng.gen_range(0..=5), &mut rng);
            let tu = theta.evaluate(&u);
            prop_assert_eq!(theta.evaluate(&u.mul(&v)), &tu * &theta.evaluate(&v));
            prop_assert!(tu.is_grouplike());
            let class: Vec<Rational> = u.abelianization(gens);
            let degree_one: TruncatedTensor = TruncatedTensor::from_terms(
                gens,
                theta.depth(),
                class.into_iter().enumerate().map(|(i, c)| (Word(vec![i as u8]), c)),
            );
            prop_assert_eq!(tu.homogeneous(1), degree_one);
            prop_assert_eq!(&tu * &theta.evaluate(&u.inverse()), TruncatedTensor::one(gens, theta.depth()));
        }
    }

    #[test]
    fn commutator_leading_terms_do_not_depend_on_the_expansion(seed in any::<u64>(), n in 2usize..=3, k in 2usize..=4) {
        let mut rng = rng(seed);
        let lie = Arc::new(FreeLie::new(n, 4));
        let a = free_expansion(n, 4);
        let b = perturbed_free_expansion(lie, &mut rng);
        let w = random_commutator(n, k, None, &mut rng);
        let (ta, tb) = (a.evaluate(&w), b.evaluate(&w));
        for d in 1..k {
            prop_assert!(ta.homogeneous(d).is_zero());
            prop_assert!(tb.homogeneous(d).is_zero());
        }
        prop_assert_eq!(ta.homogeneous(k), tb.homogeneous(k));
    }

    #[test]
    fn graded_johnson_map_matches_the_oracle(seed in any::<u64>(), n in 2usize..=3, m in 1usize..=3) {
        let mut rng = rng(seed);
        let theta = free_expansion(n, 4);
        let perturbed = perturbed_free_expansion(theta.lie().clone(), &mut rng);
        let phi = random_filtered_automorphism(n, m, &mut rng);
        let oracle = johnson_graded_oracle(theta.lie(), &phi, m).unwrap();
        for th in [&theta, &perturbed] {
            let tau = johnson_map(th, &phi).unwrap();
            for p in 1..m {
                prop_assert!(tau.graded(p).iter().all(LieElement::is_zero));
            }
            prop_assert_eq!(&tau.graded(m), &oracle);
        }
    }

    #[test]
    fn tau1_is_a_crossed_homomorphism(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let theta = free_expansion(2, 4);
        let perturbed = perturbed_free_expansion(theta.lie().clone(), &mut rng);
        let phi = random_automorphism(2, 3, &mut rng);
        let psi = random_automorphism(2, 3, &mut rng);
        for th in [&theta, &perturbed] {
            prop_assert!(tau1_cocycle_check(th, &phi, &psi).unwrap().holds);
        }
        let torus = &symplectic_expansions()[0];
        let phi = random_mapping_class(1, 3, &mut rng);
        let psi = random_mapping_class(1, 3, &mut rng);
        prop_assert!(tau1_cocycle_check(torus, &phi, &psi).unwrap().holds);
    }
}

// ---------------------------------------------------------------- derivations

fn random_derivation(q: &Arc<QuotientLie>, degrees: &[usize], rng: &mut ChaCha8Rng) -> Derivation {
    let mut x = Derivation::zero(q.clone(), DerMode::Quotient);
    for &k in degrees {
        let s = DerSpace::new(q.clone(), DerMode::Quotient, k).unwrap();
        for j in 0..s.dim() {
            x = x.add(&s.basis_derivation(j).scale(&small(rng)));
        }
    }
    x
}

fn algebra(kind: usize) -> Arc<QuotientLie> {
    static CELL: OnceLock<Vec<Arc<QuotientLie>>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 5)))),
            Arc::new(QuotientLie::free(Arc::new(FreeLie::new(3, 4)))),
            Arc::new(QuotientLie::surface(2, 4)),
        ]
    })[kind]
        .clone()
}

fn random_symplectic(g: usize, length: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let gens = symplectic_generators(g);
    let mut m = Matrix::identity(2 * g);
    for _ in 0..length {
        let a = &gens[rng.gen_range(0..gens.len())];
        let a = if rng.gen_bool(0.5) { a.clone() } else { a.inverse().unwrap() };
        m = m.mul(&a);
    }
    m
}

#[test]
fn free_derivation_dimensions() {
    for n in 1..=4 {
        let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(n, 5))));
        for k in 1..=4 {
            let s = DerSpace::new(q.clone(), DerMode::Quotient, k).unwrap();
            assert_eq!(s.dim() as u64, n as u64 * witt_dim(n, k + 1), "n={n} k={k}");
        }
    }
}

#[test]
fn morita_rows_are_exact() {
    for g in [2, 3] {
        let q = Arc::new(QuotientLie::surface(g, 3));
        let s = DerSpace::new(q, DerMode::Quotient, 1).unwrap();
        let c = binomial(2 * g, 3) as usize;
        assert_eq!((s.dim(), s.inner_dim(), s.outer_dim()), (c, 2 * g, c - 2 * g));
        assert_eq!(MoritaMap::new(g).unwrap().rank(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn derivations_obey_leibniz(seed in any::<u64>(), kind in 0usize..3) {
        let mut rng = rng(seed);
        let q = algebra(kind);
        let lie = q.lie().clone();
        let x = random_derivation(&q, &[1, 2], &mut rng);
        let a = random_lie(&lie, 1..=2, &mut rng);
        let b = random_lie(&lie, 1..=2, &mut rng);
        let lhs = x.apply_truncated(&lie.bracket_truncated(&a, &b));
        let rhs = &lie.bracket_truncated(&x.apply_truncated(&a), &b) + &lie.bracket_truncated(&a, &x.apply_truncated(&b));
        prop_assert!(q.is_zero(&(&lhs - &rhs)));
    }

    #[test]
    fn derivation_bracket_is_a_lie_bracket(seed in any::<u64>(), kind in 0usize..3) {
        let mut rng = rng(seed);
        let q = algebra(kind);
        let x = random_derivation(&q, &[1, 2], &mut rng);
        let y = random_derivation(&q, &[1], &mut rng);
        let z = random_derivation(&q, &[1, 2], &mut rng);
        prop_assert!(x.bracket_truncated(&x).is_zero());
        prop_assert_eq!(x.bracket_truncated(&y), y.bracket_truncated(&x).scale(&rat(-1)));
        let jacobi = x
            .bracket_truncated(&y.bracket_truncated(&z))
            .add(&y.bracket_truncated(&z.bracket_truncated(&x)))
            .add(&z.bracket_truncated(&x.bracket_truncated(&y)));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn scaling_is_a_one_parameter_family(seed in any::<u64>(), kind in 0usize..3) {
        let mut rng = rng(seed);
        let q = algebra(kind);
        let x = random_derivation(&q, &[1, 2], &mut rng);
        let y = random_derivation(&q, &[1], &mut rng);
        let (t, s) = (small(&mut rng), small(&mut rng));
        prop_assert_eq!(scaling_endo(&t, &scaling_endo(&s, &x)), scaling_endo(&(&t * &s), &x));
        prop_assert_eq!(
            scaling_endo(&t, &x.bracket_truncated(&y)),
            scaling_endo(&t, &x).bracket_truncated(&scaling_endo(&t, &y))
        );
        prop_assert_eq!(scaling_endo(&rat(1), &x), x);
    }

    #[test]
    fn symplectic_action_is_a_group_action(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let q = algebra(2);
        let x = random_derivation(&q, &[1, 2], &mut rng);
        let a = random_symplectic(2, 3, &mut rng);
        let b = random_symplectic(2, 3, &mut rng);
        let lhs = sp_action(&a.mul(&b), &x).unwrap();
        let rhs = sp_action(&a, &sp_action(&b, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(sp_action(&Matrix::identity(4), &x).unwrap(), x);
    }

    #[test]
    fn morita_map_is_an_equivariant_isomorphism(seed in any::<u64>(), g in 2usize..=3) {
        static MAPS: OnceLock<Vec<MoritaMap>> = OnceLock::new();
        let maps = MAPS.get_or_init(|| vec![MoritaMap::new(2).unwrap(), MoritaMap::new(3).unwrap()]);
        let m = &maps[g - 2];
        let mut rng = rng(seed);
        let v: Vector = (0..Lambda3Element::dim(g)).map(|_| small(&mut rng)).collect();
        let xi = Lambda3Element::from_vector(g, &v);
        let x = m.apply(&xi);
        prop_assert_eq!(m.inverse(&x).unwrap(), xi.clone());
        let a = random_symplectic(g, 3, &mut rng);
        prop_assert_eq!(m.apply(&xi.act(&a)), sp_action(&a, &x).unwrap());
    }
}

// ---------------------------------------------------------------- Chevalley–Eilenberg

fn is_zero(m: &Matrix) -> bool {
    m.is_zero()
}

/// A truncated derivation algebra together with the linear actions of a few
/// random automorphisms of the underlying Lie algebra.
fn random_lie_data(rng: &mut ChaCha8Rng) -> (FiniteLieData, Vec<Matrix>) {
    // The truncation must reach one past the weight plus the relator degree.
    let (q, weight, letter_maps): (Arc<QuotientLie>, usize, Vec<Matrix>) = match rng.gen_range(0..3) {
        0 => {
            let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 4))));
            let swap = Matrix::from_i64(&[vec![0, 1], vec![1, 0]]);
            let shear = Matrix::from_i64(&[vec![1, rng.gen_range(-2..=2)], vec![0, 1]]);
            let flip = Matrix::from_i64(&[vec![-1, 0], vec![0, 1]]);
            (q, rng.gen_range(1..=3), vec![swap, shear, flip])
        }
        1 => (
            Arc::new(QuotientLie::surface(1, 4)),
            rng.gen_range(1..=2),
            vec![random_symplectic(1, 3, rng)],
        ),
        _ => (
            Arc::new(QuotientLie::surface(2, 3)),
            1,
            vec![random_symplectic(2, 2, rng), random_symplectic(2, 2, rng)],
        ),
    };
    let t = DerivationTruncation::new(q, weight, rng.gen_bool(0.5)).unwrap();
    let actions = letter_maps
        .iter()
        .map(|m| t.action_matrix(m).unwrap())
        .collect();
    (t.into_data(), actions)
}

/// The distinct matrices generated by `gens`, identity first.
fn matrix_group(gens: &[Matrix]) -> Vec<Matrix> {
    let d = gens[0].rows();
    let mut elements = vec![Matrix::identity(d)];
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let m = elements[i].mul(g);
            if !elements.contains(&m) {
                elements.push(m);
            }
        }
        i += 1;
    }
    elements
}

fn block_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let (p, q) = (a.rows(), b.rows());
    let mut m = Matrix::zeros(p + q, p + q);
    for i in 0..p {
        for j in 0..p {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..q {
        for j in 0..q {
            m.set(p + i, p + j, b.get(i, j).clone());
        }
    }
    m
}

fn unimodular(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut p = Matrix::identity(d);
    for _ in 0..2 * d {
        let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if a != b {
            let c = rat(rng.gen_range(-1..=1));
            for j in 0..d {
                let v = p.get(a, j) + &c * p.get(b, j);
                p.set(a, j, v);
            }
        }
    }
    p
}

/// Cyclic of order 4, the Klein group or S₃, in a random linear representation.
fn random_finite_group(rng: &mut ChaCha8Rng) -> Vec<Matrix> {
    let gens: Vec<Matrix> = match rng.gen_range(0..3) {
        0 => vec![Matrix::from_i64(&[vec![0, -1], vec![1, 0]])],
        1 => vec![
            Matrix::from_i64(&[vec![-1, 0], vec![0, 1]]),
            Matrix::from_i64(&[vec![1, 0], vec![0, -1]]),
        ],
        _ => vec![
            Matrix::from_i64(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
            Matrix::from_i64(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
        ],
    };
    // add a sign or trivial summand, then hide the splitting by a change of basis
    let gens: Vec<Matrix> = if rng.gen_bool(0.5) {
        let trivial = rng.gen_bool(0.5);
        gens.iter()
            .map(|g| {
                let s = if trivial { rat(1) } else { g.determinant() };
                block_sum(g, &Matrix::from_rows(vec![vec![s]], 1))
            })
            .collect()
    } else {
        gens
    };
    let p = unimodular(gens[0].rows(), rng);
    let pinv = p.inverse().unwrap();
    let gens: Vec<Matrix> = gens.iter().map(|g| p.mul(g).mul(&pinv)).collect();
    matrix_group(&gens)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ce_differential_squares_to_zero(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (data, _) = random_lie_data(&mut rng);
        let top = if data.dim() <= 12 { 3 } else { 2 };
        let weight = if rng.gen_bool(0.5) { None } else { Some(rng.gen_range(1..=4)) };
        let c = CEComplex::new(Arc::new(data), top, weight).unwrap();
        for m in 0..top {
            prop_assert!(is_zero(&c.differential(m + 1).mul(c.differential(m))));
        }
        prop_assert_eq!(c.cochain_euler_characteristic(), {
            let sign = if top % 2 == 0 { 1 } else { -1 };
            c.cohomology_euler_characteristic() + sign * c.top_rank() as i64
        });
    }

    #[test]
    fn invariant_restriction_commutes_with_d(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (data, actions) = random_lie_data(&mut rng);
        let top = if data.dim() <= 12 { 3 } else { 2 };
        let c = CEComplex::new(Arc::new(data), top, None).unwrap();
        let inv = c.invariant_subcomplex(&actions).unwrap();
        for m in 0..top {
            let source = inv.cochain_basis(m);
            let target = inv.cochain_basis(m + 1);
            for (j, v) in source.iter().enumerate() {
                prop_assert!(c.is_invariant(m, v, &actions).unwrap());
                let lhs = c.differential(m).mul_vec(v);
                let mut rhs = vec![rat(0); lhs.len()];
                for (i, w) in target.iter().enumerate() {
                    let a = inv.differential(m).get(i, j);
                    for (x, y) in rhs.iter_mut().zip(w) {
                        *x += a * y;
                    }
                }
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn cup_powers_of_invariant_cochains_are_group_cocycles(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let group = random_finite_group(&mut rng);
        let d = group[0].rows();
        let labels: Vec<String> = (0..group.len()).map(|i| format!("g{i}")).collect();
        let table = CompositionTable::from_matrices(labels.clone(), &group).unwrap();
        let u: Vector = (0..d).map(|_| small(&mut rng)).collect();
        let tau = CrossedHom::principal(labels, group.clone(), &u)
            .unwrap()
            .with_table(table)
            .unwrap();
        prop_assert!(tau.is_cocycle().unwrap());
        let invariants = CEComplex::new(Arc::new(FiniteLieData::abelian(d)), d.min(3), None)
            .unwrap()
            .invariant_subcomplex(&group)
            .unwrap();
        for m in 1..=d.min(3) {
            let basis = invariants.cochain_basis(m);
            let mut c = vec![rat(0); binomial(d, m) as usize];
            for b in &basis {
                let s = small(&mut rng);
                for (x, y) in c.iter_mut().zip(b) {
                    *x += &s * y;
                }
            }
            let failures = tau.cup_power_coboundary(&c, m).unwrap();
            prop_assert!(failures.is_empty(), "m={} {}", m, failures[0]);
        }
    }

    #[test]
    fn mc_defect_vanishes_iff_holonomy_is_trivial(seed in any::<u64>(), surface in any::<bool>(), flat in any::<bool>()) {
        let mut rng = rng(seed);
        let q = if surface { algebra(2) } else { Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 4)))) };
        let x = random_derivation(&q, &[1, 2], &mut rng);
        let y = random_derivation(&q, &[1], &mut rng);
        let closing = if flat {
            bch_derivation(&x, &y, 4).scale(&rat(-1))
        } else {
            random_derivation(&q, &[1, 2], &mut rng)
        };
        let eta = EdgeCochain::new(q.clone(), 3, vec![((0, 1), x), ((1, 2), y), ((2, 0), closing)]).unwrap();
        let cell = TwoCell::new(vec![(0, true), (1, true), (2, true)]);
        let defect = mc_defect(&eta, std::slice::from_ref(&cell)).unwrap();
        let h = holonomy(&eta, 0, &cell).unwrap();
        let lie = q.lie();
        let trivial = (0..lie.letters()).all(|i| {
            let diff = h.image(i) - &TruncatedTensor::letter(lie.letters(), lie.depth(), i);
            q.is_zero(&lie.lie_coords_all(&diff).unwrap())
        });
        prop_assert_eq!(defect[0].is_zero(), trivial);
        if flat {
            prop_assert!(trivial);
        }
    }
}

/// `BCH(X, Y)` evaluated on derivations through the two-letter Lyndon basis.
fn bch_derivation(x: &Derivation, y: &Derivation, depth: usize) -> Derivation {
    fn basis(lie: &FreeLie, k: usize, i: usize, x: &Derivation, y: &Derivation) -> Derivation {
        if k == 1 {
            return if i == 0 { x.clone() } else { y.clone() };
        }
        let ((du, iu), (dv, iv)) = lie.standard_factors(k, i).unwrap();
        basis(lie, du, iu, x, y).bracket_truncated(&basis(lie, dv, iv, x, y))
    }
    let two = FreeLie::new(2, depth);
    let s = bch(&TruncatedTensor::letter(2, depth, 0), &TruncatedTensor::letter(2, depth, 1)).unwrap();
    let series = two.lie_coords_all(&s).unwrap();
    let mut out = Derivation::zero(x.algebra().clone(), DerMode::Quotient);
    for (&(k, i), c) in series.coords() {
        out = out.add(&basis(&two, k, i, x, y).scale(c));
    }
    out
}

// ---------------------------------------------------------------- formal connections

/// `A ⊗ B` with `d = d_A⊗1 + σ⊗d_B`, `h = h_A⊗1 + P_Aσ⊗h_B`, where `σ` is the
/// degree sign; then `1 − dh − hd = P_A⊗P_B`.
fn tensor_model(a: &CDGAModel, b: &CDGAModel) -> CDGAModel {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let idx = |i: usize, j: usize| i * nb + j;
    let sigma = |i: usize| rat(if a.degrees()[i].is_multiple_of(2) { 1 } else { -1 });
    let mut labels = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("{}.{}", a.labels()[i], b.labels()[j]));
            degrees.push(a.degrees()[i] + b.degrees()[j]);
        }
    }
    let mut d = Matrix::zeros(n, n);
    let mut h = Matrix::zeros(n, n);
    let p = a.harmonic_projection();
    for i in 0..na {
        for j in 0..nb {
            let col = idx(i, j);
            for r in 0..na {
                d.add_to(idx(r, j), col, a.differential().get(r, i));
                h.add_to(idx(r, j), col, a.homotopy().get(r, i));
            }
            for s in 0..nb {
                d.add_to(idx(i, s), col, &(sigma(i) * b.differential().get(s, j)));
                for r in 0..na {
                    h.add_to(idx(r, s), col, &(sigma(i) * p.get(r, i) * b.homotopy().get(s, j)));
                }
            }
        }
    }
    let mut products: ProductTable = vec![vec![Vec::new(); n]; n];
    for i in 0..na {
        for j in 0..nb {
            for k in 0..na {
                for l in 0..nb {
                    let sign = rat(if (b.degrees()[j] * a.degrees()[k]).is_multiple_of(2) { 1 } else { -1 });
                    let slot = &mut products[idx(i, j)][idx(k, l)];
                    for (p, x) in &a.products()[i][k] {
                        for (q, y) in &b.products()[j][l] {
                            slot.push((idx(*p, *q), &sign * x * y));
                        }
                    }
                }
            }
        }
    }
    CDGAModel::new(labels, degrees, d, products, h).unwrap()
}

/// A random graded change of coordinates fixing the unit.
fn reshuffle(model: &CDGAModel, rng: &mut ChaCha8Rng) -> CDGAModel {
    let n = model.dim();
    let deg = model.degrees();
    let mut f = Matrix::identity(n);
    for _ in 0..2 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && deg[a] == deg[b] && deg[a] > 0 {
            let c = rat(rng.gen_range(-2..=2));
            for j in 0..n {
                let v = f.get(a, j) + &c * f.get(b, j);
                f.set(a, j, v);
            }
        }
    }
    model.change_coordinates(&f, model.labels().to_vec(), deg.to_vec()).unwrap()
}

fn random_model(rng: &mut ChaCha8Rng) -> (CDGAModel, usize) {
    let massey = massey_model(&rat(rng.gen_range(-2..=3)));
    let (model, n) = match rng.gen_range(0..6) {
        0 => (surface_model(rng.gen_range(1..=3)).unwrap(), 4),
        1 => (massey_model(&ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3))), 4),
        2 => {
            let degrees: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=3)).collect();
            (trivial_model(&degrees).unwrap(), 4)
        }
        3 => (tensor_model(&surface_model(1).unwrap(), &massey), 3),
        4 => (tensor_model(&massey, &surface_model(1).unwrap()), 3),
        _ => (tensor_model(&surface_model(1).unwrap(), &surface_model(1).unwrap()), 3),
    };
    let model = if rng.gen_bool(0.5) { reshuffle(&model, rng) } else { model };
    (model, n)
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transferred_connections_are_flat_and_graded(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (model, n) = random_model(&mut rng);
        let c = transfer_connection(&model, n).unwrap();
        prop_assert!(c.check_against(&model).is_ok());
        prop_assert!(c.check_normal_form(&model).is_ok());
        for (w, x) in c.omega() {
            prop_assert!(model.is_homogeneous(x, c.word_degree(w) + 1));
        }
        let table = flatness_check(&c, &model, n).unwrap();
        prop_assert!(table.is_flat(), "defects {:?}", table.defects);
        prop_assert!(c.delta_squared().is_empty());
    }

    #[test]
    fn relabelled_models_give_relabelled_connections(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (model, n) = random_model(&mut rng);
        let n = n.min(3);
        let perm = random_permutation(model.dim(), &mut rng);
        let relabelled = model.relabel(&perm).unwrap();
        let mut f = Matrix::zeros(model.dim(), model.dim());
        for (j, &p) in perm.iter().enumerate() {
            f.set(j, p, rat(1));
        }
        let k = model.homology_map(&f, &relabelled).unwrap();
        let transported = transfer_connection(&model, n).unwrap().transport(&f, &k).unwrap();
        prop_assert_eq!(transfer_connection(&relabelled, n).unwrap(), transported);
    }

    #[test]
    fn transfer_is_symplectically_equivariant(seed in any::<u64>(), g in 1usize..=3) {
        let mut rng = rng(seed);
        let m = random_symplectic(g, 3, &mut rng);
        let f = block_sum(&block_sum(&Matrix::identity(1), &m), &Matrix::identity(1));
        let n = if g == 3 { 3 } else { 4 };
        prop_assert!(check_transfer_equivariance(&surface_model(g).unwrap(), &f, n).is_ok());
    }
}

#[test]
fn tensor_models_have_product_cohomology() {
    let torus = surface_model(1).unwrap();
    let massey = massey_model(&rat(2));
    let m = tensor_model(&torus, &massey);
    // Künneth: (1 + 2t + t²)(1 + 2t + t²) minus the unit
    assert_eq!(m.harmonic_basis().len(), 15);
    assert!(m.side_conditions().all());
}

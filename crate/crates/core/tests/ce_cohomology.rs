use std::collections::HashMap;
use std::sync::Arc;

use liexp::ce_cohomology::*;
use liexp::derivations::{symplectic_generators, DerMode, DerSpace, Derivation};
use liexp::expansions::{catalogue, symplectic_expansion, FreeGroupAutomorphism};
use liexp::free_lie::{FreeLie, LieElement, QuotientLie};
use liexp::linalg::{Matrix, Vector};
use liexp::rational::{binomial, rat, ratio, Rational};
use liexp::tensor::{bch, TruncatedTensor};
use liexp::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn is_zero(m: &Matrix) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| *m.get(r, c) == rat(0)))
}

/// `c(v_0, …, v_m)` for a cochain in tuple coordinates, by expanding the wedge.
fn evaluate(c: &[Rational], tuples: &[Vec<usize>], vectors: &[Vector]) -> Rational {
    let index: HashMap<&Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut out = rat(0);
    for (t, x) in wedge_vectors(vectors) {
        if let Some(&i) = index.get(&t) {
            out += &c[i] * x;
        }
    }
    out
}

fn unit(d: usize, i: usize) -> Vector {
    let mut v = vec![rat(0); d];
    v[i] = rat(1);
    v
}

/// `(dc)(e_J)` straight from the defining sum.
fn oracle_d(complex: &CEComplex, m: usize, c: &[Rational]) -> Vector {
    let data = complex.data();
    let d = data.dim();
    complex
        .tuples(m + 1)
        .iter()
        .map(|t| {
            let xs: Vec<Vector> = t.iter().map(|&i| unit(d, i)).collect();
            let mut s = rat(0);
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    let mut args = vec![data.bracket(&xs[i], &xs[j])];
                    args.extend(
                        xs.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != i && k != j)
                            .map(|(_, x)| x.clone()),
                    );
                    let v = evaluate(c, complex.tuples(m), &args);
                    if (i + j) % 2 == 0 {
                        s += v;
                    } else {
                        s -= v;
                    }
                }
            }
            s
        })
        .collect()
}

fn free_outer(n: usize, w: usize) -> DerivationTruncation {
    let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(n, w + 1))));
    DerivationTruncation::new(q, w, true).unwrap()
}

#[test]
fn abelian_cohomology_is_binomial() {
    for d in 0..=6 {
        let c = CEComplex::new(Arc::new(FiniteLieData::abelian(d)), 6, None).unwrap();
        for m in 0..=6 {
            assert!(is_zero(c.differential(m)));
        }
        let expected: Vec<usize> = (0..=6).map(|m| binomial(d, m) as usize).collect();
        assert_eq!(c.cohomology_dims(), expected, "d={d}");
    }
}

#[test]
fn outer_truncation_squares_to_zero() {
    let t = free_outer(2, 4);
    assert_eq!(t.dim(), 3 + 4 + 9);
    let c = CEComplex::new(Arc::new(t.into_data()), 3, None).unwrap();
    for m in 0..3 {
        assert!(is_zero(&c.differential(m + 1).mul(c.differential(m))));
    }
    let some_bracket = (0..16).any(|a| (0..16).any(|b| !c.data().bracket_basis(a, b).is_empty()));
    assert!(some_bracket);
}

#[test]
fn differential_matches_the_defining_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let complexes = [
        CEComplex::new(Arc::new(FiniteLieData::sl2()), 2, None).unwrap(),
        CEComplex::new(Arc::new(free_outer(2, 4).into_data()), 2, None).unwrap(),
    ];
    for c in &complexes {
        for m in 0..=2 {
            let v: Vector = (0..c.tuples(m).len()).map(|_| rat(rng.gen_range(-3..=3))).collect();
            assert_eq!(c.apply_d(m, &v).unwrap(), oracle_d(c, m, &v), "m={m}");
        }
    }
}

#[test]
fn sl2_cohomology_by_rank() {
    let c = CEComplex::new(Arc::new(FiniteLieData::sl2()), 3, None).unwrap();
    let h = c.cohomology_dims();
    assert_eq!((h[1], h[3]), (0, 1));
    assert_eq!(h, vec![1, 0, 0, 1]);
}

#[test]
fn euler_characteristics_agree() {
    let full = CEComplex::new(Arc::new(FiniteLieData::sl2()), 3, None).unwrap();
    assert_eq!(full.cochain_euler_characteristic(), full.cohomology_euler_characteristic());
    let data = Arc::new(free_outer(2, 4).into_data());
    for top in 1..=3 {
        let c = CEComplex::new(data.clone(), top, None).unwrap();
        let sign = if top % 2 == 0 { 1 } else { -1 };
        assert_eq!(
            c.cohomology_euler_characteristic(),
            c.cochain_euler_characteristic() - sign * c.top_rank() as i64
        );
    }
}

#[test]
fn weight_blocks_sum_to_the_whole() {
    let data = Arc::new(free_outer(2, 4).into_data());
    let whole = CEComplex::new(data.clone(), 2, None).unwrap();
    let mut cochains = vec![0; 3];
    let mut cohomology = vec![0; 3];
    for w in 0..=8 {
        let block = CEComplex::new(data.clone(), 2, Some(w)).unwrap();
        for m in 0..=2 {
            cochains[m] += block.cochain_dim(m);
            cohomology[m] += block.cohomology_dims()[m];
        }
    }
    assert_eq!(cochains, whole.cochain_dims());
    assert_eq!(cohomology, whole.cohomology_dims());
}

#[test]
fn empty_generator_list_changes_nothing() {
    let c = CEComplex::new(Arc::new(FiniteLieData::sl2()), 3, None).unwrap();
    let inv = c.invariant_subcomplex(&[]).unwrap();
    assert_eq!(inv.cochain_dims(), c.cochain_dims());
    assert_eq!(inv.serialize(), c.serialize());
}

#[test]
fn sign_flip_invariants_follow_parity() {
    let c = CEComplex::new(Arc::new(FiniteLieData::abelian(2)), 2, None).unwrap();
    let flip = Matrix::from_i64(&[vec![-1, 0], vec![0, -1]]);
    let inv = c.invariant_subcomplex(&[flip]).unwrap();
    assert_eq!(inv.cochain_dims(), vec![1, 0, 1]);
    assert_eq!(inv.cohomology_dims(), vec![1, 0, 1]);
}

#[test]
fn restriction_commutes_with_the_differential() {
    let t = free_outer(2, 4);
    let gens: Vec<Matrix> = [
        Matrix::from_i64(&[vec![0, 1], vec![1, 0]]),
        Matrix::from_i64(&[vec![-1, 0], vec![0, 1]]),
    ]
    .iter()
    .map(|m| t.action_matrix(m).unwrap())
    .collect();
    let c = CEComplex::new(Arc::new(t.data().clone()), 3, None).unwrap();
    let inv = c.invariant_subcomplex(&gens).unwrap();
    for m in 0..=3 {
        let source = inv.cochain_basis(m);
        let target = inv.cochain_basis(m + 1);
        let d_inv = inv.differential(m);
        for (j, v) in source.iter().enumerate() {
            assert!(c.is_invariant(m, v, &gens).unwrap());
            let lhs = c.differential(m).mul_vec(v);
            let mut rhs = vec![rat(0); lhs.len()];
            for (i, w) in target.iter().enumerate() {
                for (x, y) in rhs.iter_mut().zip(w) {
                    *x += d_inv.get(i, j) * y;
                }
            }
            assert_eq!(lhs, rhs);
        }
    }
    for m in 0..3 {
        assert!(is_zero(&inv.differential(m + 1).mul(inv.differential(m))));
    }
}

#[test]
fn non_automorphism_is_rejected_with_its_defect() {
    let c = CEComplex::new(Arc::new(FiniteLieData::sl2()), 2, None).unwrap();
    let scale_e = Matrix::from_i64(&[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let err = c.invariant_subcomplex(&[scale_e]).unwrap_err();
    assert!(matches!(err, Error::Action(ref s) if s.contains("[e, f]")), "{err}");
}

fn genus_three_oder() -> (DerSpace, Vec<Matrix>) {
    let q = Arc::new(QuotientLie::surface(3, 3));
    let space = DerSpace::new(q, DerMode::Quotient, 1).unwrap();
    let t = DerivationTruncation::new(space.algebra().clone(), 1, true).unwrap();
    let gens = symplectic_generators(3)
        .iter()
        .map(|m| t.action_matrix(m).unwrap())
        .collect();
    (space, gens)
}

#[test]
fn symplectic_invariants_of_the_outer_degree_one_part() {
    let (space, gens) = genus_three_oder();
    assert_eq!(space.outer_dim(), 14);
    let c = CEComplex::new(Arc::new(FiniteLieData::abelian(14)), 2, None).unwrap();
    let inv = c.invariant_subcomplex(&gens).unwrap();
    assert_eq!(inv.cochain_dim(1), 0);
    // the invariant alternating pairing
    assert_eq!(inv.cochain_dim(2), 1);
}

fn quarter_turn_tables() -> Vec<(CompositionTable, Vec<FreeGroupAutomorphism>)> {
    let q1 = catalogue::handle_quarter_turn(3, 0);
    let q2 = catalogue::handle_quarter_turn(3, 1);
    let id = FreeGroupAutomorphism::identity(6).renamed("id");
    let a = q1.compose(&q1).renamed("A");
    let b = q2.compose(&q2).renamed("B");
    let ab = a.compose(&b).renamed("AB");
    let klein = CompositionTable::new(
        ["id", "A", "B", "AB"].map(String::from).to_vec(),
        &[
            ("id", "id", "id"), ("id", "A", "A"), ("id", "B", "B"), ("id", "AB", "AB"),
            ("A", "id", "A"), ("A", "A", "id"), ("A", "B", "AB"), ("A", "AB", "B"),
            ("B", "id", "B"), ("B", "A", "AB"), ("B", "B", "id"), ("B", "AB", "A"),
            ("AB", "id", "AB"), ("AB", "A", "B"), ("AB", "B", "A"), ("AB", "AB", "id"),
        ],
    )
    .unwrap();
    let q = q1.clone().renamed("Q");
    let q_2 = q1.compose(&q1).renamed("Q2");
    let q_3 = q_2.compose(&q1).renamed("Q3");
    let labels = ["id", "Q", "Q2", "Q3"];
    let mut products = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            products.push((labels[i], labels[j], labels[(i + j) % 4]));
        }
    }
    let cyclic = CompositionTable::new(labels.map(String::from).to_vec(), &products).unwrap();
    // conjugating by a handle-mixing mapping class keeps the tables closed and makes
    // the Johnson values nontrivial
    let psi = catalogue::chain_twist(3, 0)
        .compose(&catalogue::handle_swap(3, 0))
        .compose(&catalogue::chain_twist(3, 1))
        .compose(&catalogue::twist_a(3, 2));
    let conj = |phi: &FreeGroupAutomorphism| {
        psi.compose(phi).compose(&psi.inverse()).renamed(phi.name())
    };
    vec![
        (klein, [id.clone(), a, b, ab].iter().map(conj).collect()),
        (cyclic, [id, q, q_2, q_3].iter().map(conj).collect()),
    ]
}

#[test]
fn genus_three_cup_powers_are_group_cocycles() {
    let theta = symplectic_expansion(3, 3).unwrap();
    let (space, sp_gens) = genus_three_oder();
    let sp_invariant = CEComplex::new(Arc::new(FiniteLieData::abelian(14)), 2, None)
        .unwrap()
        .invariant_subcomplex(&sp_gens)
        .unwrap();
    let pairing = sp_invariant.cochain_basis(2)[0].clone();
    for (table, autos) in quarter_turn_tables() {
        let tau = CrossedHom::from_johnson(&theta, &autos, &space, true)
            .unwrap()
            .with_table(table)
            .unwrap();
        assert!(tau.is_cocycle().unwrap(), "{:?}", tau.cocycle_defects().unwrap());
        assert!(tau.value("id").unwrap().iter().all(|x| *x == rat(0)));
        let nonzero = tau.labels().iter().any(|l| tau.value(l).unwrap().iter().any(|x| *x != rat(0)));
        assert!(nonzero, "the table should carry nontrivial Johnson values");
        assert!(tau.cup_power_coboundary(&pairing, 2).unwrap().is_empty());
        // every cochain invariant under the table's own action
        let actions: Vec<Matrix> = tau
            .labels()
            .iter()
            .map(|l| tau.action(l).unwrap().clone())
            .collect();
        let local = CEComplex::new(Arc::new(FiniteLieData::abelian(14)), 2, None)
            .unwrap()
            .invariant_subcomplex(&actions)
            .unwrap();
        for m in 1..=2 {
            for c in local.cochain_basis(m) {
                let failures = tau.cup_power_coboundary(&c, m).unwrap();
                assert!(failures.is_empty(), "m={m}: {}", failures[0]);
            }
        }
        // identity in the first slot
        let l = &tau.labels()[1];
        assert_eq!(cup_power_cochain(&pairing, &tau, &["id", l]).unwrap(), rat(0));
    }
}

#[test]
fn non_invariant_cochain_can_fail_to_close() {
    let theta = symplectic_expansion(3, 3).unwrap();
    let (space, _) = genus_three_oder();
    let (table, autos) = quarter_turn_tables().remove(1);
    let tau = CrossedHom::from_johnson(&theta, &autos, &space, true)
        .unwrap()
        .with_table(table)
        .unwrap();
    let found = (0..14).any(|i| !tau.cup_power_coboundary(&unit(14, i), 1).unwrap().is_empty());
    assert!(found);
}

fn random_derivation(q: &Arc<QuotientLie>, degrees: &[usize], rng: &mut ChaCha8Rng) -> Derivation {
    let mut x = Derivation::zero(q.clone(), DerMode::Quotient);
    for &k in degrees {
        let s = DerSpace::new(q.clone(), DerMode::Quotient, k).unwrap();
        for j in 0..s.dim() {
            let c = rat(rng.gen_range(-2..=2));
            x = x.add(&s.basis_derivation(j).scale(&c));
        }
    }
    x
}

/// Evaluates a Lie series in two letters on two derivations via standard bracketing.
fn evaluate_on(lie: &FreeLie, series: &LieElement, x: &Derivation, y: &Derivation) -> Derivation {
    fn basis(
        lie: &FreeLie,
        k: usize,
        i: usize,
        x: &Derivation,
        y: &Derivation,
    ) -> Derivation {
        if k == 1 {
            return if i == 0 { x.clone() } else { y.clone() };
        }
        let ((du, iu), (dv, iv)) = lie.standard_factors(k, i).unwrap();
        basis(lie, du, iu, x, y).bracket_truncated(&basis(lie, dv, iv, x, y))
    }
    let mut out = Derivation::zero(x.algebra().clone(), DerMode::Quotient);
    for (&(k, i), c) in series.coords() {
        out = out.add(&basis(lie, k, i, x, y).scale(c));
    }
    out
}

fn bch_derivation(x: &Derivation, y: &Derivation, depth: usize) -> Derivation {
    let two = FreeLie::new(2, depth);
    let s = bch(
        &TruncatedTensor::letter(2, depth, 0),
        &TruncatedTensor::letter(2, depth, 1),
    )
    .unwrap();
    let series = two.lie_coords_all(&s).unwrap();
    evaluate_on(&two, &series, x, y)
}

#[test]
fn mc_defect_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 4))));
    let zero = Derivation::zero(q.clone(), DerMode::Quotient);
    let x = random_derivation(&q, &[1, 2], &mut rng);
    let y = random_derivation(&q, &[1, 3], &mut rng);

    let triangle = vec![TwoCell::new(vec![(0, true), (1, true), (2, true)])];
    let flat_zero = EdgeCochain::new(
        q.clone(),
        3,
        vec![((0, 1), zero.clone()), ((1, 2), zero.clone()), ((2, 0), zero.clone())],
    )
    .unwrap();
    assert!(mc_defect(&flat_zero, &triangle).unwrap().iter().all(Derivation::is_zero));

    let pair = EdgeCochain::new(q.clone(), 2, vec![((0, 1), x.clone()), ((1, 0), x.scale(&rat(-1)))]).unwrap();
    let d = mc_defect(&pair, &[TwoCell::new(vec![(0, true), (1, true)])]).unwrap();
    assert!(d[0].is_zero());

    let z = bch_derivation(&x, &y, 4).scale(&rat(-1));
    let tri = EdgeCochain::new(q.clone(), 3, vec![((0, 1), x.clone()), ((1, 2), y.clone()), ((2, 0), z)]).unwrap();
    assert!(mc_defect(&tri, &triangle).unwrap()[0].is_zero());

    // the naive closure −(X+Y) is not flat once X and Y fail to commute
    let naive = EdgeCochain::new(
        q.clone(),
        3,
        vec![((0, 1), x.clone()), ((1, 2), y.clone()), ((2, 0), x.add(&y).scale(&rat(-1)))],
    )
    .unwrap();
    let defect = &mc_defect(&naive, &triangle).unwrap()[0];
    assert!(!defect.is_zero());
    assert_eq!(defect.block(2), x.bracket_truncated(&y).scale(&ratio(1, 2)).block(2));
}

#[test]
fn unmatched_boundary_is_reported() {
    let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 3))));
    let zero = Derivation::zero(q.clone(), DerMode::Quotient);
    let eta = EdgeCochain::new(q, 3, vec![((0, 1), zero.clone()), ((1, 2), zero)]).unwrap();
    let err = mc_defect(&eta, &[TwoCell::new(vec![(0, true), (1, true)])]).unwrap_err();
    assert!(matches!(err, Error::UnmatchedEdge { cell: 0, .. }), "{err}");
    let err = mc_defect(&eta, &[TwoCell::new(vec![(0, true), (0, false)]), TwoCell::new(vec![(7, true)])]).unwrap_err();
    assert!(matches!(err, Error::UnmatchedEdge { cell: 1, .. }), "{err}");
}

#[test]
fn defect_vanishes_exactly_when_holonomy_is_trivial() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for surface in [false, true] {
        let q = Arc::new(if surface {
            QuotientLie::surface(2, 4)
        } else {
            QuotientLie::free(Arc::new(FreeLie::new(2, 4)))
        });
        for trial in 0..6 {
            let x = random_derivation(&q, &[1, 2], &mut rng);
            let y = random_derivation(&q, &[1], &mut rng);
            let closing = if trial % 2 == 0 {
                bch_derivation(&x, &y, 4).scale(&rat(-1))
            } else {
                random_derivation(&q, &[1, 2], &mut rng)
            };
            let eta = EdgeCochain::new(q.clone(), 3, vec![((0, 1), x), ((1, 2), y), ((2, 0), closing)]).unwrap();
            let cell = TwoCell::new(vec![(0, true), (1, true), (2, true)]);
            let defect = mc_defect(&eta, std::slice::from_ref(&cell)).unwrap();
            let h = holonomy(&eta, 0, &cell).unwrap();
            // identity as an automorphism of L/I: every letter image minus the letter lies in I
            let lie = q.lie();
            let trivial = (0..lie.letters()).all(|i| {
                let diff = h.image(i) - &TruncatedTensor::letter(lie.letters(), lie.depth(), i);
                q.is_zero(&lie.lie_coords_all(&diff).unwrap())
            });
            assert_eq!(defect[0].is_zero(), trivial);
            if trial % 2 == 0 {
                assert!(trivial);
            }
        }
    }
}

#[test]
fn serialized_header_states_the_sign_convention() {
    let c = CEComplex::new(Arc::new(free_outer(2, 4).into_data()), 2, Some(4)).unwrap();
    let text = c.serialize();
    assert!(text.lines().any(|l| l.contains(SIGN_CONVENTION)));
    let parsed = SerializedComplex::parse(&text).unwrap();
    assert_eq!(parsed.weight, Some(4));
    assert_eq!(parsed.dims, c.cochain_dims());
    assert_eq!(c.serialize(), text);
}

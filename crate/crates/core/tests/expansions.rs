use std::sync::Arc;

use liexp::expansions::random::{
    perturbed_free_expansion, random_automorphism, random_commutator, random_filtered_automorphism,
    random_mapping_class, random_word,
};
use liexp::expansions::*;
use liexp::free_lie::FreeLie;
use liexp::linalg::PivotOrder;
use liexp::tensor::TruncatedTensor;
use liexp::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn evaluate_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lie = Arc::new(FreeLie::new(2, 4));
    let theta = perturbed_free_expansion(lie, &mut rng);
    for _ in 0..20 {
        let u = random_word(2, 5, &mut rng);
        let v = random_word(2, 4, &mut rng);
        assert_eq!(theta.evaluate(&u.mul(&v)), &theta.evaluate(&u) * &theta.evaluate(&v));
        assert!(theta.evaluate(&u).is_grouplike());
    }
}

#[test]
fn leading_term_of_commutators_is_expansion_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [2, 3] {
        let lie = Arc::new(FreeLie::new(n, 4));
        let exp_magnus = free_expansion(n, 4);
        let perturbed = perturbed_free_expansion(lie, &mut rng);
        for k in 2..=4 {
            for _ in 0..5 {
                let w = random_commutator(n, k, None, &mut rng);
                let a = exp_magnus.evaluate(&w);
                let b = perturbed.evaluate(&w);
                let one = TruncatedTensor::one(n, 4);
                assert_eq!((&a - &one).min_degree(), Some(k), "{w}");
                assert_eq!(a.homogeneous(k), b.homogeneous(k), "{w}");
                for d in 1..k {
                    assert!(b.homogeneous(d).is_zero());
                }
            }
        }
    }
}

#[test]
fn johnson_map_matches_the_graded_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3] {
        let depth = 4;
        let theta = free_expansion(n, depth);
        let lie = theta.lie().clone();
        let perturbed = perturbed_free_expansion(lie.clone(), &mut rng);
        for m in 1..=3 {
            for _ in 0..4 {
                let phi = random_filtered_automorphism(n, m, &mut rng);
                let oracle = johnson_graded_oracle(&lie, &phi, m).unwrap();
                for th in [&theta, &perturbed] {
                    let tau = johnson_map(th, &phi).unwrap();
                    for p in 1..m {
                        assert!(tau.graded(p).iter().all(|v| v.is_zero()), "{phi} p={p}");
                    }
                    assert_eq!(tau.graded(m), oracle, "{phi} m={m}");
                }
            }
        }
    }
}

#[test]
fn partial_conjugation_oracle_value() {
    // K_21: x2 ↦ x1 x2 x1⁻¹ has τ₁(X2) = [X1, X2] and τ₁(X1) = 0.
    let lie = FreeLie::new(2, 3);
    let phi = catalogue::partial_conjugation(2, 1, 0);
    let tau = johnson_graded_oracle(&lie, &phi, 1).unwrap();
    assert!(tau[0].is_zero());
    assert_eq!(tau[1], lie.parse("[x1,x2]").unwrap());
}

#[test]
fn oracle_reports_the_first_nonvanishing_degree() {
    let lie = FreeLie::new(3, 4);
    let phi = catalogue::partial_conjugation(3, 0, 1);
    assert!(matches!(
        johnson_graded_oracle(&lie, &phi, 2),
        Err(Error::Filtration { required: 2, first_nonvanishing: 1 })
    ));
    assert!(johnson_graded_oracle(&lie, &FreeGroupAutomorphism::identity(3), 3)
        .unwrap()
        .iter()
        .all(|v| v.is_zero()));
}

#[test]
fn tau1_is_a_crossed_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let theta = free_expansion(2, 4);
    let perturbed = perturbed_free_expansion(theta.lie().clone(), &mut rng);
    for _ in 0..10 {
        let phi = random_automorphism(2, 3, &mut rng);
        let psi = random_automorphism(2, 3, &mut rng);
        for th in [&theta, &perturbed] {
            let check = tau1_cocycle_check(th, &phi, &psi).unwrap();
            assert!(check.holds, "{phi} {psi}: {:?}", check.defect);
        }
    }
    let id = FreeGroupAutomorphism::identity(2);
    assert!(tau1_cocycle_check(&theta, &id, &id).unwrap().holds);
}

#[test]
fn tau1_cocycle_on_the_torus() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let theta = symplectic_expansion(1, 4).unwrap();
    for _ in 0..5 {
        let phi = random_mapping_class(1, 3, &mut rng);
        let psi = random_mapping_class(1, 3, &mut rng);
        assert!(tau1_cocycle_check(&theta, &phi, &psi).unwrap().holds);
    }
}

#[test]
fn changing_the_expansion_changes_tau1_by_a_coboundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let theta = free_expansion(2, 4);
    let other = perturbed_free_expansion(theta.lie().clone(), &mut rng);
    let autos: Vec<_> = (0..8).map(|_| random_automorphism(2, 4, &mut rng)).collect();
    let report = tau1_coboundary(&theta, &other, &autos).unwrap();
    assert!(report.holds());
    assert!(report.difference.iter().any(|f| !f.is_zero()));

    let same = tau1_coboundary(&theta, &theta, &autos).unwrap();
    assert!(same.difference.iter().all(|f| f.is_zero()));

    let lie = theta.lie().clone();
    let alpha = &lie.parse("x1 + 2 * x2").unwrap() + &lie.parse("[x1,x2]").unwrap();
    let twisted = inner_twist(&theta, &alpha).unwrap();
    assert!(tau1_coboundary(&theta, &twisted, &autos).unwrap().holds());
}

#[test]
fn two_symplectic_solutions_differ_by_a_coboundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = symplectic_expansion_with(1, 4, PivotOrder::Forward).unwrap();
    let b = symplectic_expansion_with(1, 4, PivotOrder::Reverse).unwrap();
    assert!(a.ideal().same_spans(b.ideal()));
    let autos: Vec<_> = (0..20).map(|_| random_mapping_class(1, 4, &mut rng)).collect();
    assert!(tau1_coboundary(&a, &b, &autos).unwrap().holds());
}

#[test]
fn the_torsor_is_visible_in_the_solver_log() {
    let theta = symplectic_expansion(1, 4).unwrap();
    let log = theta.solver_log();
    assert_eq!(log.len(), 2);
    // the linearized relator map is onto, so the solution space has the expected size
    for s in log {
        assert_eq!(s.nullity, s.unknowns - s.equations);
    }
    assert_eq!(log[1].nullity, 1);
}

#[test]
fn symplectic_certificate_by_direct_evaluation() {
    for (g, depth) in [(1, 4), (2, 4)] {
        let theta = symplectic_expansion(g, depth).unwrap();
        let lie = theta.lie().clone();
        let r = surface_relator(g);
        // evaluate the relator as an explicit product of images, independently of log_of
        let mut prod = TruncatedTensor::one(2 * g, depth);
        for &(i, e) in r.letters() {
            let img = lie.tensor_embed(&theta.logs()[i]);
            let f = if e > 0 { img.exp().unwrap() } else { (-img).exp().unwrap() };
            prod = &prod * &f;
        }
        assert_eq!(prod, lie.tensor_embed(&omega(&lie, g)).exp().unwrap());
    }
}

#[test]
fn mismatched_ideals_are_incompatible() {
    let free = free_expansion(2, 3);
    let torus = symplectic_expansion(1, 3).unwrap();
    assert!(matches!(tau1_coboundary(&free, &torus, &[]), Err(Error::Incompatible(_))));
}

#[test]
fn transport_by_identity_and_swap() {
    let theta = free_expansion(2, 4);
    let same = transport_expansion(&FreeGroupAutomorphism::identity(2), &theta).unwrap();
    assert_eq!(same.logs(), theta.logs());

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let perturbed = perturbed_free_expansion(theta.lie().clone(), &mut rng);
    let swap = catalogue::swap(2, 0, 1);
    let moved = transport_expansion(&swap, &perturbed).unwrap();
    let lie = theta.lie();
    let m = swap.abelianization();
    assert_eq!(moved.logs()[0], lie.apply_linear(&m, &perturbed.logs()[1]));
    assert_eq!(moved.logs()[1], lie.apply_linear(&m, &perturbed.logs()[0]));
}

#[test]
fn transport_preserves_the_symplectic_ideal() {
    let theta = symplectic_expansion(1, 4).unwrap();
    for phi in [catalogue::genus_one_s(), catalogue::genus_one_t()] {
        let moved = transport_expansion(&phi, &theta).unwrap();
        assert!(moved.ideal().same_spans(theta.ideal()));
        assert!(moved.certificate().iter().all(|c| c.is_zero()));
    }
    let theta2 = symplectic_expansion(2, 3).unwrap();
    let w = catalogue::handle_swap(2, 0);
    let moved = transport_expansion(&w, &theta2).unwrap();
    assert!(moved.ideal().same_spans(theta2.ideal()));
}

#[test]
fn transport_rejects_non_mapping_classes() {
    let theta = symplectic_expansion(1, 3).unwrap();
    let bad = catalogue::swap(2, 0, 1);
    assert!(matches!(transport_expansion(&bad, &theta), Err(Error::Transport(_))));
    assert!(matches!(johnson_map(&theta, &bad), Err(Error::Equivariance(_))));
}

#[test]
fn johnson_map_is_natural_under_transport() {
    // τ^{θ'}(ψ) = |φ| τ^θ(φ⁻¹ ψ φ) |φ|⁻¹ for θ' = |φ| ∘ θ ∘ φ⁻¹.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let theta = symplectic_expansion(1, 4).unwrap();
    let phi = catalogue::genus_one_s();
    let moved = transport_expansion(&phi, &theta).unwrap();
    for _ in 0..5 {
        let psi = random_mapping_class(1, 3, &mut rng);
        let lhs = johnson_map(&moved, &psi).unwrap();
        let inner = johnson_map(&theta, &phi.inverse().compose(&psi).compose(&phi)).unwrap();
        let rhs = inner.conjugate_linear(&phi.abelianization()).unwrap();
        assert!(lhs.agrees_with(&rhs));
    }
}

#[test]
fn conjugation_gives_an_inner_automorphism() {
    // τ^θ(ι_x) = ι_{θ(x)} on the free group with θ = exp-Magnus.
    let theta = free_expansion(2, 4);
    let lie = theta.lie().clone();
    let phi = catalogue::conjugation(2, &GroupWord::generator(0));
    let tau = johnson_map(&theta, &phi).unwrap();
    let a = theta.images()[0].clone();
    let a_inv = a.inverse().unwrap();
    for i in 0..2 {
        let x = TruncatedTensor::letter(2, 4, i);
        let expected = lie.lie_coords_all(&(&(&a * &x) * &a_inv)).unwrap();
        assert_eq!(tau.values()[i], expected);
    }
}

#[test]
fn torus_mapping_classes_have_level_zero_or_are_torelli() {
    let theta = symplectic_expansion(1, 3).unwrap();
    assert_eq!(filtration_level(&theta, &catalogue::genus_one_s()).unwrap(), Some(0));
    assert_eq!(filtration_level(&theta, &catalogue::genus_one_t()).unwrap(), Some(0));
    assert_eq!(filtration_level(&theta, &FreeGroupAutomorphism::identity(2)).unwrap(), None);
}

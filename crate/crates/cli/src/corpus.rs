//! Fixed test data shared by the `ce` suite and the acceptance tests.

use std::sync::Arc;

use liexp::ce_cohomology::{CEComplex, CompositionTable, DerivationTruncation, FiniteLieData};
use liexp::derivations::{symplectic_generators, DerMode, DerSpace};
use liexp::expansions::{catalogue, FreeGroupAutomorphism};
use liexp::free_lie::QuotientLie;
use liexp::linalg::{Matrix, Vector};
use liexp::Result;

/// A closed multiplication table on four labels together with genus-3 mapping
/// classes realizing it (modulo the Johnson kernel).
pub struct TableCase {
    pub name: &'static str,
    pub table: CompositionTable,
    pub autos: Vec<FreeGroupAutomorphism>,
}

/// The Klein four-group `{1, Q1², Q2², Q1²Q2²}` and the cyclic group generated by
/// the quarter turn `Q1`, both conjugated by a handle-mixing mapping class so
/// that their Johnson values are nonzero.
pub fn genus_three_tables() -> Result<Vec<TableCase>> {
    let q1 = catalogue::handle_quarter_turn(3, 0);
    let q2 = catalogue::handle_quarter_turn(3, 1);
    let id = FreeGroupAutomorphism::identity(6).renamed("id");
    let a = q1.compose(&q1).renamed("A");
    let b = q2.compose(&q2).renamed("B");
    let ab = a.compose(&b).renamed("AB");
    let klein_labels = ["id", "A", "B", "AB"];
    // the Klein group multiplies like bitwise xor on the label indices
    let mut klein_products = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            klein_products.push((klein_labels[i], klein_labels[j], klein_labels[i ^ j]));
        }
    }
    let klein = CompositionTable::new(klein_labels.map(String::from).to_vec(), &klein_products)?;

    let q = q1.clone().renamed("Q");
    let q_2 = q1.compose(&q1).renamed("Q2");
    let q_3 = q_2.compose(&q1).renamed("Q3");
    let cyclic_labels = ["id", "Q", "Q2", "Q3"];
    let mut cyclic_products = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            cyclic_products.push((cyclic_labels[i], cyclic_labels[j], cyclic_labels[(i + j) % 4]));
        }
    }
    let cyclic = CompositionTable::new(cyclic_labels.map(String::from).to_vec(), &cyclic_products)?;

    let psi = catalogue::chain_twist(3, 0)
        .compose(&catalogue::handle_swap(3, 0))
        .compose(&catalogue::chain_twist(3, 1))
        .compose(&catalogue::twist_a(3, 2));
    let conj = |phi: &FreeGroupAutomorphism| psi.compose(phi).compose(&psi.inverse()).renamed(phi.name());
    Ok(vec![
        TableCase {
            name: "klein",
            table: klein,
            autos: [id.clone(), a, b, ab].iter().map(conj).collect(),
        },
        TableCase {
            name: "cyclic",
            table: cyclic,
            autos: [id, q, q_2, q_3].iter().map(conj).collect(),
        },
    ])
}

/// `ODer¹` of the genus-3 surface Lie algebra with the linear actions of the
/// standard generators of `Sp(6, ℤ)` on it.
pub fn genus_three_outer() -> Result<(DerSpace, Vec<Matrix>)> {
    let q = Arc::new(QuotientLie::surface(3, 3));
    let space = DerSpace::new(q.clone(), DerMode::Quotient, 1)?;
    let t = DerivationTruncation::new(q, 1, true)?;
    let gens = symplectic_generators(3)
        .iter()
        .map(|m| t.action_matrix(m))
        .collect::<Result<Vec<_>>>()?;
    Ok((space, gens))
}

/// A basis of the `Sp`-invariant alternating 2-forms on `ODer¹` in genus 3.
pub fn symplectic_invariant_pairings(sp_actions: &[Matrix], dim: usize) -> Result<Vec<Vector>> {
    let c = CEComplex::new(Arc::new(FiniteLieData::abelian(dim)), 2, None)?;
    Ok(c.invariant_subcomplex(sp_actions)?.cochain_basis(2))
}

//! Expansions `θ(x_i) = exp(ℓ_i)` of free and surface groups into the truncated tensor algebra.

use std::sync::{Arc, OnceLock};

use super::automorphism::FreeGroupAutomorphism;
use super::group::{GroupPresentation, GroupWord, PresentationKind};
use crate::error::{Error, Result};
use crate::free_lie::{FreeLie, HomogeneousIdeal, LieElement};
use crate::linalg::{solve_affine, Matrix, PivotOrder};
use crate::tensor::{Substitution, TruncatedTensor};

/// Dimensions of one per-degree linear solve in the symplectic construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSolve {
    pub degree: usize,
    pub unknowns: usize,
    pub equations: usize,
    /// Dimension of the affine solution space (free parameters set to zero).
    pub nullity: usize,
}

/// An expansion of a presented group, together with the ideal it is adapted to.
#[derive(Clone)]
pub struct Expansion {
    presentation: GroupPresentation,
    lie: Arc<FreeLie>,
    ideal: HomogeneousIdeal,
    logs: Vec<LieElement>,
    images: Vec<TruncatedTensor>,
    inverse_images: Vec<TruncatedTensor>,
    certificate: Vec<LieElement>,
    solver_log: Vec<DegreeSolve>,
    theta_inverse: OnceLock<Substitution>,
}

/// The surface form `ω = Σ_i [x_i, x_{i+g}]`.
pub fn omega(lie: &FreeLie, g: usize) -> LieElement {
    let mut w = lie.zero();
    for i in 0..g {
        w += &lie
            .bracket(&lie.letter(i), &lie.letter(i + g))
            .expect("ω needs truncation at least 2");
    }
    w
}

/// The ideal `(ω)` of the genus-`g` surface, through the algebra's truncation.
pub fn surface_ideal(lie: &FreeLie, g: usize) -> HomogeneousIdeal {
    HomogeneousIdeal::generated_by(lie, vec![omega(lie, g)], lie.depth())
        .expect("ω is homogeneous of degree 2")
}

impl Expansion {
    /// Assembles an expansion from Lie logarithms and checks every invariant:
    /// degree-one normalization and vanishing relator certificates modulo the ideal.
    pub fn from_logs(
        presentation: GroupPresentation,
        lie: Arc<FreeLie>,
        ideal: HomogeneousIdeal,
        logs: Vec<LieElement>,
    ) -> Result<Self> {
        let n = presentation.generators();
        if lie.letters() != n || logs.len() != n || ideal.letters() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} generators, {} letters, {} logs",
                lie.letters(),
                logs.len()
            )));
        }
        if ideal.depth() != lie.depth() {
            return Err(Error::DimensionMismatch(format!(
                "ideal truncated at {} in an algebra truncated at {}",
                ideal.depth(),
                lie.depth()
            )));
        }
        for (i, l) in logs.iter().enumerate() {
            if l.homogeneous(1) != lie.letter(i) {
                return Err(Error::Precondition(format!(
                    "image of x{} does not start with X{}",
                    i + 1,
                    i + 1
                )));
            }
        }
        let images: Vec<TruncatedTensor> = logs
            .iter()
            .map(|l| lie.tensor_embed(l).exp().expect("Lie elements have no constant term"))
            .collect();
        let inverse_images = logs
            .iter()
            .map(|l| (-lie.tensor_embed(l)).exp().expect("Lie elements have no constant term"))
            .collect();
        let mut e = Expansion {
            presentation,
            lie,
            ideal,
            logs,
            images,
            inverse_images,
            certificate: Vec::new(),
            solver_log: Vec::new(),
            theta_inverse: OnceLock::new(),
        };
        let certificate: Vec<LieElement> = e
            .presentation
            .relators()
            .iter()
            .map(|r| e.ideal.reduce(&e.lie, &e.log_of(r)))
            .collect();
        if let Some((i, c)) = certificate.iter().enumerate().find(|(_, c)| !c.is_zero()) {
            return Err(Error::Precondition(format!(
                "relator {} does not vanish modulo the ideal: residue {}",
                i + 1,
                e.lie.format(c)
            )));
        }
        e.certificate = certificate;
        Ok(e)
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn lie(&self) -> &Arc<FreeLie> {
        &self.lie
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        &self.ideal
    }

    pub fn depth(&self) -> usize {
        self.lie.depth()
    }

    pub fn generators(&self) -> usize {
        self.presentation.generators()
    }

    /// `ℓ_i = log θ(x_i)`.
    pub fn logs(&self) -> &[LieElement] {
        &self.logs
    }

    pub fn images(&self) -> &[TruncatedTensor] {
        &self.images
    }

    /// Reduced relator logarithms; all zero for a valid expansion.
    pub fn certificate(&self) -> &[LieElement] {
        &self.certificate
    }

    pub fn solver_log(&self) -> &[DegreeSolve] {
        &self.solver_log
    }

    /// `θ(w)`, the product of generator images and their inverses.
    pub fn evaluate(&self, w: &GroupWord) -> TruncatedTensor {
        let mut out = TruncatedTensor::one(self.generators(), self.depth());
        for &(g, e) in w.letters() {
            let f = if e > 0 {
                &self.images[g]
            } else {
                &self.inverse_images[g]
            };
            out = &out * f;
        }
        out
    }

    /// `log θ(w)` in Lyndon coordinates (not reduced modulo the ideal).
    pub fn log_of(&self, w: &GroupWord) -> LieElement {
        let t = self.evaluate(w).log().expect("group-like elements have constant term 1");
        self.lie
            .lie_coords_all(&t)
            .expect("log of a group-like element is primitive")
    }

    /// The algebra automorphism `Θ: X_i ↦ ℓ_i`, so that `θ = Θ ∘ θ_exp`.
    pub fn theta_substitution(&self) -> Substitution {
        Substitution::new(self.logs.iter().map(|l| self.lie.tensor_embed(l)).collect())
    }

    pub(crate) fn theta_inverse(&self) -> &Substitution {
        self.theta_inverse.get_or_init(|| {
            self.theta_substitution()
                .inverse()
                .expect("Θ has identity linear part")
        })
    }
}

/// The exponential expansion `θ(x_i) = exp(X_i)` of the free group of rank `n`.
pub fn free_expansion(n: usize, depth: usize) -> Expansion {
    let lie = Arc::new(FreeLie::new(n, depth));
    let ideal = HomogeneousIdeal::zero(&lie);
    let logs = (0..n).map(|i| lie.letter(i)).collect();
    Expansion::from_logs(GroupPresentation::free(n), lie, ideal, logs)
        .expect("exponential expansion satisfies all invariants")
}

/// An expansion of the free group with prescribed logarithms `ℓ_i = X_i + …`.
pub fn free_expansion_with_logs(lie: Arc<FreeLie>, logs: Vec<LieElement>) -> Result<Expansion> {
    let n = lie.letters();
    let ideal = HomogeneousIdeal::zero(&lie);
    Expansion::from_logs(GroupPresentation::free(n), lie, ideal, logs)
}

/// A surface-group expansion with `log θ(relator) = ω` through degree `depth`,
/// solved degree by degree with the lexicographically first pivots.
pub fn symplectic_expansion(g: usize, depth: usize) -> Result<Expansion> {
    symplectic_expansion_with(g, depth, PivotOrder::Forward)
}

/// As [`symplectic_expansion`], choosing pivots in the given order. Different
/// orders give different points of the torsor of expansions.
pub fn symplectic_expansion_with(g: usize, depth: usize, order: PivotOrder) -> Result<Expansion> {
    if g < 1 || depth < 2 {
        return Err(Error::Precondition(
            "symplectic expansion needs genus ≥ 1 and truncation ≥ 2".into(),
        ));
    }
    let n = 2 * g;
    let lie = Arc::new(FreeLie::new(n, depth));
    let w = omega(&lie, g);
    let relator = super::group::surface_relator(g);
    let mut logs: Vec<LieElement> = (0..n).map(|i| lie.letter(i)).collect();
    let mut solver_log = Vec::new();
    for d in 3..=depth {
        let current = Expansion {
            presentation: GroupPresentation::surface(g),
            lie: lie.clone(),
            ideal: HomogeneousIdeal::zero(&lie),
            images: logs
                .iter()
                .map(|l| lie.tensor_embed(l).exp().expect("no constant term"))
                .collect(),
            inverse_images: logs
                .iter()
                .map(|l| (-lie.tensor_embed(l)).exp().expect("no constant term"))
                .collect(),
            logs: logs.clone(),
            certificate: Vec::new(),
            solver_log: Vec::new(),
            theta_inverse: OnceLock::new(),
        };
        let error = current.log_of(&relator).homogeneous(d);
        let rows = lie.dim(d);
        let block = lie.dim(d - 1);
        // D(δℓ) = Σ_i [δℓ_i, X_{i+g}] − [δℓ_{i+g}, X_i]
        let mut columns = Vec::with_capacity(n * block);
        for i in 0..n {
            let (partner, sign) = if i < g { (i + g, 1) } else { (i - g, -1) };
            let m = lie.right_letter_matrix(d - 1, partner);
            for b in 0..block {
                let mut col = m.column(b);
                if sign < 0 {
                    col.iter_mut().for_each(|c| *c = -c.clone());
                }
                columns.push(col);
            }
        }
        let a = Matrix::from_columns(&columns, rows);
        let rhs: Vec<_> = error.component(d, rows).into_iter().map(|c| -c).collect();
        let sol = solve_affine(&a, &rhs, order).ok_or_else(|| Error::ConstructionFailure {
            degree: d,
            obstruction: lie.format(&error),
        })?;
        for (i, l) in logs.iter_mut().enumerate() {
            let part = &sol.particular[i * block..(i + 1) * block];
            *l += &lie.from_component(d - 1, part);
        }
        solver_log.push(DegreeSolve {
            degree: d,
            unknowns: n * block,
            equations: rows,
            nullity: sol.nullity,
        });
    }
    let ideal = surface_ideal(&lie, g);
    let mut e = Expansion::from_logs(GroupPresentation::surface(g), lie.clone(), ideal, logs)?;
    let residue = &e.log_of(&relator) - &w;
    if !residue.is_zero() {
        return Err(Error::ConstructionFailure {
            degree: residue.min_degree().unwrap_or(0),
            obstruction: lie.format(&residue),
        });
    }
    e.solver_log = solver_log;
    Ok(e)
}

/// `θ' = |φ| ∘ θ ∘ φ⁻¹`, an expansion adapted to the ideal `|φ|(I)`.
pub fn transport_expansion(phi: &FreeGroupAutomorphism, theta: &Expansion) -> Result<Expansion> {
    let n = theta.generators();
    if phi.generators() != n {
        return Err(Error::Transport(format!(
            "automorphism of rank {} on an expansion of rank {n}",
            phi.generators()
        )));
    }
    if theta.presentation.kind() != PresentationKind::Free {
        for r in theta.presentation.relators() {
            if !phi.fixes_up_to_conjugacy(r) {
                return Err(Error::Transport(format!(
                    "`{}` does not preserve relator `{r}` up to conjugacy",
                    phi.name()
                )));
            }
        }
    }
    let lie = theta.lie.clone();
    let m = phi.abelianization();
    let inv = phi.inverse();
    let logs = (0..n)
        .map(|i| lie.apply_linear(&m, &theta.log_of(&inv.images()[i])))
        .collect();
    let gens = theta
        .ideal
        .generators()
        .iter()
        .map(|g| lie.apply_linear(&m, g))
        .collect();
    let ideal = HomogeneousIdeal::generated_by(&lie, gens, theta.ideal.depth())
        .map_err(|e| Error::Transport(e.to_string()))?;
    Expansion::from_logs(theta.presentation.clone(), lie, ideal, logs)
        .map_err(|e| Error::Transport(e.to_string()))
}

/// `θ'(x) = a θ(x) a⁻¹` for the group-like `a = exp(alpha)`.
pub fn inner_twist(theta: &Expansion, alpha: &LieElement) -> Result<Expansion> {
    let lie = theta.lie.clone();
    let a = lie.tensor_embed(alpha).exp()?;
    let a_inv = a.inverse()?;
    let logs = theta
        .images
        .iter()
        .map(|img| {
            let t = (&(&a * img) * &a_inv).log().expect("conjugate of group-like");
            lie.lie_coords_all(&t).expect("log of group-like is Lie")
        })
        .collect();
    Expansion::from_logs(
        theta.presentation.clone(),
        lie,
        theta.ideal.clone(),
        logs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn free_expansion_is_a_homomorphism_on_inverse_pairs() {
        let theta = free_expansion(2, 3);
        let w = GroupWord::parse("x1 X1", 2).unwrap();
        assert_eq!(theta.evaluate(&w), TruncatedTensor::one(2, 3));
        assert!(theta.evaluate(&GroupWord::empty()) == TruncatedTensor::one(2, 3));
    }

    #[test]
    fn commutator_starts_with_the_bracket() {
        let theta = free_expansion(2, 3);
        let c = GroupWord::commutator(&GroupWord::generator(0), &GroupWord::generator(1));
        let t = theta.evaluate(&c);
        let x = TruncatedTensor::letter(2, 3, 0);
        let y = TruncatedTensor::letter(2, 3, 1);
        assert_eq!(t.up_to_degree(2), &TruncatedTensor::one(2, 3) + &x.commutator(&y));
        assert!(t.is_grouplike());
    }

    #[test]
    fn degree_one_part_is_the_abelianization() {
        let theta = free_expansion(2, 3);
        let w = GroupWord::parse("x1 x2", 2).unwrap();
        let t = theta.evaluate(&w).homogeneous(1);
        let x = TruncatedTensor::letter(2, 3, 0);
        let y = TruncatedTensor::letter(2, 3, 1);
        assert_eq!(t, &x + &y);
    }

    #[test]
    fn genus_one_at_degree_two_needs_no_correction() {
        let theta = symplectic_expansion(1, 2).unwrap();
        for (i, l) in theta.logs().iter().enumerate() {
            assert_eq!(*l, theta.lie().letter(i));
        }
        assert!(theta.solver_log().is_empty());
    }

    #[test]
    fn symplectic_certificates_vanish() {
        for (g, depth) in [(1, 4), (2, 3)] {
            let theta = symplectic_expansion(g, depth).unwrap();
            let lie = theta.lie().clone();
            let r = super::super::group::surface_relator(g);
            assert_eq!(theta.log_of(&r), omega(&lie, g));
            assert!(theta.certificate().iter().all(LieElement::is_zero));
            for (i, l) in theta.logs().iter().enumerate() {
                assert_eq!(l.homogeneous(1), lie.letter(i));
            }
        }
    }

    #[test]
    fn bad_normalization_is_rejected() {
        let lie = Arc::new(FreeLie::new(2, 3));
        let logs = vec![lie.letter(1), lie.letter(0)];
        assert!(free_expansion_with_logs(lie.clone(), logs).is_err());
        let scaled = vec![lie.letter(0).scale(&ratio(2, 1)), lie.letter(1)];
        assert!(free_expansion_with_logs(lie, scaled).is_err());
    }
}

//! The total Johnson map `τ^θ(φ) = θ ∘ φ ∘ θ⁻¹ ∘ |φ|⁻¹` and its graded pieces.

use std::sync::Arc;

use super::automorphism::FreeGroupAutomorphism;
use super::expansion::Expansion;
use super::group::{GroupWord, PresentationKind};
use crate::error::{Error, Result};
use crate::free_lie::{FreeLie, HomogeneousIdeal, LieElement};
use crate::linalg::Matrix;
use crate::rational::rat;
use crate::tensor::{Substitution, TruncatedTensor};

/// An automorphism of the truncated quotient `L/I` with identity linear part,
/// stored by its values on the letters (reduced modulo `I`).
#[derive(Clone, Debug)]
pub struct PositiveAutomorphism {
    lie: Arc<FreeLie>,
    ideal: HomogeneousIdeal,
    values: Vec<LieElement>,
}

impl PositiveAutomorphism {
    pub fn new(lie: Arc<FreeLie>, ideal: HomogeneousIdeal, values: Vec<LieElement>) -> Result<Self> {
        if values.len() != lie.letters() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} letters",
                values.len(),
                lie.letters()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if v.homogeneous(1) != lie.letter(i) {
                return Err(Error::Precondition(format!(
                    "linear part of X{} is not the identity",
                    i + 1
                )));
            }
        }
        let values = values.iter().map(|v| ideal.reduce(&lie, v)).collect();
        Ok(PositiveAutomorphism { lie, ideal, values })
    }

    pub fn identity(lie: Arc<FreeLie>, ideal: HomogeneousIdeal) -> Self {
        let values = (0..lie.letters()).map(|i| lie.letter(i)).collect();
        PositiveAutomorphism { lie, ideal, values }
    }

    pub fn lie(&self) -> &Arc<FreeLie> {
        &self.lie
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        &self.ideal
    }

    pub fn values(&self) -> &[LieElement] {
        &self.values
    }

    /// `τ_p`: the degree-`(p+1)` part of each value (for `p = 0`, minus the letter).
    pub fn graded(&self, p: usize) -> Vec<LieElement> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let h = v.homogeneous(p + 1);
                if p == 0 {
                    &h - &self.lie.letter(i)
                } else {
                    h
                }
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        (1..self.lie.depth()).all(|p| self.graded(p).iter().all(LieElement::is_zero))
    }

    /// First `p ≥ 1` with `τ_p ≠ 0`, or `None` if nothing shows up below the truncation.
    pub fn first_nonzero_degree(&self) -> Option<usize> {
        (1..self.lie.depth()).find(|&p| self.graded(p).iter().any(|v| !v.is_zero()))
    }

    /// Lift to the tensor algebra on the chosen representatives.
    pub fn to_substitution(&self) -> Substitution {
        Substitution::new(self.values.iter().map(|v| self.lie.tensor_embed(v)).collect())
    }

    /// `self ∘ other`, reduced modulo the ideal.
    pub fn compose(&self, other: &PositiveAutomorphism) -> PositiveAutomorphism {
        let s = self.to_substitution();
        let values = other
            .values
            .iter()
            .map(|v| {
                let t = s.apply(&self.lie.tensor_embed(v));
                let l = self.lie.lie_coords_all(&t).expect("automorphisms preserve Lie elements");
                self.ideal.reduce(&self.lie, &l)
            })
            .collect();
        PositiveAutomorphism {
            lie: self.lie.clone(),
            ideal: self.ideal.clone(),
            values,
        }
    }

    /// Equality modulo the ideal.
    pub fn agrees_with(&self, other: &PositiveAutomorphism) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| self.ideal.contains(&self.lie, &(a - b)))
    }

    /// Differences `self(X_i) − other(X_i)`, reduced.
    pub fn difference(&self, other: &PositiveAutomorphism) -> Vec<LieElement> {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.ideal.reduce(&self.lie, &(a - b)))
            .collect()
    }

    /// `M ∘ self ∘ M⁻¹` for a linear automorphism `M` of the letters preserving the ideal.
    pub fn conjugate_linear(&self, m: &Matrix) -> Result<PositiveAutomorphism> {
        let minv = m
            .inverse()
            .ok_or_else(|| Error::Precondition("linear part is singular".into()))?;
        let n = self.lie.letters();
        let s = self.to_substitution();
        let values = (0..n)
            .map(|i| {
                // M⁻¹(X_i) = Σ_j Minv[j][i] X_j
                let mut pre = self.lie.zero();
                for j in 0..n {
                    let c = minv.get(j, i);
                    if *c != rat(0) {
                        pre += &self.lie.letter(j).scale(c);
                    }
                }
                let t = s.apply(&self.lie.tensor_embed(&pre));
                let l = self.lie.lie_coords_all(&t).expect("Lie-preserving");
                self.ideal.reduce(&self.lie, &self.lie.apply_linear(m, &l))
            })
            .collect();
        PositiveAutomorphism::new(self.lie.clone(), self.ideal.clone(), values)
    }
}

fn exp_letters(n: usize, depth: usize) -> (Vec<TruncatedTensor>, Vec<TruncatedTensor>) {
    let ex: Vec<TruncatedTensor> = (0..n)
        .map(|i| TruncatedTensor::letter(n, depth, i).exp().expect("letter"))
        .collect();
    let inv = (0..n)
        .map(|i| (-TruncatedTensor::letter(n, depth, i)).exp().expect("letter"))
        .collect();
    (ex, inv)
}

fn evaluate_exp(w: &GroupWord, ex: &[TruncatedTensor], inv: &[TruncatedTensor], n: usize, depth: usize) -> TruncatedTensor {
    let mut out = TruncatedTensor::one(n, depth);
    for &(g, e) in w.letters() {
        out = &out * if e > 0 { &ex[g] } else { &inv[g] };
    }
    out
}

/// Checks that `φ` is compatible with `θ`: same rank, relators preserved up to
/// conjugacy, and `|φ|` preserving the ideal.
fn check_compatible(theta: &Expansion, phi: &FreeGroupAutomorphism) -> Result<Matrix> {
    let n = theta.generators();
    if phi.generators() != n {
        return Err(Error::DimensionMismatch(format!(
            "automorphism of rank {} against an expansion of rank {n}",
            phi.generators()
        )));
    }
    if theta.presentation().kind() != PresentationKind::Free {
        for r in theta.presentation().relators() {
            if !phi.fixes_up_to_conjugacy(r) {
                return Err(Error::Equivariance(format!(
                    "`{}` does not preserve relator `{r}` up to conjugacy",
                    phi.name()
                )));
            }
        }
    }
    let m = phi.abelianization();
    if !theta.ideal().is_preserved_by(theta.lie(), &m) {
        return Err(Error::Equivariance(format!(
            "linear part of `{}` does not preserve the ideal",
            phi.name()
        )));
    }
    Ok(m)
}

/// `τ^θ(φ)`, the automorphism `θ ∘ φ ∘ θ⁻¹ ∘ |φ|⁻¹` of `L/I` truncated at the depth of `θ`.
pub fn johnson_map(theta: &Expansion, phi: &FreeGroupAutomorphism) -> Result<PositiveAutomorphism> {
    let m = check_compatible(theta, phi)?;
    let lie = theta.lie();
    let (n, depth) = (theta.generators(), theta.depth());
    let (ex, inv) = exp_letters(n, depth);
    // A_φ(X_i) = log θ_exp(φ(x_i)), so that θ_exp ∘ φ = exp ∘ A_φ on generators.
    let a = Substitution::new(
        phi.images()
            .iter()
            .map(|w| {
                evaluate_exp(w, &ex, &inv, n, depth)
                    .log()
                    .expect("group-like")
            })
            .collect(),
    );
    let minv = m
        .inverse()
        .ok_or_else(|| Error::Precondition("abelianization is singular".into()))?;
    let big_theta = theta.theta_substitution();
    let tail = theta.theta_inverse().compose(&Substitution::linear(&minv, depth));
    let total = big_theta.compose(&a).compose(&tail);
    let values = total
        .images()
        .iter()
        .map(|t| {
            lie.lie_coords_all(t)
                .expect("composite of Lie-preserving maps")
        })
        .collect();
    PositiveAutomorphism::new(lie.clone(), theta.ideal().clone(), values)
}

/// `τ_p^θ(φ)` for each `p` in `1..depth`.
pub fn johnson_graded(theta: &Expansion, phi: &FreeGroupAutomorphism) -> Result<Vec<Vec<LieElement>>> {
    let tau = johnson_map(theta, phi)?;
    Ok((1..theta.depth()).map(|p| tau.graded(p)).collect())
}

/// Johnson filtration level of `φ`: `Some(0)` if it acts nontrivially on
/// homology, otherwise the first `p` with `τ_p ≠ 0`, or `None` if none appears
/// below the truncation.
pub fn filtration_level(theta: &Expansion, phi: &FreeGroupAutomorphism) -> Result<Option<usize>> {
    if !phi.acts_trivially_on_homology() {
        return Ok(Some(0));
    }
    Ok(johnson_map(theta, phi)?.first_nonzero_degree())
}

/// The classical Johnson homomorphism `τ_k(φ)` of a free-group automorphism in
/// `A(k)`, computed from the leading terms of `x_i⁻¹ φ(x_i)` in the exponential
/// Magnus expansion. Returns the values `X_i ↦ τ_k(φ)(X_i) ∈ L_{k+1}`.
pub fn johnson_graded_oracle(
    lie: &FreeLie,
    phi: &FreeGroupAutomorphism,
    k: usize,
) -> Result<Vec<LieElement>> {
    let n = lie.letters();
    if phi.generators() != n {
        return Err(Error::DimensionMismatch(format!(
            "automorphism of rank {} in an algebra on {n} letters",
            phi.generators()
        )));
    }
    if k == 0 || k + 1 > lie.depth() {
        return Err(Error::TruncationOverflow {
            degree: k + 1,
            truncation: lie.depth(),
        });
    }
    let depth = k + 1;
    let (ex, inv) = exp_letters(n, depth);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let s = GroupWord::generator_inverse(i).mul(&phi.images()[i]);
        let t = &evaluate_exp(&s, &ex, &inv, n, depth) - &TruncatedTensor::one(n, depth);
        if let Some(m) = t.min_degree() {
            if m <= k {
                return Err(Error::Filtration {
                    required: k,
                    first_nonvanishing: m - 1,
                });
            }
        }
        values.push(lie.lie_coords(&t.homogeneous(depth).with_depth(lie.depth()), depth)?);
    }
    Ok(values)
}

/// `(M·f)(X_i) = M(f(M⁻¹ X_i))` for a degree-raising map `f` on letters.
pub fn twist(lie: &FreeLie, ideal: &HomogeneousIdeal, m: &Matrix, f: &[LieElement]) -> Vec<LieElement> {
    let minv = m.inverse().expect("invertible linear part");
    let n = lie.letters();
    (0..n)
        .map(|i| {
            let mut pre = lie.zero();
            for (j, fj) in f.iter().enumerate() {
                let c = minv.get(j, i);
                if *c != rat(0) {
                    pre += &fj.scale(c);
                }
            }
            ideal.reduce(lie, &lie.apply_linear(m, &pre))
        })
        .collect()
}

/// Outcome of the crossed-homomorphism identity `τ₁(φψ) = τ₁(φ) + |φ|·τ₁(ψ)`.
#[derive(Clone, Debug)]
pub struct CocycleCheck {
    pub holds: bool,
    /// `τ₁(φψ) − τ₁(φ) − |φ|·τ₁(ψ)` on each letter, reduced.
    pub defect: Vec<LieElement>,
}

pub fn tau1_cocycle_check(
    theta: &Expansion,
    phi: &FreeGroupAutomorphism,
    psi: &FreeGroupAutomorphism,
) -> Result<CocycleCheck> {
    let lie = theta.lie();
    let ideal = theta.ideal();
    let t_phi = johnson_map(theta, phi)?.graded(1);
    let t_psi = johnson_map(theta, psi)?.graded(1);
    let t_prod = johnson_map(theta, &phi.compose(psi))?.graded(1);
    let twisted = twist(lie, ideal, &phi.abelianization(), &t_psi);
    let defect: Vec<LieElement> = (0..theta.generators())
        .map(|i| ideal.reduce(lie, &(&(&t_prod[i] - &t_phi[i]) - &twisted[i])))
        .collect();
    Ok(CocycleCheck {
        holds: defect.iter().all(LieElement::is_zero),
        defect,
    })
}

/// Comparison of `τ₁` for two expansions with the coboundary of their degree-2 difference.
#[derive(Clone, Debug)]
pub struct CoboundaryReport {
    /// `F(X_i) = ℓ'_{i,2} − ℓ_{i,2}` modulo the ideal.
    pub difference: Vec<LieElement>,
    /// For each automorphism, `τ₁^θ(φ) − τ₁^{θ'}(φ) − (|φ|·F − F)`.
    pub defects: Vec<Vec<LieElement>>,
}

impl CoboundaryReport {
    pub fn holds(&self) -> bool {
        self.defects.iter().flatten().all(LieElement::is_zero)
    }
}

pub fn tau1_coboundary(
    theta: &Expansion,
    theta_prime: &Expansion,
    autos: &[FreeGroupAutomorphism],
) -> Result<CoboundaryReport> {
    if theta.generators() != theta_prime.generators()
        || theta.depth() != theta_prime.depth()
        || !theta.ideal().same_spans(theta_prime.ideal())
    {
        return Err(Error::Incompatible(
            "expansions differ in rank, truncation or ideal".into(),
        ));
    }
    let lie = theta.lie();
    let ideal = theta.ideal();
    let f: Vec<LieElement> = theta
        .logs()
        .iter()
        .zip(theta_prime.logs())
        .map(|(l, lp)| ideal.reduce(lie, &(&lp.homogeneous(2) - &l.homogeneous(2))))
        .collect();
    let mut defects = Vec::with_capacity(autos.len());
    for phi in autos {
        let a = johnson_map(theta, phi)?.graded(1);
        let b = johnson_map(theta_prime, phi)?.graded(1);
        let tf = twist(lie, ideal, &phi.abelianization(), &f);
        defects.push(
            (0..theta.generators())
                .map(|i| ideal.reduce(lie, &(&(&(&a[i] - &b[i]) - &tf[i]) + &f[i])))
                .collect(),
        );
    }
    Ok(CoboundaryReport {
        difference: f,
        defects,
    })
}

#[cfg(test)]
mod tests {
    use super::super::automorphism::catalogue;
    use super::super::expansion::{free_expansion, symplectic_expansion};
    use super::*;

    #[test]
    fn identity_has_trivial_johnson_image() {
        let theta = free_expansion(2, 4);
        let tau = johnson_map(&theta, &FreeGroupAutomorphism::identity(2)).unwrap();
        assert!(tau.is_identity());
        assert_eq!(tau.first_nonzero_degree(), None);
    }

    #[test]
    fn inner_automorphism_gives_inner_derivation() {
        let theta = free_expansion(2, 3);
        let lie = theta.lie().clone();
        let phi = catalogue::conjugation(2, &GroupWord::generator(0));
        let tau = johnson_map(&theta, &phi).unwrap();
        // conjugation by x1 sends X_i to exp(ad X1) X_i
        for i in 0..2 {
            let expected = lie.bracket(&lie.letter(0), &lie.letter(i)).unwrap();
            assert_eq!(tau.graded(1)[i], expected);
        }
    }

    #[test]
    fn oracle_matches_on_a_partial_conjugation() {
        let theta = free_expansion(3, 3);
        let phi = catalogue::partial_conjugation(3, 0, 1);
        let tau = johnson_map(&theta, &phi).unwrap().graded(1);
        let oracle = johnson_graded_oracle(theta.lie(), &phi, 1).unwrap();
        assert_eq!(tau, oracle);
    }

    #[test]
    fn oracle_rejects_too_shallow_automorphisms() {
        let lie = FreeLie::new(2, 3);
        let phi = catalogue::right_transvection(2, 0, 1);
        assert!(matches!(
            johnson_graded_oracle(&lie, &phi, 1),
            Err(Error::Filtration { required: 1, first_nonvanishing: 0 })
        ));
    }

    #[test]
    fn genus_one_s_has_level_zero() {
        let theta = symplectic_expansion(1, 3).unwrap();
        let s = catalogue::genus_one_s();
        assert_eq!(filtration_level(&theta, &s).unwrap(), Some(0));
    }

    #[test]
    fn mismatched_rank_is_rejected() {
        let theta = free_expansion(2, 3);
        assert!(johnson_map(&theta, &FreeGroupAutomorphism::identity(3)).is_err());
    }
}

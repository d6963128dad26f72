//! Automorphisms of free groups given by generator images, always with a certified inverse.

use std::fmt;

use super::group::GroupWord;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, PartialEq, Eq)]
pub struct FreeGroupAutomorphism {
    name: String,
    images: Vec<GroupWord>,
    inverse: Vec<GroupWord>,
}

fn compose_images(outer: &[GroupWord], inner: &[GroupWord]) -> Vec<GroupWord> {
    inner.iter().map(|w| w.substitute(outer)).collect()
}

fn is_identity_images(images: &[GroupWord]) -> bool {
    images
        .iter()
        .enumerate()
        .all(|(i, w)| *w == GroupWord::generator(i))
}

impl FreeGroupAutomorphism {
    /// Builds an automorphism, searching for its inverse by greedy Nielsen reduction.
    pub fn new(name: impl Into<String>, images: Vec<GroupWord>) -> Result<Self> {
        let name = name.into();
        let images: Vec<GroupWord> = images.into_iter().map(|w| w.reduced()).collect();
        let inverse = nielsen_inverse(&images).ok_or_else(|| {
            Error::InverseVerification(format!(
                "no inverse found for `{name}` by Nielsen reduction; supply one explicitly"
            ))
        })?;
        Self::with_inverse(name, images, inverse)
    }

    /// Builds an automorphism from images and a claimed inverse, verifying both compositions.
    pub fn with_inverse(
        name: impl Into<String>,
        images: Vec<GroupWord>,
        inverse: Vec<GroupWord>,
    ) -> Result<Self> {
        let name = name.into();
        if images.len() != inverse.len() || images.is_empty() {
            return Err(Error::InverseVerification(format!(
                "`{name}`: image and inverse lists differ in length"
            )));
        }
        let n = images.len();
        for w in images.iter().chain(&inverse) {
            if w.max_generator().is_some_and(|g| g >= n) {
                return Err(Error::InverseVerification(format!(
                    "`{name}`: word `{w}` uses a generator beyond x{n}"
                )));
            }
        }
        let images: Vec<GroupWord> = images.into_iter().map(|w| w.reduced()).collect();
        let inverse: Vec<GroupWord> = inverse.into_iter().map(|w| w.reduced()).collect();
        if !is_identity_images(&compose_images(&images, &inverse))
            || !is_identity_images(&compose_images(&inverse, &images))
        {
            return Err(Error::InverseVerification(format!(
                "`{name}`: claimed inverse does not compose to the identity"
            )));
        }
        Ok(FreeGroupAutomorphism {
            name,
            images,
            inverse,
        })
    }

    pub fn identity(n: usize) -> Self {
        let images: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        FreeGroupAutomorphism {
            name: "id".into(),
            images: images.clone(),
            inverse: images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn generators(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[GroupWord] {
        &self.inverse
    }

    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        w.substitute(&self.images)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &FreeGroupAutomorphism) -> FreeGroupAutomorphism {
        assert_eq!(self.generators(), other.generators(), "rank mismatch");
        FreeGroupAutomorphism {
            name: format!("{}*{}", self.name, other.name),
            images: compose_images(&self.images, &other.images),
            inverse: compose_images(&other.inverse, &self.inverse),
        }
    }

    pub fn inverse(&self) -> FreeGroupAutomorphism {
        FreeGroupAutomorphism {
            name: format!("{}^-1", self.name),
            images: self.inverse.clone(),
            inverse: self.images.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        is_identity_images(&self.images)
    }

    /// The induced map on `H`: column `i` is the exponent-sum vector of the image of `x_i`.
    pub fn abelianization(&self) -> Matrix {
        let n = self.generators();
        let cols: Vec<_> = self.images.iter().map(|w| w.abelianization(n)).collect();
        Matrix::from_columns(&cols, n)
    }

    /// Whether the induced map on `H` is the identity.
    pub fn acts_trivially_on_homology(&self) -> bool {
        self.abelianization() == Matrix::identity(self.generators())
    }

    /// Whether the image of `r` is conjugate to `r`.
    pub fn fixes_up_to_conjugacy(&self, r: &GroupWord) -> bool {
        self.apply(r).is_conjugate_to(r)
    }

    /// One-line text form: `x1 -> ..., x2 -> ...`.
    pub fn images_text(images: &[GroupWord]) -> String {
        images
            .iter()
            .enumerate()
            .map(|(i, w)| format!("x{} -> {}", i + 1, w))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for FreeGroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, Self::images_text(&self.images))
    }
}

impl fmt::Debug for FreeGroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Reduces the image tuple to signed generators by length-decreasing Nielsen moves,
/// tracking each entry as a word in the original images.
fn nielsen_inverse(images: &[GroupWord]) -> Option<Vec<GroupWord>> {
    let n = images.len();
    let mut t: Vec<GroupWord> = images.to_vec();
    let mut e: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
    let budget = 64 + 8 * images.iter().map(GroupWord::len).sum::<usize>();
    for _ in 0..budget {
        if t.iter().all(|w| w.len() == 1) {
            break;
        }
        let mut best: Option<(usize, usize, i32, bool, usize)> = None;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for sign in [1, -1] {
                    for left in [false, true] {
                        let tj = t[j].pow(sign);
                        let cand = if left { tj.mul(&t[i]) } else { t[i].mul(&tj) };
                        if cand.len() < t[i].len() {
                            let gain = t[i].len() - cand.len();
                            if best.is_none_or(|b| gain > b.4) {
                                best = Some((i, j, sign, left, gain));
                            }
                        }
                    }
                }
            }
        }
        let (i, j, sign, left, _) = best?;
        let tj = t[j].pow(sign);
        let ej = e[j].pow(sign);
        if left {
            t[i] = tj.mul(&t[i]);
            e[i] = ej.mul(&e[i]);
        } else {
            t[i] = t[i].mul(&tj);
            e[i] = e[i].mul(&ej);
        }
    }
    let mut inverse = vec![None; n];
    for i in 0..n {
        if t[i].len() != 1 {
            return None;
        }
        let (g, s) = t[i].0[0];
        if inverse[g].is_some() {
            return None;
        }
        inverse[g] = Some(e[i].pow(s as i32));
    }
    inverse.into_iter().collect()
}

/// Named automorphisms used throughout: Nielsen moves, IA generators and
/// surface mapping classes.
pub mod catalogue {
    use super::*;

    fn with_image(n: usize, i: usize, w: GroupWord) -> Vec<GroupWord> {
        let mut images: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        images[i] = w;
        images
    }

    fn x(i: usize) -> GroupWord {
        GroupWord::generator(i)
    }

    fn xi(i: usize) -> GroupWord {
        GroupWord::generator_inverse(i)
    }

    /// `x_i ↦ x_i x_j`.
    pub fn right_transvection(n: usize, i: usize, j: usize) -> FreeGroupAutomorphism {
        assert_ne!(i, j);
        FreeGroupAutomorphism::with_inverse(
            format!("R{}{}", i + 1, j + 1),
            with_image(n, i, x(i).mul(&x(j))),
            with_image(n, i, x(i).mul(&xi(j))),
        )
        .expect("transvection is invertible")
    }

    /// `x_i ↦ x_j x_i`.
    pub fn left_transvection(n: usize, i: usize, j: usize) -> FreeGroupAutomorphism {
        assert_ne!(i, j);
        FreeGroupAutomorphism::with_inverse(
            format!("L{}{}", i + 1, j + 1),
            with_image(n, i, x(j).mul(&x(i))),
            with_image(n, i, xi(j).mul(&x(i))),
        )
        .expect("transvection is invertible")
    }

    /// `x_i ↦ x_i⁻¹`.
    pub fn inversion(n: usize, i: usize) -> FreeGroupAutomorphism {
        let images = with_image(n, i, xi(i));
        FreeGroupAutomorphism::with_inverse(format!("I{}", i + 1), images.clone(), images)
            .expect("inversion is an involution")
    }

    /// Exchanges `x_i` and `x_j`.
    pub fn swap(n: usize, i: usize, j: usize) -> FreeGroupAutomorphism {
        let mut images: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        images.swap(i, j);
        FreeGroupAutomorphism::with_inverse(
            format!("P{}{}", i + 1, j + 1),
            images.clone(),
            images,
        )
        .expect("swap is an involution")
    }

    /// Inner automorphism `x ↦ w x w⁻¹`.
    pub fn conjugation(n: usize, w: &GroupWord) -> FreeGroupAutomorphism {
        let w = w.reduced();
        let wi = w.inverse();
        let images = (0..n).map(|i| w.mul(&x(i)).mul(&wi)).collect();
        let inverse = (0..n).map(|i| wi.mul(&x(i)).mul(&w)).collect();
        FreeGroupAutomorphism::with_inverse(format!("C[{w}]"), images, inverse)
            .expect("conjugation is invertible")
    }

    /// `K_ij: x_i ↦ x_j x_i x_j⁻¹`.
    pub fn partial_conjugation(n: usize, i: usize, j: usize) -> FreeGroupAutomorphism {
        assert_ne!(i, j);
        FreeGroupAutomorphism::with_inverse(
            format!("K{}{}", i + 1, j + 1),
            with_image(n, i, x(j).mul(&x(i)).mul(&xi(j))),
            with_image(n, i, xi(j).mul(&x(i)).mul(&x(j))),
        )
        .expect("partial conjugation is invertible")
    }

    /// `x_i ↦ x_i c` where `c` does not involve `x_i`.
    pub fn multiply_by(n: usize, i: usize, c: &GroupWord) -> FreeGroupAutomorphism {
        assert!(
            c.letters().iter().all(|&(g, _)| g != i),
            "multiplier must avoid the moved generator"
        );
        FreeGroupAutomorphism::with_inverse(
            format!("M{}[{}]", i + 1, c),
            with_image(n, i, x(i).mul(c)),
            with_image(n, i, x(i).mul(&c.inverse())),
        )
        .expect("multiplier automorphism is invertible")
    }

    /// `K_ijk: x_i ↦ x_i [x_j, x_k]`.
    pub fn commutator_transvection(n: usize, i: usize, j: usize, k: usize) -> FreeGroupAutomorphism {
        assert!(i != j && i != k && j != k);
        multiply_by(n, i, &GroupWord::commutator(&x(j), &x(k)))
            .renamed(format!("K{}{}{}", i + 1, j + 1, k + 1))
    }

    /// Twist along `a_i` on the genus-`g` surface: `a_i ↦ a_i b_i⁻¹`.
    pub fn twist_a(g: usize, i: usize) -> FreeGroupAutomorphism {
        let n = 2 * g;
        FreeGroupAutomorphism::with_inverse(
            format!("Ta{}", i + 1),
            with_image(n, i, x(i).mul(&xi(i + g))),
            with_image(n, i, x(i).mul(&x(i + g))),
        )
        .expect("twist is invertible")
    }

    /// Twist along `b_i` on the genus-`g` surface: `b_i ↦ b_i a_i`.
    pub fn twist_b(g: usize, i: usize) -> FreeGroupAutomorphism {
        let n = 2 * g;
        FreeGroupAutomorphism::with_inverse(
            format!("Tb{}", i + 1),
            with_image(n, i + g, x(i + g).mul(&x(i))),
            with_image(n, i + g, x(i + g).mul(&xi(i))),
        )
        .expect("twist is invertible")
    }

    /// Genus-one `S`: `x1 ↦ x2`, `x2 ↦ x1⁻¹`.
    pub fn genus_one_s() -> FreeGroupAutomorphism {
        FreeGroupAutomorphism::with_inverse(
            "S",
            vec![x(1), xi(0)],
            vec![xi(1), x(0)],
        )
        .expect("S is invertible")
    }

    /// Genus-one `T`: `x2 ↦ x2 x1`.
    pub fn genus_one_t() -> FreeGroupAutomorphism {
        FreeGroupAutomorphism::with_inverse(
            "T",
            vec![x(0), x(1).mul(&x(0))],
            vec![x(0), x(1).mul(&xi(0))],
        )
        .expect("T is invertible")
    }

    /// Exchanges handles `i` and `i+1`: `a_i ↦ R a_{i+1} R⁻¹`, `b_i ↦ R b_{i+1} R⁻¹`,
    /// `a_{i+1} ↦ a_i`, `b_{i+1} ↦ b_i` with `R = [a_i, b_i]`, fixing the relator.
    pub fn handle_swap(g: usize, i: usize) -> FreeGroupAutomorphism {
        assert!(i + 1 < g, "handle swap needs two adjacent handles");
        let j = i + 1;
        let r = GroupWord::commutator(&x(i), &x(i + g));
        let s = GroupWord::commutator(&x(j), &x(j + g));
        let conj = |r: &GroupWord, w: GroupWord| r.mul(&w).mul(&r.inverse());
        let mut images: Vec<GroupWord> = (0..2 * g).map(GroupWord::generator).collect();
        images[i] = conj(&r, x(j));
        images[i + g] = conj(&r, x(j + g));
        images[j] = x(i);
        images[j + g] = x(i + g);
        // the inverse undoes the swap, then conjugates back by the new R = [a_{i+1}, b_{i+1}]
        let mut inverse: Vec<GroupWord> = (0..2 * g).map(GroupWord::generator).collect();
        inverse[i] = x(j);
        inverse[i + g] = x(j + g);
        inverse[j] = conj(&s.inverse(), x(i));
        inverse[j + g] = conj(&s.inverse(), x(i + g));
        FreeGroupAutomorphism::with_inverse(format!("W{}", i + 1), images, inverse)
            .expect("handle swap inverse")
    }

    /// Quarter turn of handle `i` fixing its boundary: `a_i ↦ b_i⁻¹`,
    /// `b_i ↦ b_i a_i b_i⁻¹`; fixes the relator exactly.
    pub fn handle_quarter_turn(g: usize, i: usize) -> FreeGroupAutomorphism {
        let n = 2 * g;
        let (a, b) = (i, i + g);
        let mut images: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        images[a] = xi(b);
        images[b] = x(b).mul(&x(a)).mul(&xi(b));
        let mut inverse: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        inverse[a] = x(a).mul(&x(b)).mul(&xi(a));
        inverse[b] = xi(a);
        FreeGroupAutomorphism::with_inverse(format!("Q{}", i + 1), images, inverse)
            .expect("quarter turn is invertible")
    }

    /// Twist along the curve homologous to `a_i + a_{i+1}`: `b_i ↦ a_{i+1} a_i b_i`,
    /// `b_{i+1} ↦ a_i a_{i+1} b_{i+1}`, conjugated on both handles by `u = a_i a_{i+1}`
    /// so the relator is fixed exactly.
    pub fn chain_twist(g: usize, i: usize) -> FreeGroupAutomorphism {
        assert!(i + 1 < g, "chain twist needs two adjacent handles");
        let n = 2 * g;
        let j = i + 1;
        let u = x(i).mul(&x(j));
        let handles = [i, j, i + g, j + g];
        let mut images: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        images[i + g] = x(j).mul(&x(i)).mul(&x(i + g));
        images[j + g] = x(i).mul(&x(j)).mul(&x(j + g));
        let mut inverse: Vec<GroupWord> = (0..n).map(GroupWord::generator).collect();
        inverse[i + g] = xi(i).mul(&xi(j)).mul(&x(i + g));
        inverse[j + g] = xi(j).mul(&xi(i)).mul(&x(j + g));
        for k in handles {
            images[k] = u.inverse().mul(&images[k]).mul(&u);
            inverse[k] = u.mul(&inverse[k]).mul(&u.inverse());
        }
        FreeGroupAutomorphism::with_inverse(format!("C{}", i + 1), images, inverse)
            .expect("chain twist is invertible")
    }

    /// Cyclic handle rotation `a_i ↦ a_{i+1}`, `b_i ↦ b_{i+1}` (indices mod `g`).
    pub fn handle_rotation(g: usize) -> FreeGroupAutomorphism {
        let n = 2 * g;
        let mut images = vec![GroupWord::empty(); n];
        let mut inverse = vec![GroupWord::empty(); n];
        for i in 0..g {
            let j = (i + 1) % g;
            images[i] = x(j);
            images[i + g] = x(j + g);
            inverse[j] = x(i);
            inverse[j + g] = x(i + g);
        }
        FreeGroupAutomorphism::with_inverse("Rot", images, inverse)
            .expect("rotation is invertible")
    }

    /// Mapping-class generators on the genus-`g` surface used for random sampling.
    pub fn surface_generators(g: usize) -> Vec<FreeGroupAutomorphism> {
        let mut out = Vec::new();
        if g == 1 {
            out.push(genus_one_s());
            out.push(genus_one_t());
        }
        for i in 0..g {
            out.push(twist_a(g, i));
            out.push(twist_b(g, i));
        }
        for i in 0..g.saturating_sub(1) {
            out.push(chain_twist(g, i));
        }
        if g >= 2 {
            out.push(handle_swap(g, 0));
            out.push(handle_rotation(g));
        }
        out
    }

    /// Nielsen generators of `Aut(F_n)`.
    pub fn nielsen_generators(n: usize) -> Vec<FreeGroupAutomorphism> {
        let mut out = Vec::new();
        for i in 0..n {
            out.push(inversion(n, i));
            for j in 0..n {
                if i != j {
                    out.push(right_transvection(n, i, j));
                    out.push(left_transvection(n, i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                out.push(swap(n, i, j));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::catalogue::*;
    use super::*;
    use crate::expansions::group::surface_relator;

    #[test]
    fn nielsen_search_finds_inverses() {
        let images = vec![
            GroupWord::parse("x1 x2 x1", 2).unwrap(),
            GroupWord::parse("x1 x2", 2).unwrap(),
        ];
        let phi = FreeGroupAutomorphism::new("phi", images).unwrap();
        assert!(phi.compose(&phi.inverse()).is_identity());
        assert!(phi.inverse().compose(&phi).is_identity());
    }

    #[test]
    fn non_automorphisms_are_rejected() {
        // x ↦ x, y ↦ y[x,y] is not onto
        let images = vec![
            GroupWord::parse("x1", 2).unwrap(),
            GroupWord::parse("x2 x1 x2 X1 X2", 2).unwrap(),
        ];
        assert!(FreeGroupAutomorphism::new("bad", images).is_err());
        let squares = vec![
            GroupWord::parse("x1 x1", 2).unwrap(),
            GroupWord::parse("x2", 2).unwrap(),
        ];
        assert!(FreeGroupAutomorphism::new("sq", squares).is_err());
    }

    #[test]
    fn wrong_inverse_is_rejected() {
        let images = vec![GroupWord::parse("x1 x2", 2).unwrap(), GroupWord::generator(1)];
        assert!(FreeGroupAutomorphism::with_inverse("t", images.clone(), images).is_err());
    }

    #[test]
    fn surface_generators_fix_the_relator() {
        for g in 1..=3 {
            let r = surface_relator(g);
            for phi in surface_generators(g) {
                assert!(phi.fixes_up_to_conjugacy(&r), "{phi}");
            }
        }
        assert_eq!(twist_a(2, 1).apply(&surface_relator(2)), surface_relator(2));
        assert_eq!(twist_b(2, 0).apply(&surface_relator(2)), surface_relator(2));
    }

    #[test]
    fn genus_one_s_has_order_four() {
        let s = genus_one_s();
        let s2 = s.compose(&s);
        assert!(!s2.is_identity());
        assert!(s2.compose(&s2).is_identity());
        assert!(handle_rotation(3).compose(&handle_rotation(3)).compose(&handle_rotation(3)).is_identity());
    }

    #[test]
    fn abelianization_of_s() {
        let m = genus_one_s().abelianization();
        assert_eq!(m, Matrix::from_i64(&[vec![0, -1], vec![1, 0]]));
    }
}

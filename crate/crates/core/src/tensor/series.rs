//! Truncated power series: exp, log, inverse and the BCH product.

use num_traits::{One, Zero};

use super::TruncatedTensor;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

impl TruncatedTensor {
    /// `Σ_k a^k / k!`; requires `a` to have zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let c = self.constant_term();
        if !c.is_zero() {
            return Err(Error::Precondition(format!(
                "exp needs zero constant term, got {}",
                format_rational(&c)
            )));
        }
        let mut sum = TruncatedTensor::one(self.letters(), self.depth());
        let mut term = sum.clone();
        for k in 1..=self.depth() {
            term = (&term * self).scale(&Rational::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        Ok(sum)
    }

    /// `Σ_k (-1)^{k+1} (a-1)^k / k`; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(Error::Precondition(format!(
                "log needs constant term 1, got {}",
                format_rational(&c)
            )));
        }
        let b = self - &TruncatedTensor::one(self.letters(), self.depth());
        let mut sum = TruncatedTensor::zero(self.letters(), self.depth());
        let mut power = TruncatedTensor::one(self.letters(), self.depth());
        for k in 1..=self.depth() {
            power = &power * &b;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum += &power.scale(&Rational::new(sign.into(), (k as i64).into()));
        }
        Ok(sum)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Precondition(
                "inverse needs a nonzero constant term, got 0".into(),
            ));
        }
        let cinv = c.recip();
        let one = TruncatedTensor::one(self.letters(), self.depth());
        // a = c (1 + b) with b in J
        let b = &self.scale(&cinv) - &one;
        let mut sum = one.clone();
        let mut power = one;
        let neg_b = -&b;
        for _ in 1..=self.depth() {
            power = &power * &neg_b;
            if power.is_zero() {
                break;
            }
            sum += &power;
        }
        Ok(sum.scale(&cinv))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = TruncatedTensor::one(self.letters(), self.depth());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

/// `log(exp x · exp y)`, the Baker–Campbell–Hausdorff product at the common truncation.
pub fn bch(x: &TruncatedTensor, y: &TruncatedTensor) -> Result<TruncatedTensor> {
    let p = x.exp()?.try_mul(&y.exp()?)?;
    p.log()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::tensor::Word;

    fn x(n: usize, depth: usize, i: usize) -> TruncatedTensor {
        TruncatedTensor::letter(n, depth, i)
    }

    #[test]
    fn exp_of_a_letter() {
        let e = x(1, 4, 0).exp().unwrap();
        for k in 0..=4 {
            let w = Word(vec![0; k]);
            assert_eq!(e.coeff(&w), crate::rational::factorial(k).recip());
        }
    }

    #[test]
    fn log_inverts_exp() {
        let a = &x(2, 5, 0) + &(&x(2, 5, 0) * &x(2, 5, 1)).scale(&ratio(3, 7));
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
        assert_eq!(
            TruncatedTensor::zero(2, 5).exp().unwrap(),
            TruncatedTensor::one(2, 5)
        );
    }

    #[test]
    fn bch_in_degree_two() {
        // oracle: expand (1+X+X²/2)(1+Y+Y²/2) and log by hand
        let (a, b) = (x(2, 2, 0), x(2, 2, 1));
        let z = bch(&a, &b).unwrap();
        let expected = &(&a + &b) + &a.commutator(&b).scale(&ratio(1, 2));
        assert_eq!(z, expected);
    }

    #[test]
    fn domain_errors_name_the_constant_term() {
        let a = TruncatedTensor::constant(2, 3, rat(2));
        let e = a.exp().unwrap_err();
        assert!(e.to_string().contains('2'));
        assert!(a.log().unwrap_err().to_string().contains('2'));
        assert!(TruncatedTensor::zero(2, 3).inverse().is_err());
    }

    #[test]
    fn inverse_of_one_minus_x_is_geometric() {
        let a = &TruncatedTensor::one(1, 3) - &x(1, 3, 0);
        let inv = a.inverse().unwrap();
        for k in 0..=3 {
            assert_eq!(inv.coeff(&Word(vec![0; k])), rat(1));
        }
        assert_eq!(&a * &inv, TruncatedTensor::one(1, 3));
    }
}

//! Gaussian rationals `a + bi` with `a, b` in Q.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type Coeff = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Coeff {
    Complex::new(rat(n, 1), Rat::zero())
}

pub fn real(r: Rat) -> Coeff {
    Complex::new(r, Rat::zero())
}

pub fn frac(n: i64, d: i64) -> Coeff {
    Complex::new(rat(n, d), Rat::zero())
}

pub fn imag_unit() -> Coeff {
    Complex::new(Rat::zero(), Rat::one())
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn render_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text of a coefficient: `3/2`, `-i`, `(1/2+3i)`.
pub fn render(c: &Coeff) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => render_rat(&c.re),
        (true, false) => imag_text(&c.im),
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({}{}{})", render_rat(&c.re), sign, imag_text(&c.im.abs()))
        }
    }
}

fn imag_text(r: &Rat) -> String {
    if r.is_one() {
        "i".to_string()
    } else if (-r).is_one() {
        "-i".to_string()
    } else {
        format!("{}i", render_rat(r))
    }
}

/// Nonnegative "leading sign" test used when printing sums.
pub fn is_negative(c: &Coeff) -> bool {
    if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative()
    }
}

/// `c` as an `f64` complex number.
pub fn to_f64(c: &Coeff) -> Complex<f64> {
    use num_traits::ToPrimitive;
    Complex::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

//! Scalar traits for the exact linear algebra layer.
//!
//! Integer normal forms are generic over [`IntegerScalar`] (any signed
//! `num_integer::Integer`), and vector-space computations are generic over
//! [`Field`]. The crate root fixes the concrete instantiations used by the
//! algebra modules: arbitrary precision integers and rationals, plus the
//! prime field [`Fp`] for classical cohomology with finite coefficients.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signed Euclidean integers usable by the Hermite and Smith reductions.
pub trait IntegerScalar: Integer + Signed + Clone + Debug {}

impl<T: Integer + Signed + Clone + Debug> IntegerScalar for T {}

/// An exact field. Zero tests are exact; there is no tolerance anywhere.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

impl Field for BigRational {}

/// Extended gcd over any integer scalar: returns `(g, s, t)` with
/// `s*a + t*b = g` and `g >= 0`.
pub fn xgcd<T: IntegerScalar>(a: &T, b: &T) -> (T, T, T) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, nr);
        let ns = old_s - q.clone() * s.clone();
        old_s = std::mem::replace(&mut s, ns);
        let nt = old_t - q * t.clone();
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Element of the prime field `Z/p`.
///
/// The modulus travels with the value. Values produced by `Zero::zero` and
/// `One::one` carry modulus 0: they are integers that bind to the modulus
/// of the first bound operand they meet, which is the canonical map
/// `Z -> Z/p`.
#[derive(Clone, Copy)]
pub struct Fp {
    value: i64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "prime field modulus must be at least 2");
        Fp {
            value: value.rem_euclid(modulus as i64),
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let r = value.mod_floor(&m);
        Fp::new(r.to_i64().expect("residue fits"), modulus)
    }

    pub fn value(&self) -> i64 {
        if self.modulus == 0 {
            self.value
        } else {
            self.value.rem_euclid(self.modulus as i64)
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    fn unify(self, other: Self) -> (i64, i64, u64) {
        let m = match (self.modulus, other.modulus) {
            (0, m) | (m, 0) => m,
            (a, b) => {
                assert_eq!(a, b, "mixing residues of different prime fields");
                a
            }
        };
        if m == 0 {
            (self.value, other.value, 0)
        } else {
            let mi = m as i64;
            (self.value.rem_euclid(mi), other.value.rem_euclid(mi), m)
        }
    }

    fn wrap(value: i128, modulus: u64) -> Self {
        if modulus == 0 {
            Fp {
                value: i64::try_from(value).expect("unbound Fp constant overflow"),
                modulus: 0,
            }
        } else {
            let m = modulus as i128;
            Fp {
                value: value.rem_euclid(m) as i64,
                modulus,
            }
        }
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "{}", self.value),
            m => write!(f, "{} mod {}", self.value, m),
        }
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.unify(*other);
        a == b
    }
}

impl Eq for Fp {}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let (a, b, m) = self.unify(rhs);
        Fp::wrap(a as i128 + b as i128, m)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let (a, b, m) = self.unify(rhs);
        Fp::wrap(a as i128 - b as i128, m)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let (a, b, m) = self.unify(rhs);
        Fp::wrap(a as i128 * b as i128, m)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::wrap(-(self.value as i128), self.modulus)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        let (a, b, m) = self.unify(rhs);
        if m == 0 {
            assert!(b == 1 || b == -1, "division of unbound Fp constants");
            return Fp::wrap(a as i128 * b as i128, 0);
        }
        let (g, s, _) = xgcd(&(b as i128), &(m as i128));
        assert!(g == 1, "division by zero in Z/{m}");
        Fp::wrap(a as i128 * s, m)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp {
            value: 1,
            modulus: 0,
        }
    }
}

impl Field for Fp {}

/// True if `n` is prime (trial division; inputs here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

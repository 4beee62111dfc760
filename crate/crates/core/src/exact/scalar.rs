//! Exact scalars: arbitrary-precision rationals and prime-field residues.
//!
//! Every value in the crate is built from these; there is no floating point
//! anywhere. Rationals are kept in lowest terms with positive denominator
//! (enforced by `BigRational`), prime-field residues are kept reduced
//! modulo their modulus.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The field a scalar (or a whole matrix) lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FieldTag {
    /// The rationals.
    Rational,
    /// The prime field with the given (prime) modulus.
    Prime(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An element of Q or of a prime field F_p.
///
/// Arithmetic between scalars of different fields is a programming error and
/// panics; all user-facing entry points validate field uniformity first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn tag(&self) -> FieldTag {
        match self {
            Scalar::Q(_) => FieldTag::Rational,
            Scalar::Fp { modulus, .. } => FieldTag::Prime(*modulus),
        }
    }

    pub fn zero(tag: FieldTag) -> Self {
        Scalar::from_integer(0, tag)
    }

    pub fn one(tag: FieldTag) -> Self {
        Scalar::from_integer(1, tag)
    }

    pub fn from_integer(n: i64, tag: FieldTag) -> Self {
        match tag {
            FieldTag::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            FieldTag::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { value: r, modulus: p }
            }
        }
    }

    /// Exact rational p/q. Panics when `q == 0`.
    pub fn rational(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::Q(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    fn assert_same(&self, other: &Scalar) {
        assert!(
            self.tag() == other.tag(),
            "field mismatch: {} vs {}",
            self.tag(),
            other.tag()
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: (a + b) % p,
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same(other);
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                modulus: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                // Fermat: value^(p-2) mod p, p prime.
                let mut base = *value as u128;
                let mut exp = modulus - 2;
                let m = *modulus as u128;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp { value: acc as u64, modulus: *modulus }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// True when the value is an integer (always true over a prime field).
    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_integer(),
            Scalar::Fp { .. } => true,
        }
    }

    /// The value as an `i64`, when it is an integer of that size.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    let n = r.to_integer();
                    i64::try_from(&n).ok()
                } else {
                    None
                }
            }
            Scalar::Fp { value, .. } => i64::try_from(*value).ok(),
        }
    }

    /// Parses "p", "-p" or "p/q" in the given field.
    pub fn parse(text: &str, tag: FieldTag) -> Result<Scalar, String> {
        let parse_int = |s: &str| -> Result<BigInt, String> {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("invalid integer {s:?}"))
        };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (parse_int(n)?, parse_int(d)?),
            None => (parse_int(text)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        let r = BigRational::new(num, den);
        match tag {
            FieldTag::Rational => Ok(Scalar::Q(r)),
            FieldTag::Prime(p) => {
                let pb = BigInt::from(p);
                let rem = |x: &BigInt| -> BigInt {
                    let m = x % &pb;
                    if m.is_negative() {
                        m + &pb
                    } else {
                        m
                    }
                };
                let n = rem(r.numer());
                let d = rem(r.denom());
                if d.is_zero() {
                    return Err(format!("denominator of {text:?} vanishes mod {p}"));
                }
                let n = u64::try_from(&n).expect("reduced residue fits u64");
                let d = u64::try_from(&d).expect("reduced residue fits u64");
                let num = Scalar::Fp { value: n, modulus: p };
                let den = Scalar::Fp { value: d, modulus: p };
                Ok(num.div(&den))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

//! Concrete coefficient rings: the integers, the rationals, and Z/n.
//!
//! The whole pipeline works over any commutative ring with 1 that is reached
//! from the integers by the canonical homomorphism, so this module keeps the
//! menu small and exact: arbitrary-precision integers, rationals in lowest
//! terms, and residue rings Z/n for any n >= 2 (n may be composite — nothing
//! downstream ever divides).
//!
//! Elements carry their ring with them; combining elements of different
//! rings is an error, never a coercion.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeff::{Coefficient, Factor};
use crate::error::{Error, Result};

/// A coefficient ring descriptor.
///
/// The text syntax used on the command line and in serialized files is
/// `int`, `rat`, or `mod:<n>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ring {
    Integers,
    Rationals,
    /// Integers modulo `n`, `n >= 2`. Composite moduli are welcome.
    Modulus(BigUint),
}

impl Ring {
    /// Residue ring constructor; rejects n < 2.
    pub fn modulus(n: impl Into<BigUint>) -> Result<Self> {
        let n = n.into();
        if n < BigUint::from(2u32) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("modulus must be >= 2, got {n}"),
            });
        }
        Ok(Ring::Modulus(n))
    }

    /// Parse a ring descriptor: `int`, `rat`, or `mod:<n>`.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "int" => Ok(Ring::Integers),
            "rat" => Ok(Ring::Rationals),
            other => {
                if let Some(n) = other.strip_prefix("mod:") {
                    let n: BigUint = n.parse().map_err(|_| Error::Syntax {
                        pos: 4,
                        msg: format!("invalid modulus `{n}`"),
                    })?;
                    Ring::modulus(n)
                } else {
                    Err(Error::Syntax {
                        pos: 0,
                        msg: format!("unknown ring `{other}`; expected int, rat, or mod:<n>"),
                    })
                }
            }
        }
    }

    pub fn zero(&self) -> RingValue {
        self.from_integer(&BigInt::zero())
    }

    pub fn one(&self) -> RingValue {
        self.from_integer(&BigInt::one())
    }

    /// The canonical homomorphism from the integers into this ring.
    pub fn from_integer(&self, n: &BigInt) -> RingValue {
        match self {
            Ring::Integers => RingValue::Int(n.clone()),
            Ring::Rationals => RingValue::Rat(BigRational::from_integer(n.clone())),
            Ring::Modulus(m) => RingValue::Mod {
                residue: n.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap(),
                modulus: m.clone(),
            },
        }
    }

    pub fn from_i64(&self, n: i64) -> RingValue {
        self.from_integer(&BigInt::from(n))
    }

    /// Parse one coefficient in this ring's syntax: a decimal integer for
    /// `int` and `mod:<n>` (residues are reduced), `p/q` or a decimal for
    /// `rat`.
    pub fn parse_value(&self, text: &str) -> Result<RingValue> {
        let text = text.trim();
        let bad = |msg: String| Error::Syntax { pos: 0, msg };
        match self {
            Ring::Rationals => {
                if let Some((num, den)) = text.split_once('/') {
                    let p: BigInt = num
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("invalid numerator `{num}`")))?;
                    let q: BigInt = den
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("invalid denominator `{den}`")))?;
                    if q.is_zero() {
                        return Err(bad("zero denominator".into()));
                    }
                    Ok(RingValue::Rat(BigRational::new(p, q)))
                } else {
                    let p: BigInt = text
                        .parse()
                        .map_err(|_| bad(format!("invalid rational `{text}`")))?;
                    Ok(RingValue::Rat(BigRational::from_integer(p)))
                }
            }
            _ => {
                let n: BigInt = text
                    .parse()
                    .map_err(|_| bad(format!("invalid integer `{text}`")))?;
                Ok(self.from_integer(&n))
            }
        }
    }

    /// A small random element, used for randomized identity checks and for
    /// sampled sweep inputs. Integers and rationals stay in a narrow band so
    /// printed matrices remain readable; residues are uniform.
    pub fn sample_small(&self, rng: &mut impl Rng) -> RingValue {
        match self {
            Ring::Integers => self.from_i64(rng.gen_range(-9..=9)),
            Ring::Rationals => {
                let p = rng.gen_range(-9..=9);
                let q = rng.gen_range(1..=4);
                RingValue::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
            }
            Ring::Modulus(_) => {
                // Rejection-free: sample a wide integer and reduce. The bias
                // is negligible for the moduli exercised here and the result
                // stays deterministic for a fixed seed.
                let raw: u64 = rng.gen();
                self.from_integer(&BigInt::from(raw))
            }
        }
    }

    fn name(&self) -> String {
        match self {
            Ring::Integers => "int".into(),
            Ring::Rationals => "rat".into(),
            Ring::Modulus(n) => format!("mod:{n}"),
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Ring::parse(&text).map_err(D::Error::custom)
    }
}

/// An element of one of the supported rings.
///
/// Invariants: rationals are stored in lowest terms with positive
/// denominator (enforced by construction), residues satisfy
/// `0 <= residue < modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingValue {
    Int(BigInt),
    Rat(BigRational),
    Mod { residue: BigUint, modulus: BigUint },
}

impl RingValue {
    pub fn ring(&self) -> Ring {
        match self {
            RingValue::Int(_) => Ring::Integers,
            RingValue::Rat(_) => Ring::Rationals,
            RingValue::Mod { modulus, .. } => Ring::Modulus(modulus.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Int(v) => v.is_zero(),
            RingValue::Rat(v) => v.is_zero(),
            RingValue::Mod { residue, .. } => residue.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingValue::Int(v) => v.is_one(),
            RingValue::Rat(v) => v.is_one(),
            RingValue::Mod { residue, .. } => residue.is_one(),
        }
    }

    fn mismatch(&self, rhs: &RingValue) -> Error {
        Error::MismatchedRing {
            left: self.ring().to_string(),
            right: rhs.ring().to_string(),
        }
    }

    pub fn add(&self, rhs: &RingValue) -> Result<RingValue> {
        match (self, rhs) {
            (RingValue::Int(a), RingValue::Int(b)) => Ok(RingValue::Int(a + b)),
            (RingValue::Rat(a), RingValue::Rat(b)) => Ok(RingValue::Rat(a + b)),
            (
                RingValue::Mod { residue: a, modulus: m },
                RingValue::Mod { residue: b, modulus: n },
            ) if m == n => Ok(RingValue::Mod {
                residue: (a + b) % m,
                modulus: m.clone(),
            }),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn mul(&self, rhs: &RingValue) -> Result<RingValue> {
        match (self, rhs) {
            (RingValue::Int(a), RingValue::Int(b)) => Ok(RingValue::Int(a * b)),
            (RingValue::Rat(a), RingValue::Rat(b)) => Ok(RingValue::Rat(a * b)),
            (
                RingValue::Mod { residue: a, modulus: m },
                RingValue::Mod { residue: b, modulus: n },
            ) if m == n => Ok(RingValue::Mod {
                residue: (a * b) % m,
                modulus: m.clone(),
            }),
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn sub(&self, rhs: &RingValue) -> Result<RingValue> {
        self.add(&rhs.negate())
    }

    pub fn negate(&self) -> RingValue {
        match self {
            RingValue::Int(v) => RingValue::Int(-v),
            RingValue::Rat(v) => RingValue::Rat(-v),
            RingValue::Mod { residue, modulus } => {
                let r = if residue.is_zero() {
                    BigUint::zero()
                } else {
                    modulus - residue
                };
                RingValue::Mod {
                    residue: r,
                    modulus: modulus.clone(),
                }
            }
        }
    }

    /// Multiply by an integer through the canonical homomorphism.
    pub fn scale_integer(&self, k: &BigInt) -> RingValue {
        match self {
            RingValue::Int(v) => RingValue::Int(v * k),
            RingValue::Rat(v) => RingValue::Rat(v * BigRational::from_integer(k.clone())),
            RingValue::Mod { residue, modulus } => {
                let k_mod = k
                    .mod_floor(&BigInt::from(modulus.clone()))
                    .to_biguint()
                    .unwrap();
                RingValue::Mod {
                    residue: (residue * k_mod) % modulus,
                    modulus: modulus.clone(),
                }
            }
        }
    }

    /// Map an integer element into `target` through the canonical
    /// homomorphism. Defined only from the integers (identity on the same
    /// ring); anything else has no canonical map.
    pub fn map_into(&self, target: &Ring) -> Result<RingValue> {
        if &self.ring() == target {
            return Ok(self.clone());
        }
        match self {
            RingValue::Int(v) => Ok(target.from_integer(v)),
            _ => Err(Error::MismatchedRing {
                left: self.ring().to_string(),
                right: target.to_string(),
            }),
        }
    }
}

impl std::fmt::Display for RingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingValue::Int(v) => write!(f, "{v}"),
            RingValue::Rat(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            RingValue::Mod { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Serialization shape for [`RingValue`]: a `{ring, value}` pair, so files
/// holding ring elements are self-describing. The textual `value` is exactly
/// what [`Display`](std::fmt::Display) prints and [`Ring::parse_value`]
/// reads back, so round-trips are lossless.
#[derive(Serialize, Deserialize)]
struct RingValueRepr {
    ring: Ring,
    value: String,
}

impl Serialize for RingValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RingValueRepr {
            ring: self.ring(),
            value: self.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RingValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RingValueRepr::deserialize(deserializer)?;
        repr.ring.parse_value(&repr.value).map_err(D::Error::custom)
    }
}

impl Coefficient for RingValue {
    fn is_zero(&self) -> bool {
        RingValue::is_zero(self)
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.add(rhs)
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)
    }

    fn neg(&self) -> Self {
        self.negate()
    }

    fn scale_int(&self, k: &BigInt) -> Self {
        self.scale_integer(k)
    }

    fn has_symbols(&self) -> bool {
        false
    }

    fn as_factor(&self) -> Factor {
        if self.is_one() {
            return Factor::One;
        }
        match self {
            RingValue::Int(v) => {
                if (-v).is_one() {
                    Factor::MinusOne
                } else {
                    Factor::Simple {
                        negative: v.sign() == Sign::Minus,
                        text: v.abs().to_string(),
                    }
                }
            }
            RingValue::Rat(v) => {
                if (-v).is_one() {
                    Factor::MinusOne
                } else {
                    let mag = v.abs();
                    let text = if mag.denom().is_one() {
                        mag.numer().to_string()
                    } else {
                        format!("{}/{}", mag.numer(), mag.denom())
                    };
                    Factor::Simple {
                        negative: v.is_negative(),
                        text,
                    }
                }
            }
            // Residues are canonical representatives, never signed.
            RingValue::Mod { residue, .. } => Factor::Simple {
                negative: false,
                text: residue.to_string(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn int(n: i64) -> RingValue {
        Ring::Integers.from_i64(n)
    }

    #[test]
    fn descriptor_round_trip() {
        for text in ["int", "rat", "mod:6", "mod:97"] {
            let ring = Ring::parse(text).unwrap();
            assert_eq!(ring.to_string(), text);
        }
        assert!(Ring::parse("mod:1").is_err());
        assert!(Ring::parse("mod:0").is_err());
        assert!(Ring::parse("real").is_err());
    }

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let v = Ring::Rationals.parse_value("-6/-4").unwrap();
        assert_eq!(v.to_string(), "3/2");
        let w = Ring::Rationals.parse_value("2/-4").unwrap();
        assert_eq!(w.to_string(), "-1/2");
        assert!(Ring::Rationals.parse_value("1/0").is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let z6 = Ring::modulus(6u32).unwrap();
        assert_eq!(z6.from_i64(-1).to_string(), "5");
        assert_eq!(z6.from_i64(13).to_string(), "1");
        let a = z6.from_i64(4);
        let b = z6.from_i64(5);
        assert_eq!(a.add(&b).unwrap(), z6.from_i64(3));
        assert_eq!(a.mul(&b).unwrap(), z6.from_i64(2));
        assert_eq!(a.negate(), z6.from_i64(2));
        assert_eq!(z6.zero().negate(), z6.zero());
    }

    #[test]
    fn zero_divisors_are_representable() {
        // Z/6 is not a domain; 2 * 3 = 0 must just work.
        let z6 = Ring::modulus(6u32).unwrap();
        let prod = z6.from_i64(2).mul(&z6.from_i64(3)).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn mixing_rings_is_rejected() {
        let z6 = Ring::modulus(6u32).unwrap();
        let z5 = Ring::modulus(5u32).unwrap();
        assert!(int(1).add(&z6.one()).is_err());
        assert!(z6.one().mul(&z5.one()).is_err());
        assert!(int(1).add(&Ring::Rationals.one()).is_err());
        assert!(z6.one().map_into(&Ring::Integers).is_err());
    }

    #[test]
    fn canonical_homomorphism_is_a_ring_map() {
        // 10_000 randomized cases per ring: addition, multiplication, and
        // negation all commute with the map from the integers.
        let rings = [
            Ring::Integers,
            Ring::Rationals,
            Ring::modulus(2u32).unwrap(),
            Ring::modulus(6u32).unwrap(),
            Ring::modulus(97u32).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for ring in &rings {
            for _ in 0..10_000 {
                let a = BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000));
                let b = BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000));
                let fa = ring.from_integer(&a);
                let fb = ring.from_integer(&b);
                assert_eq!(ring.from_integer(&(&a + &b)), fa.add(&fb).unwrap());
                assert_eq!(ring.from_integer(&(&a * &b)), fa.mul(&fb).unwrap());
                assert_eq!(ring.from_integer(&(-&a)), fa.negate());
                assert_eq!(fa.scale_integer(&b), fa.mul(&fb).unwrap());
            }
            assert!(ring.zero().is_zero());
            assert!(ring.one().is_one());
        }
    }

    #[test]
    fn value_parsing_per_ring() {
        assert_eq!(Ring::Integers.parse_value("-12").unwrap(), int(-12));
        assert!(Ring::Integers.parse_value("1/2").is_err());
        let z6 = Ring::modulus(6u32).unwrap();
        assert_eq!(z6.parse_value("10").unwrap(), z6.from_i64(4));
        assert_eq!(
            Ring::Rationals.parse_value("7").unwrap().to_string(),
            "7"
        );
    }
}

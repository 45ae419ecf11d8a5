//! Binary floating point with an arbitrary-precision mantissa.
//!
//! Every operation takes its target precision (in bits) as an argument; there
//! is no ambient context. Addition, subtraction, multiplication, division and
//! square root are correctly rounded (round half to even). The transcendental
//! helpers (`pi`, `ln`, `cos_pi_ratio`) are evaluated in fixed point with
//! guard bits and then rounded once, so their error is below one unit in the
//! last place.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Guard bits carried by the fixed-point series evaluations.
const SERIES_GUARD: u32 = 40;

/// An arbitrary-precision real number `mantissa * 2^exponent`.
#[derive(Clone, Debug)]
pub struct HpReal {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

impl HpReal {
    pub fn zero(precision: u32) -> Self {
        HpReal {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision,
        }
    }

    pub fn from_i64(value: i64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(value), precision)
    }

    pub fn from_bigint(value: &BigInt, precision: u32) -> Self {
        Self::rounded(value.clone(), 0, false, precision)
    }

    /// `num / den`, correctly rounded.
    pub fn from_ratio(num: &BigInt, den: &BigInt, precision: u32) -> Self {
        Self::from_bigint(num, precision + 2).div(&Self::from_bigint(den, precision + 2), precision)
    }

    /// Exact conversion of a finite `f64`, then rounded to `precision`.
    pub fn from_f64(value: f64, precision: u32) -> Self {
        assert!(value.is_finite(), "cannot convert {value} to HpReal");
        if value == 0.0 {
            return Self::zero(precision);
        }
        let bits = value.abs().to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mut mantissa = BigInt::from(m);
        if value < 0.0 {
            mantissa = -mantissa;
        }
        Self::rounded(mantissa, e, false, precision)
    }

    /// Fixed-point value `fixed * 2^-frac_bits`, rounded to `precision`.
    fn from_fixed(fixed: BigInt, frac_bits: u32, precision: u32) -> Self {
        Self::rounded(fixed, -(frac_bits as i64), false, precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Position of the most significant bit: the value lies in
    /// `[2^(msb-1), 2^msb)` in magnitude. `None` for zero.
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64)
        }
    }

    /// Round `mantissa * 2^exponent` to `precision` bits. `sticky` records
    /// that nonzero bits below `mantissa` were already discarded; callers
    /// that set it always supply at least `precision + 2` bits.
    fn rounded(mantissa: BigInt, exponent: i64, sticky: bool, precision: u32) -> Self {
        assert!(precision >= 2, "precision must be at least 2 bits");
        let bits = mantissa.bits();
        if bits <= precision as u64 {
            debug_assert!(!sticky || mantissa.is_zero() || bits >= precision as u64);
            return HpReal {
                mantissa,
                exponent,
                precision,
            };
        }
        let shift = bits - precision as u64;
        let negative = mantissa.is_negative();
        let magnitude = mantissa.magnitude();
        let mut quotient = magnitude >> shift;
        let remainder = magnitude - (&quotient << shift);
        let half = num_bigint::BigUint::one() << (shift - 1);
        let round_up = match remainder.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => sticky || quotient.is_odd(),
        };
        if round_up {
            quotient += 1u32;
        }
        let mut out = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, quotient);
        let mut exponent = exponent + shift as i64;
        if out.bits() > precision as u64 {
            out >>= 1;
            exponent += 1;
        }
        HpReal {
            mantissa: out,
            exponent,
            precision,
        }
    }

    /// The same value rounded to a new precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        Self::rounded(self.mantissa.clone(), self.exponent, false, precision)
    }

    pub fn neg(&self) -> Self {
        HpReal {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        HpReal {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        HpReal {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
            precision: self.precision,
        }
    }

    pub fn mul(&self, other: &HpReal, precision: u32) -> Self {
        Self::rounded(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            false,
            precision,
        )
    }

    pub fn add(&self, other: &HpReal, precision: u32) -> Self {
        if self.is_zero() {
            return other.with_precision(precision);
        }
        if other.is_zero() {
            return self.with_precision(precision);
        }
        let (big, small) = if self.magnitude_exponent() >= other.magnitude_exponent() {
            (self, other)
        } else {
            (other, self)
        };
        let big_msb = big.magnitude_exponent().unwrap();
        let small_msb = small.magnitude_exponent().unwrap();
        // `big` is a multiple of 2^grid and every rounding boundary of the
        // result sits on that grid too, so a summand smaller than 2^(grid-1)
        // only contributes its sign.
        let grid = big.exponent.min(big_msb - precision as i64 - 4);
        let (small_mantissa, small_exponent) = if small_msb <= grid - 1 {
            let unit = if small.is_negative() { -1 } else { 1 };
            (BigInt::from(unit), grid - 2)
        } else {
            (small.mantissa.clone(), small.exponent)
        };
        let e = big.exponent.min(small_exponent);
        let sum = (&big.mantissa << (big.exponent - e) as u64)
            + (small_mantissa << (small_exponent - e) as u64);
        Self::rounded(sum, e, false, precision)
    }

    pub fn sub(&self, other: &HpReal, precision: u32) -> Self {
        self.add(&other.neg(), precision)
    }

    pub fn div(&self, other: &HpReal, precision: u32) -> Self {
        assert!(!other.is_zero(), "HpReal division by zero");
        if self.is_zero() {
            return Self::zero(precision);
        }
        // Quotient carries at least precision + 2 bits.
        let want = precision as i64 + 2;
        let shift = (want + other.mantissa.bits() as i64 - self.mantissa.bits() as i64).max(0) as u64;
        let num = &self.mantissa << shift;
        let (q, r) = num.div_rem(&other.mantissa);
        let exponent = self.exponent - other.exponent - shift as i64;
        if r.is_zero() {
            Self::rounded(q, exponent, false, precision)
        } else {
            // Quotient truncates toward zero; append a sticky bit.
            let bump = if q.is_negative() { -1 } else { 1 };
            Self::rounded((q << 1u32) + BigInt::from(bump), exponent - 1, true, precision)
        }
    }

    pub fn sqrt(&self, precision: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative HpReal");
        if self.is_zero() {
            return Self::zero(precision);
        }
        let want = 2 * (precision as i64 + 2);
        let mut shift = (want - self.mantissa.bits() as i64).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = self.mantissa.magnitude() << shift as u64;
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let exponent = (self.exponent - shift) / 2;
        let root = BigInt::from(root);
        if exact {
            Self::rounded(root, exponent, false, precision)
        } else {
            Self::rounded((root << 1u32) + 1, exponent - 1, true, precision)
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_integer(&self) -> BigInt {
        if self.exponent >= 0 {
            return &self.mantissa << self.exponent as u64;
        }
        let shift = (-self.exponent) as u64;
        let mag = self.mantissa.magnitude();
        let half = num_bigint::BigUint::one() << (shift - 1);
        let rounded = (mag + half) >> shift;
        BigInt::from_biguint(self.mantissa.sign(), rounded)
    }

    /// Exact `|self - value|`.
    pub fn distance_to_integer(&self, value: &BigInt) -> HpReal {
        let e = self.exponent.min(0);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = value << (-e) as u64;
        let diff = (a - b).abs();
        let precision = (diff.bits() as u32).max(2);
        HpReal {
            mantissa: diff,
            exponent: e,
            precision,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let drop = bits.saturating_sub(60);
        let top = (self.mantissa.magnitude() >> drop).to_u64().unwrap() as f64;
        let value = top * 2f64.powi((self.exponent + drop as i64).clamp(i32::MIN as i64, i32::MAX as i64) as i32);
        if self.is_negative() {
            -value
        } else {
            value
        }
    }

    /// Decimal rendering with `digits` digits after the point (truncated
    /// toward zero after rounding the scaled value to nearest).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = HpReal {
            mantissa: &self.mantissa * &scale,
            exponent: self.exponent,
            precision: u32::MAX,
        }
        .round_to_integer();
        let negative = scaled.is_negative();
        let text = scaled.abs().to_string();
        let text = if text.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - text.len()), text)
        } else {
            text
        };
        let (int_part, frac_part) = text.split_at(text.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Pi rounded to `precision` bits.
    pub fn pi(precision: u32) -> Self {
        let w = precision + SERIES_GUARD;
        Self::from_fixed(pi_fixed(w), w, precision)
    }

    /// ln 2 rounded to `precision` bits.
    pub fn ln2(precision: u32) -> Self {
        let w = precision + SERIES_GUARD;
        Self::from_fixed(ln2_fixed(w), w, precision)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self, precision: u32) -> Self {
        assert!(
            !self.is_zero() && !self.is_negative(),
            "logarithm of a non-positive HpReal"
        );
        let msb = self.magnitude_exponent().unwrap();
        // self = f * 2^k with f in [1/2, 1); move f into [1/sqrt2, sqrt2).
        let mut k = msb;
        let bits = self.mantissa.bits() as i64;
        let extra = (k.unsigned_abs().max(1) as f64).log2().ceil() as u32 + 2;
        let w = precision + SERIES_GUARD + extra;
        // f in fixed point: mantissa * 2^(w - bits)
        let mut f = if w as i64 >= bits {
            &self.mantissa << (w as i64 - bits) as u64
        } else {
            &self.mantissa >> (bits - w as i64) as u64
        };
        // f now represents a value in [1/2, 1); 0.7071 threshold.
        let one = BigInt::one() << w;
        let inv_sqrt2 = sqrt_fixed(&(BigInt::one() << (w - 1)), w);
        if f < inv_sqrt2 {
            f <<= 1u32;
            k -= 1;
        }
        let t = ((&f - &one) << w) / (&f + &one);
        let ln_f = atanh_fixed(&t, w) << 1u32;
        let result = ln_f + ln2_fixed(w) * BigInt::from(k);
        Self::from_fixed(result, w, precision)
    }

    /// `cos(pi * p / q)`, with exact zeros and ones where the angle makes them so.
    pub fn cos_pi_ratio(p: i64, q: i64, precision: u32) -> Self {
        assert!(q > 0, "denominator must be positive");
        let q2 = 2 * q;
        let mut r = p.rem_euclid(q2);
        if r > q {
            r = q2 - r;
        }
        let mut negate = false;
        if 2 * r > q {
            r = q - r;
            negate = true;
        }
        if 2 * r == q {
            return Self::zero(precision);
        }
        if r == 0 {
            let one = Self::from_i64(1, precision);
            return if negate { one.neg() } else { one };
        }
        let w = precision + SERIES_GUARD;
        let value = if 4 * r > q {
            // cos(theta) = sin(pi/2 - theta), angle pi * (q - 2r) / (2q)
            let theta = pi_fixed(w) * BigInt::from(q - 2 * r) / BigInt::from(2 * q);
            sin_fixed(&theta, w)
        } else {
            let theta = pi_fixed(w) * BigInt::from(r) / BigInt::from(q);
            cos_fixed(&theta, w)
        };
        let out = Self::from_fixed(value, w, precision);
        if negate {
            out.neg()
        } else {
            out
        }
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl HpReal {
    fn cmp_value(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // ~0.30103 decimal digits per bit
        let digits = (self.precision as f64 * 0.30103).floor() as usize;
        let int_digits = match self.magnitude_exponent() {
            Some(e) if e > 0 => (e as f64 * 0.30103).ceil() as usize,
            _ => 0,
        };
        write!(f, "{}", self.to_decimal(digits.saturating_sub(int_digits).max(1)))
    }
}

/// Complex number over [`HpReal`]; used for raw eigenvalue products.
#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: HpReal,
    pub im: HpReal,
}

impl HpComplex {
    pub fn new(re: HpReal, im: HpReal) -> Self {
        HpComplex { re, im }
    }

    pub fn one(precision: u32) -> Self {
        HpComplex {
            re: HpReal::from_i64(1, precision),
            im: HpReal::zero(precision),
        }
    }

    pub fn mul(&self, other: &HpComplex, precision: u32) -> Self {
        let p = precision + 8;
        let re = self
            .re
            .mul(&other.re, p)
            .sub(&self.im.mul(&other.im, p), precision);
        let im = self
            .re
            .mul(&other.im, p)
            .add(&self.im.mul(&other.re, p), precision);
        HpComplex { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

// Fixed-point kernels. A value x is represented as round(x * 2^w).

fn atan_inv_fixed(x: u64, w: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w) / &x;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn pi_fixed(w: u32) -> BigInt {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let g = 8;
    let v = (atan_inv_fixed(5, w + g) << 4u32) - (atan_inv_fixed(239, w + g) << 2u32);
    round_shift(v, g)
}

fn atanh_fixed(t: &BigInt, w: u32) -> BigInt {
    // Odd function; truncating shifts only terminate on nonnegative values.
    if t.is_negative() {
        return -atanh_fixed(&-t, w);
    }
    let t2 = (t * t) >> w;
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut k: u64 = 1;
    loop {
        power = (&power * &t2) >> w;
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * k + 1);
        k += 1;
    }
    sum
}

fn ln2_fixed(w: u32) -> BigInt {
    // ln 2 = 2 atanh(1/3)
    let g = 8;
    let third = (BigInt::one() << (w + g)) / BigInt::from(3);
    round_shift(atanh_fixed(&third, w + g) << 1u32, g)
}

fn cos_fixed(theta: &BigInt, w: u32) -> BigInt {
    let t2 = (theta * theta) >> w;
    let mut term = BigInt::one() << w;
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = ((&term * &t2) >> w) / BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

fn sin_fixed(theta: &BigInt, w: u32) -> BigInt {
    let t2 = (theta * theta) >> w;
    let mut term = theta.clone();
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = ((&term * &t2) >> w) / BigInt::from((2 * k) * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    sum
}

fn sqrt_fixed(x: &BigInt, w: u32) -> BigInt {
    (x << w).sqrt()
}

fn round_shift(v: BigInt, s: u32) -> BigInt {
    (v + (BigInt::one() << (s - 1))) >> s
}

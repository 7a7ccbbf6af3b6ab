//! GF(2^m) arithmetic over log/antilog tables, 2 <= m <= 16.
//!
//! Elements are integers in `[0, 2^m)`; bit k is the coefficient of x^k in
//! the polynomial-basis representation. Addition is XOR.

use std::fmt;

/// Default primitive polynomial per extension degree, bit-encoded
/// (e.g. 0x13 = x^4 + x + 1). All entries are verified primitive at
/// construction time.
const DEFAULT_POLY: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    DegreeOutOfRange(u32),
    WrongPolyDegree { poly: u32, m: u32 },
    NotPrimitive(u32),
    ZeroInverse,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::DegreeOutOfRange(m) => {
                write!(f, "extension degree {m} out of range (2..=16)")
            }
            FieldError::WrongPolyDegree { poly, m } => {
                write!(f, "polynomial {poly:#x} does not have degree {m}")
            }
            FieldError::NotPrimitive(poly) => {
                write!(f, "polynomial {poly:#x} is reducible or not primitive")
            }
            FieldError::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
        }
    }
}

impl std::error::Error for FieldError {}

#[derive(Clone)]
pub struct FieldContext {
    m: u32,
    poly: u32,
    /// alpha^i for i in 0..2*(q-1); doubled so products index directly.
    exp: Vec<u32>,
    /// log[a] for a in 1..q (log[0] unused).
    log: Vec<u32>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldContext(GF(2^{}), poly={:#x})", self.m, self.poly)
    }
}

impl FieldContext {
    pub fn new(m: u32, poly: Option<u32>) -> Result<Self, FieldError> {
        if !(2..=16).contains(&m) {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let poly = poly.unwrap_or(DEFAULT_POLY[m as usize]);
        if poly >> m != 1 {
            return Err(FieldError::WrongPolyDegree { poly, m });
        }
        let q = 1u32 << m;
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![u32::MAX; q as usize];

        // Walk alpha^i by multiply-by-x with reduction. A primitive poly is
        // exactly one whose root cycles through all q-1 nonzero elements.
        let mut a = 1u32;
        for i in 0..order {
            if a == 0 || log[a as usize] != u32::MAX {
                return Err(FieldError::NotPrimitive(poly));
            }
            exp[i] = a;
            exp[i + order] = a;
            log[a as usize] = i as u32;
            a <<= 1;
            if a & q != 0 {
                a ^= poly;
            }
        }
        if a != 1 {
            return Err(FieldError::NotPrimitive(poly));
        }
        Ok(FieldContext { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Field size 2^m.
    pub fn size(&self) -> u32 {
        1 << self.m
    }

    /// Multiplicative group order 2^m - 1.
    pub fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let order = self.order();
        Ok(self.exp[(order - self.log[a as usize]) as usize % order as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = self.order() as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// alpha^e for any integer exponent (negative exponents wrap mod 2^m-1).
    pub fn alpha_pow(&self, e: i64) -> u32 {
        let order = self.order() as i64;
        let e = e.rem_euclid(order);
        self.exp[e as usize]
    }

    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    /// Evaluates a polynomial with ascending coefficients (`c[0]` constant)
    /// at `x`.
    pub fn eval_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            acc = self.mul(acc, x) ^ c;
        }
        acc
    }
}

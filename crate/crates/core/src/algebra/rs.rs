//! Systematic Reed-Solomon codes over GF(2^m) with error-erasure decoding.
//!
//! Codeword layout: array index j holds the coefficient of x^(n-1-j), so the
//! first k symbols are the data and the last n-k the parity. Decoding runs
//! syndromes -> erasure locator -> Berlekamp-Massey on the Forney syndromes
//! -> Chien search -> Forney's formula.

use std::fmt;

use super::field::FieldContext;
use super::locator::{berlekamp_massey, chien_search, poly_derivative, poly_mul};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeFailure(pub &'static str);

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "decoding failed: {}", self.0)
    }
}

impl std::error::Error for DecodeFailure {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RsError {
    LengthOutOfRange { n: usize, max: usize },
    DimensionOutOfRange { k: usize, n: usize },
    DataLengthMismatch { got: usize, want: usize },
    BadErasure(usize),
}

impl fmt::Display for RsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RsError::LengthOutOfRange { n, max } => {
                write!(f, "code length {n} exceeds field limit {max}")
            }
            RsError::DimensionOutOfRange { k, n } => write!(f, "dimension {k} invalid for n={n}"),
            RsError::DataLengthMismatch { got, want } => {
                write!(f, "data has {got} symbols, expected {want}")
            }
            RsError::BadErasure(p) => write!(f, "erasure position {p} out of range or repeated"),
        }
    }
}

impl std::error::Error for RsError {}

#[derive(Clone, Debug)]
pub struct RsCode {
    field: FieldContext,
    n: usize,
    k: usize,
    /// Generator polynomial prod_{i=1..n-k} (x - alpha^i), ascending.
    genpoly: Vec<u32>,
}

impl RsCode {
    pub fn new(field: FieldContext, n: usize, k: usize) -> Result<Self, RsError> {
        if n == 0 || n > field.order() as usize {
            return Err(RsError::LengthOutOfRange {
                n,
                max: field.order() as usize,
            });
        }
        if k > n {
            return Err(RsError::DimensionOutOfRange { k, n });
        }
        let mut genpoly = vec![1u32];
        for i in 1..=(n - k) as i64 {
            genpoly = poly_mul(&field, &genpoly, &[field.alpha_pow(i), 1]);
        }
        Ok(RsCode { field, n, k, genpoly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    /// Systematic encode: output[0..k] == data.
    pub fn encode(&self, data: &[u32]) -> Result<Vec<u32>, RsError> {
        if data.len() != self.k {
            return Err(RsError::DataLengthMismatch {
                got: data.len(),
                want: self.k,
            });
        }
        let r = self.n - self.k;
        let mut word = vec![0u32; self.n];
        word[..self.k].copy_from_slice(data);
        if r == 0 {
            return Ok(word);
        }
        // long division of data(x) * x^r by the monic generator; the
        // remainder lands in the parity positions
        let mut rem = word.clone();
        for i in 0..self.k {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            for j in 1..=r {
                rem[i + j] ^= self.field.mul(c, self.genpoly[r - j]);
            }
        }
        word[self.k..].copy_from_slice(&rem[self.k..]);
        Ok(word)
    }

    /// Syndromes S_i = word(alpha^i) for i = 1..=n-k (Horner over the
    /// degree-descending array).
    pub fn syndromes(&self, word: &[u32]) -> Vec<u32> {
        (1..=(self.n - self.k) as i64)
            .map(|i| {
                let x = self.field.alpha_pow(i);
                word.iter().fold(0u32, |acc, &c| self.field.mul(acc, x) ^ c)
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &[u32]) -> bool {
        word.len() == self.n && self.syndromes(word).iter().all(|&s| s == 0)
    }

    /// Error-erasure decoding. Any pattern with
    /// `2*errors + erasures <= n - k` (errors outside the erasure set) is
    /// corrected; beyond that budget the result is `Err` or an undetected
    /// miscorrection, as usual for bounded-distance decoding.
    pub fn decode(&self, word: &[u32], erasures: &[usize]) -> Result<Vec<u32>, DecodeFailure> {
        if word.len() != self.n {
            return Err(DecodeFailure("word length mismatch"));
        }
        let r = self.n - self.k;
        if r == 0 {
            return Ok(word.to_vec());
        }
        let mut seen = vec![false; self.n];
        for &p in erasures {
            if p >= self.n || seen[p] {
                return Err(DecodeFailure("bad erasure position"));
            }
            seen[p] = true;
        }
        let f_count = erasures.len();
        if f_count > r {
            return Err(DecodeFailure("more erasures than redundancy"));
        }

        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(word.to_vec());
        }

        let field = &self.field;
        // erasure locator Gamma(x) = prod (1 - X_e x), X_e = alpha^(degree)
        let mut gamma = vec![1u32];
        for &p in erasures {
            let x_e = field.alpha_pow((self.n - 1 - p) as i64);
            gamma = poly_mul(field, &gamma, &[1, x_e]);
        }
        // Forney syndromes: Xi(x) = S(x) Gamma(x) mod x^r, then BM on the
        // coefficients starting at x^f
        let s_poly = synd.clone();
        let mut xi = poly_mul(field, &s_poly, &gamma);
        xi.truncate(r);
        let modified = &xi[f_count.min(xi.len())..];
        let lambda = berlekamp_massey(field, modified);
        let nu = lambda.len() - 1;
        if 2 * nu + f_count > r {
            return Err(DecodeFailure("error locator degree exceeds budget"));
        }

        // roots of Lambda give error positions (degree coordinates)
        let err_degrees = chien_search(field, &lambda, field.order() as usize);
        if err_degrees.len() != nu {
            return Err(DecodeFailure("locator does not split over the field"));
        }
        if err_degrees.iter().any(|&d| d >= self.n) {
            return Err(DecodeFailure("error located outside the word"));
        }

        // combined locator and evaluator
        let psi = poly_mul(field, &lambda, &gamma);
        let mut omega = poly_mul(field, &s_poly, &psi);
        omega.truncate(r);
        let psi_deriv = poly_derivative(&psi);

        let mut out = word.to_vec();
        let mut all_degrees: Vec<usize> = err_degrees;
        for &p in erasures {
            let d = self.n - 1 - p;
            if all_degrees.contains(&d) {
                return Err(DecodeFailure("error and erasure at the same position"));
            }
            all_degrees.push(d);
        }
        for d in all_degrees {
            let x_inv = field.alpha_pow(-(d as i64));
            let denom = field.eval_poly(&psi_deriv, x_inv);
            if denom == 0 {
                return Err(DecodeFailure("repeated locator root"));
            }
            let num = field.eval_poly(&omega, x_inv);
            let magnitude = field.div(num, denom).expect("denominator checked");
            out[self.n - 1 - d] ^= magnitude;
        }

        if self.syndromes(&out).iter().any(|&s| s != 0) {
            return Err(DecodeFailure("corrected word fails syndrome check"));
        }
        Ok(out)
    }
}

//! Error-locator machinery shared by the Reed-Solomon and BCH decoders:
//! Berlekamp-Massey over a syndrome sequence and Chien root search.

use super::field::FieldContext;

/// Minimal LFSR (error locator) for the sequence `synd`, ascending
/// coefficients with `lambda[0] = 1`.
pub fn berlekamp_massey(f: &FieldContext, synd: &[u32]) -> Vec<u32> {
    let mut lambda = vec![1u32];
    let mut prev = vec![1u32];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut prev_disc = 1u32;

    for n in 0..synd.len() {
        let mut disc = 0u32;
        for i in 0..=l.min(n) {
            if i < lambda.len() {
                disc ^= f.mul(lambda[i], synd[n - i]);
            }
        }
        if disc == 0 {
            shift += 1;
            continue;
        }
        let scale = f.div(disc, prev_disc).expect("prev discrepancy nonzero");
        let mut next = lambda.clone();
        if next.len() < prev.len() + shift {
            next.resize(prev.len() + shift, 0);
        }
        for (i, &p) in prev.iter().enumerate() {
            next[i + shift] ^= f.mul(scale, p);
        }
        if 2 * l <= n {
            prev = lambda;
            prev_disc = disc;
            l = n + 1 - l;
            shift = 1;
        } else {
            shift += 1;
        }
        lambda = next;
    }
    while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
        lambda.pop();
    }
    lambda
}

/// Positions `d` in `0..limit` (degree coordinates) whose locator
/// `alpha^d` is a root inverse of `lambda`, i.e. `lambda(alpha^{-d}) = 0`.
pub fn chien_search(f: &FieldContext, lambda: &[u32], limit: usize) -> Vec<usize> {
    let mut roots = Vec::new();
    for d in 0..limit {
        if f.eval_poly(lambda, f.alpha_pow(-(d as i64))) == 0 {
            roots.push(d);
        }
    }
    roots
}

/// Product of two polynomials, ascending coefficients.
pub fn poly_mul(f: &FieldContext, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] ^= f.mul(ai, bj);
        }
    }
    out
}

/// Formal derivative over GF(2^m): even-power terms vanish.
pub fn poly_derivative(poly: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; poly.len().saturating_sub(1).max(1)];
    for (i, &c) in poly.iter().enumerate().skip(1) {
        if i % 2 == 1 {
            out[i - 1] = c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bm_recovers_single_error_locator() {
        let f = FieldContext::new(3, None).unwrap();
        // error of value v at degree position d: S_i = v * alpha^(i*d)
        let (v, d) = (5u32, 4i64);
        let synd: Vec<u32> = (1..=2).map(|i| f.mul(v, f.alpha_pow(i * d))).collect();
        let lambda = berlekamp_massey(&f, &synd);
        assert_eq!(lambda.len(), 2);
        let roots = chien_search(&f, &lambda, 7);
        assert_eq!(roots, vec![4]);
    }

    #[test]
    fn derivative_drops_even_terms() {
        // 1 + x + x^2 + x^3 -> 1 + x^2
        assert_eq!(poly_derivative(&[1, 1, 1, 1]), vec![1, 0, 1]);
    }
}

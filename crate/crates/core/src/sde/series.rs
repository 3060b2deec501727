//! Truncated series `1 + sum_{k>=1} u_k x^k` and their real powers.
//!
//! Coefficient `k` of every result depends only on `u_1..u_k`, and is computed
//! by the same sequence of floating-point operations whatever the truncation,
//! so shared coefficients agree bit for bit across depths.

/// Coefficients `c_0..c_len-1` of `(1 + u)^p`; `u[0]` is ignored.
pub fn power(u: &[f64], p: f64, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    if len == 0 {
        return c;
    }
    c[0] = 1.0;
    for k in 1..len {
        let mut acc = 0.0;
        for j in 1..=k.min(u.len().saturating_sub(1)) {
            acc += ((p + 1.0) * j as f64 - k as f64) * u[j] * c[k - j];
        }
        c[k] = acc / k as f64;
    }
    c
}

/// Product of two truncated series.
pub fn multiply(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Normalized tail `u_k = a_k / a_0` of a series with nonzero leading term.
pub fn normalized(a: &[f64]) -> Vec<f64> {
    let lead = a[0];
    let mut u: Vec<f64> = a.iter().map(|x| x / lead).collect();
    u[0] = 0.0;
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_and_square_root() {
        let u = [0.0, 0.5, -0.25, 0.125];
        let inv = power(&u, -1.0, 4);
        let one = multiply(&[1.0, 0.5, -0.25, 0.125], &inv, 4);
        for (k, x) in one.iter().enumerate() {
            assert!((x - if k == 0 { 1.0 } else { 0.0 }).abs() < 1e-14);
        }
        let r = power(&u, 0.5, 4);
        let sq = multiply(&r, &r, 4);
        for k in 1..4 {
            assert!((sq[k] - u[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn integer_powers_match_repeated_products() {
        let a = [1.0, 0.3, -0.7, 0.2, 0.05];
        let cube = multiply(&multiply(&a, &a, 5), &a, 5);
        let p = power(&a, 3.0, 5);
        for k in 0..5 {
            assert!((cube[k] - p[k]).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn truncation_is_bit_consistent(
            u in proptest::collection::vec(-2.0f64..2.0, 2..12),
            p in -5i32..5,
            short in 1usize..12,
        ) {
            let long = power(&u, p as f64, 12);
            let s = power(&u, p as f64, short);
            prop_assert_eq!(&long[..short], &s[..]);
        }
    }
}

//! Exact integer and rational combinatorial primitives.
//!
//! Binomials and factorials are computed by multiplicative recurrence in
//! arbitrary precision; no gamma-function approximation is involved. The
//! `Q`/`R` block-counting numbers are evaluated through their closed forms
//! (power of two times a binomial), which the test suite proves equal to the
//! defining double sums by exhaustive enumeration.

use crate::error::{Error, Result};
use crate::numeric::Scalar;
use num::bigint::BigInt;
use num::{One, Zero};

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Binomial coefficient `C(n, k)`; zero for `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// Rising factorial `x (x+1) ... (x+n-1)`; `1` for `n = 0`.
pub fn pochhammer<T: Scalar>(x: &T, n: u32) -> T {
    let mut acc = T::one();
    for i in 0..n {
        acc = acc * (x.clone() + T::from_int(i as i64));
    }
    acc
}

/// An integer or half-integer stored without rounding as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfInteger {
    twice: u64,
}

impl HalfInteger {
    pub fn from_integer(n: u64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    /// `n + 1/2`.
    pub fn plus_half(n: u64) -> Self {
        HalfInteger { twice: 2 * n + 1 }
    }

    pub fn twice(self) -> u64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }
}

/// The block-counting number `Q(n, k) = 2^(2(n-k)) C(2n-k, k)`, defined for
/// integer and half-integer `n`; zero outside `0 <= k <= n` (in particular
/// `Q(n, -1) = 0`).
pub fn q_number(n: HalfInteger, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let tau = n.twice(); // 2n
    if k as u64 > tau {
        return BigInt::zero();
    }
    let m = tau - k as u64; // 2n - k
    let c = binomial(m, k);
    if c.is_zero() {
        return c;
    }
    // 2^(2n - 2k) with a nonzero binomial implies 2k <= 2n, so the shift
    // is non-negative.
    c << (m - k as u64)
}

/// `R(n, k) = 2^(2(n-k)+1) C(2n-k+1, k) = Q(n + 1/2, k)`.
pub fn r_number(n: u64, k: i64) -> BigInt {
    q_number(HalfInteger::plus_half(n), k)
}

/// Jacobi polynomial `P_n^(alpha,beta)(x)` by the three-term recurrence,
/// in whichever arithmetic `T` provides.
pub fn jacobi<T: Scalar>(n: u32, alpha: u32, beta: u32, x: &T) -> T {
    let a = alpha as i64;
    let b = beta as i64;
    let mut p_prev = T::one();
    if n == 0 {
        return p_prev;
    }
    let mut p_cur = T::from_int(a + 1) + T::ratio(a + b + 2, 2) * (x.clone() - T::one());
    for m in 1..n as i64 {
        let s = 2 * m + a + b;
        let c_lead = 2 * (m + 1) * (m + a + b + 1) * s;
        let c_x = (s + 1) * (s + 2) * s;
        let c_const = (s + 1) * (a * a - b * b);
        let c_prev = 2 * (m + a) * (m + b) * (s + 2);
        let next = (T::from_int(c_x) * x.clone() + T::from_int(c_const)) * p_cur.clone()
            - T::from_int(c_prev) * p_prev;
        p_prev = p_cur;
        p_cur = next / T::from_int(c_lead);
    }
    p_cur
}

/// Terminating Gauss series `2F1(-n, b; c; z)` summed term by term.
///
/// Fails with [`Error::Pole`] when a factor of the denominator Pochhammer
/// `c^(j)` reaches zero before the series terminates.
pub fn hyp2f1_terminating<T: Scalar>(n: u32, b: &T, c: &T, z: &T) -> Result<T> {
    let mut sum = T::one();
    let mut term = T::one();
    for j in 0..n as i64 {
        let denom = c.clone() + T::from_int(j);
        if denom.is_zero() {
            return Err(Error::Pole {
                term: (j + 1) as usize,
            });
        }
        term = term * T::from_int(j - n as i64) * (b.clone() + T::from_int(j))
            / denom
            / T::from_int(j + 1)
            * z.clone();
        sum = sum + term.clone();
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use num::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    fn int(n: i64) -> BigInt {
        BigInt::from_i64(n).unwrap()
    }

    /// Defining double sum for Q: sum_j C(2n+1, 2j) C(n-j, k).
    fn q_direct(n: u64, k: i64) -> BigInt {
        if k < 0 || k as u64 > n {
            return BigInt::zero();
        }
        let mut acc = BigInt::zero();
        for j in 0..=(n - k as u64) {
            acc += binomial(2 * n + 1, 2 * j as i64) * binomial(n - j, k);
        }
        acc
    }

    /// Defining double sum for R: sum_j C(2n+2, 2j+1) C(n-j, k).
    fn r_direct(n: u64, k: i64) -> BigInt {
        if k < 0 || k as u64 > n {
            return BigInt::zero();
        }
        let mut acc = BigInt::zero();
        for j in 0..=(n - k as u64) {
            acc += binomial(2 * n + 2, 2 * j as i64 + 1) * binomial(n - j, k);
        }
        acc
    }

    #[test]
    fn binomial_small_cases() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(4, 7), int(0));
        assert_eq!(binomial(4, -1), int(0));
    }

    #[test]
    fn binomial_symmetry_and_pascal() {
        for n in 0..=64u64 {
            for k in 0..=n as i64 {
                assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
                if n > 0 {
                    assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
                }
            }
        }
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
        assert_eq!(factorial(20), BigInt::from(2_432_902_008_176_640_000u64));
    }

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(&rat(1, 1), 4), rat(24, 1));
        assert_eq!(pochhammer(&rat(1, 2), 1), rat(1, 2));
        // (-5/2)(-3/2) = 15/4
        assert_eq!(pochhammer(&rat(-5, 2), 2), rat(15, 4));
        assert_eq!(pochhammer(&rat(7, 3), 0), rat(1, 1));
    }

    #[test]
    fn jacobi_low_degrees() {
        assert_eq!(jacobi(0, 3, 5, &rat(9, 7)), rat(1, 1));
        // P_1^(0,0)(x) = x
        assert_eq!(jacobi(1, 0, 0, &rat(7, 3)), rat(7, 3));
        // P_1^(2,0)(3) = (a+1) + (a+b+2)(x-1)/2 = 3 + 4 = 7
        assert_eq!(jacobi(1, 2, 0, &rat(3, 1)), rat(7, 1));
    }

    #[test]
    fn jacobi_matches_hypergeometric_representation() {
        // P_n^(a,b)(x) = C(n+a, n)/1 * 2F1(-n, 1+a+b+n; a+1; (1-x)/2),
        // with the leading factor (a+1)^(n)/n!.
        let xs = [
            rat(-2, 1),
            rat(-1, 1),
            rat(0, 1),
            rat(1, 1),
            rat(2, 1),
            rat(5, 3),
        ];
        for n in 0..=20u32 {
            for alpha in 0..=10u32 {
                for beta in 0..=10u32 {
                    for x in &xs {
                        let lead = pochhammer(&rat(alpha as i64 + 1, 1), n)
                            / BigRational::from_bigint(&factorial(n as u64));
                        let arg = (BigRational::one() - x.clone()) / rat(2, 1);
                        let f = hyp2f1_terminating(
                            n,
                            &rat((1 + alpha + beta + n) as i64, 1),
                            &rat(alpha as i64 + 1, 1),
                            &arg,
                        )
                        .unwrap();
                        assert_eq!(jacobi(n, alpha, beta, x), lead * f);
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_contiguous_identity() {
        // (n + a/2 + 1)/(n+1) (1+x) P_n^(a,1)(x) = P_{n+1}^(a,0)(x) + P_n^(a,0)(x)
        let xs = [rat(-3, 2), rat(0, 1), rat(1, 1), rat(5, 3), rat(4, 1)];
        for n in 0..=15u32 {
            for alpha in 0..=10u32 {
                for x in &xs {
                    let lhs = rat(2 * n as i64 + alpha as i64 + 2, 2 * (n as i64 + 1))
                        * (BigRational::one() + x.clone())
                        * jacobi(n, alpha, 1, x);
                    let rhs = jacobi(n + 1, alpha, 0, x) + jacobi(n, alpha, 0, x);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn hyp2f1_small_cases() {
        // n = 0: single term.
        assert_eq!(
            hyp2f1_terminating(0, &rat(3, 2), &rat(1, 2), &rat(7, 5)).unwrap(),
            rat(1, 1)
        );
        // n = 1: 1 - (b/c) z.
        let b = rat(3, 4);
        let c = rat(5, 2);
        let z = rat(2, 7);
        assert_eq!(
            hyp2f1_terminating(1, &b, &c, &z).unwrap(),
            BigRational::one() - b.clone() / c.clone() * z.clone()
        );
    }

    #[test]
    fn hyp2f1_direct_summation_oracle() {
        // 2F1(-2, -5/2; 1/2; 1) summed independently term by term:
        // j=0: 1; j=1: (-2)(-5/2)/((1/2) 1!) = 10; j=2: (2)(15/4)/((3/4) 2!) = 5.
        let by_hand = rat(1, 1) + rat(10, 1) + rat(5, 1);
        assert_eq!(by_hand, rat(16, 1));
        let evaluated = hyp2f1_terminating(2, &rat(-5, 2), &rat(1, 2), &rat(1, 1)).unwrap();
        assert_eq!(evaluated, by_hand);
    }

    #[test]
    fn hyp2f1_gauss_summation_via_factorials() {
        // 2F1(k-n, -n-1/2; 1/2; 1) = 2^(2(n-k)) (2n-k)!(n-k)!/((2n-2k)! n!).
        for n in 0..=10u64 {
            for k in 0..=n {
                let lhs = hyp2f1_terminating(
                    (n - k) as u32,
                    &(rat(-(n as i64), 1) - rat(1, 2)),
                    &rat(1, 2),
                    &rat(1, 1),
                )
                .unwrap();
                let rhs = BigRational::from_bigint(
                    &((factorial(2 * n - k) * factorial(n - k)) << (2 * (n - k) as usize)),
                ) / BigRational::from_bigint(&(factorial(2 * n - 2 * k) * factorial(n)));
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn hyp2f1_reports_pole() {
        // c = -1 hits zero at the j = 1 -> 2 transition while terms remain.
        let err = hyp2f1_terminating(3, &rat(1, 2), &rat(-1, 1), &rat(1, 3));
        assert!(matches!(err, Err(Error::Pole { term: 2 })));
    }

    #[test]
    fn q_number_examples() {
        for n in 0..=10u64 {
            assert_eq!(q_number(HalfInteger::from_integer(n), n as i64), int(1));
        }
        // Direct summation: C(5,0) C(2,1) + C(5,2) C(1,1) = 2 + 10.
        assert_eq!(q_number(HalfInteger::from_integer(2), 1), int(12));
        assert_eq!(q_number(HalfInteger::from_integer(4), -1), int(0));
    }

    #[test]
    fn r_number_examples() {
        // Direct summation: C(4,1) C(1,0) + C(4,3) C(0,0) = 4 + 4.
        assert_eq!(r_number(1, 0), int(8));
        assert_eq!(r_number(3, -1), int(0));
        // Brute-force resolution for R(2, 2): the direct sum has the single
        // term C(6,1) C(2,2) = 6, and the closed form 2 C(3,2) agrees.
        assert_eq!(r_direct(2, 2), int(6));
        assert_eq!(r_number(2, 2), int(6));
    }

    #[test]
    fn q_closed_form_equals_direct_sum() {
        for n in 0..=25u64 {
            for k in 0..=n as i64 {
                assert_eq!(
                    q_number(HalfInteger::from_integer(n), k),
                    q_direct(n, k),
                    "Q({n},{k})"
                );
            }
        }
    }

    #[test]
    fn r_closed_form_equals_direct_sum_and_half_integer_q() {
        for n in 0..=25u64 {
            for k in 0..=n as i64 {
                let direct = r_direct(n, k);
                assert_eq!(r_number(n, k), direct, "R({n},{k})");
                assert_eq!(
                    q_number(HalfInteger::plus_half(n), k),
                    direct,
                    "Q({n}+1/2,{k})"
                );
            }
        }
    }

    #[test]
    fn jacobi_f64_matches_exact() {
        for n in 0..=12u32 {
            let exact = jacobi(n, 2, 1, &rat(5, 3)).to_f64();
            let float = jacobi(n, 2, 1, &(5.0f64 / 3.0));
            assert!((exact - float).abs() <= 1e-9 * exact.abs().max(1.0));
        }
    }
}

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Trial-division primality.
pub fn trial_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn trial_primes(hi: u64) -> Vec<u64> {
    (0..hi).filter(|&n| trial_is_prime(n)).collect()
}

/// √q − √p by direct subtraction of 40-decimal-digit fixed-point roots.
/// Each root is floored at 10⁻⁴⁰, so the absolute error is below 2·10⁻⁴⁰.
pub fn sqrt_diff_oracle(p: u64, q: u64) -> f64 {
    let scale = BigUint::from(10u32).pow(80);
    let rp = (BigUint::from(p) * &scale).sqrt();
    let rq = (BigUint::from(q) * &scale).sqrt();
    (rq - rp).to_f64().unwrap() / 1e40
}

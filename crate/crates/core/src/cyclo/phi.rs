use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

type Poly = Arc<Vec<BigInt>>;

fn cache() -> &'static RwLock<HashMap<usize, Poly>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Poly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn proper_divisors(n: usize) -> Vec<usize> {
    (1..n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exact quotient of `num` by the monic polynomial `den` (coefficients low to high).
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let deg_den = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - deg_den];
    for i in (0..quot.len()).rev() {
        let c = rem[i + deg_den].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// Coefficients of `Φ_n`, lowest degree first. Memoized; safe to call from
/// many threads.
pub fn cyclotomic_polynomial(n: usize) -> Poly {
    assert!(n > 0, "Φ_0 is undefined");
    if let Some(p) = cache().read().expect("cyclotomic cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    // x^n - 1 divided by every Φ_d for d | n, d < n
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = -BigInt::one();
    poly[n] = BigInt::one();
    for d in proper_divisors(n) {
        poly = div_exact_monic(&poly, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    cache()
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(n)
        .or_insert(poly)
        .clone()
}

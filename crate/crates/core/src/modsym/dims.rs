use crate::arith::{factorize, is_prime, legendre};
use crate::error::{Error, Result};

/// Index of `Gamma0(N)` in `SL2(Z)`: `N * prod_{l | N} (1 + 1/l)`.
pub fn gamma0_index(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(l, _)| acc / l * (l + 1))
}

/// Sturm bound `ceil(k * mu / 12)`.
pub fn sturm_bound(n: u64, k: u32) -> u64 {
    (k as u64 * gamma0_index(n)).div_ceil(12)
}

/// `dim S_k(Gamma0(N))` for prime `N` and even `k >= 2`, from the genus
/// formula and the weight-k dimension formula.
pub fn dim_oracle(n: u64, k: u32) -> Result<u64> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k));
    }
    if !is_prime(n) {
        return Err(Error::CompositeLevel(n));
    }
    let mu = (n + 1) as i64;
    let nu2 = match n {
        2 => 1,
        _ => 1 + legendre(-1, n),
    };
    let nu3 = match n {
        2 => 0,
        3 => 1,
        _ => 1 + legendre(-3, n),
    };
    let cusps = 2i64;
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    debug_assert_eq!(twelve_g % 12, 0);
    let g = twelve_g / 12;
    let k = k as i64;
    let dim = if k == 2 { g } else { (k - 1) * (g - 1) + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3) };
    Ok(dim as u64)
}

//! Candidate families `(A_k)` with pairwise gaps `>= max(k, k')`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::index_sets::{PeriodicSet, PrimePowerSet, SetFamily, SharedSet};

/// Levels built by the named generators unless stated otherwise.
pub const DEFAULT_LEVELS: usize = 16;

/// `A_k = {j·g_k + o_k : j >= 1}` with `g_k = M·2^k`, `o_k = M·2^{k-1}`.
///
/// `A_k` is the set of multiples of `M` whose quotient has 2-adic valuation
/// exactly `k - 1`, minus its first element. Distinct points differ by a
/// multiple of `M`, so the gap condition holds whenever `M >= levels`.
pub fn dyadic_block_family(levels: usize, m: u64) -> Result<SetFamily> {
    if levels == 0 || levels > 40 {
        return Err(Error::InvalidArgument(format!(
            "dyadic-block family needs 1..=40 levels, got {levels}"
        )));
    }
    if m < levels as u64 {
        return Err(Error::InvalidArgument(format!(
            "dyadic-block family needs M >= levels ({m} < {levels})"
        )));
    }
    let mut sets: Vec<SharedSet> = Vec::with_capacity(levels);
    for k in 1..=levels as u32 {
        let g = m << k;
        let o = m << (k - 1);
        sets.push(Arc::new(PeriodicSet::new(g, &[o], g + o)?));
    }
    Ok(SetFamily::new(format!("dyadic-block(M={m})"), sets))
}

/// Period `g_k` of level `k` in [`dyadic_block_family`].
pub fn dyadic_block_period(k: usize, m: u64) -> u64 {
    m << k
}

/// `A_k = {M·p_k^j : j >= 1}` with `p_k` the `k`-th prime.
pub fn prime_power_family(levels: usize, m: u64) -> Result<SetFamily> {
    if levels == 0 {
        return Err(Error::InvalidArgument("prime-power family needs levels >= 1".into()));
    }
    if m < levels as u64 {
        return Err(Error::InvalidArgument(format!(
            "prime-power family needs M >= levels ({m} < {levels})"
        )));
    }
    let sets = (1..=levels)
        .map(|k| -> Result<SharedSet> {
            Ok(Arc::new(PrimePowerSet::new(crate::index_sets::nth_prime(k), m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SetFamily::new(format!("prime-power(M={m})"), sets))
}

/// `dyadic-block` or `prime-power`, with `M = levels`.
pub fn family_by_name(name: &str, levels: usize) -> Result<SetFamily> {
    let m = levels as u64;
    match name {
        "dyadic-block" => dyadic_block_family(levels, m),
        "prime-power" => prime_power_family(levels, m),
        _ => Err(Error::Parse(format!("unknown family {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_sets::check_gap_family;

    #[test]
    fn dyadic_levels() {
        let f = dyadic_block_family(4, 16).unwrap();
        assert_eq!(f.level(1).unwrap().members_u64(0, 120), vec![48, 80, 112]);
        assert_eq!(f.level(2).unwrap().members_u64(0, 300), vec![96, 160, 224, 288]);
        assert!(check_gap_family(&f, 4, 100_000).unwrap().holds);
        assert_eq!(dyadic_block_period(3, 16), 128);
    }

    #[test]
    fn small_modulus_rejected() {
        assert!(dyadic_block_family(20, 16).is_err());
    }

    #[test]
    fn prime_powers() {
        let f = prime_power_family(5, 5).unwrap();
        assert_eq!(f.level(2).unwrap().members_u64(0, 200), vec![15, 45, 135]);
        assert!(check_gap_family(&f, 5, 1_000_000).unwrap().holds);
    }
}

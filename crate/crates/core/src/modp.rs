//! Arithmetic and dense elimination over a prime field F_p with runtime modulus.
//!
//! Moduli are restricted to 2^20 < p < 2^32 so products fit in a `u64`.

use crate::error::{Error, Result};

/// Two primes just above 2^31 and just below 2^32.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_659, 4_294_967_291];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= (1 << 20) || p >= (1 << 32) {
            return Err(Error::Argument(format!(
                "prime {p} outside the supported range (2^20, 2^32)"
            )));
        }
        if !is_prime_u32(p) {
            return Err(Error::Argument(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Canonical representative of a signed integer.
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Reduction of a rational `num/den`; `None` when `den` vanishes mod p.
    pub fn from_rational(&self, r: &crate::field::Rational) -> Option<u64> {
        use num::{BigInt, ToPrimitive};
        let pb = BigInt::from(self.p);
        let red = |x: &BigInt| -> u64 {
            let m = ((x % &pb) + &pb) % &pb;
            m.to_u64().expect("reduced value fits")
        };
        let n = red(r.numer());
        let d = red(r.denom());
        self.inv(d).map(|di| self.mul(n, di))
    }

    /// Rank of a dense matrix, destroying its contents.
    pub fn rank_in_place(&self, rows: &mut [Vec<u64>]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let ncols = rows[0].len();
        let mut rank = 0;
        for col in 0..ncols {
            if rank == rows.len() {
                break;
            }
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]).expect("nonzero pivot");
            for c in col..ncols {
                rows[rank][c] = self.mul(rows[rank][c], inv);
            }
            let (top, bottom) = rows.split_at_mut(rank + 1);
            let prow = &top[rank];
            for row in bottom.iter_mut() {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                for c in col..ncols {
                    if prow[c] != 0 {
                        row[c] = self.sub(row[c], self.mul(f, prow[c]));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank(&self, rows: &[Vec<u64>]) -> usize {
        let mut m = rows.to_vec();
        self.rank_in_place(&mut m)
    }
}

/// Deterministic Miller-Rabin for n < 2^32.
pub fn is_prime_u32(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_primes_are_prime_and_above_2_31() {
        for p in DEFAULT_PRIMES {
            assert!(p > 1 << 31);
            assert!(PrimeField::new(p).is_ok());
        }
        assert!(PrimeField::new(4_294_967_297).is_err());
        assert!(PrimeField::new(2_147_483_649).is_err());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0);
        for n in 0..5000u64 {
            assert_eq!(is_prime_u32(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn rank_of_small_matrices() {
        let f = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(f.rank(&m), 2);
        let inv2 = f.inv(2).unwrap();
        assert_eq!(f.mul(inv2, 2), 1);
    }
}

//! Word-sized prime fields.
//!
//! Every graded dimension in this crate is the rank of an integer matrix. Ranks
//! are taken modulo primes `p` with `2^30 < p < 2^31`, so a product of two
//! reduced elements plus one more element always fits in a `u64` and can be
//! reduced with a single Barrett step.

use rand::Rng;

use crate::Error;

/// Lower bound (exclusive) for working primes.
pub const MIN_PRIME: u64 = 1 << 30;
/// Upper bound (exclusive) for working primes.
pub const MAX_PRIME: u64 = 1 << 31;

/// The field `Z/pZ` for a prime `2^30 < p < 2^31`.
///
/// Elements are plain `u64` values in canonical range `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    /// floor(2^64 / p)
    barrett: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p <= MIN_PRIME || p >= MAX_PRIME {
            return Err(Error::InvalidInput(format!(
                "modulus {p} outside the supported range (2^30, 2^31)"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("modulus {p} is not prime")));
        }
        let barrett = (u128::from(u64::MAX) + 1) / u128::from(p);
        Ok(Self {
            p,
            barrett: barrett as u64,
        })
    }

    /// Draws a uniformly random prime from the supported range.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let candidate = rng.gen_range(MIN_PRIME + 1..MAX_PRIME) | 1;
            if is_prime(candidate) {
                return Self::new(candidate).expect("candidate is a prime in range");
            }
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces any `x < 2^64` into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((u128::from(x) * u128::from(self.barrett)) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
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
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    /// `a + b * c`, the inner step of elimination.
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        self.reduce(a + b * c)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    /// Reduces an arbitrary-size integer.
    pub fn from_bigint(&self, v: &num_bigint::BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let m = num_bigint::BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

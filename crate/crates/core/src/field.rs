use crate::error::{Error, Result};

/// The prime field GF(p), 2 <= p < 2^16. Elements are `u32` residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 16 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Number of elements, as a `u64` convenience for counting.
    #[inline]
    pub fn order(&self) -> u64 {
        self.p as u64
    }

    pub fn check(&self, value: u64) -> Result<u32> {
        if value >= self.p as u64 {
            Err(Error::EntryOutOfRange {
                value,
                modulus: self.p,
            })
        } else {
            Ok(value as u32)
        }
    }

    #[inline]
    pub fn reduce(&self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `acc + a * b`
    #[inline]
    pub fn mul_add(&self, acc: u32, a: u32, b: u32) -> u32 {
        ((acc as u64 + a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse by the extended Euclidean algorithm. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.reduce(t0)
    }

    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        let p = self.p as u64;
        let mut acc = 0u64;
        for (&x, &y) in a.iter().zip(b) {
            acc += x as u64 * y as u64;
            if acc >= 1 << 62 {
                acc %= p;
            }
        }
        (acc % p) as u32
    }

    /// Number of subspaces of dimension `m` in GF(p)^n (the Gaussian binomial), saturating.
    pub fn gaussian_binomial(&self, n: usize, m: usize) -> u128 {
        if m > n {
            return 0;
        }
        let q = self.p as u128;
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..m {
            let a = q.saturating_pow((n - i) as u32).saturating_sub(1);
            let b = q.saturating_pow((i + 1) as u32).saturating_sub(1);
            num = num.saturating_mul(a);
            den = den.saturating_mul(b);
            if num == u128::MAX {
                return u128::MAX;
            }
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        num / den
    }

    /// Total number of subspaces of GF(p)^n, saturating.
    pub fn subspace_count(&self, n: usize) -> u128 {
        (0..=n).fold(0u128, |acc, m| acc.saturating_add(self.gaussian_binomial(n, m)))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

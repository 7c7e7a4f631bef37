//! Arithmetic in the prime field `Z/p`.

use core::fmt;

/// A field element in canonical form, always in `[0, p)`.
pub type Coeff = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "field characteristic {p} is not prime"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FieldError {}

/// Characteristic of the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldChar(u32);

impl FieldChar {
    pub const Z2: FieldChar = FieldChar(2);

    pub fn new(p: u32) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldChar(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    #[inline]
    pub fn characteristic(self) -> u32 {
        self.0
    }

    /// Canonical representative of an arbitrary integer.
    #[inline]
    pub fn reduce(self, v: i64) -> Coeff {
        v.rem_euclid(self.0 as i64) as Coeff
    }

    #[inline]
    pub fn add(self, a: Coeff, b: Coeff) -> Coeff {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as Coeff
    }

    #[inline]
    pub fn neg(self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn sub(self, a: Coeff, b: Coeff) -> Coeff {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % self.0 as u64) as Coeff
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: Coeff) -> Coeff {
        assert!(!a.is_multiple_of(self.0), "inverse of zero in Z/{}", self.0);
        if self.0 == 2 {
            return 1;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.0 as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        self.reduce(t0)
    }

    /// The scalar `λ` with `target + λ·source = 0`.
    #[inline]
    pub fn cancel_factor(self, target: Coeff, source: Coeff) -> Coeff {
        self.neg(self.mul(target, self.inv(source)))
    }
}

impl Default for FieldChar {
    fn default() -> Self {
        FieldChar::Z2
    }
}

impl fmt::Display for FieldChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let p = p as u64;
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

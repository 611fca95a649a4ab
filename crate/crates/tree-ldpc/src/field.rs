//! Arithmetic in GF(p^s) on integer-labeled elements, and the classical
//! complete family of mutually orthogonal Latin squares (MOLS) built from it.
//!
//! An element with polynomial coefficients (c_0, ..., c_{s-1}) over GF(p) is
//! labeled by the base-p integer sum c_i * p^i, so labels run 0..q-1 and 1 is
//! the multiplicative identity. Addition is coefficient-wise mod p;
//! multiplication is polynomial multiplication reduced by a fixed irreducible
//! modulus per (p, s).

use thiserror::Error;

/// Largest supported field order q = p^s.
pub const MAX_ORDER: u32 = 64;

const MAX_S: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NonPrime(u32),
    #[error("unsupported field size {p}^{s} (need s >= 1 and p^s <= {MAX_ORDER})")]
    UnsupportedSize { p: u32, s: u32 },
    #[error("no modulus polynomial on record for GF({p}^{s})")]
    MissingModulus { p: u32, s: u32 },
    #[error("modulus polynomial for GF({p}^{s}) is reducible")]
    ReducibleModulus { p: u32, s: u32 },
    #[error("element label {label} out of range for field of order {q}")]
    LabelOutOfRange { label: u32, q: u32 },
}

/// A finite field GF(p^s) with q = p^s <= [`MAX_ORDER`].
///
/// Holds the modulus polynomial used for multiplication; elements themselves
/// are plain `u32` labels validated at the operation boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    s: u32,
    q: u32,
    /// Modulus coefficients, constant term first; length s+1, leading coeff 1.
    modulus: Vec<u32>,
}

/// Builds GF(p^s), validating primality of `p`, the size cap, and (for s > 1)
/// irreducibility of the stored modulus polynomial.
pub fn make_field(p: u32, s: u32) -> Result<FieldSpec, FieldError> {
    FieldSpec::new(p, s)
}

impl FieldSpec {
    pub fn new(p: u32, s: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if s == 0 || s as usize > MAX_S {
            return Err(FieldError::UnsupportedSize { p, s });
        }
        let mut q: u64 = 1;
        for _ in 0..s {
            q *= p as u64;
            if q > MAX_ORDER as u64 {
                return Err(FieldError::UnsupportedSize { p, s });
            }
        }
        let modulus = modulus_poly(p, s).ok_or(FieldError::MissingModulus { p, s })?;
        if s > 1 && !is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus { p, s });
        }
        Ok(FieldSpec {
            p,
            s,
            q: q as u32,
            modulus,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Field order q = p^s.
    pub fn order(&self) -> u32 {
        self.q
    }

    fn check(&self, label: u32) -> Result<(), FieldError> {
        if label < self.q {
            Ok(())
        } else {
            Err(FieldError::LabelOutOfRange {
                label,
                q: self.q,
            })
        }
    }

    fn digits(&self, label: u32) -> [u32; MAX_S] {
        let mut out = [0u32; MAX_S];
        let mut rest = label;
        for d in out.iter_mut().take(self.s as usize) {
            *d = rest % self.p;
            rest /= self.p;
        }
        out
    }

    fn compose(&self, digits: &[u32]) -> u32 {
        let mut label = 0u32;
        for i in (0..self.s as usize).rev() {
            label = label * self.p + digits[i];
        }
        label
    }

    /// Coefficient-wise addition mod p.
    pub fn add(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut out = [0u32; MAX_S];
        for i in 0..self.s as usize {
            out[i] = (da[i] + db[i]) % self.p;
        }
        Ok(self.compose(&out))
    }

    /// Polynomial multiplication reduced by the field modulus.
    pub fn mul(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let s = self.s as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        // Convolution product has degree <= 2s - 2.
        let mut prod = [0u32; 2 * MAX_S];
        for i in 0..s {
            for j in 0..s {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        // Reduce x^t = x^(t-s) * (x^s - lower part of modulus) from the top down.
        for t in (s..=2 * s - 2).rev() {
            let c = prod[t];
            if c == 0 {
                continue;
            }
            prod[t] = 0;
            for j in 0..s {
                let sub = (c * self.modulus[j]) % self.p;
                prod[t - s + j] = (prod[t - s + j] + self.p - sub) % self.p;
            }
        }
        Ok(self.compose(&prod[..s]))
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Fixed irreducible modulus per supported (p, s), constant term first.
/// For s = 1 the modulus is just x; multiplication never reaches it.
fn modulus_poly(p: u32, s: u32) -> Option<Vec<u32>> {
    if s == 1 {
        return Some(vec![0, 1]);
    }
    let coeffs: &[u32] = match (p, s) {
        (2, 2) => &[1, 1, 1],          // x^2 + x + 1
        (2, 3) => &[1, 1, 0, 1],       // x^3 + x + 1
        (2, 4) => &[1, 1, 0, 0, 1],    // x^4 + x + 1
        (2, 5) => &[1, 0, 1, 0, 0, 1], // x^5 + x^2 + 1
        (2, 6) => &[1, 1, 0, 0, 0, 0, 1], // x^6 + x + 1
        (3, 2) => &[2, 2, 1],          // x^2 + 2x + 2
        (3, 3) => &[1, 2, 0, 1],       // x^3 + 2x + 1
        (5, 2) => &[2, 4, 1],          // x^2 + 4x + 2
        (7, 2) => &[3, 6, 1],          // x^2 + 6x + 3
        _ => return None,
    };
    Some(coeffs.to_vec())
}

/// Trial division by every monic polynomial of degree 1..=deg/2 over GF(p).
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        // Enumerate monic divisors of degree d by their lower coefficients.
        let mut count = 1u64;
        for _ in 0..d {
            count *= p as u64;
        }
        for idx in 0..count {
            let mut div = vec![0u32; d + 1];
            div[d] = 1;
            let mut rest = idx;
            for c in div.iter_mut().take(d) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            if poly_rem_is_zero(modulus, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], div: &[u32], p: u32) -> bool {
    let d = div.len() - 1;
    let mut rem: Vec<u32> = num.to_vec();
    for t in (d..rem.len()).rev() {
        let c = rem[t];
        if c == 0 {
            continue;
        }
        rem[t] = 0;
        for j in 0..d {
            let sub = (c * div[j]) % p;
            rem[t - d + j] = (rem[t - d + j] + p - sub) % p;
        }
    }
    rem.iter().all(|&c| c == 0)
}

/// A q-by-q array over labels 0..q-1, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: u32,
    entries: Vec<u32>,
}

impl LatinSquare {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, row: u32, col: u32) -> u32 {
        assert!(row < self.order && col < self.order);
        self.entries[(row * self.order + col) as usize]
    }

    pub fn row(&self, row: u32) -> &[u32] {
        let q = self.order as usize;
        &self.entries[row as usize * q..(row as usize + 1) * q]
    }
}

impl std::fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.order {
            for (i, v) in self.row(r).iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The complete family of squares M^(0)..M^(q-1) over GF(q), where
/// M^(k)(j, t) = j + k*t.
///
/// M^(0) is the degenerate square whose row j is constant j; M^(1)..M^(q-1)
/// are Latin and pairwise orthogonal. Row/column/symbol indices are all field
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolsFamily {
    field: FieldSpec,
    squares: Vec<LatinSquare>,
}

/// A property failure found by [`MolsFamily::validate`], identifying where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MolsViolation {
    RowRepeat { square: u32, row: u32, symbol: u32 },
    ColRepeat { square: u32, col: u32, symbol: u32 },
    PairRepeat { square_a: u32, square_b: u32, pair: (u32, u32) },
}

impl std::fmt::Display for MolsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MolsViolation::RowRepeat { square, row, symbol } => {
                write!(f, "square {square}: row {row} repeats symbol {symbol}")
            }
            MolsViolation::ColRepeat { square, col, symbol } => {
                write!(f, "square {square}: column {col} repeats symbol {symbol}")
            }
            MolsViolation::PairRepeat { square_a, square_b, pair } => write!(
                f,
                "squares {square_a}/{square_b}: superimposed pair ({}, {}) repeats",
                pair.0, pair.1
            ),
        }
    }
}

/// Builds M^(k)(j, t) = j + k*t for k = 0..q-1.
pub fn build_mols(field: &FieldSpec) -> MolsFamily {
    MolsFamily::build(field)
}

impl MolsFamily {
    pub fn build(field: &FieldSpec) -> MolsFamily {
        let q = field.order();
        let mut squares = Vec::with_capacity(q as usize);
        for k in 0..q {
            let mut entries = Vec::with_capacity((q * q) as usize);
            for j in 0..q {
                for t in 0..q {
                    let kt = field.mul(k, t).expect("labels in range");
                    entries.push(field.add(j, kt).expect("labels in range"));
                }
            }
            squares.push(LatinSquare { order: q, entries });
        }
        MolsFamily {
            field: field.clone(),
            squares,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// All q squares, index 0 being the degenerate constant-row square.
    pub fn squares(&self) -> &[LatinSquare] {
        &self.squares
    }

    pub fn square(&self, k: u32) -> &LatinSquare {
        &self.squares[k as usize]
    }

    /// Checks the Latin property of M^(1)..M^(q-1) and pairwise orthogonality,
    /// returning every violation found (empty means the family is valid).
    pub fn validate(&self) -> Vec<MolsViolation> {
        let q = self.order();
        let mut out = Vec::new();
        for (k, sq) in self.squares.iter().enumerate().skip(1) {
            for row in 0..q {
                let mut seen = vec![false; q as usize];
                for t in 0..q {
                    let v = sq.get(row, t) as usize;
                    if seen[v] {
                        out.push(MolsViolation::RowRepeat {
                            square: k as u32,
                            row,
                            symbol: v as u32,
                        });
                    }
                    seen[v] = true;
                }
            }
            for col in 0..q {
                let mut seen = vec![false; q as usize];
                for j in 0..q {
                    let v = sq.get(j, col) as usize;
                    if seen[v] {
                        out.push(MolsViolation::ColRepeat {
                            square: k as u32,
                            col,
                            symbol: v as u32,
                        });
                    }
                    seen[v] = true;
                }
            }
        }
        for a in 1..self.squares.len() {
            for b in a + 1..self.squares.len() {
                let sa = &self.squares[a];
                let sb = &self.squares[b];
                let mut seen = vec![false; (q * q) as usize];
                for j in 0..q {
                    for t in 0..q {
                        let pair = (sa.get(j, t), sb.get(j, t));
                        let idx = (pair.0 * q + pair.1) as usize;
                        if seen[idx] {
                            out.push(MolsViolation::PairRepeat {
                                square_a: a as u32,
                                square_b: b as u32,
                                pair,
                            });
                        }
                        seen[idx] = true;
                    }
                }
            }
        }
        out
    }
}

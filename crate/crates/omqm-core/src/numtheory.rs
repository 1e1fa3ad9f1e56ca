//! Arithmetic-function tables: least prime factors, Möbius μ, von Mangoldt Λ,
//! Mertens sums, Chebyshev ψ, and exact divisor power sums.
//!
//! A single linear sieve produces all per-integer data; queries above the
//! table bound fall back to trial-division factorisation so the functions
//! stay total for any `u64` argument. Tables can be persisted in a small
//! binary cache format (see [`ArithmeticTable::save_cache`]).

use num_bigint::BigUint;
use num_traits::One;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

/// Largest table bound the sieve accepts (keeps memory near 130 MB).
pub const MAX_TABLE_BOUND: u64 = 10_000_000;

/// Errors from table construction, queries, and cache I/O.
#[derive(Debug, Error)]
pub enum TableError {
    /// Bound outside the supported range [2, [`MAX_TABLE_BOUND`]].
    #[error("table bound {0} outside supported range 2..={MAX_TABLE_BOUND}")]
    BadBound(u64),
    /// Query argument exceeds what the operation supports.
    #[error("argument {argument} out of range for {operation}")]
    OutOfRange {
        /// Name of the rejecting operation.
        operation: &'static str,
        /// Offending argument value.
        argument: u64,
    },
    /// Underlying I/O failure while reading or writing a cache file.
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    /// Structurally invalid cache file.
    #[error("cache format: {0}")]
    Format(String),
}

/// Sieve tables for 1..=bound: least prime factor, μ, and Λ.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticTable {
    bound: u64,
    /// `lpf[k]` = least prime factor of k (lpf[1] = 1; lpf[0] = 0 unused).
    lpf: Vec<u32>,
    /// `mu[k]` = Möbius μ(k) ∈ {−1, 0, 1}.
    mu: Vec<i8>,
    /// `lambda[k]` = von Mangoldt Λ(k): ln p on prime powers p^m, else 0.
    lambda: Vec<f64>,
}

/// Build the sieve tables for 2 ≤ bound ≤ 10⁷ in O(bound).
pub fn build_table(bound: u64) -> Result<ArithmeticTable, TableError> {
    if !(2..=MAX_TABLE_BOUND).contains(&bound) {
        return Err(TableError::BadBound(bound));
    }
    let n = bound as usize;
    let mut lpf = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut lambda = vec![0.0f64; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    lpf[1] = 1;
    mu[1] = 1;
    for i in 2..=n {
        if lpf[i] == 0 {
            lpf[i] = i as u32;
            mu[i] = -1;
            primes.push(i as u32);
        }
        for &p in &primes {
            if p > lpf[i] {
                break;
            }
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            lpf[ip] = p;
            mu[ip] = if p < lpf[i] { -mu[i] } else { 0 };
        }
    }
    // Λ in a second ascending pass: k = p·m is a prime power exactly when
    // m = 1 or m is a power of the same p (detected via Λ[m] ≠ 0).
    for i in 2..=n {
        let p = lpf[i] as usize;
        let m = i / p;
        lambda[i] = if m == 1 {
            (p as f64).ln()
        } else if lpf[m] as usize == p && lambda[m] != 0.0 {
            lambda[m]
        } else {
            0.0
        };
    }
    Ok(ArithmeticTable {
        bound,
        lpf,
        mu,
        lambda,
    })
}

/// Factorise k by trial division; returns (prime, exponent) pairs ascending.
/// Exact for any `u64`, cost O(√k).
pub fn trial_factorise(mut k: u64) -> Vec<(u64, u32)> {
    assert!(k >= 1, "factorisation needs k >= 1");
    let mut out = Vec::new();
    let mut push = |p: u64, k: &mut u64| {
        if k.is_multiple_of(p) {
            let mut e = 0u32;
            while k.is_multiple_of(p) {
                *k /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    push(2, &mut k);
    push(3, &mut k);
    // Wheel over 6m ± 1.
    let mut p = 5u64;
    while p.saturating_mul(p) <= k {
        push(p, &mut k);
        push(p + 2, &mut k);
        p += 6;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

/// Möbius function from an explicit factorisation.
fn mobius_from_factors(factors: &[(u64, u32)]) -> i8 {
    if factors.iter().any(|&(_, e)| e >= 2) {
        0
    } else if factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Von Mangoldt function from an explicit factorisation.
fn von_mangoldt_from_factors(factors: &[(u64, u32)]) -> f64 {
    match factors {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

/// Möbius μ(k) by trial division (independent of any table).
pub fn mobius_trial(k: u64) -> Result<i8, TableError> {
    if k == 0 {
        return Err(TableError::OutOfRange {
            operation: "mobius",
            argument: 0,
        });
    }
    if k == 1 {
        return Ok(1);
    }
    Ok(mobius_from_factors(&trial_factorise(k)))
}

/// Von Mangoldt Λ(k) by trial division (independent of any table).
pub fn von_mangoldt_trial(k: u64) -> Result<f64, TableError> {
    if k == 0 {
        return Err(TableError::OutOfRange {
            operation: "von_mangoldt",
            argument: 0,
        });
    }
    if k == 1 {
        return Ok(0.0);
    }
    Ok(von_mangoldt_from_factors(&trial_factorise(k)))
}

impl ArithmeticTable {
    /// Upper bound of the table (inclusive).
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Least prime factor of k ≤ bound (lpf(1) = 1).
    pub fn least_prime_factor(&self, k: u64) -> Result<u64, TableError> {
        if k == 0 || k > self.bound {
            return Err(TableError::OutOfRange {
                operation: "least_prime_factor",
                argument: k,
            });
        }
        Ok(self.lpf[k as usize] as u64)
    }

    /// Number of primes ≤ bound.
    pub fn prime_count(&self) -> u64 {
        (2..=self.bound as usize)
            .filter(|&k| self.lpf[k] as usize == k)
            .count() as u64
    }

    /// Möbius μ(k). Uses the sieve for k ≤ bound and trial division above it.
    pub fn mobius(&self, k: u64) -> Result<i8, TableError> {
        if k == 0 {
            return Err(TableError::OutOfRange {
                operation: "mobius",
                argument: 0,
            });
        }
        if k <= self.bound {
            Ok(self.mu[k as usize])
        } else {
            mobius_trial(k)
        }
    }

    /// Von Mangoldt Λ(k). Sieve for k ≤ bound, trial division above it.
    pub fn von_mangoldt(&self, k: u64) -> Result<f64, TableError> {
        if k == 0 {
            return Err(TableError::OutOfRange {
                operation: "von_mangoldt",
                argument: 0,
            });
        }
        if k <= self.bound {
            Ok(self.lambda[k as usize])
        } else {
            von_mangoldt_trial(k)
        }
    }

    /// Mertens sum M(k) = Σ_{j ≤ k} μ(j); requires k ≤ bound.
    pub fn mertens(&self, k: u64) -> Result<i64, TableError> {
        if k > self.bound {
            return Err(TableError::OutOfRange {
                operation: "mertens",
                argument: k,
            });
        }
        Ok(self.mu[1..=k as usize].iter().map(|&m| m as i64).sum())
    }

    /// Chebyshev ψ(n) = Σ_{q ≤ n} Λ(q); requires n ≤ bound.
    pub fn chebyshev_psi(&self, n: u64) -> Result<f64, TableError> {
        if n > self.bound {
            return Err(TableError::OutOfRange {
                operation: "chebyshev_psi",
                argument: n,
            });
        }
        Ok(self.lambda[..=n as usize].iter().sum())
    }

    /// Write the table to `path` in the OMNT binary cache format:
    /// magic `OMNT`, version u32, bound u64, then the lpf (u32), μ (i8) and
    /// Λ (f64 bits) arrays for indices 0..=bound, all little-endian.
    pub fn save_cache(&self, path: &Path) -> Result<(), TableError> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        w.write_all(b"OMNT")?;
        w.write_all(&1u32.to_le_bytes())?;
        w.write_all(&self.bound.to_le_bytes())?;
        for &v in &self.lpf {
            w.write_all(&v.to_le_bytes())?;
        }
        let mu_bytes: Vec<u8> = self.mu.iter().map(|&m| m as u8).collect();
        w.write_all(&mu_bytes)?;
        for &v in &self.lambda {
            w.write_all(&v.to_bits().to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    /// Load a table previously written by [`ArithmeticTable::save_cache`].
    pub fn load_cache(path: &Path) -> Result<Self, TableError> {
        let file = std::fs::File::open(path)?;
        let mut r = BufReader::new(file);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"OMNT" {
            return Err(TableError::Format(format!(
                "bad magic {magic:?}, expected OMNT"
            )));
        }
        let mut u32buf = [0u8; 4];
        r.read_exact(&mut u32buf)?;
        let version = u32::from_le_bytes(u32buf);
        if version != 1 {
            return Err(TableError::Format(format!(
                "unsupported cache version {version}"
            )));
        }
        let mut u64buf = [0u8; 8];
        r.read_exact(&mut u64buf)?;
        let bound = u64::from_le_bytes(u64buf);
        if !(2..=MAX_TABLE_BOUND).contains(&bound) {
            return Err(TableError::Format(format!("bad bound {bound}")));
        }
        let n = bound as usize + 1;
        let mut lpf = vec![0u32; n];
        for v in lpf.iter_mut() {
            r.read_exact(&mut u32buf)?;
            *v = u32::from_le_bytes(u32buf);
        }
        let mut mu_bytes = vec![0u8; n];
        r.read_exact(&mut mu_bytes)?;
        let mu: Vec<i8> = mu_bytes.iter().map(|&b| b as i8).collect();
        if let Some(bad) = mu.iter().find(|&&m| !(-1..=1).contains(&m)) {
            return Err(TableError::Format(format!("mu value {bad} out of range")));
        }
        let mut f64buf = [0u8; 8];
        let mut lambda = vec![0.0f64; n];
        for v in lambda.iter_mut() {
            r.read_exact(&mut f64buf)?;
            *v = f64::from_bits(u64::from_le_bytes(f64buf));
        }
        let mut trailer = [0u8; 1];
        if r.read(&mut trailer)? != 0 {
            return Err(TableError::Format("trailing bytes after arrays".into()));
        }
        Ok(ArithmeticTable {
            bound,
            lpf,
            mu,
            lambda,
        })
    }
}

/// Exact divisor power sum σ_a(k) = Σ_{d | k} d^a as a big integer
/// (σ₈(10⁷) already overflows u128). Requires k ≥ 1 and a ≤ 8.
pub fn divisor_sigma(a: u32, k: u64) -> Result<BigUint, TableError> {
    if k == 0 {
        return Err(TableError::OutOfRange {
            operation: "divisor_sigma",
            argument: 0,
        });
    }
    if a > 8 {
        return Err(TableError::OutOfRange {
            operation: "divisor_sigma (exponent)",
            argument: a as u64,
        });
    }
    let mut acc = BigUint::one();
    for (p, e) in trial_factorise(k) {
        let factor = if a == 0 {
            BigUint::from(e + 1)
        } else {
            // (p^{a(e+1)} − 1) / (p^a − 1)
            let pa = BigUint::from(p).pow(a);
            let num = pa.pow(e + 1) - BigUint::one();
            let den = pa - BigUint::one();
            num / den
        };
        acc *= factor;
    }
    Ok(acc)
}

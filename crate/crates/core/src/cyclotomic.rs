//! Exact arithmetic in cyclotomic fields `ℚ(ζ_N)` and finite-order torus
//! points.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, rat};

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    let p = Arc::new(num);
    cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

pub fn euler_phi(n: u64) -> usize {
    (cyclotomic_polynomial(n).len() - 1) as usize
}

/// Element of `ℚ(ζ_N)` in the power basis `1, ζ, …, ζ^{φ(N)-1}`.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(order: u64) -> Self {
        CyclotomicNumber { order, coeffs: vec![BigRational::zero(); euler_phi(order)] }
    }

    pub fn from_rational(order: u64, r: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(order: u64, k: i64) -> Self {
        Self::from_rational(order, rat(k))
    }

    /// `ζ_N^k`.
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let mut counts = vec![BigInt::zero(); order as usize];
        counts[k.rem_euclid(order as i64) as usize] = BigInt::one();
        Self::from_exponent_counts(order, &counts)
    }

    /// `Σ_k counts[k] ζ_N^k` for `k` in `0..N`.
    pub fn from_exponent_counts(order: u64, counts: &[BigInt]) -> Self {
        let poly: Vec<BigRational> = counts.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        Self::reduce(order, poly)
    }

    fn reduce(order: u64, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let d = phi.len() - 1;
        for top in (d..poly.len()).rev() {
            let c = std::mem::take(&mut poly[top]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(d) {
                if !pj.is_zero() {
                    poly[top - d + j] -= &c * BigRational::from_integer(pj.clone());
                }
            }
        }
        poly.resize(d, BigRational::zero());
        CyclotomicNumber { order, coeffs: poly }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Same element viewed in `ℚ(ζ_M)` for a multiple `M` of the order.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "lift target must be a multiple of the order");
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::reduce(m, poly)
    }

    /// Same element viewed in `ℚ(ζ_M)`, if it lies in that subfield.
    pub fn restrict(&self, m: u64) -> Option<Self> {
        let l = self.order.lcm(&m);
        let target = self.lift(l);
        let basis: Vec<CyclotomicNumber> =
            (0..euler_phi(m)).map(|j| Self::zeta_pow(m, j as i64).lift(l)).collect();
        // solve Σ c_j basis_j = target over ℚ
        let rows = target.coeffs.len();
        let mut aug: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| {
                let mut r: Vec<BigRational> = basis.iter().map(|b| b.coeffs[i].clone()).collect();
                r.push(target.coeffs[i].clone());
                r
            })
            .collect();
        let k = basis.len();
        let pivots = linalg::rref(&mut aug);
        if pivots.contains(&k) {
            return None;
        }
        let mut c = vec![BigRational::zero(); k];
        for (r, &p) in pivots.iter().enumerate() {
            c[p] = aug[r][k].clone();
        }
        Some(CyclotomicNumber { order: m, coeffs: c })
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicNumber { order: a.order, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|x| x * r).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                poly[i + j] += x * y;
            }
        }
        Self::reduce(a.order, poly)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n.max(1)] += c;
        }
        Self::reduce(self.order, poly)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = self.align(other);
        let d = a.coeffs.len();
        // columns: b·ζ^j
        let cols: Vec<CyclotomicNumber> =
            (0..d).map(|j| b.mul(&Self::zeta_pow(a.order, j as i64))).collect();
        let m: Vec<Vec<BigRational>> =
            (0..d).map(|i| cols.iter().map(|c| c.coeffs[i].clone()).collect()).collect();
        let x = linalg::solve_q(&m, &a.coeffs)?;
        Ok(CyclotomicNumber { order: a.order, coeffs: x })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "coeffs": self.coeffs.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format_rational(c);
            terms.push(match i {
                0 => cs,
                1 => format!("{cs}*z{}", self.order),
                _ => format!("{cs}*z{}^{i}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Point `s` of finite order in a torus, given by `x ∈ (1/N)ℤ^n` modulo `ℤ^n`;
/// a cocharacter `λ` of the dual side evaluates to `ζ_N^{N⟨λ, x⟩}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPointFiniteOrder {
    order: u64,
    numerators: Vec<i64>,
}

impl TorusPointFiniteOrder {
    pub fn new(order: u64, numerators: Vec<i64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("order must be positive".into()));
        }
        let n = order as i64;
        Ok(TorusPointFiniteOrder { order, numerators: numerators.into_iter().map(|k| k.rem_euclid(n)).collect() })
    }

    pub fn identity(order: u64, rank: usize) -> Self {
        TorusPointFiniteOrder { order, numerators: vec![0; rank] }
    }

    /// Point with coordinates `x`, expressed over the common order `order`
    /// (or the least common denominator when `order` is `None`).
    pub fn from_rationals(x: &[BigRational], order: Option<u64>) -> Result<Self> {
        let lcd = x.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let lcd = linalg::big_to_i64(&lcd, "torus point order")? as u64;
        let n = order.unwrap_or(lcd);
        if n == 0 || n % lcd != 0 {
            return Err(Error::NonIntegral(format!("coordinates are not in (1/{n})ℤ")));
        }
        let nums = x
            .iter()
            .map(|r| linalg::big_to_i64(&(r * rat(n as i64)).to_integer(), "torus point"))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, nums)
    }

    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }
    pub fn coordinates(&self) -> Vec<BigRational> {
        self.numerators.iter().map(|&k| BigRational::new(k.into(), (self.order as i64).into())).collect()
    }

    /// `N⟨λ, x⟩ mod N`.
    pub fn exponent(&self, lambda: &[i64]) -> Result<u64> {
        if lambda.len() != self.numerators.len() {
            return Err(Error::DimensionMismatch { expected: self.numerators.len(), got: lambda.len() });
        }
        let n = self.order as i128;
        let e: i128 = lambda.iter().zip(&self.numerators).map(|(&a, &b)| a as i128 * b as i128).sum();
        Ok(e.rem_euclid(n) as u64)
    }

    pub fn eval(&self, lambda: &[i64]) -> Result<CyclotomicNumber> {
        Ok(CyclotomicNumber::zeta_pow(self.order, self.exponent(lambda)? as i64))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.numerators.len() != other.numerators.len() {
            return Err(Error::DimensionMismatch { expected: self.numerators.len(), got: other.numerators.len() });
        }
        let l = self.order.lcm(&other.order);
        let (a, b) = ((l / self.order) as i64, (l / other.order) as i64);
        Self::new(l, self.numerators.iter().zip(&other.numerators).map(|(x, y)| a * x + b * y).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(self.order, self.numerators.iter().map(|x| x * k).collect()).expect("order is positive")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coordinates().iter().map(|r| Value::String(format_rational(r))).collect())
    }
}

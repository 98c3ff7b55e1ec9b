//! Multiplicity arithmetic on the spectral side for finite abelian
//! centralizers: restriction of weights, `dim Hom_S(δ, r_μ)`, character
//! averages and the signed multiplicity vector of a packet.
//!
//! The centralizer is a finite subgroup `S̄` of the dual torus given by
//! generators of common order `N`. Characters of `S̄` are exponent tuples
//! `(e_1, …, e_k)` with `δ(x_i) = ζ_N^{e_i}`. Non-abelian centralizers are not
//! supported.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cyclotomic::{format_rational, parse_rational, CyclotomicNumber, TorusPointFiniteOrder};
use crate::error::{Error, Result};
use crate::kottwitz::{self, pi1_coinvariants};
use crate::root_datum::{Cochar, DiagramAutomorphism, RootDatum};
use crate::weights::{self, bigint_json, WeightFunction};

const GROUP_GUARD: usize = 100_000;

pub type Character = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCentralizer {
    order: u64,
    generators: Vec<TorusPointFiniteOrder>,
    /// Each element with its coordinates in terms of the generators.
    elements: Vec<(TorusPointFiniteOrder, Vec<u64>)>,
}

impl AbelianCentralizer {
    /// Generators are given by their numerators over the common order `N`.
    pub fn new(order: u64, generators: Vec<Vec<i64>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("order must be positive".into()));
        }
        let rank = generators.first().map_or(0, Vec::len);
        if generators.iter().any(|g| g.len() != rank) {
            return Err(Error::Invalid("generators have different lengths".into()));
        }
        let generators: Vec<TorusPointFiniteOrder> =
            generators.into_iter().map(|g| TorusPointFiniteOrder::new(order, g)).collect::<Result<_>>()?;
        let id = TorusPointFiniteOrder::identity(order, rank);
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::from([(id.numerators().to_vec(), 0)]);
        let mut elements = vec![(id.clone(), vec![0; generators.len()])];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let next = elements[i].0.mul(g)?;
                if seen.contains_key(next.numerators()) {
                    continue;
                }
                if elements.len() >= GROUP_GUARD {
                    return Err(Error::CostGuard { what: "centralizer order".into(), limit: GROUP_GUARD });
                }
                let mut coords = elements[i].1.clone();
                coords[k] = (coords[k] + 1) % order;
                seen.insert(next.numerators().to_vec(), elements.len());
                queue.push_back(elements.len());
                elements.push((next, coords));
            }
        }
        Ok(AbelianCentralizer { order, generators, elements })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let order = v["order"].as_u64().ok_or_else(|| Error::Invalid("centralizer needs an integer `order`".into()))?;
        let gens = v["generators"]
            .as_array()
            .ok_or_else(|| Error::Invalid("centralizer needs `generators`".into()))?;
        let mut out = Vec::new();
        for g in gens {
            let coords = g.as_array().ok_or_else(|| Error::Invalid("generator must be an array".into()))?;
            let xs: Vec<BigRational> = coords
                .iter()
                .map(|c| match c {
                    Value::String(s) => parse_rational(s),
                    Value::Number(n) => n
                        .as_i64()
                        .map(|k| BigRational::from_integer(k.into()))
                        .ok_or_else(|| Error::Invalid(format!("bad coordinate {n}"))),
                    other => Err(Error::Invalid(format!("bad coordinate {other}"))),
                })
                .collect::<Result<_>>()?;
            out.push(TorusPointFiniteOrder::from_rationals(&xs, Some(order))?.numerators().to_vec());
        }
        Self::new(order, out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "generators": self.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn generators(&self) -> &[TorusPointFiniteOrder] {
        &self.generators
    }
    pub fn group_order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> impl Iterator<Item = &TorusPointFiniteOrder> {
        self.elements.iter().map(|(s, _)| s)
    }

    pub fn check_rank(&self, d: &RootDatum) -> Result<()> {
        match self.generators.first() {
            Some(g) if g.numerators().len() != d.rank() => {
                Err(Error::DimensionMismatch { expected: d.rank(), got: g.numerators().len() })
            }
            _ => Ok(()),
        }
    }

    /// Fails unless `δ` extends to a character of `S̄`.
    pub fn check_character(&self, delta: &[u64]) -> Result<()> {
        self.character_values(delta).map(|_| ())
    }

    /// Exponent of `δ(s)` for every element, in element order.
    fn character_values(&self, delta: &[u64]) -> Result<Vec<u64>> {
        if delta.len() != self.generators.len() {
            return Err(Error::InconsistentCharacter(format!(
                "expected {} exponents, got {}",
                self.generators.len(),
                delta.len()
            )));
        }
        let n = self.order;
        let values: Vec<u64> = self
            .elements
            .iter()
            .map(|(_, c)| c.iter().zip(delta).map(|(a, b)| a * b % n).sum::<u64>() % n)
            .collect();
        let index: HashMap<&[i64], usize> =
            self.elements.iter().enumerate().map(|(i, (s, _))| (s.numerators(), i)).collect();
        for (i, (s, _)) in self.elements.iter().enumerate() {
            for (k, g) in self.generators.iter().enumerate() {
                let j = index[s.mul(g)?.numerators()];
                if values[j] != (values[i] + delta[k]) % n {
                    return Err(Error::InconsistentCharacter(format!("{delta:?} is not a character of S")));
                }
            }
        }
        Ok(values)
    }

    /// All characters of `S̄`, lexicographically.
    pub fn characters(&self) -> Result<Vec<Character>> {
        let k = self.generators.len();
        let total = (self.order as usize).checked_pow(k as u32).unwrap_or(usize::MAX);
        if total > GROUP_GUARD {
            return Err(Error::CostGuard { what: "character enumeration".into(), limit: GROUP_GUARD });
        }
        let mut out = Vec::new();
        let mut e = vec![0u64; k];
        loop {
            if self.check_character(&e).is_ok() {
                out.push(e.clone());
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                e[i] += 1;
                if e[i] < self.order {
                    break;
                }
                e[i] = 0;
            }
        }
    }
}

/// `(λ(x_1), …, λ(x_k))` as exponents of `ζ_N`.
pub fn restrict_weight(lambda: &[i64], s: &AbelianCentralizer) -> Result<Character> {
    s.generators.iter().map(|g| g.exponent(lambda)).collect()
}

fn weights_by_restriction(f: &WeightFunction, s: &AbelianCentralizer) -> Result<BTreeMap<Character, BigInt>> {
    let mut out: BTreeMap<Character, BigInt> = BTreeMap::new();
    for (lam, m) in f.iter() {
        *out.entry(restrict_weight(lam, s)?).or_insert_with(BigInt::zero) += m;
    }
    Ok(out)
}

/// `Σ_{λ|_S = δ} dim r_μ[λ]`.
pub fn hom_multiplicity(d: &RootDatum, mu: &[i64], s: &AbelianCentralizer, delta: &[u64]) -> Result<BigInt> {
    s.check_rank(d)?;
    s.check_character(delta)?;
    let f = weights::weight_multiplicities(d, mu)?;
    Ok(weights_by_restriction(&f, s)?.get(delta).cloned().unwrap_or_else(BigInt::zero))
}

/// `|S̄|^{-1} Σ_s tr r_μ(s) · conj δ(s)`, computed in `ℚ(ζ_N)`.
pub fn averaging_multiplicity(
    d: &RootDatum,
    mu: &[i64],
    s: &AbelianCentralizer,
    delta: &[u64],
) -> Result<BigRational> {
    s.check_rank(d)?;
    let values = s.character_values(delta)?;
    let f = weights::weight_multiplicities(d, mu)?;
    let n = s.order;
    let mut acc = CyclotomicNumber::zero(n);
    for ((point, _), &e) in s.elements.iter().zip(&values) {
        let tr = weights::trace_of(&f, point)?;
        acc = acc.add(&tr.mul(&CyclotomicNumber::zeta_pow(n, -(e as i64))));
    }
    let avg = acc.scale(&BigRational::new(1.into(), BigInt::from(s.group_order())));
    avg.to_rational()
        .ok_or_else(|| Error::NonIntegral(format!("average is not rational: {avg}")))
}

/// `(Σ_{λ: κ(λ) = κ(b)} λ(s) dim r_μ[λ], tr r_μ(s))`. The left side runs
/// over every cocharacter in the bounding box of the weights that satisfies
/// the κ-condition.
pub fn character_sum_identity(
    d: &RootDatum,
    theta: &DiagramAutomorphism,
    mu: &[i64],
    s: &TorusPointFiniteOrder,
) -> Result<(CyclotomicNumber, CyclotomicNumber)> {
    d.check_len(s.numerators())?;
    let f = weights::weight_multiplicities(d, mu)?;
    let basic = kottwitz::basic_class_of(d, theta, mu)?;
    let (_, proj) = pi1_coinvariants(d, theta)?;
    let n = d.rank();
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for (lam, _) in f.iter() {
        for i in 0..n {
            lo[i] = lo[i].min(lam[i]);
            hi[i] = hi[i].max(lam[i]);
        }
    }
    let size = lo.iter().zip(&hi).try_fold(1usize, |acc, (a, b)| acc.checked_mul((b - a + 1) as usize));
    if size.map_or(true, |s| s > 1_000_000) {
        return Err(Error::CostGuard { what: "weight box size".into(), limit: 1_000_000 });
    }
    let mut counts = vec![BigInt::zero(); s.order() as usize];
    let mut lam = lo.clone();
    'outer: loop {
        if proj.apply(&lam)? == basic.element {
            let m = f.get(&lam);
            if !m.is_zero() {
                counts[s.exponent(&lam)? as usize] += m;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            if lam[i] < hi[i] {
                lam[i] += 1;
                break;
            }
            lam[i] = lo[i];
            i += 1;
        }
    }
    let lhs = CyclotomicNumber::from_exponent_counts(s.order(), &counts);
    let rhs = weights::character_eval(d, mu, s)?;
    Ok((lhs, rhs))
}

/// Members of a packet with their characters `δ_π` of `S̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketDatum {
    pub members: BTreeMap<String, Character>,
}

impl PacketDatum {
    pub fn new(s: &AbelianCentralizer, members: BTreeMap<String, Character>) -> Result<Self> {
        for delta in members.values() {
            s.check_character(delta)?;
        }
        Ok(PacketDatum { members })
    }

    pub fn from_json(s: &AbelianCentralizer, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Invalid("packet must be a JSON object".into()))?;
        let mut members = BTreeMap::new();
        for (k, e) in obj {
            let delta: Vec<i64> =
                serde_json::from_value(e.clone()).map_err(|e| Error::Invalid(format!("bad character: {e}")))?;
            let n = s.order as i64;
            members.insert(k.clone(), delta.iter().map(|x| x.rem_euclid(n) as u64).collect());
        }
        Self::new(s, members)
    }
}

/// `π ↦ (−1)^d dim Hom_S(δ̄_π δ_ρ, r_μ)` with `d = ⟨2ρ, μ⟩`.
pub fn kottwitz_rhs(
    d: &RootDatum,
    mu: &[i64],
    s: &AbelianCentralizer,
    packet: &PacketDatum,
    delta_rho: &[u64],
) -> Result<BTreeMap<String, BigInt>> {
    s.check_rank(d)?;
    s.check_character(delta_rho)?;
    let dim = kottwitz::shtuka_dimension(d, mu)?;
    let by_char = weights_by_restriction(&weights::weight_multiplicities(d, mu)?, s)?;
    let n = s.order;
    let mut out = BTreeMap::new();
    for (label, delta) in &packet.members {
        let twisted: Character = delta.iter().zip(delta_rho).map(|(a, b)| (b + n - a) % n).collect();
        let h = by_char.get(&twisted).cloned().unwrap_or_else(BigInt::zero);
        out.insert(label.clone(), if dim % 2 == 0 { h } else { -h });
    }
    Ok(out)
}

pub fn rhs_to_json(rhs: &BTreeMap<String, BigInt>) -> Value {
    Value::Object(rhs.iter().map(|(k, v)| (k.clone(), bigint_json(v))).collect())
}

pub fn rational_json(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

/// Restrictions of the weights of `r_μ` with their multiplicities.
pub fn restriction_table(d: &RootDatum, mu: &[i64], s: &AbelianCentralizer) -> Result<BTreeMap<Character, BigInt>> {
    weights_by_restriction(&weights::weight_multiplicities(d, mu)?, s)
}

/// Cocharacters of `r_μ` restricting to `δ`.
pub fn weights_restricting_to(d: &RootDatum, mu: &[i64], s: &AbelianCentralizer, delta: &[u64]) -> Result<Vec<Cochar>> {
    let f = weights::weight_multiplicities(d, mu)?;
    let mut out = Vec::new();
    for (lam, _) in f.iter() {
        if restrict_weight(lam, s)? == delta {
            out.push(lam.clone());
        }
    }
    Ok(out)
}

//! Weight multiplicities of the dual-group representations `r_μ`.
//!
//! Cocharacters of the datum are the weights of the dual group and coroots
//! are its roots; `ρ̂` is half the sum of the positive coroots.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclotomic::{CyclotomicNumber, TorusPointFiniteOrder};
use crate::error::{Error, Result};
use crate::linalg::{self, dot};
use crate::root_datum::{Char, Cochar, RootDatum, ORBIT_GUARD};

/// Finitely supported function `X_*(T) → ℤ` with no zero values stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightFunction {
    map: BTreeMap<Cochar, BigInt>,
}

impl WeightFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(lambda: Cochar) -> Self {
        let mut f = Self::new();
        f.add_at(lambda, BigInt::one());
        f
    }

    pub fn from_pairs<I: IntoIterator<Item = (Cochar, BigInt)>>(pairs: I) -> Self {
        let mut f = Self::new();
        for (k, v) in pairs {
            f.add_at(k, v);
        }
        f
    }

    pub fn add_at(&mut self, lambda: Cochar, v: BigInt) {
        if v.is_zero() {
            return;
        }
        match self.map.entry(lambda) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(v);
            }
        }
    }

    pub fn get(&self, lambda: &[i64]) -> BigInt {
        self.map.get(lambda).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cochar, &BigInt)> {
        self.map.iter()
    }

    pub fn support(&self) -> Vec<Cochar> {
        self.map.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn mass(&self) -> BigInt {
        self.map.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.map {
            out.add_at(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_pairs(self.map.iter().map(|(l, v)| (l.clone(), v * k)))
    }

    /// `(f ∗ g)(λ) = Σ_η f(η) g(λ − η)`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Cochar, BigInt> = BTreeMap::new();
        for (a, x) in &self.map {
            for (b, y) in &other.map {
                *acc.entry(linalg::add_vec(a, b)).or_insert_with(BigInt::zero) += x * y;
            }
        }
        Self::from_pairs(acc)
    }

    /// `[{"lambda": [...], "mult": k}, ...]` sorted by `lambda`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.map
                .iter()
                .map(|(l, m)| json!({"lambda": l, "mult": bigint_json(m)}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Invalid("weight function must be an array".into()))?;
        let mut f = Self::new();
        for item in arr {
            let lambda: Cochar = serde_json::from_value(item["lambda"].clone())
                .map_err(|e| Error::Invalid(format!("bad lambda: {e}")))?;
            let mult = json_bigint(&item["mult"])?;
            f.add_at(lambda, mult);
        }
        Ok(f)
    }
}

pub fn bigint_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

pub fn json_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Invalid(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Invalid(format!("not an integer: {s}"))),
        other => Err(Error::Invalid(format!("not an integer: {other}"))),
    }
}

fn require_dominant(d: &RootDatum, mu: &[i64]) -> Result<()> {
    d.check_len(mu)?;
    if !d.is_dominant(mu) {
        return Err(Error::NotDominant(mu.to_vec()));
    }
    Ok(())
}

/// Weyl dimension formula `∏_{α>0} ⟨α, μ+ρ̂⟩ / ⟨α, ρ̂⟩`.
pub fn weyl_dim(d: &RootDatum, mu: &[i64]) -> Result<BigInt> {
    require_dominant(d, mu)?;
    let shifted = linalg::add_vec(&linalg::scale_vec(mu, 2), d.two_rho_check());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for a in d.positive_roots() {
        num *= BigInt::from(dot(a, &shifted));
        den *= BigInt::from(dot(a, d.two_rho_check()));
    }
    let q = BigRational::new(num, den);
    if !q.is_integer() {
        return Err(Error::NonIntegral("Weyl dimension".into()));
    }
    Ok(q.to_integer())
}

/// Dominant `λ ≤ μ`, ordered by the height of `μ − λ` and then
/// lexicographically.
pub fn dominant_weights_below(d: &RootDatum, mu: &[i64]) -> Result<Vec<Cochar>> {
    require_dominant(d, mu)?;
    let coroots: Vec<Cochar> = d.positive_coroots().cloned().collect();
    let w_order = d.weyl_order()?;
    let mut stabilizers: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut orbit_size = |v: &[i64]| -> Result<usize> {
        let fixed: Vec<usize> = d.labels_of(v).iter().enumerate().filter(|(_, &l)| l == 0).map(|(i, _)| i).collect();
        if let Some(&k) = stabilizers.get(&fixed) {
            return Ok(k);
        }
        let k = w_order / d.generate_subgroup(&fixed, w_order)?.len();
        stabilizers.insert(fixed, k);
        Ok(k)
    };
    let mut total = orbit_size(mu)?;
    let mut seen: HashSet<Cochar> = HashSet::from([mu.to_vec()]);
    let mut queue = VecDeque::from([mu.to_vec()]);
    while let Some(v) = queue.pop_front() {
        for b in &coroots {
            let u = linalg::sub_vec(&v, b);
            if d.is_dominant(&u) && seen.insert(u.clone()) {
                total += orbit_size(&u)?;
                if total > ORBIT_GUARD {
                    return Err(Error::CostGuard { what: "weight count".into(), limit: ORBIT_GUARD });
                }
                queue.push_back(u);
            }
        }
    }
    let mut out: Vec<(i64, Cochar)> = seen
        .into_iter()
        .map(|l| (d.height_between(&l, mu).expect("reached by subtracting coroots"), l))
        .collect();
    out.sort();
    Ok(out.into_iter().map(|(_, l)| l).collect())
}

/// Multiplicities of the dominant weights of `r_μ` by Freudenthal's formula.
pub fn dominant_multiplicities(d: &RootDatum, mu: &[i64]) -> Result<BTreeMap<Cochar, BigInt>> {
    let doms = dominant_weights_below(d, mu)?;
    let roots: Vec<Char> = d.positive_roots().cloned().collect();
    let coroots: Vec<Cochar> = d.positive_coroots().cloned().collect();
    let pair = |v: &[i64]| -> Vec<i128> { roots.iter().map(|a| dot(a, v) as i128).collect() };
    let form = |x: &[i128], y: &[i128]| -> i128 { 2 * x.iter().zip(y).map(|(a, b)| a * b).sum::<i128>() };
    let coroot_pairs: Vec<Vec<i128>> = coroots.iter().map(|b| pair(b)).collect();
    let pm = pair(mu);
    let p2rho = pair(d.two_rho_check());
    let bmm = form(&pm, &pm);

    let mut mult: HashMap<Cochar, BigInt> = HashMap::new();
    mult.insert(mu.to_vec(), BigInt::one());
    for lam in doms.iter().skip(1) {
        let pl = pair(lam);
        let diff: Vec<i128> = pm.iter().zip(&pl).map(|(a, b)| a - b).collect();
        let denom = bmm - form(&pl, &pl) + form(&diff, &p2rho);
        let mut num = BigInt::zero();
        for (b, pb) in coroots.iter().zip(&coroot_pairs) {
            let mut v = lam.clone();
            loop {
                v = linalg::add_vec(&v, b);
                let dom = d.dominant(&v);
                let Some(m) = mult.get(&dom) else { break };
                let pv = pair(&v);
                num += m * BigInt::from(form(&pv, pb));
            }
        }
        num *= 2;
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        let den = BigInt::from(denom);
        if !(&num % &den).is_zero() {
            return Err(Error::NonIntegral(format!("Freudenthal multiplicity at {lam:?}")));
        }
        mult.insert(lam.clone(), num / den);
    }
    Ok(mult.into_iter().collect())
}

/// `λ ↦ dim r_μ[λ]` on all of `X_*`.
pub fn weight_multiplicities(d: &RootDatum, mu: &[i64]) -> Result<WeightFunction> {
    let dom = dominant_multiplicities(d, mu)?;
    let mut f = WeightFunction::new();
    let mut total = 0usize;
    for (lam, m) in dom {
        if m.is_zero() {
            continue;
        }
        let orbit = d.orbit(&lam)?;
        total += orbit.len();
        if total > ORBIT_GUARD {
            return Err(Error::CostGuard { what: "weight support size".into(), limit: ORBIT_GUARD });
        }
        for v in orbit {
            f.add_at(v, m.clone());
        }
    }
    Ok(f)
}

/// `{λ : λ_dom ≤ μ}`, sorted.
pub fn weight_support(d: &RootDatum, mu: &[i64]) -> Result<Vec<Cochar>> {
    let mut out = Vec::new();
    for lam in dominant_weights_below(d, mu)? {
        out.extend(d.orbit(&lam)?);
        if out.len() > ORBIT_GUARD {
            return Err(Error::CostGuard { what: "weight support size".into(), limit: ORBIT_GUARD });
        }
    }
    out.sort();
    Ok(out)
}

/// Kostant partition function for the positive coroots, on simple-coroot
/// coordinates.
pub struct PartitionFunction {
    parts: Vec<Vec<i64>>,
    memo: HashMap<(usize, Vec<i64>), BigInt>,
}

impl PartitionFunction {
    pub fn new(d: &RootDatum) -> Self {
        PartitionFunction { parts: d.positive_coroot_coeffs().cloned().collect(), memo: HashMap::new() }
    }

    pub fn count(&mut self, c: &[i64]) -> BigInt {
        self.count_from(self.parts.len(), c.to_vec())
    }

    fn count_from(&mut self, k: usize, c: Vec<i64>) -> BigInt {
        if c.iter().any(|&x| x < 0) {
            return BigInt::zero();
        }
        if k == 0 {
            return if c.iter().all(|&x| x == 0) { BigInt::one() } else { BigInt::zero() };
        }
        if let Some(v) = self.memo.get(&(k, c.clone())) {
            return v.clone();
        }
        let without = self.count_from(k - 1, c.clone());
        let reduced = linalg::sub_vec(&c, &self.parts[k - 1]);
        let with = self.count_from(k, reduced);
        let v = without + with;
        self.memo.insert((k, c), v.clone());
        v
    }
}

/// Independent multiplicity via Kostant's formula
/// `Σ_w det(w) P(w(μ+ρ̂) − (λ+ρ̂))`. Limited to semisimple rank ≤ 3.
pub fn kostant_multiplicity_oracle(d: &RootDatum, mu: &[i64], lambda: &[i64]) -> Result<BigInt> {
    let mut p = PartitionFunction::new(d);
    kostant_with(d, mu, lambda, &mut p)
}

pub fn kostant_with(d: &RootDatum, mu: &[i64], lambda: &[i64], p: &mut PartitionFunction) -> Result<BigInt> {
    require_dominant(d, mu)?;
    d.check_len(lambda)?;
    if d.semisimple_rank() > 3 {
        return Err(Error::CostGuard { what: "Kostant oracle semisimple rank".into(), limit: 3 });
    }
    let top = linalg::add_vec(&linalg::scale_vec(mu, 2), d.two_rho_check());
    let base = linalg::add_vec(&linalg::scale_vec(lambda, 2), d.two_rho_check());
    let mut total = BigInt::zero();
    for w in d.weyl_group()?.iter() {
        let v = linalg::sub_vec(&w.apply(&top), &base);
        if v.iter().any(|x| x % 2 != 0) {
            continue;
        }
        let half: Vec<i64> = v.iter().map(|x| x / 2).collect();
        let Some(c) = d.coroot_coords(&half) else { continue };
        let n = p.count(&c);
        if w.sign() > 0 {
            total += n;
        } else {
            total -= n;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Minimality {
    Minuscule,
    /// Carries the unique positive root `γ` with `⟨γ, μ⟩ ≥ 2`; `μ = γ^∨`.
    QuasiMinuscule(Char),
    NotMinimal,
}

impl Minimality {
    pub fn to_json(&self) -> Value {
        match self {
            Minimality::Minuscule => json!({"class": "minuscule"}),
            Minimality::QuasiMinuscule(g) => json!({"class": "quasi-minuscule", "root": g}),
            Minimality::NotMinimal => json!({"class": "not-minimal"}),
        }
    }
}

pub fn classify_minimal(d: &RootDatum, mu: &[i64]) -> Result<Minimality> {
    require_dominant(d, mu)?;
    if mu.iter().all(|&x| x == 0) {
        return Err(Error::ZeroCocharacter);
    }
    let big: Vec<(&Char, &Cochar)> = d
        .positive_roots()
        .zip(d.positive_coroots())
        .filter(|(a, _)| dot(a, mu) >= 2)
        .collect();
    Ok(match big.as_slice() {
        [] => Minimality::Minuscule,
        [(gamma, gamma_check)] if gamma_check.as_slice() == mu => Minimality::QuasiMinuscule((*gamma).clone()),
        _ => Minimality::NotMinimal,
    })
}

/// Brauer–Klimyk decomposition of `r_μ ⊗ r_ν` into irreducibles, as a
/// function on dominant cocharacters.
pub fn tensor_decompose(d: &RootDatum, mu: &[i64], nu: &[i64]) -> Result<WeightFunction> {
    require_dominant(d, mu)?;
    require_dominant(d, nu)?;
    let weights = weight_multiplicities(d, nu)?;
    let shift = linalg::add_vec(&linalg::scale_vec(mu, 2), d.two_rho_check());
    let mut out = WeightFunction::new();
    for (lam, m) in weights.iter() {
        let v = linalg::add_vec(&shift, &linalg::scale_vec(lam, 2));
        let (dom, steps) = d.ascend(&v);
        if d.simple_roots().iter().any(|a| dot(a, &dom) == 0) {
            continue;
        }
        let top: Cochar = linalg::sub_vec(&dom, d.two_rho_check()).iter().map(|x| x / 2).collect();
        let signed = if steps.len() % 2 == 0 { m.clone() } else { -m.clone() };
        out.add_at(top, signed);
    }
    if out.iter().any(|(_, m)| m.is_negative()) {
        return Err(Error::Invalid("tensor decomposition left negative multiplicities".into()));
    }
    Ok(out)
}

/// Weight function of `⊕ r_λ^{⊕ m(λ)}` for a decomposition `m`.
pub fn weights_of_sum(d: &RootDatum, decomposition: &WeightFunction) -> Result<WeightFunction> {
    let mut out = WeightFunction::new();
    for (lam, m) in decomposition.iter() {
        out = out.add(&weight_multiplicities(d, lam)?.scale(m));
    }
    Ok(out)
}

/// Trace of `s` on a representation with the given weight function.
pub fn trace_of(f: &WeightFunction, s: &TorusPointFiniteOrder) -> Result<CyclotomicNumber> {
    let n = s.order();
    let mut counts = vec![BigInt::zero(); n as usize];
    for (lam, m) in f.iter() {
        counts[s.exponent(lam)? as usize] += m;
    }
    Ok(CyclotomicNumber::from_exponent_counts(n, &counts))
}

/// `tr r_μ(s) = Σ_λ dim r_μ[λ] λ(s)`.
pub fn character_eval(d: &RootDatum, mu: &[i64], s: &TorusPointFiniteOrder) -> Result<CyclotomicNumber> {
    d.check_len(s.numerators())?;
    trace_of(&weight_multiplicities(d, mu)?, s)
}

/// Weyl character formula as an alternant ratio, computed in `ℚ(ζ_{2N})` and
/// returned in `ℚ(ζ_N)`.
pub fn weyl_character_oracle(d: &RootDatum, mu: &[i64], s: &TorusPointFiniteOrder) -> Result<CyclotomicNumber> {
    require_dominant(d, mu)?;
    d.check_len(s.numerators())?;
    let n = s.order();
    let big = 2 * n;
    let doubled = TorusPointFiniteOrder::new(big, s.numerators().to_vec())?;
    let top = linalg::add_vec(&linalg::scale_vec(mu, 2), d.two_rho_check());
    let mut num = vec![BigInt::zero(); big as usize];
    let mut den = vec![BigInt::zero(); big as usize];
    for w in d.weyl_group()?.iter() {
        let sign = BigInt::from(w.sign());
        num[doubled.exponent(&w.apply(&top))? as usize] += &sign;
        den[doubled.exponent(&w.apply(d.two_rho_check()))? as usize] += &sign;
    }
    let num = CyclotomicNumber::from_exponent_counts(big, &num);
    let den = CyclotomicNumber::from_exponent_counts(big, &den);
    if den.is_zero() {
        return Err(Error::SingularPoint);
    }
    let q = num.div(&den)?;
    Ok(q.restrict(n).unwrap_or(q))
}

/// Whether the Weyl denominator is nonzero at `s`.
pub fn is_regular_point(d: &RootDatum, s: &TorusPointFiniteOrder) -> Result<bool> {
    for b in d.positive_coroots() {
        if s.exponent(b)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::root_datum::preset;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn gl2_standard() {
        let d = preset("GL", 2).unwrap();
        assert_eq!(weyl_dim(&d, &[1, 0]).unwrap(), big(2));
        let f = weight_multiplicities(&d, &[1, 0]).unwrap();
        assert_eq!(f.to_json(), json!([{"lambda": [0, 1], "mult": 1}, {"lambda": [1, 0], "mult": 1}]));
        assert_eq!(weyl_dim(&d, &[0, 0]).unwrap(), big(1));
        assert!(matches!(weyl_dim(&d, &[0, 1]), Err(Error::NotDominant(_))));
    }

    #[test]
    fn a2_adjoint_zero_weight() {
        let d = preset("A-sc", 2).unwrap();
        let rho = d.cochar_with_labels(&[1, 1]).unwrap().unwrap();
        assert_eq!(weyl_dim(&d, &rho).unwrap(), big(8));
        let f = weight_multiplicities(&d, &rho).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f.get(&[0, 0]), big(2));
        assert_eq!(f.mass(), big(8));
        assert_eq!(kostant_multiplicity_oracle(&d, &rho, &[0, 0]).unwrap(), big(2));
        assert_eq!(kostant_multiplicity_oracle(&d, &rho, &rho).unwrap(), big(1));
        assert_eq!(kostant_multiplicity_oracle(&d, &[0, 0], &[0, 0]).unwrap(), big(1));
    }

    #[test]
    fn kostant_agrees_small() {
        for (name, n) in [("A-sc", 1), ("A-ad", 2), ("B-sc", 2), ("G2", 2), ("GL", 3)] {
            let d = preset(name, n).unwrap();
            let r = d.semisimple_rank();
            let mut labels = vec![0i64; r];
            loop {
                if let Some(mu) = d.cochar_with_labels(&labels).unwrap() {
                    let f = weight_multiplicities(&d, &mu).unwrap();
                    let mut p = PartitionFunction::new(&d);
                    for lam in dominant_weights_below(&d, &mu).unwrap() {
                        assert_eq!(kostant_with(&d, &mu, &lam, &mut p).unwrap(), f.get(&lam), "{name} {mu:?} {lam:?}");
                    }
                }
                let mut i = 0;
                while i < r && labels[i] == 2 {
                    labels[i] = 0;
                    i += 1;
                }
                if i == r {
                    break;
                }
                labels[i] += 1;
            }
        }
    }

    #[test]
    fn classification() {
        let gl3 = preset("GL", 3).unwrap();
        assert_eq!(classify_minimal(&gl3, &[1, 0, 0]).unwrap(), Minimality::Minuscule);
        let a1 = preset("A-sc", 1).unwrap();
        let q = classify_minimal(&a1, &[1]).unwrap();
        assert_eq!(q, Minimality::QuasiMinuscule(vec![2]));
        assert_eq!(weight_support(&a1, &[1]).unwrap(), vec![vec![-1], vec![0], vec![1]]);
        assert!(matches!(classify_minimal(&a1, &[0]), Err(Error::ZeroCocharacter)));
        // G2: a minimal dominant element that is quasi-minuscule
        let g2 = preset("G2", 2).unwrap();
        let found: Vec<_> = [[1, 0], [0, 1]]
            .iter()
            .map(|l| g2.cochar_with_labels(l).unwrap().unwrap())
            .map(|mu| classify_minimal(&g2, &mu).unwrap())
            .collect();
        assert!(found.iter().any(|c| matches!(c, Minimality::QuasiMinuscule(_))));
        assert!(!found.contains(&Minimality::Minuscule));
    }

    #[test]
    fn tensor_products() {
        let gl2 = preset("GL", 2).unwrap();
        let t = tensor_decompose(&gl2, &[1, 0], &[1, 0]).unwrap();
        assert_eq!(t, WeightFunction::from_pairs([(vec![2, 0], big(1)), (vec![1, 1], big(1))]));
        let a2 = preset("A-ad", 2).unwrap();
        let t = tensor_decompose(&a2, &[1, 0], &[0, 1]).unwrap();
        let rho = a2.cochar_with_labels(&[1, 1]).unwrap().unwrap();
        assert_eq!(t, WeightFunction::from_pairs([(rho, big(1)), (vec![0, 0], big(1))]));
        let t = tensor_decompose(&a2, &[1, 0], &[0, 0]).unwrap();
        assert_eq!(t, WeightFunction::delta(vec![1, 0]));
    }

    #[test]
    fn convolution_basics() {
        let gl2 = preset("GL", 2).unwrap();
        let f = weight_multiplicities(&gl2, &[1, 0]).unwrap();
        assert_eq!(WeightFunction::delta(vec![0, 0]).convolve(&f), f);
        let ff = f.convolve(&f);
        assert_eq!(ff.mass(), big(4));
        assert_eq!(ff.get(&[1, 1]), big(2));
    }

    #[test]
    fn characters() {
        let gl2 = preset("GL", 2).unwrap();
        let s = TorusPointFiniteOrder::new(2, vec![1, 0]).unwrap();
        assert!(character_eval(&gl2, &[1, 0], &s).unwrap().is_zero());
        let id = TorusPointFiniteOrder::identity(5, 2);
        assert_eq!(character_eval(&gl2, &[3, 1], &id).unwrap().to_rational(), Some(rat(3)));

        let a2 = preset("A-ad", 2).unwrap();
        let mut checked = 0;
        for k1 in 0..7 {
            for k2 in 0..7 {
                let s = TorusPointFiniteOrder::new(7, vec![k1, k2]).unwrap();
                if !is_regular_point(&a2, &s).unwrap() {
                    assert!(matches!(weyl_character_oracle(&a2, &[1, 1], &s), Err(Error::SingularPoint)));
                    continue;
                }
                assert_eq!(character_eval(&a2, &[1, 1], &s).unwrap(), weyl_character_oracle(&a2, &[1, 1], &s).unwrap());
                checked += 1;
            }
        }
        assert!(checked > 20);
    }
}

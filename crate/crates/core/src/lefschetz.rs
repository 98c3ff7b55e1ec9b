//! Fixed-point bookkeeping on flag varieties and bounded affine
//! Grassmannians.
//!
//! Local terms at the torus-fixed points of `Gr_{≤μ}` are taken to be the
//! weight multiplicities `dim r_μ[λ]`; nothing here computes a trace from
//! sheaf data. The module checks the numerical consequences: global sums,
//! Euler characteristics and compatibility with convolution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::root_datum::{Cochar, RootDatum};
use crate::weights::{self, bigint_json, WeightFunction};

/// Parabolic subgroup given by the simple roots of its Levi factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicType {
    levi: Vec<usize>,
}

impl ParabolicType {
    pub fn new(d: &RootDatum, mut levi: Vec<usize>) -> Result<Self> {
        levi.sort_unstable();
        levi.dedup();
        if let Some(&i) = levi.iter().find(|&&i| i >= d.semisimple_rank()) {
            return Err(Error::Invalid(format!("node {} out of range", i + 1)));
        }
        Ok(ParabolicType { levi })
    }

    pub fn borel() -> Self {
        ParabolicType { levi: Vec::new() }
    }

    pub fn whole(d: &RootDatum) -> Self {
        ParabolicType { levi: (0..d.semisimple_rank()).collect() }
    }

    /// Maximal parabolic whose Levi omits the single node `i`.
    pub fn maximal(d: &RootDatum, i: usize) -> Result<Self> {
        Self::new(d, (0..d.semisimple_rank()).filter(|&j| j != i).collect())
    }

    /// The parabolic attached to the roots with `⟨α, μ⟩ ≤ 0`; its Levi nodes
    /// are the simple roots orthogonal to `μ`.
    pub fn of_cochar(d: &RootDatum, mu: &[i64]) -> Result<Self> {
        d.check_len(mu)?;
        let labels = d.labels_of(mu);
        Self::new(d, (0..d.semisimple_rank()).filter(|&i| labels[i] == 0).collect())
    }

    pub fn levi_nodes(&self) -> &[usize] {
        &self.levi
    }

    pub fn levi_weyl_order(&self, d: &RootDatum) -> BigInt {
        let inside = |c: &&Vec<i64>| c.iter().enumerate().all(|(i, &x)| x == 0 || self.levi.binary_search(&i).is_ok());
        weyl_order_from_heights(d.positive_coroot_coeffs().filter(inside).map(|c| c.iter().sum::<i64>() as usize))
    }
}

/// `|W| = ∏ (m_i + 1)` where the exponents `m_i` are read off the heights of
/// the positive roots: `#{i : m_i ≥ k}` is the number of roots of height `k`.
pub fn weyl_order_from_heights(heights: impl IntoIterator<Item = usize>) -> BigInt {
    let mut counts: Vec<usize> = Vec::new();
    for h in heights {
        if counts.len() <= h {
            counts.resize(h + 1, 0);
        }
        counts[h] += 1;
    }
    let mut order = BigInt::from(1);
    for k in 1..counts.len() {
        let next = counts.get(k + 1).copied().unwrap_or(0);
        for _ in 0..counts[k].saturating_sub(next) {
            order *= BigInt::from(k + 1);
        }
    }
    order
}

/// `χ(G/P) = |W| / |W_M|`.
pub fn flag_euler_characteristic(d: &RootDatum, p: &ParabolicType) -> Result<BigInt> {
    let w = ParabolicType::whole(d).levi_weyl_order(d);
    Ok(w / p.levi_weyl_order(d))
}

/// Fixed points of a strongly regular torus element on `Gr_{≤μ}`.
pub fn gr_fixed_points(d: &RootDatum, mu: &[i64]) -> Result<Vec<Cochar>> {
    weights::weight_support(d, mu)
}

/// `dim r_μ[λ]`; zero (with a warning) when `λ` is not a fixed point.
pub fn local_term(d: &RootDatum, mu: &[i64], lambda: &[i64]) -> Result<BigInt> {
    d.check_len(lambda)?;
    let m = weights::weight_multiplicities(d, mu)?.get(lambda);
    if m.is_zero() {
        log::warn!("{lambda:?} is not a fixed point of Gr_{{<={mu:?}}}; local term is 0");
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointReport {
    pub mu: Vec<Cochar>,
    pub terms: Vec<(Cochar, BigInt)>,
    pub global_sum: BigInt,
    pub expected: BigInt,
    /// For convolutions: the pairs `(λ₁, λ₂)` with `λ₁ + λ₂ = λ`.
    pub fibers: Option<BTreeMap<Cochar, Vec<(Cochar, Cochar)>>>,
}

impl FixedPointReport {
    pub fn passes(&self) -> bool {
        self.global_sum == self.expected && self.terms.iter().map(|(_, t)| t).sum::<BigInt>() == self.global_sum
    }

    pub fn local_terms(&self) -> WeightFunction {
        WeightFunction::from_pairs(self.terms.iter().cloned())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, t)| {
                let mut v = json!({"lambda": l, "local_term": bigint_json(t)});
                if let Some(f) = &self.fibers {
                    v["fiber"] = json!(f.get(l).cloned().unwrap_or_default());
                }
                v
            })
            .collect();
        json!({
            "mu": self.mu,
            "terms": terms,
            "global_sum": bigint_json(&self.global_sum),
            "expected": bigint_json(&self.expected),
            "pass": self.passes(),
        })
    }
}

/// Sum of local terms over `Gr_{≤μ}` against `dim r_μ`.
pub fn lefschetz_global_check(d: &RootDatum, mu: &[i64]) -> Result<FixedPointReport> {
    let f = weights::weight_multiplicities(d, mu)?;
    let terms: Vec<(Cochar, BigInt)> = gr_fixed_points(d, mu)?.into_iter().map(|l| {
        let m = f.get(&l);
        (l, m)
    }).collect();
    let global_sum = terms.iter().map(|(_, t)| t).sum();
    Ok(FixedPointReport { mu: vec![mu.to_vec()], terms, global_sum, expected: weights::weyl_dim(d, mu)?, fibers: None })
}

/// Fixed-point data of the convolution `Gr_{≤μ₁} ×̃ Gr_{≤μ₂} → Gr`.
pub fn convolution_fixed_points(d: &RootDatum, mu1: &[i64], mu2: &[i64]) -> Result<FixedPointReport> {
    let f1 = weights::weight_multiplicities(d, mu1)?;
    let f2 = weights::weight_multiplicities(d, mu2)?;
    let conv = f1.convolve(&f2);
    let mut fibers: BTreeMap<Cochar, Vec<(Cochar, Cochar)>> = BTreeMap::new();
    for (a, _) in f1.iter() {
        for (b, _) in f2.iter() {
            let l: Cochar = a.iter().zip(b).map(|(x, y)| x + y).collect();
            fibers.entry(l).or_default().push((a.clone(), b.clone()));
        }
    }
    let terms: Vec<(Cochar, BigInt)> = conv.iter().map(|(l, m)| (l.clone(), m.clone())).collect();
    let global_sum = conv.mass();
    let expected = weights::weyl_dim(d, mu1)? * weights::weyl_dim(d, mu2)?;
    Ok(FixedPointReport { mu: vec![mu1.to_vec(), mu2.to_vec()], terms, global_sum, expected, fibers: Some(fibers) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::preset;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn euler_characteristics() {
        let a4 = preset("A-sc", 4).unwrap();
        assert_eq!(flag_euler_characteristic(&a4, &ParabolicType::maximal(&a4, 1).unwrap()).unwrap(), big(10));
        assert_eq!(flag_euler_characteristic(&a4, &ParabolicType::whole(&a4)).unwrap(), big(1));
        let a1 = preset("A-sc", 1).unwrap();
        assert_eq!(flag_euler_characteristic(&a1, &ParabolicType::borel()).unwrap(), big(2));
        let e7 = preset("E7", 7).unwrap();
        assert_eq!(flag_euler_characteristic(&e7, &ParabolicType::maximal(&e7, 6).unwrap()).unwrap(), big(56));
        for (name, n) in [("A-sc", 3), ("B-sc", 4), ("C-ad", 3), ("D-sc", 5), ("G2", 2), ("F4", 4), ("GL", 3)] {
            let d = preset(name, n).unwrap();
            assert_eq!(ParabolicType::whole(&d).levi_weyl_order(&d), BigInt::from(d.weyl_order().unwrap()), "{name}");
        }
        assert!(ParabolicType::new(&a1, vec![3]).is_err());
    }

    #[test]
    fn fixed_points() {
        let gl2 = preset("GL", 2).unwrap();
        assert_eq!(gr_fixed_points(&gl2, &[1, 0]).unwrap().len(), 2);
        assert_eq!(gr_fixed_points(&gl2, &[0, 0]).unwrap(), vec![vec![0, 0]]);
        let a2 = preset("A-sc", 2).unwrap();
        // the coroot α1^∨ + α2^∨ is the quasi-minuscule coweight
        let q = gr_fixed_points(&a2, &[1, 1]).unwrap();
        assert_eq!(q.len(), 7);
        assert!(q.contains(&vec![0, 0]));
    }

    #[test]
    fn local_terms() {
        let gl3 = preset("GL", 3).unwrap();
        for l in gl3.orbit(&[1, 0, 0]).unwrap() {
            assert_eq!(local_term(&gl3, &[1, 0, 0], &l).unwrap(), big(1));
        }
        assert_eq!(local_term(&gl3, &[1, 0, 0], &[2, -1, 0]).unwrap(), big(0));
        let a2 = preset("A-sc", 2).unwrap();
        assert_eq!(local_term(&a2, &[1, 1], &[1, 1]).unwrap(), big(1));
        assert_eq!(local_term(&a2, &[1, 1], &[0, 0]).unwrap(), big(2));
    }

    #[test]
    fn global_checks() {
        let gl2 = preset("GL", 2).unwrap();
        let r = lefschetz_global_check(&gl2, &[1, 0]).unwrap();
        assert_eq!(r.global_sum, big(2));
        assert!(r.passes());
        assert_eq!(lefschetz_global_check(&gl2, &[0, 0]).unwrap().global_sum, big(1));
        let b2 = preset("B-ad", 2).unwrap();
        let r = lefschetz_global_check(&b2, &[1, 1]).unwrap();
        assert!(r.passes());
        assert_eq!(r.global_sum, weights::weyl_dim(&b2, &[1, 1]).unwrap());
    }

    #[test]
    fn convolution_reports() {
        let gl2 = preset("GL", 2).unwrap();
        let r = convolution_fixed_points(&gl2, &[1, 0], &[1, 0]).unwrap();
        assert_eq!(r.global_sum, big(4));
        assert!(r.passes());
        let fib = &r.fibers.as_ref().unwrap()[&vec![1, 1]];
        assert_eq!(fib.len(), 2);
        assert_eq!(r.local_terms().get(&[1, 1]), big(2));
        let single = convolution_fixed_points(&gl2, &[2, 1], &[0, 0]).unwrap();
        let plain = lefschetz_global_check(&gl2, &[2, 1]).unwrap();
        assert_eq!(single.terms, plain.terms);
        assert_eq!(single.global_sum, plain.global_sum);
    }
}

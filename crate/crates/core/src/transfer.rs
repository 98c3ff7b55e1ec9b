//! Hecke transfer operators between class functions on `G` and on `J_b`, in
//! a finite model where classes are indexed by torus types and labels.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::cyclotomic::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::kottwitz::{self, BasicClass, Element, FgAbelianGroup, GroupHom};
use crate::linalg::{self, mat_mul, IMat};
use crate::root_datum::{Cochar, DiagramAutomorphism, RootDatum, WeylElement};
use crate::weights::{self, bigint_json, json_bigint, WeightFunction};

/// Unramified maximal torus: Frobenius acts on `X_*` by `φ = w∘θ`.
#[derive(Clone, Debug)]
pub struct TorusType {
    id: String,
    w: WeylElement,
    phi: IMat,
    coinvariants: FgAbelianGroup,
    kappa: GroupHom,
    fixed_rank: usize,
    elliptic: bool,
}

impl TorusType {
    pub fn new(d: &RootDatum, w: WeylElement, theta: &DiagramAutomorphism) -> Result<Self> {
        let phi = mat_mul(w.matrix(), theta.matrix());
        let (coinvariants, kappa) = kottwitz::coinvariants(&phi)?;
        let n = d.rank();
        let minus_id: IMat = (0..n).map(|i| (0..n).map(|j| phi[i][j] - i64::from(i == j)).collect()).collect();
        let fixed = linalg::kernel_q(&linalg::to_rational_matrix(&minus_id), n);
        let elliptic = fixed.iter().all(|v| {
            d.simple_roots().iter().all(|a| {
                a.iter().zip(v).map(|(&x, y)| linalg::rat(x) * y).sum::<BigRational>().is_zero()
            })
        });
        Ok(TorusType { id: w.word_string(), w, fixed_rank: fixed.len(), phi, coinvariants, kappa, elliptic })
    }

    pub fn from_word(d: &RootDatum, word: &[usize], theta: &DiagramAutomorphism) -> Result<Self> {
        Self::new(d, d.weyl_from_word(word)?, theta)
    }

    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn weyl_element(&self) -> &WeylElement {
        &self.w
    }
    pub fn action(&self) -> &IMat {
        &self.phi
    }
    /// `X_*(T)_Γ`.
    pub fn coinvariants(&self) -> &FgAbelianGroup {
        &self.coinvariants
    }
    /// `κ_T : X_*(T) → X_*(T)_Γ`.
    pub fn kappa(&self) -> &GroupHom {
        &self.kappa
    }
    pub fn fixed_rank(&self) -> usize {
        self.fixed_rank
    }
    pub fn is_elliptic(&self) -> bool {
        self.elliptic
    }

    pub fn to_json(&self) -> Value {
        json!({
            "torus": self.id,
            "coinvariants": self.coinvariants.to_json(),
            "fixed_rank": self.fixed_rank,
            "elliptic": self.elliptic,
        })
    }
}

/// Whether the `φ`-fixed part of `X_*⊗ℚ` is killed by every root.
pub fn is_elliptic(t: &TorusType) -> bool {
    t.is_elliptic()
}

/// `{λ ∈ Ω(μ) : κ_T(λ) = ν}`.
pub fn rel_fiber(d: &RootDatum, mu: &[i64], t: &TorusType, nu: &[i64]) -> Result<Vec<Cochar>> {
    let nu = t.coinvariants.normalize(nu)?;
    let mut out = Vec::new();
    for lam in weights::weight_support(d, mu)? {
        if t.kappa.apply(&lam)? == nu {
            out.push(lam);
        }
    }
    Ok(out)
}

/// `ν ↦ m(ν) = Σ_{κ_T(λ)=ν} dim r_μ[λ]` on `X_*(T)_Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferKernel {
    pub torus: String,
    pub group: FgAbelianGroup,
    pub values: BTreeMap<Element, BigInt>,
}

impl TransferKernel {
    pub fn get(&self, nu: &[i64]) -> BigInt {
        self.values.get(nu).cloned().unwrap_or_else(BigInt::zero)
    }
    pub fn mass(&self) -> BigInt {
        self.values.values().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
    /// Sorted multiset of nonzero values.
    pub fn value_multiset(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.values.values().cloned().collect();
        v.sort();
        v
    }
    pub fn to_json(&self) -> Value {
        json!({
            "torus": self.torus,
            "group": self.group.to_json(),
            "values": self.values.iter().map(|(nu, m)| json!({"nu": nu, "mult": bigint_json(m)})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let torus = v["torus"].as_str().ok_or_else(|| Error::Invalid("kernel needs a torus id".into()))?.to_string();
        let group = FgAbelianGroup::from_json(&v["group"])?;
        let mut values = BTreeMap::new();
        for item in v["values"].as_array().ok_or_else(|| Error::Invalid("kernel values must be an array".into()))? {
            let nu: Element =
                serde_json::from_value(item["nu"].clone()).map_err(|e| Error::Invalid(format!("bad nu: {e}")))?;
            let m = json_bigint(&item["mult"])?;
            if !group.contains(&nu) || m.is_zero() {
                return Err(Error::Invalid(format!("bad kernel entry {item}")));
            }
            values.insert(nu, m);
        }
        Ok(TransferKernel { torus, group, values })
    }
}

pub fn transfer_kernel(d: &RootDatum, mu: &[i64], t: &TorusType) -> Result<TransferKernel> {
    kernel_from_weights(&weights::weight_multiplicities(d, mu)?, t)
}

fn kernel_from_weights(f: &WeightFunction, t: &TorusType) -> Result<TransferKernel> {
    let mut values: BTreeMap<Element, BigInt> = BTreeMap::new();
    for (lam, m) in f.iter() {
        *values.entry(t.kappa.apply(lam)?).or_insert_with(BigInt::zero) += m;
    }
    values.retain(|_, m| !m.is_zero());
    Ok(TransferKernel { torus: t.id.clone(), group: t.coinvariants.clone(), values })
}

/// Kernel for the class `c`: only `ν` whose image in `π₁(G)_Γ` is `c`
/// contribute.
pub fn transfer_kernel_for_class(
    d: &RootDatum,
    theta: &DiagramAutomorphism,
    mu: &[i64],
    t: &TorusType,
    c: &[i64],
) -> Result<TransferKernel> {
    let (_, proj) = kottwitz::pi1_coinvariants(d, theta)?;
    let c = proj.target().normalize(c)?;
    let mut k = transfer_kernel(d, mu, t)?;
    let mut keep = BTreeMap::new();
    for (nu, m) in k.values {
        if t.kappa.push_forward(&proj, &nu)? == c {
            keep.insert(nu, m);
        }
    }
    k.values = keep;
    Ok(k)
}

/// True iff every kernel built against `c` vanishes whenever `c` is not the
/// basic class of `μ` (and trivially true when it is).
pub fn vanishing_check(
    d: &RootDatum,
    theta: &DiagramAutomorphism,
    mu: &[i64],
    c: &[i64],
    tori: &[TorusType],
) -> Result<bool> {
    let basic = kottwitz::basic_class_of(d, theta, mu)?;
    if basic.group.normalize(c)? == basic.element {
        return Ok(true);
    }
    for t in tori {
        if !transfer_kernel_for_class(d, theta, mu, t, c)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    G,
    J,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::G => "G",
            Side::J => "J",
        }
    }
}

/// Model point of a strongly regular class: a torus type, a label, and on the
/// `J` side the invariant `ν ∈ X_*(T)_Γ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassPoint {
    pub torus: String,
    pub label: String,
    pub nu: Option<Element>,
}

impl ClassPoint {
    pub fn g(torus: &str, label: &str) -> Self {
        ClassPoint { torus: torus.into(), label: label.into(), nu: None }
    }
    pub fn side(&self) -> Side {
        if self.nu.is_some() {
            Side::J
        } else {
            Side::G
        }
    }
}

/// Finitely supported rational function on class points of one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    side: Side,
    values: BTreeMap<ClassPoint, BigRational>,
}

impl ClassFunction {
    pub fn zero(side: Side) -> Self {
        ClassFunction { side, values: BTreeMap::new() }
    }

    pub fn delta(point: ClassPoint) -> Self {
        let mut f = Self::zero(point.side());
        f.add_at(point, BigRational::from_integer(1.into())).expect("same side");
        f
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn add_at(&mut self, p: ClassPoint, v: BigRational) -> Result<()> {
        if p.side() != self.side {
            return Err(Error::SideMismatch);
        }
        if v.is_zero() {
            return Ok(());
        }
        let e = self.values.entry(p.clone()).or_insert_with(BigRational::zero);
        *e += v;
        if e.is_zero() {
            self.values.remove(&p);
        }
        Ok(())
    }

    pub fn get(&self, p: &ClassPoint) -> BigRational {
        self.values.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClassPoint, &BigRational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.side != other.side {
            return Err(Error::SideMismatch);
        }
        let mut out = self.clone();
        for (p, v) in &other.values {
            out.add_at(p.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.side);
        for (p, v) in &self.values {
            out.add_at(p.clone(), v * k).expect("same side");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.values
                .iter()
                .map(|(p, v)| {
                    json!({"torus": p.torus, "label": p.label, "nu": p.nu, "value": format_rational(v)})
                })
                .collect(),
        )
    }

    /// Parse from JSON; the side is inferred from the presence of `nu`
    /// (`side` decides for an empty array).
    pub fn from_json(v: &Value, side: Side) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Invalid("class function must be an array".into()))?;
        let mut out: Option<ClassFunction> = None;
        for item in arr {
            let torus = item["torus"].as_str().ok_or_else(|| Error::Invalid("missing torus".into()))?;
            let label = item["label"].as_str().unwrap_or("");
            let nu: Option<Element> = match &item["nu"] {
                Value::Null => None,
                other => Some(
                    serde_json::from_value(other.clone()).map_err(|e| Error::Invalid(format!("bad nu: {e}")))?,
                ),
            };
            let value = match &item["value"] {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => BigRational::from_integer(
                    n.as_i64().ok_or_else(|| Error::Invalid(format!("bad value {n}")))?.into(),
                ),
                other => return Err(Error::Invalid(format!("bad value {other}"))),
            };
            let p = ClassPoint { torus: torus.into(), label: label.into(), nu };
            let f = out.get_or_insert_with(|| ClassFunction::zero(p.side()));
            f.add_at(p, value)?;
        }
        Ok(out.unwrap_or_else(|| ClassFunction::zero(side)))
    }
}

/// `Σ f(x) g(x)` with unit weights.
pub fn pairing(f: &ClassFunction, g: &ClassFunction) -> Result<BigRational> {
    if f.side != g.side {
        return Err(Error::SideMismatch);
    }
    Ok(f.values.iter().filter_map(|(p, v)| g.values.get(p).map(|w| v * w)).sum())
}

/// Representatives of `θ`-twisted conjugacy classes `x w θ(x)^{-1}` in `W`,
/// first element of each class in shortlex order.
pub fn twisted_class_representatives(d: &RootDatum, theta: &DiagramAutomorphism) -> Result<Vec<WeylElement>> {
    let w_all = d.weyl_group()?;
    let th = theta.matrix();
    let mut th_inv = linalg::identity(d.rank());
    for _ in 1..theta.order() {
        th_inv = mat_mul(&th_inv, th);
    }
    let index: std::collections::HashMap<&IMat, usize> =
        w_all.iter().enumerate().map(|(i, w)| (w.matrix(), i)).collect();
    let inverses: Vec<IMat> = w_all
        .iter()
        .map(|x| {
            let rev: Vec<usize> = x.word().iter().rev().copied().collect();
            d.weyl_from_word(&rev).map(|e| e.matrix().clone())
        })
        .collect::<Result<_>>()?;
    let mut class_of = vec![usize::MAX; w_all.len()];
    let mut reps = Vec::new();
    for (i, w) in w_all.iter().enumerate() {
        if class_of[i] != usize::MAX {
            continue;
        }
        class_of[i] = reps.len();
        for (x, x_inv) in w_all.iter().zip(&inverses) {
            // x w θ(x)^{-1} with θ(x)^{-1} = θ x^{-1} θ^{-1}
            let tx_inv = mat_mul(&mat_mul(th, x_inv), &th_inv);
            let y = mat_mul(&mat_mul(x.matrix(), w.matrix()), &tx_inv);
            if let Some(&j) = index.get(&y) {
                class_of[j] = reps.len();
            }
        }
        reps.push(w.clone());
    }
    Ok(reps)
}

/// Torus types for the given words, or for the twisted class representatives
/// when `words` is `None`.
pub fn torus_catalog(
    d: &RootDatum,
    theta: &DiagramAutomorphism,
    words: Option<&[Vec<usize>]>,
) -> Result<Vec<TorusType>> {
    let elements: Vec<WeylElement> = match words {
        Some(ws) => ws.iter().map(|w| d.weyl_from_word(w)).collect::<Result<_>>()?,
        None => twisted_class_representatives(d, theta)?,
    };
    let mut out: Vec<TorusType> = Vec::new();
    for w in elements {
        if out.iter().any(|t| t.w == w) {
            continue;
        }
        out.push(TorusType::new(d, w, theta)?);
    }
    Ok(out)
}

/// The operators `T_{b,μ}^{G→J}` and `T_{b,μ}^{J→G}` over a registered torus
/// catalog, with `b` the basic class of `μ`.
#[derive(Clone, Debug)]
pub struct HeckeTransfer {
    mu: Cochar,
    basic: BasicClass,
    pi1_proj: GroupHom,
    tori: BTreeMap<String, TorusType>,
    kernels: BTreeMap<String, TransferKernel>,
}

impl HeckeTransfer {
    pub fn new(d: &RootDatum, theta: &DiagramAutomorphism, mu: &[i64], tori: &[TorusType]) -> Result<Self> {
        let basic = kottwitz::basic_class_of(d, theta, mu)?;
        let (_, pi1_proj) = kottwitz::pi1_coinvariants(d, theta)?;
        let f = weights::weight_multiplicities(d, mu)?;
        let mut map = BTreeMap::new();
        let mut kernels = BTreeMap::new();
        for t in tori {
            kernels.insert(t.id.clone(), kernel_from_weights(&f, t)?);
            map.insert(t.id.clone(), t.clone());
        }
        Ok(HeckeTransfer { mu: mu.to_vec(), basic, pi1_proj, tori: map, kernels })
    }

    pub fn mu(&self) -> &[i64] {
        &self.mu
    }
    pub fn basic_class(&self) -> &BasicClass {
        &self.basic
    }
    pub fn tori(&self) -> impl Iterator<Item = &TorusType> {
        self.tori.values()
    }
    pub fn torus(&self, id: &str) -> Result<&TorusType> {
        self.tori.get(id).ok_or_else(|| Error::UnregisteredTorus(id.to_string()))
    }
    pub fn kernel(&self, id: &str) -> Result<&TransferKernel> {
        self.kernels.get(id).ok_or_else(|| Error::UnregisteredTorus(id.to_string()))
    }

    /// A `J`-side point, checking that `ν` maps to `κ(b)` in `π₁(G)_Γ`.
    pub fn j_point(&self, torus: &str, label: &str, nu: &[i64]) -> Result<ClassPoint> {
        let t = self.torus(torus)?;
        let nu = t.coinvariants.normalize(nu)?;
        if t.kappa.push_forward(&self.pi1_proj, &nu)? != self.basic.element {
            return Err(Error::InvariantMismatch(format!("{nu:?} on torus {torus}")));
        }
        Ok(ClassPoint { torus: torus.into(), label: label.into(), nu: Some(nu) })
    }

    pub fn g_to_j(&self, f: &ClassFunction) -> Result<ClassFunction> {
        if f.side != Side::G {
            return Err(Error::SideMismatch);
        }
        let mut out = ClassFunction::zero(Side::J);
        for (p, v) in &f.values {
            let k = self.kernel(&p.torus)?;
            for (nu, m) in &k.values {
                let q = ClassPoint { torus: p.torus.clone(), label: p.label.clone(), nu: Some(nu.clone()) };
                out.add_at(q, v * BigRational::from_integer(m.clone()))?;
            }
        }
        Ok(out)
    }

    pub fn j_to_g(&self, f: &ClassFunction) -> Result<ClassFunction> {
        if f.side != Side::J {
            return Err(Error::SideMismatch);
        }
        let mut out = ClassFunction::zero(Side::G);
        for (p, v) in &f.values {
            let nu = p.nu.as_ref().expect("J-side point");
            let checked = self.j_point(&p.torus, &p.label, nu)?;
            let m = self.kernel(&p.torus)?.get(checked.nu.as_ref().unwrap());
            out.add_at(ClassPoint::g(&p.torus, &p.label), v * BigRational::from_integer(m))?;
        }
        Ok(out)
    }

    /// Drop points on non-elliptic tori.
    pub fn elliptic_part(&self, f: &ClassFunction) -> ClassFunction {
        let mut out = ClassFunction::zero(f.side);
        for (p, v) in &f.values {
            if self.tori.get(&p.torus).map_or(false, |t| t.elliptic) {
                out.add_at(p.clone(), v.clone()).expect("same side");
            }
        }
        out
    }

    /// All admissible `J`-side points for the given labels.
    pub fn j_points(&self, labels: &[String]) -> Result<Vec<ClassPoint>> {
        let mut out = Vec::new();
        for (id, k) in &self.kernels {
            for nu in k.values.keys() {
                for l in labels {
                    out.push(self.j_point(id, l, nu)?);
                }
            }
        }
        Ok(out)
    }
}

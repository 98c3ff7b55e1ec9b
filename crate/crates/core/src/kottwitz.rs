//! Finitely generated abelian groups, `π₁(G)`, Galois coinvariants, the
//! κ-maps and Kottwitz signs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, big_to_i64, dot, rat, IMat};
use crate::root_datum::{Cochar, DiagramAutomorphism, RootDatum};

/// `ℤ^r ⊕ ℤ/d₁ ⊕ ⋯ ⊕ ℤ/d_k` with `d₁ | d₂ | ⋯` and every `d_i ≥ 2`.
///
/// Elements are flat vectors: the free coordinates first, then the torsion
/// coordinates reduced into `0..d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<i64>,
}

pub type Element = Vec<i64>;

impl FgAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if torsion.iter().any(|&d| d < 2) {
            return Err(Error::Invalid("invariant factors must be at least 2".into()));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Invalid("invariant factors must form a divisibility chain".into()));
        }
        Ok(FgAbelianGroup { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }
    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }
    pub fn num_coords(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.num_coords() == 0
    }
    /// Order of a finite group; `None` when the free rank is positive.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().map(|&d| d as u64).product())
    }

    pub fn zero(&self) -> Element {
        vec![0; self.num_coords()]
    }

    pub fn normalize(&self, x: &[i64]) -> Result<Element> {
        if x.len() != self.num_coords() {
            return Err(Error::DimensionMismatch { expected: self.num_coords(), got: x.len() });
        }
        Ok(x.iter()
            .enumerate()
            .map(|(i, &v)| if i < self.free_rank { v } else { v.rem_euclid(self.torsion[i - self.free_rank]) })
            .collect())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.normalize(x).map_or(false, |n| n == x)
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Result<Element> {
        self.normalize(&linalg::add_vec(x, y))
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Result<Element> {
        self.normalize(&linalg::sub_vec(x, y))
    }

    pub fn neg(&self, x: &[i64]) -> Result<Element> {
        self.normalize(&linalg::scale_vec(x, -1))
    }

    /// All elements of a finite group, in lexicographic order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let Some(order) = self.order() else {
            return Err(Error::Invalid("group is infinite".into()));
        };
        if order > 1_000_000 {
            return Err(Error::CostGuard { what: "group order".into(), limit: 1_000_000 });
        }
        let mut out = vec![Vec::new()];
        for &d in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..d).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({"free_rank": self.free_rank, "torsion": self.torsion})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let free = v["free_rank"].as_u64().ok_or_else(|| Error::Invalid("group needs free_rank".into()))?;
        let torsion: Vec<i64> = serde_json::from_value(v["torsion"].clone())
            .map_err(|e| Error::Invalid(format!("bad torsion: {e}")))?;
        Self::new(free as usize, torsion)
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Surjection `ℤ^n → A` onto a quotient group, with a set-theoretic section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source_rank: usize,
    target: FgAbelianGroup,
    /// Rows give the target coordinates.
    matrix: IMat,
    /// Columns are preimages of the target generators.
    section: IMat,
}

impl GroupHom {
    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }
    pub fn source_rank(&self) -> usize {
        self.source_rank
    }
    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Result<Element> {
        if x.len() != self.source_rank {
            return Err(Error::DimensionMismatch { expected: self.source_rank, got: x.len() });
        }
        let raw: Vec<i64> = self.matrix.iter().map(|row| dot(row, x)).collect();
        self.target.normalize(&raw)
    }

    /// A lattice vector mapping to `y`.
    pub fn lift(&self, y: &[i64]) -> Result<Vec<i64>> {
        let y = self.target.normalize(y)?;
        let mut x = vec![0; self.source_rank];
        for (k, &c) in y.iter().enumerate() {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += c * self.section[i][k];
            }
        }
        Ok(x)
    }

    /// The induced map `self.target → other.target`, evaluated at `y`, for a
    /// quotient `other` of the same lattice through which `self` factors.
    pub fn push_forward(&self, other: &GroupHom, y: &[i64]) -> Result<Element> {
        other.apply(&self.lift(y)?)
    }
}

/// `ℤ^n / ⟨relations⟩` with its projection.
pub fn quotient(n: usize, relations: &[Vec<i64>]) -> Result<(FgAbelianGroup, GroupHom)> {
    for r in relations {
        if r.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
    }
    // columns of A are the relations
    let a: IMat = (0..n).map(|i| relations.iter().map(|r| r[i]).collect()).collect();
    let s = linalg::smith_normal_form(&a, relations.len());
    let d_at = |i: usize| s.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
    let mut free_rows = Vec::new();
    let mut torsion_rows = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..n {
        let d = d_at(i);
        if d.is_zero() {
            free_rows.push(i);
        } else if !d.is_one() {
            torsion_rows.push(i);
            torsion.push(big_to_i64(&d, "invariant factor")?);
        }
    }
    let rows: Vec<usize> = free_rows.iter().chain(&torsion_rows).copied().collect();
    let matrix = rows
        .iter()
        .map(|&i| s.u[i].iter().map(|x| big_to_i64(x, "projection")).collect::<Result<Vec<_>>>())
        .collect::<Result<IMat>>()?;
    let section = (0..n)
        .map(|r| rows.iter().map(|&i| big_to_i64(&s.u_inv[r][i], "section")).collect::<Result<Vec<_>>>())
        .collect::<Result<IMat>>()?;
    let group = FgAbelianGroup::new(free_rows.len(), torsion)?;
    Ok((group.clone(), GroupHom { source_rank: n, target: group, matrix, section }))
}

/// `π₁(G) = X_*(T) / ℤΦ^∨`.
pub fn pi1(d: &RootDatum) -> Result<(FgAbelianGroup, GroupHom)> {
    quotient(d.rank(), d.simple_coroots())
}

/// `L / (φ − 1)L` for an automorphism `φ` of `L = ℤ^n`.
pub fn coinvariants(phi: &IMat) -> Result<(FgAbelianGroup, GroupHom)> {
    let n = phi.len();
    quotient(n, &augmentation_relations(phi))
}

fn augmentation_relations(phi: &IMat) -> Vec<Vec<i64>> {
    let n = phi.len();
    (0..n).map(|j| (0..n).map(|i| phi[i][j] - i64::from(i == j)).collect()).collect()
}

/// `π₁(G)_Γ` for the Galois action through `θ`.
pub fn pi1_coinvariants(d: &RootDatum, theta: &DiagramAutomorphism) -> Result<(FgAbelianGroup, GroupHom)> {
    let mut rels = d.simple_coroots().to_vec();
    rels.extend(augmentation_relations(theta.matrix()));
    quotient(d.rank(), &rels)
}

/// Element of `π₁(G)_Γ` labelling a basic class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicClass {
    pub group: FgAbelianGroup,
    pub element: Element,
}

impl BasicClass {
    pub fn to_json(&self) -> Value {
        json!({"group": self.group.to_json(), "element": self.element})
    }
}

/// The basic class of `B(G, μ)`: the image of `μ` in `π₁(G)_Γ`.
pub fn basic_class_of(d: &RootDatum, theta: &DiagramAutomorphism, mu: &[i64]) -> Result<BasicClass> {
    d.check_len(mu)?;
    if !d.is_dominant(mu) {
        return Err(Error::NotDominant(mu.to_vec()));
    }
    let (group, proj) = pi1_coinvariants(d, theta)?;
    Ok(BasicClass { element: proj.apply(mu)?, group })
}

/// `c − image(λ)`.
pub fn kappa_modification(proj: &GroupHom, c: &[i64], lambda: &[i64]) -> Result<Element> {
    proj.target().sub(c, &proj.apply(lambda)?)
}

fn rational_labels(d: &RootDatum, nu: &[BigRational]) -> Result<Vec<i64>> {
    if nu.len() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), got: nu.len() });
    }
    d.simple_roots()
        .iter()
        .map(|a| {
            let p: BigRational = a.iter().zip(nu).map(|(&x, y)| rat(x) * y).sum();
            if !p.is_integer() {
                return Err(Error::NonIntegral(format!("pairing of {nu:?} with a simple root")));
            }
            big_to_i64(&p.to_integer(), "pairing")
        })
        .collect()
}

/// `(−1)^{⟨2ρ, ν⟩}` for a rational cocharacter `ν` with integral pairings
/// against the simple roots.
pub fn kottwitz_sign(d: &RootDatum, nu: &[BigRational]) -> Result<i64> {
    let labels = rational_labels(d, nu)?;
    Ok(sign_of(dot(d.two_rho_simple_coeffs(), &labels)))
}

pub fn to_rational_vec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn sign_of(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(e(G)e(J_b), (−1)^{⟨2ρ, μ⟩})` with the signs of `G` and `J_b` computed
/// from the lifts `μ₁` and `μ₂ = μ₁ + μ`.
pub fn sign_identity(d: &RootDatum, mu: &[BigRational], base: Option<&[BigRational]>) -> Result<(i64, i64)> {
    let zero = vec![BigRational::zero(); d.rank()];
    let mu1 = base.unwrap_or(&zero);
    let mu2: Vec<BigRational> = mu1.iter().zip(mu).map(|(a, b)| a + b).collect();
    let lhs = kottwitz_sign(d, mu1)? * kottwitz_sign(d, &mu2)?;
    let pairing: BigRational = d.two_rho().iter().zip(mu).map(|(&a, b)| rat(a) * b).sum();
    if !pairing.is_integer() {
        return Err(Error::NonIntegral("⟨2ρ, μ⟩".into()));
    }
    let rhs = sign_of(big_to_i64(&pairing.to_integer(), "⟨2ρ, μ⟩")?);
    Ok((lhs, rhs))
}

/// `⟨2ρ, μ⟩`.
pub fn shtuka_dimension(d: &RootDatum, mu: &[i64]) -> Result<i64> {
    d.check_len(mu)?;
    if !d.is_dominant(mu) {
        return Err(Error::NotDominant(mu.to_vec()));
    }
    Ok(dot(d.two_rho(), mu))
}

/// Rational cocharacter with the given simple-root pairings, supported on the
/// coroot span.
pub fn coweight_from_labels(d: &RootDatum, labels: &[i64]) -> Result<Vec<BigRational>> {
    if labels.len() != d.semisimple_rank() {
        return Err(Error::DimensionMismatch { expected: d.semisimple_rank(), got: labels.len() });
    }
    let omegas = d.fundamental_coweights();
    let mut v = vec![BigRational::zero(); d.rank()];
    for (w, &k) in omegas.iter().zip(labels) {
        for (vi, x) in v.iter_mut().zip(w) {
            *vi += x * rat(k);
        }
    }
    Ok(v)
}

/// Integral cocharacters are the ones whose rational vector is integral.
pub fn integral_cochar(v: &[BigRational]) -> Option<Cochar> {
    v.iter().map(|x| x.is_integer().then(|| big_to_i64(&x.to_integer(), "").ok()).flatten()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{automorphism_from_permutation, preset};

    #[test]
    fn fundamental_groups() {
        let (g, _) = pi1(&preset("GL", 3).unwrap()).unwrap();
        assert_eq!((g.free_rank(), g.torsion()), (1, &[][..]));
        let (g, p) = pi1(&preset("SL", 2).unwrap()).unwrap();
        assert!(g.is_trivial());
        assert_eq!(p.apply(&[1]).unwrap(), Vec::<i64>::new());
        let (g, _) = pi1(&preset("PGL", 2).unwrap()).unwrap();
        assert_eq!(g.torsion(), &[2]);
        let (g, _) = pi1(&preset("Sp", 4).unwrap()).unwrap();
        assert!(g.is_trivial());
        let (g, _) = pi1(&preset("D-ad", 4).unwrap()).unwrap();
        assert_eq!(g.torsion(), &[2, 2]);
        let (g, _) = pi1(&preset("A-ad", 3).unwrap()).unwrap();
        assert_eq!(g.torsion(), &[4]);
    }

    #[test]
    fn coinvariant_examples() {
        let (g, _) = coinvariants(&linalg::identity(2)).unwrap();
        assert_eq!((g.free_rank(), g.torsion().len()), (2, 0));
        let (g, p) = coinvariants(&vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!((g.free_rank(), g.torsion().len()), (1, 0));
        let a = p.apply(&[1, 0]).unwrap();
        assert_eq!(p.apply(&[0, 1]).unwrap(), a);
        assert_eq!(p.apply(&[1, 1]).unwrap(), linalg::scale_vec(&a, 2));
        let (g, p) = coinvariants(&vec![vec![-1]]).unwrap();
        assert_eq!(g.torsion(), &[2]);
        assert_eq!(p.apply(&[3]).unwrap(), vec![1]);
    }

    #[test]
    fn basic_classes() {
        let gl2 = preset("GL", 2).unwrap();
        let id = DiagramAutomorphism::identity(&gl2);
        let b = basic_class_of(&gl2, &id, &[1, 0]).unwrap();
        assert_eq!(b.group.free_rank(), 1);
        assert_eq!(b.element.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);
        assert_eq!(basic_class_of(&gl2, &id, &[0, 0]).unwrap().element, vec![0]);
        let pgl2 = preset("PGL", 2).unwrap();
        let id = DiagramAutomorphism::identity(&pgl2);
        // the coroot of PGL2 is twice the generator
        assert_eq!(basic_class_of(&pgl2, &id, &[2]).unwrap().element, vec![0]);
        assert_eq!(basic_class_of(&pgl2, &id, &[1]).unwrap().element, vec![1]);
        // twisted GL3: π₁ = ℤ with θ = −1, so coinvariants ℤ/2
        let gl3 = preset("GL", 3).unwrap();
        let t = automorphism_from_permutation(&gl3, &[1, 0]).unwrap();
        let b = basic_class_of(&gl3, &t, &[1, 0, 0]).unwrap();
        assert_eq!(b.group.torsion(), &[2]);
        assert_eq!(b.element, vec![1]);
    }

    #[test]
    fn kappa_modifications() {
        let gl2 = preset("GL", 2).unwrap();
        let id = DiagramAutomorphism::identity(&gl2);
        let (_, proj) = pi1_coinvariants(&gl2, &id).unwrap();
        let c = basic_class_of(&gl2, &id, &[1, 0]).unwrap().element;
        assert_eq!(kappa_modification(&proj, &c, &[1, 0]).unwrap(), vec![0]);
        assert_eq!(kappa_modification(&proj, &c, &[0, 1]).unwrap(), vec![0]);
        assert_eq!(kappa_modification(&proj, &c, &[0, 0]).unwrap(), c);
    }

    #[test]
    fn signs() {
        for n in 1..=8 {
            let d = preset("GL", n).unwrap();
            let mut mu = vec![0; n];
            mu[0] = 1;
            let (l, r) = sign_identity(&d, &to_rational_vec(&mu), None).unwrap();
            let expect = if (n - 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!((l, r), (expect, expect), "GL{n}");
            assert_eq!(kottwitz_sign(&d, &to_rational_vec(&mu)).unwrap(), expect);
        }
        let gl2 = preset("GL", 2).unwrap();
        assert_eq!(kottwitz_sign(&gl2, &to_rational_vec(&[0, 0])).unwrap(), 1);
        let half = vec![BigRational::new(1.into(), 2.into()), rat(0)];
        assert!(matches!(kottwitz_sign(&gl2, &half), Err(Error::NonIntegral(_))));
        // Sp4: fundamental coweights are rational lifts
        let sp4 = preset("Sp", 4).unwrap();
        for labels in [[1, 0], [0, 1]] {
            let mu = coweight_from_labels(&sp4, &labels).unwrap();
            let (l, r) = sign_identity(&sp4, &mu, None).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn shtuka_dimensions() {
        let gl4 = preset("GL", 4).unwrap();
        assert_eq!(gl4.two_rho(), &vec![3, 1, -1, -3]);
        assert_eq!(shtuka_dimension(&gl4, &[2, 1, 0, 0]).unwrap(), 7);
        assert_eq!(shtuka_dimension(&gl4, &[1, 0, 0, 0]).unwrap(), 3);
        assert_eq!(shtuka_dimension(&gl4, &[0, 0, 0, 0]).unwrap(), 0);
    }

    #[test]
    fn group_arithmetic() {
        let g = FgAbelianGroup::new(1, vec![2, 6]).unwrap();
        assert_eq!(g.add(&[1, 1, 5], &[2, 1, 3]).unwrap(), vec![3, 0, 2]);
        assert!(g.contains(&[-4, 1, 5]));
        assert!(!g.contains(&[0, 2, 0]));
        assert!(FgAbelianGroup::new(0, vec![4, 6]).is_err());
        let f = FgAbelianGroup::new(0, vec![2, 4]).unwrap();
        assert_eq!(f.elements().unwrap().len(), 8);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/6");
    }
}

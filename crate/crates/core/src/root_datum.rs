//! Based root data, Weyl groups, dominance order and diagram automorphisms.
//!
//! A [`RootDatum`] stores the cocharacter lattice `X_*` and the character
//! lattice `X^*` as `ℤ^n` in dual bases, so the pairing is the dot product.
//! Representations of the dual group are handled inside the same datum:
//! coroots play the role of dual roots and cocharacters the role of dual
//! weights.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, mat_mul, mat_vec, rat, IMat};

/// Element of `X_*(T)`.
pub type Cochar = Vec<i64>;
/// Element of `X^*(T)`.
pub type Char = Vec<i64>;

/// Refuse Weyl group enumerations larger than this.
pub const WEYL_GUARD: usize = 10_000;
/// Refuse orbit or weight-set enumerations larger than this.
pub const ORBIT_GUARD: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    /// Cocharacter lattice equal to the coroot lattice.
    Sc,
    /// Cocharacter lattice equal to the coweight lattice.
    Ad,
}

impl std::str::FromStr for Lattice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(Lattice::Sc),
            "ad" => Ok(Lattice::Ad),
            other => Err(Error::Invalid(format!("lattice must be sc or ad, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
struct PositivePair {
    root: Char,
    coroot: Cochar,
    root_coeffs: Vec<i64>,
    coroot_coeffs: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    name: String,
    labels: Vec<String>,
    simple_roots: Vec<Char>,
    simple_coroots: Vec<Cochar>,
    cartan: IMat,
    positive: Vec<PositivePair>,
    two_rho: Char,
    two_rho_check: Cochar,
    two_rho_coeffs: Vec<i64>,
    // (C^T)^{-1} = ct_inv_num / ct_inv_den
    ct_inv_num: IMat,
    ct_inv_den: i64,
    weyl_cache: OnceLock<Option<Arc<Vec<WeylElement>>>>,
}

impl RootDatum {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        simple_roots: Vec<Char>,
        simple_coroots: Vec<Cochar>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidDatum("rank must be positive".into()));
        }
        if simple_roots.len() != simple_coroots.len() {
            return Err(Error::InvalidDatum(
                "simple roots and coroots differ in number".into(),
            ));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        let r = simple_roots.len();
        let cartan: IMat = (0..r)
            .map(|i| (0..r).map(|j| dot(&simple_roots[j], &simple_coroots[i])).collect())
            .collect();
        validate_cartan(&cartan)?;

        let positive = close_positive(&simple_roots, &simple_coroots)?;
        let mut two_rho = vec![0; n];
        let mut two_rho_check = vec![0; n];
        let mut two_rho_coeffs = vec![0; r];
        for p in &positive {
            two_rho = linalg::add_vec(&two_rho, &p.root);
            two_rho_check = linalg::add_vec(&two_rho_check, &p.coroot);
            two_rho_coeffs = linalg::add_vec(&two_rho_coeffs, &p.root_coeffs);
        }

        let (ct_inv_num, ct_inv_den) = if r == 0 {
            (Vec::new(), 1)
        } else {
            let ct = linalg::to_rational_matrix(&linalg::transpose(&cartan));
            let inv = linalg::inverse_q(&ct).map_err(|_| Error::InvalidCartan("singular".into()))?;
            let den = inv
                .iter()
                .flatten()
                .fold(num_bigint::BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            let den_i = linalg::big_to_i64(&den, "Cartan inverse")?;
            let num = inv
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| linalg::big_to_i64(&(x * BigRational::from_integer(den.clone())).to_integer(), "Cartan inverse"))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<IMat>>()?;
            (num, den_i)
        };

        Ok(RootDatum {
            name: name.into(),
            labels,
            simple_roots,
            simple_coroots,
            cartan,
            positive,
            two_rho,
            two_rho_check,
            two_rho_coeffs,
            ct_inv_num,
            ct_inv_den,
            weyl_cache: OnceLock::new(),
        })
    }

    /// Datum of the simply connected (`Sc`) or adjoint (`Ad`) group with the
    /// given Cartan matrix, `C[i][j] = ⟨α_j, α_i^∨⟩`.
    pub fn from_cartan(name: impl Into<String>, cartan: &IMat, lattice: Lattice) -> Result<Self> {
        let r = cartan.len();
        if r == 0 || cartan.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidCartan("must be a nonempty square matrix".into()));
        }
        validate_cartan(cartan)?;
        let unit = |i: usize| (0..r).map(|k| i64::from(k == i)).collect::<Vec<_>>();
        let (roots, coroots, prefix) = match lattice {
            Lattice::Sc => (
                (0..r).map(|j| (0..r).map(|i| cartan[i][j]).collect()).collect(),
                (0..r).map(unit).collect(),
                "a",
            ),
            Lattice::Ad => ((0..r).map(unit).collect(), cartan.clone(), "w"),
        };
        let labels = (1..=r).map(|i| format!("{prefix}{i}^v")).collect();
        RootDatum::new(name, labels, roots, coroots)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    /// Rank of the lattice `X_*`.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }
    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn simple_roots(&self) -> &[Char] {
        &self.simple_roots
    }
    pub fn simple_coroots(&self) -> &[Cochar] {
        &self.simple_coroots
    }
    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }
    pub fn positive_roots(&self) -> impl Iterator<Item = &Char> {
        self.positive.iter().map(|p| &p.root)
    }
    pub fn positive_coroots(&self) -> impl Iterator<Item = &Cochar> {
        self.positive.iter().map(|p| &p.coroot)
    }
    /// Simple-coroot coordinates of each positive coroot, in storage order.
    pub fn positive_coroot_coeffs(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.positive.iter().map(|p| &p.coroot_coeffs)
    }
    pub fn num_positive_roots(&self) -> usize {
        self.positive.len()
    }
    pub fn two_rho(&self) -> &Char {
        &self.two_rho
    }
    pub fn two_rho_check(&self) -> &Cochar {
        &self.two_rho_check
    }
    /// Coordinates of `2ρ` in the basis of simple roots.
    pub fn two_rho_simple_coeffs(&self) -> &[i64] {
        &self.two_rho_coeffs
    }

    pub fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// Root datum with roots and coroots exchanged.
    pub fn dual(&self) -> Result<RootDatum> {
        RootDatum::new(
            format!("dual({})", self.name),
            self.labels.iter().map(|l| format!("{l}*")).collect(),
            self.simple_coroots.clone(),
            self.simple_roots.clone(),
        )
    }

    pub fn simple_reflect(&self, i: usize, lambda: &[i64]) -> Cochar {
        let c = dot(&self.simple_roots[i], lambda);
        lambda
            .iter()
            .zip(&self.simple_coroots[i])
            .map(|(x, a)| x - c * a)
            .collect()
    }

    pub fn reflection_matrix(&self, i: usize) -> IMat {
        let n = self.rank();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| i64::from(r == c) - self.simple_coroots[i][r] * self.simple_roots[i][c])
                    .collect()
            })
            .collect()
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| dot(a, lambda) >= 0)
    }

    /// Ascend to the dominant chamber, applying the lowest-index simple
    /// reflection with negative pairing at each step. Returns the dominant
    /// vector and the indices applied, in order.
    pub fn ascend(&self, lambda: &[i64]) -> (Cochar, Vec<usize>) {
        let mut v = lambda.to_vec();
        let mut applied = Vec::new();
        while let Some(i) = (0..self.semisimple_rank()).find(|&i| dot(&self.simple_roots[i], &v) < 0) {
            v = self.simple_reflect(i, &v);
            applied.push(i);
        }
        (v, applied)
    }

    pub fn dominant(&self, lambda: &[i64]) -> Cochar {
        self.ascend(lambda).0
    }

    /// `(λ_dom, w)` with `w·λ = λ_dom` dominant.
    pub fn dominant_representative(&self, lambda: &[i64]) -> Result<(Cochar, WeylElement)> {
        self.check_len(lambda)?;
        let (dom, applied) = self.ascend(lambda);
        let word: Vec<usize> = applied.into_iter().rev().collect();
        Ok((dom, self.weyl_from_word(&word)?))
    }

    /// Coordinates of `d` in the basis of simple coroots, if `d` lies in the
    /// coroot lattice.
    pub fn coroot_coords(&self, d: &[i64]) -> Option<Vec<i64>> {
        let r = self.semisimple_rank();
        let p: Vec<i128> = self.simple_roots.iter().map(|a| dot(a, d) as i128).collect();
        let mut c = Vec::with_capacity(r);
        for i in 0..r {
            let s: i128 = (0..r).map(|k| self.ct_inv_num[i][k] as i128 * p[k]).sum();
            if s % self.ct_inv_den as i128 != 0 {
                return None;
            }
            c.push((s / self.ct_inv_den as i128) as i64);
        }
        let mut back = vec![0; self.rank()];
        for (ci, co) in c.iter().zip(&self.simple_coroots) {
            for (b, x) in back.iter_mut().zip(co) {
                *b += ci * x;
            }
        }
        (back == d).then_some(c)
    }

    /// `λ ≤ μ` in the dominance order.
    pub fn dominance_leq(&self, lambda: &[i64], mu: &[i64]) -> bool {
        if lambda.len() != self.rank() || mu.len() != self.rank() {
            return false;
        }
        match self.coroot_coords(&linalg::sub_vec(mu, lambda)) {
            Some(c) => c.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// Height of `μ - λ` when it lies in the coroot lattice.
    pub fn height_between(&self, lambda: &[i64], mu: &[i64]) -> Option<i64> {
        self.coroot_coords(&linalg::sub_vec(mu, lambda)).map(|c| c.iter().sum())
    }

    /// Exact `W`-orbit, sorted lexicographically.
    pub fn orbit(&self, lambda: &[i64]) -> Result<Vec<Cochar>> {
        self.check_len(lambda)?;
        let mut seen: HashSet<Cochar> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.to_vec());
        queue.push_back(lambda.to_vec());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.semisimple_rank() {
                if dot(&self.simple_roots[i], &v) == 0 {
                    continue;
                }
                let u = self.simple_reflect(i, &v);
                if seen.insert(u.clone()) {
                    if seen.len() > ORBIT_GUARD {
                        return Err(Error::CostGuard { what: "orbit size".into(), limit: ORBIT_GUARD });
                    }
                    queue.push_back(u);
                }
            }
        }
        let mut out: Vec<Cochar> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn weyl_identity(&self) -> WeylElement {
        WeylElement { matrix: linalg::identity(self.rank()), word: Vec::new() }
    }

    /// `s_{w[0]} s_{w[1]} ⋯` as a Weyl element (the last letter acts first).
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut m = linalg::identity(self.rank());
        for &i in word {
            if i >= self.semisimple_rank() {
                return Err(Error::InvalidWord(format!("index {} out of range", i + 1)));
            }
            m = mat_mul(&m, &self.reflection_matrix(i));
        }
        let word = self.canonical_word(&m);
        Ok(WeylElement { matrix: m, word })
    }

    /// Weyl element with the given matrix; fails if the matrix is not in `W`.
    pub fn weyl_from_matrix(&self, m: &IMat) -> Result<WeylElement> {
        if m.len() != self.rank() || m.iter().any(|r| r.len() != self.rank()) {
            return Err(Error::InvalidWord("matrix has wrong shape".into()));
        }
        let word = self.canonical_word(m);
        let e = self.weyl_from_word(&word)?;
        if &e.matrix != m {
            return Err(Error::InvalidWord("matrix is not a Weyl group element".into()));
        }
        Ok(e)
    }

    // Lexicographically smallest reduced word: repeatedly strip the smallest
    // left descent, read off from w(2ρ^∨).
    fn canonical_word(&self, m: &IMat) -> Vec<usize> {
        let v = mat_vec(m, &self.two_rho_check);
        let guard = self.positive.len() + 1;
        let (_, applied) = self.ascend(&v);
        debug_assert!(applied.len() < guard);
        applied
    }

    /// All of `W` in shortlex order of canonical words.
    pub fn weyl_group(&self) -> Result<Arc<Vec<WeylElement>>> {
        let cached = self.weyl_cache.get_or_init(|| self.enumerate_weyl().ok().map(Arc::new));
        cached
            .clone()
            .ok_or_else(|| Error::CostGuard { what: "Weyl group order".into(), limit: WEYL_GUARD })
    }

    pub fn weyl_order(&self) -> Result<usize> {
        Ok(self.weyl_group()?.len())
    }

    fn enumerate_weyl(&self) -> Result<Vec<WeylElement>> {
        let gens: Vec<usize> = (0..self.semisimple_rank()).collect();
        let elems = self.generate_subgroup(&gens, WEYL_GUARD)?;
        let mut out: Vec<WeylElement> = elems
            .into_iter()
            .map(|m| {
                let word = self.canonical_word(&m);
                WeylElement { matrix: m, word }
            })
            .collect();
        out.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
        Ok(out)
    }

    /// Matrices of the subgroup generated by the given simple reflections.
    pub fn generate_subgroup(&self, gens: &[usize], limit: usize) -> Result<Vec<IMat>> {
        let refl: Vec<IMat> = gens.iter().map(|&i| self.reflection_matrix(i)).collect();
        let mut seen: HashMap<Cochar, ()> = HashMap::new();
        let id = linalg::identity(self.rank());
        seen.insert(self.two_rho_check.clone(), ());
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for s in &refl {
                let next = mat_mul(&m, s);
                let key = mat_vec(&next, &self.two_rho_check);
                if seen.insert(key, ()).is_none() {
                    if out.len() >= limit {
                        return Err(Error::CostGuard { what: "Weyl group order".into(), limit });
                    }
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(out)
    }

    /// Fundamental coweights as rational vectors in the coroot span.
    pub fn fundamental_coweights(&self) -> Vec<Vec<BigRational>> {
        let r = self.semisimple_rank();
        if r == 0 {
            return Vec::new();
        }
        let c = linalg::to_rational_matrix(&self.cartan);
        let inv = linalg::inverse_q(&c).expect("finite-type Cartan matrix is invertible");
        (0..r)
            .map(|i| {
                let mut v = vec![BigRational::zero(); self.rank()];
                for (j, co) in self.simple_coroots.iter().enumerate() {
                    for (vk, &x) in v.iter_mut().zip(co) {
                        *vk += &inv[i][j] * rat(x);
                    }
                }
                v
            })
            .collect()
    }

    /// A cocharacter with the given pairings against the simple roots.
    pub fn cochar_with_labels(&self, labels: &[i64]) -> Result<Option<Cochar>> {
        if labels.len() != self.semisimple_rank() {
            return Err(Error::DimensionMismatch { expected: self.semisimple_rank(), got: labels.len() });
        }
        if self.semisimple_rank() == 0 {
            return Ok(Some(vec![0; self.rank()]));
        }
        linalg::solve_z(&self.simple_roots, self.rank(), labels)
    }

    pub fn labels_of(&self, lambda: &[i64]) -> Vec<i64> {
        self.simple_roots.iter().map(|a| dot(a, lambda)).collect()
    }
}

fn validate_cartan(c: &IMat) -> Result<()> {
    let r = c.len();
    for i in 0..r {
        if c[i][i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
        }
        for j in 0..r {
            if i != j {
                if c[i][j] > 0 {
                    return Err(Error::InvalidCartan("positive off-diagonal entry".into()));
                }
                if (c[i][j] == 0) != (c[j][i] == 0) {
                    return Err(Error::InvalidCartan("zero pattern is not symmetric".into()));
                }
            }
        }
    }
    // symmetrize: d_i C[i][j] = d_j C[j][i]
    let mut d: Vec<Option<BigRational>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(BigRational::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                let dj = d[i].clone().unwrap() * rat(c[i][j]) / rat(c[j][i]);
                match &d[j] {
                    Some(x) if *x != dj => {
                        return Err(Error::InvalidCartan("not symmetrizable".into()));
                    }
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
    }
    let sym: Vec<Vec<BigRational>> = (0..r)
        .map(|i| (0..r).map(|j| d[i].clone().unwrap() * rat(c[i][j])).collect())
        .collect();
    for k in 1..=r {
        let minor: Vec<Vec<BigRational>> = sym[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !determinant_q(minor).is_positive() {
            return Err(Error::InvalidCartan("not of finite type".into()));
        }
    }
    Ok(())
}

fn determinant_q(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    det
}

fn close_positive(roots: &[Char], coroots: &[Cochar]) -> Result<Vec<PositivePair>> {
    let r = roots.len();
    let unit = |i: usize| (0..r).map(|k| i64::from(k == i)).collect::<Vec<_>>();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out: Vec<PositivePair> = Vec::new();
    let mut queue = VecDeque::new();
    for i in 0..r {
        let p = PositivePair {
            root: roots[i].clone(),
            coroot: coroots[i].clone(),
            root_coeffs: unit(i),
            coroot_coeffs: unit(i),
        };
        seen.insert(p.root_coeffs.clone());
        queue.push_back(p.clone());
        out.push(p);
    }
    while let Some(p) = queue.pop_front() {
        for j in 0..r {
            let c = dot(&p.root, &coroots[j]);
            let d = dot(&roots[j], &p.coroot);
            let mut rc = p.root_coeffs.clone();
            rc[j] -= c;
            if rc.iter().any(|&x| x < 0) || seen.contains(&rc) {
                continue;
            }
            let mut cc = p.coroot_coeffs.clone();
            cc[j] -= d;
            let q = PositivePair {
                root: p.root.iter().zip(&roots[j]).map(|(x, a)| x - c * a).collect(),
                coroot: p.coroot.iter().zip(&coroots[j]).map(|(x, a)| x - d * a).collect(),
                root_coeffs: rc.clone(),
                coroot_coeffs: cc,
            };
            seen.insert(rc);
            if out.len() > WEYL_GUARD {
                return Err(Error::InvalidCartan("root system is not finite".into()));
            }
            queue.push_back(q.clone());
            out.push(q);
        }
    }
    out.sort_by(|a, b| a.coroot.cmp(&b.coroot));
    Ok(out)
}

/// Element of the Weyl group acting on `X_*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: IMat,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }
    /// Canonical (shortlex) reduced word, zero-based indices.
    pub fn word(&self) -> &[usize] {
        &self.word
    }
    pub fn length(&self) -> usize {
        self.word.len()
    }
    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
    pub fn apply(&self, lambda: &[i64]) -> Cochar {
        mat_vec(&self.matrix, lambda)
    }
    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
    /// `s1s2…` with one-based indices, `e` for the identity.
    pub fn word_string(&self) -> String {
        word_to_string(&self.word)
    }
}

pub fn word_to_string(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

/// Parse `e`, `id`, `s1s2`, `s1 s2`, `1,2` or `[1,2]` into zero-based indices.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t == "e" || t == "id" {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidWord(s.to_string());
    let idx = |tok: &str| -> Result<usize> {
        let k: usize = tok.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(k - 1)
    };
    if t.contains('s') {
        t.split('s')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| idx(p.trim_matches(|c: char| c == ',' || c.is_whitespace())))
            .collect()
    } else {
        t.trim_matches(|c| c == '[' || c == ']')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(idx)
            .collect()
    }
}

/// Automorphism of the based root datum induced by a permutation of the
/// simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    theta: IMat,
    theta_dual: IMat,
    order: usize,
}

impl DiagramAutomorphism {
    pub fn identity(d: &RootDatum) -> Self {
        DiagramAutomorphism {
            perm: (0..d.semisimple_rank()).collect(),
            theta: linalg::identity(d.rank()),
            theta_dual: linalg::identity(d.rank()),
            order: 1,
        }
    }
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }
    /// Action on `X_*`.
    pub fn matrix(&self) -> &IMat {
        &self.theta
    }
    /// Action on `X^*` (inverse transpose).
    pub fn dual_matrix(&self) -> &IMat {
        &self.theta_dual
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn is_identity(&self) -> bool {
        self.order == 1
    }
    pub fn apply(&self, lambda: &[i64]) -> Cochar {
        mat_vec(&self.theta, lambda)
    }
}

/// Lattice automorphism of `X_*` sending `α_i^∨` to `α_{perm(i)}^∨`. On the
/// central part it acts by `+1` if that is integral, otherwise by `-1`.
pub fn automorphism_from_permutation(d: &RootDatum, perm: &[usize]) -> Result<DiagramAutomorphism> {
    let r = d.semisimple_rank();
    let n = d.rank();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if perm.len() != r || sorted != (0..r).collect::<Vec<_>>() {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    let c = d.cartan();
    for i in 0..r {
        for j in 0..r {
            if c[perm[i]][perm[j]] != c[i][j] {
                return Err(Error::InvalidPermutation(perm.to_vec()));
            }
        }
    }
    let roots_q = linalg::to_rational_matrix(&d.simple_roots);
    let center = linalg::kernel_q(&roots_q, n);
    // columns: simple coroots then a basis of the center
    let mut basis_cols: Vec<Vec<BigRational>> =
        d.simple_coroots.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect();
    basis_cols.extend(center.iter().cloned());
    let basis = transpose_q(&basis_cols);
    let basis_inv = linalg::inverse_q(&basis)?;

    for sign in [1i64, -1] {
        let mut target_cols: Vec<Vec<BigRational>> = (0..r)
            .map(|i| d.simple_coroots[perm[i]].iter().map(|&x| rat(x)).collect())
            .collect();
        target_cols.extend(center.iter().map(|z| z.iter().map(|x| x * rat(sign)).collect()));
        let target = transpose_q(&target_cols);
        let theta_q = mul_q(&target, &basis_inv);
        let Some(theta) = integral(&theta_q) else { continue };
        let theta_inv_q = mul_q(&basis, &linalg::inverse_q(&target)?);
        let Some(theta_inv) = integral(&theta_inv_q) else { continue };
        let theta_dual = linalg::transpose(&theta_inv);
        let id = linalg::identity(n);
        let mut power = theta.clone();
        let mut order = 1;
        while power != id {
            power = mat_mul(&power, &theta);
            order += 1;
            if order > 1000 {
                return Err(Error::InvalidPermutation(perm.to_vec()));
            }
        }
        return Ok(DiagramAutomorphism { perm: perm.to_vec(), theta, theta_dual, order });
    }
    Err(Error::InvalidPermutation(perm.to_vec()))
}

fn transpose_q(cols: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = cols.first().map_or(0, Vec::len);
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

fn mul_q(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..k).map(|l| &row[l] * &b[l][j]).sum()).collect())
        .collect()
}

fn integral(m: &[Vec<BigRational>]) -> Option<IMat> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    if x.is_integer() {
                        linalg::big_to_i64(&x.to_integer(), "automorphism").ok()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// Cartan matrix of a simple type in Bourbaki numbering.
pub fn cartan_matrix(letter: char, n: usize) -> Result<IMat> {
    let out_of_range = || Error::RankOutOfRange { family: letter.to_string(), rank: n };
    let valid = match letter {
        'A' => n >= 1,
        'B' | 'C' => n >= 2,
        'D' => n >= 3,
        'E' => (6..=8).contains(&n),
        'F' => n == 4,
        'G' => n == 2,
        _ => return Err(Error::UnknownGroup(letter.to_string())),
    };
    if !valid {
        return Err(out_of_range());
    }
    let mut c: IMat = linalg::scale_mat(&linalg::identity(n), 2);
    let edge = |c: &mut IMat, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match letter {
        'A' | 'B' | 'C' | 'F' => {
            for i in 0..n - 1 {
                edge(&mut c, i, i + 1);
            }
        }
        'D' => {
            for i in 0..n - 2 {
                edge(&mut c, i, i + 1);
            }
            edge(&mut c, n - 3, n - 1);
        }
        'E' => {
            edge(&mut c, 0, 2);
            edge(&mut c, 1, 3);
            for i in 2..n - 1 {
                edge(&mut c, i, i + 1);
            }
        }
        'G' => edge(&mut c, 0, 1),
        _ => unreachable!(),
    }
    match letter {
        'B' => c[n - 1][n - 2] = -2,
        'C' => c[n - 2][n - 1] = -2,
        'F' => c[2][1] = -2,
        'G' => c[0][1] = -3,
        _ => {}
    }
    Ok(c)
}

fn standard_basis_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

fn e(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k == i)).collect()
}

/// Standard based root datum for a named family.
///
/// Classical families take the matrix size (`GL_n`, `SL_n`, `PGL_n`,
/// `Sp_{2m}`, `SO_n`); simple types (`A`..`G`, optionally with the rank
/// embedded, e.g. `G2-sc`) take the rank and a lattice suffix `-sc` or
/// `-ad` (default `sc`).
pub fn preset(name: &str, n: usize) -> Result<RootDatum> {
    let upper = name.trim().to_ascii_uppercase();
    let range = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::RankOutOfRange { family: name.to_string(), rank: n })
        }
    };
    let diff = |n: usize, i: usize| linalg::sub_vec(&e(n, i), &e(n, i + 1));
    match upper.as_str() {
        "GL" => {
            range(n >= 1)?;
            let roots: Vec<_> = (0..n - 1).map(|i| diff(n, i)).collect();
            RootDatum::new(format!("GL{n}"), standard_basis_labels(n), roots.clone(), roots)
        }
        "SL" => {
            range(n >= 2)?;
            RootDatum::from_cartan(format!("SL{n}"), &cartan_matrix('A', n - 1)?, Lattice::Sc)
        }
        "PGL" => {
            range(n >= 2)?;
            RootDatum::from_cartan(format!("PGL{n}"), &cartan_matrix('A', n - 1)?, Lattice::Ad)
        }
        "SP" => {
            range(n >= 2 && n % 2 == 0)?;
            let m = n / 2;
            let mut roots: Vec<_> = (0..m - 1).map(|i| diff(m, i)).collect();
            let mut coroots = roots.clone();
            roots.push(linalg::scale_vec(&e(m, m - 1), 2));
            coroots.push(e(m, m - 1));
            RootDatum::new(format!("Sp{n}"), standard_basis_labels(m), roots, coroots)
        }
        "SO-ODD" | "SO_ODD" | "SOODD" => {
            range(n >= 3 && n % 2 == 1)?;
            let m = n / 2;
            let mut roots: Vec<_> = (0..m - 1).map(|i| diff(m, i)).collect();
            let mut coroots = roots.clone();
            roots.push(e(m, m - 1));
            coroots.push(linalg::scale_vec(&e(m, m - 1), 2));
            RootDatum::new(format!("SO{n}"), standard_basis_labels(m), roots, coroots)
        }
        "SO-EVEN" | "SO_EVEN" | "SOEVEN" => {
            range(n >= 4 && n % 2 == 0)?;
            let m = n / 2;
            let mut roots: Vec<_> = (0..m - 1).map(|i| diff(m, i)).collect();
            roots.push(linalg::add_vec(&e(m, m - 2), &e(m, m - 1)));
            RootDatum::new(format!("SO{n}"), standard_basis_labels(m), roots.clone(), roots)
        }
        _ => {
            let (ty, lattice) = match upper.split_once('-') {
                Some((t, l)) => (t.to_string(), l.parse::<Lattice>()?),
                None => (upper.clone(), Lattice::Sc),
            };
            let mut chars = ty.chars();
            let letter = chars.next().ok_or_else(|| Error::UnknownGroup(name.to_string()))?;
            if !('A'..='G').contains(&letter) {
                return Err(Error::UnknownGroup(name.to_string()));
            }
            let rest: String = chars.collect();
            let rank = if rest.is_empty() {
                n
            } else {
                let embedded: usize = rest.parse().map_err(|_| Error::UnknownGroup(name.to_string()))?;
                if n != 0 && n != embedded {
                    return Err(Error::RankOutOfRange { family: name.to_string(), rank: n });
                }
                embedded
            };
            let suffix = match lattice {
                Lattice::Sc => "sc",
                Lattice::Ad => "ad",
            };
            RootDatum::from_cartan(format!("{letter}{rank}-{suffix}"), &cartan_matrix(letter, rank)?, lattice)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_basics() {
        let d = preset("GL", 2).unwrap();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.positive_coroots().cloned().collect::<Vec<_>>(), vec![vec![1, -1]]);
        assert_eq!(d.num_positive_roots() * 2, 2);
    }

    #[test]
    fn sl3_two_rho_check() {
        let d = preset("SL", 3).unwrap();
        assert_eq!(d.num_positive_roots(), 3);
        // coroot coordinates: 2(α1^∨ + α2^∨)
        assert_eq!(d.two_rho_check(), &vec![2, 2]);
    }

    #[test]
    fn g2_positive_roots_by_closure() {
        // independent count: close the simple roots of the G2 Cartan matrix
        // under reflections directly on coefficient vectors
        let c = cartan_matrix('G', 2).unwrap();
        let mut seen: HashSet<Vec<i64>> = HashSet::from([vec![1, 0], vec![0, 1]]);
        let mut stack = vec![vec![1, 0], vec![0, 1]];
        while let Some(v) = stack.pop() {
            for j in 0..2 {
                // ⟨β, α_j^∨⟩ = Σ_k v_k C[j][k]
                let p: i64 = (0..2).map(|k| v[k] * c[j][k]).sum();
                let mut w = v.clone();
                w[j] -= p;
                if w.iter().all(|&x| x >= 0) && seen.insert(w.clone()) {
                    stack.push(w);
                }
            }
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(preset("G2-sc", 2).unwrap().num_positive_roots(), 6);
    }

    #[test]
    fn weyl_orders() {
        let cases = [("A-sc", 2, 6), ("B-ad", 2, 8), ("G-sc", 2, 12), ("A-ad", 3, 24), ("D-sc", 4, 192)];
        for (name, n, order) in cases {
            assert_eq!(preset(name, n).unwrap().weyl_order().unwrap(), order, "{name}{n}");
        }
    }

    #[test]
    fn f4_weyl_order_by_orbit_stabilizer() {
        let d = preset("F4", 4).unwrap();
        // |W| = |W·2ρ^∨| since 2ρ^∨ is regular
        let orbit = d.orbit(d.two_rho_check()).unwrap();
        assert_eq!(orbit.len(), 1152);
        assert_eq!(d.weyl_order().unwrap(), 1152);
    }

    #[test]
    fn e6_trips_weyl_guard() {
        let d = preset("E6", 6).unwrap();
        assert!(matches!(d.weyl_group(), Err(Error::CostGuard { .. })));
    }

    #[test]
    fn dominant_representative_gl2() {
        let d = preset("GL", 2).unwrap();
        let (dom, w) = d.dominant_representative(&[0, 1]).unwrap();
        assert_eq!(dom, vec![1, 0]);
        assert_eq!(w.word(), &[0]);
        let (dom, w) = d.dominant_representative(&[3, 1]).unwrap();
        assert_eq!(dom, vec![3, 1]);
        assert!(w.is_identity());
    }

    #[test]
    fn dominant_of_negative_fundamental_coweight_a2() {
        let d = preset("A-ad", 2).unwrap();
        let lambda = vec![-1, 0];
        let (dom, w) = d.dominant_representative(&lambda).unwrap();
        assert!(d.is_dominant(&dom));
        assert_eq!(w.apply(&lambda), dom);
        // orbit scan: the unique dominant element of the orbit
        let orbit = d.orbit(&lambda).unwrap();
        let doms: Vec<_> = orbit.iter().filter(|v| d.is_dominant(v)).collect();
        assert_eq!(doms, vec![&dom]);
        assert_eq!(dom, vec![0, 1]);
    }

    #[test]
    fn dominance_gl2() {
        let d = preset("GL", 2).unwrap();
        assert!(d.dominance_leq(&[0, 1], &[1, 0]));
        assert!(!d.dominance_leq(&[1, 1], &[1, 0]));
        assert!(!d.dominance_leq(&[1, 0], &[0, 1]));
    }

    #[test]
    fn dominance_a3_against_cone_enumeration() {
        let d = preset("A-ad", 3).unwrap();
        // brute force: enumerate ℕ-combinations of simple coroots up to height 8
        let mut cone: HashSet<Vec<i64>> = HashSet::new();
        for a in 0..=4i64 {
            for b in 0..=4i64 {
                for c in 0..=4i64 {
                    let mut v = vec![0; 3];
                    for (k, co) in [a, b, c].iter().zip(d.simple_coroots()) {
                        for (vi, x) in v.iter_mut().zip(co) {
                            *vi += k * x;
                        }
                    }
                    cone.insert(v);
                }
            }
        }
        let omega2 = vec![0, 1, 0];
        for x in -2..=2 {
            for y in -2..=2 {
                for z in -2..=2 {
                    let lam = vec![x, y, z];
                    let diff = linalg::sub_vec(&omega2, &lam);
                    let brute = cone.contains(&diff);
                    assert_eq!(d.dominance_leq(&lam, &omega2), brute, "{lam:?}");
                }
            }
        }
    }

    #[test]
    fn orbits() {
        let gl2 = preset("GL", 2).unwrap();
        assert_eq!(gl2.orbit(&[1, 0]).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        let a2 = preset("A-ad", 2).unwrap();
        assert_eq!(a2.orbit(&[1, 0]).unwrap().len(), 3);
        // short coweight of B2 has orbit of size 4
        let b2 = preset("B-ad", 2).unwrap();
        let sizes: Vec<usize> = [vec![1, 0], vec![0, 1]].iter().map(|v| b2.orbit(v).unwrap().len()).collect();
        assert_eq!(sizes, vec![4, 4]);
    }

    #[test]
    fn automorphisms() {
        let a2 = preset("A-sc", 2).unwrap();
        let id = automorphism_from_permutation(&a2, &[0, 1]).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.matrix(), &linalg::identity(2));
        let swap = automorphism_from_permutation(&a2, &[1, 0]).unwrap();
        assert_eq!(swap.order(), 2);
        assert_eq!(swap.apply(&a2.simple_coroots()[0]), a2.simple_coroots()[1]);

        let gl3 = preset("GL", 3).unwrap();
        let t = automorphism_from_permutation(&gl3, &[1, 0]).unwrap();
        // -w0: x ↦ -reverse(x)
        assert_eq!(t.apply(&[1, 0, 0]), vec![0, 0, -1]);
        assert_eq!(t.apply(&[1, 2, 3]), vec![-3, -2, -1]);

        let d4 = preset("D-sc", 4).unwrap();
        let tri = automorphism_from_permutation(&d4, &[2, 1, 3, 0]).unwrap();
        assert_eq!(tri.order(), 3);
        for i in 0..4 {
            assert_eq!(tri.apply(&d4.simple_coroots()[i]), d4.simple_coroots()[[2, 1, 3, 0][i]]);
        }
        assert!(automorphism_from_permutation(&preset("B-sc", 2).unwrap(), &[1, 0]).is_err());
    }

    #[test]
    fn reflection_relations() {
        for (name, n) in [("A-sc", 3), ("B-ad", 3), ("G2", 2), ("F4", 4), ("GL", 4)] {
            let d = preset(name, n).unwrap();
            let r = d.semisimple_rank();
            let id = linalg::identity(d.rank());
            for i in 0..r {
                let s = d.reflection_matrix(i);
                assert_eq!(mat_mul(&s, &s), id);
                for j in i + 1..r {
                    let m = match d.cartan()[i][j] * d.cartan()[j][i] {
                        0 => 2,
                        1 => 3,
                        2 => 4,
                        3 => 6,
                        _ => unreachable!(),
                    };
                    let st = mat_mul(&s, &d.reflection_matrix(j));
                    let mut p = id.clone();
                    for _ in 0..m {
                        p = mat_mul(&p, &st);
                    }
                    assert_eq!(p, id, "{name}: braid ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn words_roundtrip() {
        assert_eq!(parse_word("s1s2").unwrap(), vec![0, 1]);
        assert_eq!(parse_word("e").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_word("[2,1]").unwrap(), vec![1, 0]);
        assert!(parse_word("s0").is_err());
        let d = preset("A-sc", 2).unwrap();
        let w = d.weyl_from_word(&[1, 0, 1]).unwrap();
        // s2 s1 s2 = s1 s2 s1, shortlex picks s1s2s1
        assert_eq!(w.word(), &[0, 1, 0]);
        assert_eq!(d.weyl_from_matrix(w.matrix()).unwrap(), w);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(preset("XYZ", 2), Err(Error::UnknownGroup(_))));
        assert!(matches!(preset("SL", 1), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(preset("E", 5), Err(Error::RankOutOfRange { .. })));
        assert!(RootDatum::from_cartan("bad", &vec![vec![2, -2], vec![-2, 2]], Lattice::Sc).is_err());
        assert!(RootDatum::from_cartan("bad", &vec![vec![2, -1], vec![0, 2]], Lattice::Sc).is_err());
    }

    #[test]
    fn dual_swaps() {
        let b2 = preset("SO-odd", 5).unwrap();
        let c2 = b2.dual().unwrap();
        assert_eq!(c2.simple_roots(), b2.simple_coroots());
        assert_eq!(c2.weyl_order().unwrap(), 8);
    }
}

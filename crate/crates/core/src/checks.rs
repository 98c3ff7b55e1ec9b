//! Identity suites: every structural property of the library checked on a
//! set of groups with seeded random samples.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cyclotomic::{format_rational, TorusPointFiniteOrder};
use crate::error::{Error, Result};
use crate::group_spec::GroupSpec;
use crate::kottwitz::{self, coweight_from_labels, to_rational_vec};
use crate::lefschetz::{self, ParabolicType};
use crate::linalg::{self, mat_mul, IMat};
use crate::root_datum::{Cochar, RootDatum};
use crate::spectral::{self, AbelianCentralizer, PacketDatum};
use crate::transfer::{self, ClassFunction, ClassPoint, HeckeTransfer, Side};
use crate::weights::{self, Minimality, WeightFunction};

pub const DEFAULT_SEED: u64 = 1;

pub const SUITES: &[&str] = &["all", "gl2-paper", "root_datum", "weights", "kottwitz", "transfer", "lefschetz", "spectral"];

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub id: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// Timings are left out unless asked for, so that reports are
    /// reproducible byte for byte.
    pub fn to_json(&self, timings: bool) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = json!({"id": e.id, "status": if e.pass { "pass" } else { "fail" }, "lhs": e.lhs, "rhs": e.rhs});
                if timings {
                    v["elapsed_ms"] = json!(e.elapsed.as_secs_f64() * 1000.0);
                }
                v
            })
            .collect();
        json!({"suite": self.suite, "seed": self.seed, "pass": self.pass(), "entries": entries})
    }

    pub fn to_tsv(&self, timings: bool) -> String {
        let mut out = String::from(if timings { "id\tstatus\tlhs\trhs\telapsed_ms\n" } else { "id\tstatus\tlhs\trhs\n" });
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\t{}", e.id, if e.pass { "pass" } else { "fail" }, e.lhs, e.rhs));
            if timings {
                out.push_str(&format!("\t{:.3}", e.elapsed.as_secs_f64() * 1000.0));
            }
            out.push('\n');
        }
        out
    }
}

struct Runner {
    entries: Vec<CheckEntry>,
}

impl Runner {
    /// Records a check; cost-guard refusals abort the whole run.
    fn check<F>(&mut self, id: String, f: F) -> Result<()>
    where
        F: FnOnce() -> Result<(bool, String, String)>,
    {
        let start = Instant::now();
        let (pass, lhs, rhs) = match f() {
            Ok(r) => r,
            Err(e @ Error::CostGuard { .. }) => return Err(e),
            Err(e) => (false, format!("error: {e}"), String::new()),
        };
        self.entries.push(CheckEntry { id, pass, lhs, rhs, elapsed: start.elapsed() });
        Ok(())
    }
}

fn eq<T: std::fmt::Display + PartialEq>(a: T, b: T) -> (bool, String, String) {
    (a == b, a.to_string(), b.to_string())
}

fn counted(ok: usize, total: usize) -> (bool, String, String) {
    (ok == total, format!("{ok} ok"), format!("{total} cases"))
}

/// Groups used when no group is given.
pub fn default_groups() -> Result<Vec<(String, GroupSpec)>> {
    let mut out = Vec::new();
    for (label, fam, n) in [
        ("GL2", "GL", 2),
        ("GL3", "GL", 3),
        ("A2-sc", "A-sc", 2),
        ("SO5", "SO-odd", 5),
        ("Sp4", "Sp", 4),
        ("G2-sc", "G-sc", 2),
    ] {
        out.push((label.to_string(), GroupSpec::preset(fam, n)?));
    }
    let mut twisted = GroupSpec::preset("A-ad", 2)?;
    twisted.theta = crate::root_datum::automorphism_from_permutation(&twisted.datum, &[1, 0])?;
    out.push(("A2-ad/theta".to_string(), twisted));
    Ok(out)
}

pub fn run_suite(name: &str, groups: &[(String, GroupSpec)], seed: u64) -> Result<CheckReport> {
    if !SUITES.contains(&name) {
        return Err(Error::Invalid(format!("unknown suite `{name}`; known: {}", SUITES.join(", "))));
    }
    let defaults;
    let groups = if groups.is_empty() {
        defaults = default_groups()?;
        &defaults[..]
    } else {
        groups
    };
    let mut r = Runner { entries: Vec::new() };
    let want = |s: &str| name == "all" || name == s;
    if want("gl2-paper") {
        gl2_paper(&mut r)?;
    }
    if want("kottwitz") {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        coinvariant_oracle_check(&mut r, &mut rng)?;
    }
    for (label, g) in groups {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_label(label));
        if want("root_datum") {
            root_datum_checks(&mut r, label, g, &mut rng)?;
        }
        if want("weights") {
            weight_checks(&mut r, label, g, &mut rng)?;
        }
        if want("kottwitz") {
            kottwitz_checks(&mut r, label, g, &mut rng)?;
        }
        if want("transfer") {
            transfer_checks(&mut r, label, g, &mut rng)?;
        }
        if want("lefschetz") {
            lefschetz_checks(&mut r, label, g, &mut rng)?;
        }
        if want("spectral") {
            spectral_checks(&mut r, label, g, &mut rng)?;
        }
    }
    Ok(CheckReport { suite: name.to_string(), seed, entries: r.entries })
}

fn hash_label(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// Dominant cocharacters with Dynkin labels in `0..=max`, where integral.
pub fn dominant_samples(d: &RootDatum, max: i64) -> Result<Vec<Cochar>> {
    let r = d.semisimple_rank();
    let mut out = Vec::new();
    let mut labels = vec![0i64; r];
    loop {
        if let Some(mu) = d.cochar_with_labels(&labels)? {
            out.push(mu);
        }
        let mut i = 0;
        while i < r && labels[i] == max {
            labels[i] = 0;
            i += 1;
        }
        if i == r {
            return Ok(out);
        }
        labels[i] += 1;
    }
}

fn random_cochar(d: &RootDatum, rng: &mut ChaCha8Rng, bound: i64) -> Cochar {
    (0..d.rank()).map(|_| rng.gen_range(-bound..=bound)).collect()
}

fn small_dominants(d: &RootDatum, max_dim: i64) -> Result<Vec<Cochar>> {
    let bound = BigInt::from(max_dim);
    Ok(dominant_samples(d, 2)?
        .into_iter()
        .filter(|mu| weights::weyl_dim(d, mu).map_or(false, |k| k <= bound))
        .collect())
}

fn gl2_paper(r: &mut Runner) -> Result<()> {
    let g = GroupSpec::preset("GL", 2)?;
    let d = &g.datum;
    let mu = vec![1, 0];
    let ell = transfer::TorusType::from_word(d, &[0], &g.theta)?;
    r.check("gl2-paper/kernel".into(), || {
        let k = transfer::transfer_kernel(d, &mu, &ell)?;
        let vals = k.value_multiset();
        Ok((vals == vec![BigInt::from(2)], format!("{vals:?}"), "[2]".into()))
    })?;
    r.check("gl2-paper/doubling".into(), || {
        let h = HeckeTransfer::new(d, &g.theta, &mu, &[ell.clone()])?;
        let f = ClassFunction::delta(ClassPoint::g("s1", "g"));
        let out = h.g_to_j(&f)?;
        let vals: Vec<String> = out.iter().map(|(_, v)| format_rational(v)).collect();
        Ok((vals == vec!["2".to_string()], vals.join(","), "2".into()))
    })?;
    r.check("gl2-paper/sign".into(), || {
        let (l, rr) = kottwitz::sign_identity(d, &to_rational_vec(&mu), None)?;
        Ok((l == -1 && rr == -1, format!("{l}"), format!("{rr}")))
    })?;
    r.check("gl2-paper/dimension".into(), || Ok(eq(kottwitz::shtuka_dimension(d, &mu)?, 1)))?;
    r.check("gl2-paper/weights".into(), || {
        let f = weights::weight_multiplicities(d, &mu)?;
        let expect = WeightFunction::from_pairs([(vec![1, 0], BigInt::from(1)), (vec![0, 1], BigInt::from(1))]);
        Ok((f == expect, f.to_json().to_string(), expect.to_json().to_string()))
    })?;
    r.check("gl2-paper/pi1".into(), || {
        let (grp, _) = kottwitz::pi1(d)?;
        Ok(eq(grp.to_string(), "Z".to_string()))
    })?;
    r.check("gl2-paper/basic-class".into(), || {
        let b = kottwitz::basic_class_of(d, &g.theta, &mu)?;
        Ok((b.element.len() == 1 && b.element[0].abs() == 1, format!("{:?}", b.element), "±1 in Z".into()))
    })?;
    let s = AbelianCentralizer::new(2, vec![vec![1, 1]])?;
    r.check("gl2-paper/hom".into(), || Ok(eq(spectral::hom_multiplicity(d, &mu, &s, &[1])?, BigInt::from(2))))?;
    r.check("gl2-paper/averaging".into(), || {
        let a = spectral::averaging_multiplicity(d, &mu, &s, &[1])?;
        Ok(eq(format_rational(&a), "2".into()))
    })?;
    r.check("gl2-paper/rhs".into(), || {
        let packet = PacketDatum::new(&s, BTreeMap::from([("rho".to_string(), vec![0])]))?;
        let rhs = spectral::kottwitz_rhs(d, &mu, &s, &packet, &[1])?;
        Ok(eq(rhs["rho"].clone(), BigInt::from(-2)))
    })?;
    r.check("gl2-paper/vanishing".into(), || {
        let b = kottwitz::basic_class_of(d, &g.theta, &mu)?;
        let other = vec![b.element[0] + 1];
        let ok = transfer::vanishing_check(d, &g.theta, &mu, &other, &[ell.clone()])?
            && transfer::transfer_kernel_for_class(d, &g.theta, &mu, &ell, &other)?.is_zero();
        Ok((ok, format!("{ok}"), "true".into()))
    })?;
    Ok(())
}

fn root_datum_checks(r: &mut Runner, label: &str, g: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = &g.datum;
    let samples: Vec<Cochar> = (0..20).map(|_| random_cochar(d, rng, 3)).collect();
    r.check(format!("root_datum/dominant-representative/{label}"), || {
        let mut ok = 0;
        for l in &samples {
            let (dom, w) = d.dominant_representative(l)?;
            let orbit = d.orbit(l)?;
            if d.is_dominant(&dom) && w.apply(l) == dom && orbit.contains(&dom) && d.orbit(&dom)? == orbit {
                ok += 1;
            }
        }
        Ok(counted(ok, samples.len()))
    })?;
    r.check(format!("root_datum/dominance-partial-order/{label}"), || {
        let pool: Vec<Cochar> = (0..12).map(|_| random_cochar(d, rng, 2)).chain(samples.iter().take(4).cloned()).collect();
        let mut bad = 0;
        for a in &pool {
            if !d.dominance_leq(a, a) {
                bad += 1;
            }
            for b in &pool {
                if a != b && d.dominance_leq(a, b) && d.dominance_leq(b, a) {
                    bad += 1;
                }
                for c in &pool {
                    if d.dominance_leq(a, b) && d.dominance_leq(b, c) && !d.dominance_leq(a, c) {
                        bad += 1;
                    }
                }
            }
        }
        Ok(eq(bad, 0))
    })?;
    r.check(format!("root_datum/coxeter-relations/{label}"), || {
        let id = linalg::identity(d.rank());
        let k = d.semisimple_rank();
        let mut bad = 0;
        for i in 0..k {
            let s = d.reflection_matrix(i);
            if mat_mul(&s, &s) != id {
                bad += 1;
            }
            for j in i + 1..k {
                let m = match d.cartan()[i][j] * d.cartan()[j][i] {
                    0 => 2,
                    1 => 3,
                    2 => 4,
                    _ => 6,
                };
                let st = mat_mul(&s, &d.reflection_matrix(j));
                let p = (0..m).fold(id.clone(), |acc, _| mat_mul(&acc, &st));
                if p != id {
                    bad += 1;
                }
            }
        }
        Ok(eq(bad, 0))
    })?;
    r.check(format!("root_datum/weyl-order/{label}"), || {
        let n = d.weyl_order()?;
        Ok(eq(n, classical_weyl_order(d)?))
    })?;
    Ok(())
}

/// `|W|` from the Cartan type of each simple component.
pub fn classical_weyl_order(d: &RootDatum) -> Result<usize> {
    let c = d.cartan();
    let r = c.len();
    let mut seen = vec![false; r];
    let mut order = 1usize;
    for start in 0..r {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..r {
                if !seen[j] && c[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        let n = comp.len();
        let fact = |m: usize| (1..=m).product::<usize>();
        let edges: Vec<i64> = comp
            .iter()
            .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| i < j && c[i][j] != 0)
            .map(|(i, j)| c[i][j] * c[j][i])
            .collect();
        let degree = |i: usize| comp.iter().filter(|&&j| j != i && c[i][j] != 0).count();
        let branch = comp.iter().any(|&i| degree(i) == 3);
        order *= if edges.contains(&3) {
            12
        } else if edges.contains(&2) {
            if n == 4 && comp.iter().all(|&i| degree(i) <= 2) && {
                // F4 has its double edge in the middle of the chain
                let double = comp.iter().copied().find(|&i| comp.iter().any(|&j| c[i][j] * c[j][i] == 2)).unwrap();
                degree(double) == 2
            } {
                1152
            } else {
                (1usize << n) * fact(n)
            }
        } else if branch {
            match n {
                6 => 51840,
                7 => 2903040,
                8 => 696729600,
                _ => (1usize << (n - 1)) * fact(n),
            }
        } else {
            fact(n + 1)
        };
    }
    Ok(order)
}

fn weight_checks(r: &mut Runner, label: &str, g: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = &g.datum;
    let mus = small_dominants(d, 300)?;
    r.check(format!("weights/mass/{label}"), || {
        let mut ok = 0;
        for mu in &mus {
            if weights::weight_multiplicities(d, mu)?.mass() == weights::weyl_dim(d, mu)? {
                ok += 1;
            }
        }
        Ok(counted(ok, mus.len()))
    })?;
    r.check(format!("weights/weyl-invariance/{label}"), || {
        let w = d.weyl_group()?;
        let mut bad = 0;
        for mu in mus.iter().take(6) {
            let f = weights::weight_multiplicities(d, mu)?;
            for (l, m) in f.iter() {
                let x = w.choose(rng).expect("W is nonempty");
                if f.get(&x.apply(l)) != *m {
                    bad += 1;
                }
            }
        }
        Ok(eq(bad, 0))
    })?;
    r.check(format!("weights/minimal-shape/{label}"), || {
        let mut ok = 0;
        let mut total = 0;
        for i in 0..d.semisimple_rank() {
            let mut labels = vec![0; d.semisimple_rank()];
            labels[i] = 1;
            let candidates: Vec<Cochar> = d.cochar_with_labels(&labels)?.into_iter().chain(highest_coroot(d)).collect();
            for mu in candidates {
                total += 1;
                let support = weights::weight_support(d, &mu)?;
                let f = weights::weight_multiplicities(d, &mu)?;
                let orbit = d.orbit(&mu)?;
                let good = match weights::classify_minimal(d, &mu)? {
                    Minimality::Minuscule => support == orbit && f.iter().all(|(_, m)| *m == BigInt::from(1)),
                    Minimality::QuasiMinuscule(_) => {
                        let mut with_zero = orbit.clone();
                        with_zero.push(vec![0; d.rank()]);
                        with_zero.sort();
                        support == with_zero
                    }
                    Minimality::NotMinimal => support.len() > orbit.len() + 1,
                };
                if good {
                    ok += 1;
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("weights/convolution/{label}"), || {
        let small = small_dominants(d, 30)?;
        let mut ok = 0;
        let trials = 6;
        for _ in 0..trials {
            let a = small.choose(rng).expect("zero is always a sample");
            let b = small.choose(rng).expect("zero is always a sample");
            let conv = weights::weight_multiplicities(d, a)?.convolve(&weights::weight_multiplicities(d, b)?);
            let bk = weights::weights_of_sum(d, &weights::tensor_decompose(d, a, b)?)?;
            if conv == bk {
                ok += 1;
            }
        }
        Ok(counted(ok, trials))
    })?;
    r.check(format!("weights/character-oracle/{label}"), || {
        let mut ok = 0;
        let mut total = 0;
        let mut tries = 0;
        while total < 8 && tries < 200 {
            tries += 1;
            let n = rng.gen_range(2..=12u64);
            let s = TorusPointFiniteOrder::new(n, (0..d.rank()).map(|_| rng.gen_range(0..n as i64)).collect())?;
            if !weights::is_regular_point(d, &s)? {
                continue;
            }
            let mu = mus.choose(rng).expect("zero is always a sample");
            total += 1;
            if weights::character_eval(d, mu, &s)? == weights::weyl_character_oracle(d, mu, &s)? {
                ok += 1;
            }
        }
        Ok(counted(ok, total))
    })?;
    if d.semisimple_rank() <= 3 {
        r.check(format!("weights/kostant-oracle/{label}"), || {
            let mut ok = 0;
            let mut total = 0;
            for mu in small_dominants(d, 100)? {
                let f = weights::weight_multiplicities(d, &mu)?;
                let mut p = weights::PartitionFunction::new(d);
                for l in weights::dominant_weights_below(d, &mu)? {
                    total += 1;
                    if weights::kostant_with(d, &mu, &l, &mut p)? == f.get(&l) {
                        ok += 1;
                    }
                }
            }
            Ok(counted(ok, total))
        })?;
    }
    Ok(())
}

fn highest_coroot(d: &RootDatum) -> Option<Cochar> {
    d.positive_coroots().find(|c| d.is_dominant(c) && d.labels_of(c).iter().any(|&l| l >= 2)).cloned()
}

/// Free rank and invariant factors of `ℤ^n / ⟨rows⟩` from determinantal
/// divisors (gcds of `k × k` minors).
pub fn determinantal_quotient(rows: &[Vec<i64>], n: usize) -> (usize, Vec<BigInt>) {
    let rank = if rows.is_empty() { 0 } else { linalg::rank_q(&rows.to_vec()) };
    let mut divisors = vec![BigInt::from(1)];
    for k in 1..=rank {
        let mut g = BigInt::zero();
        for rs in subsets(rows.len(), k) {
            for cs in subsets(n, k) {
                let m: Vec<Vec<BigRational>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| linalg::rat(rows[i][j])).collect())
                    .collect();
                g = num_integer::Integer::gcd(&g, &det(m).to_integer());
            }
        }
        divisors.push(g);
    }
    let factors = (1..=rank).map(|k| &divisors[k] / &divisors[k - 1]).filter(|f| *f != BigInt::from(1)).collect();
    (n - rank, factors)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut acc = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let x = &f * &m[c][j];
                m[i][j] -= x;
            }
        }
    }
    acc
}

fn coinvariant_oracle_check(r: &mut Runner, rng: &mut ChaCha8Rng) -> Result<()> {
    r.check("kottwitz/coinvariants-oracle".into(), || {
        let trials = 25;
        let mut ok = 0;
        for _ in 0..trials {
            let n = rng.gen_range(1..=6usize);
            let k = rng.gen_range(0..=n);
            let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
            let (grp, proj) = kottwitz::quotient(n, &rows)?;
            let (free, factors) = determinantal_quotient(&rows, n);
            let ours: Vec<BigInt> = grp.torsion().iter().map(|&t| BigInt::from(t)).collect();
            let relations_vanish = rows.iter().all(|row| proj.apply(row).map_or(false, |x| x == grp.zero()));
            if grp.free_rank() == free && ours == factors && relations_vanish {
                ok += 1;
            }
        }
        Ok(counted(ok, trials))
    })
}

fn kottwitz_checks(r: &mut Runner, label: &str, g: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = &g.datum;
    r.check(format!("kottwitz/kappa-coset/{label}"), || {
        let (_, proj) = kottwitz::pi1_coinvariants(d, &g.theta)?;
        let mut ok = 0;
        let mut total = 0;
        for mu in small_dominants(d, 100)? {
            let b = kottwitz::basic_class_of(d, &g.theta, &mu)?;
            for l in weights::weight_support(d, &mu)? {
                total += 1;
                if proj.apply(&l)? == b.element {
                    ok += 1;
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("kottwitz/sign-lift-independence/{label}"), || {
        let mut ok = 0;
        let mut total = 0;
        for i in 0..d.semisimple_rank() {
            let mut labels = vec![0; d.semisimple_rank()];
            labels[i] = 1;
            let nu = coweight_from_labels(d, &labels)?;
            for _ in 0..4 {
                let shift: Vec<i64> = (0..d.semisimple_rank()).map(|_| rng.gen_range(-3..=3)).collect();
                let mut other = nu.clone();
                for (c, co) in shift.iter().zip(d.simple_coroots()) {
                    for (o, &x) in other.iter_mut().zip(co) {
                        *o += linalg::rat(c * x);
                    }
                }
                total += 1;
                if kottwitz::kottwitz_sign(d, &nu)? == kottwitz::kottwitz_sign(d, &other)? {
                    ok += 1;
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("kottwitz/sign-identity/{label}"), || {
        let mut ok = 0;
        let k = d.semisimple_rank();
        for i in 0..k {
            let mut labels = vec![0; k];
            labels[i] = 1;
            let (l, rr) = kottwitz::sign_identity(d, &coweight_from_labels(d, &labels)?, None)?;
            if l == rr {
                ok += 1;
            }
        }
        Ok(counted(ok, k))
    })?;
    Ok(())
}

fn random_class_function(points: &[ClassPoint], side: Side, rng: &mut ChaCha8Rng) -> Result<ClassFunction> {
    let mut f = ClassFunction::zero(side);
    for p in points {
        if rng.gen_bool(0.6) {
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=5);
            f.add_at(p.clone(), BigRational::new(num.into(), den.into()))?;
        }
    }
    Ok(f)
}

/// `(⟨T^{J→G} f′, g⟩, ⟨f′, T^{G→J} g⟩)` on random functions.
pub fn adjointness_sample(h: &HeckeTransfer, labels: &[String], rng: &mut ChaCha8Rng) -> Result<(BigRational, BigRational)> {
    let g_points: Vec<ClassPoint> =
        h.tori().flat_map(|t| labels.iter().map(move |l| ClassPoint::g(t.id(), l))).collect();
    let j_points = h.j_points(labels)?;
    let fj = random_class_function(&j_points, Side::J, rng)?;
    let gg = random_class_function(&g_points, Side::G, rng)?;
    let lhs = transfer::pairing(&h.j_to_g(&fj)?, &gg)?;
    let rhs = transfer::pairing(&fj, &h.g_to_j(&gg)?)?;
    Ok((lhs, rhs))
}

fn transfer_checks(r: &mut Runner, label: &str, g: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = &g.datum;
    let tori = g.torus_catalog()?;
    let mus = small_dominants(d, 60)?;
    r.check(format!("transfer/adjointness/{label}"), || {
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        let mut ok = 0;
        let trials = 10;
        for _ in 0..trials {
            let mu = mus.choose(rng).expect("zero is always a sample");
            let h = HeckeTransfer::new(d, &g.theta, mu, &tori)?;
            let (a, b) = adjointness_sample(&h, &labels, rng)?;
            if a == b {
                ok += 1;
            }
        }
        Ok(counted(ok, trials))
    })?;
    r.check(format!("transfer/kernel-mass/{label}"), || {
        let mut ok = 0;
        let mut total = 0;
        for mu in &mus {
            let dim = weights::weyl_dim(d, mu)?;
            for t in &tori {
                total += 1;
                if transfer::transfer_kernel(d, mu, t)?.mass() == dim {
                    ok += 1;
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("transfer/conjugacy-invariance/{label}"), || {
        let w_all = d.weyl_group()?;
        let th = g.theta.matrix();
        let th_inv = (1..g.theta.order()).fold(linalg::identity(d.rank()), |acc, _| mat_mul(&acc, th));
        let mut ok = 0;
        let mut total = 0;
        for t in &tori {
            for _ in 0..3 {
                let x = w_all.choose(rng).expect("W is nonempty");
                let x_inv = inverse_matrix(d, x.word())?;
                let conj: IMat = mat_mul(&mat_mul(x.matrix(), t.weyl_element().matrix()), &mat_mul(&mat_mul(th, &x_inv), &th_inv));
                let t2 = transfer::TorusType::new(d, d.weyl_from_matrix(&conj)?, &g.theta)?;
                let mu = mus.choose(rng).expect("zero is always a sample");
                total += 1;
                if transfer::transfer_kernel(d, mu, t)?.value_multiset() == transfer::transfer_kernel(d, mu, &t2)?.value_multiset() {
                    ok += 1;
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("transfer/support-constraint/{label}"), || {
        let (_, proj) = kottwitz::pi1_coinvariants(d, &g.theta)?;
        let mut ok = 0;
        let mut total = 0;
        for mu in &mus {
            let b = kottwitz::basic_class_of(d, &g.theta, mu)?;
            for t in &tori {
                for nu in transfer::transfer_kernel(d, mu, t)?.values.keys() {
                    total += 1;
                    if t.kappa().push_forward(&proj, nu)? == b.element {
                        ok += 1;
                    }
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    Ok(())
}

fn inverse_matrix(d: &RootDatum, word: &[usize]) -> Result<IMat> {
    let rev: Vec<usize> = word.iter().rev().copied().collect();
    Ok(d.weyl_from_word(&rev)?.matrix().clone())
}

fn lefschetz_checks(r: &mut Runner, label: &str, g: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = &g.datum;
    let mus = small_dominants(d, 300)?;
    r.check(format!("lefschetz/euler-minuscule/{label}"), || {
        let mut ok = 0;
        let mut total = 0;
        for i in 0..d.semisimple_rank() {
            let mut labels = vec![0; d.semisimple_rank()];
            labels[i] = 1;
            let Some(mu) = d.cochar_with_labels(&labels)? else { continue };
            if weights::classify_minimal(d, &mu)? != Minimality::Minuscule {
                continue;
            }
            total += 1;
            let chi = lefschetz::flag_euler_characteristic(d, &ParabolicType::of_cochar(d, &mu)?)?;
            if chi == weights::weyl_dim(d, &mu)? {
                ok += 1;
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("lefschetz/support-monotone/{label}"), || {
        let mut bad = 0;
        for mu in mus.iter().take(8) {
            let big = lefschetz::gr_fixed_points(d, mu)?;
            for lower in weights::dominant_weights_below(d, mu)? {
                if !lefschetz::gr_fixed_points(d, &lower)?.iter().all(|l| big.binary_search(l).is_ok()) {
                    bad += 1;
                }
            }
        }
        Ok(eq(bad, 0))
    })?;
    r.check(format!("lefschetz/global-sum/{label}"), || {
        let mut ok = 0;
        for mu in &mus {
            if lefschetz::lefschetz_global_check(d, mu)?.passes() {
                ok += 1;
            }
        }
        Ok(counted(ok, mus.len()))
    })?;
    r.check(format!("lefschetz/convolution/{label}"), || {
        let small = small_dominants(d, 30)?;
        let trials = 5;
        let mut ok = 0;
        for _ in 0..trials {
            let a = small.choose(rng).expect("zero is always a sample");
            let b = small.choose(rng).expect("zero is always a sample");
            let rep = lefschetz::convolution_fixed_points(d, a, b)?;
            let f1 = weights::weight_multiplicities(d, a)?;
            let f2 = weights::weight_multiplicities(d, b)?;
            let fibers = rep.fibers.as_ref().expect("convolution report has fibers");
            let fiber_ok = rep.terms.iter().all(|(l, t)| {
                let s: BigInt = fibers[l].iter().map(|(x, y)| f1.get(x) * f2.get(y)).sum();
                s == *t
            });
            if rep.passes() && fiber_ok {
                ok += 1;
            }
        }
        Ok(counted(ok, trials))
    })?;
    Ok(())
}

/// A random centralizer of small order with one or two generators.
pub fn random_centralizer(d: &RootDatum, rng: &mut ChaCha8Rng) -> Result<AbelianCentralizer> {
    let n = rng.gen_range(2..=4u64);
    let k = rng.gen_range(1..=2usize);
    let gens = (0..k).map(|_| (0..d.rank()).map(|_| rng.gen_range(0..n as i64)).collect()).collect();
    AbelianCentralizer::new(n, gens)
}

fn spectral_checks(r: &mut Runner, label: &str, g: &GroupSpec, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = &g.datum;
    let mus = small_dominants(d, 60)?;
    let cases: Vec<(Cochar, AbelianCentralizer)> = (0..4)
        .map(|_| Ok((mus.choose(rng).expect("zero is always a sample").clone(), random_centralizer(d, rng)?)))
        .collect::<Result<_>>()?;
    r.check(format!("spectral/orthogonality/{label}"), || {
        let mut ok = 0;
        let mut total = 0;
        for (mu, s) in &cases {
            for delta in s.characters()? {
                total += 1;
                let h = spectral::hom_multiplicity(d, mu, s, &delta)?;
                if BigRational::from_integer(h) == spectral::averaging_multiplicity(d, mu, s, &delta)? {
                    ok += 1;
                }
            }
        }
        Ok(counted(ok, total))
    })?;
    r.check(format!("spectral/total-multiplicity/{label}"), || {
        let mut ok = 0;
        for (mu, s) in &cases {
            let mut sum = BigInt::zero();
            for delta in s.characters()? {
                sum += spectral::hom_multiplicity(d, mu, s, &delta)?;
            }
            if sum == weights::weyl_dim(d, mu)? {
                ok += 1;
            }
        }
        Ok(counted(ok, cases.len()))
    })?;
    r.check(format!("spectral/character-sum/{label}"), || {
        let trials = 6;
        let mut ok = 0;
        for _ in 0..trials {
            let n = rng.gen_range(1..=8u64);
            let s = TorusPointFiniteOrder::new(n, (0..d.rank()).map(|_| rng.gen_range(0..n as i64)).collect())?;
            let mu = mus.choose(rng).expect("zero is always a sample");
            let (l, rr) = spectral::character_sum_identity(d, &g.theta, mu, &s)?;
            if l == rr {
                ok += 1;
            }
        }
        Ok(counted(ok, trials))
    })?;
    r.check(format!("spectral/rhs-totals/{label}"), || {
        let mut ok = 0;
        for (mu, s) in &cases {
            let chars = s.characters()?;
            let all: BTreeMap<String, Vec<u64>> = chars.iter().enumerate().map(|(i, c)| (format!("pi{i}"), c.clone())).collect();
            let rho = chars[0].clone();
            let dim = weights::weyl_dim(d, mu)?;
            let full: BigInt = spectral::kottwitz_rhs(d, mu, s, &PacketDatum::new(s, all.clone())?, &rho)?
                .values()
                .map(|v| v.abs())
                .sum();
            let part: BTreeMap<String, Vec<u64>> = all.into_iter().take(1).collect();
            let partial: BigInt =
                spectral::kottwitz_rhs(d, mu, s, &PacketDatum::new(s, part)?, &rho)?.values().map(|v| v.abs()).sum();
            if full == dim && partial <= dim {
                ok += 1;
            }
        }
        Ok(counted(ok, cases.len()))
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::preset;

    #[test]
    fn classical_orders() {
        for (name, n, order) in [
            ("A-sc", 3, 24),
            ("B-sc", 3, 48),
            ("C-ad", 3, 48),
            ("D-sc", 4, 192),
            ("G2", 2, 12),
            ("F4", 4, 1152),
            ("GL", 4, 24),
            ("SO-even", 4, 4),
        ] {
            assert_eq!(classical_weyl_order(&preset(name, n).unwrap()).unwrap(), order, "{name}{n}");
        }
    }

    #[test]
    fn determinantal_oracle() {
        assert_eq!(determinantal_quotient(&[vec![2, 0], vec![0, 3]], 2), (0, vec![BigInt::from(6)]));
        assert_eq!(determinantal_quotient(&[vec![1, -1]], 2), (1, vec![]));
        assert_eq!(determinantal_quotient(&[], 3), (3, vec![]));
    }

    #[test]
    fn gl2_suite_passes() {
        let rep = run_suite("gl2-paper", &[], DEFAULT_SEED).unwrap();
        assert!(rep.pass(), "{}", rep.to_tsv(false));
        assert!(rep.entries.len() >= 10);
    }

    #[test]
    fn full_suite_on_gl3() {
        let g = vec![("GL3".to_string(), GroupSpec::preset("GL", 3).unwrap())];
        let rep = run_suite("all", &g, 7).unwrap();
        assert!(rep.pass(), "{}", rep.to_tsv(false));
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", &[], 1).is_err());
    }
}

//! Python bindings for `heckekit`.
//!
//! Cocharacters are lists of ints, rationals come back as
//! `fractions.Fraction`, and structured results as plain dicts and lists.

use std::collections::BTreeMap;

use heckekit::checks;
use heckekit::cyclotomic::{format_rational, parse_rational, CyclotomicNumber, TorusPointFiniteOrder};
use heckekit::group_spec::GroupSpec;
use heckekit::kottwitz;
use heckekit::lefschetz::{self, ParabolicType};
use heckekit::root_datum::{self, automorphism_from_permutation, parse_word, Lattice};
use heckekit::spectral::{self, AbelianCentralizer, PacketDatum};
use heckekit::transfer::{self, ClassFunction, Side, TorusType};
use heckekit::weights::{self, Minimality};
use heckekit::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

create_exception!(pyheckekit, CostGuardError, PyRuntimeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::CostGuard { .. } => CostGuardError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for heckekit::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn fraction<'py>(py: Python<'py>, r: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if let Ok(k) = x.extract::<BigInt>() {
        return Ok(BigRational::from_integer(k));
    }
    parse_rational(&x.str()?.to_string()).py_err()
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

fn py_to_json(x: &Bound<'_, PyAny>) -> PyResult<serde_json::Value> {
    let text: String = x.py().import("json")?.getattr("dumps")?.call1((x,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn weight_dict<'py, 'a>(
    py: Python<'py>,
    items: impl IntoIterator<Item = (&'a Vec<i64>, &'a BigInt)>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (l, m) in items {
        d.set_item(PyTuple::new(py, l)?, m)?;
    }
    Ok(d)
}

fn cyclotomic<'py>(py: Python<'py>, c: &CyclotomicNumber) -> PyResult<Bound<'py, PyAny>> {
    let coeffs = c.coefficients().iter().map(|r| fraction(py, r)).collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("order", c.order())?;
    d.set_item("coefficients", coeffs)?;
    d.set_item("text", c.to_string())?;
    Ok(d.into_any())
}

fn point(coords: &Bound<'_, PyAny>) -> PyResult<TorusPointFiniteOrder> {
    let xs = coords.try_iter()?.map(|x| rational(&x?)).collect::<PyResult<Vec<_>>>()?;
    TorusPointFiniteOrder::from_rationals(&xs, None).py_err()
}

/// A based root datum with an optional diagram automorphism.
#[pyclass(name = "RootDatum", module = "pyheckekit", frozen)]
struct PyRootDatum {
    spec: GroupSpec,
}

#[pymethods]
impl PyRootDatum {
    /// `RootDatum("GL", 3)`, `RootDatum("B-ad", 2)`, `RootDatum("G2")`.
    #[new]
    #[pyo3(signature = (name, n = 0))]
    fn new(name: &str, n: usize) -> PyResult<Self> {
        Ok(PyRootDatum { spec: GroupSpec::preset(name, n).py_err()? })
    }

    #[staticmethod]
    #[pyo3(signature = (cartan, lattice = "sc", name = "custom"))]
    fn from_cartan(cartan: Vec<Vec<i64>>, lattice: &str, name: &str) -> PyResult<Self> {
        let lattice: Lattice = lattice.parse().py_err()?;
        let d = root_datum::RootDatum::from_cartan(name, &cartan, lattice).py_err()?;
        Ok(PyRootDatum { spec: GroupSpec::new(d) })
    }

    /// Parse a JSON group spec (same format as the command-line tool).
    #[staticmethod]
    fn from_spec(text: &str) -> PyResult<Self> {
        Ok(PyRootDatum { spec: GroupSpec::from_str(text).py_err()? })
    }

    /// Copy with the diagram automorphism given by a zero-based permutation.
    fn twisted(&self, perm: Vec<usize>) -> PyResult<Self> {
        let mut spec = self.spec.clone();
        spec.theta = automorphism_from_permutation(&spec.datum, &perm).py_err()?;
        Ok(PyRootDatum { spec })
    }

    fn __repr__(&self) -> String {
        format!("RootDatum({})", self.spec.datum.name())
    }

    #[getter]
    fn name(&self) -> String {
        self.spec.datum.name().to_string()
    }
    #[getter]
    fn rank(&self) -> usize {
        self.spec.datum.rank()
    }
    #[getter]
    fn semisimple_rank(&self) -> usize {
        self.spec.datum.semisimple_rank()
    }
    #[getter]
    fn cartan(&self) -> Vec<Vec<i64>> {
        self.spec.datum.cartan().clone()
    }
    #[getter]
    fn simple_roots(&self) -> Vec<Vec<i64>> {
        self.spec.datum.simple_roots().to_vec()
    }
    #[getter]
    fn simple_coroots(&self) -> Vec<Vec<i64>> {
        self.spec.datum.simple_coroots().to_vec()
    }
    #[getter]
    fn positive_coroots(&self) -> Vec<Vec<i64>> {
        self.spec.datum.positive_coroots().cloned().collect()
    }
    #[getter]
    fn two_rho(&self) -> Vec<i64> {
        self.spec.datum.two_rho().clone()
    }
    #[getter]
    fn theta(&self) -> Vec<usize> {
        self.spec.theta.permutation().to_vec()
    }

    fn weyl_order(&self) -> PyResult<usize> {
        self.spec.datum.weyl_order().py_err()
    }

    /// `(dominant, word)` with `word` zero-based simple reflections.
    fn dominant_representative(&self, lam: Vec<i64>) -> PyResult<(Vec<i64>, Vec<usize>)> {
        let (dom, w) = self.spec.datum.dominant_representative(&lam).py_err()?;
        Ok((dom, w.word().to_vec()))
    }

    fn orbit(&self, lam: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
        self.spec.datum.orbit(&lam).py_err()
    }

    fn dominance_leq(&self, a: Vec<i64>, b: Vec<i64>) -> bool {
        self.spec.datum.dominance_leq(&a, &b)
    }

    fn cochar_with_labels(&self, labels: Vec<i64>) -> PyResult<Option<Vec<i64>>> {
        self.spec.datum.cochar_with_labels(&labels).py_err()
    }

    fn weyl_dim(&self, mu: Vec<i64>) -> PyResult<BigInt> {
        weights::weyl_dim(&self.spec.datum, &mu).py_err()
    }

    /// `{weight: multiplicity}` with tuple keys.
    fn weights<'py>(&self, py: Python<'py>, mu: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        let f = weights::weight_multiplicities(&self.spec.datum, &mu).py_err()?;
        weight_dict(py, f.iter())
    }

    fn kostant(&self, mu: Vec<i64>, lam: Vec<i64>) -> PyResult<BigInt> {
        weights::kostant_multiplicity_oracle(&self.spec.datum, &mu, &lam).py_err()
    }

    /// `"minuscule"`, `("quasi-minuscule", root)` or `"not-minimal"`.
    fn classify(&self, py: Python<'_>, mu: Vec<i64>) -> PyResult<Py<PyAny>> {
        Ok(match weights::classify_minimal(&self.spec.datum, &mu).py_err()? {
            Minimality::Minuscule => "minuscule".into_pyobject(py)?.into_any().unbind(),
            Minimality::QuasiMinuscule(g) => ("quasi-minuscule", g).into_pyobject(py)?.into_any().unbind(),
            Minimality::NotMinimal => "not-minimal".into_pyobject(py)?.into_any().unbind(),
        })
    }

    fn tensor<'py>(&self, py: Python<'py>, mu: Vec<i64>, nu: Vec<i64>) -> PyResult<Bound<'py, PyDict>> {
        let t = weights::tensor_decompose(&self.spec.datum, &mu, &nu).py_err()?;
        weight_dict(py, t.iter())
    }

    /// Trace of `r_μ` at the torus point with the given rational coordinates.
    fn character<'py>(&self, py: Python<'py>, mu: Vec<i64>, coords: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let s = point(coords)?;
        cyclotomic(py, &weights::character_eval(&self.spec.datum, &mu, &s).py_err()?)
    }

    fn weyl_character<'py>(&self, py: Python<'py>, mu: Vec<i64>, coords: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let s = point(coords)?;
        cyclotomic(py, &weights::weyl_character_oracle(&self.spec.datum, &mu, &s).py_err()?)
    }

    fn pi1(&self) -> PyResult<String> {
        Ok(kottwitz::pi1(&self.spec.datum).py_err()?.0.to_string())
    }

    fn pi1_coinvariants(&self) -> PyResult<String> {
        Ok(kottwitz::pi1_coinvariants(&self.spec.datum, &self.spec.theta).py_err()?.0.to_string())
    }

    fn basic_class(&self, mu: Vec<i64>) -> PyResult<Vec<i64>> {
        Ok(kottwitz::basic_class_of(&self.spec.datum, &self.spec.theta, &mu).py_err()?.element)
    }

    fn kottwitz_sign(&self, nu: &Bound<'_, PyAny>) -> PyResult<i64> {
        let nu = nu.try_iter()?.map(|x| rational(&x?)).collect::<PyResult<Vec<_>>>()?;
        kottwitz::kottwitz_sign(&self.spec.datum, &nu).py_err()
    }

    fn sign_identity(&self, mu: &Bound<'_, PyAny>) -> PyResult<(i64, i64)> {
        let mu = mu.try_iter()?.map(|x| rational(&x?)).collect::<PyResult<Vec<_>>>()?;
        kottwitz::sign_identity(&self.spec.datum, &mu, None).py_err()
    }

    fn shtuka_dimension(&self, mu: Vec<i64>) -> PyResult<i64> {
        kottwitz::shtuka_dimension(&self.spec.datum, &mu).py_err()
    }

    /// `|W| / |W_M|` for the Levi given by zero-based nodes.
    fn euler_characteristic(&self, levi: Vec<usize>) -> PyResult<BigInt> {
        let p = ParabolicType::new(&self.spec.datum, levi).py_err()?;
        lefschetz::flag_euler_characteristic(&self.spec.datum, &p).py_err()
    }

    fn lefschetz<'py>(&self, py: Python<'py>, mu: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &lefschetz::lefschetz_global_check(&self.spec.datum, &mu).py_err()?.to_json())
    }

    /// Transfer kernels `{torus: {nu: m}}` over the given Weyl words, or the
    /// twisted class representatives.
    #[pyo3(signature = (mu, tori = None))]
    fn transfer_kernels<'py>(&self, py: Python<'py>, mu: Vec<i64>, tori: Option<Vec<String>>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for t in self.tori(tori)? {
            let k = transfer::transfer_kernel(&self.spec.datum, &mu, &t).py_err()?;
            out.set_item(t.id(), weight_dict(py, k.values.iter())?)?;
        }
        Ok(out)
    }

    /// Apply the transfer to a class function in the JSON list format;
    /// the direction follows the side of the input.
    #[pyo3(signature = (mu, function, tori = None))]
    fn transfer<'py>(
        &self,
        py: Python<'py>,
        mu: Vec<i64>,
        function: &Bound<'py, PyAny>,
        tori: Option<Vec<String>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let f = ClassFunction::from_json(&py_to_json(function)?, Side::G).py_err()?;
        let h = transfer::HeckeTransfer::new(&self.spec.datum, &self.spec.theta, &mu, &self.tori(tori)?).py_err()?;
        let out = match f.side() {
            Side::G => h.g_to_j(&f),
            Side::J => h.j_to_g(&f),
        }
        .py_err()?;
        json_to_py(py, &out.to_json())
    }

    /// `(dim Hom_S(δ, r_μ), averaged multiplicity)` for the centralizer
    /// generated by points of order dividing `order`.
    fn hom_multiplicity<'py>(
        &self,
        py: Python<'py>,
        mu: Vec<i64>,
        order: u64,
        generators: Vec<Vec<i64>>,
        delta: Vec<u64>,
    ) -> PyResult<(BigInt, Bound<'py, PyAny>)> {
        let s = AbelianCentralizer::new(order, generators).py_err()?;
        let h = spectral::hom_multiplicity(&self.spec.datum, &mu, &s, &delta).py_err()?;
        let a = spectral::averaging_multiplicity(&self.spec.datum, &mu, &s, &delta).py_err()?;
        Ok((h, fraction(py, &a)?))
    }

    fn kottwitz_rhs(
        &self,
        mu: Vec<i64>,
        order: u64,
        generators: Vec<Vec<i64>>,
        packet: BTreeMap<String, Vec<u64>>,
        delta_rho: Vec<u64>,
    ) -> PyResult<BTreeMap<String, BigInt>> {
        let s = AbelianCentralizer::new(order, generators).py_err()?;
        let p = PacketDatum::new(&s, packet).py_err()?;
        spectral::kottwitz_rhs(&self.spec.datum, &mu, &s, &p, &delta_rho).py_err()
    }
}

impl PyRootDatum {
    fn tori(&self, words: Option<Vec<String>>) -> PyResult<Vec<TorusType>> {
        match words {
            None => self.spec.torus_catalog().py_err(),
            Some(ws) => ws
                .iter()
                .map(|w| TorusType::from_word(&self.spec.datum, &parse_word(w).py_err()?, &self.spec.theta).py_err())
                .collect(),
        }
    }
}

/// Run an identity suite; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = checks::DEFAULT_SEED, groups = None))]
fn run_checks<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    groups: Option<Vec<PyRef<'py, PyRootDatum>>>,
) -> PyResult<(bool, Bound<'py, PyAny>)> {
    let groups: Vec<(String, GroupSpec)> = groups
        .unwrap_or_default()
        .iter()
        .map(|g| (g.spec.datum.name().to_string(), g.spec.clone()))
        .collect();
    let report = checks::run_suite(suite, &groups, seed).py_err()?;
    Ok((report.pass(), json_to_py(py, &report.to_json(false))?))
}

#[pymodule]
fn pyheckekit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootDatum>()?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    m.add("CostGuardError", m.py().get_type::<CostGuardError>())?;
    Ok(())
}

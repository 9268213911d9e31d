//! Python bindings: module construction by family, Jordan type profiles,
//! kernel and filtration sheaves, Heller shifts, and the verification suite.
//! Reports are returned as JSON strings with the same schemas as the CLI.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sl2sheaf::field::{Ext, Field, Fp};
use sl2sheaf::fi::{default_degree_bound, fi_data};
use sl2sheaf::graded::graded_kernel;
use sl2sheaf::heller::heller_shift as core_heller_shift;
use sl2sheaf::nullcone::{jordan_profile, local_jordan_type, PointP1};
use sl2sheaf::poly::{ext_field, is_irreducible, Poly};
use sl2sheaf::report::{fi_report, kernel_report, profile_report};
use sl2sheaf::sl2::{dual_weyl, phi, projective, weyl, Sl2Module};
use sl2sheaf::theta::build_theta;
use sl2sheaf::verify::{verify_all as core_verify_all, VerifyConfig};

fn value_err(msg: impl ToString) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn runtime_err(msg: impl ToString) -> PyErr {
    PyRuntimeError::new_err(msg.to_string())
}

fn prime_field(p: u64) -> PyResult<Fp> {
    if p < 3 {
        return Err(value_err(format!("p must be an odd prime >= 3, got {p}")));
    }
    Fp::new(p).map_err(value_err)
}

/// Parses the point syntax shared with the CLI: "s,t" for rational points,
/// "ext:e" or "ext:e:c0,...,c{e-1}" for [1:u] in a degree-e extension.
enum ParsedPoint {
    Base(PointP1<Fp>),
    Extension(Ext<Fp>, PointP1<Ext<Fp>>),
}

fn parse_point(k: &Fp, xi: &str) -> PyResult<ParsedPoint> {
    if let Some(rest) = xi.strip_prefix("ext:") {
        let mut parts = rest.splitn(2, ':');
        let e: usize = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| value_err(format!("bad extension degree in {xi:?}")))?;
        if e == 0 {
            return Err(value_err("extension degree must be at least 1"));
        }
        let ext = match parts.next() {
            None => ext_field(k, e),
            Some(coeffs) => {
                let cs: Vec<i64> = coeffs
                    .split(',')
                    .map(|c| c.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| value_err(format!("bad modulus coefficients in {xi:?}")))?;
                if cs.len() != e {
                    return Err(value_err(format!(
                        "expected {e} modulus coefficients, got {}",
                        cs.len()
                    )));
                }
                let mut m: Vec<u64> = cs.iter().map(|&c| k.from_int(c)).collect();
                m.push(k.one());
                if !is_irreducible(k, &Poly::new(k, m.clone())) {
                    return Err(value_err("the given modulus is not irreducible"));
                }
                Ext::new(*k, m)
            }
        };
        let u = ext.generator();
        Ok(ParsedPoint::Extension(ext.clone(), PointP1::Finite(u)))
    } else {
        let (s, t) = xi
            .split_once(',')
            .ok_or_else(|| value_err(format!("point must be \"s,t\" or \"ext:e:coeffs\", got {xi:?}")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| value_err(format!("bad coordinate in {xi:?}")))
        };
        let s = k.from_int(parse(s)?);
        let t = k.from_int(parse(t)?);
        if k.is_zero(&s) {
            if k.is_zero(&t) {
                return Err(value_err("the zero point is not on the projective line"));
            }
            Ok(ParsedPoint::Base(PointP1::Infinity))
        } else {
            Ok(ParsedPoint::Base(PointP1::Finite(k.div(&t, &s).unwrap())))
        }
    }
}

#[derive(Clone)]
enum Inner {
    Base(Sl2Module<Fp>),
    Extension(Sl2Module<Ext<Fp>>),
}

macro_rules! with_inner {
    ($self:expr, $m:ident => $body:expr) => {
        match &$self.inner {
            Inner::Base($m) => $body,
            Inner::Extension($m) => $body,
        }
    };
}

/// A restricted sl2-module with exact matrices for the standard generators.
#[pyclass(name = "Module", frozen)]
struct PyModuleObj {
    inner: Inner,
}

fn module_bound(inner: &Inner, max_degree: Option<i64>) -> i64 {
    match inner {
        Inner::Base(m) => max_degree.unwrap_or_else(|| default_degree_bound(m)),
        Inner::Extension(m) => max_degree.unwrap_or_else(|| default_degree_bound(m)),
    }
}

#[pymethods]
impl PyModuleObj {
    /// Weyl module V(lambda).
    #[staticmethod]
    fn weyl(p: u64, lambda: usize) -> PyResult<Self> {
        let k = prime_field(p)?;
        Ok(PyModuleObj {
            inner: Inner::Base(weyl(&k, lambda)),
        })
    }

    /// Dual Weyl module V(lambda)*.
    #[staticmethod]
    fn dual_weyl(p: u64, lambda: usize) -> PyResult<Self> {
        let k = prime_field(p)?;
        Ok(PyModuleObj {
            inner: Inner::Base(dual_weyl(&k, lambda)),
        })
    }

    /// Projective indecomposable Q(lambda), lambda < p.
    #[staticmethod]
    fn projective(p: u64, lambda: usize) -> PyResult<Self> {
        let k = prime_field(p)?;
        Ok(PyModuleObj {
            inner: Inner::Base(projective(&k, lambda).map_err(value_err)?),
        })
    }

    /// Twisted module Phi_xi(lambda); xi is "s,t" or "ext:e[:coeffs]".
    #[staticmethod]
    fn phi(p: u64, lambda: usize, xi: &str) -> PyResult<Self> {
        let k = prime_field(p)?;
        let inner = match parse_point(&k, xi)? {
            ParsedPoint::Base(pt) => Inner::Base(phi(&k, lambda, &pt).map_err(value_err)?),
            ParsedPoint::Extension(ext, pt) => {
                Inner::Extension(phi(&ext, lambda, &pt).map_err(value_err)?)
            }
        };
        Ok(PyModuleObj { inner })
    }

    fn dim(&self) -> usize {
        with_inner!(self, m => m.dim())
    }

    fn p(&self) -> u64 {
        with_inner!(self, m => m.p())
    }

    fn label(&self) -> String {
        with_inner!(self, m => m.label().describe())
    }

    /// Jordan type at the point "s,t", as a string like "[5][3]".
    fn local_jordan_type(&self, xi: &str) -> PyResult<String> {
        match &self.inner {
            Inner::Base(m) => {
                let ParsedPoint::Base(pt) = parse_point(m.field(), xi)? else {
                    return Err(value_err(
                        "extension points need a module built over that extension",
                    ));
                };
                Ok(local_jordan_type(m, &pt).to_exp_string())
            }
            Inner::Extension(m) => {
                let k = m.field();
                let base = k.base();
                let pt = match parse_point(base, xi)? {
                    ParsedPoint::Base(PointP1::Infinity) => PointP1::Infinity,
                    ParsedPoint::Base(PointP1::Finite(t)) => PointP1::Finite(k.embed(&t)),
                    ParsedPoint::Extension(ext, pt) => {
                        if ext.modulus() != k.modulus() {
                            return Err(value_err("extension point over a different modulus"));
                        }
                        pt
                    }
                };
                Ok(local_jordan_type(m, &pt).to_exp_string())
            }
        }
    }

    /// Jordan type profile over the projective line, as a JSON string with
    /// fields "generic" and "exceptional".
    #[pyo3(signature = (ext_max = 8))]
    fn jordan_profile(&self, ext_max: usize) -> PyResult<String> {
        with_inner!(self, m => {
            let profile = jordan_profile(m, ext_max).map_err(runtime_err)?;
            Ok(serde_json::to_string(&profile_report(m, &profile)).unwrap())
        })
    }

    /// Kernel sheaf of the global operator, as a JSON report with generators,
    /// splitting type, and Hilbert data.
    #[pyo3(signature = (max_degree = None))]
    fn kernel(&self, max_degree: Option<i64>) -> PyResult<String> {
        let bound = module_bound(&self.inner, max_degree);
        with_inner!(self, m => {
            let ker = graded_kernel(&build_theta(m), bound).map_err(runtime_err)?;
            let hilbert_to = ker
                .generators
                .iter()
                .map(|(d, _)| *d)
                .max()
                .unwrap_or(0)
                .saturating_add(4)
                .min(bound);
            Ok(serde_json::to_string(&kernel_report(m, 1, &ker, hilbert_to)).unwrap())
        })
    }

    /// Filtration layer F_i as a JSON report with Hilbert data and splitting
    /// type (1 <= i <= p).
    #[pyo3(signature = (i, max_degree = None))]
    fn fi(&self, i: usize, max_degree: Option<i64>) -> PyResult<String> {
        let bound = module_bound(&self.inner, max_degree);
        with_inner!(self, m => {
            let data = fi_data(m, i, bound).map_err(runtime_err)?;
            Ok(serde_json::to_string(&fi_report(m, &data)).unwrap())
        })
    }

    /// The global operator as a matrix of homogeneous quadratics, one row per
    /// line.
    fn theta(&self) -> String {
        with_inner!(self, m => build_theta(m).to_string())
    }

    fn __repr__(&self) -> String {
        format!("Module({}, dim {})", self.label(), self.dim())
    }
}

/// Heller shift of V(lambda): JSON with "shift" ("0" or "V(n)"), and for the
/// non-projective case "omega_lambda" and "dim".
#[pyfunction]
fn heller_shift(p: u64, lambda: usize) -> PyResult<String> {
    let k = prime_field(p)?;
    let v = match core_heller_shift(&k, lambda).map_err(runtime_err)? {
        None => serde_json::json!({ "lambda": lambda, "shift": "0", "projective": true }),
        Some(d) => serde_json::json!({
            "lambda": lambda,
            "shift": format!("V({})", d.omega_lambda),
            "omega_lambda": d.omega_lambda,
            "dim": d.kernel.dim(),
            "cover_dim": d.cover.dim(),
            "projective": false,
        }),
    };
    Ok(v.to_string())
}

/// Runs every verification check; returns a JSON list of
/// {"name", "passed", "detail"}.
#[pyfunction]
#[pyo3(signature = (p, lambda_max = None, ext_max = 8))]
fn verify_all(p: u64, lambda_max: Option<usize>, ext_max: usize) -> PyResult<String> {
    prime_field(p)?;
    let cfg = VerifyConfig {
        p,
        lambda_max: lambda_max.unwrap_or(3 * p as usize),
        ext_bound: ext_max,
    };
    Ok(serde_json::to_string(&core_verify_all(&cfg)).unwrap())
}

#[pymodule]
fn sl2sheaf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModuleObj>()?;
    m.add_function(wrap_pyfunction!(heller_shift, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}

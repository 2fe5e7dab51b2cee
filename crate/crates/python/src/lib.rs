//! Python bindings: precision-tracked p-adic numbers, dual-graph cochains,
//! Laurent residues and the Tate pipeline, mirroring the Rust API surface.

use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Arc;
use volog::padic::Valuation;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A prime together with a default working precision.
#[pyclass(frozen, skip_from_py_object, name = "Context")]
#[derive(Clone, Copy)]
struct Context {
    inner: volog::PadicContext,
}

#[pymethods]
impl Context {
    #[new]
    #[pyo3(signature = (prime, prec = 10))]
    fn new(prime: u64, prec: u32) -> PyResult<Self> {
        Ok(Context {
            inner: volog::PadicContext::new(prime, prec).map_err(value_error)?,
        })
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.inner.prime()
    }

    #[getter]
    fn prec(&self) -> u32 {
        self.inner.default_prec()
    }

    /// Parse a literal: "0", "117", "2/5", "6*5^2", "55 + O(5^3)", "O(5^4)".
    fn parse(&self, text: &str) -> PyResult<Padic> {
        Ok(Padic {
            inner: self.inner.parse(text).map_err(value_error)?,
        })
    }

    fn int(&self, n: i64) -> Padic {
        Padic {
            inner: self.inner.int(n),
        }
    }

    fn zero(&self) -> Padic {
        Padic {
            inner: self.inner.exact_zero(),
        }
    }

    fn __repr__(&self) -> String {
        format!("Context(prime={}, prec={})", self.prime(), self.prec())
    }
}

/// An element of Q_p with tracked precision.
#[pyclass(frozen, from_py_object, name = "Padic")]
#[derive(Clone)]
struct Padic {
    inner: volog::PadicNumber,
}

#[pymethods]
impl Padic {
    #[getter]
    fn prime(&self) -> u64 {
        self.inner.prime()
    }

    /// The valuation, or None when no leading digit is known.
    fn valuation(&self) -> Option<i64> {
        match self.inner.valuation() {
            Some(Valuation::Finite(v)) => Some(v),
            _ => None,
        }
    }

    /// Absolute precision O(p^N), or None for the exact zero.
    fn precision(&self) -> Option<i64> {
        self.inner.abs_prec()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Equality at the shared tracked precision.
    fn agrees(&self, other: &Padic) -> bool {
        self.inner.agrees(&other.inner)
    }

    fn __add__(&self, other: &Padic) -> Padic {
        Padic {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &Padic) -> Padic {
        Padic {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &Padic) -> Padic {
        Padic {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __truediv__(&self, other: &Padic) -> PyResult<Padic> {
        Ok(Padic {
            inner: self.inner.div(&other.inner).map_err(value_error)?,
        })
    }

    fn __neg__(&self) -> Padic {
        Padic {
            inner: self.inner.neg(),
        }
    }

    fn __pow__(&self, exponent: i64, modulus: Option<i64>) -> PyResult<Padic> {
        if modulus.is_some() {
            return Err(PyValueError::new_err("modular pow is not defined here"));
        }
        Ok(Padic {
            inner: self.inner.pow(exponent).map_err(value_error)?,
        })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Padic(\"{}\")", self.inner)
    }
}

/// A branch of the p-adic logarithm: the chosen value of log(p).
#[pyclass(frozen, skip_from_py_object, name = "Branch")]
#[derive(Clone)]
struct Branch {
    inner: volog::LogBranch,
}

#[pymethods]
impl Branch {
    #[new]
    fn new(constant: &Padic) -> Branch {
        Branch {
            inner: volog::LogBranch::new(constant.inner.clone()),
        }
    }

    /// The branch with log(p) = 0.
    #[staticmethod]
    fn iwasawa(prime: u64) -> Branch {
        Branch {
            inner: volog::LogBranch::iwasawa(prime),
        }
    }

    fn __repr__(&self) -> String {
        format!("Branch(log p = {})", self.inner.constant())
    }
}

/// Branch-dependent p-adic logarithm.
#[pyfunction]
fn log(z: &Padic, branch: &Branch) -> PyResult<Padic> {
    Ok(Padic {
        inner: volog::plog(&z.inner, &branch.inner).map_err(value_error)?,
    })
}

/// Teichmüller lift of a unit, to `prec` digits.
#[pyfunction]
fn teichmuller(z: &Padic, prec: u32) -> PyResult<Padic> {
    Ok(Padic {
        inner: volog::teichmuller(&z.inner, prec).map_err(value_error)?,
    })
}

/// Corrected-primitive value at position t across an annulus; t is a
/// rational literal like "1/2".
#[pyfunction]
fn interpolate(base: &Padic, harmonic: &Padic, t: &str) -> PyResult<Padic> {
    let t = Ratio::<i64>::from_str(t.trim())
        .map_err(|_| PyValueError::new_err(format!("{t} is not a rational literal")))?;
    Ok(Padic {
        inner: volog::annulus_interpolate(&base.inner, &harmonic.inner, t)
            .map_err(value_error)?,
    })
}

/// The dual graph of a special fiber: named vertices, oriented named edges.
#[pyclass(frozen, skip_from_py_object, name = "Graph")]
#[derive(Clone)]
struct Graph {
    inner: Arc<volog::DualGraph>,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> PyResult<Self> {
        Ok(Graph {
            inner: Arc::new(volog::DualGraph::new(vertices, edges).map_err(value_error)?),
        })
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertex_names().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String, String)> {
        self.inner
            .edges()
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    self.inner.vertex_name(e.tail).to_string(),
                    self.inner.vertex_name(e.head).to_string(),
                )
            })
            .collect()
    }

    /// Replace each edge by a path of m edges; returns the refined graph
    /// and, per original edge id, the ordered sub-edge ids.
    fn subdivide(&self, m: u32) -> PyResult<(Graph, HashMap<String, Vec<String>>)> {
        let (sub, edge_map) = self.inner.subdivide(m).map_err(value_error)?;
        let named = self
            .inner
            .edges()
            .iter()
            .zip(&edge_map)
            .map(|(e, path)| {
                (
                    e.id.clone(),
                    path.iter().map(|&i| sub.edges()[i].id.clone()).collect(),
                )
            })
            .collect();
        Ok((
            Graph {
                inner: Arc::new(sub),
            },
            named,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// An antisymmetric p-adic function on the oriented edges of a graph.
#[pyclass(frozen, skip_from_py_object, name = "Cochain")]
#[derive(Clone)]
struct Cochain {
    inner: volog::Cochain,
}

#[pymethods]
impl Cochain {
    #[new]
    fn new(graph: &Graph, values: HashMap<String, Padic>) -> PyResult<Self> {
        let values = values
            .into_iter()
            .map(|(k, v)| (k, v.inner))
            .collect::<HashMap<_, _>>();
        Ok(Cochain {
            inner: volog::Cochain::from_map(Arc::clone(&graph.inner), values)
                .map_err(value_error)?,
        })
    }

    /// Edge id -> value, in stored edge order.
    fn values(&self) -> Vec<(String, Padic)> {
        self.inner
            .graph()
            .edges()
            .iter()
            .zip(self.inner.stored_values())
            .map(|(e, v)| (e.id.clone(), Padic { inner: v.clone() }))
            .collect()
    }

    fn is_harmonic(&self) -> bool {
        self.inner.is_harmonic()
    }

    /// Split into (harmonic part, gamma by vertex name), with gamma pinned
    /// to exact zero at the first vertex.
    fn decompose(&self) -> PyResult<(Cochain, Vec<(String, Padic)>)> {
        let (harmonic, gamma) = self.inner.decompose().map_err(value_error)?;
        let named = gamma
            .graph()
            .vertex_names()
            .iter()
            .zip(gamma.values())
            .map(|(name, v)| (name.clone(), Padic { inner: v.clone() }))
            .collect();
        Ok((Cochain { inner: harmonic }, named))
    }

    fn __repr__(&self) -> String {
        format!("Cochain({} edges)", self.inner.graph().edge_count())
    }
}

/// A Laurent polynomial over Q_p with exact rational coefficients.
#[pyclass(frozen, skip_from_py_object, name = "Laurent")]
#[derive(Clone)]
struct Laurent {
    inner: volog::LaurentPolynomial,
}

#[pymethods]
impl Laurent {
    /// Coefficients as {exponent: rational literal}, e.g. {0: "5", 1: "1/3"}.
    #[new]
    fn new(prime: u64, coeffs: HashMap<i64, String>) -> PyResult<Self> {
        let mut parsed = Vec::with_capacity(coeffs.len());
        for (i, text) in coeffs {
            let a = num_rational::BigRational::from_str(text.trim()).map_err(|_| {
                PyValueError::new_err(format!("coefficient {text} is not a rational literal"))
            })?;
            parsed.push((i, a));
        }
        Ok(Laurent {
            inner: volog::LaurentPolynomial::new(prime, parsed),
        })
    }

    /// Vertices of the Newton polygon as (exponent, valuation) pairs.
    fn newton_vertices(&self) -> PyResult<Vec<(i64, i64)>> {
        Ok(self
            .inner
            .newton_polygon()
            .map_err(value_error)?
            .vertices
            .clone())
    }

    /// Root valuations as (valuation literal, count) pairs.
    fn roots(&self) -> PyResult<Vec<(String, i64)>> {
        Ok(self
            .inner
            .root_valuation_counts()
            .map_err(value_error)?
            .into_iter()
            .map(|(v, n)| (v.to_string(), n))
            .collect())
    }

    /// Residue of dlog f on the standard annulus.
    fn residue(&self) -> PyResult<i64> {
        self.inner.annulus_residue_dlog().map_err(value_error)
    }

    /// (residue, boundary-order difference, equal).
    fn lemma_check(&self) -> PyResult<(i64, i64, bool)> {
        let check = self.inner.lemma_check().map_err(value_error)?;
        Ok((check.residue, check.boundary, check.equal))
    }

    /// Evaluate at a point, embedding coefficients at `prec` digits.
    fn evaluate(&self, at: &Padic, prec: u32) -> PyResult<Padic> {
        let ctx = volog::PadicContext::new(self.inner.prime(), prec).map_err(value_error)?;
        Ok(Padic {
            inner: self.inner.evaluate(&ctx, &at.inner).map_err(value_error)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Laurent({})", self.inner)
    }
}

/// The Tate curve K^x / q^Z with its n-gon reduction.
#[pyclass(frozen, name = "Tate")]
struct Tate {
    inner: volog::TateCurve,
}

#[pymethods]
impl Tate {
    #[new]
    fn new(ctx: &Context, q: &Padic) -> PyResult<Self> {
        Ok(Tate {
            inner: volog::TateCurve::new(ctx.inner, q.inner.clone()).map_err(value_error)?,
        })
    }

    /// Number of components of the special fiber.
    #[getter]
    fn n(&self) -> i64 {
        self.inner.n()
    }

    /// The single-valued logarithm through the harmonic pipeline.
    fn integrate(&self, z: &Padic, branch: &Branch) -> PyResult<Padic> {
        let point = volog::TatePoint::new(z.inner.clone()).map_err(value_error)?;
        Ok(Padic {
            inner: self
                .inner
                .vologodsky_log(&point, &branch.inner)
                .map_err(value_error)?,
        })
    }

    /// The closed form plog(z) - nu(z) plog(q) / n.
    fn closed_form(&self, z: &Padic, branch: &Branch) -> PyResult<Padic> {
        let point = volog::TatePoint::new(z.inner.clone()).map_err(value_error)?;
        Ok(Padic {
            inner: self
                .inner
                .logq_closed_form(&point, &branch.inner)
                .map_err(value_error)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Tate(n = {})", self.inner.n())
    }
}

#[pymodule]
fn volog_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Context>()?;
    m.add_class::<Padic>()?;
    m.add_class::<Branch>()?;
    m.add_class::<Graph>()?;
    m.add_class::<Cochain>()?;
    m.add_class::<Laurent>()?;
    m.add_class::<Tate>()?;
    m.add_function(wrap_pyfunction!(log, m)?)?;
    m.add_function(wrap_pyfunction!(teichmuller, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    Ok(())
}

//! Gluing local primitives into a global one.
//!
//! A family of local primitives on the components of the special fiber is
//! recorded by its difference cochain (one entry per edge of the dual graph)
//! and, optionally, by one sampled value per component. Normalizing the
//! family means splitting the cochain as harmonic + coboundary and shifting
//! each local primitive by the potential; what survives on every edge is the
//! harmonic defect, and the interpolation rule extends the corrected
//! primitive across each annulus linearly in the harmonic value.

use crate::graph::{Cochain, DualGraph, GraphError, VertexFunction};
use crate::laurent::{dlog_integral, LaurentError, LaurentPolynomial};
use crate::padic::{LogBranch, PadicContext, PadicError, PadicNumber};
use num_rational::Ratio;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("base values live on a different graph than the cochain")]
    GraphMismatch,
    #[error("interpolation parameter {0} lies outside [0, 1]")]
    ParameterOutOfRange(Ratio<i64>),
    #[error("a branch of the logarithm is required for a dlog form")]
    BranchRequired,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// Which rational differential form is being integrated on an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// df for a Laurent polynomial f: the integral is f itself.
    Exact,
    /// df/f: the integral is plog of f, so a branch must be chosen.
    DLog,
}

/// Local primitives on the components, recorded by their pairwise
/// differences and optionally by one sampled value per component.
#[derive(Debug, Clone)]
pub struct PrimitiveFamily {
    cochain: Cochain,
    base_values: Option<VertexFunction>,
}

impl PrimitiveFamily {
    pub fn new(
        cochain: Cochain,
        base_values: Option<VertexFunction>,
    ) -> Result<Self, AssemblyError> {
        if let Some(base) = &base_values {
            if !Arc::ptr_eq(base.graph(), cochain.graph()) && base.graph() != cochain.graph() {
                return Err(AssemblyError::GraphMismatch);
            }
        }
        Ok(PrimitiveFamily {
            cochain,
            base_values,
        })
    }

    pub fn graph(&self) -> &Arc<DualGraph> {
        self.cochain.graph()
    }

    pub fn cochain(&self) -> &Cochain {
        &self.cochain
    }

    pub fn base_values(&self) -> Option<&VertexFunction> {
        self.base_values.as_ref()
    }

    /// Split the difference cochain as harmonic + coboundary. The returned
    /// offsets are the potential γ (pinned to exact zero at the first
    /// vertex); subtracting γ(v) from the primitive on component v leaves a
    /// family whose differences are exactly the harmonic part.
    pub fn normalize(&self) -> Result<(VertexFunction, Cochain), AssemblyError> {
        let (harmonic, gamma) = self.cochain.decompose()?;
        Ok((gamma, harmonic))
    }

    /// Sampled values of the corrected primitives, when samples were given.
    pub fn normalized_values(&self, offsets: &VertexFunction) -> Option<VertexFunction> {
        let base = self.base_values.as_ref()?;
        let values = base
            .values()
            .iter()
            .zip(offsets.values())
            .map(|(b, g)| b.sub(g))
            .collect();
        Some(VertexFunction::new(Arc::clone(base.graph()), values).expect("same graph"))
    }

    /// Refine every annulus into `m` thinner ones. The distributions say how
    /// each edge difference is split along its path; sampled values on the
    /// new interior components are accumulated from the tail sample, so the
    /// refined family records the same primitives seen at a finer scale.
    pub fn subdivide(
        &self,
        m: u32,
        distributions: &[Vec<PadicNumber>],
    ) -> Result<(PrimitiveFamily, Vec<Vec<usize>>), AssemblyError> {
        let (graph, edge_map) = self.graph().subdivide(m)?;
        let graph = Arc::new(graph);
        let lifted = self.cochain.lift(&graph, &edge_map, distributions)?;
        let base_values = match &self.base_values {
            None => None,
            Some(base) => {
                let mut values: Vec<Option<PadicNumber>> = vec![None; graph.vertex_count()];
                for (v, b) in base.values().iter().enumerate() {
                    values[v] = Some(b.clone());
                }
                for (edge, path) in self.graph().edges().iter().zip(&edge_map) {
                    let mut running = base.value(edge.tail).clone();
                    for &sub in &path[..path.len() - 1] {
                        running = running.add(&lifted.stored_values()[sub]);
                        let interior = graph.head(crate::graph::OrientedEdge::forward(sub));
                        values[interior] = Some(running.clone());
                    }
                }
                let values = values
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .expect("every interior vertex lies on one path");
                Some(VertexFunction::new(Arc::clone(&graph), values)?)
            }
        };
        Ok((
            PrimitiveFamily {
                cochain: lifted,
                base_values,
            },
            edge_map,
        ))
    }
}

/// Value of the corrected primitive at the point of an annulus cut out by
/// the parameter t in [0, 1]: the value at the tail end plus t times the
/// harmonic value carried by the annulus.
pub fn annulus_interpolate(
    base: &PadicNumber,
    harmonic: &PadicNumber,
    t: Ratio<i64>,
) -> Result<PadicNumber, AssemblyError> {
    if t < Ratio::from_integer(0) || t > Ratio::from_integer(1) {
        return Err(AssemblyError::ParameterOutOfRange(t));
    }
    let scaled = harmonic.mul_int(*t.numer()).div_int(*t.denom())?;
    Ok(base.add(&scaled))
}

/// Integrate a rational one-form on an annulus at a point: df pulls back to
/// the evaluation of f, df/f to the chosen branch of log of f.
pub fn integrate_rational_form(
    ctx: &PadicContext,
    kind: FormKind,
    f: &LaurentPolynomial,
    at: &PadicNumber,
    branch: Option<&LogBranch>,
) -> Result<PadicNumber, AssemblyError> {
    match kind {
        FormKind::Exact => Ok(f.evaluate(ctx, at)?),
        FormKind::DLog => {
            let branch = branch.ok_or(AssemblyError::BranchRequired)?;
            Ok(dlog_integral(f, ctx, at, branch)?)
        }
    }
}

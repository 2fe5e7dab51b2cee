//! The Tate curve K^×/q^Z and its Vologodsky logarithm.
//!
//! For ν_p(q) = n >= 3 the special fiber is an n-gon of rational curves, so
//! the dual graph is the cyclically oriented n-cycle. With one Coleman
//! primitive per vertex chosen as the logarithm of the window representative,
//! every difference cochain entry is exactly zero except the wrap-around
//! edge, which carries -plog(q). Decomposing that cochain and correcting the
//! local logarithm by the vertex potential yields the single-valued,
//! branch-independent homomorphism z -> plog(z) - ν(z) plog(q)/n.

use crate::graph::{Cochain, DualGraph, GraphError, VertexFunction};
use crate::padic::{plog, LogBranch, PadicContext, PadicError, PadicNumber, Valuation};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TateError {
    #[error("ν_p(q) = {0} is out of scope: the n-gon model needs ν_p(q) >= 3")]
    ReductionOutOfScope(i64),
    #[error("q must have a known leading digit")]
    ImpreciseModulus,
    #[error("points of the Tate curve are nonzero")]
    ZeroPoint,
    #[error("point valuation is undetermined at this precision")]
    ImpreciseValuation,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A point of K^×/q^Z, carried by any nonzero representative with a known
/// leading digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TatePoint {
    z: PadicNumber,
}

impl TatePoint {
    pub fn new(z: PadicNumber) -> Result<Self, TateError> {
        if z.is_exact_zero() {
            return Err(TateError::ZeroPoint);
        }
        if z.valuation().is_none() {
            return Err(TateError::ImpreciseValuation);
        }
        Ok(TatePoint { z })
    }

    pub fn representative(&self) -> &PadicNumber {
        &self.z
    }

    fn valuation(&self) -> i64 {
        match self.z.valuation() {
            Some(Valuation::Finite(v)) => v,
            _ => unreachable!("validated at construction"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateCurve {
    ctx: PadicContext,
    q: PadicNumber,
    n: i64,
}

/// Everything the integration pipeline produced on the way to one value.
#[derive(Debug, Clone)]
pub struct TateIntegration {
    pub cochain: Cochain,
    pub harmonic: Cochain,
    pub gamma: VertexFunction,
    /// Representative moved into the fundamental domain 0 <= ν < n.
    pub reduced: PadicNumber,
    /// Vertex of the n-gon the reduced representative lands on.
    pub vertex: usize,
    pub result: PadicNumber,
}

impl TateCurve {
    pub fn new(ctx: PadicContext, q: PadicNumber) -> Result<Self, TateError> {
        assert_eq!(ctx.prime(), q.prime(), "modulus prime differs from context");
        let n = match q.valuation() {
            Some(Valuation::Finite(v)) => v,
            Some(Valuation::Infinite) | None => return Err(TateError::ImpreciseModulus),
        };
        if n < 3 {
            return Err(TateError::ReductionOutOfScope(n));
        }
        Ok(TateCurve { ctx, q, n })
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn q(&self) -> &PadicNumber {
        &self.q
    }

    /// Number of components of the special fiber.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// The n-gon: vertices v0..v{n-1}, edge ek running vk -> v{k+1 mod n}.
    pub fn dual_graph(&self) -> Arc<DualGraph> {
        let n = self.n as usize;
        let vertices: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
        let edges = (0..n)
            .map(|k| {
                (
                    format!("e{k}"),
                    format!("v{k}"),
                    format!("v{}", (k + 1) % n),
                )
            })
            .collect();
        Arc::new(DualGraph::new(vertices, edges).expect("n-gon is well-formed"))
    }

    /// Difference cochain of the standard primitives: exact zero on every
    /// edge except the wrap-around, which carries -plog(q).
    pub fn cochain(&self, branch: &LogBranch) -> Result<Cochain, TateError> {
        let graph = self.dual_graph();
        let n = self.n as usize;
        let mut values = vec![PadicNumber::exact_zero(self.ctx.prime()); n];
        values[n - 1] = plog(&self.q, branch)?.neg();
        Ok(Cochain::new(graph, values)?)
    }

    /// The Vologodsky logarithm through the full pipeline: build the
    /// difference cochain, split off the vertex potential, reduce the point
    /// into the fundamental domain, and correct the local log.
    pub fn vologodsky_log(
        &self,
        point: &TatePoint,
        branch: &LogBranch,
    ) -> Result<PadicNumber, TateError> {
        Ok(self.integrate_explained(point, branch)?.result)
    }

    pub fn integrate_explained(
        &self,
        point: &TatePoint,
        branch: &LogBranch,
    ) -> Result<TateIntegration, TateError> {
        let cochain = self.cochain(branch)?;
        let (harmonic, gamma) = cochain.decompose()?;
        let v = point.valuation();
        let vertex = v.rem_euclid(self.n);
        let wraps = (v - vertex) / self.n;
        let reduced = if wraps == 0 {
            point.representative().clone()
        } else {
            point
                .representative()
                .mul(&self.q.pow(-wraps).map_err(TateError::Padic)?)
        };
        let result = plog(&reduced, branch)?.sub(gamma.value(vertex as usize));
        Ok(TateIntegration {
            cochain,
            harmonic,
            gamma,
            reduced,
            vertex: vertex as usize,
            result,
        })
    }

    /// log_q(z) = plog(z) - ν(z) plog(q) / n, the closed form the pipeline
    /// must reproduce.
    pub fn logq_closed_form(
        &self,
        point: &TatePoint,
        branch: &LogBranch,
    ) -> Result<PadicNumber, TateError> {
        let z = point.representative();
        let correction = plog(&self.q, branch)?
            .mul_int(point.valuation())
            .div_int(self.n)
            .map_err(TateError::Padic)?;
        Ok(plog(z, branch)?.sub(&correction))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::OrientedEdge;

    fn curve(prec: u32) -> TateCurve {
        let ctx = PadicContext::new(5, prec).unwrap();
        TateCurve::new(ctx, ctx.int(125)).unwrap()
    }

    #[test]
    fn modulus_validation() {
        let ctx = PadicContext::new(5, 8).unwrap();
        assert_eq!(
            TateCurve::new(ctx, ctx.int(5)).unwrap_err(),
            TateError::ReductionOutOfScope(1)
        );
        assert_eq!(
            TateCurve::new(ctx, ctx.int(7)).unwrap_err(),
            TateError::ReductionOutOfScope(0)
        );
        assert_eq!(
            TateCurve::new(ctx, ctx.exact_zero()).unwrap_err(),
            TateError::ImpreciseModulus
        );
        assert_eq!(TateCurve::new(ctx, ctx.int(250)).unwrap().n(), 3);
    }

    #[test]
    fn dual_graph_is_the_polygon() {
        let e = curve(8);
        let g = e.dual_graph();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.is_connected());
        assert_eq!(g.head(OrientedEdge::forward(2)), 0);
    }

    #[test]
    fn cochain_under_the_iwasawa_branch_vanishes() {
        // q = 125 is a power of p, so every entry of the difference cochain
        // is zero to working precision once log(p) is declared zero.
        let e = curve(8);
        let c = e.cochain(&LogBranch::iwasawa(5)).unwrap();
        assert!(c.stored_values().iter().all(|v| v.is_zero()));
        assert!(c.stored_values()[0].is_exact_zero());
        assert!(!c.stored_values()[2].is_exact_zero());
    }

    #[test]
    fn cochain_sees_the_branch_constant() {
        let e = curve(8);
        let ctx = *e.context();
        let c = e.cochain(&LogBranch::new(ctx.int(1))).unwrap();
        assert!(c.stored_values()[2].agrees(&ctx.int(-3)));
    }

    #[test]
    fn point_validation() {
        let ctx = PadicContext::new(5, 8).unwrap();
        assert_eq!(
            TatePoint::new(ctx.exact_zero()).unwrap_err(),
            TateError::ZeroPoint
        );
        assert_eq!(
            TatePoint::new(PadicNumber::zero_to_precision(5, 4)).unwrap_err(),
            TateError::ImpreciseValuation
        );
        assert!(TatePoint::new(ctx.int(6)).is_ok());
    }

    #[test]
    fn pipeline_reproduces_the_worked_value() {
        let e = curve(3);
        let z = TatePoint::new(e.context().int(6)).unwrap();
        let f = e.vologodsky_log(&z, &LogBranch::iwasawa(5)).unwrap();
        assert_eq!(f.to_string(), "55 + O(5^3)");
    }

    #[test]
    fn q_integrates_to_zero() {
        let e = curve(8);
        let q = TatePoint::new(e.q().clone()).unwrap();
        for branch in [LogBranch::iwasawa(5), LogBranch::new(e.context().int(17))] {
            assert!(e.vologodsky_log(&q, &branch).unwrap().is_zero());
        }
    }

    #[test]
    fn pipeline_matches_the_closed_form() {
        let e = curve(9);
        let ctx = *e.context();
        let branch = LogBranch::new(ctx.int(7));
        for z in [ctx.int(6), ctx.int(30), ctx.int(6 * 125), ctx.int(2)] {
            let pt = TatePoint::new(z).unwrap();
            let lhs = e.vologodsky_log(&pt, &branch).unwrap();
            let rhs = e.logq_closed_form(&pt, &branch).unwrap();
            assert!(lhs.agrees(&rhs), "pipeline {lhs:?} vs closed form {rhs:?}");
        }
    }

    #[test]
    fn result_is_branch_independent_and_q_periodic() {
        let e = curve(9);
        let ctx = *e.context();
        let z = TatePoint::new(ctx.int(30)).unwrap();
        let zq = TatePoint::new(ctx.int(30).mul(e.q())).unwrap();
        let branches = [
            LogBranch::iwasawa(5),
            LogBranch::new(ctx.int(1)),
            LogBranch::new(ctx.int(17)),
        ];
        let reference = e.vologodsky_log(&z, &branches[0]).unwrap();
        for b in &branches {
            assert!(e.vologodsky_log(&z, b).unwrap().agrees(&reference));
            assert!(e.vologodsky_log(&zq, b).unwrap().agrees(&reference));
        }
    }

    #[test]
    fn homomorphism_on_sample_points() {
        let e = curve(9);
        let ctx = *e.context();
        let branch = LogBranch::iwasawa(5);
        let pairs = [(6, 30), (2, 3), (30, 30)];
        for (a, b) in pairs {
            let fa = e
                .vologodsky_log(&TatePoint::new(ctx.int(a)).unwrap(), &branch)
                .unwrap();
            let fb = e
                .vologodsky_log(&TatePoint::new(ctx.int(b)).unwrap(), &branch)
                .unwrap();
            let fab = e
                .vologodsky_log(&TatePoint::new(ctx.int(a * b)).unwrap(), &branch)
                .unwrap();
            assert!(fab.agrees(&fa.add(&fb)));
        }
    }

    #[test]
    fn negative_valuation_points_reduce_correctly() {
        let e = curve(9);
        let ctx = *e.context();
        let z = ctx.int(6).div(&ctx.int(125)).unwrap(); // ν = -3
        let pt = TatePoint::new(z).unwrap();
        let f = e.vologodsky_log(&pt, &LogBranch::iwasawa(5)).unwrap();
        let six = e
            .vologodsky_log(&TatePoint::new(ctx.int(6)).unwrap(), &LogBranch::iwasawa(5))
            .unwrap();
        assert!(f.agrees(&six));
    }
}

//! Residual operators expressing the conformality, minimality, harmonicity
//! and holomorphicity conditions on sampled surfaces.
//!
//! Star conventions: operators that express parametrization-independent
//! identities (Hopf field, mean-curvature identity, harmonicity, the phi
//! fields, holomorphic structures) use the Hodge star of the induced metric.
//! `conformality_residual` deliberately uses the coordinate star: with the
//! metric star every immersed pair (f, gauss_map(f)) satisfies the defining
//! relation identically, so the coordinate star is what makes the residual a
//! test of the parametrization being conformal.

use crate::algebra::{membership, Membership, Multivector};
use crate::error::{Error, Result};

use super::grid::{GridShape, MetricField, OneFormField, ResidualField, SurfaceGrid};
use super::ops::{
    differential, exterior_derivative, flat_star, hodge_star, induced_metric, metric_of_form,
    wedge,
};

fn shapes_match(a: &GridShape, b: &GridShape) -> Result<()> {
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch("grid sizes differ".into()));
    }
    Ok(())
}

/// Max/mean of the two defining defects *df - N df and *df + df N with the
/// coordinate star, normalized by the largest node norm of df.
pub fn conformality_residual(f: &SurfaceGrid, gauss: &SurfaceGrid) -> Result<ResidualField> {
    shapes_match(&f.shape(), &gauss.shape())?;
    let df = differential(f)?;
    let star = flat_star(&df);
    let denom = df.max_node_norm().max(1e-300);
    let shape = f.shape();
    let mut values = Vec::with_capacity(shape.len());
    for idx in 0..shape.len() {
        let n = &gauss.values()[idx];
        let r1u = &star.comp_u[idx] - &n.mul_mv(&df.comp_u[idx]);
        let r1v = &star.comp_v[idx] - &n.mul_mv(&df.comp_v[idx]);
        let r2u = &star.comp_u[idx] + &df.comp_u[idx].mul_mv(n);
        let r2v = &star.comp_v[idx] + &df.comp_v[idx].mul_mv(n);
        let val = (r1u.quad_form() + r1v.quad_form() + r2u.quad_form() + r2v.quad_form()).sqrt();
        values.push(val / denom);
    }
    Ok(ResidualField::from_values("conformality", shape, values, None))
}

/// Hopf field (\*dN + N dN)/4 with the metric star of `f`.  Vanishes exactly
/// when f is minimal.
pub fn hopf_field(f: &SurfaceGrid, gauss: &SurfaceGrid, tol: f64) -> Result<OneFormField> {
    shapes_match(&f.shape(), &gauss.shape())?;
    let metric = induced_metric(f)?;
    let dn = differential(gauss)?;
    let star_dn = hodge_star(&dn, &metric, tol)?;
    let shape = f.shape();
    Ok(OneFormField::from_fn(f.r(), shape, |i, j| {
        let idx = shape.idx(i, j);
        let n = &gauss.values()[idx];
        let au = (&star_dn.comp_u[idx] + &n.mul_mv(&dn.comp_u[idx])).scale(0.25);
        let av = (&star_dn.comp_v[idx] + &n.mul_mv(&dn.comp_v[idx])).scale(0.25);
        (au, av)
    }))
}

/// Mean curvature vector from the divergence-form Laplace-Beltrami operator.
///
/// Sign convention: H of the unit sphere points toward the center
/// (quad_form(H) = 1 there); this is the sign under which
/// *dN + N dN + 2 H df vanishes.
pub fn mean_curvature(f: &SurfaceGrid, tol: f64) -> Result<SurfaceGrid> {
    let df = differential(f)?;
    let metric = metric_of_form(&df);
    let total = metric.shape.len();
    let degenerate = metric.degenerate_count(tol);
    if degenerate > 0 {
        return Err(Error::DegenerateMetric { count: degenerate, total });
    }
    let shape = f.shape();
    // P = (G f_u - F f_v)/W, Q = (E f_v - F f_u)/W
    let mut p = Vec::with_capacity(total);
    let mut q = Vec::with_capacity(total);
    for idx in 0..total {
        let (e, ff, g, w) = (metric.e[idx], metric.f[idx], metric.g[idx], metric.w[idx]);
        p.push(&df.comp_u[idx].scale(g / w) - &df.comp_v[idx].scale(ff / w));
        q.push(&df.comp_v[idx].scale(e / w) - &df.comp_u[idx].scale(ff / w));
    }
    let pform = OneFormField { r: f.r(), shape, comp_u: p, comp_v: q };
    // div = d_u(P) + d_v(Q); reuse the 1-form derivative plumbing
    let dp = differential_of_components(&pform)?;
    let values = (0..total)
        .map(|idx| dp[idx].scale(0.5 / metric.w[idx]))
        .collect();
    SurfaceGrid::from_values(f.r(), shape, values)
}

/// d_u(comp_u) + d_v(comp_v) per node (the divergence pattern).
fn differential_of_components(form: &OneFormField) -> Result<Vec<Multivector>> {
    // wrap the two component fields as grids and differentiate
    let gu = SurfaceGrid::from_values(form.r, form.shape, form.comp_u.clone())?;
    let gv = SurfaceGrid::from_values(form.r, form.shape, form.comp_v.clone())?;
    let dgu = differential(&gu)?;
    let dgv = differential(&gv)?;
    Ok((0..form.shape.len())
        .map(|idx| &dgu.comp_u[idx] + &dgv.comp_v[idx])
        .collect())
}

/// Residual of the identity *dN + N dN = -2 H df (and its mirror 2 df H),
/// normalized by the dominant field norm.
pub fn mean_curvature_identity_residual(
    f: &SurfaceGrid,
    gauss: &SurfaceGrid,
    tol: f64,
) -> Result<ResidualField> {
    shapes_match(&f.shape(), &gauss.shape())?;
    let metric = induced_metric(f)?;
    let df = differential(f)?;
    let dn = differential(gauss)?;
    let star_dn = hodge_star(&dn, &metric, tol)?;
    let h = mean_curvature(f, tol)?;
    let shape = f.shape();
    let denom = dn
        .max_node_norm()
        .max(2.0 * h.max_node_norm() * df.max_node_norm())
        .max(1e-300);
    let mut values = Vec::with_capacity(shape.len());
    for idx in 0..shape.len() {
        let n = &gauss.values()[idx];
        let hh = &h.values()[idx];
        let lhs_u = &star_dn.comp_u[idx] + &n.mul_mv(&dn.comp_u[idx]);
        let lhs_v = &star_dn.comp_v[idx] + &n.mul_mv(&dn.comp_v[idx]);
        let r1u = &lhs_u + &hh.mul_mv(&df.comp_u[idx]).scale(2.0);
        let r1v = &lhs_v + &hh.mul_mv(&df.comp_v[idx]).scale(2.0);
        let r2u = &lhs_u - &df.comp_u[idx].mul_mv(hh).scale(2.0);
        let r2v = &lhs_v - &df.comp_v[idx].mul_mv(hh).scale(2.0);
        let val = (r1u.quad_form() + r1v.quad_form() + r2u.quad_form() + r2v.quad_form()).sqrt();
        values.push(val / denom);
    }
    Ok(ResidualField::from_values(
        "mean-curvature-identity",
        shape,
        values,
        None,
    ))
}

/// Checks that every node is unit and a fixed parity class of the
/// grade-involution-transpose, i.e. sphere-valued in the sense needed by the
/// harmonicity lemma.  Returns the parity (0 or 1).
pub fn sphere_parity(f: &SurfaceGrid, tol: f64) -> Result<u8> {
    let dev = f.sphere_deviation();
    if dev > tol {
        return Err(Error::NotSphereValued(dev));
    }
    let mut parity = None;
    for v in f.values() {
        let at = v.alpha_top();
        let plus = (&at - v).norm();
        let minus = (&at + v).norm();
        let p = if plus <= minus { 0u8 } else { 1u8 };
        let defect = plus.min(minus);
        if defect > tol * v.norm().max(1.0) {
            return Err(Error::NotSphereValued(defect));
        }
        match parity {
            None => parity = Some(p),
            Some(q) if q != p => {
                return Err(Error::NotSphereValued(f64::NAN));
            }
            _ => {}
        }
    }
    Ok(parity.unwrap_or(1))
}

/// Max plaquette norm of d(f * star df) and d(star df * f), normalized by the
/// area density; zero for harmonic sphere maps.
pub fn harmonicity_residual(f: &SurfaceGrid, tol: f64) -> Result<ResidualField> {
    sphere_parity(f, tol)?;
    let df = differential(f)?;
    let metric = metric_of_form(&df);
    let star = hodge_star(&df, &metric, tol)?;
    let left = star.left_mul(f);
    let right = star.right_mul(f);
    let d_left = exterior_derivative(&left)?;
    let d_right = exterior_derivative(&right)?;
    let shape = f.shape();
    let denom = (0..shape.len())
        .map(|idx| df.node_norm(idx).powi(2) / metric.w[idx].max(1e-300))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let values = (0..shape.len())
        .map(|idx| {
            let w = metric.w[idx].max(1e-300);
            (d_left.density[idx].norm() + d_right.density[idx].norm()) / (w * denom)
        })
        .collect();
    Ok(ResidualField::from_values("harmonicity", shape, values, None))
}

/// The pair of quarter forms of a sphere map:
/// plus = (\*df + f df)/4 and minus = (\*df - f df)/4.
pub fn phi_fields(f: &SurfaceGrid, tol: f64) -> Result<(OneFormField, OneFormField)> {
    let parity = sphere_parity(f, tol)?;
    if parity != 1 {
        return Err(Error::NotSphereValued(f64::NAN));
    }
    let df = differential(f)?;
    let metric = metric_of_form(&df);
    let star = hodge_star(&df, &metric, tol)?;
    let shape = f.shape();
    let build = |sign: f64| {
        OneFormField::from_fn(f.r(), shape, |i, j| {
            let idx = shape.idx(i, j);
            let fv = &f.values()[idx];
            let pu = (&star.comp_u[idx] + &fv.mul_mv(&df.comp_u[idx]).scale(sign)).scale(0.25);
            let pv = (&star.comp_v[idx] + &fv.mul_mv(&df.comp_v[idx]).scale(sign)).scale(0.25);
            (pu, pv)
        })
    };
    Ok((build(1.0), build(-1.0)))
}

/// Which of the two holomorphic structures to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolomorphicSide {
    /// (dphi + N * star dphi)/2
    Left,
    /// (dphi + star dphi * N)/2
    Right,
}

/// Residual of the chosen holomorphic structure applied to phi, normalized
/// by the node norm of dphi.  `star_metric` supplies the conformal structure
/// (pass the base surface's induced metric); when omitted, phi's own metric
/// is used.
pub fn holomorphic_residual(
    phi: &SurfaceGrid,
    structure: &SurfaceGrid,
    side: HolomorphicSide,
    star_metric: Option<&MetricField>,
    tol: f64,
) -> Result<ResidualField> {
    shapes_match(&phi.shape(), &structure.shape())?;
    for n in structure.values() {
        if !membership(n, Membership::J, tol.max(1e-6))? {
            return Err(Error::InvalidArgument(
                "holomorphic structure field is not J-valued".into(),
            ));
        }
    }
    let dphi = differential(phi)?;
    let shape = phi.shape();
    let denom = dphi.max_node_norm();
    if denom == 0.0 {
        let values = vec![0.0; shape.len()];
        return Ok(ResidualField::from_values("holomorphic", shape, values, None));
    }
    let owned;
    let metric = match star_metric {
        Some(m) => m,
        None => {
            owned = metric_of_form(&dphi);
            &owned
        }
    };
    let star = hodge_star(&dphi, metric, tol)?;
    let mut values = Vec::with_capacity(shape.len());
    for idx in 0..shape.len() {
        let n = &structure.values()[idx];
        let (ru, rv) = match side {
            HolomorphicSide::Left => (
                (&dphi.comp_u[idx] + &n.mul_mv(&star.comp_u[idx])).scale(0.5),
                (&dphi.comp_v[idx] + &n.mul_mv(&star.comp_v[idx])).scale(0.5),
            ),
            HolomorphicSide::Right => (
                (&dphi.comp_u[idx] + &star.comp_u[idx].mul_mv(n)).scale(0.5),
                (&dphi.comp_v[idx] + &star.comp_v[idx].mul_mv(n)).scale(0.5),
            ),
        };
        values.push((ru.quad_form() + rv.quad_form()).sqrt() / denom);
    }
    Ok(ResidualField::from_values("holomorphic", shape, values, None))
}

/// Plaquette norms of df ^ dfc and dfc ^ df, normalized; the isothermic-dual
/// test.
pub fn isothermic_dual_residual(f: &SurfaceGrid, fc: &SurfaceGrid) -> Result<ResidualField> {
    shapes_match(&f.shape(), &fc.shape())?;
    let df = differential(f)?;
    let dfc = differential(fc)?;
    let w1 = wedge(&df, &dfc);
    let w2 = wedge(&dfc, &df);
    let shape = f.shape();
    let denom = (df.max_node_norm() * dfc.max_node_norm()).max(1e-300);
    let values = (0..shape.len())
        .map(|idx| (w1.density[idx].norm() + w2.density[idx].norm()) / denom)
        .collect();
    Ok(ResidualField::from_values("isothermic-dual", shape, values, None))
}

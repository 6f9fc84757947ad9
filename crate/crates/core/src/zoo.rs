//! Generators for analytic test surfaces with known ground-truth properties.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Multivector;
use crate::calculus::{GridShape, SurfaceGrid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Plane,
    RoundSphere,
    Catenoid,
    Helicoid,
    CliffordTorus,
    Lawson,
    Graph,
}

impl SurfaceKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "plane" => Self::Plane,
            "round_sphere" | "sphere" => Self::RoundSphere,
            "catenoid" => Self::Catenoid,
            "helicoid" => Self::Helicoid,
            "clifford_torus" | "torus" => Self::CliffordTorus,
            "lawson" => Self::Lawson,
            "graph" => Self::Graph,
            other => {
                return Err(Error::InvalidSurfaceSpec(format!(
                    "unknown surface '{other}'"
                )))
            }
        })
    }

    /// Ambient dimension of the generated grid.
    pub fn ambient(&self) -> u8 {
        match self {
            Self::CliffordTorus | Self::Lawson => 4,
            _ => 3,
        }
    }
}

/// A named surface sampled onto a rectangular, optionally periodic grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub params: BTreeMap<String, f64>,
    pub nu: usize,
    pub nv: usize,
    /// [u0, u1, v0, v1]
    pub domain: [f64; 4],
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl SurfaceSpec {
    /// Spec with the conventional domain and periodicity for `kind`.
    ///
    /// The catenoid is sampled in isothermal coordinates on a periodic u
    /// circle; the helicoid is its conjugate (sign frozen so that the
    /// conjugate relation dh = -*df holds against the catenoid) and is not
    /// u-periodic; the round sphere uses plain spherical angles, which are
    /// deliberately not isothermal.
    pub fn new(kind: SurfaceKind, nu: usize, nv: usize) -> Self {
        use std::f64::consts::PI;
        let tau = 2.0 * PI;
        let (domain, periodic_u, periodic_v) = match kind {
            SurfaceKind::Plane | SurfaceKind::Graph => ([0.0, 1.0, 0.0, 1.0], false, false),
            SurfaceKind::RoundSphere => ([0.0, tau, 0.4, PI - 0.4], true, false),
            SurfaceKind::Catenoid => ([0.0, tau, -1.0, 1.0], true, false),
            SurfaceKind::Helicoid => ([0.0, tau, -1.0, 1.0], false, false),
            SurfaceKind::CliffordTorus | SurfaceKind::Lawson => {
                ([0.0, tau, 0.0, tau], true, true)
            }
        };
        let mut params = BTreeMap::new();
        match kind {
            SurfaceKind::Lawson => {
                params.insert("m".into(), 2.0);
                params.insert("k".into(), 1.0);
            }
            SurfaceKind::Graph => {
                params.insert("c20".into(), 0.3);
                params.insert("c02".into(), -0.2);
                params.insert("c11".into(), 0.25);
                params.insert("c10".into(), 0.0);
                params.insert("c01".into(), 0.0);
            }
            _ => {}
        }
        Self {
            kind,
            params,
            nu,
            nv,
            domain,
            periodic_u,
            periodic_v,
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn param(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 8 || self.nv < 8 {
            return Err(Error::InvalidSurfaceSpec(format!(
                "grid sizes must be at least 8, got {}x{}",
                self.nu, self.nv
            )));
        }
        if self.domain[1] <= self.domain[0] || self.domain[3] <= self.domain[2] {
            return Err(Error::InvalidSurfaceSpec("domain lengths must be positive".into()));
        }
        if self.kind == SurfaceKind::Lawson {
            let m = self.param("m", 2.0);
            let k = self.param("k", 1.0);
            if m.fract() != 0.0 || k.fract() != 0.0 || !(m > k && k >= 1.0) {
                return Err(Error::InvalidSurfaceSpec(
                    "lawson requires integers m > k >= 1".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> GridShape {
        let lu = self.domain[1] - self.domain[0];
        let lv = self.domain[3] - self.domain[2];
        let du = if self.periodic_u { lu / self.nu as f64 } else { lu / (self.nu - 1) as f64 };
        let dv = if self.periodic_v { lv / self.nv as f64 } else { lv / (self.nv - 1) as f64 };
        GridShape {
            nu: self.nu,
            nv: self.nv,
            du,
            dv,
            periodic_u: self.periodic_u,
            periodic_v: self.periodic_v,
        }
    }
}

/// Analytic position of the surface at parameter (u, v).
pub fn analytic_point(spec: &SurfaceSpec, u: f64, v: f64) -> Multivector {
    let r = spec.kind.ambient();
    let comps: Vec<f64> = match spec.kind {
        SurfaceKind::Plane => vec![u, v, 0.0],
        SurfaceKind::Graph => {
            let g = spec.param("c20", 0.0) * u * u
                + spec.param("c02", 0.0) * v * v
                + spec.param("c11", 0.0) * u * v
                + spec.param("c10", 0.0) * u
                + spec.param("c01", 0.0) * v;
            vec![u, v, g]
        }
        SurfaceKind::RoundSphere => vec![v.sin() * u.cos(), v.sin() * u.sin(), v.cos()],
        SurfaceKind::Catenoid => vec![v.cosh() * u.cos(), v.cosh() * u.sin(), v],
        SurfaceKind::Helicoid => vec![-v.sinh() * u.sin(), v.sinh() * u.cos(), -u],
        SurfaceKind::CliffordTorus => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![s * u.cos(), s * u.sin(), s * v.cos(), s * v.sin()]
        }
        SurfaceKind::Lawson => {
            let m = spec.param("m", 2.0);
            let k = spec.param("k", 1.0);
            vec![
                (m * u).cos() * v.cos(),
                (m * u).sin() * v.cos(),
                (k * u).cos() * v.sin(),
                (k * u).sin() * v.sin(),
            ]
        }
    };
    Multivector::from_vector(r, &comps)
}

/// Analytic partial derivatives (f_u, f_v) at parameter (u, v), for use as
/// finite-difference oracles.
pub fn analytic_derivatives(spec: &SurfaceSpec, u: f64, v: f64) -> (Multivector, Multivector) {
    let r = spec.kind.ambient();
    let (cu, cv): (Vec<f64>, Vec<f64>) = match spec.kind {
        SurfaceKind::Plane => (vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]),
        SurfaceKind::Graph => (
            vec![
                1.0,
                0.0,
                2.0 * spec.param("c20", 0.0) * u + spec.param("c11", 0.0) * v + spec.param("c10", 0.0),
            ],
            vec![
                0.0,
                1.0,
                2.0 * spec.param("c02", 0.0) * v + spec.param("c11", 0.0) * u + spec.param("c01", 0.0),
            ],
        ),
        SurfaceKind::RoundSphere => (
            vec![-v.sin() * u.sin(), v.sin() * u.cos(), 0.0],
            vec![v.cos() * u.cos(), v.cos() * u.sin(), -v.sin()],
        ),
        SurfaceKind::Catenoid => (
            vec![-v.cosh() * u.sin(), v.cosh() * u.cos(), 0.0],
            vec![v.sinh() * u.cos(), v.sinh() * u.sin(), 1.0],
        ),
        SurfaceKind::Helicoid => (
            vec![-v.sinh() * u.cos(), -v.sinh() * u.sin(), -1.0],
            vec![-v.cosh() * u.sin(), v.cosh() * u.cos(), 0.0],
        ),
        SurfaceKind::CliffordTorus => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            (
                vec![-s * u.sin(), s * u.cos(), 0.0, 0.0],
                vec![0.0, 0.0, -s * v.sin(), s * v.cos()],
            )
        }
        SurfaceKind::Lawson => {
            let m = spec.param("m", 2.0);
            let k = spec.param("k", 1.0);
            (
                vec![
                    -m * (m * u).sin() * v.cos(),
                    m * (m * u).cos() * v.cos(),
                    -k * (k * u).sin() * v.sin(),
                    k * (k * u).cos() * v.sin(),
                ],
                vec![
                    -(m * u).cos() * v.sin(),
                    -(m * u).sin() * v.sin(),
                    (k * u).cos() * v.cos(),
                    (k * u).sin() * v.cos(),
                ],
            )
        }
    };
    (Multivector::from_vector(r, &cu), Multivector::from_vector(r, &cv))
}

/// Samples the surface onto its grid.
pub fn generate(spec: &SurfaceSpec) -> Result<SurfaceGrid> {
    spec.validate()?;
    let shape = spec.shape();
    let r = spec.kind.ambient();
    Ok(SurfaceGrid::from_fn(r, shape, |i, j| {
        let u = spec.domain[0] + i as f64 * shape.du;
        let v = spec.domain[2] + j as f64 * shape.dv;
        analytic_point(spec, u, v)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{flat_star, OneFormField};

    #[test]
    fn sphere_valued_generators_are_unit() {
        for kind in [SurfaceKind::RoundSphere, SurfaceKind::CliffordTorus, SurfaceKind::Lawson] {
            let spec = SurfaceSpec::new(kind, 16, 12);
            let grid = generate(&spec).unwrap();
            assert!(grid.sphere_deviation() < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn lawson_requires_integer_orders() {
        let spec = SurfaceSpec::new(SurfaceKind::Lawson, 16, 16).with_param("m", 1.5);
        assert!(generate(&spec).is_err());
        let spec = SurfaceSpec::new(SurfaceKind::Lawson, 16, 16)
            .with_param("m", 1.0)
            .with_param("k", 1.0);
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn periodic_wrap_is_exact() {
        let spec = SurfaceSpec::new(SurfaceKind::Catenoid, 16, 9);
        let grid = generate(&spec).unwrap();
        let shape = grid.shape();
        // the sample at i = 0 equals the analytic value at u1
        for j in 0..shape.nv {
            let v = spec.domain[2] + j as f64 * shape.dv;
            let wrapped = analytic_point(&spec, spec.domain[1], v);
            let diff = &wrapped - grid.at(0, j);
            assert!(diff.norm() < 1e-12);
        }
    }

    #[test]
    fn clifford_torus_metric_is_isothermal() {
        let spec = SurfaceSpec::new(SurfaceKind::CliffordTorus, 24, 16);
        let grid = generate(&spec).unwrap();
        let metric = crate::calculus::induced_metric(&grid).unwrap();
        for idx in 0..metric.shape.len() {
            assert!((metric.e[idx] - 0.5).abs() < 1e-12);
            assert!((metric.g[idx] - 0.5).abs() < 1e-12);
            assert!(metric.f[idx].abs() < 1e-12);
        }
    }

    #[test]
    fn helicoid_is_the_catenoid_conjugate() {
        // dh = -*df against the analytic derivatives; this is the check that
        // froze the helicoid sign.
        let cat = SurfaceSpec::new(SurfaceKind::Catenoid, 12, 9);
        let hel = SurfaceSpec::new(SurfaceKind::Helicoid, 12, 9);
        let shape = cat.shape();
        let df = OneFormField::from_fn(3, shape, |i, j| {
            let u = i as f64 * shape.du;
            let v = cat.domain[2] + j as f64 * shape.dv;
            analytic_derivatives(&cat, u, v)
        });
        let dh = OneFormField::from_fn(3, shape, |i, j| {
            let u = i as f64 * shape.du;
            let v = hel.domain[2] + j as f64 * shape.dv;
            analytic_derivatives(&hel, u, v)
        });
        // catenoid coordinates are isothermal, so the coordinate star is the
        // metric star here
        let minus_star = flat_star(&df).scale(-1.0);
        for idx in 0..shape.len() {
            assert!((&dh.comp_u[idx] - &minus_star.comp_u[idx]).norm() < 1e-12);
            assert!((&dh.comp_v[idx] - &minus_star.comp_v[idx]).norm() < 1e-12);
        }
    }

    #[test]
    fn plane_is_flat_in_the_first_coordinates() {
        let spec = SurfaceSpec::new(SurfaceKind::Plane, 8, 8);
        let grid = generate(&spec).unwrap();
        let v = grid.at(3, 5);
        assert_eq!(v.vector_components(), vec![3.0 / 7.0, 5.0 / 7.0, 0.0]);
    }
}

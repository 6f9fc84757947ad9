//! Sampled maps into Cl(V_r) and the discrete field types living on them.

use serde::{Deserialize, Serialize};

use crate::algebra::{BladeMask, Multivector};
use crate::error::{Error, Result};
use crate::report::ResidualReport;

/// Rectangular parameter grid: node (i, j) sits at (u0 + i du, v0 + j dv).
/// On a periodic axis the wrap node is excluded, so du = L/nu; otherwise
/// du = L/(nu - 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub nu: usize,
    pub nv: usize,
    pub du: f64,
    pub dv: f64,
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl GridShape {
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nu && j < self.nv);
        i * self.nv + j
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nv = self.nv;
        (0..self.nu).flat_map(move |i| (0..nv).map(move |j| (i, j)))
    }

    fn check_axis(n: usize, periodic: bool) -> Result<()> {
        let needed = if periodic { 3 } else { 5 };
        if n < needed {
            return Err(Error::GridTooSmall { needed, got: n });
        }
        Ok(())
    }

    pub fn check_differentiable(&self) -> Result<()> {
        Self::check_axis(self.nu, self.periodic_u)?;
        Self::check_axis(self.nv, self.periodic_v)
    }

    pub fn same_shape(&self, other: &GridShape) -> bool {
        self.nu == other.nu && self.nv == other.nv
    }
}

/// Sampled map from the parameter grid into Cl(V_r), row-major in u.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    r: u8,
    shape: GridShape,
    values: Vec<Multivector>,
}

impl SurfaceGrid {
    pub fn from_fn(r: u8, shape: GridShape, mut f: impl FnMut(usize, usize) -> Multivector) -> Self {
        let mut values = Vec::with_capacity(shape.len());
        for i in 0..shape.nu {
            for j in 0..shape.nv {
                let v = f(i, j);
                assert_eq!(v.r(), r, "node value dimension mismatch");
                values.push(v);
            }
        }
        Self { r, shape, values }
    }

    pub fn from_values(r: u8, shape: GridShape, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values, got {}",
                shape.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| v.r() != r) {
            return Err(Error::DimensionMismatch(r, bad.r()));
        }
        Ok(Self { r, shape, values })
    }

    pub fn constant(r: u8, shape: GridShape, value: Multivector) -> Self {
        assert_eq!(value.r(), r);
        Self {
            r,
            shape,
            values: vec![value; shape.len()],
        }
    }

    #[inline]
    pub fn r(&self) -> u8 {
        self.r
    }

    #[inline]
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Multivector {
        &self.values[self.shape.idx(i, j)]
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    pub fn set_periodic(&mut self, periodic_u: bool, periodic_v: bool) {
        self.shape.periodic_u = periodic_u;
        self.shape.periodic_v = periodic_v;
    }

    pub fn map(&self, mut op: impl FnMut(&Multivector) -> Multivector) -> Self {
        Self {
            r: self.r,
            shape: self.shape,
            values: self.values.iter().map(|v| op(v)).collect(),
        }
    }

    /// Nodewise combination of two same-shape grids.  The resulting flags
    /// are the intersection of both periodicities.
    pub fn zip_map(
        &self,
        other: &SurfaceGrid,
        mut op: impl FnMut(&Multivector, &Multivector) -> Multivector,
    ) -> Result<Self> {
        if !self.shape.same_shape(&other.shape) {
            return Err(Error::ShapeMismatch("grid sizes differ".into()));
        }
        if self.r != other.r {
            return Err(Error::DimensionMismatch(self.r, other.r));
        }
        let mut shape = self.shape;
        shape.periodic_u = self.shape.periodic_u && other.shape.periodic_u;
        shape.periodic_v = self.shape.periodic_v && other.shape.periodic_v;
        Ok(Self {
            r: self.r,
            shape,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &SurfaceGrid) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn max_node_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// Worst deviation from the unit sphere of Cl(V_r) over all nodes.
    pub fn sphere_deviation(&self) -> f64 {
        self.values
            .iter()
            .fold(0.0f64, |m, v| m.max((v.quad_form() - 1.0).abs()))
    }

    /// Worst off-grade mass relative to the node norm.
    pub fn grade_purity_deviation(&self, k: u32) -> f64 {
        self.values
            .iter()
            .fold(0.0f64, |m, v| m.max(v.off_grade_norm(k) / v.norm().max(1e-300)))
    }
}

/// Clifford-valued discrete 1-form, components per grid node.
#[derive(Debug, Clone)]
pub struct OneFormField {
    pub r: u8,
    pub shape: GridShape,
    pub comp_u: Vec<Multivector>,
    pub comp_v: Vec<Multivector>,
}

impl OneFormField {
    pub fn zero(r: u8, shape: GridShape) -> Self {
        Self {
            r,
            shape,
            comp_u: vec![Multivector::zero(r); shape.len()],
            comp_v: vec![Multivector::zero(r); shape.len()],
        }
    }

    pub fn from_fn(
        r: u8,
        shape: GridShape,
        mut f: impl FnMut(usize, usize) -> (Multivector, Multivector),
    ) -> Self {
        let mut comp_u = Vec::with_capacity(shape.len());
        let mut comp_v = Vec::with_capacity(shape.len());
        for i in 0..shape.nu {
            for j in 0..shape.nv {
                let (cu, cv) = f(i, j);
                comp_u.push(cu);
                comp_v.push(cv);
            }
        }
        Self { r, shape, comp_u, comp_v }
    }

    #[inline]
    pub fn u_at(&self, i: usize, j: usize) -> &Multivector {
        &self.comp_u[self.shape.idx(i, j)]
    }

    #[inline]
    pub fn v_at(&self, i: usize, j: usize) -> &Multivector {
        &self.comp_v[self.shape.idx(i, j)]
    }

    /// Nodewise map applied to both components.
    pub fn map(&self, mut op: impl FnMut(&Multivector) -> Multivector) -> Self {
        Self {
            r: self.r,
            shape: self.shape,
            comp_u: self.comp_u.iter().map(|v| op(v)).collect(),
            comp_v: self.comp_v.iter().map(|v| op(v)).collect(),
        }
    }

    /// sqrt(Q(omega_u) + Q(omega_v)) at one node.
    pub fn node_norm(&self, idx: usize) -> f64 {
        (self.comp_u[idx].quad_form() + self.comp_v[idx].quad_form()).sqrt()
    }

    pub fn max_node_norm(&self) -> f64 {
        (0..self.shape.len()).fold(0.0f64, |m, idx| m.max(self.node_norm(idx)))
    }

    pub fn add(&self, other: &OneFormField) -> OneFormField {
        assert!(self.shape.same_shape(&other.shape));
        Self {
            r: self.r,
            shape: self.shape,
            comp_u: self.comp_u.iter().zip(&other.comp_u).map(|(a, b)| a + b).collect(),
            comp_v: self.comp_v.iter().zip(&other.comp_v).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &OneFormField) -> OneFormField {
        assert!(self.shape.same_shape(&other.shape));
        Self {
            r: self.r,
            shape: self.shape,
            comp_u: self.comp_u.iter().zip(&other.comp_u).map(|(a, b)| a - b).collect(),
            comp_v: self.comp_v.iter().zip(&other.comp_v).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> OneFormField {
        self.map(|v| v.scale(s))
    }

    /// Left multiplication by a nodewise field: p -> g(p) * omega(p).
    pub fn left_mul(&self, g: &SurfaceGrid) -> OneFormField {
        assert!(self.shape.same_shape(&g.shape()));
        OneFormField {
            r: self.r,
            shape: self.shape,
            comp_u: self
                .comp_u
                .iter()
                .zip(g.values())
                .map(|(w, x)| x.mul_mv(w))
                .collect(),
            comp_v: self
                .comp_v
                .iter()
                .zip(g.values())
                .map(|(w, x)| x.mul_mv(w))
                .collect(),
        }
    }

    /// Right multiplication by a nodewise field: p -> omega(p) * g(p).
    pub fn right_mul(&self, g: &SurfaceGrid) -> OneFormField {
        assert!(self.shape.same_shape(&g.shape()));
        OneFormField {
            r: self.r,
            shape: self.shape,
            comp_u: self
                .comp_u
                .iter()
                .zip(g.values())
                .map(|(w, x)| w.mul_mv(x))
                .collect(),
            comp_v: self
                .comp_v
                .iter()
                .zip(g.values())
                .map(|(w, x)| w.mul_mv(x))
                .collect(),
        }
    }
}

/// Discrete 2-form: the coefficient of du ^ dv per node.
#[derive(Debug, Clone)]
pub struct TwoFormField {
    pub r: u8,
    pub shape: GridShape,
    pub density: Vec<Multivector>,
}

impl TwoFormField {
    pub fn max_node_norm(&self) -> f64 {
        self.density.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }
}

/// Per-node first fundamental form and area density.
#[derive(Debug, Clone)]
pub struct MetricField {
    pub shape: GridShape,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub w: Vec<f64>,
}

impl MetricField {
    /// Nodes where the area density is at or below `tol`.
    pub fn degenerate_count(&self, tol: f64) -> usize {
        self.w.iter().filter(|&&w| w <= tol).count()
    }

    pub fn max_abs_difference(&self, other: &MetricField) -> f64 {
        let cmp = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        };
        cmp(&self.e, &other.e)
            .max(cmp(&self.f, &other.f))
            .max(cmp(&self.g, &other.g))
    }
}

/// A residual report together with its per-node values (for CSV export).
#[derive(Debug, Clone)]
pub struct ResidualField {
    pub report: ResidualReport,
    pub values: Vec<f64>,
    pub shape: GridShape,
}

impl ResidualField {
    /// Builds the max/mean report from per-node values; masked nodes are
    /// excluded from both and counted in the notes.
    pub fn from_values(
        name: impl Into<String>,
        shape: GridShape,
        values: Vec<f64>,
        mask: Option<&[bool]>,
    ) -> Self {
        let mut max = 0.0f64;
        let mut sum = 0.0;
        let mut used = 0usize;
        for (idx, &v) in values.iter().enumerate() {
            if let Some(m) = mask {
                if m[idx] {
                    continue;
                }
            }
            max = max.max(v);
            sum += v;
            used += 1;
        }
        let mean = if used > 0 { sum / used as f64 } else { 0.0 };
        let masked = values.len() - used;
        let mut report = ResidualReport::new(name, max, mean, shape.nu, shape.nv);
        if masked > 0 {
            report.notes = format!("{masked} nodes masked");
        }
        Self { report, values, shape }
    }

    /// CSV dump with columns i,j,u,v,residual (u, v relative to the grid
    /// origin).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,u,v,residual\n");
        for (i, j) in self.shape.nodes() {
            let idx = self.shape.idx(i, j);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i,
                j,
                i as f64 * self.shape.du,
                j as f64 * self.shape.dv,
                self.values[idx]
            ));
        }
        out
    }
}

// SurfaceGrid JSON: values are bare term lists, row-major.
#[derive(Serialize, Deserialize)]
struct GridWire {
    r: u8,
    nu: usize,
    nv: usize,
    du: f64,
    dv: f64,
    periodic_u: bool,
    periodic_v: bool,
    values: Vec<Vec<(BladeMask, f64)>>,
}

impl Serialize for SurfaceGrid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = GridWire {
            r: self.r,
            nu: self.shape.nu,
            nv: self.shape.nv,
            du: self.shape.du,
            dv: self.shape.dv,
            periodic_u: self.shape.periodic_u,
            periodic_v: self.shape.periodic_v,
            values: self.values.iter().map(|v| v.terms().to_vec()).collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SurfaceGrid {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = GridWire::deserialize(deserializer)?;
        let shape = GridShape {
            nu: wire.nu,
            nv: wire.nv,
            du: wire.du,
            dv: wire.dv,
            periodic_u: wire.periodic_u,
            periodic_v: wire.periodic_v,
        };
        let values = wire
            .values
            .into_iter()
            .map(|terms| Multivector::from_terms(wire.r, terms))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SurfaceGrid::from_values(wire.r, shape, values).map_err(serde::de::Error::custom)
    }
}

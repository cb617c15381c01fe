use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::mra1d::{Mra, SampledFunction1D};

use super::geometry::{support_polygon, SupportPolygon};
use super::index::{Cone, DomainRule, ShearletIndex, ShearletSystemSpec};

/// A separable generator evaluated lazily from its two 1D factors.
#[derive(Clone, Debug)]
pub struct Generator2D {
    kind: Cone,
    phi: Arc<SampledFunction1D>,
    psi: Arc<SampledFunction1D>,
}

impl Generator2D {
    pub fn kind(&self) -> Cone {
        self.kind
    }

    /// `phi1(x1) phi1(x2)`, `psi1(x1) phi1(x2)` or `psi1(x2) phi1(x1)`.
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        match self.kind {
            Cone::Phi => self.phi.eval(x1) * self.phi.eval(x2),
            Cone::Psi => self.psi.eval(x1) * self.phi.eval(x2),
            Cone::PsiTilde => self.psi.eval(x2) * self.phi.eval(x1),
        }
    }
}

/// The three generators `(phi, psi, psi_tilde)` built from 1D samples.
pub fn make_generators(
    phi1: &SampledFunction1D,
    psi1: &SampledFunction1D,
) -> Result<[Generator2D; 3]> {
    if phi1.level() != psi1.level() {
        return Err(Error::LevelMismatch(phi1.level(), psi1.level()));
    }
    let phi = Arc::new(phi1.clone());
    let psi = Arc::new(psi1.clone());
    let make = |kind| Generator2D {
        kind,
        phi: Arc::clone(&phi),
        psi: Arc::clone(&psi),
    };
    Ok([make(Cone::Phi), make(Cone::Psi), make(Cone::PsiTilde)])
}

/// Samples of one element on an axis-aligned dyadic grid.
///
/// Point `(i1, i2)` sits at `(origin.0 + i1 2^-level_x1, origin.1 + i2 2^-level_x2)`;
/// values are stored row by row (`x2` outer).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction2D {
    pub level_x1: u32,
    pub level_x2: u32,
    pub origin: (Exact, Exact),
    pub nx1: usize,
    pub nx2: usize,
    pub values: Vec<f64>,
    pub support: SupportPolygon,
}

impl SampledFunction2D {
    pub fn step_x1(&self) -> f64 {
        (-(self.level_x1 as f64)).exp2()
    }

    pub fn step_x2(&self) -> f64 {
        (-(self.level_x2 as f64)).exp2()
    }

    pub fn x1(&self, i1: usize) -> f64 {
        self.origin.0.to_f64() + i1 as f64 * self.step_x1()
    }

    pub fn x2(&self, i2: usize) -> f64 {
        self.origin.1.to_f64() + i2 as f64 * self.step_x2()
    }

    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        self.values[i2 * self.nx1 + i1]
    }

    pub fn row(&self, i2: usize) -> &[f64] {
        &self.values[i2 * self.nx1..(i2 + 1) * self.nx1]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Riemann-sum squared `L^2` norm.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.step_x1() * self.step_x2()
    }

    /// Pointwise linear combination of functions on the same grid.
    pub fn combine(parts: &[(f64, &SampledFunction2D)]) -> Result<SampledFunction2D> {
        let (_, first) = parts.first().ok_or(Error::EmptySelection)?;
        let mut out = (*first).clone();
        out.values.iter_mut().for_each(|v| *v = 0.0);
        for (c, f) in parts {
            if f.level_x1 != first.level_x1
                || f.level_x2 != first.level_x2
                || f.origin != first.origin
                || f.nx1 != first.nx1
                || f.nx2 != first.nx2
            {
                return Err(Error::InvalidArgument("grids differ".into()));
            }
            for (o, v) in out.values.iter_mut().zip(&f.values) {
                *o += c * v;
            }
        }
        Ok(out)
    }

    /// Same values on a larger grid at the same levels.
    pub fn padded_to(&self, origin: (Exact, Exact), nx1: usize, nx2: usize) -> Result<Self> {
        let off1 = (&self.origin.0 - &origin.0).mul_pow2(self.level_x1 as i64);
        let off2 = (&self.origin.1 - &origin.1).mul_pow2(self.level_x2 as i64);
        let (o1, o2) = match (off1.is_integer(), off2.is_integer()) {
            (true, true) => (
                off1.floor().to_i64().unwrap_or(-1),
                off2.floor().to_i64().unwrap_or(-1),
            ),
            _ => {
                return Err(Error::InvalidArgument(
                    "origins not on a common grid".into(),
                ))
            }
        };
        if o1 < 0 || o2 < 0 || o1 as usize + self.nx1 > nx1 || o2 as usize + self.nx2 > nx2 {
            return Err(Error::InvalidArgument("target grid too small".into()));
        }
        let mut values = vec![0.0; nx1 * nx2];
        for i2 in 0..self.nx2 {
            let dst = (i2 + o2 as usize) * nx1 + o1 as usize;
            values[dst..dst + self.nx1].copy_from_slice(self.row(i2));
        }
        Ok(SampledFunction2D {
            origin,
            nx1,
            nx2,
            values,
            ..self.clone()
        })
    }
}

/// Float parameters of one element for row-by-row evaluation.
#[derive(Clone, Debug)]
pub(crate) struct RowKernel {
    cone: Cone,
    scale: f64,
    a: f64,
    b: f64,
    k: f64,
    /// Wavelet offset `c1 m` (second component for `PSI_TILDE`).
    o_psi: f64,
    /// Scaling offset.
    o_phi: f64,
    /// Extra scaling offset for `PHI` in `x1`.
    o_phi_x1: f64,
    pub(crate) y_range: (f64, f64),
}

/// A system spec bound to concrete cascade samples.
#[derive(Clone, Debug)]
pub struct ShearletSystem {
    spec: ShearletSystemSpec,
    mra: Mra,
    s: Exact,
}

impl ShearletSystem {
    /// Builds the Daubechies generators of `spec.order` at `cascade_level`.
    pub fn build(spec: ShearletSystemSpec, cascade_level: u32) -> Result<Self> {
        let mra = Mra::daubechies(spec.order, cascade_level)?;
        Self::from_mra(spec, mra)
    }

    pub fn from_mra(spec: ShearletSystemSpec, mra: Mra) -> Result<Self> {
        if mra.filter.order() != spec.order {
            return Err(Error::InvalidArgument(format!(
                "filter order {} does not match spec order {}",
                mra.filter.order(),
                spec.order
            )));
        }
        let s = Exact::from_int(spec.support_length());
        Ok(ShearletSystem { spec, mra, s })
    }

    pub fn spec(&self) -> &ShearletSystemSpec {
        &self.spec
    }

    pub fn mra(&self) -> &Mra {
        &self.mra
    }

    pub fn cascade_level(&self) -> u32 {
        self.mra.level()
    }

    pub fn generators(&self) -> [Generator2D; 3] {
        make_generators(&self.mra.phi, &self.mra.psi).expect("levels agree by construction")
    }

    pub fn support_polygon(&self, idx: &ShearletIndex) -> SupportPolygon {
        support_polygon(idx, &self.spec.c, &self.s, &self.s)
    }

    pub fn enumerate(&self) -> Vec<ShearletIndex> {
        enumerate(&self.spec)
    }

    pub(crate) fn kernel(&self, idx: &ShearletIndex) -> RowKernel {
        let bb = self.support_polygon(idx).bounding_box_f64();
        RowKernel {
            y_range: (bb[1], bb[3]),
            ..self.point_kernel(idx)
        }
    }

    /// Kernel without the exact support rows, for pointwise evaluation.
    fn point_kernel(&self, idx: &ShearletIndex) -> RowKernel {
        let c1 = self.spec.c.0.to_f64();
        let c2 = self.spec.c.1.to_f64();
        let (m1, m2) = (idx.m.0 as f64, idx.m.1 as f64);
        let a = (idx.j as f64).exp2();
        let b = ((idx.j / 2) as f64).exp2();
        let scale = (0.75 * idx.j as f64).exp2();
        let (o_psi, o_phi, o_phi_x1) = match idx.cone {
            Cone::Phi => (0.0, c1 * m2, c1 * m1),
            Cone::Psi => (c1 * m1, c2 * m2, 0.0),
            Cone::PsiTilde => (c1 * m2, c2 * m1, 0.0),
        };
        RowKernel {
            cone: idx.cone,
            scale,
            a,
            b,
            k: idx.k as f64,
            o_psi,
            o_phi,
            o_phi_x1,
            y_range: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Values on the row `x2 = y` at `x1 = i h`, as `(first index, values)`.
    pub(crate) fn row(&self, kern: &RowKernel, y: f64, h: f64) -> Option<(i64, Vec<f64>)> {
        let phi = &self.mra.phi;
        let psi = &self.mra.psi;
        let s = self.spec.support_length() as f64;
        let range = |lo: f64, hi: f64| -> Option<(i64, i64)> {
            let (i0, i1) = ((lo / h).ceil() as i64, (hi / h).floor() as i64);
            (i1 >= i0).then_some((i0, i1))
        };
        match kern.cone {
            Cone::Phi => {
                let f2 = phi.eval(y - kern.o_phi);
                if f2 == 0.0 {
                    return None;
                }
                let (i0, i1) = range(kern.o_phi_x1, kern.o_phi_x1 + s)?;
                let vals = (i0..=i1)
                    .map(|i| phi.eval(i as f64 * h - kern.o_phi_x1) * f2)
                    .collect();
                Some((i0, vals))
            }
            Cone::Psi => {
                let f2 = phi.eval(kern.b * y - kern.o_phi);
                if f2 == 0.0 {
                    return None;
                }
                let f2 = f2 * kern.scale;
                let shift = kern.k * kern.b * y - kern.o_psi;
                let (i0, i1) = range(-shift / kern.a, (s - shift) / kern.a)?;
                let vals = (i0..=i1)
                    .map(|i| psi.eval(kern.a * (i as f64 * h) + shift) * f2)
                    .collect();
                Some((i0, vals))
            }
            Cone::PsiTilde => {
                let base = kern.a * y - kern.o_psi;
                let (mut lo, mut hi) = (kern.o_phi / kern.b, (kern.o_phi + s) / kern.b);
                let slope = kern.k * kern.b;
                if kern.k == 0.0 {
                    if psi.eval(base) == 0.0 {
                        return None;
                    }
                } else {
                    let (p, q) = ((-base) / slope, (s - base) / slope);
                    lo = lo.max(p.min(q));
                    hi = hi.min(p.max(q));
                }
                let (i0, i1) = range(lo, hi)?;
                let vals = (i0..=i1)
                    .map(|i| {
                        let x = i as f64 * h;
                        kern.scale * psi.eval(base + slope * x) * phi.eval(kern.b * x - kern.o_phi)
                    })
                    .collect();
                Some((i0, vals))
            }
        }
    }

    /// Value of one element at a point.
    pub fn value(&self, idx: &ShearletIndex, x1: f64, x2: f64) -> f64 {
        let kern = self.point_kernel(idx);
        let phi = &self.mra.phi;
        let psi = &self.mra.psi;
        match idx.cone {
            Cone::Phi => phi.eval(x1 - kern.o_phi_x1) * phi.eval(x2 - kern.o_phi),
            Cone::Psi => {
                kern.scale
                    * psi.eval(kern.a * x1 + kern.k * kern.b * x2 - kern.o_psi)
                    * phi.eval(kern.b * x2 - kern.o_phi)
            }
            Cone::PsiTilde => {
                kern.scale
                    * psi.eval(kern.a * x2 + kern.k * kern.b * x1 - kern.o_psi)
                    * phi.eval(kern.b * x1 - kern.o_phi)
            }
        }
    }

    /// Samples on `(2^-level Z)^2` over the support's bounding box.
    pub fn evaluate(&self, idx: &ShearletIndex, level: u32) -> Result<SampledFunction2D> {
        self.evaluate_aniso(idx, level, level)
    }

    /// Samples with `x1` spacing `2^-level_x1` and `x2` spacing `2^-level_x2`.
    pub fn evaluate_aniso(
        &self,
        idx: &ShearletIndex,
        level_x1: u32,
        level_x2: u32,
    ) -> Result<SampledFunction2D> {
        let needed = level_x1.max(level_x2) + self.spec.j_max.max(idx.j);
        if self.cascade_level() < needed {
            return Err(Error::InsufficientLevel {
                needed,
                got: self.cascade_level(),
            });
        }
        let support = self.support_polygon(idx);
        let (x0, y0, x1, y1) = support.bounding_box();
        let to_i = |e: &Exact, l: u32, up: bool| {
            let t = e.mul_pow2(l as i64);
            let v = if up { t.ceil() } else { t.floor() };
            v.to_i64().unwrap_or(0)
        };
        let (c0, c1) = (to_i(&x0, level_x1, false), to_i(&x1, level_x1, true));
        let (r0, r1) = (to_i(&y0, level_x2, false), to_i(&y1, level_x2, true));
        let nx1 = (c1 - c0 + 1) as usize;
        let nx2 = (r1 - r0 + 1) as usize;
        let h1 = (-(level_x1 as f64)).exp2();
        let h2 = (-(level_x2 as f64)).exp2();
        let kern = self.kernel(idx);
        let mut values = vec![0.0; nx1 * nx2];
        for r in 0..nx2 {
            let y = (r0 + r as i64) as f64 * h2;
            if let Some((i0, vals)) = self.row(&kern, y, h1) {
                for (t, v) in vals.into_iter().enumerate() {
                    let c = i0 + t as i64 - c0;
                    if c >= 0 && (c as usize) < nx1 {
                        values[r * nx1 + c as usize] = v;
                    }
                }
            }
        }
        Ok(SampledFunction2D {
            level_x1,
            level_x2,
            origin: (
                Exact::from_int(c0).mul_pow2(-(level_x1 as i64)),
                Exact::from_int(r0).mul_pow2(-(level_x2 as i64)),
            ),
            nx1,
            nx2,
            values,
            support,
        })
    }
}

/// Translation step vectors `(e1, e2)` of the support as `m` moves, in `f64`.
fn translation_steps(idx_base: &ShearletIndex, c: (f64, f64)) -> [[f64; 2]; 2] {
    let j = idx_base.j;
    let a = (-(j as f64)).exp2();
    let b = (-((j / 2) as f64)).exp2();
    let k = idx_base.k as f64;
    match idx_base.cone {
        Cone::Phi => [[c.0, 0.0], [0.0, c.0]],
        Cone::Psi => [[a * c.0, 0.0], [-k * a * c.1, b * c.1]],
        Cone::PsiTilde => [[b * c.1, -k * a * c.1], [0.0, a * c.0]],
    }
}

/// All indices with `j <= j_max` whose support relates to the domain per `spec.rule`.
///
/// Ordered by cone (`PHI`, `PSI`, `PSI_TILDE`), then `j`, `k`, and `m`
/// lexicographically. Candidate translations come from a floating-point
/// bounding box; membership is decided exactly.
pub fn enumerate(spec: &ShearletSystemSpec) -> Vec<ShearletIndex> {
    let s = Exact::from_int(spec.support_length());
    let c = (spec.c.0.to_f64(), spec.c.1.to_f64());
    let dom = spec.domain.to_f64();
    let mut out = Vec::new();
    for cone in Cone::ALL {
        for j in 0..=spec.j_max {
            let Some(max_k) = cone.max_shear(j) else {
                continue;
            };
            for k in -max_k..=max_k {
                let base = ShearletIndex {
                    cone,
                    j,
                    k,
                    m: (0, 0),
                };
                let bb = support_polygon(&base, &spec.c, &s, &s).bounding_box_f64();
                let e = translation_steps(&base, c);
                let mut found = candidates(&e, &bb, &dom)
                    .filter(|&m| {
                        let idx = ShearletIndex { m, ..base };
                        let p = support_polygon(&idx, &spec.c, &s, &s);
                        prefilter(&p.bounding_box_f64(), &dom, spec.rule)
                            && match spec.rule {
                                DomainRule::Intersecting => p.interior_meets(&spec.domain),
                                DomainRule::Contained => p.contained_in(&spec.domain),
                            }
                    })
                    .map(|m| ShearletIndex { m, ..base })
                    .collect::<Vec<_>>();
                found.sort();
                out.extend(found);
            }
        }
    }
    out
}

const PREFILTER_MARGIN: f64 = 1e-6;

fn prefilter(bb: &[f64; 4], dom: &[f64; 4], rule: DomainRule) -> bool {
    let eps = PREFILTER_MARGIN;
    match rule {
        DomainRule::Intersecting => {
            bb[2] > dom[0] - eps
                && bb[0] < dom[2] + eps
                && bb[3] > dom[1] - eps
                && bb[1] < dom[3] + eps
        }
        DomainRule::Contained => {
            bb[0] >= dom[0] - eps
                && bb[2] <= dom[2] + eps
                && bb[1] >= dom[1] - eps
                && bb[3] <= dom[3] + eps
        }
    }
}

/// Superset of translations whose bounding box can meet the domain.
fn candidates(
    e: &[[f64; 2]; 2],
    bb: &[f64; 4],
    dom: &[f64; 4],
) -> impl Iterator<Item = (i64, i64)> {
    // Shifts t = m1 e1 + m2 e2 with t in [dom_lo - bb_hi, dom_hi - bb_lo].
    let lo = [dom[0] - bb[2], dom[1] - bb[3]];
    let hi = [dom[2] - bb[0], dom[3] - bb[1]];
    let det = e[0][0] * e[1][1] - e[1][0] * e[0][1];
    let inv = [
        [e[1][1] / det, -e[1][0] / det],
        [-e[0][1] / det, e[0][0] / det],
    ];
    let mut m_lo = [f64::INFINITY; 2];
    let mut m_hi = [f64::NEG_INFINITY; 2];
    for tx in [lo[0], hi[0]] {
        for ty in [lo[1], hi[1]] {
            for r in 0..2 {
                let v = inv[r][0] * tx + inv[r][1] * ty;
                m_lo[r] = m_lo[r].min(v);
                m_hi[r] = m_hi[r].max(v);
            }
        }
    }
    let r1 = (m_lo[0].floor() as i64 - 1)..=(m_hi[0].ceil() as i64 + 1);
    let r2 = (m_lo[1].floor() as i64 - 1)..=(m_hi[1].ceil() as i64 + 1);
    r1.flat_map(move |m1| r2.clone().map(move |m2| (m1, m2)))
}

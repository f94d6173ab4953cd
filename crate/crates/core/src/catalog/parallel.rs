//! Parallel hypersurface families in Q_eps^n and the constant-angle
//! immersions built from them.
//!
//! A base hypersurface `g` of the Q factor is pushed a distance `s` along
//! its normal geodesics, `g_s = C_eps(s) g + S_eps(s) N`, and the
//! constant-angle hypersurface of Q_eps^n x R is `f(x, s) = g_s(x) + B s
//! d/dt`. With a flat base surface this produces the nonrotational
//! constant-curvature examples in dimension three.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::catalog::{Chart, ModelConfig};
use crate::error::GeomError;
use crate::jet::{Jet2, Jet2Point};
use crate::linalg::{inner, Mat, SymMatrix};
use crate::scalar::Real;

type ChartMap<F> = Arc<dyn Fn(&[Jet2<F>]) -> Result<Jet2Point<F>, GeomError> + Send + Sync>;

/// `(C_eps(s), S_eps(s))`: (cos, sin) on the sphere, (cosh, sinh) in
/// hyperbolic space.
fn cs_eps<F: Real>(s: F, epsilon: i8) -> (F, F) {
    if epsilon == 1 {
        (s.cos(), s.sin())
    } else {
        (s.cosh(), s.sinh())
    }
}

fn cs_eps_jet<F: Real>(s: &Jet2<F>, epsilon: i8) -> (Jet2<F>, Jet2<F>) {
    if epsilon == 1 {
        (s.cos(), s.sin())
    } else {
        (s.cosh(), s.sinh())
    }
}

/// A base hypersurface of Q_eps^n together with its unit normal field
/// (both jet-liftable) and its constant principal curvatures.
#[derive(Clone)]
pub struct ParallelFamily<F> {
    pub tag: String,
    pub model: ModelConfig,
    /// Chart into the Q factor: `model.n - 1` parameters, ambient n+1.
    pub base: Chart<F>,
    /// Principal curvatures of the base (constant over the catalog bases).
    pub base_curvatures: Vec<F>,
    normal: ChartMap<F>,
}

impl<F: Real> ParallelFamily<F> {
    pub fn normal_jets(&self, u: &[Jet2<F>]) -> Result<Jet2Point<F>, GeomError> {
        (self.normal)(u)
    }

    pub fn normal_at(&self, x: &[F]) -> Result<Vec<F>, GeomError> {
        let jets: Vec<Jet2<F>> = (0..x.len())
            .map(|i| Jet2::seed(x, i))
            .collect::<Result<_, _>>()?;
        Ok(self.normal_jets(&jets)?.into_iter().map(|j| j.val).collect())
    }
}

/// Clifford torus `S^1(cos theta0) x S^1(sin theta0)` in S^3, or its
/// hyperbolic analog `H^1(cosh theta0) x S^1(sinh theta0)` in H^3.
///
/// The H^1 factor is parametrized by hyperbolic angle, `(cosh theta0
/// cosh t1, cosh theta0 sinh t1)`, so that the image lies on the quadric.
pub fn clifford_base_chart<F: Real>(theta0: F, epsilon: i8) -> Chart<F> {
    let model = ModelConfig::new(3, epsilon);
    let map: ChartMap<F> = Arc::new(move |u| {
        let (a, b) = cs_eps(theta0, epsilon);
        let (t1, t2) = (&u[0], &u[1]);
        let first: [Jet2<F>; 2] = if epsilon == 1 {
            [t1.cos().scale(a), t1.sin().scale(a)]
        } else {
            [t1.cosh().scale(a), t1.sinh().scale(a)]
        };
        let [f0, f1] = first;
        Ok(vec![f0, f1, t2.cos().scale(b), t2.sin().scale(b)])
    });
    let t1_dom = if epsilon == 1 {
        (F::of(0.3), F::of(5.9))
    } else {
        (F::of(-0.8), F::of(0.8))
    };
    Chart {
        tag: if epsilon == 1 { "clifford" } else { "h-clifford" }.to_string(),
        model,
        intrinsic_dim: 2,
        ambient_dim: 4,
        domain: vec![t1_dom, (F::of(0.3), F::of(5.9))],
        params: vec![("theta0".into(), theta0.to_f64().unwrap())],
        map,
    }
}

/// Parallel family over the Clifford torus (or its H^3 analog).
pub fn clifford_family<F: Real>(theta0: F, epsilon: i8) -> ParallelFamily<F> {
    let base = clifford_base_chart(theta0, epsilon);
    let normal: ChartMap<F> = Arc::new(move |u| {
        let (a, b) = cs_eps(theta0, epsilon);
        let (t1, t2) = (&u[0], &u[1]);
        // eps = +1: N = (-sin th0 cos t1, -sin th0 sin t1, cos th0 cos t2, cos th0 sin t2)
        // eps = -1: N = (sinh th0 cosh t1, sinh th0 sinh t1, cosh th0 cos t2, cosh th0 sin t2)
        let first: [Jet2<F>; 2] = if epsilon == 1 {
            [t1.cos().scale(-b), t1.sin().scale(-b)]
        } else {
            [t1.cosh().scale(b), t1.sinh().scale(b)]
        };
        let [n0, n1] = first;
        Ok(vec![n0, n1, t2.cos().scale(a), t2.sin().scale(a)])
    });
    // Shape operator of the base with respect to that normal.
    let curvatures = if epsilon == 1 {
        vec![theta0.tan(), -F::one() / theta0.tan()]
    } else {
        vec![-theta0.tanh(), -F::one() / theta0.tanh()]
    };
    ParallelFamily {
        tag: if epsilon == 1 {
            "clifford-family"
        } else {
            "h-clifford-family"
        }
        .to_string(),
        model: base.model,
        base,
        base_curvatures: curvatures,
        normal,
    }
}

/// The parallel hypersurface `g_s = C_eps(s) g + S_eps(s) N` as a chart
/// into the Q factor.
pub fn parallel_chart<F: Real>(fam: &ParallelFamily<F>, s: F) -> Result<Chart<F>, GeomError> {
    let eps = fam.model.epsilon;
    let base = fam.base.clone();
    let fam_cl = fam.clone();
    let map: ChartMap<F> = Arc::new(move |u| {
        let (c, sn) = cs_eps(s, eps);
        let g = fam_cl.base.eval_jets(u)?;
        let n = fam_cl.normal_jets(u)?;
        Ok(g.iter()
            .zip(&n)
            .map(|(gi, ni)| &gi.scale(c) + &ni.scale(sn))
            .collect())
    });
    let chart = Chart {
        tag: format!("parallel-{}", fam.tag),
        model: fam.model,
        intrinsic_dim: base.intrinsic_dim,
        ambient_dim: base.ambient_dim,
        domain: base.domain.clone(),
        params: vec![("s".into(), s.to_f64().unwrap())],
        map,
    };
    // Focal points show up as a rank drop of the differential.
    let u0 = chart.center();
    let jets = chart.eval(&u0)?;
    let m = chart.intrinsic_dim;
    let sig = chart.sig();
    let tangents: Vec<Vec<F>> = (0..m)
        .map(|i| jets.iter().map(|comp| comp.grad[i]).collect())
        .collect();
    let g = Mat::from_fn(m, m, |i, j| inner(sig, &tangents[i], &tangents[j]).unwrap());
    if g.det().abs() < F::of(1e-10) {
        return Err(GeomError::FocalPoint);
    }
    Ok(chart)
}

/// Unit normal `N_s = -eps S_eps(s) g + C_eps(s) N` of the parallel
/// hypersurface, evaluated at a base parameter point.
pub fn parallel_normal<F: Real>(
    fam: &ParallelFamily<F>,
    s: F,
    x: &[F],
) -> Result<Vec<F>, GeomError> {
    let eps = fam.model.epsilon;
    let (c, sn) = cs_eps(s, eps);
    let g = fam.base.point(x)?;
    let n = fam.normal_at(x)?;
    let e = F::of(eps as f64);
    Ok(g.iter()
        .zip(&n)
        .map(|(gi, ni)| -e * sn * *gi + c * *ni)
        .collect())
}

/// Shape operator of the parallel hypersurface at distance `s`:
/// `A_s = (cot_eps(s) I - A)^{-1} (cot_eps(s) A + eps I)`, computed in the
/// equivalent form `(C I - S A)^{-1} (C A + eps S I)` so that `s = 0` is
/// regular.
pub fn parallel_shape_operator<F: Real>(
    a: &SymMatrix<F>,
    s: F,
    epsilon: i8,
) -> Result<SymMatrix<F>, GeomError> {
    let k = a.dim();
    let (c, sn) = cs_eps(s, epsilon);
    let e = F::of(epsilon as f64);
    let m = Mat::from_fn(k, k, |i, j| {
        let id = if i == j { F::one() } else { F::zero() };
        c * id - sn * a.get(i, j)
    });
    let mut maxabs = F::zero();
    for v in &m.data {
        maxabs = maxabs.max(v.abs());
    }
    if m.det().abs() < F::of(1e-10) * maxabs.powi(k as i32).max(F::epsilon()) {
        return Err(GeomError::FocalDistance);
    }
    let rhs = Mat::from_fn(k, k, |i, j| {
        let id = if i == j { F::one() } else { F::zero() };
        c * a.get(i, j) + e * sn * id
    });
    let prod = m.inverse()?.matmul(&rhs);
    Ok(SymMatrix::from_fn(k, |i, j| {
        (prod[(i, j)] + prod[(j, i)]) * F::half()
    }))
}

/// Open s-interval around 0 on which `cot_eps(s)` avoids every principal
/// curvature of the base.
///
/// For eps = +1 each curvature `lambda = cot theta` removes the focal
/// distances `theta (mod pi)`; for eps = -1 only curvatures of modulus
/// greater than one have focal distances `theta = arccoth(lambda)`.
pub fn admissible_parallel_range<F: Real>(principal_curvatures: &[F], epsilon: i8) -> (F, F) {
    if epsilon == 1 {
        let thetas: Vec<F> = principal_curvatures
            .iter()
            // theta = arccot(lambda) in (0, pi)
            .map(|l| {
                let t = (F::one() / *l).atan();
                if t > F::zero() {
                    t
                } else {
                    t + F::of(PI)
                }
            })
            .collect();
        let mut lo = -F::of(PI);
        let mut hi = F::of(PI);
        for t in &thetas {
            hi = hi.min(*t);
            lo = lo.max(*t - F::of(PI));
        }
        (lo, hi)
    } else {
        let mut lo = F::neg_infinity();
        let mut hi = F::infinity();
        for l in principal_curvatures {
            if l.abs() > F::one() {
                // theta = arccoth(lambda), same sign as lambda
                let t = ((*l + F::one()) / (*l - F::one())).ln() * F::half();
                if t > F::zero() {
                    hi = hi.min(t);
                } else {
                    lo = lo.max(t);
                }
            }
        }
        (lo, hi)
    }
}

/// Constant-angle hypersurface `f(x, s) = g_s(x) + B s d/dt` of
/// Q_eps^n x R, with unit normal making constant inner product
/// `1/sqrt(1+B^2)` with `d/dt`.
pub fn constant_angle_chart<F: Real>(
    fam: &ParallelFamily<F>,
    b: F,
) -> Result<Chart<F>, GeomError> {
    if b <= F::zero() {
        return Err(GeomError::Inadmissible(
            "constant-angle construction requires B > 0".into(),
        ));
    }
    let eps = fam.model.epsilon;
    let m = fam.base.intrinsic_dim;
    let fam_cl = fam.clone();
    let map: ChartMap<F> = Arc::new(move |u| {
        let s = &u[m];
        let (c, sn) = cs_eps_jet(s, eps);
        let g = fam_cl.base.eval_jets(&u[..m])?;
        let n = fam_cl.normal_jets(&u[..m])?;
        let mut out: Vec<Jet2<F>> = g
            .iter()
            .zip(&n)
            .map(|(gi, ni)| &(&c * gi) + &(&sn * ni))
            .collect();
        out.push(s.scale(b));
        Ok(out)
    });
    let (lo, hi) = admissible_parallel_range(&fam.base_curvatures, eps);
    let margin = F::of(0.05);
    let s_dom = ((lo + margin).max(F::of(-0.3)), (hi - margin).min(F::of(0.3)));
    let mut domain = fam.base.domain.clone();
    domain.push(s_dom);
    Ok(Chart {
        tag: format!("constant-angle-{}", fam.tag),
        model: fam.model,
        intrinsic_dim: m + 1,
        ambient_dim: fam.model.n + 2,
        domain,
        params: vec![("B".into(), b.to_f64().unwrap())],
        map,
    })
}

/// The constant-angle hypersurface over the Clifford torus in explicit
/// reparametrized form (the parallel distance absorbed into the angle),
/// with the hyperbolic analog for eps = -1. `B = 0` is allowed as a
/// degenerate slice-like test case.
pub fn clifford_chart<F: Real>(theta0: F, b: F, epsilon: i8) -> Result<Chart<F>, GeomError> {
    if b < F::zero() {
        return Err(GeomError::Inadmissible("B must be nonnegative".into()));
    }
    let model = ModelConfig::new(3, epsilon);
    let map: ChartMap<F> = Arc::new(move |u| {
        let (t1, t2, s) = (&u[0], &u[1], &u[2]);
        let (c, sn) = cs_eps_jet(s, epsilon);
        let first: [Jet2<F>; 2] = if epsilon == 1 {
            [&c * &t1.cos(), &c * &t1.sin()]
        } else {
            [&c * &t1.cosh(), &c * &t1.sinh()]
        };
        let [f0, f1] = first;
        Ok(vec![f0, f1, &sn * &t2.cos(), &sn * &t2.sin(), s.scale(b)])
    });
    let margin = F::of(0.05);
    let half_width = F::of(0.25);
    let s_dom = if epsilon == 1 {
        let lo = (theta0 - half_width).max(margin);
        let hi = (theta0 + half_width).min(F::of(PI / 2.0) - margin);
        if !(lo < hi) {
            return Err(GeomError::OutsideDomain);
        }
        (lo, hi)
    } else {
        let lo = (theta0 - half_width).max(margin);
        (lo, theta0 + half_width)
    };
    let t1_dom = if epsilon == 1 {
        (F::of(0.3), F::of(5.9))
    } else {
        (F::of(-0.8), F::of(0.8))
    };
    Ok(Chart {
        tag: if epsilon == 1 {
            "constant-angle-clifford"
        } else {
            "constant-angle-h-clifford"
        }
        .to_string(),
        model,
        intrinsic_dim: 3,
        ambient_dim: 5,
        domain: vec![t1_dom, (F::of(0.3), F::of(5.9)), s_dom],
        params: vec![
            ("theta0".into(), theta0.to_f64().unwrap()),
            ("B".into(), b.to_f64().unwrap()),
        ],
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::membership_residual;
    use crate::linalg::inner;
    use std::f64::consts::PI;

    #[test]
    fn parallel_at_zero_is_base() {
        for eps in [1i8, -1] {
            let fam = clifford_family::<f64>(0.6, eps);
            let gs = parallel_chart(&fam, 0.0).unwrap();
            let u = fam.base.center();
            let a = fam.base.point(&u).unwrap();
            let b = gs.point(&u).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn clifford_parallel_is_angle_shift() {
        let fam = clifford_family(PI / 4.0, 1);
        let gs = parallel_chart(&fam, PI / 8.0).unwrap();
        let shifted = clifford_base_chart(PI / 4.0 + PI / 8.0, 1);
        let u = [1.1, 2.3];
        let a = gs.point(&u).unwrap();
        let b = shifted.point(&u).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperbolic_parallel_membership() {
        let fam = clifford_family(0.7, -1);
        let gs = parallel_chart(&fam, 0.2).unwrap();
        let u = gs.center();
        let p = gs.point(&u).unwrap();
        assert!(membership_residual(&gs, &p) < 1e-12);
    }

    #[test]
    fn parallel_normal_orthogonality() {
        for eps in [1i8, -1] {
            let fam = clifford_family::<f64>(0.6, eps);
            let s = 0.15;
            let gs = parallel_chart(&fam, s).unwrap();
            let u = gs.center();
            let ns = parallel_normal(&fam, s, &u).unwrap();
            let sig = gs.sig();
            assert!((inner(sig, &ns, &ns).unwrap() - 1.0).abs() < 1e-12);
            let jets = gs.eval(&u).unwrap();
            for i in 0..2 {
                let tangent: Vec<f64> = jets.iter().map(|c| c.grad[i]).collect();
                assert!(inner(sig, &ns, &tangent).unwrap().abs() < 1e-12);
            }
            let pos = gs.point(&u).unwrap();
            assert!(inner(sig, &ns, &pos).unwrap().abs() < 1e-12);
            // s = 0 reduces to the base normal.
            let n0 = parallel_normal(&fam, 0.0, &u).unwrap();
            let nb = fam.normal_at(&u).unwrap();
            for (x, y) in n0.iter().zip(&nb) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn shape_operator_formula() {
        let a = SymMatrix::diag(&[1.0, -1.0]);
        let s = PI / 8.0;
        let a_s = parallel_shape_operator(&a, s, 1).unwrap();
        let cot = 1.0 / s.tan();
        assert!((a_s.get(0, 0) - cot).abs() < 1e-12);
        assert!((a_s.get(1, 1) + s.tan()).abs() < 1e-12);
        assert!(a_s.get(0, 1).abs() < 1e-14);
        // Flatness preserved: det A_s = -eps.
        let det = a_s.get(0, 0) * a_s.get(1, 1) - a_s.get(0, 1) * a_s.get(1, 0);
        assert!((det + 1.0).abs() < 1e-12);
    }

    #[test]
    fn shape_operator_totally_geodesic() {
        let a = SymMatrix::<f64>::diag(&[0.0, 0.0]);
        let s = 0.4;
        let a_s = parallel_shape_operator(&a, s, 1).unwrap();
        assert!((a_s.get(0, 0) - s.tan()).abs() < 1e-13);
        assert!((a_s.get(1, 1) - s.tan()).abs() < 1e-13);
    }

    #[test]
    fn shape_operator_focal_rejected() {
        let a = SymMatrix::diag(&[1.0, -1.0]);
        // cot(pi/4) = 1 is an eigenvalue: focal distance.
        assert!(matches!(
            parallel_shape_operator(&a, PI / 4.0, 1),
            Err(GeomError::FocalDistance)
        ));
    }

    #[test]
    fn admissible_ranges() {
        let (lo, hi) = admissible_parallel_range(&[1.0, -1.0], 1);
        assert!((lo + PI / 4.0).abs() < 1e-12);
        assert!((hi - PI / 4.0).abs() < 1e-12);

        let coth = |x: f64| 1.0 / x.tanh();
        let (lo, hi) = admissible_parallel_range(&[coth(0.5), -coth(0.5)], -1);
        assert!((lo + 0.5).abs() < 1e-12);
        assert!((hi - 0.5).abs() < 1e-12);

        let (lo, hi) = admissible_parallel_range(&[0.5, -0.5], -1);
        assert!(lo == f64::NEG_INFINITY && hi == f64::INFINITY);
    }

    #[test]
    fn clifford_chart_points() {
        let f = clifford_chart::<f64>(PI / 4.0, 1.0, 1).unwrap();
        let p = f.point(&[0.35, 0.35, PI / 4.0]).unwrap();
        assert!(membership_residual(&f, &p) < 1e-15);
        // Exact point from the explicit formula.
        let q: Vec<f64> = {
            let (t1, t2, s): (f64, f64, f64) = (0.0, 0.0, PI / 4.0);
            vec![
                s.cos() * t1.cos(),
                s.cos() * t1.sin(),
                s.sin() * t2.cos(),
                s.sin() * t2.sin(),
                1.0 * s,
            ]
        };
        // Evaluate through jets at a point inside the box and compare the map.
        assert!((q[0] - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((q[2] - 2f64.sqrt() / 2.0).abs() < 1e-15);

        let f = clifford_chart::<f64>(0.5, 1.0, -1).unwrap();
        let p = f.point(&[0.0001, 0.35, 0.5]).unwrap();
        assert!(membership_residual(&f, &p) < 1e-14);
        let g = clifford_chart::<f64>(0.5, 1.0, -1).unwrap();
        let exact = g.point(&[0.0001, 0.3001, 0.5]).unwrap();
        assert!((exact[0] - 0.5f64.cosh() * 0.0001f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn constant_angle_requires_positive_b() {
        let fam = clifford_family(PI / 4.0, 1);
        assert!(constant_angle_chart(&fam, 0.0).is_err());
        assert!(constant_angle_chart(&fam, 1.0).is_ok());
    }
}

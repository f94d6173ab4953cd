//! Chart constructors for every hypersurface family in the classification:
//! rotation hypersurfaces of all four types, slices, products, parallel
//! families and constant-angle immersions.

mod parallel;
mod profiles;

pub use parallel::{
    admissible_parallel_range, clifford_base_chart, clifford_chart, clifford_family,
    constant_angle_chart, parallel_chart, parallel_normal, parallel_shape_operator,
    ParallelFamily,
};
pub use profiles::{
    profile_hyperbolic_h, profile_parabolic_h, profile_spherical_h, profile_spherical_s,
    ProfileCurve, ProfileKind,
};

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::GeomError;
use crate::jet::{Jet2, Jet2Point};
use crate::linalg::Signature;
use crate::scalar::Real;

/// Intrinsic dimension `n` and the sign selecting S^n x R vs H^n x R.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelConfig {
    pub n: usize,
    pub epsilon: i8,
}

impl ModelConfig {
    pub fn new(n: usize, epsilon: i8) -> Self {
        assert!(n >= 2, "n >= 2 required");
        assert!(epsilon == 1 || epsilon == -1);
        ModelConfig { n, epsilon }
    }

    /// Signature of the full ambient E^{n+2}.
    pub fn ambient_sig(&self) -> Signature {
        Signature::new(self.n + 2, self.epsilon)
    }

    /// Signature of the E^{n+1} the factor Q_eps^n lives in.
    pub fn factor_sig(&self) -> Signature {
        Signature::new(self.n + 1, self.epsilon)
    }
}

type ChartMap<F> = Arc<dyn Fn(&[Jet2<F>]) -> Result<Jet2Point<F>, GeomError> + Send + Sync>;

/// A parametrized immersion from an open box into pseudo-Euclidean space.
///
/// Product-space charts map into E^{n+2}; base charts for the parallel
/// construction map into the E^{n+1} of the Q factor (`ambient_dim`
/// tells them apart).
#[derive(Clone)]
pub struct Chart<F> {
    pub tag: String,
    pub model: ModelConfig,
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    /// Open axis-aligned parameter box.
    pub domain: Vec<(F, F)>,
    /// Family parameters echoed into reports.
    pub params: Vec<(String, f64)>,
    map: ChartMap<F>,
}

impl<F: std::fmt::Debug> std::fmt::Debug for Chart<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("tag", &self.tag)
            .field("model", &self.model)
            .field("intrinsic_dim", &self.intrinsic_dim)
            .field("ambient_dim", &self.ambient_dim)
            .field("domain", &self.domain)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl<F: Real> Chart<F> {
    /// Ambient signature the chart image lives in.
    pub fn sig(&self) -> Signature {
        Signature::new(self.ambient_dim, self.model.epsilon)
    }

    /// Evaluate value plus all first and second partials at `u`.
    pub fn eval(&self, u: &[F]) -> Result<Jet2Point<F>, GeomError> {
        if u.len() != self.intrinsic_dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.intrinsic_dim,
                got: u.len(),
            });
        }
        for (x, (lo, hi)) in u.iter().zip(&self.domain) {
            if !(*x > *lo && *x < *hi) {
                return Err(GeomError::OutsideDomain);
            }
        }
        let jets: Vec<Jet2<F>> = (0..u.len())
            .map(|i| Jet2::seed(u, i))
            .collect::<Result<_, _>>()?;
        (self.map)(&jets)
    }

    /// Evaluate on caller-provided jets (used to compose charts).
    pub fn eval_jets(&self, jets: &[Jet2<F>]) -> Result<Jet2Point<F>, GeomError> {
        (self.map)(jets)
    }

    /// Value only.
    pub fn point(&self, u: &[F]) -> Result<Vec<F>, GeomError> {
        Ok(self.eval(u)?.into_iter().map(|j| j.val).collect())
    }

    /// Box center, the default probe point.
    pub fn center(&self) -> Vec<F> {
        self.domain
            .iter()
            .map(|(lo, hi)| (*lo + *hi) * F::half())
            .collect()
    }
}

fn konst<F: Real>(like: &Jet2<F>, c: F) -> Jet2<F> {
    Jet2::constant(c, like.n_params())
}

/// Nested spherical coordinates: `m` angles to a point of S^m in R^{m+1}.
pub(crate) fn sphere_point<F: Real>(angles: &[Jet2<F>]) -> Vec<Jet2<F>> {
    let m = angles.len();
    assert!(m >= 1);
    let mut out = Vec::with_capacity(m + 1);
    let mut sines = konst(&angles[0], F::one());
    for a in angles {
        out.push(&sines * &a.cos());
        sines = &sines * &a.sin();
    }
    out.push(sines);
    out
}

/// Hyperbolic polar coordinates: `(r, angles)` to a point of H^m in L^{m+1},
/// timelike coordinate first: `(cosh r, sinh r * S^{m-1})`.
pub(crate) fn hyperbolic_point<F: Real>(params: &[Jet2<F>]) -> Vec<Jet2<F>> {
    let r = &params[0];
    let mut out = vec![r.cosh()];
    let sh = r.sinh();
    if params.len() == 1 {
        out.push(sh);
    } else {
        for phi in sphere_point(&params[1..]) {
            out.push(&sh * &phi);
        }
    }
    out
}

/// Parameter box for the S^{m} angular factor: interior angles away from
/// the poles, azimuthal angle away from the seam.
fn sphere_domain<F: Real>(m: usize) -> Vec<(F, F)> {
    let mut d = Vec::with_capacity(m);
    for _ in 0..m.saturating_sub(1) {
        d.push((F::of(0.35), F::of(2.75)));
    }
    d.push((F::of(0.3), F::of(5.9)));
    d
}

fn hyper_domain<F: Real>(m: usize) -> Vec<(F, F)> {
    let mut d = vec![(F::of(0.25), F::of(1.4))];
    d.extend(sphere_domain::<F>(m - 1));
    if m == 1 {
        d.truncate(1);
    }
    d
}

/// Rotation hypersurface chart of the given type with constant sectional
/// curvature `c`, per Theorems 4.1 and 4.2.
pub fn rotation_chart<F: Real>(
    kind: ProfileKind,
    c: F,
    model: ModelConfig,
) -> Result<Chart<F>, GeomError> {
    let n = model.n;
    match (kind, model.epsilon) {
        (ProfileKind::SphericalS, 1) => {}
        (ProfileKind::SphericalS, _) => {
            return Err(GeomError::Inadmissible(
                "Theorem 4.1 applies to S^n\u{d7}R (epsilon = +1) only".into(),
            ))
        }
        (_, -1) => {}
        (k, _) => {
            return Err(GeomError::Inadmissible(format!(
                "Theorem 4.2 rotation type {k:?} requires epsilon = \u{2212}1"
            )))
        }
    }
    let profile = match kind {
        ProfileKind::SphericalS => profile_spherical_s(c)?,
        ProfileKind::SphericalH => profile_spherical_h(c)?,
        ProfileKind::HyperbolicH => profile_hyperbolic_h(c)?,
        ProfileKind::ParabolicH => profile_parabolic_h(c)?,
    };
    let profile = Arc::new(profile);
    let p = profile.clone();
    let (tag, map, mut domain): (&str, ChartMap<F>, Vec<(F, F)>) = match kind {
        ProfileKind::SphericalS => {
            let map: ChartMap<F> = Arc::new(move |u| {
                let k = p.k(&u[0])?;
                let h = p.h(&u[0])?;
                let ck = k.cos();
                let mut out = vec![k.sin()];
                for phi in sphere_point(&u[1..]) {
                    out.push(&ck * &phi);
                }
                out.push(h);
                Ok(out)
            });
            let width = PI / c.to_f64().unwrap().sqrt();
            let lo = F::of(0.10 * width);
            let hi = F::of(0.90 * width);
            let mut d = vec![(lo, hi)];
            d.extend(sphere_domain::<F>(n - 1));
            ("rot-sph-S", map, d)
        }
        ProfileKind::SphericalH => {
            let map: ChartMap<F> = Arc::new(move |u| {
                let k = p.k(&u[0])?;
                let h = p.h(&u[0])?;
                let sk = k.sinh();
                let mut out = vec![k.cosh()];
                for phi in sphere_point(&u[1..]) {
                    out.push(&sk * &phi);
                }
                out.push(h);
                Ok(out)
            });
            let s_box = if c > F::zero() {
                let width = PI / c.to_f64().unwrap().sqrt();
                (F::of(0.10 * width), F::of(0.90 * width))
            } else {
                (F::of(0.25), F::of(1.6))
            };
            let mut d = vec![s_box];
            d.extend(sphere_domain::<F>(n - 1));
            ("rot-sph-H", map, d)
        }
        ProfileKind::HyperbolicH => {
            let map: ChartMap<F> = Arc::new(move |u| {
                let k = p.k(&u[0])?;
                let h = p.h(&u[0])?;
                let ck = k.cosh();
                let mut out: Vec<Jet2<F>> = hyperbolic_point(&u[1..])
                    .iter()
                    .map(|psi| &ck * psi)
                    .collect();
                out.push(k.sinh());
                out.push(h);
                Ok(out)
            });
            let mut d = vec![(F::of(-1.2), F::of(1.2))];
            d.extend(hyper_domain::<F>(n - 1));
            ("rot-hyp-H", map, d)
        }
        ProfileKind::ParabolicH => {
            // Pseudo-orthonormal frame e_1 = (d_1 + d_{n+1})/sqrt(2),
            // e_{n+1} = (-d_1 + d_{n+1})/sqrt(2); the sign choice lands the
            // image on the x_1 > 0 sheet of the hyperboloid.
            let map: ChartMap<F> = Arc::new(move |u| {
                let k = p.k(&u[0])?;
                let h = p.h(&u[0])?;
                let ts = &u[1..];
                let mut tsq = konst(&u[0], F::zero());
                for t in ts {
                    tsq = &tsq + &t.powi(2);
                }
                // a1 = k, a_{n+1} = -1/(2k) - (k/2) sum t_i^2
                let a1 = k.clone();
                let an1 = &(-&k.scale(F::two()).recip()?) - &(&k.scale(F::half()) * &tsq);
                let r2 = F::of(std::f64::consts::FRAC_1_SQRT_2);
                let mut out = vec![(&a1 - &an1).scale(r2)];
                for t in ts {
                    out.push(&k * t);
                }
                out.push((&a1 + &an1).scale(r2));
                out.push(h);
                Ok(out)
            });
            let mut d = vec![(F::of(-0.9), F::of(0.9))];
            for _ in 0..n - 1 {
                d.push((F::of(-0.9), F::of(0.9)));
            }
            ("rot-par-H", map, d)
        }
    };
    // Clip the s-box to the profile's admissible interval.
    domain[0].0 = domain[0].0.max(profile.s_domain.0);
    domain[0].1 = domain[0].1.min(profile.s_domain.1);
    Ok(Chart {
        tag: tag.to_string(),
        model,
        intrinsic_dim: n,
        ambient_dim: n + 2,
        domain,
        params: vec![("c".into(), c.to_f64().unwrap())],
        map,
    })
}

/// The slice Q_eps^n x {t0}.
pub fn slice_chart<F: Real>(t0: F, model: ModelConfig) -> Chart<F> {
    let n = model.n;
    let eps = model.epsilon;
    let map: ChartMap<F> = Arc::new(move |u| {
        let mut out = if eps == 1 {
            sphere_point(u)
        } else {
            hyperbolic_point(u)
        };
        out.push(konst(&u[0], t0));
        Ok(out)
    });
    let domain = if eps == 1 {
        sphere_domain::<F>(n)
    } else {
        hyper_domain::<F>(n)
    };
    Chart {
        tag: "slice".to_string(),
        model,
        intrinsic_dim: n,
        ambient_dim: n + 2,
        domain,
        params: vec![("t0".into(), t0.to_f64().unwrap())],
        map,
    }
}

/// Riemannian product M^{n-1} x R over a hypersurface chart of Q_eps^n.
pub fn product_chart<F: Real>(base: Chart<F>, model: ModelConfig) -> Result<Chart<F>, GeomError> {
    if base.ambient_dim != model.n + 1 || base.intrinsic_dim != model.n - 1 {
        return Err(GeomError::DimensionMismatch {
            expected: model.n + 1,
            got: base.ambient_dim,
        });
    }
    let m = base.intrinsic_dim;
    let inner = base.clone();
    let map: ChartMap<F> = Arc::new(move |u| {
        let mut out = inner.eval_jets(&u[..m])?;
        out.push(u[m].clone());
        Ok(out)
    });
    let mut domain = base.domain.clone();
    domain.push((F::of(-1.0), F::of(1.0)));
    Ok(Chart {
        tag: format!("product-{}", base.tag),
        model,
        intrinsic_dim: model.n,
        ambient_dim: model.n + 2,
        domain,
        params: base.params.clone(),
        map,
    })
}

/// Horosphere of H^n as a flat hypersurface chart into the Q factor
/// (E^{n+1} ambient): `v -> (1 + |v|^2/2, |v|^2/2, v)`.
pub fn horosphere_chart<F: Real>(model: ModelConfig) -> Result<Chart<F>, GeomError> {
    if model.epsilon != -1 {
        return Err(GeomError::Inadmissible(
            "horospheres live in H^n (epsilon = \u{2212}1)".into(),
        ));
    }
    let m = model.n - 1;
    let map: ChartMap<F> = Arc::new(move |u| {
        let mut q = konst(&u[0], F::zero());
        for v in u {
            q = &q + &v.powi(2);
        }
        let half_q = q.scale(F::half());
        let mut out = vec![half_q.add_const(F::one()), half_q];
        out.extend(u.iter().cloned());
        Ok(out)
    });
    Ok(Chart {
        tag: "horosphere".to_string(),
        model,
        intrinsic_dim: m,
        ambient_dim: model.n + 1,
        domain: vec![(F::of(-1.0), F::of(1.0)); m],
        params: vec![],
        map,
    })
}

/// Solution of the warped-product curvature conditions
/// `(rho')^2 + c rho^2 = delta`, `rho'' + c rho = 0` (Proposition 4.1).
#[derive(Debug, Clone)]
pub struct WarpedSolution<F> {
    pub c: F,
    pub delta: i8,
    pub shift: F,
    form: WarpedForm,
}

#[derive(Debug, Clone, Copy)]
enum WarpedForm {
    /// rho = sin(sqrt(c) s + shift)/sqrt(c)
    Sin,
    /// rho = s + shift
    Linear,
    /// rho = const (value stored alongside)
    Const,
    /// rho = cosh(sqrt(-c) s + shift)/sqrt(-c)
    Cosh,
    /// rho = exp(sqrt(-c) s + shift)
    Exp,
    /// rho = sinh(sqrt(-c) s + shift)/sqrt(-c)
    Sinh,
}

impl<F: Real> WarpedSolution<F> {
    /// `(rho, rho', rho'')` at `s`.
    pub fn eval(&self, s: F) -> (F, F, F) {
        match self.form {
            WarpedForm::Sin => {
                let r = self.c.sqrt();
                let a = r * s + self.shift;
                (a.sin() / r, a.cos(), -r * a.sin())
            }
            WarpedForm::Linear => (s + self.shift, F::one(), F::zero()),
            WarpedForm::Const => {
                let a = if self.shift == F::zero() { F::one() } else { self.shift };
                (a, F::zero(), F::zero())
            }
            WarpedForm::Cosh => {
                let r = (-self.c).sqrt();
                let a = r * s + self.shift;
                (a.cosh() / r, a.sinh(), r * a.cosh())
            }
            WarpedForm::Exp => {
                let r = (-self.c).sqrt();
                let e = (r * s + self.shift).exp();
                (e, r * e, r * r * e)
            }
            WarpedForm::Sinh => {
                let r = (-self.c).sqrt();
                let a = r * s + self.shift;
                (a.sinh() / r, a.cosh(), r * a.sinh())
            }
        }
    }

    pub fn rho(&self, s: F) -> F {
        self.eval(s).0
    }
}

/// Closed-form warped solution for an admissible `(c, delta)` pair.
///
/// For `(c, delta) = (0, 0)` the solution is a constant; `shift` is read
/// as that constant, with 0 meaning 1.
pub fn warped_rho<F: Real>(c: F, delta: i8, shift: F) -> Result<WarpedSolution<F>, GeomError> {
    let form = if c > F::zero() {
        match delta {
            1 => WarpedForm::Sin,
            _ => return Err(GeomError::NoWarpedSolution),
        }
    } else if c == F::zero() {
        match delta {
            1 => WarpedForm::Linear,
            0 => WarpedForm::Const,
            _ => return Err(GeomError::NoWarpedSolution),
        }
    } else {
        match delta {
            -1 => WarpedForm::Cosh,
            0 => WarpedForm::Exp,
            1 => WarpedForm::Sinh,
            _ => return Err(GeomError::NoWarpedSolution),
        }
    };
    Ok(WarpedSolution { c, delta, shift, form })
}

/// The warped solution whose warping function equals the orbit radius of
/// the given rotation family, together with the curvature sign `delta` of
/// the orbit factor.
pub fn warped_for_rotation<F: Real>(kind: ProfileKind, c: F) -> Result<WarpedSolution<F>, GeomError> {
    match kind {
        ProfileKind::SphericalS | ProfileKind::SphericalH => warped_rho(c, 1, F::zero()),
        ProfileKind::HyperbolicH => warped_rho(c, -1, F::zero()),
        ProfileKind::ParabolicH => warped_rho(c, 0, F::zero()),
    }
}

/// Curvature sign of the orbit factor of each rotation type.
pub fn rotation_factor_delta(kind: ProfileKind) -> i8 {
    match kind {
        ProfileKind::SphericalS | ProfileKind::SphericalH => 1,
        ProfileKind::HyperbolicH => -1,
        ProfileKind::ParabolicH => 0,
    }
}

/// Q-membership residual `|eps x_1^2 + sum_{2..n+1} x_i^2 - eps|` of a
/// point of Q_eps^n x R (or of Q_eps^n itself for base charts).
pub fn membership_residual<F: Real>(chart: &Chart<F>, point: &[F]) -> F {
    let eps = F::of(chart.model.epsilon as f64);
    let q_dim = chart.model.n + 1;
    let mut acc = eps * point[0] * point[0];
    for x in &point[1..q_dim] {
        acc = acc + *x * *x;
    }
    (acc - eps).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet2;

    fn grid1(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
    }

    #[test]
    fn sphere_point_unit_norm() {
        let u = [0.7, 1.3, 4.0];
        let jets: Vec<Jet2<f64>> = (0..3).map(|i| Jet2::seed(&u, i).unwrap()).collect();
        let p = sphere_point(&jets);
        let norm: f64 = p.iter().map(|x| x.val * x.val).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hyperbolic_point_norm() {
        let u = [0.8, 2.1];
        let jets: Vec<Jet2<f64>> = (0..2).map(|i| Jet2::seed(&u, i).unwrap()).collect();
        let p = hyperbolic_point(&jets);
        let norm: f64 = -p[0].val * p[0].val + p[1..].iter().map(|x| x.val * x.val).sum::<f64>();
        assert!((norm + 1.0).abs() < 1e-14);
        assert!(p[0].val > 0.0);
    }

    #[test]
    fn rotation_membership() {
        let model = ModelConfig::new(3, 1);
        let chart = rotation_chart(ProfileKind::SphericalS, 4.0, model).unwrap();
        let p = chart.point(&[0.4, 0.7, 0.5]).unwrap();
        assert!(membership_residual(&chart, &p) < 1e-12);

        let model = ModelConfig::new(3, -1);
        for (kind, c) in [
            (ProfileKind::SphericalH, -0.5),
            (ProfileKind::SphericalH, 0.7),
            (ProfileKind::HyperbolicH, -0.25),
            (ProfileKind::ParabolicH, -0.5),
        ] {
            let chart = rotation_chart(kind, c, model).unwrap();
            let u = chart.center();
            let p = chart.point(&u).unwrap();
            assert!(
                membership_residual(&chart, &p) < 1e-12,
                "{kind:?} residual {}",
                membership_residual(&chart, &p)
            );
            assert!(p[0] > 0.0, "{kind:?} must sit on the x1 > 0 sheet");
        }
    }

    #[test]
    fn rotation_admissibility_errors() {
        let s = ModelConfig::new(3, 1);
        let h = ModelConfig::new(3, -1);
        let err = rotation_chart::<f64>(ProfileKind::SphericalS, 0.5, s).unwrap_err();
        assert!(err.to_string().contains("Theorem 4.1"));
        assert!(rotation_chart::<f64>(ProfileKind::SphericalS, 2.0, h).is_err());
        assert!(rotation_chart::<f64>(ProfileKind::HyperbolicH, -0.5, s).is_err());
        assert!(rotation_chart::<f64>(ProfileKind::HyperbolicH, 0.3, h).is_err());
        assert!(rotation_chart::<f64>(ProfileKind::ParabolicH, 0.0, h).is_err());
    }

    #[test]
    fn slice_height_constant() {
        let chart = slice_chart(2.0, ModelConfig::new(3, 1));
        let p = chart.point(&[0.7, 1.1, 2.0]).unwrap();
        assert_eq!(p[4], 2.0);
        assert!(membership_residual(&chart, &p) < 1e-14);

        let chart = slice_chart(-0.3, ModelConfig::new(3, -1));
        let p = chart.point(&chart.center()).unwrap();
        assert_eq!(p[4], -0.3);
        assert!(membership_residual(&chart, &p) < 1e-13);
    }

    #[test]
    fn horosphere_product_membership() {
        let model = ModelConfig::new(3, -1);
        let base = horosphere_chart(model).unwrap();
        let chart = product_chart(base, model).unwrap();
        let p = chart.point(&[0.3, -0.4, 0.5]).unwrap();
        assert!(membership_residual(&chart, &p) < 1e-14);
    }

    #[test]
    fn evaluate_outside_domain() {
        let chart = slice_chart(0.0, ModelConfig::new(3, 1));
        assert!(matches!(
            chart.eval(&[10.0, 0.5, 0.5]),
            Err(GeomError::OutsideDomain)
        ));
    }

    #[test]
    fn warped_solutions() {
        // c=1, delta=1: rho = sin s.
        let w = warped_rho::<f64>(1.0, 1, 0.0).unwrap();
        for s in grid1(0.1, 1.4, 20) {
            let (r, rp, rpp) = w.eval(s);
            assert!((rp * rp + 1.0 * r * r - 1.0).abs() < 1e-12);
            assert!((rpp + r).abs() < 1e-12);
            assert!((r - s.sin()).abs() < 1e-15);
        }
        // c=-1, delta=0: rho = e^s.
        let w = warped_rho::<f64>(-1.0, 0, 0.0).unwrap();
        let (r, rp, _) = w.eval(0.5);
        assert!((rp * rp - r * r).abs() < 1e-12);
        // c=-1, delta=1: rho = sinh s.
        let w = warped_rho::<f64>(-1.0, 1, 0.0).unwrap();
        let (r, rp, _) = w.eval(0.8);
        assert!((rp * rp - r * r - 1.0).abs() < 1e-12);
        // Inadmissible pairs.
        assert!(warped_rho(2.0, 0, 0.0).is_err());
        assert!(warped_rho(2.0, -1, 0.0).is_err());
        assert!(warped_rho(0.0, -1, 0.0).is_err());
    }
}

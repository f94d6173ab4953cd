//! Closed-form profile curves for the rotation hypersurface families.
//!
//! Each profile is a pair `(k, h)` of jet-liftable functions of the arc
//! parameter `s`, satisfying `k'^2 + h'^2 = 1` (or `(ln k)'^2 + h'^2 = 1`
//! for the parabolic family).

use std::sync::Arc;

use crate::error::GeomError;
use crate::jet::Jet2;
use crate::scalar::Real;

/// Which rotation family the profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Spherical type in S^n x R, c > 1.
    SphericalS,
    /// Spherical type in H^n x R, c > -1.
    SphericalH,
    /// Hyperbolic type in H^n x R, c in (-1, 0).
    HyperbolicH,
    /// Parabolic type in H^n x R, c in (-1, 0).
    ParabolicH,
}

type ScalarMap<F> = Arc<dyn Fn(&Jet2<F>) -> Result<Jet2<F>, GeomError> + Send + Sync>;

/// Arc-length profile `(k(s), h(s))` of a rotation hypersurface.
pub struct ProfileCurve<F> {
    pub kind: ProfileKind,
    pub c: F,
    /// Open s-interval (endpoints may be infinite).
    pub s_domain: (F, F),
    k: ScalarMap<F>,
    h: ScalarMap<F>,
}

impl<F: Real> ProfileCurve<F> {
    pub fn k(&self, s: &Jet2<F>) -> Result<Jet2<F>, GeomError> {
        (self.k)(s)
    }

    pub fn h(&self, s: &Jet2<F>) -> Result<Jet2<F>, GeomError> {
        (self.h)(s)
    }

    /// (k, h, k', h') at a scalar parameter value.
    pub fn eval(&self, s: F) -> Result<(F, F, F, F), GeomError> {
        let js = Jet2::seed(&[s], 0)?;
        let k = self.k(&js)?;
        let h = self.h(&js)?;
        Ok((k.val, h.val, k.grad[0], h.grad[0]))
    }
}

fn konst<F: Real>(like: &Jet2<F>, c: F) -> Jet2<F> {
    Jet2::constant(c, like.n_params())
}

/// Profile of Theorem 4.1(ii): spherical type in S^n x R, requires c > 1.
///
/// `k(s) = arccos(sin(sqrt(c) s)/sqrt(c))`, s in (0, pi/sqrt(c)).
pub fn profile_spherical_s<F: Real>(c: F) -> Result<ProfileCurve<F>, GeomError> {
    if c <= F::one() {
        return Err(GeomError::Inadmissible(format!(
            "Theorem 4.1 requires c \u{2265} 1 for spherical rotation hypersurfaces of S^n\u{d7}R \
             (c = 1 gives a slice); got c = {c}"
        )));
    }
    let rc = c.sqrt();
    let width = F::of(std::f64::consts::PI) / rc;
    let margin = F::of(1e-3) * width;
    let k: ScalarMap<F> = Arc::new(move |s| s.scale(rc).sin().scale(F::one() / rc).acos());
    let h: ScalarMap<F> = Arc::new(move |s| {
        let arg = s.scale(rc);
        let sin = arg.sin();
        let cos = arg.cos();
        let root = (&konst(s, c) - &(&sin * &sin)).sqrt()?;
        let num = &cos + &root;
        let frac = num.scale(F::one() / (F::one() + rc));
        let coeff = -((c - F::one()) / c).sqrt();
        Ok(frac.ln()?.scale(coeff))
    });
    Ok(ProfileCurve {
        kind: ProfileKind::SphericalS,
        c,
        s_domain: (margin, width - margin),
        k,
        h,
    })
}

/// Profiles of Theorem 4.2(ii)(a), (iii)(a) and (iv): spherical type in
/// H^n x R. The branch is selected by the sign of c; requires c > -1.
pub fn profile_spherical_h<F: Real>(c: F) -> Result<ProfileCurve<F>, GeomError> {
    if c <= -F::one() {
        return Err(GeomError::Inadmissible(format!(
            "Theorem 4.2 requires c \u{2265} \u{2212}1 for rotation hypersurfaces of H^n\u{d7}R \
             (c = \u{2212}1 gives a slice); got c = {c}"
        )));
    }
    let inf = F::infinity();
    let (k, h, s_domain): (ScalarMap<F>, ScalarMap<F>, (F, F)) = if c < F::zero() {
        let rc = (-c).sqrt();
        let k: ScalarMap<F> =
            Arc::new(move |s| Ok(s.scale(rc).sinh().scale(F::one() / rc).asinh()));
        let h: ScalarMap<F> = Arc::new(move |s| {
            let arg = s.scale(rc);
            let sinh = arg.sinh();
            let root = (&sinh.powi(2) - &konst(s, c)).sqrt()?;
            let num = &arg.cosh() + &root;
            let frac = num.scale(F::one() / (F::one() + rc));
            let coeff = ((c + F::one()) / -c).sqrt();
            Ok(frac.ln()?.scale(coeff))
        });
        (k, h, (-inf, inf))
    } else if c == F::zero() {
        let k: ScalarMap<F> = Arc::new(|s| Ok(s.asinh()));
        let h: ScalarMap<F> = Arc::new(|s| {
            Ok((&s.powi(2) + &konst(s, F::one()))
                .sqrt()?
                .add_const(-F::one()))
        });
        (k, h, (-inf, inf))
    } else {
        let rc = c.sqrt();
        let width = F::of(std::f64::consts::PI) / rc;
        let margin = F::of(1e-3) * width;
        let k: ScalarMap<F> = Arc::new(move |s| Ok(s.scale(rc).sin().scale(F::one() / rc).asinh()));
        let h: ScalarMap<F> = Arc::new(move |s| {
            let arg = s.scale(rc);
            let sin = arg.sin();
            let root = (&(&sin * &sin) + &konst(s, c)).sqrt()?;
            let frac = &arg.cos() * &root.recip()?;
            let coeff = -((c + F::one()) / c).sqrt();
            Ok(frac.atan().scale(coeff))
        });
        (k, h, (margin, width - margin))
    };
    Ok(ProfileCurve {
        kind: ProfileKind::SphericalH,
        c,
        s_domain,
        k,
        h,
    })
}

/// Profile of Theorem 4.2(ii)(b): hyperbolic type in H^n x R, c in (-1, 0).
pub fn profile_hyperbolic_h<F: Real>(c: F) -> Result<ProfileCurve<F>, GeomError> {
    if c <= -F::one() || c >= F::zero() {
        return Err(GeomError::Inadmissible(format!(
            "Theorem 4.2(ii)(b) requires c \u{2208} (\u{2212}1, 0) for the hyperbolic type; got c = {c}"
        )));
    }
    let rc = (-c).sqrt();
    let k: ScalarMap<F> = Arc::new(move |s| s.scale(rc).cosh().scale(F::one() / rc).acosh());
    let h: ScalarMap<F> = Arc::new(move |s| {
        let arg = s.scale(rc);
        let cosh = arg.cosh();
        let root = (&(&cosh * &cosh) + &konst(s, c)).sqrt()?;
        let inner = &arg.sinh() + &root;
        let coeff = ((c + F::one()) / -c).sqrt();
        Ok(inner.ln()?.scale(coeff))
    });
    let inf = F::infinity();
    Ok(ProfileCurve {
        kind: ProfileKind::HyperbolicH,
        c,
        s_domain: (-inf, inf),
        k,
        h,
    })
}

/// Profile of Theorem 4.2(ii)(c): parabolic type in H^n x R, c in (-1, 0).
///
/// `k(s) = exp(sqrt(-c) s)`, `h(s) = sqrt(1+c) s`; the arc-length
/// constraint takes the form `(ln k)'^2 + h'^2 = 1`.
pub fn profile_parabolic_h<F: Real>(c: F) -> Result<ProfileCurve<F>, GeomError> {
    if c <= -F::one() || c >= F::zero() {
        return Err(GeomError::Inadmissible(format!(
            "Theorem 4.2(ii)(c) requires c \u{2208} (\u{2212}1, 0) for the parabolic type; got c = {c}"
        )));
    }
    let rc = (-c).sqrt();
    let slope = (F::one() + c).sqrt();
    let k: ScalarMap<F> = Arc::new(move |s| Ok(s.scale(rc).exp()));
    let h: ScalarMap<F> = Arc::new(move |s| Ok(s.scale(slope)));
    let inf = F::infinity();
    Ok(ProfileCurve {
        kind: ProfileKind::ParabolicH,
        c,
        s_domain: (-inf, inf),
        k,
        h,
    })
}

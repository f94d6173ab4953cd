//! The measurement engine: fundamental forms, shape operators, the
//! (T, nu) decomposition, sectional curvature, and residuals of the
//! structure equations.
//!
//! Everything that only needs first and second derivatives runs on exact
//! jets; covariant derivatives of the shape operator and of (T, nu) use
//! central finite differences in chart coordinates, which is why the
//! finite-difference residual tolerances are looser (1e-4 vs 1e-8).

use crate::catalog::Chart;
use crate::error::GeomError;
use crate::jet::Jet2Point;
use crate::linalg::{
    generalized_eigen, inner, jacobi_eigen, Mat, SymMatrix,
};
use crate::scalar::Real;

/// Per-point geometric state of a hypersurface of Q_eps^n x R.
#[derive(Debug, Clone)]
pub struct FundamentalData<F> {
    pub point: Vec<F>,
    /// Coordinate tangent frame d_i f, ambient components.
    pub tangent_frame: Vec<Vec<F>>,
    pub metric: SymMatrix<F>,
    pub metric_inv: Mat<F>,
    /// Outward unit normal of Q_eps^n x R: the Q-position with height 0.
    pub xi: Vec<F>,
    /// Unit normal of f inside the product, sign fixed so nu >= 0 where
    /// |nu| is resolvable.
    pub normal: Vec<F>,
    /// Shape operator A_N in chart coordinates.
    pub a_n: Mat<F>,
    /// Shape operator A_xi in chart coordinates.
    pub a_xi: Mat<F>,
    /// Second fundamental form <d_i d_j f, N>.
    pub h_n: SymMatrix<F>,
    /// Second fundamental form <d_i d_j f, xi>.
    pub h_xi: SymMatrix<F>,
    /// Principal curvatures of A_N, ascending.
    pub spectrum: Vec<F>,
    /// Tangent part of d/dt in chart coordinates.
    pub t_field: Vec<F>,
    pub nu: F,
    pub height: F,
    pub epsilon: i8,
}

impl<F: Real> FundamentalData<F> {
    /// Induced metric on chart-coordinate vectors.
    pub fn g(&self, x: &[F], y: &[F]) -> F {
        let n = self.metric.dim();
        let mut acc = F::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + self.metric.get(i, j) * x[i] * y[j];
            }
        }
        acc
    }

    pub fn norm_g(&self, x: &[F]) -> F {
        self.g(x, x).max(F::zero()).sqrt()
    }

    pub fn t_norm(&self) -> F {
        self.norm_g(&self.t_field)
    }

    /// Spectrum of A_xi, ascending.
    pub fn xi_spectrum(&self) -> Result<Vec<F>, GeomError> {
        Ok(generalized_eigen(&self.metric, &self.h_xi)?.0)
    }
}

/// All per-point geometric data of a product-space chart at `u`.
pub fn fundamental_data<F: Real>(chart: &Chart<F>, u: &[F]) -> Result<FundamentalData<F>, GeomError> {
    fundamental_data_with_ref(chart, u, None)
}

/// Like [`fundamental_data`], with the normal sign aligned against a
/// reference vector; used to keep finite-difference stencils on one
/// branch of the normal field.
pub fn fundamental_data_with_ref<F: Real>(
    chart: &Chart<F>,
    u: &[F],
    ref_normal: Option<&[F]>,
) -> Result<FundamentalData<F>, GeomError> {
    let n = chart.intrinsic_dim;
    let dim = chart.ambient_dim;
    debug_assert_eq!(dim, chart.model.n + 2, "product-space chart required");
    let sig = chart.sig();
    let jets: Jet2Point<F> = chart.eval(u)?;
    let point: Vec<F> = jets.iter().map(|j| j.val).collect();
    let tangent_frame: Vec<Vec<F>> = (0..n)
        .map(|i| jets.iter().map(|j| j.grad[i]).collect())
        .collect();
    let metric = SymMatrix::from_fn(n, |i, j| {
        inner(sig, &tangent_frame[i], &tangent_frame[j]).unwrap()
    });
    let metric_inv = metric
        .to_mat()
        .inverse()
        .map_err(|_| GeomError::OutsideDomain)?;
    // Reject non-Riemannian metrics (chart evaluated at a degeneracy).
    crate::linalg::cholesky(&metric).map_err(|_| GeomError::OutsideDomain)?;

    let mut xi: Vec<F> = point[..dim - 1].to_vec();
    xi.push(F::zero());

    let mut basis = tangent_frame.clone();
    basis.push(xi.clone());
    let mut normal = orthonormal_single(sig, &basis)?;
    let nu_raw = normal[dim - 1];
    if let Some(r) = ref_normal {
        let dot: F = normal.iter().zip(r).map(|(a, b)| *a * *b).sum();
        if dot < F::zero() {
            for x in normal.iter_mut() {
                *x = -*x;
            }
        }
    } else if nu_raw.abs() > F::of(1e-9) && nu_raw < F::zero() {
        for x in normal.iter_mut() {
            *x = -*x;
        }
    }

    let hess_vec = |i: usize, j: usize| -> Vec<F> { jets.iter().map(|c| c.hess(i, j)).collect() };
    let h_n = SymMatrix::from_fn(n, |i, j| inner(sig, &hess_vec(i, j), &normal).unwrap());
    let h_xi = SymMatrix::from_fn(n, |i, j| inner(sig, &hess_vec(i, j), &xi).unwrap());
    let a_n = metric_inv.matmul(&h_n.to_mat());
    let a_xi = metric_inv.matmul(&h_xi.to_mat());
    let (spectrum, _) = generalized_eigen(&metric, &h_n)?;

    // f_* T = d/dt - nu N and <N, d_j f> = 0, so in coordinates
    // T^i = g^{ij} <d_j f, d/dt> = g^{ij} (d_j f)_last.
    let vertical: Vec<F> = tangent_frame.iter().map(|t| t[dim - 1]).collect();
    let t_field = metric_inv.mul_vec(&vertical);
    let nu = normal[dim - 1];
    let height = point[dim - 1];

    Ok(FundamentalData {
        point,
        tangent_frame,
        metric,
        metric_inv,
        xi,
        normal,
        a_n,
        a_xi,
        h_n,
        h_xi,
        spectrum,
        t_field,
        nu,
        height,
        epsilon: chart.model.epsilon,
    })
}

fn orthonormal_single<F: Real>(
    sig: crate::linalg::Signature,
    basis: &[Vec<F>],
) -> Result<Vec<F>, GeomError> {
    let comp = crate::linalg::orthonormal_complement(sig, basis)?;
    debug_assert_eq!(comp.len(), 1);
    Ok(comp.into_iter().next().unwrap())
}

/// Residual of the universal xi-shape relations `A_xi T = -nu^2 T` and
/// `A_xi X = -X` on `{T}^perp`, measured in the induced metric.
pub fn xi_shape_check<F: Real>(fd: &FundamentalData<F>) -> F {
    let mut worst = F::zero();
    let t_norm = fd.t_norm();
    if t_norm > F::of(1e-8) {
        let at = fd.a_xi.mul_vec(&fd.t_field);
        let res: Vec<F> = at
            .iter()
            .zip(&fd.t_field)
            .map(|(a, t)| *a + fd.nu * fd.nu * *t)
            .collect();
        worst = worst.max(fd.norm_g(&res) / t_norm);
    }
    for x in perp_basis(fd) {
        let ax = fd.a_xi.mul_vec(&x);
        let res: Vec<F> = ax.iter().zip(&x).map(|(a, xi)| *a + *xi).collect();
        worst = worst.max(fd.norm_g(&res));
    }
    worst
}

/// g-orthonormal basis of `{T}^perp` (all of TM when T vanishes).
fn perp_basis<F: Real>(fd: &FundamentalData<F>) -> Vec<Vec<F>> {
    let n = fd.metric.dim();
    let t_norm = fd.t_norm();
    let mut basis: Vec<Vec<F>> = Vec::new();
    if t_norm > F::of(1e-8) {
        let t_unit: Vec<F> = fd.t_field.iter().map(|x| *x / t_norm).collect();
        basis.push(t_unit);
    }
    let keep_from = basis.len();
    for j in 0..n {
        let mut v = vec![F::zero(); n];
        v[j] = F::one();
        for b in &basis {
            let c = fd.g(&v, b);
            for i in 0..n {
                v[i] = v[i] - c * b[i];
            }
        }
        let norm = fd.norm_g(&v);
        if norm > F::of(1e-6) {
            for x in v.iter_mut() {
                *x = *x / norm;
            }
            basis.push(v);
        }
        if basis.len() == n {
            break;
        }
    }
    basis.split_off(keep_from.min(1).min(basis.len()))
}

/// Sectional curvature of the plane spanned by chart-coordinate vectors
/// `x`, `y`, from the flat-ambient Gauss equation of the composition into
/// E^{n+2}. The normal-space inner product is diag(1, eps) on the
/// (h^N, h^xi) components.
pub fn sectional_curvature<F: Real>(
    fd: &FundamentalData<F>,
    x: &[F],
    y: &[F],
) -> Result<F, GeomError> {
    let eps = F::of(fd.epsilon as f64);
    let form = |h: &SymMatrix<F>, a: &[F], b: &[F]| -> F {
        let n = h.dim();
        let mut acc = F::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + h.get(i, j) * a[i] * b[j];
            }
        }
        acc
    };
    let den = fd.g(x, x) * fd.g(y, y) - fd.g(x, y) * fd.g(x, y);
    let scale = (fd.g(x, x) * fd.g(y, y)).abs().max(F::epsilon());
    if den.abs() < F::of(1e-12) * scale {
        return Err(GeomError::DegeneratePlane);
    }
    let num = form(&fd.h_n, x, x) * form(&fd.h_n, y, y) - form(&fd.h_n, x, y).powi(2)
        + eps * (form(&fd.h_xi, x, x) * form(&fd.h_xi, y, y) - form(&fd.h_xi, x, y).powi(2));
    Ok(num / den)
}

/// Curvature tensor value `R(X,Y)Z` computed two ways: (a) from the
/// flat-ambient Gauss equation, (b) from the intrinsic Gauss equation of
/// the product in terms of `A_N`, `T` and eps. Returns the g-norm of the
/// difference.
pub fn gauss_residual<F: Real>(fd: &FundamentalData<F>, x: &[F], y: &[F], z: &[F]) -> F {
    let n = fd.metric.dim();
    let eps = F::of(fd.epsilon as f64);
    let form = |h: &SymMatrix<F>, a: &[F], b: &[F]| -> F {
        let mut acc = F::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + h.get(i, j) * a[i] * b[j];
            }
        }
        acc
    };
    // (a) <R(X,Y)Z, d_k> = <alpha(X,d_k), alpha(Y,Z)> - <alpha(X,Z), alpha(Y,d_k)>
    let hn_yz = form(&fd.h_n, y, z);
    let hxi_yz = form(&fd.h_xi, y, z);
    let hn_xz = form(&fd.h_n, x, z);
    let hxi_xz = form(&fd.h_xi, x, z);
    let mut lowered = vec![F::zero(); n];
    for k in 0..n {
        let mut e = vec![F::zero(); n];
        e[k] = F::one();
        let hn_xk = form(&fd.h_n, x, &e);
        let hxi_xk = form(&fd.h_xi, x, &e);
        let hn_yk = form(&fd.h_n, y, &e);
        let hxi_yk = form(&fd.h_xi, y, &e);
        lowered[k] = hn_xk * hn_yz + eps * hxi_xk * hxi_yz - hn_xz * hn_yk - eps * hxi_xz * hxi_yk;
    }
    let r_flat = fd.metric_inv.mul_vec(&lowered);

    // (b) (AX ^ AY)Z + eps((X ^ Y)Z - <Y,T>(X ^ T)Z + <X,T>(Y ^ T)Z)
    let wedge = |u: &[F], v: &[F], w: &[F]| -> Vec<F> {
        let gv = fd.g(v, w);
        let gu = fd.g(u, w);
        u.iter().zip(v).map(|(ui, vi)| gv * *ui - gu * *vi).collect()
    };
    let ax = fd.a_n.mul_vec(x);
    let ay = fd.a_n.mul_vec(y);
    let t = &fd.t_field;
    let w1 = wedge(&ax, &ay, z);
    let w2 = wedge(x, y, z);
    let w3 = wedge(x, t, z);
    let w4 = wedge(y, t, z);
    let yt = fd.g(y, t);
    let xt = fd.g(x, t);
    let r_gauss: Vec<F> = (0..n)
        .map(|k| w1[k] + eps * (w2[k] - yt * w3[k] + xt * w4[k]))
        .collect();

    let diff: Vec<F> = r_flat.iter().zip(&r_gauss).map(|(a, b)| *a - *b).collect();
    fd.norm_g(&diff)
}

/// Central finite-difference step per coordinate.
fn fd_step<F: Real>(u: F) -> F {
    F::epsilon().cbrt() * F::one().max(u.abs())
}

/// Induced metric of a chart at `u`, without the rest of the
/// fundamental data.
pub fn induced_metric<F: Real>(chart: &Chart<F>, u: &[F]) -> Result<SymMatrix<F>, GeomError> {
    let n = chart.intrinsic_dim;
    let sig = chart.sig();
    let jets = chart.eval(u)?;
    let frame: Vec<Vec<F>> = (0..n)
        .map(|i| jets.iter().map(|j| j.grad[i]).collect())
        .collect();
    Ok(SymMatrix::from_fn(n, |i, j| {
        inner(sig, &frame[i], &frame[j]).unwrap()
    }))
}

/// Christoffel symbols at `u` from central differences of the metric.
/// `gamma[k][i][j]` = Gamma^k_{ij}.
fn christoffel<F: Real>(chart: &Chart<F>, u: &[F]) -> Result<Vec<Vec<Vec<F>>>, GeomError> {
    let n = chart.intrinsic_dim;
    let g0 = induced_metric(chart, u)?;
    let ginv = g0.to_mat().inverse()?;
    // dg[m][i][j] = d_m g_ij
    let mut dg = vec![vec![vec![F::zero(); n]; n]; n];
    for m in 0..n {
        let h = fd_step(u[m]);
        let mut up = u.to_vec();
        up[m] += h;
        let mut dn = u.to_vec();
        dn[m] -= h;
        let gp = induced_metric(chart, &up)?;
        let gm = induced_metric(chart, &dn)?;
        for i in 0..n {
            for j in 0..n {
                dg[m][i][j] = (gp.get(i, j) - gm.get(i, j)) / (F::two() * h);
            }
        }
    }
    let mut gamma = vec![vec![vec![F::zero(); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = F::zero();
                for m in 0..n {
                    acc = acc + ginv[(k, m)] * (dg[i][m][j] + dg[j][m][i] - dg[m][i][j]);
                }
                gamma[k][i][j] = acc * F::half();
            }
        }
    }
    Ok(gamma)
}

/// Codazzi residual for the coordinate fields `X = d_i`, `Y = d_j`:
/// g-norm of `nabla_X(AY) - nabla_Y(AX) - eps nu (X ^ Y)T`.
pub fn codazzi_residual<F: Real>(
    chart: &Chart<F>,
    u: &[F],
    i: usize,
    j: usize,
) -> Result<F, GeomError> {
    let n = chart.intrinsic_dim;
    let fd = fundamental_data(chart, u)?;
    let eps = F::of(fd.epsilon as f64);
    let gamma = christoffel(chart, u)?;
    // dA[m] = d_m A, central differences with the normal branch pinned
    // to the center normal.
    let da = |m: usize| -> Result<Mat<F>, GeomError> {
        let h = fd_step(u[m]);
        let mut up = u.to_vec();
        up[m] += h;
        let mut dn = u.to_vec();
        dn[m] -= h;
        let fp = fundamental_data_with_ref(chart, &up, Some(&fd.normal))?;
        let fm = fundamental_data_with_ref(chart, &dn, Some(&fd.normal))?;
        Ok(Mat::from_fn(n, n, |a, b| {
            (fp.a_n[(a, b)] - fm.a_n[(a, b)]) / (F::two() * h)
        }))
    };
    let da_i = da(i)?;
    let da_j = da(j)?;
    let mut lhs = vec![F::zero(); n];
    for k in 0..n {
        let mut v = da_i[(k, j)] - da_j[(k, i)];
        for l in 0..n {
            v = v + gamma[k][i][l] * fd.a_n[(l, j)] - gamma[k][j][l] * fd.a_n[(l, i)];
        }
        lhs[k] = v;
    }
    // eps nu ((d_i ^ d_j)T)^k = eps nu (<d_j, T> delta^k_i - <d_i, T> delta^k_j)
    let gt = fd.metric.mul_vec(&fd.t_field);
    let mut rhs = vec![F::zero(); n];
    rhs[i] = eps * fd.nu * gt[j];
    rhs[j] = rhs[j] - eps * fd.nu * gt[i];
    let diff: Vec<F> = lhs.iter().zip(&rhs).map(|(a, b)| *a - *b).collect();
    Ok(fd.norm_g(&diff))
}

/// Residuals of `nabla_X T = nu A X` and `X(nu) = -<AX, T>`, maximized
/// over the coordinate directions.
pub fn structure_residuals<F: Real>(chart: &Chart<F>, u: &[F]) -> Result<(F, F), GeomError> {
    let n = chart.intrinsic_dim;
    let fd = fundamental_data(chart, u)?;
    let gamma = christoffel(chart, u)?;
    let gt = fd.metric.mul_vec(&fd.t_field);
    let mut r_nabla_t = F::zero();
    let mut r_dnu = F::zero();
    for m in 0..n {
        let h = fd_step(u[m]);
        let mut up = u.to_vec();
        up[m] += h;
        let mut dn = u.to_vec();
        dn[m] -= h;
        let fp = fundamental_data_with_ref(chart, &up, Some(&fd.normal))?;
        let fm = fundamental_data_with_ref(chart, &dn, Some(&fd.normal))?;
        // nabla_{d_m} T
        let mut cov = vec![F::zero(); n];
        for k in 0..n {
            let mut v = (fp.t_field[k] - fm.t_field[k]) / (F::two() * h);
            for l in 0..n {
                v = v + gamma[k][m][l] * fd.t_field[l];
            }
            cov[k] = v;
        }
        let mut e = vec![F::zero(); n];
        e[m] = F::one();
        let a_em = fd.a_n.mul_vec(&e);
        let diff: Vec<F> = cov
            .iter()
            .zip(&a_em)
            .map(|(c, a)| *c - fd.nu * *a)
            .collect();
        r_nabla_t = r_nabla_t.max(fd.norm_g(&diff));

        let dnu = (fp.nu - fm.nu) / (F::two() * h);
        let axt: F = a_em.iter().zip(&gt).map(|(a, g)| *a * *g).sum();
        r_dnu = r_dnu.max((dnu + axt).abs());
    }
    Ok((r_nabla_t, r_dnu))
}

/// Split of the shape operator along T: the curvature `lambda` in the
/// T-direction, the spectrum `mu` on `{T}^perp`, and a numerical witness
/// that T is a principal direction.
pub fn principal_decomposition<F: Real>(
    fd: &FundamentalData<F>,
) -> Result<(F, Vec<F>, F), GeomError> {
    let t_norm = fd.t_norm();
    if t_norm <= F::of(1e-8) {
        return Err(GeomError::VanishingT);
    }
    let at = fd.a_n.mul_vec(&fd.t_field);
    let lambda = fd.g(&at, &fd.t_field) / (t_norm * t_norm);
    let res: Vec<F> = at
        .iter()
        .zip(&fd.t_field)
        .map(|(a, t)| *a - lambda * *t)
        .collect();
    let t_alignment = fd.norm_g(&res) / t_norm;

    let basis = perp_basis(fd);
    let m = basis.len();
    let b = SymMatrix::from_fn(m, |a, bq| {
        let ax = fd.a_n.mul_vec(&basis[bq]);
        let ay = fd.a_n.mul_vec(&basis[a]);
        (fd.g(&ax, &basis[a]) + fd.g(&ay, &basis[bq])) * F::half()
    });
    let (mu, _) = jacobi_eigen(&b);
    Ok((lambda, mu, t_alignment))
}

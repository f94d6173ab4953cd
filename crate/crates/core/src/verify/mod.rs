//! Batch verification: resolve a named family into a chart, sweep a
//! deterministic grid, run every residual check, and emit a report.
//!
//! The classification scan mirrors the two main classification theorems
//! as a pure lookup, so an entry is scannable exactly when `run_suite`
//! accepts it.

mod export;

pub use export::{export_samples, ExportFormat};

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    clifford_base_chart, clifford_chart, horosphere_chart, membership_residual, product_chart,
    rotation_chart, slice_chart, warped_for_rotation, Chart, ModelConfig, ProfileCurve,
    ProfileKind, WarpedSolution,
};
use crate::catalog::{
    profile_hyperbolic_h, profile_parabolic_h, profile_spherical_h, profile_spherical_s,
};
use crate::error::GeomError;
use crate::geometry::{
    codazzi_residual, fundamental_data, gauss_residual, induced_metric, principal_decomposition,
    sectional_curvature, structure_residuals, xi_shape_check, FundamentalData,
};

/// Deterministic sampling plan for one verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    /// Samples per chart parameter.
    pub samples_per_axis: usize,
    /// Random planes / triples per point for the curvature checks.
    pub planes: usize,
    /// Seed for the random directions.
    pub seed: u64,
    /// Relative margin the sampled sub-box keeps from the chart boundary.
    pub margin: f64,
    /// Points (evenly picked from the grid) that get the expensive
    /// finite-difference checks.
    pub fd_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            samples_per_axis: 16,
            planes: 20,
            seed: 7,
            margin: 0.08,
            fd_points: 10,
        }
    }
}

impl GridSpec {
    /// Coarser plan keeping the total point count similar across chart
    /// dimensions (used by the battery).
    pub fn for_dim(dim: usize) -> Self {
        let samples = match dim {
            0..=2 => 16,
            3 => 6,
            _ => 4,
        };
        GridSpec {
            samples_per_axis: samples,
            ..Default::default()
        }
    }
}

/// Residual thresholds, grouped by how the quantity is computed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    /// Quadric membership (algebraic identity).
    pub membership: f64,
    /// Identities evaluated through exact jets.
    pub jet_identities: f64,
    /// Identities needing finite differences.
    pub fd_identities: f64,
    /// Eigenvalue comparisons.
    pub spectra: f64,
    /// `|T|^2 + nu^2 - 1` and other closed-form scalar identities.
    pub decomposition: f64,
    /// Profile arclength and warped-product ODE residuals.
    pub warped: f64,
    /// Spread of nu on constant-angle members.
    pub nu_spread: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            membership: 1e-12,
            jet_identities: 1e-8,
            fd_identities: 1e-4,
            spectra: 1e-9,
            decomposition: 1e-10,
            warped: 1e-10,
            nu_spread: 1e-11,
        }
    }
}

impl Tolerances {
    /// One order of magnitude tighter across the board.
    pub fn strict() -> Self {
        let d = Tolerances::default();
        Tolerances {
            membership: d.membership / 10.0,
            jet_identities: d.jet_identities / 10.0,
            fd_identities: d.fd_identities / 10.0,
            spectra: d.spectra / 10.0,
            decomposition: d.decomposition / 10.0,
            warped: d.warped / 10.0,
            nu_spread: d.nu_spread / 10.0,
        }
    }
}

/// One check of a report: worst residual, where it occurred, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_residual: f64,
    pub argmax: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

/// Full result of one verification run; serializes with stable keys.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub grid: GridSpec,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
    pub runtime_ms: u64,
    pub version: String,
}

impl VerificationReport {
    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// A named family plus the parameters that pin one member down.
#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub family: String,
    pub epsilon: i8,
    pub c: f64,
    pub n: usize,
    pub b: Option<f64>,
    pub theta0: Option<f64>,
}

impl FamilyEntry {
    pub fn new(family: &str, epsilon: i8, c: f64) -> Self {
        FamilyEntry {
            family: family.to_string(),
            epsilon,
            c,
            n: 3,
            b: None,
            theta0: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = Some(b);
        self
    }

    pub fn with_theta0(mut self, theta0: f64) -> Self {
        self.theta0 = Some(theta0);
        self
    }
}

pub(crate) enum ResolvedKind {
    Rotation {
        kind: ProfileKind,
        profile: Arc<ProfileCurve<f64>>,
        warped: WarpedSolution<f64>,
    },
    Slice,
    ConstantAngle { b: f64 },
    Product,
}

pub(crate) struct Resolved {
    pub chart: Chart<f64>,
    pub kind: ResolvedKind,
    /// The constant sectional curvature this member must exhibit.
    pub expected_k: f64,
    /// Effective c (derived from B for constant-angle entries).
    pub c: f64,
}

fn default_theta0(epsilon: i8) -> f64 {
    if epsilon == 1 {
        PI / 4.0
    } else {
        0.5
    }
}

/// Resolve a family entry into a concrete chart, or explain which
/// theorem clause forbids it.
pub(crate) fn resolve(entry: &FamilyEntry) -> Result<Resolved, GeomError> {
    let eps = entry.epsilon;
    let model = ModelConfig::new(entry.n, eps);
    let rotation = |kind: ProfileKind| -> Result<Resolved, GeomError> {
        let chart = rotation_chart(kind, entry.c, model)?;
        let profile = Arc::new(match kind {
            ProfileKind::SphericalS => profile_spherical_s(entry.c)?,
            ProfileKind::SphericalH => profile_spherical_h(entry.c)?,
            ProfileKind::HyperbolicH => profile_hyperbolic_h(entry.c)?,
            ProfileKind::ParabolicH => profile_parabolic_h(entry.c)?,
        });
        let warped = warped_for_rotation(kind, entry.c)?;
        Ok(Resolved {
            chart,
            kind: ResolvedKind::Rotation {
                kind,
                profile,
                warped,
            },
            expected_k: entry.c,
            c: entry.c,
        })
    };
    match entry.family.as_str() {
        "rot-sph-S" => rotation(ProfileKind::SphericalS),
        "rot-sph-H" => rotation(ProfileKind::SphericalH),
        "rot-hyp-H" => rotation(ProfileKind::HyperbolicH),
        "rot-par-H" => rotation(ProfileKind::ParabolicH),
        "slice" => {
            if (entry.c - eps as f64).abs() > 1e-12 {
                return Err(GeomError::Inadmissible(if eps == 1 {
                    format!(
                        "Theorem 7.1(iii): slices of S^n\u{d7}R have c = 1; got c = {}",
                        entry.c
                    )
                } else {
                    format!(
                        "Theorem 7.2(i): slices of H^n\u{d7}R have c = \u{2212}1; got c = {}",
                        entry.c
                    )
                }));
            }
            Ok(Resolved {
                chart: slice_chart(0.0, model),
                kind: ResolvedKind::Slice,
                expected_k: eps as f64,
                c: entry.c,
            })
        }
        "constant-angle-clifford" | "clifford" | "constant-angle-h-clifford" | "h-clifford" => {
            let wants_sphere = entry.family.starts_with("constant-angle-c")
                || entry.family.as_str() == "clifford";
            if (eps == 1) != wants_sphere {
                return Err(GeomError::Inadmissible(format!(
                    "family {} lives in {}",
                    entry.family,
                    if wants_sphere { "S^3\u{d7}R" } else { "H^3\u{d7}R" }
                )));
            }
            if entry.n != 3 {
                return Err(GeomError::Inadmissible(if eps == 1 {
                    "Theorem 7.1(ii): the constant-angle family exists for n = 3 only".into()
                } else {
                    "Theorem 7.2(ii): the constant-angle family exists for n = 3 only".into()
                }));
            }
            let (b, c) = match entry.b {
                Some(b) => (b, eps as f64 / (1.0 + b * b)),
                None => {
                    let in_range = if eps == 1 {
                        entry.c > 0.0 && entry.c < 1.0
                    } else {
                        entry.c > -1.0 && entry.c < 0.0
                    };
                    if !in_range {
                        return Err(GeomError::Inadmissible(if eps == 1 {
                            format!(
                                "Theorem 7.1(ii): constant-angle members of S^3\u{d7}R require \
                                 c \u{2208} (0, 1); got c = {}",
                                entry.c
                            )
                        } else {
                            format!(
                                "Theorem 7.2(ii): constant-angle members of H^3\u{d7}R require \
                                 c \u{2208} (\u{2212}1, 0); got c = {}",
                                entry.c
                            )
                        }));
                    }
                    // c = eps / (1 + B^2)  =>  B = sqrt(eps/c - 1)
                    ((eps as f64 / entry.c - 1.0).sqrt(), entry.c)
                }
            };
            let theta0 = entry.theta0.unwrap_or_else(|| default_theta0(eps));
            Ok(Resolved {
                chart: clifford_chart(theta0, b, eps)?,
                kind: ResolvedKind::ConstantAngle { b },
                expected_k: c,
                c,
            })
        }
        "product-flat-surface-S3" | "product-flat-surface-H3" | "product-horosphere" => {
            let tag = entry.family.as_str();
            let want_eps = if tag == "product-flat-surface-S3" { 1 } else { -1 };
            if eps != want_eps {
                return Err(GeomError::Inadmissible(format!(
                    "family {tag} lives in {}",
                    if want_eps == 1 { "S^3\u{d7}R" } else { "H^n\u{d7}R" }
                )));
            }
            if entry.c.abs() > 1e-12 {
                return Err(GeomError::Inadmissible(if eps == 1 {
                    format!("Theorem 7.1(i): products are flat (c = 0); got c = {}", entry.c)
                } else {
                    format!("Theorem 7.2(iii): products are flat (c = 0); got c = {}", entry.c)
                }));
            }
            let chart = if tag == "product-horosphere" {
                product_chart(horosphere_chart(model)?, model)?
            } else {
                if entry.n != 3 {
                    return Err(GeomError::Inadmissible(
                        "flat-surface products exist for n = 3 only (Theorems 7.1(i), 7.2(iii)(a))"
                            .into(),
                    ));
                }
                let theta0 = entry.theta0.unwrap_or_else(|| default_theta0(eps));
                product_chart(clifford_base_chart(theta0, eps), model)?
            };
            Ok(Resolved {
                chart,
                kind: ResolvedKind::Product,
                expected_k: 0.0,
                c: 0.0,
            })
        }
        other => Err(GeomError::UnsupportedFamily(other.to_string())),
    }
}

/// The family tags the classification theorems allow for given
/// `(epsilon, c)`; empty when no such hypersurface exists.
pub fn classification_scan(epsilon: i8, c: f64) -> Vec<String> {
    let tags: Vec<&str> = if epsilon == 1 {
        if c < 0.0 {
            vec![]
        } else if c == 0.0 {
            vec!["product-flat-surface-S3"]
        } else if c < 1.0 {
            vec!["constant-angle-clifford"]
        } else if c == 1.0 {
            vec!["slice"]
        } else {
            vec!["rot-sph-S"]
        }
    } else if c < -1.0 {
        vec![]
    } else if c == -1.0 {
        vec!["slice"]
    } else if c < 0.0 {
        vec![
            "constant-angle-h-clifford",
            "rot-sph-H",
            "rot-hyp-H",
            "rot-par-H",
        ]
    } else if c == 0.0 {
        vec!["product-flat-surface-H3", "product-horosphere", "rot-sph-H"]
    } else {
        vec!["rot-sph-H"]
    };
    tags.into_iter().map(String::from).collect()
}

struct CheckAcc {
    name: &'static str,
    tol: f64,
    max_residual: f64,
    argmax: Vec<f64>,
}

impl CheckAcc {
    fn new(name: &'static str, tol: f64) -> Self {
        CheckAcc {
            name,
            tol,
            max_residual: 0.0,
            argmax: vec![],
        }
    }

    fn update(&mut self, residual: f64, at: &[f64]) {
        // Strict greater-than keeps the first (lexicographically earliest
        // in sweep order) arg-max, so parallel sweeps stay deterministic.
        if residual > self.max_residual || self.argmax.is_empty() {
            self.max_residual = residual;
            self.argmax = at.to_vec();
        }
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name.to_string(),
            max_residual: self.max_residual,
            pass: self.max_residual < self.tol,
            argmax: self.argmax,
            tol: self.tol,
        }
    }
}

/// All grid points of the chart domain shrunk by the relative margin.
pub(crate) fn grid_points(chart: &Chart<f64>, grid: &GridSpec) -> Vec<Vec<f64>> {
    let dims = chart.intrinsic_dim;
    let k = grid.samples_per_axis.max(3);
    let axes: Vec<Vec<f64>> = chart
        .domain
        .iter()
        .map(|(lo, hi)| {
            let w = hi - lo;
            let (a, b) = (lo + grid.margin * w, hi - grid.margin * w);
            (0..k)
                .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(k.pow(dims as u32));
    let mut idx = vec![0usize; dims];
    loop {
        out.push((0..dims).map(|d| axes[d][idx[d]]).collect());
        let mut d = dims;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < k {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Orbit radius of a rotation chart at arc parameter `s`.
fn orbit_radius(kind: ProfileKind, profile: &ProfileCurve<f64>, s: f64) -> Result<f64, GeomError> {
    let (k, _, _, _) = profile.eval(s)?;
    Ok(match kind {
        ProfileKind::SphericalS => k.cos(),
        ProfileKind::SphericalH => k.sinh(),
        ProfileKind::HyperbolicH => k.cosh(),
        ProfileKind::ParabolicH => k,
    })
}

/// Run every applicable check of the family member over the grid.
pub fn run_suite(
    entry: &FamilyEntry,
    grid: &GridSpec,
    tol: &Tolerances,
) -> Result<VerificationReport, GeomError> {
    let start = Instant::now();
    let resolved = resolve(entry)?;
    let chart = &resolved.chart;
    let dims = chart.intrinsic_dim;
    let eps = entry.epsilon as f64;
    let points = grid_points(chart, grid);
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);

    let mut membership = CheckAcc::new("membership", tol.membership);
    let mut unit_dec = CheckAcc::new("unit-decomposition", tol.decomposition);
    let mut xi_shape = CheckAcc::new("xi-shape", tol.spectra);
    let mut gauss = CheckAcc::new("gauss", tol.jet_identities);
    let mut const_k = CheckAcc::new("constant-K", tol.jet_identities);

    let mut mu_sq = CheckAcc::new("principal-mu-sq", tol.jet_identities);
    let mut lambda_mu = CheckAcc::new("principal-lambda-mu", tol.jet_identities);
    let mut t_align = CheckAcc::new("t-alignment", tol.spectra);
    let mut lambda_zero = CheckAcc::new("lambda-zero", tol.jet_identities);
    let mut angle_curv = CheckAcc::new("angle-curvature", tol.jet_identities);
    let mut xi_exact = CheckAcc::new("xi-spectrum-exact", tol.jet_identities);
    let mut eta_spec = CheckAcc::new("eta-spectrum", tol.jet_identities);
    let mut t_zero = CheckAcc::new("t-vanishes", tol.decomposition);
    let mut nu_zero = CheckAcc::new("nu-vanishes", tol.decomposition);

    let mut nu_min = f64::INFINITY;
    let mut nu_max = f64::NEG_INFINITY;
    let mut nu_max_at: Vec<f64> = vec![];

    for u in &points {
        let fd: FundamentalData<f64> = fundamental_data(chart, u)?;
        membership.update(membership_residual(chart, &fd.point), u);
        let t2 = fd.t_norm().powi(2);
        unit_dec.update((t2 + fd.nu * fd.nu - 1.0).abs(), u);
        xi_shape.update(xi_shape_check(&fd), u);
        for _ in 0..grid.planes {
            let x = random_vec(&mut rng, dims);
            let y = random_vec(&mut rng, dims);
            let z = random_vec(&mut rng, dims);
            gauss.update(gauss_residual(&fd, &x, &y, &z), u);
            match sectional_curvature(&fd, &x, &y) {
                Ok(k) => const_k.update((k - resolved.expected_k).abs(), u),
                Err(GeomError::DegeneratePlane) => {}
                Err(e) => return Err(e),
            }
        }
        match &resolved.kind {
            ResolvedKind::Rotation { .. } => {
                let (lambda, mu, align) = principal_decomposition(&fd)?;
                t_align.update(align, u);
                for m in &mu {
                    mu_sq.update((m * m - (resolved.c - eps)).abs(), u);
                    lambda_mu.update((lambda * m + eps * fd.nu * fd.nu - resolved.c).abs(), u);
                }
            }
            ResolvedKind::ConstantAngle { b } => {
                let (lambda, _, align) = principal_decomposition(&fd)?;
                t_align.update(align, u);
                lambda_zero.update(lambda.abs(), u);
                angle_curv.update((eps * fd.nu * fd.nu - resolved.c).abs(), u);
                if fd.nu < nu_min {
                    nu_min = fd.nu;
                }
                if fd.nu > nu_max {
                    nu_max = fd.nu;
                    nu_max_at = u.clone();
                }
                let a2 = 1.0 + b * b;
                let mut expected_xi = vec![-1.0, -1.0, -1.0 / a2];
                expected_xi.sort_by(|p, q| p.partial_cmp(q).unwrap());
                let xs = fd.xi_spectrum()?;
                for (got, want) in xs.iter().zip(&expected_xi) {
                    xi_exact.update((got - want).abs(), u);
                }
                // Shape operator spectrum {-(B/a) k1_s, -(B/a) k2_s, 0}
                // with k_i^s the parallel-torus curvatures at angle s.
                let s = u[dims - 1];
                let (k1, k2) = if entry.epsilon == 1 {
                    (s.tan(), -1.0 / s.tan())
                } else {
                    (-s.tanh(), -1.0 / s.tanh())
                };
                let ba = b / a2.sqrt();
                let mut expected = vec![-ba * k1, -ba * k2, 0.0];
                expected.sort_by(|p, q| p.partial_cmp(q).unwrap());
                for (got, want) in fd.spectrum.iter().zip(&expected) {
                    eta_spec.update((got - want).abs(), u);
                }
            }
            ResolvedKind::Slice => t_zero.update(fd.t_norm(), u),
            ResolvedKind::Product => nu_zero.update(fd.nu.abs(), u),
        }
    }

    // Finite-difference checks on an evenly spaced subsample.
    let mut codazzi = CheckAcc::new("codazzi", tol.fd_identities);
    let mut nabla_t = CheckAcc::new("nabla-T", tol.fd_identities);
    let mut d_nu = CheckAcc::new("d-nu", tol.fd_identities);
    let stride = (points.len() / grid.fd_points.max(1)).max(1);
    for u in points.iter().step_by(stride) {
        for i in 0..dims {
            for j in i + 1..dims {
                codazzi.update(codazzi_residual(chart, u, i, j)?, u);
            }
        }
        let (rt, rn) = structure_residuals(chart, u)?;
        nabla_t.update(rt, u);
        d_nu.update(rn, u);
    }

    let mut checks = vec![
        membership.finish(),
        unit_dec.finish(),
        xi_shape.finish(),
        gauss.finish(),
        const_k.finish(),
        codazzi.finish(),
        nabla_t.finish(),
        d_nu.finish(),
    ];
    match &resolved.kind {
        ResolvedKind::Rotation {
            kind,
            profile,
            warped,
        } => {
            checks.push(mu_sq.finish());
            checks.push(lambda_mu.finish());
            checks.push(t_align.finish());
            // Arclength of the profile and the warped-product ODEs over a
            // fine 1-d s-grid.
            let mut arclength = CheckAcc::new("arclength", tol.warped);
            let mut warped_ode = CheckAcc::new("warped-ode", tol.warped);
            let (lo, hi) = chart.domain[0];
            for i in 0..100 {
                let s = lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
                let (k, _, kp, hp) = profile.eval(s)?;
                let r = if *kind == ProfileKind::ParabolicH {
                    // (ln k)'^2 + h'^2 = 1, with (ln k)' = k'/k
                    ((kp / k).powi(2) + hp * hp - 1.0).abs()
                } else {
                    (kp * kp + hp * hp - 1.0).abs()
                };
                arclength.update(r, &[s]);
                let (rho, rho_p, rho_pp) = warped.eval(s);
                let delta = warped.delta as f64;
                warped_ode
                    .update((rho_p * rho_p + resolved.c * rho * rho - delta).abs(), &[s]);
                warped_ode.update((rho_pp + resolved.c * rho).abs(), &[s]);
                // The chart's orbit radius must be the warped solution.
                warped_ode.update((orbit_radius(*kind, profile, s)? - rho).abs(), &[s]);
            }
            checks.push(arclength.finish());
            checks.push(warped_ode.finish());
            // Warped-metric structure: g_00 = 1, g_0j = 0, and the angular
            // block scales with rho(s)^2.
            let mut warped_metric = CheckAcc::new("warped-metric", tol.warped);
            let s_ref = chart.center()[0];
            let rho_ref = warped.rho(s_ref);
            for u in points.iter().step_by(stride) {
                let g = induced_metric(chart, u)?;
                warped_metric.update((g.get(0, 0) - 1.0).abs(), u);
                for j in 1..dims {
                    warped_metric.update(g.get(0, j).abs(), u);
                }
                let mut u_ref = u.clone();
                u_ref[0] = s_ref;
                let g_ref = induced_metric(chart, &u_ref)?;
                let rho = warped.rho(u[0]);
                for i in 1..dims {
                    for j in 1..=i {
                        let r = (g.get(i, j) / (rho * rho)
                            - g_ref.get(i, j) / (rho_ref * rho_ref))
                            .abs();
                        warped_metric.update(r, u);
                    }
                }
            }
            checks.push(warped_metric.finish());
        }
        ResolvedKind::ConstantAngle { .. } => {
            checks.push(t_align.finish());
            checks.push(lambda_zero.finish());
            checks.push(angle_curv.finish());
            checks.push(xi_exact.finish());
            checks.push(eta_spec.finish());
            let mut nu_spread = CheckAcc::new("nu-spread", tol.nu_spread);
            nu_spread.update(nu_max - nu_min, &nu_max_at);
            checks.push(nu_spread.finish());
        }
        ResolvedKind::Slice => checks.push(t_zero.finish()),
        ResolvedKind::Product => checks.push(nu_zero.finish()),
    }

    let mut params: BTreeMap<String, f64> = chart.params.iter().cloned().collect();
    params.insert("epsilon".into(), entry.epsilon as f64);
    params.insert("c".into(), resolved.c);
    params.insert("n".into(), entry.n as f64);
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        family: entry.family.clone(),
        params,
        grid: grid.clone(),
        checks,
        pass,
        runtime_ms: start.elapsed().as_millis() as u64,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Every case of the default acceptance battery.
pub fn battery_entries() -> Vec<FamilyEntry> {
    let mut out = Vec::new();
    for n in [3usize, 4] {
        for c in [1.5, 2.0, 4.0] {
            out.push(FamilyEntry::new("rot-sph-S", 1, c).with_n(n));
        }
        for c in [-0.5, 0.0, 0.7] {
            out.push(FamilyEntry::new("rot-sph-H", -1, c).with_n(n));
        }
        for c in [-0.5, -0.25] {
            out.push(FamilyEntry::new("rot-hyp-H", -1, c).with_n(n));
        }
        for c in [-0.5, -0.75] {
            out.push(FamilyEntry::new("rot-par-H", -1, c).with_n(n));
        }
    }
    for b in [0.5, 1.0, 2.0] {
        out.push(FamilyEntry::new("constant-angle-clifford", 1, 0.0).with_b(b));
        out.push(FamilyEntry::new("constant-angle-h-clifford", -1, 0.0).with_b(b));
    }
    out.push(FamilyEntry::new("slice", 1, 1.0));
    out.push(FamilyEntry::new("slice", -1, -1.0));
    out.push(FamilyEntry::new("product-flat-surface-S3", 1, 0.0));
    out.push(FamilyEntry::new("product-flat-surface-H3", -1, 0.0));
    out.push(FamilyEntry::new("product-horosphere", -1, 0.0));
    out.push(FamilyEntry::new("product-horosphere", -1, 0.0).with_n(4));
    out
}

/// Run the whole battery; optionally write one JSON report per case plus
/// a summary file into `out_dir`.
pub fn battery(out_dir: Option<&std::path::Path>) -> Result<Vec<VerificationReport>, GeomError> {
    let tol = Tolerances::default();
    let mut reports = Vec::new();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| GeomError::Io(e.to_string()))?;
    }
    for (i, entry) in battery_entries().iter().enumerate() {
        let grid = GridSpec::for_dim(entry.n);
        let report = run_suite(entry, &grid, &tol)?;
        if let Some(dir) = out_dir {
            let name = format!("{:02}-{}-{}.json", i, report.family, entry.epsilon);
            std::fs::write(dir.join(name), report.to_json())
                .map_err(|e| GeomError::Io(e.to_string()))?;
        }
        reports.push(report);
    }
    if let Some(dir) = out_dir {
        let summary: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "family": r.family,
                    "params": r.params,
                    "pass": r.pass,
                    "runtime_ms": r.runtime_ms,
                })
            })
            .collect();
        std::fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&summary).expect("summary serialization"),
        )
        .map_err(|e| GeomError::Io(e.to_string()))?;
    }
    Ok(reports)
}

//! Spectral certification of transfer and revival on weighted graphs.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{BigInt, QuadraticEigenvalue, Rational};
use crate::explicit::ExplicitGraph;
use crate::partition::{GraphError, PartitionedGraph};
use crate::weighted::WeightedGraph;

/// Eigenvalues closer than this are one eigenspace.
pub const CLUSTER_TOL: f64 = 1e-7;
/// `||E a||` above this puts the eigenvalue in the support of `a`.
pub const SUPPORT_TOL: f64 = 1e-8;
/// Gap ratios must be this close to integers.
pub const FIT_TOL: f64 = 1e-6;
pub const COSPECTRAL_TOL: f64 = 1e-6;
pub const SCAN_POINTS: usize = 100_000;

pub fn default_fidelity_tol(size: usize) -> f64 {
    if size <= 200 {
        1e-9
    } else {
        1e-8
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("eigensolver did not converge to the required accuracy (residual {0:e})")]
    ConvergenceFailure(f64),
    #[error("weight matrix is not symmetric with zero diagonal")]
    NotSymmetric,
    #[error("no quadratic integer fit: {0}")]
    NoFit(String),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` belongs to `values[k]`.
    pub vectors: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub value: f64,
    pub indices: Vec<usize>,
}

pub fn eigensystem(g: &WeightedGraph) -> Result<EigenSystem, SpectralError> {
    if !g.is_symmetric() {
        return Err(SpectralError::NotSymmetric);
    }
    let a = g.matrix();
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 10_000).ok_or(SpectralError::ConvergenceFailure(f64::INFINITY))?;
    let mut order: Vec<usize> = (0..g.size).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(g.size, g.size, |r, c| eig.eigenvectors[(r, order[c])]);

    let scale = g.norm_bound().max(1.0);
    let residual = (0..g.size).map(|k| (&a * vectors.column(k) - vectors.column(k) * values[k]).norm()).fold(0.0, f64::max);
    if residual > 1e-10 * scale {
        return Err(SpectralError::ConvergenceFailure(residual));
    }
    Ok(EigenSystem { values, vectors })
}

impl EigenSystem {
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn eigenspaces(&self) -> Vec<Eigenspace> {
        let mut out: Vec<Eigenspace> = Vec::new();
        for (k, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some(last) if v - self.values[*last.indices.last().unwrap()] <= CLUSTER_TOL => last.indices.push(k),
                _ => out.push(Eigenspace { value: v, indices: vec![k] }),
            }
        }
        for s in &mut out {
            s.value = s.indices.iter().map(|&k| self.values[k]).sum::<f64>() / s.indices.len() as f64;
        }
        out
    }

    /// `E a`, the projection of basis vector `a` onto the eigenspace.
    pub fn project(&self, space: &Eigenspace, a: usize) -> DVector<f64> {
        let mut out = DVector::zeros(self.size());
        for &k in &space.indices {
            out += self.vectors.column(k) * self.vectors[(a, k)];
        }
        out
    }

    /// `<b| E |a>` per eigenspace, for evaluating transfer amplitudes.
    pub fn propagator(&self, a: usize, b: usize) -> Propagator {
        let terms = self
            .eigenspaces()
            .into_iter()
            .map(|s| (s.value, s.indices.iter().map(|&k| self.vectors[(a, k)] * self.vectors[(b, k)]).sum()))
            .collect();
        Propagator { terms }
    }
}

#[derive(Debug, Clone)]
pub struct Propagator {
    terms: Vec<(f64, f64)>,
}

impl Propagator {
    /// `|<b| exp(-iAt) |a>|`.
    pub fn fidelity(&self, t: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for &(l, w) in &self.terms {
            let (s, c) = (l * t).sin_cos();
            re += w * c;
            im -= w * s;
        }
        re.hypot(im)
    }

    /// Best fidelity on `points` evenly spaced times in `(0, upto]`.
    pub fn scan_max(&self, upto: f64, points: usize) -> (f64, f64) {
        (1..=points)
            .map(|i| {
                let t = upto * i as f64 / points as f64;
                (self.fidelity(t), t)
            })
            .fold((0.0, 0.0), |best, cur| if cur.0 > best.0 { cur } else { best })
    }
}

fn check_vertex(g: &WeightedGraph, v: usize) -> Result<(), SpectralError> {
    if v < g.size {
        Ok(())
    } else {
        Err(SpectralError::BadVertex(v))
    }
}

/// Input-to-output fidelity at time `t`.
pub fn fidelity(g: &WeightedGraph, t: f64) -> Result<f64, SpectralError> {
    fidelity_between(g, g.input, g.output, t)
}

pub fn fidelity_between(g: &WeightedGraph, a: usize, b: usize, t: f64) -> Result<f64, SpectralError> {
    check_vertex(g, a)?;
    check_vertex(g, b)?;
    Ok(eigensystem(g)?.propagator(a, b).fidelity(t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CospectralEntry {
    pub eigenvalue: f64,
    /// `||E a||`.
    pub support: f64,
    pub multiplicity: usize,
    /// `s` with `E a = s E b`, if there is one.
    pub sign: Option<i8>,
}

/// One entry per eigenspace in the support of `a`, ascending.
pub fn strong_cospectrality(es: &EigenSystem, a: usize, b: usize) -> Vec<CospectralEntry> {
    es.eigenspaces()
        .into_iter()
        .filter_map(|s| {
            let ea = es.project(&s, a);
            let support = ea.norm();
            if support <= SUPPORT_TOL {
                return None;
            }
            let eb = es.project(&s, b);
            let sign = if (&ea - &eb).norm() <= COSPECTRAL_TOL {
                Some(1)
            } else if (&ea + &eb).norm() <= COSPECTRAL_TOL {
                Some(-1)
            } else {
                None
            };
            Some(CospectralEntry { eigenvalue: s.value, support, multiplicity: s.indices.len(), sign })
        })
        .collect()
}

/// Support eigenvalues written as `(alpha + beta_n sqrt(delta)) / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub alpha: i64,
    pub delta: u64,
    /// Ascending with the eigenvalues.
    pub betas: Vec<i64>,
    /// Whether `(beta_{n+1} - beta_n) / 2` is odd, per neighbouring pair.
    pub odd_gaps: Vec<bool>,
}

impl QuadraticFit {
    pub fn eigenvalues(&self) -> Vec<QuadraticEigenvalue> {
        self.betas.iter().map(|&b| QuadraticEigenvalue::new(self.alpha, b, self.delta)).collect()
    }

    /// `(beta_n - beta_0) / 2`.
    pub fn offsets(&self) -> Vec<i64> {
        self.betas.iter().map(|b| (b - self.betas[0]) / 2).collect()
    }
}

fn support_values(es: &EigenSystem, a: usize) -> Vec<f64> {
    es.eigenspaces().into_iter().filter(|s| es.project(s, a).norm() > SUPPORT_TOL).map(|s| s.value).collect()
}

pub fn fit_quadratic_spectrum(es: &EigenSystem, a: usize) -> Result<QuadraticFit, SpectralError> {
    fit_values(&support_values(es, a))
}

fn fit_values(phi: &[f64]) -> Result<QuadraticFit, SpectralError> {
    if phi.is_empty() {
        return Err(SpectralError::NoFit("empty support".into()));
    }
    if phi.len() == 1 {
        return Err(SpectralError::NoFit("single support eigenvalue, no gap to fit".into()));
    }
    let gaps: Vec<f64> = phi.windows(2).map(|w| w[1] - w[0]).collect();
    let smallest = gaps.iter().copied().fold(f64::INFINITY, f64::min);

    let (delta, multiples) = (1..=4)
        .find_map(|j| {
            let delta = ((smallest / j as f64).powi(2)).round();
            if delta < 1.0 {
                return None;
            }
            let root = delta.sqrt();
            let mut ms = Vec::with_capacity(gaps.len());
            for &gap in &gaps {
                let m = (gap / root).round();
                if m < 1.0 || (gap / root - m).abs() > FIT_TOL {
                    return None;
                }
                ms.push(m as i64);
            }
            let g = ms.iter().fold(0i64, |acc, &m| acc.gcd(&m));
            (g == 1).then_some((delta as u64, ms))
        })
        .ok_or_else(|| SpectralError::NoFit("gaps are not integral multiples of any sqrt(delta)".into()))?;

    let root = (delta as f64).sqrt();
    let twice0 = 2.0 * phi[0];
    let (alpha, beta0) = match crate::arith::exact_sqrt_u64(delta) {
        Some(r) => {
            let c = twice0.round();
            if (twice0 - c).abs() > FIT_TOL {
                return Err(SpectralError::NoFit(format!("2 lambda_0 = {twice0} is not an integer")));
            }
            let c = c as i64;
            let r = r as i64;
            let alpha = c.rem_euclid(r);
            (alpha, (c - alpha) / r)
        }
        None => {
            let bound = (twice0.abs() / root).ceil() as i64 + 2;
            let mut found = None;
            for k in 0..=bound {
                for beta in [k, -k] {
                    let alpha = twice0 - beta as f64 * root;
                    if (alpha - alpha.round()).abs() <= FIT_TOL {
                        found = Some((alpha.round() as i64, beta));
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
            found.ok_or_else(|| SpectralError::NoFit(format!("lambda_0 = {} is not of the form (a + b sqrt({delta}))/2", phi[0])))?
        }
    };
    let mut betas = vec![beta0];
    for m in &multiples {
        betas.push(betas.last().unwrap() + 2 * m);
    }
    for (l, b) in phi.iter().zip(&betas) {
        let v = QuadraticEigenvalue::new(alpha, *b, delta).value();
        if (v - l).abs() > FIT_TOL * l.abs().max(1.0) {
            return Err(SpectralError::NoFit(format!("eigenvalue {l} refits to {v}")));
        }
    }
    Ok(QuadraticFit { alpha, delta, betas, odd_gaps: multiples.iter().map(|m| m % 2 == 1).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pst,
    RevivalOnly,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub size: usize,
    pub input: usize,
    pub output: usize,
    pub eigenvalues: Vec<f64>,
    /// Per eigenvalue: does its eigenspace carry weight of the input?
    pub support: Vec<bool>,
    pub cospectral: Vec<CospectralEntry>,
    pub fit: Option<QuadraticFit>,
    pub fit_error: Option<String>,
    /// Every support eigenspace simple and signs alternate as the fit requires.
    pub sign_pattern_holds: bool,
    /// Some support eigenspace has multiplicity above one.
    pub degenerate_support: bool,
    pub transfer_time: Option<f64>,
    pub revival_time: Option<f64>,
    pub fidelity_at_transfer: Option<f64>,
    pub revival_fidelity: Option<f64>,
    pub max_fidelity: f64,
    pub max_fidelity_time: f64,
    pub scan_limit: f64,
    pub input_eccentricity: Option<usize>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Fidelity tolerance; size-dependent default when `None`.
    pub tol: Option<f64>,
    pub scan_points: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { tol: None, scan_points: SCAN_POINTS }
    }
}

pub fn certify(g: &WeightedGraph) -> Result<SpectrumReport, SpectralError> {
    certify_with(g, &CertifyOptions::default())
}

pub fn certify_with(g: &WeightedGraph, opts: &CertifyOptions) -> Result<SpectrumReport, SpectralError> {
    check_vertex(g, g.input)?;
    check_vertex(g, g.output)?;
    let (a, b) = (g.input, g.output);
    let tol = opts.tol.unwrap_or_else(|| default_fidelity_tol(g.size));
    let es = eigensystem(g)?;
    let spaces = es.eigenspaces();
    let mut support = vec![false; g.size];
    for s in &spaces {
        if es.project(s, a).norm() > SUPPORT_TOL {
            for &k in &s.indices {
                support[k] = true;
            }
        }
    }
    let cospectral = strong_cospectrality(&es, a, b);
    let phi: Vec<f64> = cospectral.iter().map(|c| c.eigenvalue).collect();
    let (fit, fit_error) = match fit_values(&phi) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let degenerate_support = cospectral.iter().any(|c| c.multiplicity > 1);
    let sign_pattern_holds = match &fit {
        Some(f) => {
            let s0 = cospectral[0].sign;
            s0.is_some()
                && cospectral.iter().zip(f.offsets()).all(|(c, off)| match (c.sign, s0) {
                    (Some(s), Some(s0)) => (s * s0) as i64 == if off % 2 == 0 { 1 } else { -1 },
                    _ => false,
                })
        }
        None => false,
    };

    let transfer = es.propagator(a, b);
    let revival = es.propagator(a, a);
    let transfer_time = fit.as_ref().map(|f| PI / (f.delta as f64).sqrt());
    let revival_time = transfer_time.map(|t| 2.0 * t);
    let fidelity_at_transfer = transfer_time.map(|t| transfer.fidelity(t));
    let revival_fidelity = revival_time.map(|t| revival.fidelity(t));
    let scan_limit = match (&fit, phi.len()) {
        (Some(f), _) => 2.0 * PI / (f.delta as f64).sqrt(),
        (None, n) if n >= 2 => 2.0 * PI / phi.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min),
        _ => 2.0 * PI,
    };
    let (max_fidelity, max_fidelity_time) = transfer.scan_max(scan_limit, opts.scan_points.max(1));

    let verdict = if a != b && fidelity_at_transfer.is_some_and(|f| f >= 1.0 - tol) {
        Verdict::Pst
    } else if revival_fidelity.is_some_and(|f| f >= 1.0 - tol) {
        Verdict::RevivalOnly
    } else {
        Verdict::Neither
    };
    Ok(SpectrumReport {
        size: g.size,
        input: a,
        output: b,
        eigenvalues: es.values.clone(),
        support,
        cospectral,
        fit,
        fit_error,
        sign_pattern_holds,
        degenerate_support,
        transfer_time,
        revival_time,
        fidelity_at_transfer,
        revival_fidelity,
        max_fidelity,
        max_fidelity_time,
        scan_limit,
        input_eccentricity: g.eccentricity(a),
        tolerance: tol,
        verdict,
    })
}

/// Walks of length `dist(a, b)` from `a` to `b`, exactly.
pub fn path_count_explicit(g: &ExplicitGraph, a: usize, b: usize) -> Option<BigInt> {
    let eps = g.bfs_distances(a)[b]?;
    let adj = g.adjacency_lists();
    let mut cur = vec![BigInt::zero(); g.n];
    cur[a] = BigInt::one();
    for _ in 0..eps {
        let mut next = vec![BigInt::zero(); g.n];
        for (v, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &w in &adj[v] {
                next[w] += c;
            }
        }
        cur = next;
    }
    Some(cur[b].clone())
}

/// Input-to-output walk count of the expanded graph, from node degrees alone.
///
/// The input node holds a single vertex, so walk counts stay constant on
/// every node and one number per node suffices.
pub fn path_count_partitioned(g: &PartitionedGraph) -> Result<BigInt, SpectralError> {
    g.ensure_valid()?;
    let report = g.validate();
    if !report.input_single || !report.output_single {
        return Err(SpectralError::Graph(GraphError::InvalidGraph("input and output must be single vertices".into())));
    }
    let eps = g.node_distances()?.transfer_distance;
    let idx = |id: &str| g.node_index(id).expect("validated");
    let mut cur = vec![BigInt::zero(); g.nodes.len()];
    cur[idx(&g.input)] = BigInt::one();
    for _ in 0..eps {
        let mut next = vec![BigInt::zero(); g.nodes.len()];
        for e in &g.edges {
            let (u, v) = (idx(&e.u), idx(&e.v));
            // a vertex of u has du neighbours in v
            next[u] += &cur[v] * e.du;
            next[v] += &cur[u] * e.dv;
        }
        cur = next;
    }
    Ok(cur[idx(&g.output)].clone())
}

/// `<a| A^eps |b>` in floating point.
pub fn path_count_weighted(g: &WeightedGraph, a: usize, b: usize) -> Option<f64> {
    let eps = g.bfs_distances(a)[b]?;
    let m = g.matrix();
    let mut v = DVector::zeros(g.size);
    v[a] = 1.0;
    for _ in 0..eps {
        v = &m * v;
    }
    Some(v[b])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KFormulaCheck {
    pub path_count: String,
    /// The spectral value of `k^2`, exact.
    pub formula_k_squared: String,
    pub holds: bool,
}

/// `k^2 = delta^(|Phi| - 1) / (sum_n 1 / |prod_{m != n} (b_n - b_m)|)^2` with `b_n = (beta_n - beta_0)/2`.
pub fn formula_k_squared(fit: &QuadraticFit) -> Rational {
    let b = fit.offsets();
    let mut sum = Rational::zero();
    for (n, &bn) in b.iter().enumerate() {
        let prod = b.iter().enumerate().filter(|&(m, _)| m != n).fold(BigInt::one(), |acc, (_, &bm)| acc * BigInt::from(bn - bm));
        sum += Rational::new(BigInt::one(), prod.abs());
    }
    let top = num_traits::pow(BigInt::from(fit.delta), b.len() - 1);
    Rational::from_integer(top) / (&sum * &sum)
}

/// Compares the spectral formula against a path count obtained elsewhere.
pub fn k_formula_check_with(report: &SpectrumReport, path_count: &BigInt) -> Result<KFormulaCheck, SpectralError> {
    if report.verdict != Verdict::Pst {
        return Err(SpectralError::NoFit("the k formula needs a transfer graph".into()));
    }
    let fit = report.fit.as_ref().expect("transfer verdict implies a fit");
    let k2 = formula_k_squared(fit);
    let holds = k2 == Rational::from_integer(path_count * path_count);
    Ok(KFormulaCheck { path_count: path_count.to_string(), formula_k_squared: k2.to_string(), holds })
}

/// As [`k_formula_check_with`], with the walk count read off the weighted matrix
/// and rounded. Exact for the integer counts of genuine transfer graphs.
pub fn k_formula_check(g: &WeightedGraph) -> Result<KFormulaCheck, SpectralError> {
    let report = certify(g)?;
    let k = path_count_weighted(g, g.input, g.output).ok_or_else(|| SpectralError::NoFit("output unreachable".into()))?;
    let rounded = k.round();
    if (k - rounded).abs() > 1e-6 * k.abs().max(1.0) {
        return Err(SpectralError::NoFit(format!("walk weight {k} is not an integer")));
    }
    let k = BigInt::from(rounded.to_i128().unwrap_or(i128::MAX));
    k_formula_check_with(&report, &k)
}

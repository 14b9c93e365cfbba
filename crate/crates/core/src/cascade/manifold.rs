use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::index::{Field, FieldedIndex};
use crate::textproc::{bhattacharyya, LanguageModel};

/// Result of score propagation. `deltas[k]` is `‖f_{k+1} - f_k‖∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub deltas: Vec<f64>,
}

/// Pairwise Bhattacharyya affinities with a zero diagonal.
pub fn affinity_matrix(models: &[LanguageModel]) -> Vec<Vec<f64>> {
    let n = models.len();
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let s = bhattacharyya(&models[i], &models[j]);
            w[i][j] = s;
            w[j][i] = s;
        }
    }
    w
}

/// Affinities between candidate documents' Dirichlet-smoothed content models,
/// with the collection model restricted to (and renormalized over) the
/// candidates' union vocabulary.
///
/// Equivalent to building every smoothed model explicitly and calling
/// [`affinity_matrix`], but each pair only walks the two documents' own
/// terms: outside them both models are `mu·c(w)/(len+mu)`, and that tail sums
/// in closed form to `mu·(1 - Σ_{w∈D_i∪D_j} c(w)) / sqrt((len_i+mu)(len_j+mu))`.
pub fn candidate_affinity(index: &FieldedIndex, docs: &[u32], mu: f64) -> Vec<Vec<f64>> {
    let field = Field::Content;
    let mut union: BTreeMap<u32, f64> = BTreeMap::new();
    for &d in docs {
        for &(t, _) in index.doc_terms(field, d) {
            union.entry(t).or_insert(0.0);
        }
    }
    let mut z = 0.0;
    for (t, c) in union.iter_mut() {
        *c = index.collection_frequency(field, *t) as f64;
        z += *c;
    }
    let inv_sqrt_denom: Vec<f64> = docs
        .iter()
        .map(|&d| 1.0 / (index.doc_len(field, d) as f64 + mu).sqrt())
        .collect();
    // per candidate: (term, sqrt p(w|D), sqrt(mu·c(w)), c(w))
    let rows: Vec<Vec<(u32, f64, f64, f64)>> = docs
        .iter()
        .zip(&inv_sqrt_denom)
        .map(|(&d, &isd)| {
            index
                .doc_terms(field, d)
                .iter()
                .map(|&(t, tf)| {
                    let c = if z > 0.0 { union[&t] / z } else { 0.0 };
                    (t, (f64::from(tf) + mu * c).sqrt() * isd, (mu * c).sqrt(), c)
                })
                .collect()
        })
        .collect();

    let n = docs.len();
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        let a = &rows[i];
        for j in (i + 1)..n {
            let b = &rows[j];
            let (mut x, mut y) = (0, 0);
            let mut covered = 0.0;
            let mut sum = 0.0;
            while x < a.len() && y < b.len() {
                let (ta, pa, ma, ca) = a[x];
                let (tb, pb, mb, cb) = b[y];
                if ta == tb {
                    sum += pa * pb;
                    covered += ca;
                    x += 1;
                    y += 1;
                } else if ta < tb {
                    sum += pa * ma * inv_sqrt_denom[j];
                    covered += ca;
                    x += 1;
                } else {
                    sum += pb * mb * inv_sqrt_denom[i];
                    covered += cb;
                    y += 1;
                }
            }
            for &(_, pa, ma, ca) in &a[x..] {
                sum += pa * ma * inv_sqrt_denom[j];
                covered += ca;
            }
            for &(_, pb, mb, cb) in &b[y..] {
                sum += pb * mb * inv_sqrt_denom[i];
                covered += cb;
            }
            let tail = mu * (1.0 - covered).max(0.0) * inv_sqrt_denom[i] * inv_sqrt_denom[j];
            let s = (sum + tail).clamp(0.0, 1.0);
            w[i][j] = s;
            w[j][i] = s;
        }
    }
    w
}

/// Iterates `f ← α·S·f + (1-α)·y` from `f = y`, where
/// `S = D^{-1/2} W D^{-1/2}` and `D` holds the row sums of `affinity`.
/// Rows (and columns) with zero degree are zero in `S`.
pub fn manifold_propagate(
    affinity: &[Vec<f64>],
    init: &[f64],
    alpha: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<Propagation> {
    let n = init.len();
    if n == 0 {
        return Err(Error::Empty("manifold candidates"));
    }
    if affinity.len() != n || affinity.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "affinity must be {n}x{n} to match the initial scores"
        )));
    }
    if init.iter().any(|v| !v.is_finite()) || affinity.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("manifold input"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1)")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be > 0".into()));
    }

    if n == 1 {
        // no graph to propagate over
        return Ok(Propagation {
            scores: init.to_vec(),
            iterations: 0,
            converged: true,
            deltas: Vec::new(),
        });
    }

    let inv_sqrt_deg: Vec<f64> = affinity
        .iter()
        .map(|row| {
            let d: f64 = row.iter().sum();
            if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 }
        })
        .collect();
    let s: Vec<Vec<f64>> = affinity
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &w)| inv_sqrt_deg[i] * w * inv_sqrt_deg[j])
                .collect()
        })
        .collect();

    let mut f = init.to_vec();
    let mut next = vec![0.0; n];
    let mut deltas = Vec::new();
    let mut converged = false;
    for _ in 0..max_iterations {
        for (i, out) in next.iter_mut().enumerate() {
            let sf: f64 = s[i].iter().zip(&f).map(|(a, b)| a * b).sum();
            *out = alpha * sf + (1.0 - alpha) * init[i];
        }
        let delta = f
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut f, &mut next);
        deltas.push(delta);
        if delta < tolerance {
            converged = true;
            break;
        }
    }
    Ok(Propagation {
        scores: f,
        iterations: deltas.len(),
        converged,
        deltas,
    })
}

/// Manifold ranking over candidate language models seeded with `init`
/// (expected in `[0, 1]`, e.g. min-max normalized scores).
pub fn manifold_rank(
    candidate_lms: &[LanguageModel],
    init: &[f64],
    alpha: f64,
    tolerance: f64,
    max_iterations: usize,
) -> Result<Vec<f64>> {
    if candidate_lms.len() != init.len() {
        return Err(Error::InvalidArgument(format!(
            "{} models but {} initial scores",
            candidate_lms.len(),
            init.len()
        )));
    }
    if init.iter().any(|v| v.is_finite() && !(0.0..=1.0).contains(v)) {
        return Err(Error::InvalidArgument(
            "initial scores must be normalized to [0, 1]".into(),
        ));
    }
    let w = affinity_matrix(candidate_lms);
    Ok(manifold_propagate(&w, init, alpha, tolerance, max_iterations)?.scores)
}

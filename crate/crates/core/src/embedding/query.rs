use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::eigen::symmetric_eigen;
use super::model::EmbeddingModel;
use crate::math::{dot, fabs, sqrt};
use crate::{Error, Result};

fn to_f64(v: &[f32]) -> Vec<f64> {
    v.iter().map(|&x| f64::from(x)).collect()
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let norm = sqrt(dot(&v, &v));
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

/// Unit-normalised vectors of every vocabulary word, for repeated
/// similarity queries.
pub struct NeighborIndex<'m> {
    model: &'m EmbeddingModel,
    unit: Vec<Vec<f64>>,
}

impl<'m> NeighborIndex<'m> {
    pub fn new(model: &'m EmbeddingModel) -> Self {
        let unit = (0..model.vocab().len() as u32)
            .map(|id| normalized(to_f64(&model.id_vector(id))))
            .collect();
        NeighborIndex { model, unit }
    }

    /// The `topk` vocabulary words most cosine-similar to `token`, excluding
    /// the token itself. Ties go to the lower word id.
    pub fn query(&self, token: &str, topk: usize) -> Result<Vec<(String, f64)>> {
        if topk == 0 {
            return Err(Error::InvalidInput("topk must be at least 1".into()));
        }
        let q = to_f64(&self.model.word_vector(token)?.values);
        if dot(&q, &q) == 0.0 {
            return Err(Error::ZeroNormQuery(token.to_string()));
        }
        let q = normalized(q);
        let own = self.model.vocab().id(token);
        let mut scored: Vec<(u32, f64)> = self
            .unit
            .iter()
            .enumerate()
            .map(|(id, u)| (id as u32, dot(&q, u)))
            .filter(|&(id, _)| Some(id) != own)
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.truncate(topk);
        let vocab = self.model.vocab();
        Ok(scored
            .into_iter()
            .map(|(id, c)| (vocab.token(id).to_string(), c))
            .collect())
    }
}

pub fn nearest_neighbors(
    model: &EmbeddingModel,
    token: &str,
    topk: usize,
) -> Result<Vec<(String, f64)>> {
    NeighborIndex::new(model).query(token, topk)
}

/// Cosine similarity; zero when either vector is zero.
pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let a = to_f64(a);
    let b = to_f64(b);
    let na = sqrt(dot(&a, &a));
    let nb = sqrt(dot(&b, &b));
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(&a, &b) / (na * nb)
    }
}

/// Projects the rows of `points` onto the top two principal components of
/// their sample covariance. Each component is signed so that its
/// largest-magnitude loading is positive.
pub fn pca_2d(points: &[Vec<f64>]) -> Result<Vec<[f64; 2]>> {
    if points.len() < 3 {
        return Err(Error::TooFewTokens {
            needed: 3,
            found: points.len(),
        });
    }
    let dim = points[0].len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::ShapeMismatch {
            op: "pca",
            expected: alloc::format!("{dim} columns"),
            found: alloc::format!("{} columns", bad.len()),
        });
    }
    let n = points.len();
    let mut mean = vec![0.0; dim];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x / n as f64;
        }
    }
    let centered: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let mut cov = vec![0.0; dim * dim];
    for c in &centered {
        for i in 0..dim {
            for j in i..dim {
                cov[i * dim + j] += c[i] * c[j];
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let v = cov[i * dim + j] / (n - 1) as f64;
            cov[i * dim + j] = v;
            cov[j * dim + i] = v;
        }
    }
    let (_, mut vectors) = symmetric_eigen(&cov, dim);
    vectors.resize(2, vec![0.0; dim]);
    for v in vectors.iter_mut() {
        fix_sign(v);
    }
    Ok(centered
        .iter()
        .map(|c| [dot(c, &vectors[0]), dot(c, &vectors[1])])
        .collect())
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if fabs(*x) > fabs(v[best]) {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// 2-D PCA coordinates of the word vectors of `tokens`, in input order.
pub fn pca_project<S: AsRef<str>>(
    model: &EmbeddingModel,
    tokens: &[S],
) -> Result<Vec<(String, f64, f64)>> {
    let points = tokens
        .iter()
        .map(|t| Ok(to_f64(&model.word_vector(t.as_ref())?.values)))
        .collect::<Result<Vec<_>>>()?;
    let coords = pca_2d(&points)?;
    Ok(tokens
        .iter()
        .zip(coords)
        .map(|(t, [x, y])| (t.as_ref().to_string(), x, y))
        .collect())
}

use deligne::DeligneCocycle;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::TwistedBundle;
use crate::monomial::CMatrix;
use crate::BundleError;

/// Largest group handled by the decomposition.
pub const MAX_ORDER: usize = 24;
const ATTEMPTS: u64 = 6;
const CLUSTER: f64 = 1e-6;

/// Irreducible projective representation, one unitary matrix per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveRep {
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
    pub character: Vec<Complex64>,
}

impl ProjectiveRep {
    pub fn into_bundle(self, cocycle: &DeligneCocycle) -> Result<TwistedBundle, BundleError> {
        TwistedBundle::new(cocycle.clone(), vec![(self.dim, 0)], self.matrices)
    }
}

/// Twisted left and right regular representations.
fn regular(c: &DeligneCocycle) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let gd = c.groupoid();
    let n = gd.n_morphisms();
    let mut left = vec![CMatrix::zeros(n, n); n];
    let mut right = vec![CMatrix::zeros(n, n); n];
    for (g, h) in gd.composable_pairs() {
        let z = c.q(g, h).to_complex();
        left[g][(gd.compose(g, h), h)] = z;
        right[h][(gd.compose(g, h), g)] = z;
    }
    (left, right)
}

fn same(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < CLUSTER)
}

fn attempt(left: &[CMatrix], right: &[CMatrix], rng: &mut ChaCha8Rng) -> Option<Vec<ProjectiveRep>> {
    let n = left.len();
    let mut x = CMatrix::zeros(n, n);
    for r in right {
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        x += r * a + r.adjoint() * a.conj();
    }
    let eig = x.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    // Cluster equal eigenvalues into eigenspaces.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cl) if (eig.eigenvalues[i] - eig.eigenvalues[*cl.last().unwrap()]).abs() < CLUSTER => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    let mut reps: Vec<(ProjectiveRep, usize)> = Vec::new();
    for cl in clusters {
        let q = CMatrix::from_fn(n, cl.len(), |i, j| eig.eigenvectors[(i, cl[j])]);
        let matrices: Vec<CMatrix> = left.iter().map(|l| q.adjoint() * l * &q).collect();
        let character: Vec<Complex64> = matrices.iter().map(|m| m.trace()).collect();
        let norm: f64 = character.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        if (norm - 1.0).abs() > CLUSTER {
            return None;
        }
        match reps.iter_mut().find(|(r, _)| same(&r.character, &character)) {
            Some((_, count)) => *count += 1,
            None => reps.push((ProjectiveRep { dim: cl.len(), matrices, character }, 1)),
        }
    }
    if reps.iter().any(|(r, k)| r.dim != *k) || reps.iter().map(|(r, _)| r.dim * r.dim).sum::<usize>() != n {
        return None;
    }
    let mut out: Vec<ProjectiveRep> = reps.into_iter().map(|(r, _)| r).collect();
    out.sort_by(|a, b| {
        a.dim.cmp(&b.dim).then_with(|| {
            let key = |r: &ProjectiveRep| r.character.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect::<Vec<_>>();
            key(a).cmp(&key(b))
        })
    });
    Some(out)
}

/// Irreducible representations of the twisted group algebra, up to isomorphism.
pub fn irreducible_projective_reps(c: &DeligneCocycle, seed: u64) -> Result<Vec<ProjectiveRep>, BundleError> {
    let gd = c.groupoid();
    if gd.n_objects() != 1 {
        return Err(BundleError::NotAGroup);
    }
    if gd.n_morphisms() > MAX_ORDER {
        return Err(BundleError::TooLarge(gd.n_morphisms()));
    }
    let report = c.validate();
    if !report.is_valid() || c.is_smooth() {
        return Err(BundleError::Invalid(report.summary()));
    }
    let (left, right) = regular(c);
    for k in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
        if let Some(reps) = attempt(&left, &right, &mut rng) {
            return Ok(reps);
        }
    }
    Err(BundleError::NotConverged)
}

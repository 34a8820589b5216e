//! Brute-force character theory used as ground truth: conjugacy classes by
//! closure under conjugation, and the complex character table by Burnside's
//! class-matrix method.
//!
//! The class sums span the center of the group algebra. In the basis
//! `C_k / sqrt|C_k|` multiplication by `C_i` has adjoint multiplication by
//! `C_{i^{-1}}`, so a combination `Σ w_i C_i` with `w_{i^{-1}} = conj(w_i)` is
//! Hermitian. Its eigenvectors are the central idempotents, whose coordinates
//! are `conj χ(g_k) sqrt|C_k|` up to scale.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::harmonic::ClassFunction;
use crate::liering::{LazardGroup, Subring};

pub const DEFAULT_ORDER_CAP: usize = 100_000;
pub const DEFAULT_CLASS_CAP: usize = 512;
pub const DEFAULT_RETRIES: usize = 8;
const AUDIT_SAMPLES: usize = 50;
const GAP_THRESHOLD: f64 = 1e-6;
const REFINING_MATRICES: usize = 3;
const VALIDATION_TOLERANCE: f64 = 1e-8;

/// A finite group on the index set `0..order()`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    fn identity(&self) -> usize;
    fn generators(&self) -> Vec<usize>;
}

impl FiniteGroup for LazardGroup {
    fn order(&self) -> usize {
        LazardGroup::order(self)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_index(a, b)
    }

    fn inv(&self, a: usize) -> usize {
        self.inv_index(a)
    }

    fn identity(&self) -> usize {
        0
    }

    fn generators(&self) -> Vec<usize> {
        LazardGroup::generators(self)
    }
}

/// The subgroup `exp k` of `exp g` for a subring `k`, indexed by position in
/// the subring's sorted element list.
pub struct SubgroupView<'a> {
    group: &'a LazardGroup,
    sub: &'a Subring,
}

impl<'a> SubgroupView<'a> {
    pub fn new(group: &'a LazardGroup, sub: &'a Subring) -> Self {
        SubgroupView { group, sub }
    }

    pub fn ambient(&self, local: usize) -> usize {
        self.sub.elements()[local]
    }

    fn local(&self, ambient: usize) -> usize {
        self.sub.local_index(ambient).expect("subgroup is closed under multiplication")
    }
}

impl FiniteGroup for SubgroupView<'_> {
    fn order(&self) -> usize {
        self.sub.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.local(self.group.mul_index(self.ambient(a), self.ambient(b)))
    }

    fn inv(&self, a: usize) -> usize {
        self.local(self.group.inv_index(self.ambient(a)))
    }

    fn identity(&self) -> usize {
        self.local(0)
    }

    fn generators(&self) -> Vec<usize> {
        let ring = self.group.ring();
        self.sub.generators().iter().map(|g| self.local(ring.index_of(g))).collect()
    }
}

/// Conjugacy classes ordered by their smallest element, which is the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassPartition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl ConjClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Builds a partition from arbitrary labels, renumbering by smallest element.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; labels.len()];
        for (x, &l) in labels.iter().enumerate() {
            let c = *map.entry(l).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(x);
            class_of[x] = c;
        }
        ConjClassPartition { class_of, classes }
    }
}

fn conj<G: FiniteGroup>(g: &G, s: usize, x: usize) -> usize {
    g.mul(g.mul(s, x), g.inv(s))
}

pub fn conjugacy_classes<G: FiniteGroup, R: Rng>(group: &G, cap: usize, rng: &mut R) -> Result<ConjClassPartition> {
    let n = group.order();
    if n > cap {
        return Err(Error::CapExceeded { order: n, cap });
    }
    let mut gens = group.generators();
    loop {
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = conj(group, s, x);
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        // audit: classes must be stable under random full-group conjugation
        let mut escaped = None;
        'audit: for _ in 0..AUDIT_SAMPLES {
            let g = rng.gen_range(0..n);
            for x in 0..n {
                if label[conj(group, g, x)] != label[x] {
                    escaped = Some(g);
                    break 'audit;
                }
            }
        }
        match escaped {
            None => return Ok(ConjClassPartition::from_labels(&label)),
            Some(g) => gens.push(g),
        }
    }
}

/// Complex character table; `rows[χ][k]` is the value on class `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharTable {
    pub rows: Vec<Vec<Complex64>>,
    pub degrees: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub seed: u64,
    pub attempts: usize,
}

impl CharTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The character as a dense function on the group.
    pub fn as_function(
        &self,
        row: usize,
        classes: &ConjClassPartition,
        domain: crate::harmonic::Domain,
    ) -> ClassFunction {
        let values = classes.class_of.iter().map(|&c| self.rows[row][c]).collect();
        ClassFunction::new(domain, values)
    }
}

/// Options for [`character_table`].
#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    pub class_cap: usize,
    pub retries: usize,
    pub seed: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { class_cap: DEFAULT_CLASS_CAP, retries: DEFAULT_RETRIES, seed: 0 }
    }
}

pub fn character_table<G: FiniteGroup>(
    group: &G,
    classes: &ConjClassPartition,
    opts: TableOptions,
) -> Result<CharTable> {
    use rand::SeedableRng;
    let k = classes.len();
    if k > opts.class_cap {
        return Err(Error::CapExceeded { order: k, cap: opts.class_cap });
    }
    let n = group.order();
    let sizes = classes.sizes();
    let reps = classes.representatives();
    let inverse_class: Vec<usize> = reps.iter().map(|&r| classes.class_of[group.inv(r)]).collect();
    // landing[x * k + kk] = class of x^{-1} z_kk
    let mut landing = vec![0u32; n * k];
    for x in 0..n {
        let xi = group.inv(x);
        for (kk, &z) in reps.iter().enumerate() {
            landing[x * k + kk] = classes.class_of[group.mul(xi, z)] as u32;
        }
    }
    let sqrt_sizes: Vec<f64> = sizes.iter().map(|&s| (s as f64).sqrt()).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);

    let mut last_degree = None;
    for attempt in 1..=opts.retries.max(1) {
        let hs: Vec<DMatrix<Complex64>> = (0..REFINING_MATRICES)
            .map(|_| {
                let mut w = vec![Complex64::new(0.0, 0.0); k];
                for i in 0..k {
                    let j = inverse_class[i];
                    if j < i {
                        continue;
                    }
                    let scale = 1.0 / sizes[i] as f64;
                    if j == i {
                        w[i] = Complex64::new(rng.gen_range(-1.0..1.0) * scale, 0.0);
                    } else {
                        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
                        w[i] = z;
                        w[j] = z.conj();
                    }
                }
                let mut h = DMatrix::<Complex64>::zeros(k, k);
                for x in 0..n {
                    let wx = w[classes.class_of[x]];
                    for kk in 0..k {
                        let j = landing[x * k + kk] as usize;
                        h[(kk, j)] += wx * (sqrt_sizes[kk] / sqrt_sizes[j]);
                    }
                }
                h
            })
            .collect();
        let Some(vectors) = hermitian_eigenvectors(&hs) else { continue };
        let mut rows = Vec::with_capacity(k);
        let mut degrees = Vec::with_capacity(k);
        let mut non_integral = None;
        for v in &vectors {
            let v0 = v[0];
            let ratio: Vec<Complex64> = (0..k).map(|kk| (v[kk] / v0).conj() / sqrt_sizes[kk]).collect();
            let norm: f64 = ratio.iter().zip(&sizes).map(|(r, &s)| s as f64 * r.norm_sqr()).sum();
            let deg = (n as f64 / norm).sqrt();
            let rounded = deg.round();
            if (deg - rounded).abs() > 1e-6 || rounded < 1.0 {
                // eigenvectors of a nearly degenerate spectrum; try other weights
                non_integral = Some(deg);
                break;
            }
            degrees.push(rounded as usize);
            rows.push(ratio.into_iter().map(|r| r * rounded).collect::<Vec<_>>());
        }
        if non_integral.is_some() {
            last_degree = non_integral;
            continue;
        }
        let mut order: Vec<usize> = (0..k).collect();
        let key = |r: usize| -> Vec<(i64, i64)> {
            rows[r].iter().map(|v| ((v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64)).collect()
        };
        order.sort_by(|&a, &b| degrees[a].cmp(&degrees[b]).then_with(|| key(a).cmp(&key(b))));
        let table = CharTable {
            rows: order.iter().map(|&r| rows[r].clone()).collect(),
            degrees: order.iter().map(|&r| degrees[r]).collect(),
            class_sizes: sizes.clone(),
            seed: opts.seed,
            attempts: attempt,
        };
        validate(&table, n)?;
        return Ok(table);
    }
    if let Some(deg) = last_degree {
        return Err(Error::ValidationFailed(format!("degree {deg} is not an integer")));
    }
    Err(Error::DegenerateSpectrum(opts.retries))
}

/// Common unit eigenvectors of commuting Hermitian matrices, the first of
/// which must have a simple spectrum.
///
/// The first matrix `H = A + iB` is diagonalised through the real symmetric
/// matrix `[[A, -B], [B, A]]`, whose spectrum is that of `H` doubled. The
/// eigenvectors are then corrected to first order, each pair of directions
/// against whichever matrix separates it best: eigenvector accuracy is
/// limited by `eps |H| / gap`, and independent matrices rarely share a small
/// gap. `None` if the spectrum is nearly degenerate or the residual is poor.
fn hermitian_eigenvectors(hs: &[DMatrix<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let h = &hs[0];
    let k = h.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * k, 2 * k);
    for r in 0..k {
        for c in 0..k {
            let z = h[(r, c)];
            m[(r, c)] = z.re;
            m[(r + k, c + k)] = z.re;
            m[(r, c + k)] = -z.im;
            m[(r + k, c)] = z.im;
        }
    }
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let spread = evals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    // pairs (2t, 2t+1) carry one eigenvalue of H; consecutive pairs must be separated
    if (1..k).any(|t| evals[2 * t] - evals[2 * t - 1] < GAP_THRESHOLD * spread) {
        return None;
    }
    let mut v = DMatrix::<Complex64>::zeros(k, k);
    for t in 0..k {
        let col = eig.eigenvectors.column(order[2 * t]);
        for i in 0..k {
            v[(i, t)] = Complex64::new(col[i], col[i + k]);
        }
    }
    let scales: Vec<f64> = hs.iter().map(|h| h.norm().max(f64::MIN_POSITIVE)).collect();
    // the real solver's eigenvectors are only orthogonal to about 1e-8
    let identity = DMatrix::<Complex64>::identity(k, k);
    for _ in 0..3 {
        normalize_columns(&mut v);
        let e = v.adjoint() * &v - &identity;
        v = &v * (&identity - e * Complex64::new(0.5, 0.0));
        let projected: Vec<DMatrix<Complex64>> = hs.iter().map(|h| v.adjoint() * h * &v).collect();
        let mut x = DMatrix::<Complex64>::zeros(k, k);
        for j in 0..k {
            for i in 0..k {
                if i == j {
                    continue;
                }
                let (best, _) = projected.iter().zip(&scales).enumerate().fold((0, -1.0), |acc, (idx, (a, s))| {
                    let gap = (a[(j, j)] - a[(i, i)]).norm() / s;
                    if gap > acc.1 {
                        (idx, gap)
                    } else {
                        acc
                    }
                });
                let a = &projected[best];
                x[(i, j)] = a[(i, j)] / (a[(j, j)] - a[(i, i)]);
            }
        }
        v += &v * &x;
    }
    normalize_columns(&mut v);
    if (v.adjoint() * &v - &identity).norm() > 1e-10 {
        return None;
    }
    {
        let projected: Vec<DMatrix<Complex64>> = hs.iter().map(|h| v.adjoint() * h * &v).collect();
        let mut worst = (f64::MAX, 0, 0);
        for j in 0..k {
            for i in 0..j {
                let g = projected
                    .iter()
                    .zip(&scales)
                    .map(|(a, s)| (a[(j, j)] - a[(i, i)]).norm() / s)
                    .fold(0.0f64, f64::max);
                if g < worst.0 {
                    worst = (g, i, j);
                }
            }
        }
    }
    let resid = (h * &v - &v * DMatrix::from_diagonal(&(v.adjoint() * h * &v).diagonal())).norm();
    if resid > 1e-12 * spread * k as f64 {
        return None;
    }
    Some((0..k).map(|t| v.column(t).iter().copied().collect()).collect())
}

fn normalize_columns(v: &mut DMatrix<Complex64>) {
    for mut col in v.column_iter_mut() {
        let n = col.norm();
        col /= Complex64::new(n, 0.0);
    }
}

/// Both orthogonality relations and `Σ d^2 = |G|`.
pub fn validate(table: &CharTable, order: usize) -> Result<()> {
    let k = table.class_sizes.len();
    let n = order as f64;
    if table.rows.len() != k {
        return Err(Error::ValidationFailed(format!("{} characters for {k} classes", table.rows.len())));
    }
    for a in 0..k {
        for b in 0..k {
            let s: Complex64 = (0..k)
                .map(|j| table.rows[a][j] * table.rows[b][j].conj() * table.class_sizes[j] as f64)
                .sum::<Complex64>()
                / n;
            let target = if a == b { 1.0 } else { 0.0 };
            if (s - target).norm() > VALIDATION_TOLERANCE {
                return Err(Error::ValidationFailed(format!("row orthogonality ({a}, {b}) = {s}")));
            }
        }
    }
    for g in 0..k {
        for h in 0..k {
            let s: Complex64 = table.rows.iter().map(|r| r[g] * r[h].conj()).sum();
            let scaled = s * ((table.class_sizes[g] * table.class_sizes[h]) as f64).sqrt() / n;
            let target = if g == h { 1.0 } else { 0.0 };
            if (scaled - target).norm() > VALIDATION_TOLERANCE {
                return Err(Error::ValidationFailed(format!("column orthogonality ({g}, {h}) = {s}")));
            }
        }
    }
    let sum: usize = table.degrees.iter().map(|d| d * d).sum();
    if sum != order {
        return Err(Error::ValidationFailed(format!("sum of squared degrees {sum} != {order}")));
    }
    if let Some(d) = table.degrees.iter().find(|&&d| order % d != 0) {
        return Err(Error::ValidationFailed(format!("degree {d} does not divide {order}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    /// `assignment[i]` is the table row matched to candidate `i`.
    pub assignment: Vec<usize>,
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
}

/// Perfect matching between candidate characters (values on class
/// representatives) and table rows with entrywise deviation below `tol`.
pub fn match_tables(candidates: &[Vec<Complex64>], table: &CharTable, tol: f64) -> Result<MatchReport> {
    let n = candidates.len();
    let m = table.rows.len();
    let dev = |i: usize, j: usize| -> f64 {
        candidates[i].iter().zip(&table.rows[j]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    };
    let mut adj: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<(usize, f64)> = (0..m)
            .map(|j| (j, dev(i, j)))
            .filter(|&(_, d)| candidates[i].len() == table.rows[0].len() && d < tol)
            .collect();
        row.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        adj.push(row);
    }
    let mut owner: Vec<Option<usize>> = vec![None; m];
    fn augment(i: usize, adj: &[Vec<(usize, f64)>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &(j, _) in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none() || augment(owner[j].unwrap(), adj, seen, owner) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut matched = 0;
    for i in 0..n {
        let mut seen = vec![false; m];
        if augment(i, &adj, &mut seen, &mut owner) {
            matched += 1;
        }
    }
    let mut partial = vec![None; n];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            partial[*i] = Some(j);
        }
    }
    if matched != n || n != m {
        return Err(Error::NoMatching { matched, total: n.max(m), partial });
    }
    let assignment: Vec<usize> = partial.into_iter().map(Option::unwrap).collect();
    let deviations: Vec<f64> = assignment.iter().enumerate().map(|(i, &j)| dev(i, j)).collect();
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(MatchReport { assignment, deviations, max_deviation })
}

/// `<χ_G|_K, χ_K>` over `K = exp k`; `chi_k` is indexed by the subring's element order.
pub fn restriction_multiplicity(sub: &Subring, chi_g: &ClassFunction, chi_k: &[Complex64]) -> Result<Complex64> {
    if chi_k.len() != sub.order() {
        return Err(Error::DomainMismatch(format!("{} values for a subgroup of order {}", chi_k.len(), sub.order())));
    }
    let s: Complex64 = sub.elements().iter().zip(chi_k).map(|(&a, b)| chi_g.values[a] * b.conj()).sum();
    Ok(s / sub.order() as f64)
}

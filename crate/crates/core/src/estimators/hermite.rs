//! Hermite expansions, coefficient estimators and the Parseval lower bound.

use crate::bodies::Body;
use crate::error::{check_dim, Error, Result};
use crate::estimate::{Estimate, Moments};
use crate::hermite::{enumerate_multi_indices, hermite_table, multi_index_count, MultiIndex};
use crate::mc::{map_chunks, mean_of, means_of};
use crate::rng::RandomStream;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

/// Largest total degree accepted by [`estimate_hermite_coeff`].
pub const MAX_COEFF_DEGREE: u32 = 8;
/// Largest number of coefficients [`low_degree_projection`] will estimate.
pub const PROJECTION_BUDGET: u128 = 100_000;

/// `sum_alpha c_alpha h_alpha`, stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteExpansion {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl Serialize for HermiteExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            alpha: &'a [u32],
            coeff: f64,
        }
        let terms: Vec<Term> = self
            .coeffs
            .iter()
            .map(|(a, &c)| Term { alpha: &a.0, coeff: c })
            .collect();
        let mut st = s.serialize_struct("HermiteExpansion", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl HermiteExpansion {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(HermiteExpansion {
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets the coefficient on `alpha` (zero removes it).
    pub fn set(&mut self, alpha: MultiIndex, c: f64) -> Result<()> {
        check_dim(self.dim, alpha.dim())?;
        if c == 0.0 {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, c);
        }
        Ok(())
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        self.coeffs.get(alpha).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(a, &c)| (a, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// `sum_alpha c_alpha h_alpha(x)`; `x.len()` must equal `dim`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let d = self.max_degree() as usize + 1;
        let mut table = vec![0.0; self.dim * d];
        for (row, &xi) in table.chunks_exact_mut(d).zip(x) {
            hermite_table(xi, row);
        }
        self.eval_with_table(&table, d)
    }

    fn eval_with_table(&self, table: &[f64], stride: usize) -> f64 {
        self.coeffs
            .iter()
            .map(|(a, &c)| {
                c * a
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| table[i * stride + k as usize])
                    .product::<f64>()
            })
            .sum()
    }

    /// Coefficient on the zero multi-index.
    pub fn mean(&self) -> f64 {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// `sum_{alpha != 0} c_alpha^2`.
    pub fn variance(&self) -> f64 {
        self.terms().filter(|(a, _)| !a.is_zero()).map(|(_, c)| c * c).sum()
    }

    /// `U_rho`: scales `c_alpha` by `rho^{|alpha|}`.
    pub fn noise_operator(&self, rho: f64) -> HermiteExpansion {
        HermiteExpansion {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, &c)| (a.clone(), c * rho.powi(a.degree() as i32)))
                .collect(),
        }
    }

    /// `sum_{alpha != 0} R^{2|alpha|} c_alpha^2` for `R >= 1`.
    pub fn hypervariance(&self, r: f64) -> Result<f64> {
        if !(r >= 1.0) {
            return Err(Error::param(format!("hypervariance needs R >= 1, got {r}")));
        }
        Ok(self.noise_operator(r).variance())
    }

    /// `sum_alpha rho^{|alpha|} c_alpha^2`.
    pub fn stability_from_coeffs(&self, rho: f64) -> f64 {
        self.terms().map(|(a, c)| rho.powi(a.degree() as i32) * c * c).sum()
    }
}

/// `K~(alpha) = E[K(x) h_alpha(x)]`.
pub fn estimate_hermite_coeff<B: Body + ?Sized>(
    body: &B,
    alpha: &MultiIndex,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    check_dim(body.dim(), alpha.dim())?;
    if alpha.degree() > MAX_COEFF_DEGREE {
        return Err(Error::Budget {
            what: "Hermite degree",
            requested: alpha.degree() as u128,
            cap: MAX_COEFF_DEGREE as u128,
        });
    }
    Ok(mean_of(body.dim(), n_samples, stream, |x| {
        if body.contains(x) {
            alpha.eval(x)
        } else {
            0.0
        }
    }))
}

/// `K~(2 e_i)` for every coordinate, on shared probes.
pub fn diagonal_level2_coeffs<B: Body + ?Sized>(
    body: &B,
    n_samples: u64,
    stream: &RandomStream,
) -> Vec<(usize, Estimate)> {
    let n = body.dim();
    means_of(n, n, n_samples, stream, |x, out| {
        if body.contains(x) {
            for (o, &t) in out.iter_mut().zip(x) {
                *o = (t * t - 1.0) / SQRT_2;
            }
        } else {
            out.fill(0.0);
        }
    })
    .iter()
    .map(Estimate::from_moments)
    .enumerate()
    .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    pub degree: u32,
    pub expansion: HermiteExpansion,
    pub estimates: Vec<(MultiIndex, Estimate)>,
}

/// Estimates every coefficient of total degree at most `d` on shared probes.
pub fn low_degree_projection<B: Body + ?Sized>(
    body: &B,
    d: u32,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Projection> {
    let n = body.dim();
    let count = multi_index_count(n, d);
    if count > PROJECTION_BUDGET {
        return Err(Error::Budget {
            what: "multi-index count",
            requested: count,
            cap: PROJECTION_BUDGET,
        });
    }
    let indices = enumerate_multi_indices(n, d)?;
    let stride = d as usize + 1;
    let ms: Vec<Moments> = means_of(n, indices.len(), n_samples, stream, |x, out| {
        if !body.contains(x) {
            out.fill(0.0);
            return;
        }
        let mut table = vec![0.0; n * stride];
        for (row, &xi) in table.chunks_exact_mut(stride).zip(x) {
            hermite_table(xi, row);
        }
        for (o, a) in out.iter_mut().zip(&indices) {
            *o = a
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| table[i * stride + k as usize])
                .product();
        }
    });
    let mut expansion = HermiteExpansion::new(n)?;
    let mut estimates = Vec::with_capacity(indices.len());
    for (a, m) in indices.into_iter().zip(&ms) {
        let e = Estimate::from_moments(m);
        expansion.set(a.clone(), e.value)?;
        estimates.push((a, e));
    }
    Ok(Projection {
        degree: d,
        expansion,
        estimates,
    })
}

/// `E[(g(x) - K(x))^2]`.
pub fn l2_error<B: Body + ?Sized>(
    expansion: &HermiteExpansion,
    body: &B,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    check_dim(body.dim(), expansion.dim())?;
    Ok(mean_of(body.dim(), n_samples, stream, |x| {
        let r = expansion.eval(x) - body.contains(x) as i32 as f64;
        r * r
    }))
}

/// Monte Carlo `E[p(z) p(z')]` for `rho`-correlated standard normal pairs.
pub fn estimate_two_point(
    expansion: &HermiteExpansion,
    rho: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::param(format!("correlation must lie in [-1, 1], got {rho}")));
    }
    let dim = expansion.dim();
    let c = (1.0 - rho * rho).sqrt();
    let parts = map_chunks(n_samples, stream, |mut s, len| {
        let (mut z, mut g) = (vec![0.0; dim], vec![0.0; dim]);
        let mut m = Moments::new();
        for _ in 0..len {
            s.fill_normals(&mut z);
            s.fill_normals(&mut g);
            for (gi, zi) in g.iter_mut().zip(&z) {
                *gi = rho * zi + c * *gi;
            }
            m.push(expansion.eval(&z) * expansion.eval(&g));
        }
        m
    });
    let mut total = Moments::new();
    parts.iter().for_each(|p| total.merge(p));
    Ok(Estimate::from_moments(&total))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParsevalBound {
    /// `sum_i (K~(2e_i) - L~(2e_i))^2`.
    pub value: f64,
    /// Same sum with each `|difference|` reduced by three combined standard errors, floored at zero.
    pub conservative: f64,
}

/// Lower bound on `dist(K, L)` from level-two diagonal coefficients.
pub fn parseval_distance_lb(k: &[(usize, Estimate)], l: &[(usize, Estimate)]) -> Result<ParsevalBound> {
    let ki: Vec<usize> = k.iter().map(|p| p.0).collect();
    let li: Vec<usize> = l.iter().map(|p| p.0).collect();
    if ki != li {
        return Err(Error::param("coefficient lists have different index sets"));
    }
    let (mut value, mut conservative) = (0.0, 0.0);
    for ((_, a), (_, b)) in k.iter().zip(l) {
        let d = (a.value - b.value).abs();
        value += d * d;
        let shrunk = (d - 3.0 * a.stderr.hypot(b.stderr)).max(0.0);
        conservative += shrunk * shrunk;
    }
    Ok(ParsevalBound { value, conservative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{symmetric_slab, Halfspace, LpBall, WholeSpace};
    use crate::estimators::{estimate_directional_influence, estimate_distance, estimate_volume};

    fn random_expansion(n: usize, d: u32, seed: u64) -> HermiteExpansion {
        let mut s = RandomStream::new(seed, 0);
        let mut e = HermiteExpansion::new(n).unwrap();
        for a in enumerate_multi_indices(n, d).unwrap() {
            e.set(a, s.normal() * 0.5).unwrap();
        }
        e
    }

    #[test]
    fn operator_identities() {
        let e = random_expansion(4, 2, 1);
        assert_eq!(e.noise_operator(1.0), e);
        assert!((e.hypervariance(1.0).unwrap() - e.variance()).abs() < 1e-15);
        assert!(e.hypervariance(0.5).is_err());
        let direct: f64 = e.terms().map(|(a, c)| 0.4f64.powi(a.degree() as i32) * c * c).sum();
        assert_eq!(e.stability_from_coeffs(0.4), direct);
        // U_a U_b = U_{ab}, including rho > 1.
        let ab = e.noise_operator(1.5).noise_operator(0.3);
        let direct = e.noise_operator(0.45);
        for (a, c) in direct.terms() {
            assert!((ab.coeff(a) - c).abs() < 1e-14);
        }
    }

    #[test]
    fn stability_matches_two_point_function() {
        let e = random_expansion(4, 2, 2);
        let mc = estimate_two_point(&e, 0.4, 1_000_000, &RandomStream::new(3, 0)).unwrap();
        assert!(mc.within(e.stability_from_coeffs(0.4), 3.0), "{mc:?}");
    }

    #[test]
    fn zero_coefficient_is_volume() {
        let b = LpBall::euclidean(3, 1.7).unwrap();
        let s = RandomStream::new(4, 0);
        let c = estimate_hermite_coeff(&b, &MultiIndex::zero(3), 100_000, &s).unwrap();
        // Same probes, so only running-mean rounding separates the two.
        assert!((c.value - estimate_volume(&b, 100_000, &s).value).abs() < 1e-12);
        assert!(estimate_hermite_coeff(&b, &MultiIndex::axis(3, 0, 9), 10, &s).is_err());
    }

    #[test]
    fn halfspace_linear_coefficient() {
        let h = Halfspace::new(vec![1.0, 0.0, 0.0], 0.0).unwrap();
        let s = RandomStream::new(5, 0);
        let c = estimate_hermite_coeff(&h, &MultiIndex::axis(3, 0, 1), 1_000_000, &s).unwrap();
        assert!(c.within(-0.398_942_280_401_432_7, 3.0));
        let p = low_degree_projection(&h, 1, 1_000_000, &s).unwrap();
        for (a, e) in &p.estimates {
            let want = if *a == MultiIndex::axis(3, 0, 1) {
                -0.398_942_280_401_432_7
            } else if a.is_zero() {
                0.5
            } else {
                0.0
            };
            assert!(e.within(want, 3.0), "{a:?}: {e:?}");
        }
    }

    #[test]
    fn influence_link_on_ball() {
        let b = LpBall::euclidean(8, 8f64.sqrt()).unwrap();
        let s = RandomStream::new(6, 0);
        let mut e1 = vec![0.0; 8];
        e1[0] = 1.0;
        let inf = estimate_directional_influence(&b, &e1, 1_000_000, &s.substream(0)).unwrap();
        let c = estimate_hermite_coeff(&b, &MultiIndex::axis(8, 0, 2), 1_000_000, &s.substream(1)).unwrap();
        assert!(inf.agrees_with(&c.scaled(-SQRT_2), 3.0, 0.0));
    }

    #[test]
    fn projection_error_behaviour() {
        let slab = symmetric_slab(&[1.0, 0.0, 0.0], 0.8).unwrap();
        let s = RandomStream::new(7, 0);
        let v = estimate_volume(&slab, 200_000, &s).value;
        let mut errs = Vec::new();
        for d in 0..=2 {
            let p = low_degree_projection(&slab, d, 200_000, &s).unwrap();
            errs.push(l2_error(&p.expansion, &slab, 200_000, &s).unwrap());
        }
        assert!(errs[0].within(v * (1.0 - v), 3.0), "{:?}", errs[0]);
        assert!(errs[1].value <= errs[0].value && errs[2].value <= errs[1].value, "{errs:?}");
        assert!(low_degree_projection(&LpBall::euclidean(60, 1.0).unwrap(), 4, 10, &s).is_err());
    }

    #[test]
    fn parseval_bound_cases() {
        let mk = |vals: &[f64]| -> Vec<(usize, Estimate)> {
            vals.iter().enumerate().map(|(i, &v)| (i, Estimate::exact(v))).collect()
        };
        let a = mk(&[0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parseval_distance_lb(&a, &a).unwrap().value, 0.0);
        let b = mk(&[0.2, 0.3, 0.4, 0.5, 0.5]);
        assert!((parseval_distance_lb(&a, &b).unwrap().value - 0.04).abs() < 1e-15);
        assert!(parseval_distance_lb(&a, &b[..4]).is_err());

        let n = 8;
        let ball = LpBall::euclidean(n, (n as f64).sqrt()).unwrap();
        let all = WholeSpace { dim: n };
        let s = RandomStream::new(8, 0);
        let kb = diagonal_level2_coeffs(&ball, 400_000, &s);
        let kl = diagonal_level2_coeffs(&all, 400_000, &s.substream(1));
        let lb = parseval_distance_lb(&kb, &kl).unwrap();
        let d = estimate_distance(&ball, &all, 400_000, &s.substream(2)).unwrap();
        assert!(lb.value <= d.value + 3.0 * d.stderr);
        assert!(lb.conservative <= lb.value);
    }

    #[test]
    fn parseval_never_exceeds_exact_slab_distance() {
        use crate::special::{phi_cdf, phi_pdf};
        // Slabs |x_1| <= a and |x_1| <= b: exact coefficients on 2e_1 are
        // E[1{|x|<=t}(x^2-1)/sqrt 2] = -sqrt(2) t phi(t), distance 2(Phi(b)-Phi(a)).
        for (a, b) in [(0.5, 1.0), (0.2, 2.0), (1.0, 1.1), (0.1, 0.3)] {
            let ca = -SQRT_2 * a * phi_pdf(a);
            let cb = -SQRT_2 * b * phi_pdf(b);
            let lb = parseval_distance_lb(&[(0, Estimate::exact(ca))], &[(0, Estimate::exact(cb))]).unwrap();
            let exact = 2.0 * (phi_cdf(b) - phi_cdf(a));
            assert!(lb.value <= exact, "a={a} b={b}");
        }
    }
}

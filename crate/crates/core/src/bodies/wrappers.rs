use super::{with_scratch, Body};
use crate::error::{check_dim, Error, Result};
use std::sync::Arc;

/// `scale * K`: `x` is inside iff `x / scale` is inside `K`.
#[derive(Clone, Debug)]
pub struct Dilated<B> {
    inner: B,
    scale: f64,
}

pub fn dilate<B: Body>(body: B, scale: f64) -> Result<Dilated<B>> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::param(format!("dilation scale must be positive, got {scale}")));
    }
    Ok(Dilated { inner: body, scale })
}

impl<B: Body> Dilated<B> {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }
}

impl<B: Body> Body for Dilated<B> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn contains(&self, x: &[f64]) -> bool {
        if self.scale == 1.0 {
            return self.inner.contains(x);
        }
        with_scratch(x.len(), |y| {
            let inv = 1.0 / self.scale;
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi = xi * inv;
            }
            self.inner.contains(y)
        })
    }

    fn support(&self, v: &[f64]) -> Option<f64> {
        self.inner.support(v).map(|s| s * self.scale)
    }

    fn has_support(&self) -> bool {
        self.inner.has_support()
    }
}

/// The zoom `y -> K(sqrt(1 - lambda) * anchor + sqrt(lambda) * y)`.
#[derive(Clone, Debug)]
pub struct Zoomed<B> {
    inner: B,
    lambda: f64,
    offset: Vec<f64>,
    spread: f64,
}

pub fn zoom_body<B: Body>(body: B, lambda: f64, anchor: &[f64]) -> Result<Zoomed<B>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("zoom lambda must lie in [0, 1], got {lambda}")));
    }
    check_dim(body.dim(), anchor.len())?;
    let a = (1.0 - lambda).sqrt();
    Ok(Zoomed {
        offset: anchor.iter().map(|x| a * x).collect(),
        spread: lambda.sqrt(),
        inner: body,
        lambda,
    })
}

impl<B: Body> Zoomed<B> {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl<B: Body> Body for Zoomed<B> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn contains(&self, y: &[f64]) -> bool {
        with_scratch(y.len(), |z| {
            for ((zi, oi), yi) in z.iter_mut().zip(&self.offset).zip(y) {
                *zi = oi + self.spread * yi;
            }
            self.inner.contains(z)
        })
    }
}

/// Conjunction of several bodies.
#[derive(Clone)]
pub struct Intersection {
    dim: usize,
    parts: Vec<Arc<dyn Body>>,
}

pub fn intersect(parts: Vec<Arc<dyn Body>>) -> Result<Intersection> {
    let dim = parts
        .first()
        .map(|b| b.dim())
        .ok_or_else(|| Error::param("cannot intersect an empty list"))?;
    for b in &parts {
        check_dim(dim, b.dim())?;
    }
    Ok(Intersection { dim, parts })
}

impl Intersection {
    pub fn parts(&self) -> &[Arc<dyn Body>] {
        &self.parts
    }
}

impl Body for Intersection {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.parts.iter().all(|b| b.contains(x))
    }

    fn support(&self, v: &[f64]) -> Option<f64> {
        // The minimum of the parts' supports is an upper bound, exact for one part.
        if self.parts.len() == 1 {
            self.parts[0].support(v)
        } else {
            None
        }
    }

    fn has_support(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].has_support()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{symmetric_slab, LpBall};
    use crate::rng::RandomStream;

    #[test]
    fn dilation_definition() {
        let n = 6;
        let b = LpBall::euclidean(n, (n as f64).sqrt()).unwrap();
        let d1 = dilate(&b, 1.0).unwrap();
        let d2 = dilate(&b, 2.0).unwrap();
        assert!(dilate(&b, 0.0).is_err());
        let mut s = RandomStream::new(0, 0);
        let mut x = vec![0.0; n];
        for _ in 0..10_000 {
            s.fill_normals(&mut x);
            x.iter_mut().for_each(|v| *v *= 1.7);
            assert_eq!(d1.contains(&x), b.contains(&x));
            let r2: f64 = x.iter().map(|v| v * v).sum();
            assert_eq!(d2.contains(&x), r2.sqrt() <= 2.0 * (n as f64).sqrt());
        }
        assert!((d2.support(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap() - 2.0 * 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zoom_extremes() {
        let b = LpBall::euclidean(3, 1.5).unwrap();
        let anchor = [1.0, 0.2, -0.4];
        let z1 = zoom_body(&b, 1.0, &anchor).unwrap();
        let z0 = zoom_body(&b, 0.0, &anchor).unwrap();
        assert!(zoom_body(&b, 1.1, &anchor).is_err());
        assert!(zoom_body(&b, 0.5, &anchor[..2]).is_err());
        let mut s = RandomStream::new(1, 0);
        let mut y = [0.0; 3];
        for _ in 0..1000 {
            s.fill_normals(&mut y);
            assert_eq!(z1.contains(&y), b.contains(&y));
            assert_eq!(z0.contains(&y), b.contains(&anchor));
        }
    }

    #[test]
    fn single_intersection_is_identity() {
        let slab: Arc<dyn Body> = Arc::new(symmetric_slab(&[1.0, 0.0], 0.7).unwrap());
        let k = intersect(vec![slab.clone()]).unwrap();
        let mut s = RandomStream::new(2, 0);
        let mut x = [0.0; 2];
        for _ in 0..1000 {
            s.fill_normals(&mut x);
            assert_eq!(k.contains(&x), slab.contains(&x));
        }
        let other: Arc<dyn Body> = Arc::new(LpBall::euclidean(3, 1.0).unwrap());
        assert!(intersect(vec![slab, other]).is_err());
    }
}

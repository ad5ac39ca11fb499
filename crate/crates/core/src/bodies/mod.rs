//! Convex bodies behind a uniform membership oracle.

mod io;
mod junta;
mod lp;
mod polytope;
mod wrappers;

pub use io::{load_polytope, polytope_from_json, polytope_to_json, save_polytope, PolytopeFile};
pub use junta::{l1_junta_to_polytope, FacetCount, JuntaIntersection, JuntaTerm, MATERIALIZATION_CAP};
pub use lp::{LpBall, WholeSpace};
pub use polytope::{intersect_polytopes, symmetric_slab, Halfspace, Polytope};
pub use wrappers::{dilate, intersect, zoom_body, Dilated, Intersection, Zoomed};

use crate::error::{check_dim, Result};
use std::cell::RefCell;
use std::sync::Arc;

/// Membership oracle for a body in `R^dim`, optionally with a support functional.
pub trait Body: Send + Sync {
    fn dim(&self) -> usize;

    /// Membership test; `x.len()` is assumed to equal `dim()`.
    fn contains(&self, x: &[f64]) -> bool;

    /// `sup_{x in K} <x, v>` for unit `v`, when available.
    fn support(&self, _v: &[f64]) -> Option<f64> {
        None
    }

    fn has_support(&self) -> bool {
        false
    }
}

/// Checked membership.
pub fn membership(body: &dyn Body, x: &[f64]) -> Result<bool> {
    check_dim(body.dim(), x.len())?;
    Ok(body.contains(x))
}

macro_rules! forward_body {
    ($($t:ty),*) => {$(
        impl<B: Body + ?Sized> Body for $t {
            fn dim(&self) -> usize { (**self).dim() }
            fn contains(&self, x: &[f64]) -> bool { (**self).contains(x) }
            fn support(&self, v: &[f64]) -> Option<f64> { (**self).support(v) }
            fn has_support(&self) -> bool { (**self).has_support() }
        }
    )*};
}
forward_body!(&B, Box<B>, Arc<B>);

thread_local! {
    static SCRATCH: RefCell<Vec<Vec<f64>>> = const { RefCell::new(Vec::new()) };
}

/// Runs `f` with a temporary buffer of length `n`; safe to nest.
pub(crate) fn with_scratch<R>(n: usize, f: impl FnOnce(&mut [f64]) -> R) -> R {
    let mut buf = SCRATCH
        .with(|s| s.borrow_mut().pop())
        .unwrap_or_default();
    buf.clear();
    buf.resize(n, 0.0);
    let r = f(&mut buf);
    SCRATCH.with(|s| s.borrow_mut().push(buf));
    r
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

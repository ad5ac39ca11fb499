//! Direction sets on the unit sphere.

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionMode {
    /// Greedy covering net (dimensions 1 to 3).
    DeterministicNet,
    /// Independent uniform directions, no covering guarantee.
    RandomDirections,
}

/// A fine grid whose every unit vector lies within `radius` of some point.
pub(crate) fn candidate_grid(n: usize, radius: f64, cap: usize) -> Result<Vec<Vec<f64>>> {
    let too_many = |count: usize| Error::Budget {
        what: "candidate direction count",
        requested: count as u128,
        cap: cap as u128,
    };
    match n {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => {
            let count = (PI / radius).ceil();
            if !(count <= cap as f64) {
                return Err(too_many(count.min(u64::MAX as f64) as usize));
            }
            let count = count as usize;
            Ok((0..count)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / count as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect())
        }
        3 => {
            // Grid on each cube face, projected radially; the angular covering
            // radius is at most the half-diagonal of a face cell.
            let k = (2f64.sqrt() / radius).ceil();
            if !(6.0 * k * k <= cap as f64) {
                return Err(too_many((6.0 * k * k).min(u64::MAX as f64) as usize));
            }
            let k = k as usize;
            let mut out = Vec::with_capacity(6 * k * k);
            for axis in 0..3 {
                for sign in [1.0, -1.0] {
                    for i in 0..k {
                        for j in 0..k {
                            let u = -1.0 + (2 * i + 1) as f64 / k as f64;
                            let v = -1.0 + (2 * j + 1) as f64 / k as f64;
                            let mut p = [0.0; 3];
                            p[axis] = sign;
                            p[(axis + 1) % 3] = u;
                            p[(axis + 2) % 3] = v;
                            let len = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                            out.push(p.iter().map(|c| c / len).collect());
                        }
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!(
            "deterministic nets are limited to dimension 3, got {n}"
        ))),
    }
}

/// Greedy farthest-point selection among `members` (indices into `points`)
/// until every member is within `radius` of a selected point.
pub(crate) fn greedy_cover(points: &[Vec<f64>], members: &[usize], radius: f64) -> Vec<usize> {
    if members.is_empty() {
        return Vec::new();
    }
    let cos_r = radius.min(PI).cos();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut best = vec![f64::NEG_INFINITY; members.len()];
    let mut chosen = Vec::new();
    let mut next = 0usize;
    loop {
        let c = members[next];
        chosen.push(c);
        for (b, &m) in best.iter_mut().zip(members) {
            *b = b.max(dot(&points[c], &points[m]));
        }
        let (far, &far_dot) = best
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        if far_dot >= cos_r {
            return chosen;
        }
        next = far;
    }
}

fn random_directions(n: usize, count: usize, stream: &mut RandomStream) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let mut v = vec![0.0; n];
            loop {
                stream.fill_normals(&mut v);
                let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if len > 0.0 {
                    v.iter_mut().for_each(|x| *x /= len);
                    return v;
                }
            }
        })
        .collect()
}

/// Unit directions: a greedy net with covering angle at most `angle`
/// (deterministic mode, `n <= 3`, candidate grid capped by `budget`) or `budget`
/// random directions.
pub fn sphere_net(
    n: usize,
    angle: f64,
    mode: DirectionMode,
    budget: usize,
    stream: &mut RandomStream,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(angle > 0.0 && angle < PI / 2.0) {
        return Err(Error::param(format!("net angle must lie in (0, pi/2), got {angle}")));
    }
    match mode {
        DirectionMode::RandomDirections => {
            if budget == 0 {
                return Err(Error::param("random directions need a positive budget"));
            }
            Ok(random_directions(n, budget, stream))
        }
        DirectionMode::DeterministicNet => {
            let fine = angle / 8.0;
            let cands = candidate_grid(n, fine, budget)?;
            let all: Vec<usize> = (0..cands.len()).collect();
            Ok(greedy_cover(&cands, &all, angle - fine)
                .into_iter()
                .map(|i| cands[i].clone())
                .collect())
        }
    }
}

pub(crate) fn directions_for(
    n: usize,
    mode: DirectionMode,
    fine: f64,
    budget: usize,
    stream: &mut RandomStream,
) -> Result<Vec<Vec<f64>>> {
    match mode {
        DirectionMode::DeterministicNet => candidate_grid(n, fine, budget),
        DirectionMode::RandomDirections => Ok(random_directions(n, budget, stream)),
    }
}

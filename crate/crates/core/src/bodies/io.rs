use super::{Halfspace, Polytope};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk polytope: `{"dim": n, "halfspaces": [{"v": [...], "theta": t}, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub halfspaces: Vec<HalfspaceRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceRecord {
    pub v: Vec<f64>,
    pub theta: f64,
}

impl PolytopeFile {
    pub fn from_polytope(p: &Polytope) -> Self {
        PolytopeFile {
            dim: super::Body::dim(p),
            halfspaces: p
                .halfspaces()
                .map(|h| HalfspaceRecord {
                    v: h.normal().to_vec(),
                    theta: h.threshold(),
                })
                .collect(),
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        Polytope::from_halfspaces(
            self.dim,
            self.halfspaces
                .iter()
                .map(|h| Halfspace::new(h.v.clone(), h.theta))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    let file: PolytopeFile =
        serde_json::from_str(text).map_err(|e| Error::param(format!("polytope file: {e}")))?;
    file.to_polytope()
}

pub fn polytope_to_json(p: &Polytope) -> String {
    serde_json::to_string(&PolytopeFile::from_polytope(p)).expect("polytope serializes")
}

pub fn load_polytope(path: &Path) -> Result<Polytope> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::param(format!("reading {}: {e}", path.display())))?;
    polytope_from_json(&text)
}

pub fn save_polytope(p: &Polytope, path: &Path) -> Result<()> {
    std::fs::write(path, polytope_to_json(p))
        .map_err(|e| Error::param(format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;
    use crate::rng::RandomStream;

    #[test]
    fn round_trip_is_exact() {
        let mut s = RandomStream::new(3, 0);
        let mut p = Polytope::new(5).unwrap();
        for _ in 0..20 {
            let mut v = vec![0.0; 5];
            s.fill_normals(&mut v);
            p.push(Halfspace::new(v, s.uniform() * 3.0).unwrap()).unwrap();
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        save_polytope(&p, &path).unwrap();
        let q = load_polytope(&path).unwrap();
        assert_eq!(p, q);
        assert_eq!(polytope_to_json(&q), std::fs::read_to_string(&path).unwrap());
    }

    #[test]
    fn unnormalized_input_is_normalized() {
        let p = polytope_from_json(r#"{"dim":2,"halfspaces":[{"v":[3,4],"theta":10}]}"#).unwrap();
        assert_eq!(p.normal(0), &[0.6, 0.8]);
        assert_eq!(p.threshold(0), 2.0);
        assert!(p.contains(&[0.0, 0.0]));
        assert!(polytope_from_json(r#"{"dim":2,"halfspaces":[{"v":[1],"theta":1}]}"#).is_err());
        assert!(polytope_from_json(r#"{"dim":2,"extra":1,"halfspaces":[]}"#).is_err());
    }
}

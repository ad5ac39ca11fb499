//! Body specifications: `kind:key=value,key=value`.
//!
//! Vector values separate components with `;`, e.g. `halfspace:n=3,v=1;0;0,t=0.5`.
//! `r=auto` (l2ball) means `sqrt(n)`; `budget=auto` (lpball) means `n A_p`.

use gaussapprox::bodies::{load_polytope, symmetric_slab, Body, Halfspace, LpBall, Polytope};
use gaussapprox::constructors::{sample_junta_intersection, sample_nazarov};
use gaussapprox::RandomStream;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    /// Byte offset into the spec text.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "body spec error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SpecError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ty {
    Count,
    Real,
    RealOrAuto,
    Vector,
    FilePath,
}

struct KeyDef {
    name: &'static str,
    ty: Ty,
    required: bool,
}

const fn req(name: &'static str, ty: Ty) -> KeyDef {
    KeyDef { name, ty, required: true }
}

const fn opt(name: &'static str, ty: Ty) -> KeyDef {
    KeyDef { name, ty, required: false }
}

use Ty::*;
const L2BALL: &[KeyDef] = &[req("n", Count), opt("r", RealOrAuto)];
const LPBALL: &[KeyDef] = &[req("n", Count), req("p", Real), opt("budget", RealOrAuto)];
const HALFSPACE: &[KeyDef] = &[req("n", Count), opt("v", Vector), opt("axis", Count), opt("t", Real)];
const SLAB: &[KeyDef] = &[req("n", Count), opt("v", Vector), opt("axis", Count), req("theta", Real)];
const POLYTOPE_FILE: &[KeyDef] = &[req("path", FilePath)];
const NAZAROV: &[KeyDef] = &[req("n", Count), req("w", Real), req("s", Count), req("seed", Count)];
const JUNTA: &[KeyDef] = &[
    req("n", Count),
    req("p", Real),
    req("m", Count),
    req("count", Count),
    req("theta", Real),
    req("seed", Count),
];

fn schema(kind: &str) -> Option<&'static [KeyDef]> {
    Some(match kind {
        "l2ball" => L2BALL,
        "lpball" => LPBALL,
        "halfspace" => HALFSPACE,
        "slab" => SLAB,
        "polytope_file" => POLYTOPE_FILE,
        "nazarov" => NAZAROV,
        "junta" => JUNTA,
        _ => return None,
    })
}

pub const KINDS: [&str; 7] = ["l2ball", "lpball", "halfspace", "slab", "polytope_file", "nazarov", "junta"];

/// Parsed, validated spec; values are kept as written so rendering is lossless.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodySpec {
    pub kind: String,
    pub params: BTreeMap<String, String>,
}

fn check_value(ty: Ty, v: &str) -> Result<(), String> {
    let real = |s: &str| s.parse::<f64>().map_err(|_| format!("malformed number '{s}'"));
    match ty {
        Ty::Count => v.parse::<u64>().map(|_| ()).map_err(|_| format!("malformed integer '{v}'")),
        Ty::Real => real(v).map(|_| ()),
        Ty::RealOrAuto if v == "auto" => Ok(()),
        Ty::RealOrAuto => real(v).map(|_| ()),
        Ty::Vector => v.split(';').try_for_each(|c| real(c).map(|_| ())),
        Ty::FilePath if v.is_empty() => Err("empty path".into()),
        Ty::FilePath => Ok(()),
    }
}

impl BodySpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let err = |position, message: String| SpecError { position, message };
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| err(text.len(), "expected ':' after the body kind".into()))?;
        let keys = schema(kind).ok_or_else(|| err(0, format!("unknown body kind '{kind}' (known: {})", KINDS.join(", "))))?;
        let mut params = BTreeMap::new();
        let mut pos = kind.len() + 1;
        for item in rest.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| err(pos, format!("expected key=value, found '{item}'")))?;
            let def = keys
                .iter()
                .find(|d| d.name == k)
                .ok_or_else(|| err(pos, format!("unknown key '{k}' for {kind}")))?;
            check_value(def.ty, v).map_err(|m| err(pos + k.len() + 1, m))?;
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(err(pos, format!("duplicate key '{k}'")));
            }
            pos += item.len() + 1;
        }
        if let Some(d) = keys.iter().find(|d| d.required && !params.contains_key(d.name)) {
            return Err(err(text.len(), format!("missing required key '{}' for {kind}", d.name)));
        }
        if matches!(kind, "halfspace" | "slab") && params.contains_key("v") == params.contains_key("axis") {
            return Err(err(text.len(), format!("{kind} needs exactly one of 'v' or 'axis'")));
        }
        Ok(BodySpec { kind: kind.to_string(), params })
    }

    /// Canonical text: keys in lexicographic order.
    pub fn render(&self) -> String {
        let body: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}:{}", self.kind, body.join(","))
    }

    fn get(&self, k: &str) -> Option<&str> {
        self.params.get(k).map(String::as_str)
    }

    // Values were validated by `parse`.
    fn count(&self, k: &str) -> usize {
        self.get(k).unwrap().parse().unwrap()
    }

    fn real(&self, k: &str) -> f64 {
        self.get(k).unwrap().parse().unwrap()
    }

    fn direction(&self) -> gaussapprox::Result<Vec<f64>> {
        let n = self.count("n");
        match (self.get("v"), self.get("axis")) {
            (Some(v), _) => Ok(v.split(';').map(|c| c.parse().unwrap()).collect()),
            (None, Some(a)) => {
                let a: usize = a.parse().unwrap();
                if a >= n {
                    return Err(gaussapprox::Error::Parameter(format!("axis {a} out of range for n={n}")));
                }
                let mut v = vec![0.0; n];
                v[a] = 1.0;
                Ok(v)
            }
            _ => unreachable!(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.get("n").map(|_| self.count("n"))
    }

    /// Constructs the body; randomized kinds draw from `RandomStream::new(seed, 0)`.
    pub fn build(&self) -> anyhow::Result<Arc<dyn Body>> {
        let b: Arc<dyn Body> = match self.kind.as_str() {
            "l2ball" => {
                let n = self.count("n");
                let r = match self.get("r") {
                    None | Some("auto") => (n as f64).sqrt(),
                    Some(_) => self.real("r"),
                };
                Arc::new(LpBall::euclidean(n, r)?)
            }
            "lpball" => {
                let (n, p) = (self.count("n"), self.real("p"));
                match self.get("budget") {
                    None | Some("auto") => Arc::new(LpBall::canonical(n, p)?),
                    Some(_) => Arc::new(LpBall::new(n, p, self.real("budget"))?),
                }
            }
            "halfspace" | "slab" | "polytope_file" | "nazarov" => Arc::new(self.build_polytope()?),
            "junta" => {
                let mut s = RandomStream::new(self.count("seed") as u64, 0);
                Arc::new(sample_junta_intersection(
                    self.count("n"),
                    self.real("p"),
                    self.count("count"),
                    self.count("m"),
                    self.real("theta"),
                    &mut s,
                )?)
            }
            _ => unreachable!("kind checked by parse"),
        };
        Ok(b)
    }
}

impl BodySpec {
    /// The body as an explicit polytope, for kinds that are one.
    pub fn build_polytope(&self) -> anyhow::Result<Polytope> {
        let p = match self.kind.as_str() {
            "halfspace" => {
                let v = self.direction()?;
                check_len(&v, self.count("n"))?;
                let t = self.get("t").map_or(0.0, |_| self.real("t"));
                Polytope::from_halfspaces(v.len(), [Halfspace::new(v, t)?])?
            }
            "slab" => {
                let v = self.direction()?;
                check_len(&v, self.count("n"))?;
                symmetric_slab(&v, self.real("theta"))?
            }
            "polytope_file" => load_polytope(Path::new(self.get("path").unwrap()))?,
            "nazarov" => {
                let mut s = RandomStream::new(self.count("seed") as u64, 0);
                sample_nazarov(self.count("n"), self.real("w"), self.count("s") as u64, &mut s)?
            }
            k => {
                return Err(gaussapprox::Error::Parameter(format!("body kind {k} is not a polytope")).into())
            }
        };
        Ok(p)
    }
}

fn check_len(v: &[f64], n: usize) -> gaussapprox::Result<()> {
    if v.len() != n {
        return Err(gaussapprox::Error::DimensionMismatch { expected: n, got: v.len() });
    }
    Ok(())
}

impl std::str::FromStr for BodySpec {
    type Err = SpecError;
    fn from_str(s: &str) -> Result<Self, SpecError> {
        BodySpec::parse(s)
    }
}

impl fmt::Display for BodySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gaussapprox::special::gaussian_abs_moment;

    fn ball_of(spec: &str) -> Arc<dyn Body> {
        BodySpec::parse(spec).unwrap().build().unwrap()
    }

    #[test]
    fn auto_radius_and_budget() {
        let b = ball_of("l2ball:n=10,r=auto");
        assert_eq!(b.support(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), Some(10f64.sqrt()));
        let b = ball_of("lpball:n=64,p=1,budget=auto");
        let mut e1 = vec![0.0; 64];
        e1[0] = 1.0;
        let want = 64.0 * gaussian_abs_moment(1.0);
        assert!((b.support(&e1).unwrap() - want).abs() < 1e-12);
        assert!((want - 64.0 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn randomized_kinds_are_deterministic() {
        let a = BodySpec::parse("nazarov:n=8,w=6,s=256,seed=7").unwrap();
        let mut s1 = RandomStream::new(7, 0);
        let mut s2 = RandomStream::new(7, 0);
        let p1 = sample_nazarov(8, 6.0, 256, &mut s1).unwrap();
        let p2 = sample_nazarov(8, 6.0, 256, &mut s2).unwrap();
        assert_eq!(p1, p2);
        let b1 = a.build().unwrap();
        let b2 = BodySpec::parse("nazarov:n=8,w=6,s=256,seed=7").unwrap().build().unwrap();
        let mut probe = RandomStream::new(1, 0);
        let mut x = [0.0; 8];
        for _ in 0..10_000 {
            probe.fill_normals(&mut x);
            x.iter_mut().for_each(|v| *v *= 3.0);
            assert_eq!(b1.contains(&x), b2.contains(&x));
            assert_eq!(b1.contains(&x), p1.contains(&x));
        }
    }

    #[test]
    fn seeds_are_required() {
        let e = BodySpec::parse("nazarov:n=8,w=6,s=256").unwrap_err();
        assert!(e.message.contains("seed"));
        assert!(BodySpec::parse("junta:n=8,p=1,m=2,count=3,theta=2").is_err());
    }

    #[test]
    fn error_positions() {
        let e = BodySpec::parse("l2ball:n=10,r=x1").unwrap_err();
        assert_eq!(e.position, 14);
        let e = BodySpec::parse("cube:n=3").unwrap_err();
        assert_eq!(e.position, 0);
        let e = BodySpec::parse("l2ball:n=10,q=1").unwrap_err();
        assert_eq!(e.position, 12);
        assert!(BodySpec::parse("l2ball").is_err());
        assert!(BodySpec::parse("l2ball:n=3,n=4").is_err());
        assert!(BodySpec::parse("slab:n=3,theta=1").is_err());
        assert!(BodySpec::parse("slab:n=3,theta=1,axis=0,v=1;0;0").is_err());
    }

    #[test]
    fn halfspace_and_slab() {
        let h = ball_of("halfspace:n=2,axis=1,t=0.5");
        assert!(h.contains(&[9.0, 0.4]) && !h.contains(&[0.0, 0.6]));
        let s = ball_of("slab:n=2,v=3;4,theta=5");
        assert!(s.contains(&[0.5, 0.7]) && !s.contains(&[0.9, 0.8]) && s.contains(&[-0.5, -0.7]));
        assert!(BodySpec::parse("slab:n=3,v=1;0,theta=1").unwrap().build().is_err());
        assert!(BodySpec::parse("halfspace:n=3,axis=3").unwrap().build().is_err());
    }

    #[test]
    fn render_is_idempotent() {
        for text in [
            "l2ball:r=auto,n=10",
            "lpball:n=64,p=1,budget=auto",
            "halfspace:n=3,v=1;0;0,t=0.5",
            "slab:theta=1,axis=0,n=4",
            "polytope_file:path=/tmp/p.json",
            "nazarov:seed=7,n=8,w=6,s=256",
            "junta:n=128,p=1,m=48,count=64,theta=40.5,seed=3",
        ] {
            let once = BodySpec::parse(text).unwrap().render();
            let twice = BodySpec::parse(&once).unwrap().render();
            assert_eq!(once, twice);
            assert_eq!(BodySpec::parse(&once).unwrap(), BodySpec::parse(text).unwrap());
        }
    }
}

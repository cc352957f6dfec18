//! Ray-set text files, DOT export and certificate JSON.

use std::fmt::Write;

use serde_json::{json, Value};

use super::{orthogonality_graph, KsError, RaySet, SearchCertificate, SearchResult};
use crate::exact_algebra::{canonicalize, QuadRat, Vec3Exact};

/// Parses one ray per line as three whitespace-separated field elements.
/// `#` starts a comment; blank lines are skipped; duplicate rays collapse.
pub fn parse_ray_set(text: &str) -> Result<RaySet, KsError> {
    let mut set = RaySet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(KsError::Parse { line, msg: format!("expected 3 components, found {}", fields.len()) });
        }
        let mut comps = Vec::with_capacity(3);
        for f in fields {
            let q: QuadRat = f.parse().map_err(|e| KsError::Parse { line, msg: format!("{e}") })?;
            comps.push(q);
        }
        let [x, y, z]: [QuadRat; 3] = comps.try_into().expect("three components");
        let ray = canonicalize(&Vec3Exact::new(x, y, z)).map_err(|e| KsError::Parse { line, msg: format!("{e}") })?;
        set.insert(ray);
    }
    Ok(set)
}

pub fn write_ray_set(set: &RaySet) -> String {
    let mut out = String::from("# x y z, one canonical ray per line\n");
    for (id, r) in set.rays().iter().enumerate() {
        let v = r.vector();
        writeln!(out, "{} {} {}  # {id}", v.x, v.y, v.z).unwrap();
    }
    out
}

/// Orthogonality graph in DOT; nodes are labelled by id with the exact components as tooltip.
pub fn to_dot(set: &RaySet) -> String {
    let mut out = String::from("graph orthogonality {\n");
    for (id, r) in set.rays().iter().enumerate() {
        writeln!(out, "  {id} [label=\"{id}\", tooltip=\"{r}\"];").unwrap();
    }
    for (i, j) in orthogonality_graph(set) {
        writeln!(out, "  {i} -- {j};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn certificate_json(cert: &SearchCertificate) -> Value {
    let mut v = json!({
        "result": match cert.result {
            SearchResult::Sat(_) => "SAT",
            SearchResult::Unsat => "UNSAT",
        },
        "nodes_explored": cert.nodes_explored,
        "max_depth": cert.max_depth,
    });
    if let SearchResult::Sat(f) = &cert.result {
        v["assignment"] = json!(f.iter().map(|&b| u8::from(b)).collect::<Vec<_>>());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peres_ks::peres_33;

    #[test]
    fn text_round_trip() {
        let s = peres_33();
        let back = parse_ray_set(&write_ray_set(&s)).unwrap();
        assert_eq!(back.rays(), s.rays());
    }

    #[test]
    fn parse_accepts_comments_and_scaling() {
        let text = "# axes\n1 0 0\n\n0 2 0 # scaled\n0 0 sqrt2\n0 1 0\n";
        let s = parse_ray_set(text).unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse_ray_set("1 0 0\n1 0\n"), Err(KsError::Parse { line: 2, .. })));
        assert!(matches!(parse_ray_set("1 0 x\n"), Err(KsError::Parse { line: 1, .. })));
        assert!(matches!(parse_ray_set("1 0 0\n0 0 0\n"), Err(KsError::Parse { line: 2, .. })));
    }

    #[test]
    fn dot_shape() {
        let s = parse_ray_set("1 0 0\n0 1 0\n").unwrap();
        let d = to_dot(&s);
        assert!(d.starts_with("graph"));
        assert!(d.contains("0 -- 1;"));
        assert!(d.contains("tooltip=\"(1/1+0/1√2, 0/1+0/1√2, 0/1+0/1√2)\""));
    }
}

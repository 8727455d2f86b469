use serde::{Deserialize, Serialize};

use super::{ArcId, DiagramError, LinkDiagram};

/// Parse whitespace-separated `X[a,b,c,d]` tokens and `O` free loops.
/// An optional `PD[...]` wrapper and commas between tokens are accepted.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut ends = Vec::new();
    let mut loops = 0;
    let malformed = |start: usize, end: usize| DiagramError::Malformed {
        token: text[start..end.min(text.len())].to_string(),
        offset: start,
    };
    let mut body = (0, bytes.len());
    let trimmed = text.trim();
    if trimmed.starts_with("PD[") && trimmed.ends_with(']') {
        let s = text.find("PD[").unwrap() + 3;
        let e = text.rfind(']').unwrap();
        body = (s, e);
        i = s;
    }
    while i < body.1 {
        let c = bytes[i];
        if c.is_ascii_whitespace() || c == b',' {
            i += 1;
            continue;
        }
        if c == b'O' {
            loops += 1;
            i += 1;
            continue;
        }
        if c != b'X' {
            let mut j = i;
            while j < body.1 && !bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            return Err(malformed(i, j));
        }
        let start = i;
        let close = text[i..body.1]
            .find(']')
            .map(|k| i + k)
            .ok_or_else(|| malformed(start, body.1))?;
        let inner = text[i + 1..close].trim();
        let inner = inner
            .strip_prefix('[')
            .ok_or_else(|| malformed(start, close + 1))?;
        let labels: Result<Vec<ArcId>, _> =
            inner.split(',').map(|s| s.trim().parse::<ArcId>()).collect();
        match labels {
            Ok(v) if v.len() == 4 => ends.push([v[0], v[1], v[2], v[3]]),
            _ => return Err(malformed(start, close + 1)),
        }
        i = close + 1;
    }
    LinkDiagram::new(ends, loops)
}

/// Structured form of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub pd: Vec<[ArcId; 4]>,
    #[serde(default)]
    pub free_loops: usize,
}

impl DiagramJson {
    pub fn from_diagram(d: &LinkDiagram, name: Option<String>) -> Self {
        DiagramJson { name, pd: d.crossings().to_vec(), free_loops: d.free_loops() }
    }

    pub fn to_diagram(&self) -> Result<LinkDiagram, DiagramError> {
        LinkDiagram::new(self.pd.clone(), self.free_loops)
    }

    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_text() {
        let s = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] O";
        let d = parse_pd(s).unwrap();
        assert_eq!(d.to_string(), s);
        assert_eq!(d.free_loops(), 1);
    }

    #[test]
    fn wrapper_and_commas() {
        let d = parse_pd("PD[X[1, 3, 2, 4], X[3,1,4,2]]").unwrap();
        assert_eq!(d.crossing_count(), 2);
    }

    #[test]
    fn malformed() {
        assert!(matches!(parse_pd("X[1,2,3]"), Err(DiagramError::Malformed { .. })));
        assert!(matches!(parse_pd("Y[1,2,3,4]"), Err(DiagramError::Malformed { .. })));
        assert!(matches!(parse_pd("X[1,2,3,4"), Err(DiagramError::Malformed { .. })));
    }

    #[test]
    fn round_trip_json() {
        let d = parse_pd("X[1,3,2,4] X[3,1,4,2]").unwrap();
        let j = DiagramJson::from_diagram(&d, Some("hopf".into()));
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(DiagramJson::parse(&s).unwrap().to_diagram().unwrap(), d);
    }
}

//! JSON interchange: frames and subspaces as lists of rational strings.

use serde::{Deserialize, Serialize};

use crate::construct::Certificate;
use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::ratlin::{format_rational, parse_rational, RatMatrix, Rational};
use crate::subspaces::Subspace;

/// Serde adapter for `Vec<Rational>` as `["p/q", ...]`.
pub mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Basis vectors of a distinguished subspace, e.g. a certified maximal one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<Vec<String>>>,
}

/// `{"n": .., "vectors": [[..]], "meta": {..}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    pub n: usize,
    pub vectors: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

/// Vectors as lists of rational strings.
pub fn encode_vectors(vs: &[Vec<Rational>]) -> Vec<Vec<String>> {
    vs.iter().map(|v| v.iter().map(format_rational).collect()).collect()
}

fn decode(n: usize, vs: &[Vec<String>]) -> Result<Vec<Vec<Rational>>> {
    if vs.is_empty() {
        return Err(Error::Parse("no vectors".into()));
    }
    vs.iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != n {
                return Err(Error::Parse(format!("vector {} has length {}, expected {n}", i + 1, v.len())));
            }
            v.iter().map(|s| parse_rational(s)).collect()
        })
        .collect()
}

impl FrameFile {
    pub fn from_frame(frame: &Frame, meta: Option<Meta>) -> Self {
        FrameFile { n: frame.dim(), vectors: encode_vectors(frame.vectors()), meta }
    }

    pub fn to_frame(&self) -> Result<Frame> {
        Frame::new(self.n, decode(self.n, &self.vectors)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }
}

/// `{"n": ambient, "basis": [[..]]}` with one entry per basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub n: usize,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceFile {
    pub fn from_subspace(m: &Subspace) -> Self {
        SubspaceFile { n: m.ambient_dim(), basis: encode_vectors(&m.basis().columns()) }
    }

    pub fn to_subspace(&self) -> Result<Subspace> {
        let cols = decode(self.n, &self.basis)?;
        Subspace::new(RatMatrix::from_columns(self.n, &cols)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::ratio;

    #[test]
    fn frame_round_trip() {
        let f = Frame::new(2, vec![vec![ratio(1, 3), ratio(-2, 1)], vec![ratio(0, 1), ratio(7, 5)]]).unwrap();
        let file = FrameFile::from_frame(&f, None);
        assert_eq!(file.vectors[0], vec!["1/3".to_string(), "-2".to_string()]);
        let back = FrameFile::parse(&file.to_json()).unwrap().to_frame().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(FrameFile::parse("{"), Err(Error::Parse(_))));
        let bad = FrameFile { n: 2, vectors: vec![vec!["1".into()]], meta: None };
        assert!(matches!(bad.to_frame(), Err(Error::Parse(_))));
        let zero_den = FrameFile { n: 1, vectors: vec![vec!["1/0".into()]], meta: None };
        assert!(matches!(zero_den.to_frame(), Err(Error::Parse(_))));
    }
}

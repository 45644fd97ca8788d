use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Whether a location is a home or a place people go during the day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationKind {
    Activity,
    Residential,
}

impl fmt::Display for LocationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocationKind::Activity => f.write_str("activity"),
            LocationKind::Residential => f.write_str("residential"),
        }
    }
}

impl FromStr for LocationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "activity" => Ok(LocationKind::Activity),
            "residential" => Ok(LocationKind::Residential),
            other => Err(format!("unknown location kind `{other}`")),
        }
    }
}

/// Where a location sits: geodetic coordinates in degrees, or a row of an
/// explicit distance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Position {
    Geo { lat: f64, lon: f64 },
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub id: String,
    pub kind: LocationKind,
    pub position: Position,
}

impl Location {
    pub fn geo(id: impl Into<String>, kind: LocationKind, lat: f64, lon: f64) -> Self {
        Location {
            id: id.into(),
            kind,
            position: Position::Geo { lat, lon },
        }
    }

    pub fn indexed(id: impl Into<String>, kind: LocationKind, index: usize) -> Self {
        Location {
            id: id.into(),
            kind,
            position: Position::Index(index),
        }
    }
}

/// A person, described by home and the set of locations they visit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Client {
    pub id: String,
    pub home: Option<String>,
    pub visited: Vec<String>,
}

impl Client {
    pub fn new<I, S>(id: impl Into<String>, home: Option<&str>, visited: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Client {
            id: id.into(),
            home: home.map(str::to_owned),
            visited: visited.into_iter().map(Into::into).collect(),
        }
    }
}

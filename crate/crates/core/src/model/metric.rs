use serde::{Deserialize, Serialize};

use super::location::{Location, Position};
use super::ModelError;

/// IUGG mean Earth radius.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// A point on the sphere with the trigonometry the haversine formula needs
/// precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
    cos_lat: f64,
}

impl GeoPoint {
    pub fn from_degrees(lat: f64, lon: f64) -> Self {
        let lat = lat.to_radians();
        GeoPoint {
            lat,
            lon: lon.to_radians(),
            cos_lat: lat.cos(),
        }
    }

    /// Great-circle distance on a sphere of the given radius.
    ///
    /// The operands are put in a canonical order first so the result is
    /// bitwise symmetric.
    #[inline]
    pub fn distance(&self, other: &GeoPoint, radius_km: f64) -> f64 {
        let (a, b) = if (self.lat, self.lon) <= (other.lat, other.lon) {
            (self, other)
        } else {
            (other, self)
        };
        let half_dlat = ((b.lat - a.lat) * 0.5).sin();
        let half_dlon = ((b.lon - a.lon) * 0.5).sin();
        let h = half_dlat * half_dlat + a.cos_lat * b.cos_lat * half_dlon * half_dlon;
        2.0 * radius_km * h.sqrt().min(1.0).asin()
    }

    /// Latitude in radians.
    pub fn lat(&self) -> f64 {
        self.lat
    }
}

/// Great-circle distance in km between two (lat, lon) pairs given in degrees.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    GeoPoint::from_degrees(lat1, lon1).distance(&GeoPoint::from_degrees(lat2, lon2), EARTH_RADIUS_KM)
}

/// Square matrix of pairwise distances in km, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(ModelError::MatrixShape {
                    row: i,
                    len: row.len(),
                    expected: size,
                });
            }
            data.extend(row);
        }
        Ok(DistanceMatrix { size, data })
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        DistanceMatrix { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }
}

/// How distances between locations are measured; one mode per instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Metric {
    Haversine { radius_km: f64 },
    Matrix(DistanceMatrix),
}

impl Default for Metric {
    fn default() -> Self {
        Metric::Haversine {
            radius_km: EARTH_RADIUS_KM,
        }
    }
}

impl Metric {
    pub fn haversine() -> Self {
        Metric::default()
    }

    pub fn matrix(matrix: DistanceMatrix) -> Self {
        Metric::Matrix(matrix)
    }

    /// Whether a location's position kind matches this metric's mode.
    pub fn accepts(&self, location: &Location) -> bool {
        matches!(
            (self, &location.position),
            (Metric::Haversine { .. }, Position::Geo { .. }) | (Metric::Matrix(_), Position::Index(_))
        )
    }

    pub fn distance(&self, a: &Location, b: &Location) -> Result<f64, ModelError> {
        match (self, &a.position, &b.position) {
            (
                Metric::Haversine { radius_km },
                Position::Geo { lat: la, lon: oa },
                Position::Geo { lat: lb, lon: ob },
            ) => Ok(GeoPoint::from_degrees(*la, *oa).distance(&GeoPoint::from_degrees(*lb, *ob), *radius_km)),
            (Metric::Matrix(m), Position::Index(i), Position::Index(j)) => {
                if *i >= m.size() || *j >= m.size() {
                    return Err(ModelError::MatrixIndex {
                        index: (*i).max(*j),
                        size: m.size(),
                    });
                }
                Ok(m.get(*i, *j))
            }
            _ => {
                let culprit = if self.accepts(a) { b } else { a };
                Err(ModelError::MixedMode(culprit.id.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LocationKind;

    #[test]
    fn identical_points_are_zero() {
        assert_eq!(haversine_km(0.0, 0.0, 0.0, 0.0), 0.0);
        assert_eq!(haversine_km(38.03, -78.48, 38.03, -78.48), 0.0);
    }

    #[test]
    fn one_degree_on_equator() {
        let expected = std::f64::consts::PI / 180.0 * EARTH_RADIUS_KM;
        let d = haversine_km(0.0, 0.0, 0.0, 1.0);
        assert!((d - 111.1951).abs() < 1e-3, "{d}");
        assert!((d - expected).abs() < 1e-9);
    }

    #[test]
    fn bitwise_symmetric() {
        let pts = [(38.01, -78.51), (-12.5, 130.0), (89.9, 179.9), (0.0, -180.0)];
        for a in pts {
            for b in pts {
                assert_eq!(
                    haversine_km(a.0, a.1, b.0, b.1).to_bits(),
                    haversine_km(b.0, b.1, a.0, a.1).to_bits()
                );
            }
        }
    }

    #[test]
    fn matrix_lookup() {
        let m = DistanceMatrix::from_fn(6, |i, j| if (i, j) == (2, 5) || (i, j) == (5, 2) { 4.0 } else { 1.0 });
        let metric = Metric::matrix(m);
        let a = Location::indexed("a", LocationKind::Activity, 2);
        let b = Location::indexed("b", LocationKind::Activity, 5);
        assert_eq!(metric.distance(&a, &b).unwrap(), 4.0);
    }

    #[test]
    fn mixed_mode_is_rejected() {
        let a = Location::indexed("a", LocationKind::Activity, 0);
        let b = Location::geo("b", LocationKind::Activity, 0.0, 0.0);
        let err = Metric::haversine().distance(&b, &a).unwrap_err();
        assert!(matches!(err, ModelError::MixedMode(id) if id == "a"));
    }

    #[test]
    fn ragged_matrix_is_rejected() {
        assert!(DistanceMatrix::new(vec![vec![0.0, 1.0], vec![1.0]]).is_err());
    }
}

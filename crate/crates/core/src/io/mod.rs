//! CSV ingestion and result output.
//!
//! `locations.csv` is either `id,lat,lon,kind` or `id,index,kind`; the
//! second form takes a headerless square `matrix.csv` of km distances whose
//! rows follow `index`. `visits.csv` is `client_id,home_location_id,visited_ids`
//! with `;` between visited ids and an empty home allowed. `groups.csv` is
//! `label,requirement,member_client_ids`.

mod output;

use std::collections::HashSet;
use std::fs::File;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{
    Client, DistanceMatrix, Instance, InstanceData, Location, LocationKind, Metric, ModelError, Position,
};
use crate::solvers::GroupSpec;

pub use output::{
    cluster_csv, curve_csv, kernel_csv, solution_json, sweep_csv, write_cluster_csv, write_curve_csv,
    write_kernel_csv, write_solution, write_sweep_csv, CurveRow,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{path}: empty S_p at line {line}")]
    EmptyVisits { path: PathBuf, line: u64 },
    #[error("{path}: duplicate id {id} at line {line}")]
    Duplicate { path: PathBuf, line: u64, id: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl IoError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_owned(),
            source,
        }
    }

    fn parse(path: &Path, line: u64, message: impl Into<String>) -> Self {
        IoError::Parse {
            path: path.to_owned(),
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Every location becomes a candidate site, not only activity ones.
    pub all_sites: bool,
}

fn reader(path: &Path, headers: bool) -> Result<csv::Reader<File>, IoError> {
    let file = File::open(path).map_err(|e| IoError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(headers)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file))
}

type Numbered = Vec<(u64, csv::StringRecord)>;

/// Records with their 1-based line numbers.
fn records(path: &Path, headers: bool) -> Result<(Vec<String>, Numbered), IoError> {
    let mut rdr = reader(path, headers)?;
    let header = if headers {
        rdr.headers()
            .map_err(|e| IoError::parse(path, 1, e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect()
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            IoError::parse(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, rec));
    }
    Ok((header, out))
}

fn field<'r>(path: &Path, line: u64, rec: &'r csv::StringRecord, i: usize, name: &str) -> Result<&'r str, IoError> {
    rec.get(i)
        .ok_or_else(|| IoError::parse(path, line, format!("missing column {name}")))
}

fn number<T: std::str::FromStr>(path: &Path, line: u64, text: &str, name: &str) -> Result<T, IoError> {
    text.parse()
        .map_err(|_| IoError::parse(path, line, format!("bad {name} {text:?}")))
}

fn split_ids(text: &str) -> Vec<String> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned).collect()
}

fn read_locations(path: &Path) -> Result<Vec<Location>, IoError> {
    let (header, rows) = records(path, true)?;
    let geo = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["id", "lat", "lon", "kind"] => true,
        ["id", "index", "kind"] => false,
        other => {
            return Err(IoError::parse(
                path,
                1,
                format!("header {other:?}; expected id,lat,lon,kind or id,index,kind"),
            ))
        }
    };
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, rec) in rows {
        let id = field(path, line, &rec, 0, "id")?.to_owned();
        if id.is_empty() {
            return Err(IoError::parse(path, line, "empty id"));
        }
        if !seen.insert(id.clone()) {
            return Err(IoError::Duplicate { path: path.to_owned(), line, id });
        }
        let kind_col = if geo { 3 } else { 2 };
        let kind: LocationKind = field(path, line, &rec, kind_col, "kind")?
            .parse()
            .map_err(|e: String| IoError::parse(path, line, e))?;
        let loc = if geo {
            let lat = number(path, line, field(path, line, &rec, 1, "lat")?, "lat")?;
            let lon = number(path, line, field(path, line, &rec, 2, "lon")?, "lon")?;
            Location::geo(id, kind, lat, lon)
        } else {
            let index = number(path, line, field(path, line, &rec, 1, "index")?, "index")?;
            Location::indexed(id, kind, index)
        };
        out.push(loc);
    }
    Ok(out)
}

fn read_visits(path: &Path) -> Result<Vec<Client>, IoError> {
    let (header, rows) = records(path, true)?;
    if header != ["client_id", "home_location_id", "visited_ids"] {
        return Err(IoError::parse(
            path,
            1,
            format!("header {header:?}; expected client_id,home_location_id,visited_ids"),
        ));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, rec) in rows {
        let id = field(path, line, &rec, 0, "client_id")?.to_owned();
        if !seen.insert(id.clone()) {
            return Err(IoError::Duplicate { path: path.to_owned(), line, id });
        }
        let home = field(path, line, &rec, 1, "home_location_id")?;
        let visited = split_ids(rec.get(2).unwrap_or(""));
        if visited.is_empty() {
            return Err(IoError::EmptyVisits { path: path.to_owned(), line });
        }
        out.push(Client::new(id, (!home.is_empty()).then_some(home), visited));
    }
    Ok(out)
}

fn read_matrix(path: &Path) -> Result<DistanceMatrix, IoError> {
    let (_, rows) = records(path, false)?;
    let mut out = Vec::with_capacity(rows.len());
    for (line, rec) in rows {
        let row = rec
            .iter()
            .map(|x| number::<f64>(path, line, x, "distance"))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    Ok(DistanceMatrix::new(out)?)
}

/// Read and validate an instance.
pub fn load_instance(
    locations: &Path,
    visits: &Path,
    matrix: Option<&Path>,
    options: LoadOptions,
) -> Result<Instance, IoError> {
    let locs = read_locations(locations)?;
    let clients = read_visits(visits)?;
    let indexed = locs.iter().any(|l| matches!(l.position, Position::Index(_)));
    let metric = match (indexed, matrix) {
        (true, Some(m)) => Metric::matrix(read_matrix(m)?),
        (true, None) => {
            return Err(IoError::Usage(format!(
                "{} uses matrix indices; pass a distance matrix",
                locations.display()
            )))
        }
        (false, None) => Metric::haversine(),
        (false, Some(_)) => {
            return Err(IoError::Usage(format!(
                "{} has coordinates; a distance matrix is only used with id,index,kind",
                locations.display()
            )))
        }
    };
    let sites = locs
        .iter()
        .filter(|l| options.all_sites || l.kind == LocationKind::Activity)
        .map(|l| l.id.clone())
        .collect();
    Ok(Instance::new(InstanceData {
        locations: locs,
        clients,
        sites,
        metric,
    })?)
}

pub fn read_groups(path: &Path) -> Result<Vec<GroupSpec>, IoError> {
    let (header, rows) = records(path, true)?;
    if header != ["label", "requirement", "member_client_ids"] {
        return Err(IoError::parse(
            path,
            1,
            format!("header {header:?}; expected label,requirement,member_client_ids"),
        ));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (line, rec) in rows {
        let label = field(path, line, &rec, 0, "label")?.to_owned();
        if !seen.insert(label.clone()) {
            return Err(IoError::Duplicate { path: path.to_owned(), line, id: label });
        }
        let requirement = number(path, line, field(path, line, &rec, 1, "requirement")?, "requirement")?;
        out.push(GroupSpec {
            label,
            requirement,
            members: split_ids(rec.get(2).unwrap_or("")),
        });
    }
    Ok(out)
}

/// Where [`write_instance`] put the files.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFiles {
    pub locations: PathBuf,
    pub visits: PathBuf,
    pub matrix: Option<PathBuf>,
}

fn create(path: &Path) -> Result<csv::Writer<File>, IoError> {
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path, e: csv::Error) -> IoError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => IoError::io(path, source),
        other => IoError::parse(path, 0, format!("{other:?}")),
    }
}

/// Write `locations.csv`, `visits.csv` and, for matrix instances,
/// `matrix.csv` into `dir`.
pub fn write_instance(instance: &Instance, dir: &Path) -> Result<InstanceFiles, IoError> {
    std::fs::create_dir_all(dir).map_err(|e| IoError::io(dir, e))?;
    let files = InstanceFiles {
        locations: dir.join("locations.csv"),
        visits: dir.join("visits.csv"),
        matrix: matches!(instance.metric(), Metric::Matrix(_)).then(|| dir.join("matrix.csv")),
    };
    let data = instance.data();

    let path = &files.locations;
    let mut w = create(path)?;
    let geo = files.matrix.is_none();
    let header: &[&str] = if geo { &["id", "lat", "lon", "kind"] } else { &["id", "index", "kind"] };
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for l in &data.locations {
        let kind = l.kind.to_string();
        let row = match l.position {
            Position::Geo { lat, lon } => vec![l.id.clone(), lat.to_string(), lon.to_string(), kind],
            Position::Index(i) => vec![l.id.clone(), i.to_string(), kind],
        };
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| IoError::io(path, e))?;

    let path = &files.visits;
    let mut w = create(path)?;
    w.write_record(["client_id", "home_location_id", "visited_ids"])
        .map_err(|e| csv_err(path, e))?;
    for c in &data.clients {
        w.write_record([c.id.as_str(), c.home.as_deref().unwrap_or(""), &c.visited.join(";")])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| IoError::io(path, e))?;

    if let (Some(path), Metric::Matrix(m)) = (&files.matrix, instance.metric()) {
        let mut w = create(path)?;
        for i in 0..m.size() {
            w.write_record(m.row(i).iter().map(|x| x.to_string()))
                .map_err(|e| csv_err(path, e))?;
        }
        w.flush().map_err(|e| IoError::io(path, e))?;
    }
    Ok(files)
}

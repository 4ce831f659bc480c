use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Method;
use crate::error::{FsrError, Result};

/// One reconstruction run. Field order matches the CSV header
/// `image,density,seed,method,tau,psnr_db,seconds,fallback_blocks`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub image: String,
    pub density: f64,
    pub seed: u64,
    pub method: Method,
    /// Adaptive prior threshold; empty for methods that do not use it.
    pub tau: Option<f64>,
    /// `inf` for an exact reconstruction.
    pub psnr_db: f64,
    pub seconds: f64,
    pub fallback_blocks: usize,
}

impl RunRecord {
    /// Same run, ignoring wall-clock time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        RunRecord {
            seconds: 0.0,
            ..self.clone()
        } == RunRecord {
            seconds: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunError {
    pub image: String,
    pub message: String,
}

/// Mean over seeds for one (density, method, tau) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanRow {
    pub density: f64,
    pub method: Method,
    pub tau: Option<f64>,
    pub psnr_db: f64,
    pub seconds: f64,
    pub runs: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub records: Vec<RunRecord>,
    pub errors: Vec<RunError>,
}

impl RunReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        if self.records.is_empty() {
            wtr.write_record([
                "image",
                "density",
                "seed",
                "method",
                "tau",
                "psnr_db",
                "seconds",
                "fallback_blocks",
            ])?;
        }
        for r in &self.records {
            wtr.serialize(r)?;
        }
        wtr.flush().map_err(|e| FsrError::Csv(e.into()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let records = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<RunRecord>, _>>()?;
        Ok(RunReport {
            records,
            errors: Vec::new(),
        })
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| FsrError::io(path, e))?;
        self.write_csv(file)
    }

    pub fn extend(&mut self, other: RunReport) {
        self.records.extend(other.records);
        self.errors.extend(other.errors);
    }

    /// Aggregates over images and seeds, ordered by density, method, tau.
    pub fn means(&self) -> Vec<MeanRow> {
        // f64 keys ordered via their bit patterns; densities and taus are positive.
        type Key = (u64, Method, Option<u64>);
        let mut cells: BTreeMap<Key, (f64, f64, usize)> = BTreeMap::new();
        for r in &self.records {
            let key = (r.density.to_bits(), r.method, r.tau.map(f64::to_bits));
            let cell = cells.entry(key).or_insert((0.0, 0.0, 0));
            cell.0 += r.psnr_db;
            cell.1 += r.seconds;
            cell.2 += 1;
        }
        cells
            .into_iter()
            .map(|((d, method, tau), (psnr, secs, runs))| MeanRow {
                density: f64::from_bits(d),
                method,
                tau: tau.map(f64::from_bits),
                psnr_db: psnr / runs as f64,
                seconds: secs / runs as f64,
                runs,
            })
            .collect()
    }

    /// Mean PSNR over all runs of `method` at `density` (any tau).
    pub fn mean_psnr(&self, method: Method, density: f64) -> Option<f64> {
        self.mean_of(
            |r| r.method == method && r.density == density,
            |r| r.psnr_db,
        )
    }

    pub fn mean_psnr_for_tau(&self, tau: f64, density: f64) -> Option<f64> {
        self.mean_of(
            |r| r.tau == Some(tau) && r.density == density,
            |r| r.psnr_db,
        )
    }

    pub fn mean_seconds(&self, method: Method) -> Option<f64> {
        self.mean_of(|r| r.method == method, |r| r.seconds)
    }

    fn mean_of(
        &self,
        filter: impl Fn(&RunRecord) -> bool,
        value: impl Fn(&RunRecord) -> f64,
    ) -> Option<f64> {
        let (sum, n) = self
            .records
            .iter()
            .filter(|r| filter(r))
            .fold((0.0, 0usize), |(s, n), r| (s + value(r), n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    pub fn write_summary_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        for row in self.means() {
            wtr.serialize(row)?;
        }
        wtr.flush().map_err(|e| FsrError::Csv(e.into()))?;
        Ok(())
    }
}

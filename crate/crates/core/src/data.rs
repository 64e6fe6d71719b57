//! Series and forecast ingestion, holdout splitting, and alignment of
//! forecasts with actuals.
//!
//! Inputs are long-format CSV files: actuals carry `unique_id,ds,y` and
//! forecasts carry `unique_id,ds,model,y_hat`. Timestamps are ISO-8601
//! calendar dates (`YYYY-MM-DD`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ACTUALS_HEADER: [&str; 3] = ["unique_id", "ds", "y"];
pub const FORECASTS_HEADER: [&str; 4] = ["unique_id", "ds", "model", "y_hat"];

const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: String, column: String },
    #[error("{path}: header must be exactly `{expected}`, found `{found}`")]
    UnexpectedHeader {
        path: String,
        expected: String,
        found: String,
    },
    #[error("{path}:{line}: cannot parse timestamp `{value}` (expected YYYY-MM-DD)")]
    UnparseableTimestamp { path: String, line: u64, value: String },
    #[error("{path}:{line}: cannot parse value `{value}`")]
    UnparseableValue { path: String, line: u64, value: String },
    #[error("series `{series}`: duplicate timestamp {ds}")]
    DuplicateTimestamp { series: String, ds: NaiveDate },
    #[error("series `{series}` appears in more than one input")]
    DuplicateSeries { series: String },
    #[error("series `{series}`: length {len} is shorter than the required {required}")]
    SeriesTooShort {
        series: String,
        len: usize,
        required: usize,
    },
    #[error("series `{series}`: {prev} -> {next} is not one {frequency} step")]
    IrregularSpacing {
        series: String,
        prev: NaiveDate,
        next: NaiveDate,
        frequency: Frequency,
    },
    #[error("{path}: no data rows")]
    EmptyInput { path: String },
    #[error("forecast for unknown series `{series}`")]
    UnknownSeries { series: String },
    #[error("series `{series}`, model `{model}`: {ds} is outside the holdout window")]
    TimestampOutsideHoldout {
        series: String,
        model: String,
        ds: NaiveDate,
    },
    #[error("series `{series}`, model `{model}`: {got} of {expected} horizon steps provided")]
    IncompleteHorizon {
        series: String,
        model: String,
        got: usize,
        expected: usize,
    },
    #[error("duplicate forecast for series `{series}`, model `{model}` at {ds}")]
    DuplicateForecast {
        series: String,
        model: String,
        ds: NaiveDate,
    },
    #[error("no series is covered by every model")]
    NoOverlap,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

/// Sampling frequency of a series. Determines the seasonal period and the
/// forecasting horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    Monthly,
    Quarterly,
}

impl Frequency {
    pub const ALL: [Frequency; 2] = [Frequency::Monthly, Frequency::Quarterly];

    /// Seasonal period `m`.
    pub fn season_length(self) -> usize {
        match self {
            Frequency::Monthly => 12,
            Frequency::Quarterly => 4,
        }
    }

    /// Forecasting horizon `H`: one full seasonal cycle.
    pub fn horizon(self) -> usize {
        self.season_length()
    }

    pub fn months_per_step(self) -> u32 {
        match self {
            Frequency::Monthly => 1,
            Frequency::Quarterly => 3,
        }
    }

    /// Smallest admissible series: two seasonal cycles plus the holdout.
    pub fn min_length(self) -> usize {
        2 * self.season_length() + self.horizon()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Frequency::Monthly => "monthly",
            Frequency::Quarterly => "quarterly",
        }
    }

    /// Date one step after `date`. Month-end dates stay on month ends.
    pub fn step_after(self, date: NaiveDate) -> NaiveDate {
        let next = date + Months::new(self.months_per_step());
        if is_month_end(date) {
            last_day_of_month(next)
        } else {
            next
        }
    }

    fn is_one_step(self, prev: NaiveDate, next: NaiveDate) -> bool {
        let shifted = prev + Months::new(self.months_per_step());
        shifted == next || (is_month_end(prev) && next == last_day_of_month(shifted))
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frequency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "monthly" | "m" => Ok(Frequency::Monthly),
            "quarterly" | "q" => Ok(Frequency::Quarterly),
            other => Err(format!("unknown frequency `{other}`")),
        }
    }
}

fn is_month_end(date: NaiveDate) -> bool {
    date.succ_opt().is_none_or(|d| d.month() != date.month())
}

fn last_day_of_month(date: NaiveDate) -> NaiveDate {
    let first = date.with_day(1).expect("day 1 exists");
    let next_first = first + Months::new(1);
    next_first.pred_opt().expect("not the minimum date")
}

pub fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), DATE_FORMAT).ok()
}

pub fn format_date(date: NaiveDate) -> String {
    date.format(DATE_FORMAT).to_string()
}

/// One univariate series with evenly spaced timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    timestamps: Vec<NaiveDate>,
    values: Vec<f64>,
    frequency: Frequency,
}

impl TimeSeries {
    /// Builds a series, checking that timestamps are strictly increasing and
    /// exactly one frequency step apart and that values are finite.
    pub fn new(
        id: impl Into<String>,
        timestamps: Vec<NaiveDate>,
        values: Vec<f64>,
        frequency: Frequency,
    ) -> Result<Self, DataError> {
        let id = id.into();
        assert_eq!(timestamps.len(), values.len(), "timestamps/values length mismatch");
        for pair in timestamps.windows(2) {
            if pair[0] == pair[1] {
                return Err(DataError::DuplicateTimestamp {
                    series: id,
                    ds: pair[0],
                });
            }
            if !frequency.is_one_step(pair[0], pair[1]) {
                return Err(DataError::IrregularSpacing {
                    series: id,
                    prev: pair[0],
                    next: pair[1],
                    frequency,
                });
            }
        }
        Ok(Self {
            id,
            timestamps,
            values,
            frequency,
        })
    }

    /// Builds a regular series starting at `start`.
    pub fn from_start(id: impl Into<String>, start: NaiveDate, values: Vec<f64>, frequency: Frequency) -> Self {
        let timestamps = std::iter::successors(Some(start), |d| Some(frequency.step_after(*d)))
            .take(values.len())
            .collect();
        Self {
            id: id.into(),
            timestamps,
            values,
            frequency,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn timestamps(&self) -> &[NaiveDate] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Timestamps of the final `horizon` observations.
    pub fn holdout_timestamps(&self) -> &[NaiveDate] {
        let h = self.frequency.horizon().min(self.len());
        &self.timestamps[self.len() - h..]
    }

    fn split_at(&self, at: usize) -> (TimeSeries, TimeSeries) {
        let head = TimeSeries {
            id: self.id.clone(),
            timestamps: self.timestamps[..at].to_vec(),
            values: self.values[..at].to_vec(),
            frequency: self.frequency,
        };
        let tail = TimeSeries {
            id: self.id.clone(),
            timestamps: self.timestamps[at..].to_vec(),
            values: self.values[at..].to_vec(),
            frequency: self.frequency,
        };
        (head, tail)
    }

    /// Appends `other` (which must continue this series) and returns the
    /// concatenation.
    pub fn concat(&self, other: &TimeSeries) -> Result<TimeSeries, DataError> {
        let mut timestamps = self.timestamps.clone();
        timestamps.extend_from_slice(&other.timestamps);
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        TimeSeries::new(self.id.clone(), timestamps, values, self.frequency)
    }
}

/// A set of series keyed by identifier.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeriesCollection {
    series: BTreeMap<String, TimeSeries>,
    provenance: Vec<PathBuf>,
}

impl SeriesCollection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, series: TimeSeries) -> Result<(), DataError> {
        if self.series.contains_key(series.id()) {
            return Err(DataError::DuplicateSeries {
                series: series.id().to_string(),
            });
        }
        self.series.insert(series.id().to_string(), series);
        Ok(())
    }

    /// Merges another collection; identifiers must not overlap.
    pub fn merge(&mut self, other: SeriesCollection) -> Result<(), DataError> {
        for (_, s) in other.series {
            self.insert(s)?;
        }
        self.provenance.extend(other.provenance);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&TimeSeries> {
        self.series.get(id)
    }

    /// Series in identifier order.
    pub fn iter(&self) -> impl Iterator<Item = &TimeSeries> {
        self.series.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.series.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn provenance(&self) -> &[PathBuf] {
        &self.provenance
    }

    pub fn total_observations(&self) -> usize {
        self.series.values().map(TimeSeries::len).sum()
    }

    pub fn frequencies(&self) -> BTreeSet<Frequency> {
        self.series.values().map(TimeSeries::frequency).collect()
    }
}

impl FromIterator<TimeSeries> for SeriesCollection {
    /// Panics on duplicate identifiers.
    fn from_iter<I: IntoIterator<Item = TimeSeries>>(iter: I) -> Self {
        let mut c = SeriesCollection::new();
        for s in iter {
            c.insert(s).expect("unique series ids");
        }
        c
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> DataError + '_ {
    move |source| DataError::Csv {
        path: path.display().to_string(),
        source,
    }
}

fn check_header(path: &Path, found: &csv::StringRecord, expected: &[&str]) -> Result<(), DataError> {
    let found: Vec<&str> = found.iter().map(str::trim).collect();
    if let Some(column) = expected.iter().find(|c| !found.contains(c)) {
        return Err(DataError::MissingColumn {
            path: path.display().to_string(),
            column: column.to_string(),
        });
    }
    if found != expected {
        return Err(DataError::UnexpectedHeader {
            path: path.display().to_string(),
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(())
}

fn parse_value(path: &Path, line: u64, raw: &str) -> Result<f64, DataError> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| DataError::UnparseableValue {
            path: path.display().to_string(),
            line,
            value: raw.to_string(),
        })
}

fn parse_ts(path: &Path, line: u64, raw: &str) -> Result<NaiveDate, DataError> {
    parse_date(raw).ok_or_else(|| DataError::UnparseableTimestamp {
        path: path.display().to_string(),
        line,
        value: raw.to_string(),
    })
}

fn open_csv(path: &Path) -> Result<csv::Reader<std::fs::File>, DataError> {
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new().has_headers(true).from_reader(file))
}

/// Reads an actuals file (`unique_id,ds,y`) declared at `frequency`.
pub fn load_actuals(path: &Path, frequency: Frequency) -> Result<SeriesCollection, DataError> {
    let mut reader = open_csv(path)?;
    read_actuals(path, &mut reader, frequency)
}

/// Parses actuals from any reader; `origin` is used in diagnostics and
/// recorded as provenance.
pub fn read_actuals<R: io::Read>(
    origin: &Path,
    reader: &mut csv::Reader<R>,
    frequency: Frequency,
) -> Result<SeriesCollection, DataError> {
    let header = reader.headers().map_err(csv_err(origin))?.clone();
    check_header(origin, &header, &ACTUALS_HEADER)?;

    let mut grouped: BTreeMap<String, Vec<(NaiveDate, f64)>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(csv_err(origin))?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[0].trim().to_string();
        let ds = parse_ts(origin, line, &record[1])?;
        let y = parse_value(origin, line, &record[2])?;
        grouped.entry(id).or_default().push((ds, y));
    }
    if grouped.is_empty() {
        return Err(DataError::EmptyInput {
            path: origin.display().to_string(),
        });
    }

    let mut collection = SeriesCollection::new();
    for (id, mut rows) in grouped {
        rows.sort_by_key(|(ds, _)| *ds);
        if rows.len() < frequency.min_length() {
            return Err(DataError::SeriesTooShort {
                series: id,
                len: rows.len(),
                required: frequency.min_length(),
            });
        }
        let (timestamps, values) = rows.into_iter().unzip();
        collection.insert(TimeSeries::new(id, timestamps, values, frequency)?)?;
    }
    collection.provenance.push(origin.to_path_buf());
    Ok(collection)
}

/// Writes a collection in actuals format. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_actuals<W: io::Write>(collection: &SeriesCollection, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ACTUALS_HEADER)?;
    for s in collection.iter() {
        for (ds, y) in s.timestamps.iter().zip(&s.values) {
            w.write_record([s.id.as_str(), &format_date(*ds), &y.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Splits every series into a training part and the final `H` observations.
pub fn split_holdout(collection: &SeriesCollection) -> Result<(SeriesCollection, SeriesCollection), DataError> {
    let mut train = SeriesCollection {
        series: BTreeMap::new(),
        provenance: collection.provenance.clone(),
    };
    let mut test = train.clone();
    for s in collection.iter() {
        let h = s.frequency.horizon();
        if s.len() <= h {
            return Err(DataError::SeriesTooShort {
                series: s.id.clone(),
                len: s.len(),
                required: h + 1,
            });
        }
        let (head, tail) = s.split_at(s.len() - h);
        train.series.insert(s.id.clone(), head);
        test.series.insert(s.id.clone(), tail);
    }
    Ok((train, test))
}

/// One forecast row.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRow {
    pub series: String,
    pub ds: NaiveDate,
    pub model: String,
    pub y_hat: f64,
}

/// Point forecasts keyed by (series, model), each covering a full holdout
/// window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ForecastSet {
    entries: BTreeMap<(String, String), BTreeMap<NaiveDate, f64>>,
}

impl ForecastSet {
    /// Validates rows against the holdout windows of `collection`.
    pub fn from_rows<I>(rows: I, collection: &SeriesCollection) -> Result<Self, DataError>
    where
        I: IntoIterator<Item = ForecastRow>,
    {
        let mut entries: BTreeMap<(String, String), BTreeMap<NaiveDate, f64>> = BTreeMap::new();
        for row in rows {
            let series = collection.get(&row.series).ok_or_else(|| DataError::UnknownSeries {
                series: row.series.clone(),
            })?;
            if series.holdout_timestamps().binary_search(&row.ds).is_err() {
                return Err(DataError::TimestampOutsideHoldout {
                    series: row.series,
                    model: row.model,
                    ds: row.ds,
                });
            }
            let slot = entries.entry((row.series.clone(), row.model.clone())).or_default();
            if slot.insert(row.ds, row.y_hat).is_some() {
                return Err(DataError::DuplicateForecast {
                    series: row.series,
                    model: row.model,
                    ds: row.ds,
                });
            }
        }
        for ((series, model), steps) in &entries {
            let expected = collection.get(series).expect("checked above").frequency.horizon();
            if steps.len() != expected {
                return Err(DataError::IncompleteHorizon {
                    series: series.clone(),
                    model: model.clone(),
                    got: steps.len(),
                    expected,
                });
            }
        }
        Ok(Self { entries })
    }

    /// Combines two forecast sets; overlapping rows are rejected.
    pub fn merge(&mut self, other: ForecastSet) -> Result<(), DataError> {
        for (key, steps) in other.entries {
            if let Some(ds) = self.entries.get(&key).and_then(|s| s.keys().next()) {
                return Err(DataError::DuplicateForecast {
                    series: key.0,
                    model: key.1,
                    ds: *ds,
                });
            }
            self.entries.insert(key, steps);
        }
        Ok(())
    }

    pub fn models(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(_, m)| m.as_str()).collect()
    }

    pub fn covers(&self, series: &str, model: &str) -> bool {
        self.entries.contains_key(&(series.to_string(), model.to_string()))
    }

    /// Forecast values for one pair in timestamp order.
    pub fn values(&self, series: &str, model: &str) -> Option<Vec<f64>> {
        self.entries
            .get(&(series.to_string(), model.to_string()))
            .map(|m| m.values().copied().collect())
    }

    pub fn row_count(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn pair_count(&self) -> usize {
        self.entries.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = ForecastRow> + '_ {
        self.entries.iter().flat_map(|((series, model), steps)| {
            steps.iter().map(move |(ds, y_hat)| ForecastRow {
                series: series.clone(),
                ds: *ds,
                model: model.clone(),
                y_hat: *y_hat,
            })
        })
    }
}

/// Reads a forecasts file (`unique_id,ds,model,y_hat`).
pub fn load_forecasts(path: &Path, collection: &SeriesCollection) -> Result<ForecastSet, DataError> {
    let mut reader = open_csv(path)?;
    read_forecasts(path, &mut reader, collection)
}

pub fn read_forecasts<R: io::Read>(
    origin: &Path,
    reader: &mut csv::Reader<R>,
    collection: &SeriesCollection,
) -> Result<ForecastSet, DataError> {
    let header = reader.headers().map_err(csv_err(origin))?.clone();
    check_header(origin, &header, &FORECASTS_HEADER)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err(origin))?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push(ForecastRow {
            series: record[0].trim().to_string(),
            ds: parse_ts(origin, line, &record[1])?,
            model: record[2].trim().to_string(),
            y_hat: parse_value(origin, line, &record[3])?,
        });
    }
    if rows.is_empty() {
        return Err(DataError::EmptyInput {
            path: origin.display().to_string(),
        });
    }
    ForecastSet::from_rows(rows, collection)
}

pub fn write_forecasts<W: io::Write>(forecasts: &ForecastSet, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FORECASTS_HEADER)?;
    for row in forecasts.rows() {
        w.write_record([
            row.series.as_str(),
            &format_date(row.ds),
            row.model.as_str(),
            &row.y_hat.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One joined observation: actual and one model's forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub series: String,
    pub ds: NaiveDate,
    /// Position within the holdout window, starting at 1.
    pub step: usize,
    pub actual: f64,
    pub model: String,
    pub forecast: f64,
}

/// Actuals joined with forecasts over the holdout windows. Every model
/// covers exactly the same series and timestamps.
#[derive(Debug, Clone)]
pub struct EvalFrame {
    rows: Vec<EvalRow>,
    models: Vec<String>,
    series: Vec<String>,
    training: SeriesCollection,
    dropped: Vec<(String, String)>,
}

impl EvalFrame {
    /// Rows ordered by (series, model, step).
    pub fn rows(&self) -> &[EvalRow] {
        &self.rows
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn series_ids(&self) -> &[String] {
        &self.series
    }

    pub fn training(&self) -> &SeriesCollection {
        &self.training
    }

    /// (series, model) pairs removed because not every model covered the series.
    pub fn dropped_pairs(&self) -> &[(String, String)] {
        &self.dropped
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows for one (series, model) pair, in step order.
    pub fn pair_rows<'a>(&'a self, series: &'a str, model: &'a str) -> impl Iterator<Item = &'a EvalRow> {
        let start = self
            .rows
            .partition_point(|r| (r.series.as_str(), r.model.as_str()) < (series, model));
        self.rows[start..]
            .iter()
            .take_while(move |r| r.series == series && r.model == model)
    }
}

/// Joins test windows with forecasts. A series is kept only when every
/// model covers it; the remaining pairs are reported as dropped.
pub fn align(
    train: &SeriesCollection,
    test: &SeriesCollection,
    forecasts: &ForecastSet,
) -> Result<EvalFrame, DataError> {
    let models: Vec<String> = forecasts.models().into_iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut training = SeriesCollection {
        series: BTreeMap::new(),
        provenance: train.provenance.clone(),
    };

    for s in test.iter() {
        let covering: Vec<&String> = models.iter().filter(|m| forecasts.covers(s.id(), m)).collect();
        if covering.is_empty() {
            continue;
        }
        if covering.len() < models.len() {
            dropped.extend(covering.into_iter().map(|m| (s.id.clone(), m.clone())));
            continue;
        }
        let Some(history) = train.get(s.id()) else {
            continue;
        };
        for model in &models {
            let steps = &forecasts.entries[&(s.id.clone(), model.clone())];
            for (i, (ds, actual)) in s.timestamps.iter().zip(&s.values).enumerate() {
                let forecast = steps[ds];
                rows.push(EvalRow {
                    series: s.id.clone(),
                    ds: *ds,
                    step: i + 1,
                    actual: *actual,
                    model: model.clone(),
                    forecast,
                });
            }
        }
        kept.push(s.id.clone());
        training.series.insert(s.id.clone(), history.clone());
    }

    if rows.is_empty() {
        return Err(DataError::NoOverlap);
    }
    Ok(EvalFrame {
        rows,
        models,
        series: kept,
        training,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        parse_date(s).unwrap()
    }

    fn read_actuals_str(text: &str, freq: Frequency) -> Result<SeriesCollection, DataError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        read_actuals(Path::new("mem.csv"), &mut r, freq)
    }

    fn read_forecasts_str(text: &str, c: &SeriesCollection) -> Result<ForecastSet, DataError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        read_forecasts(Path::new("mem.csv"), &mut r, c)
    }

    fn quarterly(id: &str, n: usize) -> TimeSeries {
        TimeSeries::from_start(
            id,
            d("2000-03-31"),
            (0..n).map(|i| i as f64).collect(),
            Frequency::Quarterly,
        )
    }

    fn actuals_csv(series: &[TimeSeries]) -> String {
        let c: SeriesCollection = series.iter().cloned().collect();
        let mut buf = Vec::new();
        write_actuals(&c, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn constant_monthly_series_loads() {
        let s = TimeSeries::from_start("a", d("2001-01-01"), vec![5.0; 36], Frequency::Monthly);
        let c = read_actuals_str(&actuals_csv(&[s]), Frequency::Monthly).unwrap();
        assert_eq!(c.len(), 1);
        let a = c.get("a").unwrap();
        assert_eq!(a.len(), 36);
        assert!(a.values().iter().all(|&v| v == 5.0));
    }

    #[test]
    fn header_only_is_empty_input() {
        let err = read_actuals_str("unique_id,ds,y\n", Frequency::Monthly).unwrap_err();
        assert!(matches!(err, DataError::EmptyInput { .. }));
    }

    #[test]
    fn rows_are_sorted_within_series() {
        let s = quarterly("q", 12);
        let mut lines: Vec<String> = actuals_csv(std::slice::from_ref(&s))
            .lines()
            .map(str::to_string)
            .collect();
        lines[1..].reverse();
        let c = read_actuals_str(&lines.join("\n"), Frequency::Quarterly).unwrap();
        assert_eq!(c.get("q").unwrap(), &s);
    }

    #[test]
    fn ingestion_errors() {
        let err = read_actuals_str("unique_id,ds\na,2000-01-01\n", Frequency::Monthly).unwrap_err();
        assert!(matches!(err, DataError::MissingColumn { ref column, .. } if column == "y"));

        let err = read_actuals_str("unique_id,ds,y\na,01/02/2000,1\n", Frequency::Monthly).unwrap_err();
        assert!(matches!(err, DataError::UnparseableTimestamp { .. }));

        let err = read_actuals_str("unique_id,ds,y\na,2000-01-01,\n", Frequency::Monthly).unwrap_err();
        assert!(matches!(err, DataError::UnparseableValue { .. }));

        let err = read_actuals_str("unique_id,ds,y\na,2000-01-01,NaN\n", Frequency::Monthly).unwrap_err();
        assert!(matches!(err, DataError::UnparseableValue { .. }));

        let short = actuals_csv(&[quarterly("q", 11)]);
        let err = read_actuals_str(&short, Frequency::Quarterly).unwrap_err();
        assert!(matches!(
            err,
            DataError::SeriesTooShort {
                len: 11,
                required: 12,
                ..
            }
        ));

        let mut text = actuals_csv(&[quarterly("q", 12)]);
        text.push_str("q,2000-03-31,7\n");
        let err = read_actuals_str(&text, Frequency::Quarterly).unwrap_err();
        assert!(matches!(err, DataError::DuplicateTimestamp { .. }));

        // Quarterly data declared as monthly.
        let err = read_actuals_str(&actuals_csv(&[quarterly("q", 40)]), Frequency::Monthly).unwrap_err();
        assert!(matches!(err, DataError::IrregularSpacing { .. }));
    }

    #[test]
    fn month_end_spacing_is_regular() {
        let s = TimeSeries::from_start("m", d("2000-01-31"), vec![0.0; 14], Frequency::Monthly);
        assert_eq!(s.timestamps()[1], d("2000-02-29"));
        assert_eq!(s.timestamps()[2], d("2000-03-31"));
        assert!(TimeSeries::new("m", s.timestamps().to_vec(), vec![0.0; 14], Frequency::Monthly).is_ok());
    }

    #[test]
    fn split_holdout_lengths() {
        let m = TimeSeries::from_start("m", d("2000-01-01"), vec![1.0; 48], Frequency::Monthly);
        let q = quarterly("q", 12);
        let c: SeriesCollection = [m, q].into_iter().collect();
        let (train, test) = split_holdout(&c).unwrap();
        assert_eq!(train.get("m").unwrap().len(), 36);
        assert_eq!(test.get("m").unwrap().len(), 12);
        assert_eq!(train.get("q").unwrap().len(), 8);
        assert_eq!(test.get("q").unwrap().len(), 4);
        for s in c.iter() {
            let joined = train.get(s.id()).unwrap().concat(test.get(s.id()).unwrap()).unwrap();
            assert_eq!(&joined, s);
        }
    }

    #[test]
    fn split_holdout_rejects_length_h() {
        let c: SeriesCollection = [quarterly("q", 4)].into_iter().collect();
        assert!(matches!(
            split_holdout(&c),
            Err(DataError::SeriesTooShort { len: 4, .. })
        ));
    }

    fn forecast_csv(rows: &[(&str, &str, &str, f64)]) -> String {
        let mut s = String::from("unique_id,ds,model,y_hat\n");
        for (id, ds, m, v) in rows {
            s.push_str(&format!("{id},{ds},{m},{v}\n"));
        }
        s
    }

    fn holdout_rows(c: &SeriesCollection, models: &[&str]) -> Vec<(String, String, String, f64)> {
        let mut rows = Vec::new();
        for s in c.iter() {
            for m in models {
                for ds in s.holdout_timestamps() {
                    rows.push((s.id().to_string(), format_date(*ds), m.to_string(), 1.0));
                }
            }
        }
        rows
    }

    fn as_refs(rows: &[(String, String, String, f64)]) -> Vec<(&str, &str, &str, f64)> {
        rows.iter()
            .map(|(a, b, c, v)| (a.as_str(), b.as_str(), c.as_str(), *v))
            .collect()
    }

    #[test]
    fn complete_forecasts_load() {
        let c: SeriesCollection = [quarterly("a", 12), quarterly("b", 16)].into_iter().collect();
        let rows = holdout_rows(&c, &["A", "B", "C"]);
        assert_eq!(rows.len(), 24);
        let f = read_forecasts_str(&forecast_csv(&as_refs(&rows)), &c).unwrap();
        assert_eq!(f.models().len(), 3);
        assert_eq!(f.row_count(), 24);
    }

    #[test]
    fn forecast_contract_violations() {
        let c: SeriesCollection = [quarterly("a", 12)].into_iter().collect();

        let text = forecast_csv(&[("a", "2000-03-31", "A", 1.0)]);
        assert!(matches!(
            read_forecasts_str(&text, &c),
            Err(DataError::TimestampOutsideHoldout { .. })
        ));

        let mut rows = holdout_rows(&c, &["A"]);
        rows.pop();
        let err = read_forecasts_str(&forecast_csv(&as_refs(&rows)), &c).unwrap_err();
        assert!(matches!(
            err,
            DataError::IncompleteHorizon { ref model, ref series, got: 3, expected: 4 } if model == "A" && series == "a"
        ));

        let mut rows = holdout_rows(&c, &["A"]);
        rows.push(rows[0].clone());
        assert!(matches!(
            read_forecasts_str(&forecast_csv(&as_refs(&rows)), &c),
            Err(DataError::DuplicateForecast { .. })
        ));

        let text = forecast_csv(&[("zz", "2002-12-31", "A", 1.0)]);
        assert!(matches!(
            read_forecasts_str(&text, &c),
            Err(DataError::UnknownSeries { .. })
        ));
    }

    #[test]
    fn align_counts_and_steps() {
        let c: SeriesCollection = [quarterly("a", 12)].into_iter().collect();
        let (train, test) = split_holdout(&c).unwrap();
        let rows = holdout_rows(&c, &["A", "B"]);
        let f = read_forecasts_str(&forecast_csv(&as_refs(&rows)), &c).unwrap();
        let frame = align(&train, &test, &f).unwrap();
        assert_eq!(frame.len(), 8);
        let steps: Vec<usize> = frame.rows().iter().map(|r| r.step).collect();
        assert_eq!(steps, vec![1, 2, 3, 4, 1, 2, 3, 4]);
        assert_eq!(frame.pair_rows("a", "B").count(), 4);
        assert!(frame.dropped_pairs().is_empty());
    }

    #[test]
    fn align_drops_partially_covered_series() {
        let c: SeriesCollection = (0..4).map(|i| quarterly(&format!("s{i}"), 12)).collect();
        let (train, test) = split_holdout(&c).unwrap();
        let mut rows = holdout_rows(&c, &["A"]);
        let half: SeriesCollection = c.iter().take(2).cloned().collect();
        rows.extend(holdout_rows(&half, &["B"]));
        let f = read_forecasts_str(&forecast_csv(&as_refs(&rows)), &c).unwrap();
        let frame = align(&train, &test, &f).unwrap();
        assert_eq!(frame.series_ids(), ["s0", "s1"]);
        assert_eq!(frame.len(), 2 * 2 * 4);
        assert_eq!(frame.dropped_pairs().len(), 2);
        assert_eq!(frame.training().len(), 2);
    }

    #[test]
    fn align_without_known_series_is_no_overlap() {
        let c: SeriesCollection = [quarterly("a", 12)].into_iter().collect();
        let (train, test) = split_holdout(&c).unwrap();
        let empty = ForecastSet::default();
        assert!(matches!(align(&train, &test, &empty), Err(DataError::NoOverlap)));
    }
}

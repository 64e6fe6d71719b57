//! Aggregation of per-series and per-observation losses into comparable
//! scores: mean loss, expected shortfall, win/draw/loss with a region of
//! practical equivalence, condition-restricted means and rank tables.
//!
//! All sums go through [`ordered_sum`], which adds values in descending
//! order. Results therefore do not depend on input order, and the expected
//! shortfall at `alpha = 1` reproduces the mean bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::aspects::{ConditionAnnotations, HorizonClass};
use crate::data::Frequency;
use crate::metrics::LossTable;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AggregationError {
    #[error("no defined losses")]
    EmptyInput,
    #[error("alpha {alpha} selects no series out of {n}")]
    AlphaTooSmall { alpha: f64, n: usize },
    #[error("alpha {0} must lie in (0, 1]")]
    InvalidAlpha(f64),
    #[error("ROPE {0} must be a non-negative percentage")]
    InvalidRope(f64),
    #[error("the compared models were scored on different series")]
    SeriesSetMismatch,
    #[error("no units satisfy the condition")]
    EmptyCondition,
    #[error("model `{model}` has no score for dimension `{dimension}`")]
    IncompleteScores { model: String, dimension: Dimension },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

/// Sum of `values` taken in descending order.
pub fn ordered_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.iter().sum()
}

/// A mean together with the number of units it was taken over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub value: f64,
    pub n: usize,
}

fn mean_of(values: &[f64]) -> Result<Aggregate, AggregationError> {
    if values.is_empty() {
        return Err(AggregationError::EmptyInput);
    }
    Ok(Aggregate {
        value: ordered_sum(values) / values.len() as f64,
        n: values.len(),
    })
}

/// Mean over the defined losses; `None` entries are skipped.
pub fn mean_loss(losses: &[Option<f64>]) -> Result<Aggregate, AggregationError> {
    let defined: Vec<f64> = losses.iter().flatten().copied().collect();
    mean_of(&defined)
}

/// Number of tail units `floor(alpha * n)`.
pub fn tail_size(alpha: f64, n: usize) -> usize {
    // Products such as 0.7 * 10 may land just below the integer.
    (alpha * n as f64 + 1e-9).floor() as usize
}

/// Mean of the `floor(alpha * n)` largest losses.
pub fn expected_shortfall(losses: &[f64], alpha: f64) -> Result<Aggregate, AggregationError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(AggregationError::InvalidAlpha(alpha));
    }
    if losses.is_empty() {
        return Err(AggregationError::EmptyInput);
    }
    let k = tail_size(alpha, losses.len()).min(losses.len());
    if k == 0 {
        return Err(AggregationError::AlphaTooSmall { alpha, n: losses.len() });
    }
    let mut sorted = losses.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(Aggregate {
        value: sorted[..k].iter().sum::<f64>() / k as f64,
        n: k,
    })
}

/// `200 |a - b| / (a + b)`, zero when both losses are zero.
pub fn symmetric_percentage_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs() + b.abs();
    if scale == 0.0 {
        0.0
    } else {
        200.0 * ((a - b).abs() / scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WinDrawLoss {
    pub win: f64,
    pub draw: f64,
    pub loss: f64,
    pub n: usize,
}

/// Fractions of series where model A beats, ties with, or loses to model B.
/// A pair counts as a draw when the symmetric percentage difference of the
/// two losses is at most `rope`.
pub fn win_draw_loss<K: Ord>(
    losses_a: &BTreeMap<K, f64>,
    losses_b: &BTreeMap<K, f64>,
    rope: f64,
) -> Result<WinDrawLoss, AggregationError> {
    if rope.is_nan() || rope < 0.0 {
        return Err(AggregationError::InvalidRope(rope));
    }
    if losses_a.len() != losses_b.len() || losses_a.keys().zip(losses_b.keys()).any(|(a, b)| a != b) {
        return Err(AggregationError::SeriesSetMismatch);
    }
    if losses_a.is_empty() {
        return Err(AggregationError::EmptyInput);
    }
    let (mut wins, mut draws) = (0usize, 0usize);
    for (a, b) in losses_a.values().zip(losses_b.values()) {
        if symmetric_percentage_difference(*a, *b) <= rope {
            draws += 1;
        } else if a < b {
            wins += 1;
        }
    }
    let n = losses_a.len();
    let win = wins as f64 / n as f64;
    let draw = draws as f64 / n as f64;
    // 1 - (win + draw) is exact enough that the three fractions sum to 1.
    let loss = 1.0 - (win + draw);
    Ok(WinDrawLoss { win, draw, loss, n })
}

/// Mean loss over the series accepted by `mask`.
pub fn conditional_mean_series<K, F>(losses: &BTreeMap<K, f64>, mask: F) -> Result<Aggregate, AggregationError>
where
    F: Fn(&K) -> bool,
{
    let selected: Vec<f64> = losses.iter().filter(|(k, _)| mask(k)).map(|(_, v)| *v).collect();
    mean_of(&selected).map_err(|_| AggregationError::EmptyCondition)
}

/// Mean loss over the observations accepted by `mask`, pooled across series.
pub fn conditional_mean_obs<K, F>(point_losses: &BTreeMap<K, f64>, mask: F) -> Result<Aggregate, AggregationError>
where
    F: Fn(&K) -> bool,
{
    conditional_mean_series(point_losses, mask)
}

/// An evaluation dimension (one axis of the comparison).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Overall,
    ExpectedShortfall,
    Stationary,
    NonStationary,
    Seasonal,
    NonSeasonal,
    Anomalies,
    Hard,
    HorizonFirst,
    HorizonLast,
    Frequency(Frequency),
}

impl Dimension {
    pub fn name(self) -> String {
        match self {
            Dimension::Overall => "overall".into(),
            Dimension::ExpectedShortfall => "expected_shortfall".into(),
            Dimension::Stationary => "stationary".into(),
            Dimension::NonStationary => "non_stationary".into(),
            Dimension::Seasonal => "seasonal".into(),
            Dimension::NonSeasonal => "non_seasonal".into(),
            Dimension::Anomalies => "anomalies".into(),
            Dimension::Hard => "hard".into(),
            Dimension::HorizonFirst => "horizon_first".into(),
            Dimension::HorizonLast => "horizon_last".into(),
            Dimension::Frequency(f) => format!("frequency_{f}"),
        }
    }

    /// The axes of the default radar chart, in display order.
    pub fn default_radar_axes() -> Vec<Dimension> {
        vec![
            Dimension::Overall,
            Dimension::ExpectedShortfall,
            Dimension::Stationary,
            Dimension::Seasonal,
            Dimension::Anomalies,
            Dimension::Hard,
            Dimension::HorizonLast,
        ]
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "overall" => Dimension::Overall,
            "expected_shortfall" => Dimension::ExpectedShortfall,
            "stationary" => Dimension::Stationary,
            "non_stationary" => Dimension::NonStationary,
            "seasonal" => Dimension::Seasonal,
            "non_seasonal" => Dimension::NonSeasonal,
            "anomalies" => Dimension::Anomalies,
            "hard" => Dimension::Hard,
            "horizon_first" => Dimension::HorizonFirst,
            "horizon_last" => Dimension::HorizonLast,
            other => match other.strip_prefix("frequency_") {
                Some(f) => Dimension::Frequency(f.parse()?),
                None => return Err(format!("unknown dimension `{other}`")),
            },
        })
    }
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> serde::Deserialize<'de> for Dimension {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionScore {
    pub dimension: Dimension,
    pub model: String,
    pub value: f64,
    pub n: usize,
}

/// Scores ordered by (dimension, model) plus the dimensions that were
/// dropped for lack of data.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DimensionScores {
    pub scores: Vec<DimensionScore>,
    pub warnings: Vec<String>,
}

impl DimensionScores {
    pub fn dimensions(&self) -> Vec<Dimension> {
        let mut dims: Vec<Dimension> = self.scores.iter().map(|s| s.dimension).collect();
        dims.dedup();
        dims
    }

    pub fn get(&self, dimension: Dimension, model: &str) -> Option<&DimensionScore> {
        self.scores
            .iter()
            .find(|s| s.dimension == dimension && s.model == model)
    }

    /// `model,dimension,value,n`
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["model", "dimension", "value", "n"])?;
        for s in &self.scores {
            w.write_record([
                s.model.clone(),
                s.dimension.name(),
                s.value.to_string(),
                s.n.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Scores every model on every dimension that has data. Series-level
/// conditions average series losses; anomaly and horizon conditions pool
/// point losses.
pub fn build_dimension_scores(
    table: &LossTable,
    annotations: &ConditionAnnotations,
    alpha: f64,
) -> Result<DimensionScores, AggregationError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(AggregationError::InvalidAlpha(alpha));
    }
    let mut frequencies: Vec<Frequency> = annotations.series_annotations().map(|s| s.frequency).collect();
    frequencies.sort();
    frequencies.dedup();

    let mut dimensions = vec![
        Dimension::Overall,
        Dimension::ExpectedShortfall,
        Dimension::Stationary,
        Dimension::NonStationary,
        Dimension::Seasonal,
        Dimension::NonSeasonal,
        Dimension::Anomalies,
        Dimension::Hard,
        Dimension::HorizonFirst,
        Dimension::HorizonLast,
    ];
    dimensions.extend(frequencies.into_iter().map(Dimension::Frequency));

    let series_flag = |id: &str, dim: Dimension| -> bool {
        let Some(a) = annotations.series(id) else {
            return false;
        };
        match dim {
            Dimension::Stationary => a.is_stationary == Some(true),
            Dimension::NonStationary => a.is_stationary == Some(false),
            Dimension::Seasonal => a.is_seasonal == Some(true),
            Dimension::NonSeasonal => a.is_seasonal == Some(false),
            Dimension::Hard => a.is_hard == Some(true),
            Dimension::Frequency(f) => a.frequency == f,
            _ => unreachable!("not a series-level dimension"),
        }
    };
    let obs_flag = |id: &str, step: usize, dim: Dimension| -> bool {
        let Some(o) = annotations.observation(id, step) else {
            return false;
        };
        match dim {
            Dimension::Anomalies => o.is_anomaly == Some(true),
            Dimension::HorizonFirst => o.horizon_class == HorizonClass::First,
            Dimension::HorizonLast => o.horizon_class == HorizonClass::Last,
            _ => unreachable!("not an observation-level dimension"),
        }
    };

    let mut out = DimensionScores::default();
    for dim in dimensions {
        let mut row = Vec::new();
        let mut failure = None;
        for model in table.models() {
            let series = table.series_losses_of(model);
            let result = match dim {
                Dimension::Overall => {
                    let values: Vec<f64> = series.values().copied().collect();
                    mean_of(&values)
                }
                Dimension::ExpectedShortfall => {
                    let values: Vec<f64> = series.values().copied().collect();
                    expected_shortfall(&values, alpha)
                }
                Dimension::Anomalies | Dimension::HorizonFirst | Dimension::HorizonLast => {
                    let points = table.point_losses_of(model);
                    conditional_mean_obs(&points, |(id, step)| obs_flag(id, *step, dim))
                }
                _ => conditional_mean_series(&series, |id| series_flag(id, dim)),
            };
            match result {
                Ok(agg) => row.push(DimensionScore {
                    dimension: dim,
                    model: model.clone(),
                    value: agg.value,
                    n: agg.n,
                }),
                Err(e) => {
                    failure = Some(format!("model `{model}`: {e}"));
                    break;
                }
            }
        }
        match failure {
            None => out.scores.extend(row),
            Some(reason) => out.warnings.push(format!("dimension `{dim}` dropped: {reason}")),
        }
    }
    Ok(out)
}

/// Per-dimension ranks of every model; 1 is the lowest loss and ties share
/// the average of the ranks they span.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarSummary {
    models: Vec<String>,
    dimensions: Vec<Dimension>,
    ranks: BTreeMap<(Dimension, String), f64>,
}

impl RadarSummary {
    pub const TIE_POLICY: &'static str = "average";

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn dimensions(&self) -> &[Dimension] {
        &self.dimensions
    }

    pub fn rank(&self, model: &str, dimension: Dimension) -> Option<f64> {
        self.ranks.get(&(dimension, model.to_string())).copied()
    }

    pub fn mean_rank(&self, model: &str) -> Option<f64> {
        let ranks: Vec<f64> = self.dimensions.iter().filter_map(|d| self.rank(model, *d)).collect();
        if ranks.is_empty() {
            None
        } else {
            Some(ranks.iter().sum::<f64>() / ranks.len() as f64)
        }
    }

    /// `model,dimension,rank`, ordered by (dimension, model).
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["model", "dimension", "rank"])?;
        for ((dim, model), rank) in &self.ranks {
            w.write_record([model.clone(), dim.name(), rank.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Average ranks of `values` in ascending order.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 2) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn rank_models(scores: &DimensionScores) -> Result<RadarSummary, AggregationError> {
    let mut models: Vec<String> = scores.scores.iter().map(|s| s.model.clone()).collect();
    models.sort();
    models.dedup();
    let dimensions = scores.dimensions();

    let mut ranks = BTreeMap::new();
    for dim in &dimensions {
        let mut values = Vec::with_capacity(models.len());
        for model in &models {
            let score = scores
                .get(*dim, model)
                .ok_or_else(|| AggregationError::IncompleteScores {
                    model: model.clone(),
                    dimension: *dim,
                })?;
            values.push(score.value);
        }
        for (model, rank) in models.iter().zip(average_ranks(&values)) {
            ranks.insert((*dim, model.clone()), rank);
        }
    }
    Ok(RadarSummary {
        models,
        dimensions,
        ranks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WdlRow {
    pub model_a: String,
    pub model_b: String,
    pub outcome: WinDrawLoss,
    pub rope: f64,
}

/// Win/draw/loss of `reference` against every other model.
pub fn compare_against(table: &LossTable, reference: &str, rope: f64) -> Result<Vec<WdlRow>, AggregationError> {
    if !table.models().iter().any(|m| m == reference) {
        return Err(AggregationError::UnknownModel(reference.to_string()));
    }
    let base = table.series_losses_of(reference);
    table
        .models()
        .iter()
        .filter(|m| m.as_str() != reference)
        .map(|other| {
            let outcome = win_draw_loss(&base, &table.series_losses_of(other), rope)?;
            Ok(WdlRow {
                model_a: reference.to_string(),
                model_b: other.clone(),
                outcome,
                rope,
            })
        })
        .collect()
}

/// `model_a,model_b,win,draw,loss,rope`
pub fn write_wdl_csv<W: io::Write>(rows: &[WdlRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["model_a", "model_b", "win", "draw", "loss", "rope"])?;
    for r in rows {
        w.write_record([
            r.model_a.clone(),
            r.model_b.clone(),
            r.outcome.win.to_string(),
            r.outcome.draw.to_string(),
            r.outcome.loss.to_string(),
            r.rope.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn keyed(values: &[f64]) -> BTreeMap<usize, f64> {
        values.iter().copied().enumerate().collect()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_loss(&[Some(2.0), Some(4.0), Some(6.0)]).unwrap().value, 4.0);
        assert_eq!(mean_loss(&[Some(0.0); 3]).unwrap().value, 0.0);
        let agg = mean_loss(&[Some(1.0), None, Some(3.0)]).unwrap();
        assert_eq!((agg.value, agg.n), (2.0, 2));
        assert_eq!(mean_loss(&[None]), Err(AggregationError::EmptyInput));
    }

    #[test]
    fn expected_shortfall_examples() {
        let losses: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(expected_shortfall(&losses, 0.2).unwrap().value, 9.5);
        let full = expected_shortfall(&losses, 1.0).unwrap();
        assert_eq!(full.value, mean_of(&losses).unwrap().value);
        assert_eq!(
            expected_shortfall(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.1),
            Err(AggregationError::AlphaTooSmall { alpha: 0.1, n: 5 })
        );
        assert_eq!(
            expected_shortfall(&losses, 0.0),
            Err(AggregationError::InvalidAlpha(0.0))
        );
        assert_eq!(tail_size(0.7, 10), 7);
        assert_eq!(tail_size(0.29, 100), 29);
    }

    #[test]
    fn win_draw_loss_examples() {
        let a = keyed(&[1.0, 2.0, 3.0]);
        let r = win_draw_loss(&a, &a, 0.0).unwrap();
        assert_eq!((r.win, r.draw, r.loss), (0.0, 1.0, 0.0));

        let r = win_draw_loss(&keyed(&[1.0, 1.0]), &keyed(&[2.0, 0.5]), 0.0).unwrap();
        assert_eq!((r.win, r.draw, r.loss), (0.5, 0.0, 0.5));

        let d = symmetric_percentage_difference(1.0, 1.05);
        assert!((d - 4.878048780487805).abs() < 1e-12);
        let r = win_draw_loss(&keyed(&[1.0]), &keyed(&[1.05]), 10.0).unwrap();
        assert_eq!(r.draw, 1.0);

        assert_eq!(symmetric_percentage_difference(0.0, 0.0), 0.0);
        assert_eq!(
            win_draw_loss(&keyed(&[1.0]), &keyed(&[1.0, 2.0]), 0.0),
            Err(AggregationError::SeriesSetMismatch)
        );
    }

    #[test]
    fn conditional_examples() {
        let losses: BTreeMap<&str, f64> = [("a", 1.0), ("b", 3.0), ("c", 5.0)].into_iter().collect();
        assert_eq!(conditional_mean_series(&losses, |k| *k != "b").unwrap().value, 3.0);
        assert_eq!(
            conditional_mean_series(&losses, |_| true).unwrap(),
            mean_of(&[1.0, 3.0, 5.0]).unwrap()
        );
        assert_eq!(
            conditional_mean_series(&losses, |_| false),
            Err(AggregationError::EmptyCondition)
        );

        let points: BTreeMap<(&str, usize), f64> =
            [(("x", 1), 10.0), (("y", 1), 20.0), (("y", 2), 30.0), (("y", 3), 99.0)]
                .into_iter()
                .collect();
        let pooled = conditional_mean_obs(&points, |(_, step)| *step <= 2).unwrap();
        assert_eq!((pooled.value, pooled.n), (20.0, 3));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(average_ranks(&[1.0, 2.0, 3.0]), [1.0, 2.0, 3.0]);
        assert_eq!(average_ranks(&[1.0, 1.0]), [1.5, 1.5]);
        assert_eq!(average_ranks(&[5.0, 1.0, 5.0, 0.0]), [3.5, 2.0, 3.5, 1.0]);

        let score = |d, m: &str, v| DimensionScore {
            dimension: d,
            model: m.into(),
            value: v,
            n: 1,
        };
        let scores = DimensionScores {
            scores: vec![
                score(Dimension::Overall, "A", 1.0),
                score(Dimension::Overall, "B", 2.0),
                score(Dimension::Hard, "A", 9.0),
                score(Dimension::Hard, "B", 3.0),
            ],
            warnings: vec![],
        };
        let summary = rank_models(&scores).unwrap();
        assert_eq!(summary.rank("A", Dimension::Overall), Some(1.0));
        assert_eq!(summary.mean_rank("A"), summary.mean_rank("B"));

        let incomplete = DimensionScores {
            scores: scores.scores[..3].to_vec(),
            warnings: vec![],
        };
        assert!(matches!(
            rank_models(&incomplete),
            Err(AggregationError::IncompleteScores { .. })
        ));
    }

    #[test]
    fn dimension_names_round_trip() {
        let mut all = Dimension::default_radar_axes();
        all.extend([
            Dimension::NonStationary,
            Dimension::NonSeasonal,
            Dimension::HorizonFirst,
            Dimension::Frequency(Frequency::Monthly),
            Dimension::Frequency(Frequency::Quarterly),
        ]);
        for d in all {
            assert_eq!(d.name().parse::<Dimension>().unwrap(), d);
        }
        assert!("bogus".parse::<Dimension>().is_err());
    }

    proptest! {
        #[test]
        fn wdl_fractions_sum_to_one(
            pairs in prop::collection::vec((0.0f64..50.0, 0.0f64..50.0), 1..80),
            rope in 0.0f64..30.0,
        ) {
            let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let (a, b) = (keyed(&a), keyed(&b));
            let ab = win_draw_loss(&a, &b, rope).unwrap();
            prop_assert_eq!(ab.win + ab.draw + ab.loss, 1.0);
            let ba = win_draw_loss(&b, &a, rope).unwrap();
            prop_assert_eq!(ab.draw, ba.draw);
            prop_assert_eq!(ab.win, ba.loss_count_fraction());
        }

        #[test]
        fn shortfall_dominates_mean(losses in prop::collection::vec(0.0f64..200.0, 10..60)) {
            let mean = mean_of(&losses).unwrap().value;
            let mut prev = f64::INFINITY;
            for step in 1..=10 {
                let alpha = step as f64 / 10.0;
                let es = expected_shortfall(&losses, alpha).unwrap().value;
                prop_assert!(es >= mean);
                prop_assert!(es <= prev);
                prev = es;
            }
            prop_assert_eq!(expected_shortfall(&losses, 1.0).unwrap().value, mean);
        }

        #[test]
        fn order_independent_mean(mut losses in prop::collection::vec(0.0f64..200.0, 1..40)) {
            let a = mean_of(&losses).unwrap();
            losses.reverse();
            prop_assert_eq!(a, mean_of(&losses).unwrap());
        }
    }

    impl WinDrawLoss {
        fn loss_count_fraction(&self) -> f64 {
            ((self.loss * self.n as f64).round()) / self.n as f64
        }
    }
}

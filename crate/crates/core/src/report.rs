//! Per-run statistics in the shape used by the comparison tables.

use std::fmt::Write as _;

use crate::linear::FilterMode;
use crate::search::{SearchStats, SolveOutcome};

/// Version of the CSV layout written by [`RunReport::csv_header`].
pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub family: String,
    pub filter_mode: FilterMode,
    /// `sat`, `unsat`, `limit`, or `error`.
    pub result: String,
    pub wall_time_ms: f64,
    pub stats: SearchStats,
}

impl RunReport {
    pub fn new(instance: impl Into<String>, family: impl Into<String>, mode: FilterMode, outcome: &SolveOutcome, wall_time_ms: f64, stats: SearchStats) -> Self {
        RunReport {
            instance: instance.into(),
            family: family.into(),
            filter_mode: mode,
            result: outcome.name().to_string(),
            wall_time_ms,
            stats,
        }
    }

    /// Share of computed bounds that the improved filter tightened, in
    /// percent; 0 when nothing was computed.
    pub fn bounds_improved_percent(&self) -> f64 {
        if self.stats.bounds_computed == 0 {
            0.0
        } else {
            100.0 * self.stats.bounds_improved as f64 / self.stats.bounds_computed as f64
        }
    }

    /// Mean gain over the improved bounds.
    pub fn avg_improvement(&self) -> Option<f64> {
        (self.stats.bounds_improved > 0)
            .then(|| self.stats.improvement_total as f64 / self.stats.bounds_improved as f64)
    }

    pub fn csv_header() -> &'static str {
        "instance,family,filter,result,decisions,conflicts,bounds_computed,bounds_improved,improvement_total,bounds_improved_pct,avg_improvement,wall_time_ms"
    }

    pub fn csv_row(&self) -> String {
        let avg = self.avg_improvement().map_or(String::new(), |a| format!("{a:.4}"));
        format!(
            "{},{},{},{},{},{},{},{},{},{:.4},{},{:.3}",
            self.instance,
            self.family,
            self.filter_mode.name(),
            self.result,
            self.stats.decisions,
            self.stats.conflicts,
            self.stats.bounds_computed,
            self.stats.bounds_improved,
            self.stats.improvement_total,
            self.bounds_improved_percent(),
            avg,
            self.wall_time_ms
        )
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "instance: {}", self.instance);
        let _ = writeln!(s, "family: {}", self.family);
        let _ = writeln!(s, "filter: {}", self.filter_mode.name());
        let _ = writeln!(s, "result: {}", self.result);
        let _ = writeln!(s, "decisions: {}", self.stats.decisions);
        let _ = writeln!(s, "conflicts: {}", self.stats.conflicts);
        let _ = writeln!(s, "bounds_computed: {}", self.stats.bounds_computed);
        let _ = writeln!(s, "bounds_improved: {}", self.stats.bounds_improved);
        let _ = writeln!(s, "improvement_total: {}", self.stats.improvement_total);
        let _ = writeln!(s, "bounds_improved_pct: {:.4}", self.bounds_improved_percent());
        match self.avg_improvement() {
            Some(a) => {
                let _ = writeln!(s, "avg_improvement: {a:.4}");
            }
            None => {
                let _ = writeln!(s, "avg_improvement: -");
            }
        }
        let _ = writeln!(s, "wall_time_ms: {:.3}", self.wall_time_ms);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        let stats = SearchStats {
            decisions: 10,
            conflicts: 3,
            bounds_computed: 200,
            bounds_improved: 50,
            improvement_total: 120,
        };
        let r = RunReport::new("a", "kakuro", FilterMode::Improved, &SolveOutcome::Unsat, 1.0, stats);
        assert_eq!(r.bounds_improved_percent(), 25.0);
        assert_eq!(r.avg_improvement(), Some(2.4));
        let empty = RunReport::new("b", "kakuro", FilterMode::Standard, &SolveOutcome::Unsat, 1.0, SearchStats::default());
        assert_eq!(empty.bounds_improved_percent(), 0.0);
        assert_eq!(empty.avg_improvement(), None);
        assert_eq!(
            r.csv_row().split(',').count(),
            RunReport::csv_header().split(',').count()
        );
    }
}

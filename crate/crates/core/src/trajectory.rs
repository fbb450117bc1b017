use std::fmt;
use std::io::{self, Write};

use nalgebra::DVector;

use crate::io::fmt_g17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    Discrete,
    Continuous,
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Distance to the saddle set fell to the tolerance.
    Converged,
    /// Iteration budget used up without converging or diverging.
    BudgetExhausted,
    /// Distance exceeded the divergence cutoff.
    Diverged,
    /// A continuous run reached its time horizon.
    Completed,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Converged => "converged",
            RunStatus::BudgetExhausted => "budget-exhausted",
            RunStatus::Diverged => "diverged",
            RunStatus::Completed => "completed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tick {
    /// Iteration index for discrete runs, time for continuous ones.
    pub t: f64,
    pub z: DVector<f64>,
    pub omega: Option<DVector<f64>>,
    pub dist: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub kind: TrajectoryKind,
    pub ticks: Vec<Tick>,
    /// `None` only while a run is in progress or was cut short by an error.
    pub status: Option<RunStatus>,
}

impl Trajectory {
    pub fn new(kind: TrajectoryKind) -> Self {
        Self {
            kind,
            ticks: Vec::new(),
            status: None,
        }
    }

    pub fn last(&self) -> Option<&Tick> {
        self.ticks.last()
    }

    pub fn final_dist(&self) -> Option<f64> {
        self.last().map(|t| t.dist)
    }

    /// Writes the trajectory as CSV, keeping every `stride`-th tick plus the last one.
    ///
    /// Header: `t,dist,z_0,...,z_{d-1}` followed by `w_0,...,w_{d-1}` for
    /// continuous runs.
    pub fn write_csv<W: Write>(&self, mut w: W, stride: usize) -> io::Result<()> {
        let stride = stride.max(1);
        let d = self.ticks.first().map_or(0, |t| t.z.len());
        let with_omega = self.kind == TrajectoryKind::Continuous;

        let mut header = vec!["t".to_string(), "dist".to_string()];
        header.extend((0..d).map(|i| format!("z_{i}")));
        if with_omega {
            header.extend((0..d).map(|i| format!("w_{i}")));
        }
        writeln!(w, "{}", header.join(","))?;

        let n = self.ticks.len();
        for (i, tick) in self.ticks.iter().enumerate() {
            if i % stride != 0 && i + 1 != n {
                continue;
            }
            let mut fields = vec![fmt_g17(tick.t), fmt_g17(tick.dist)];
            fields.extend(tick.z.iter().map(|&v| fmt_g17(v)));
            if with_omega {
                if let Some(om) = &tick.omega {
                    fields.extend(om.iter().map(|&v| fmt_g17(v)));
                }
            }
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tick(t: f64) -> Tick {
        Tick {
            t,
            z: DVector::from_vec(vec![t, -t]),
            omega: Some(DVector::from_vec(vec![0.5, 0.25])),
            dist: t * 2f64.sqrt(),
        }
    }

    #[test]
    fn csv_header_and_stride() {
        let mut tr = Trajectory::new(TrajectoryKind::Continuous);
        tr.ticks = (0..5).map(|i| tick(i as f64)).collect();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf, 3).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,dist,z_0,z_1,w_0,w_1");
        // ticks 0, 3 and the final tick 4
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0,0,"));
        assert!(lines[3].starts_with("4,"));
    }

    #[test]
    fn discrete_csv_has_no_omega() {
        let mut tr = Trajectory::new(TrajectoryKind::Discrete);
        tr.ticks.push(Tick {
            omega: None,
            ..tick(1.0)
        });
        let mut buf = Vec::new();
        tr.write_csv(&mut buf, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("t,dist,z_0,z_1"));
        assert_eq!(text.lines().nth(1), Some("1,1.4142135623730951,1,-1"));
    }
}

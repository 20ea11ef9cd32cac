//! CSV trajectories and loops, JSON orbit results.

use crate::domain::DiscreteLoop;
use crate::error::{Error, Result};
use crate::integrate::Trajectory;
use crate::orbits::OrbitResult;
use nalgebra::Vector2;
use serde::Serialize;
use std::io::{Read, Write};

const TRAJECTORY_HEADER: [&str; 5] = ["t", "q1", "q2", "p1", "p2"];
const TIME_TOLERANCE: f64 = 1e-12;
/// Largest mismatch between a trailing `t = 1` row and the first row for the
/// former to be dropped as the closing sample.
pub const CLOSURE_TOLERANCE: f64 = 1e-6;

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(source_name: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Format { source_name: source_name.to_string(), line, message: e.to_string() }
}

fn write_rows(out: impl Write, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::InvalidArgument(format!("{other:?}")),
    };
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_f64(*v))).map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Header `t,q1,q2,p1,p2` and one row per sample, including `t0`.
pub fn write_trajectory(out: impl Write, tr: &Trajectory) -> Result<()> {
    write_rows(
        out,
        &TRAJECTORY_HEADER,
        tr.states.iter().enumerate().map(|(k, z)| vec![tr.time(k), z[0], z[1], z[2], z[3]]),
    )
}

/// Header `t,q1,q2[,p1,p2]` and `n` rows at `t = i/n`.
pub fn write_loop(out: impl Write, lp: &DiscreteLoop) -> Result<()> {
    let header: &[&str] = if lp.is_phase() { &TRAJECTORY_HEADER } else { &TRAJECTORY_HEADER[..3] };
    write_rows(
        out,
        header,
        (0..lp.n()).map(|i| {
            let q = lp.q()[i];
            let mut row = vec![lp.time(i), q.x, q.y];
            if let Some(p) = lp.p() {
                row.extend([p[i].x, p[i].y]);
            }
            row
        }),
    )
}

/// Parse a loop CSV. A final `t = 1` row equal to the first row within
/// [`CLOSURE_TOLERANCE`] is dropped, so closed trajectories load as loops.
pub fn read_loop(input: impl Read, source_name: &str) -> Result<DiscreteLoop> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = r.headers().map_err(|e| csv_err(source_name, e))?.iter().map(str::to_string).collect();
    let phase = if header == TRAJECTORY_HEADER {
        true
    } else if header == TRAJECTORY_HEADER[..3] {
        false
    } else {
        return Err(Error::Format {
            source_name: source_name.to_string(),
            line: 1,
            message: format!("expected header `t,q1,q2` or `t,q1,q2,p1,p2`, got `{}`", header.join(",")),
        });
    };

    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(source_name, e))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let values = rec
            .iter()
            .map(|s| {
                s.trim().parse::<f64>().map_err(|e| Error::Format {
                    source_name: source_name.to_string(),
                    line,
                    message: format!("`{s}`: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Format {
                source_name: source_name.to_string(),
                line,
                message: format!("non-finite value {bad}"),
            });
        }
        rows.push((line, values));
    }

    if rows.len() >= 2 {
        let (_, last) = rows.last().unwrap();
        if (last[0] - 1.0).abs() <= TIME_TOLERANCE {
            let first = &rows[0].1;
            let gap = last[1..].iter().zip(&first[1..]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if gap > CLOSURE_TOLERANCE {
                return Err(Error::Format {
                    source_name: source_name.to_string(),
                    line: rows.last().unwrap().0,
                    message: format!("final row at t = 1 does not close the loop (gap {gap:e})"),
                });
            }
            rows.pop();
        }
    }

    let n = rows.len();
    for (i, (line, values)) in rows.iter().enumerate() {
        let expected = i as f64 / n as f64;
        if (values[0] - expected).abs() > TIME_TOLERANCE {
            return Err(Error::Format {
                source_name: source_name.to_string(),
                line: *line,
                message: format!("t = {} but expected {}/{} = {}", values[0], i, n, expected),
            });
        }
    }
    let q = rows.iter().map(|(_, v)| Vector2::new(v[1], v[2])).collect();
    if phase {
        DiscreteLoop::phase(q, rows.iter().map(|(_, v)| Vector2::new(v[3], v[4])).collect())
    } else {
        DiscreteLoop::configuration(q)
    }
}

#[derive(Serialize)]
struct DefectsDoc {
    fixed_point: f64,
    force: f64,
    gradient: f64,
}

#[derive(Serialize)]
struct OrbitResultDoc<'a> {
    method: &'a str,
    picture: &'a str,
    functional: &'a str,
    converged: bool,
    iterations: usize,
    initial_state: [f64; 4],
    defects: DefectsDoc,
    loop_file: Option<&'a str>,
}

/// Pretty-printed JSON for an orbit result.
pub fn orbit_result_json(result: &OrbitResult, loop_file: Option<&str>) -> String {
    let doc = OrbitResultDoc {
        method: result.method.as_str(),
        picture: result.picture.as_str(),
        functional: result.functional.as_str(),
        converged: result.converged,
        iterations: result.iterations,
        initial_state: [
            result.initial_state[0],
            result.initial_state[1],
            result.initial_state[2],
            result.initial_state[3],
        ],
        defects: DefectsDoc {
            fixed_point: result.defects.fixed_point,
            force: result.defects.force,
            gradient: result.defects.gradient,
        },
        loop_file,
    };
    serde_json::to_string_pretty(&doc).expect("orbit results serialize")
}

//! Command-line surface.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numeric inconsistency, 4 I/O
//! failure. Argument errors reported by clap also exit with 2.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dynamics::{evolve_exact, evolve_numeric, trajectory, ZeemanField};
use crate::error::{Error, Result};
use crate::format::{
    parse_angle, read_text, to_json_pretty, write_atomic, FieldDocument, FieldFormat, StateSpec,
};
use crate::higher_order::HigherOrderState;
use crate::orientation::{ring_analytic, ring_from_field, sample_field, AzimuthGrid, BsRing};
use crate::render::{render_svg, GlyphStyle};
use crate::sphere::{expectation_vector, Operator2, SphereCoords, SphereKind, Spinor, Vec3, C64};
use crate::tol;
use crate::transfer::{transfer_higher_order, Electron};

#[derive(Debug, Parser)]
#[command(
    name = "hosphere",
    version,
    about = "Higher-order Bloch/Poincare sphere toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spinor and expectation vector of a base-sphere point.
    State {
        #[arg(long, value_parser = angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, value_parser = angle, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, value_parser = sphere, default_value = "B")]
        sphere: SphereKind,
    },
    /// Sample the azimuth-dependent orientation field.
    Field {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = tol::DEFAULT_SAMPLES)]
        samples: usize,
        /// Defaults to csv for a `.csv` output path, json otherwise.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic and fitted BS-ring.
    Ring {
        #[command(flatten)]
        state: StateArgs,
        /// Defaults to max(64, 8 |l - m|).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Larmor precession snapshots.
    Precess {
        #[command(flatten)]
        state: StateArgs,
        /// Field direction `x,y,z`; normalized before use.
        #[arg(long, allow_hyphen_values = true)]
        axis: String,
        #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "1")]
        omega: f64,
        #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
        t0: f64,
        #[arg(long, value_parser = angle, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 4)]
        frames: usize,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Integrator steps from t = 0 to each snapshot (numeric method).
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Defaults to max(64, 8 |l - m|).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Photon-to-spin transfer of a sphere-P state spec.
    Transfer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG panel of a field document.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "arrows")]
        style: StyleArg,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Frame and state flags, or a state-spec file.
#[derive(Debug, Args)]
pub struct StateArgs {
    /// JSON state spec; overrides the individual flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_parser = sphere, default_value = "B")]
    pub sphere: SphereKind,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    pub theta_lambda: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    pub phi_lambda: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub l: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub m: i64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    pub theta: f64,
    #[arg(long, value_parser = angle, allow_hyphen_values = true, default_value = "0")]
    pub phi: f64,
}

impl StateArgs {
    pub fn spec(&self) -> Result<StateSpec> {
        match &self.spec {
            Some(path) => StateSpec::from_json(&read_text(path)?),
            None => {
                let spec = StateSpec {
                    sphere: self.sphere,
                    theta_lambda: self.theta_lambda,
                    phi_lambda: self.phi_lambda,
                    l: self.l,
                    m: self.m,
                    theta: self.theta,
                    phi: self.phi,
                };
                spec.to_state()?;
                Ok(spec)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Arrows,
    Ellipses,
}

fn angle(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn sphere(s: &str) -> std::result::Result<SphereKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_axis(text: &str) -> Result<Vec3> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::parse(format!("axis {text:?} must be x,y,z")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::parse(format!("bad axis component {p:?}")))?;
    }
    Vec3::new(v[0], v[1], v[2])
        .normalized()
        .ok_or_else(|| Error::domain("axis must be nonzero"))
}

fn default_samples(state: &HigherOrderState, samples: Option<usize>) -> usize {
    samples.unwrap_or_else(|| {
        tol::DEFAULT_SAMPLES.max(AzimuthGrid::minimum_for(state.frame.charges.winding()))
    })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

type Pair = [f64; 2];

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn matrix(op: &Operator2) -> [[Pair; 2]; 2] {
    let m = op.entries();
    [
        [pair(m[0][0]), pair(m[0][1])],
        [pair(m[1][0]), pair(m[1][1])],
    ]
}

#[derive(Serialize)]
struct SpinorJson {
    north: Pair,
    south: Pair,
}

impl From<&Spinor> for SpinorJson {
    fn from(s: &Spinor) -> Self {
        SpinorJson {
            north: pair(s.north()),
            south: pair(s.south()),
        }
    }
}

#[derive(Serialize)]
struct StateReport {
    sphere: SphereKind,
    theta: f64,
    phi: f64,
    components: [&'static str; 3],
    spinor: SpinorJson,
    vector: [f64; 3],
}

#[derive(Serialize)]
struct RingReport {
    state: StateSpec,
    samples: usize,
    analytic: BsRing,
    fitted: BsRing,
    max_discrepancy: f64,
    winding_agrees: bool,
}

#[derive(Serialize)]
struct SnapshotJson {
    t: f64,
    rotation: [[Pair; 2]; 2],
    alpha: Pair,
    beta: Pair,
    rows: Vec<[f64; 4]>,
}

#[derive(Serialize)]
struct TrajectoryReport {
    state: StateSpec,
    axis: [f64; 3],
    omega: f64,
    method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<usize>,
    samples: usize,
    snapshots: Vec<SnapshotJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_numeric_deviation: Option<f64>,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::State { theta, phi, sphere } => {
            let coords = SphereCoords::new(theta, phi)?;
            let s = Spinor::from_coords(coords, sphere);
            let report = StateReport {
                sphere,
                theta: coords.theta(),
                phi: coords.phi(),
                components: sphere.component_names(),
                spinor: SpinorJson::from(&s),
                vector: expectation_vector(&s).to_array(),
            };
            emit(None, &to_json_pretty(&report), stdout)
        }
        Command::Field {
            state,
            samples,
            format,
            out,
        } => {
            let spec = state.spec()?;
            let s = spec.to_state()?;
            let grid = AzimuthGrid::for_winding(samples, s.frame.charges.winding())?;
            let doc = FieldDocument::from_field(&sample_field(&s, grid));
            let format = match format {
                Some(FormatArg::Json) => FieldFormat::Json,
                Some(FormatArg::Csv) => FieldFormat::Csv,
                None if out
                    .as_deref()
                    .and_then(Path::extension)
                    .is_some_and(|e| e.eq_ignore_ascii_case("csv")) =>
                {
                    FieldFormat::Csv
                }
                None => FieldFormat::Json,
            };
            emit(out.as_deref(), &doc.encode(format), stdout)
        }
        Command::Ring {
            state,
            samples,
            out,
        } => {
            let spec = state.spec()?;
            let s = spec.to_state()?;
            let n = default_samples(&s, samples);
            let grid = AzimuthGrid::for_winding(n, s.frame.charges.winding())?;
            let analytic = ring_analytic(&s);
            let fitted = ring_from_field(&sample_field(&s, grid))?;
            let d = analytic.discrepancy(&fitted);
            let report = RingReport {
                state: spec,
                samples: n,
                analytic,
                fitted,
                max_discrepancy: d.geometry,
                winding_agrees: !d.winding_mismatch,
            };
            emit(out.as_deref(), &to_json_pretty(&report), stdout)
        }
        Command::Precess {
            state,
            axis,
            omega,
            t0,
            t1,
            frames,
            method,
            steps,
            samples,
            out,
        } => {
            let spec = state.spec()?;
            let s = spec.to_state()?;
            let n = parse_axis(&axis)?;
            let field = ZeemanField::new(n, omega)?;
            let count = default_samples(&s, samples);
            let grid = AzimuthGrid::for_winding(count, s.frame.charges.winding())?;
            let snaps = trajectory(&s, &field, t0, t1, frames, grid)?;

            let mut deviation: f64 = 0.0;
            let mut snapshots = Vec::with_capacity(snaps.len());
            for snap in &snaps {
                let rows = match method {
                    Method::Exact => snap
                        .field
                        .points
                        .iter()
                        .map(|&(phi, v)| [phi, v.x, v.y, v.z])
                        .collect(),
                    Method::Numeric => {
                        let exact = evolve_exact(&s, &field, snap.t)?;
                        let mut rows = Vec::with_capacity(grid.len());
                        for phi in grid.phis() {
                            let numeric = evolve_numeric(&s, &field, snap.t, steps, phi)?;
                            deviation =
                                deviation.max(numeric.spinor.distance(&exact.spinor_at(phi)));
                            let v = expectation_vector(&numeric.spinor);
                            rows.push([phi, v.x, v.y, v.z]);
                        }
                        rows
                    }
                };
                snapshots.push(SnapshotJson {
                    t: snap.t,
                    rotation: matrix(&snap.evolution.frame.rotation),
                    alpha: pair(snap.evolution.alpha),
                    beta: pair(snap.evolution.beta),
                    rows,
                });
            }
            let numeric = method == Method::Numeric;
            let report = TrajectoryReport {
                state: spec,
                axis: n.to_array(),
                omega,
                method,
                steps: numeric.then_some(steps),
                samples: count,
                snapshots,
                max_numeric_deviation: numeric.then_some(deviation),
            };
            emit(out.as_deref(), &to_json_pretty(&report), stdout)
        }
        Command::Transfer { input, out } => {
            let spec = StateSpec::from_json(&read_text(&input)?)?;
            let result = transfer_higher_order(&spec.to_state()?)?;
            let electron = match result.electron {
                Electron::HigherOrder(e) => e,
                Electron::Spinor(_) => {
                    unreachable!("higher-order transfer yields a higher-order state")
                }
            };
            emit(
                out.as_deref(),
                &StateSpec::from_state(&electron).to_json(),
                stdout,
            )
        }
        Command::Render { input, style, out } => {
            let (doc, _) = FieldDocument::parse_any(&read_text(&input)?)?;
            let style = match style {
                StyleArg::Arrows => GlyphStyle::Arrows,
                StyleArg::Ellipses => GlyphStyle::Ellipses,
            };
            let svg = render_svg(&doc, style)?;
            write_atomic(&out, svg.as_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("hosphere").chain(args.iter().copied()))
            .expect("arguments parse");
        let mut buf = Vec::new();
        run(cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("0, 2, 0").unwrap(), Vec3::Y);
        assert!(parse_axis("0,0,0").is_err());
        assert!(parse_axis("1,2").is_err());
        assert!(parse_axis("1,nan,0").is_err());
    }

    #[test]
    fn state_command() {
        let out = run_args(&["state", "--theta", "pi/2", "--phi", "0"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let vec: Vec<f64> = serde_json::from_value(v["vector"].clone()).unwrap();
        assert!((vec[0] - 1.0).abs() < 1e-15 && vec[2].abs() < 1e-15);
        assert!(matches!(
            run_args(&["state", "--theta", "3.2π", "--phi", "0"]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ring_command_reports_both_rings() {
        let out = run_args(&["ring", "--theta-lambda", "pi/2", "--l", "-1", "--m", "1"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["analytic"]["winding"], 2);
        assert_eq!(v["fitted"]["winding"], 2);
        assert!(v["max_discrepancy"].as_f64().unwrap() < 1e-9);
    }

    #[test]
    fn numeric_step_violation_is_numeric_error() {
        let err = run_args(&[
            "precess", "--axis", "0,1,0", "--omega", "1", "--t1", "10", "--method", "numeric",
            "--steps", "5",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}

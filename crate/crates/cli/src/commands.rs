use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use tunnel_dwell::dwell::DwellReport;
use tunnel_dwell::par::{self, Execution};
use tunnel_dwell::scattering::{BarrierSpec, Component, StationaryState};
use tunnel_dwell::units;
use tunnel_dwell::wavepacket::{
    expectation_trace, gaussian_spectrum, transmission_times, PacketSpec, SpectrumConfig, TraceConfig,
};

use crate::output::{num, write_json, Csv};
use crate::params::{finite, require, Params};
use crate::{presets, CliError};

#[derive(Args, Debug, Default)]
pub struct BarrierArgs {
    /// Barrier height in eV (negative for a well)
    #[arg(long = "V0", allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Left edge in nm
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Right edge in nm
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Effective mass in electron masses
    #[arg(long)]
    pub mass: Option<f64>,
}

impl BarrierArgs {
    fn fill(&mut self, p: &mut Params) -> Result<(), CliError> {
        p.fill(&mut self.v0, "V0")?;
        p.fill(&mut self.a, "a")?;
        p.fill(&mut self.b, "b")?;
        p.fill(&mut self.mass, "mass")
    }

    fn spec(&self) -> Result<BarrierSpec, CliError> {
        let v0 = finite(require(self.v0, "V0")?, "V0")?;
        let a = finite(require(self.a, "a")?, "a")?;
        let b = finite(require(self.b, "b")?, "b")?;
        let mass = finite(require(self.mass, "mass")?, "mass")?;
        Ok(BarrierSpec::new(v0, a, b, mass)?)
    }
}

#[derive(Args, Debug, Default)]
pub struct IoArgs {
    /// Read `key = value` defaults from this file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl IoArgs {
    fn params(&self, preset: Params) -> Result<Params, CliError> {
        match &self.config {
            Some(path) => Ok(preset.overlay(Params::load(path)?)),
            None => Ok(preset),
        }
    }
}

#[derive(Args, Debug, Default)]
pub struct DwellArgs {
    /// Energy in eV
    #[arg(long = "E", allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Serialize)]
struct DwellJson {
    #[serde(rename = "E_eV")]
    e: f64,
    #[serde(rename = "V0_eV")]
    v0: f64,
    d_nm: f64,
    mass_me: f64,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "R")]
    r: f64,
    tau_free_fs: f64,
    tau_tr_fs: f64,
    tau_ref_fs: f64,
    tau_buttiker_fs: f64,
    regime: &'static str,
    empty_subensemble_flag: bool,
}

pub fn dwell(mut args: DwellArgs) -> Result<(), CliError> {
    let mut p = args.io.params(Params::default())?;
    p.fill(&mut args.energy, "E")?;
    args.barrier.fill(&mut p)?;
    p.finish()?;
    let barrier = args.barrier.spec()?;
    let energy = finite(require(args.energy, "E")?, "E")?;
    let r = DwellReport::new(&barrier, energy)?;
    let doc = DwellJson {
        e: energy,
        v0: barrier.v0,
        d_nm: barrier.width(),
        mass_me: barrier.mass,
        t: r.t_coef,
        r: r.r_coef,
        tau_free_fs: r.tau_free,
        tau_tr_fs: r.tau_tr,
        tau_ref_fs: r.tau_ref,
        tau_buttiker_fs: r.tau_buttiker,
        regime: r.regime.as_str(),
        empty_subensemble_flag: r.empty_subensemble,
    };
    write_json(&doc, args.io.output.as_deref(), false)
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Energy,
    Width,
}

impl std::str::FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <SweepParam as ValueEnum>::from_str(s, false)
    }
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    /// Swept quantity: energy (E in eV) or width (d = b − a in nm)
    #[arg(long)]
    pub param: Option<SweepParam>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Fixed energy for width sweeps (eV)
    #[arg(long = "E", allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    /// Comma-separated subset of the CSV columns
    #[arg(long)]
    pub columns: Option<String>,
    /// Parameter set of figure 1..4
    #[arg(long)]
    pub figure: Option<u8>,
    #[command(flatten)]
    pub io: IoArgs,
}

pub const SWEEP_HEADER: [&str; 11] = [
    "param",
    "E_eV",
    "d_nm",
    "T",
    "R",
    "tau_free_fs",
    "tau_tr_fs",
    "tau_ref_fs",
    "tau_buttiker_fs",
    "ratio_tr_free",
    "ratio_buttiker_free",
];

pub fn sweep(mut args: SweepArgs) -> Result<(), CliError> {
    let mut p = args.io.params(presets::for_command(args.figure, "sweep")?)?;
    p.fill(&mut args.param, "param")?;
    p.fill(&mut args.from, "from")?;
    p.fill(&mut args.to, "to")?;
    p.fill(&mut args.steps, "steps")?;
    p.fill(&mut args.energy, "E")?;
    p.fill(&mut args.columns, "columns")?;
    let param = require(args.param, "param")?;
    args.barrier.fill(&mut p)?;
    p.finish()?;

    let from = finite(require(args.from, "from")?, "from")?;
    let to = finite(require(args.to, "to")?, "to")?;
    let steps = require(args.steps, "steps")?;
    if !(from < to) || steps < 2 {
        return Err(CliError::Usage(format!("sweep needs from < to and steps ≥ 2 (got {from}, {to}, {steps})")));
    }
    let values: Vec<f64> = (0..steps).map(|i| from + (to - from) * i as f64 / (steps - 1) as f64).collect();
    let points: Vec<(f64, BarrierSpec)> = match param {
        SweepParam::Energy => {
            if args.energy.is_some() {
                return Err(CliError::Usage("--E is swept; give it only for width sweeps".into()));
            }
            let barrier = args.barrier.spec()?;
            values.iter().map(|&e| (e, barrier)).collect()
        }
        SweepParam::Width => {
            if args.barrier.b.is_some() {
                return Err(CliError::Usage("--b is set by the width sweep (b = a + d)".into()));
            }
            let energy = finite(require(args.energy, "E")?, "E")?;
            let a = finite(require(args.barrier.a, "a")?, "a")?;
            let mut out = Vec::with_capacity(values.len());
            for &d in &values {
                args.barrier.b = Some(a + d);
                out.push((energy, args.barrier.spec()?));
            }
            args.barrier.b = None;
            out
        }
    };
    let reports = par::try_map_with(Execution::default(), &points, |(e, barrier)| DwellReport::new(barrier, *e))?;
    let mut csv = Csv::new(args.io.output.as_deref(), &SWEEP_HEADER, args.columns.as_deref())?;
    for ((value, (_, barrier)), r) in values.iter().zip(&points).zip(&reports) {
        csv.row(&[
            num(*value),
            num(r.energy),
            num(barrier.width()),
            num(r.t_coef),
            num(r.r_coef),
            num(r.tau_free),
            num(r.tau_tr),
            num(r.tau_ref),
            num(r.tau_buttiker),
            num(r.ratio_tr_free()),
            num(r.ratio_buttiker_free()),
        ])?;
    }
    csv.finish()
}

#[derive(Args, Debug, Default)]
pub struct WavefunctionArgs {
    /// Energy in eV
    #[arg(long = "E", allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    #[arg(long)]
    pub columns: Option<String>,
    #[command(flatten)]
    pub io: IoArgs,
}

pub const WAVEFUNCTION_HEADER: [&str; 10] = [
    "x_nm",
    "re_psi_tr",
    "im_psi_tr",
    "re_psi_ref",
    "im_psi_ref",
    "abs2_tr",
    "abs2_ref",
    "abs2_full",
    "flux_tr",
    "flux_ref",
];

pub fn wavefunction(mut args: WavefunctionArgs) -> Result<(), CliError> {
    let mut p = args.io.params(Params::default())?;
    p.fill(&mut args.energy, "E")?;
    args.barrier.fill(&mut p)?;
    p.fill(&mut args.samples, "samples")?;
    p.fill(&mut args.xmin, "xmin")?;
    p.fill(&mut args.xmax, "xmax")?;
    p.fill(&mut args.columns, "columns")?;
    p.finish()?;
    let barrier = args.barrier.spec()?;
    let energy = finite(require(args.energy, "E")?, "E")?;
    let n = require(args.samples, "samples")?;
    let lo = finite(require(args.xmin, "xmin")?, "xmin")?;
    let hi = finite(require(args.xmax, "xmax")?, "xmax")?;
    if n < 2 || !(lo < hi) {
        return Err(CliError::Usage("wavefunction needs --samples ≥ 2 and --xmin < --xmax".into()));
    }
    let st = StationaryState::new(&barrier, energy)?;
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut csv = Csv::new(args.io.output.as_deref(), &WAVEFUNCTION_HEADER, args.columns.as_deref())?;
    for &x in &xs {
        let tr = st.psi_tr(x);
        let rf = st.psi_ref(x);
        csv.row(&[
            num(x),
            num(tr.re),
            num(tr.im),
            num(rf.re),
            num(rf.im),
            num(tr.norm_sqr()),
            num(rf.norm_sqr()),
            num((tr + rf).norm_sqr()),
            num(st.probability_flux(Component::Transmitted, x)),
            num(st.probability_flux(Component::Reflected, x)),
        ])?;
    }
    csv.finish()
}

#[derive(Args, Debug, Default)]
pub struct PacketArgs {
    /// Initial packet centre (nm)
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Amplitude width l in exp(−(x−x0)²/4l²) (nm)
    #[arg(long)]
    pub halfwidth: Option<f64>,
    /// Mean kinetic energy (eV)
    #[arg(long = "E0", allow_negative_numbers = true)]
    pub e0: Option<f64>,
    #[command(flatten)]
    pub barrier: BarrierArgs,
    /// Last sampled time (fs)
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Sampling step (fs); default is 1 nm of flight at k0 + 3σ_k
    #[arg(long)]
    pub tstep: Option<f64>,
    /// tr, ref or full
    #[arg(long)]
    pub component: Option<Component>,
    /// Number of k modes
    #[arg(long)]
    pub modes: Option<usize>,
    /// Write the JSON summary here instead of stderr
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub columns: Option<String>,
    /// Parameter set of figure 5
    #[arg(long)]
    pub figure: Option<u8>,
    #[command(flatten)]
    pub io: IoArgs,
}

pub const PACKET_HEADER: [&str; 8] = ["t_fs", "x_mean_nm", "norm", "p_mean", "p_var", "K_eV", "V_eV", "H_eV"];

#[derive(Serialize)]
struct PacketSummary {
    component: &'static str,
    exact_time_fs: Option<f64>,
    asymptotic_time_fs: Option<f64>,
    tau_free_fs: Option<f64>,
    t_enter_fs: Option<f64>,
    t_exit_fs: Option<f64>,
    truncated_weight: f64,
    #[serde(rename = "max_H_drift")]
    max_h_drift: f64,
    asymptotic_norm: f64,
    max_mean_velocity_nm_fs: f64,
    barrier_velocity_scale_nm_fs: Option<f64>,
}

pub fn packet(mut args: PacketArgs) -> Result<(), CliError> {
    let mut p = args.io.params(presets::for_command(args.figure, "packet")?)?;
    p.fill(&mut args.x0, "x0")?;
    p.fill(&mut args.halfwidth, "halfwidth")?;
    p.fill(&mut args.e0, "E0")?;
    args.barrier.fill(&mut p)?;
    p.fill(&mut args.tmax, "tmax")?;
    p.fill(&mut args.tstep, "tstep")?;
    p.fill(&mut args.component, "component")?;
    p.fill(&mut args.modes, "modes")?;
    p.fill(&mut args.summary, "summary")?;
    p.fill(&mut args.columns, "columns")?;
    p.finish()?;

    let barrier = args.barrier.spec()?;
    let spec = PacketSpec::new(
        finite(require(args.x0, "x0")?, "x0")?,
        finite(require(args.halfwidth, "halfwidth")?, "halfwidth")?,
        finite(require(args.e0, "E0")?, "E0")?,
        barrier.mass,
    )?;
    let tmax = finite(require(args.tmax, "tmax")?, "tmax")?;
    if !(tmax > 0.0) {
        return Err(CliError::Usage(format!("--tmax must be positive (got {tmax})")));
    }
    let component = args.component.unwrap_or(Component::Transmitted);
    let config = SpectrumConfig { modes: args.modes.unwrap_or(SpectrumConfig::default().modes), ..SpectrumConfig::default() };
    let packet = gaussian_spectrum(&spec, &config)?;
    if packet.warning {
        eprintln!("warning: spectral weight {:e} lies outside the k grid", packet.truncated_weight);
    }
    let mut trace_config = TraceConfig::auto(&spec, &barrier, tmax);
    if let Some(dt) = args.tstep {
        trace_config.t_step = finite(dt, "tstep")?;
    }
    let trace = expectation_trace(component, &packet, &barrier, &trace_config)?;

    let mut csv = Csv::new(args.io.output.as_deref(), &PACKET_HEADER, args.columns.as_deref())?;
    for s in &trace.samples {
        csv.row(&[
            num(s.t),
            num(s.x_mean),
            num(s.norm),
            num(s.p_mean),
            num(s.p_var),
            num(s.k_energy),
            num(s.v_energy),
            num(s.h_energy),
        ])?;
    }
    csv.finish()?;

    let times = match component {
        Component::Transmitted => Some(transmission_times(&trace)?),
        _ => None,
    };
    let max_velocity = (0..trace.samples.len()).map(|i| trace.mean_velocity(i)).fold(f64::NEG_INFINITY, f64::max);
    let summary = PacketSummary {
        component: component.as_str(),
        exact_time_fs: times.map(|t| t.exact_time),
        asymptotic_time_fs: times.map(|t| t.asymptotic_time),
        tau_free_fs: times.map(|t| t.tau_free_ref),
        t_enter_fs: times.map(|t| t.t_enter),
        t_exit_fs: times.map(|t| t.t_exit),
        truncated_weight: packet.truncated_weight,
        max_h_drift: trace.max_h_drift(),
        asymptotic_norm: trace.asymptotic_norm,
        max_mean_velocity_nm_fs: max_velocity,
        barrier_velocity_scale_nm_fs: (barrier.v0 > 0.0).then(|| units::velocity(barrier.mass, barrier.kappa0())),
    };
    write_json(&summary, args.summary.as_deref(), true)
}

//! Control protocols `s(t)`, `g(t)` and annealer energy scales.
//!
//! The register Hamiltonian at time `t` (in GHz, `H/h`) is
//!
//! ```text
//! H = −bx Σ σˣ + bz Σ σᶻ − jz Σ α_ij σᶻ_i σᶻ_j
//! bx = A(s)/2,   bz = (B(s)/2)·g·h̄,   jz = (B(s)/2)·J
//! ```
//!
//! Positive `h̄` favours `σᶻ = −1`, which is the computational `|0⟩` state, and
//! positive `J` is ferromagnetic.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::fingerprint;

/// Shortest segment accepted in a custom schedule, in microseconds.
pub const MIN_SEGMENT_US: f64 = 0.01;

const DOMAIN_EPS: f64 = 1e-9;

/// Linear interpolation between `(x, y)` breakpoints with strictly
/// increasing `x`. Evaluation outside `[x_first, x_last]` is an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("piecewise-linear curve needs at least two breakpoints"));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::invalid("breakpoints must be finite"));
        }
        if let Some(w) = points.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid(format!(
                "breakpoint abscissae must strictly increase ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn start(&self) -> f64 {
        self.points[0].0
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (start, end) = (self.start(), self.end());
        if !(x >= start - DOMAIN_EPS && x <= end + DOMAIN_EPS) {
            return Err(Error::OutOfRange { t: x, start, end });
        }
        let x = x.clamp(start, end);
        // First breakpoint with abscissa >= x.
        let hi = self.points.partition_point(|p| p.0 < x);
        if hi == 0 {
            return Ok(self.points[0].1);
        }
        let (x0, y0) = self.points[hi - 1];
        let (x1, y1) = self.points[hi];
        if x == x1 {
            return Ok(y1);
        }
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    pub fn min_value(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    }

    fn is_monotone(&self, nondecreasing: bool) -> bool {
        self.points.windows(2).all(|w| {
            if nondecreasing {
                w[1].1 >= w[0].1
            } else {
                w[1].1 <= w[0].1
            }
        })
    }
}

impl TryFrom<Vec<(f64, f64)>> for PiecewiseLinear {
    type Error = Error;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        PiecewiseLinear::new(points)
    }
}

impl From<PiecewiseLinear> for Vec<(f64, f64)> {
    fn from(p: PiecewiseLinear) -> Self {
        p.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleVariant {
    Original,
    Quench,
    Custom,
}

/// One erasure cycle: annealing parameter `s(t)` and field envelope `g(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct ProtocolSchedule {
    s_of_t: PiecewiseLinear,
    g_of_t: PiecewiseLinear,
    s_bar: f64,
    h_bar: f64,
    j_coupling: f64,
    variant: ScheduleVariant,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleRepr {
    variant: ScheduleVariant,
    s_bar: f64,
    h_bar: f64,
    j_coupling: f64,
    duration_us: f64,
    s_of_t: PiecewiseLinear,
    g_of_t: PiecewiseLinear,
}

impl TryFrom<ScheduleRepr> for ProtocolSchedule {
    type Error = Error;

    fn try_from(r: ScheduleRepr) -> Result<Self> {
        let sched = ProtocolSchedule::custom(r.s_of_t, r.g_of_t, r.s_bar, r.h_bar, r.j_coupling)?;
        if (sched.duration() - r.duration_us).abs() > DOMAIN_EPS {
            return Err(Error::invalid(format!(
                "duration_us {} disagrees with breakpoints ending at {}",
                r.duration_us,
                sched.duration()
            )));
        }
        Ok(ProtocolSchedule { variant: r.variant, ..sched })
    }
}

impl From<ProtocolSchedule> for ScheduleRepr {
    fn from(s: ProtocolSchedule) -> Self {
        ScheduleRepr {
            variant: s.variant,
            s_bar: s.s_bar,
            h_bar: s.h_bar,
            j_coupling: s.j_coupling,
            duration_us: s.duration(),
            s_of_t: s.s_of_t,
            g_of_t: s.g_of_t,
        }
    }
}

fn check_protocol_params(s_bar: f64, h_bar: f64, j: f64) -> Result<()> {
    if !(s_bar > 0.0 && s_bar <= 1.0) {
        return Err(Error::invalid(format!("s_bar must lie in (0, 1], got {s_bar}")));
    }
    if !(h_bar >= 0.0 && h_bar.is_finite()) {
        return Err(Error::invalid(format!("h_bar must be finite and >= 0, got {h_bar}")));
    }
    if !j.is_finite() {
        return Err(Error::invalid("j_coupling must be finite"));
    }
    Ok(())
}

/// `s` ramp down over [0,10] μs, hold over [10,20], ramp back over [20,30];
/// `g` off, then up, then down.
pub fn make_original_protocol(s_bar: f64, h_bar: f64, j: f64) -> Result<ProtocolSchedule> {
    check_protocol_params(s_bar, h_bar, j)?;
    let s = PiecewiseLinear::new(vec![(0.0, 1.0), (10.0, s_bar), (20.0, s_bar), (30.0, 1.0)])?;
    let g = PiecewiseLinear::new(vec![(0.0, 0.0), (10.0, 0.0), (20.0, 1.0), (30.0, 0.0)])?;
    Ok(ProtocolSchedule { s_of_t: s, g_of_t: g, s_bar, h_bar, j_coupling: j, variant: ScheduleVariant::Original })
}

/// Like [`make_original_protocol`] but the field is held at full strength
/// until 30 μs and then dropped to zero within the final 0.01 μs.
pub fn make_quench_protocol(s_bar: f64, h_bar: f64, j: f64) -> Result<ProtocolSchedule> {
    check_protocol_params(s_bar, h_bar, j)?;
    let s = PiecewiseLinear::new(vec![
        (0.0, 1.0),
        (10.0, s_bar),
        (20.0, s_bar),
        (30.0, 1.0),
        (30.01, 1.0),
    ])?;
    let g = PiecewiseLinear::new(vec![
        (0.0, 0.0),
        (10.0, 0.0),
        (20.0, 1.0),
        (30.0, 1.0),
        (30.01, 0.0),
    ])?;
    Ok(ProtocolSchedule { s_of_t: s, g_of_t: g, s_bar, h_bar, j_coupling: j, variant: ScheduleVariant::Quench })
}

impl ProtocolSchedule {
    /// Arbitrary breakpoint schedule. Both curves must start at 0 and share the
    /// same end time; `s(0) = s(end) = 1`, `g(0) = 0`, `s ∈ [s_bar, 1]`,
    /// `g ∈ [0, 1]`, and no segment may be shorter than 0.01 μs.
    pub fn custom(
        s_of_t: PiecewiseLinear,
        g_of_t: PiecewiseLinear,
        s_bar: f64,
        h_bar: f64,
        j: f64,
    ) -> Result<Self> {
        check_protocol_params(s_bar, h_bar, j)?;
        for (name, curve) in [("s", &s_of_t), ("g", &g_of_t)] {
            if curve.start().abs() > DOMAIN_EPS {
                return Err(Error::invalid(format!("{name}(t) must start at t = 0")));
            }
            if let Some(w) = curve.points().windows(2).find(|w| w[1].0 - w[0].0 < MIN_SEGMENT_US - DOMAIN_EPS) {
                return Err(Error::invalid(format!(
                    "{name}(t) segment [{}, {}] is shorter than {MIN_SEGMENT_US} us",
                    w[0].0, w[1].0
                )));
            }
        }
        if (s_of_t.end() - g_of_t.end()).abs() > DOMAIN_EPS {
            return Err(Error::invalid("s(t) and g(t) must end at the same time"));
        }
        let first = |c: &PiecewiseLinear| c.points()[0].1;
        let last = |c: &PiecewiseLinear| c.points()[c.points().len() - 1].1;
        if (first(&s_of_t) - 1.0).abs() > DOMAIN_EPS || (last(&s_of_t) - 1.0).abs() > DOMAIN_EPS {
            return Err(Error::invalid("s(t) must start and end at 1"));
        }
        if first(&g_of_t).abs() > DOMAIN_EPS {
            return Err(Error::invalid("g(0) must be 0"));
        }
        if s_of_t.min_value() < s_bar - DOMAIN_EPS || s_of_t.max_value() > 1.0 + DOMAIN_EPS {
            return Err(Error::invalid("s(t) must stay inside [s_bar, 1]"));
        }
        if g_of_t.min_value() < -DOMAIN_EPS || g_of_t.max_value() > 1.0 + DOMAIN_EPS {
            return Err(Error::invalid("g(t) must stay inside [0, 1]"));
        }
        Ok(ProtocolSchedule { s_of_t, g_of_t, s_bar, h_bar, j_coupling: j, variant: ScheduleVariant::Custom })
    }

    pub fn duration(&self) -> f64 {
        self.s_of_t.end()
    }

    pub fn s_bar(&self) -> f64 {
        self.s_bar
    }

    pub fn h_bar(&self) -> f64 {
        self.h_bar
    }

    pub fn j_coupling(&self) -> f64 {
        self.j_coupling
    }

    pub fn variant(&self) -> ScheduleVariant {
        self.variant
    }

    pub fn s_curve(&self) -> &PiecewiseLinear {
        &self.s_of_t
    }

    pub fn g_curve(&self) -> &PiecewiseLinear {
        &self.g_of_t
    }

    /// `(s(t), g(t))`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        Ok((self.s_of_t.eval(t)?, self.g_of_t.eval(t)?))
    }

    /// Same protocol with different knob values. Custom schedules keep their
    /// breakpoints, so only `h_bar` and `j` can change for them.
    pub fn with_params(&self, s_bar: f64, h_bar: f64, j: f64) -> Result<Self> {
        match self.variant {
            ScheduleVariant::Original => make_original_protocol(s_bar, h_bar, j),
            ScheduleVariant::Quench => make_quench_protocol(s_bar, h_bar, j),
            ScheduleVariant::Custom => {
                if (s_bar - self.s_bar).abs() > 0.0 {
                    return Err(Error::invalid("s_bar of a custom schedule is fixed by its breakpoints"));
                }
                let mut out = ProtocolSchedule::custom(self.s_of_t.clone(), self.g_of_t.clone(), s_bar, h_bar, j)?;
                out.variant = ScheduleVariant::Custom;
                Ok(out)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn fingerprint(&self) -> String {
        fingerprint(serde_json::to_string(self).expect("schedule serializes").as_bytes())
    }
}

/// Annealer energy curves `A(s)` and `B(s)` in GHz over `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyScales {
    a_of_s: PiecewiseLinear,
    b_of_s: PiecewiseLinear,
    /// `A(s) = 0` for `s >= a_cutoff`.
    a_cutoff: Option<f64>,
    /// `B(s)` never drops below this value.
    b_floor: Option<f64>,
}

/// `A(s) = a_max·(1−s)`, `B(s) = b_max·s`.
pub fn linear_energy_scales(a_max: f64, b_max: f64) -> Result<EnergyScales> {
    if !(a_max >= 0.0 && a_max.is_finite()) {
        return Err(Error::invalid(format!("a_max must be finite and >= 0, got {a_max}")));
    }
    if !(b_max > 0.0 && b_max.is_finite()) {
        return Err(Error::invalid(format!("b_max must be finite and > 0, got {b_max}")));
    }
    EnergyScales::tabulated(
        PiecewiseLinear::new(vec![(0.0, a_max), (1.0, 0.0)])?,
        PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, b_max)])?,
    )
}

impl EnergyScales {
    pub const DEFAULT_A_MAX_GHZ: f64 = 6.0;
    pub const DEFAULT_B_MAX_GHZ: f64 = 12.0;
    pub const DEFAULT_A_CUTOFF: f64 = 0.5;

    /// Linear surrogate (6 GHz, 12 GHz) with the transverse field switched off
    /// for `s >= 0.5`.
    pub fn surrogate() -> Self {
        linear_energy_scales(Self::DEFAULT_A_MAX_GHZ, Self::DEFAULT_B_MAX_GHZ)
            .expect("default scales are valid")
            .with_transverse_cutoff(Self::DEFAULT_A_CUTOFF)
            .expect("default cutoff is valid")
    }

    /// Tabulated curves over `s ∈ [0, 1]`. `A` must be nonincreasing and vanish
    /// at `s = 1`; `B` must be nondecreasing and positive at `s = 1`.
    pub fn tabulated(a_of_s: PiecewiseLinear, b_of_s: PiecewiseLinear) -> Result<Self> {
        for (name, c) in [("A", &a_of_s), ("B", &b_of_s)] {
            if c.start().abs() > DOMAIN_EPS || (c.end() - 1.0).abs() > DOMAIN_EPS {
                return Err(Error::invalid(format!("{name}(s) must span s in [0, 1]")));
            }
        }
        if !a_of_s.is_monotone(false) {
            return Err(Error::invalid("A(s) must be nonincreasing"));
        }
        if a_of_s.eval(1.0)?.abs() > 1e-9 {
            return Err(Error::invalid("A(1) must be 0"));
        }
        if a_of_s.min_value() < 0.0 || b_of_s.min_value() < 0.0 {
            return Err(Error::invalid("energy scales must be nonnegative"));
        }
        if !b_of_s.is_monotone(true) {
            return Err(Error::invalid("B(s) must be nondecreasing"));
        }
        if b_of_s.eval(1.0)? <= 0.0 {
            return Err(Error::invalid("B(1) must be positive"));
        }
        Ok(EnergyScales { a_of_s, b_of_s, a_cutoff: None, b_floor: None })
    }

    pub fn with_transverse_cutoff(mut self, cutoff: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&cutoff) {
            return Err(Error::invalid(format!("transverse cutoff must lie in [0, 1], got {cutoff}")));
        }
        self.a_cutoff = Some(cutoff);
        Ok(self)
    }

    /// Emulates hardware that cannot take the coupling energy below `floor`.
    pub fn with_b_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor >= 0.0 && floor.is_finite()) {
            return Err(Error::invalid(format!("B floor must be finite and >= 0, got {floor}")));
        }
        self.b_floor = Some(floor);
        Ok(self)
    }

    pub fn a_cutoff(&self) -> Option<f64> {
        self.a_cutoff
    }

    pub fn b_floor(&self) -> Option<f64> {
        self.b_floor
    }

    pub fn a(&self, s: f64) -> Result<f64> {
        let a = self.a_of_s.eval(s)?;
        Ok(match self.a_cutoff {
            Some(c) if s >= c => 0.0,
            _ => a,
        })
    }

    pub fn b(&self, s: f64) -> Result<f64> {
        let b = self.b_of_s.eval(s)?;
        Ok(match self.b_floor {
            Some(f) => b.max(f),
            None => b,
        })
    }

    /// CSV with header `s,A_GHz,B_GHz` and strictly increasing `s` from 0 to 1.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty energy-scale CSV"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["s", "A_GHz", "B_GHz"] {
            return Err(Error::parse(1, format!("expected header `s,A_GHz,B_GHz`, got `{header}`")));
        }
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (idx, line) in lines {
            let vals: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            if vals.len() != 3 {
                return Err(Error::parse(idx + 1, "expected three columns"));
            }
            a.push((vals[0], vals[1]));
            b.push((vals[0], vals[2]));
        }
        EnergyScales::tabulated(PiecewiseLinear::new(a)?, PiecewiseLinear::new(b)?)
    }

    /// Tabulates the raw curves (cutoff and floor are not baked in).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,A_GHz,B_GHz\n");
        let mut xs: Vec<f64> = self
            .a_of_s
            .points()
            .iter()
            .chain(self.b_of_s.points())
            .map(|p| p.0)
            .collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        for s in xs {
            let a = self.a_of_s.eval(s).expect("in domain");
            let b = self.b_of_s.eval(s).expect("in domain");
            let _ = writeln!(out, "{s},{a},{b}");
        }
        out
    }
}

impl Default for EnergyScales {
    fn default() -> Self {
        EnergyScales::surrogate()
    }
}

/// Instantaneous Hamiltonian coefficients in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HamiltonianParams {
    /// Transverse field, `A(s)/2`.
    pub bx: f64,
    /// Longitudinal field, `(B(s)/2)·g·h̄`; positive favours `|0⟩`.
    pub bz: f64,
    /// Coupling, `(B(s)/2)·J`; positive is ferromagnetic.
    pub jz: f64,
}

impl HamiltonianParams {
    pub fn new(bx: f64, bz: f64, jz: f64) -> Self {
        HamiltonianParams { bx, bz, jz }
    }

    /// Params with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        HamiltonianParams { bx: self.bx * c, bz: self.bz * c, jz: self.jz * c }
    }
}

pub fn instantaneous_params(
    sched: &ProtocolSchedule,
    scales: &EnergyScales,
    t: f64,
) -> Result<HamiltonianParams> {
    let (s, g) = sched.eval(t)?;
    let half_b = scales.b(s)? / 2.0;
    Ok(HamiltonianParams {
        bx: scales.a(s)? / 2.0,
        bz: half_b * g * sched.h_bar,
        jz: half_b * sched.j_coupling,
    })
}

/// Transverse-field tolerance below which a protocol counts as classical.
pub const CLASSICAL_TOLERANCE_GHZ: f64 = 1e-12;

/// True when the transverse field stays zero for the whole protocol.
///
/// `A` is nonincreasing and `s(t) ∈ [s_bar, 1]`, so the largest transverse
/// field over the cycle is `A(s_min)/2` where `s_min` is the schedule minimum.
pub fn classical_flag(sched: &ProtocolSchedule, scales: &EnergyScales) -> bool {
    let s_min = sched.s_of_t.min_value().clamp(0.0, 1.0);
    scales.a(s_min).map(|a| a.abs() <= CLASSICAL_TOLERANCE_GHZ).unwrap_or(false)
}

/// Largest transverse field `A(s)/2` reached anywhere on the schedule.
pub fn max_transverse_field(sched: &ProtocolSchedule, scales: &EnergyScales) -> f64 {
    let s_min = sched.s_of_t.min_value().clamp(0.0, 1.0);
    scales.a(s_min).unwrap_or(0.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn original_protocol_breakpoints() {
        let p = make_original_protocol(0.4, 1.0, 0.12).unwrap();
        assert_eq!(p.duration(), 30.0);
        assert_eq!(p.eval(0.0).unwrap(), (1.0, 0.0));
        let (s, g) = p.eval(15.0).unwrap();
        assert!(close(s, 0.4) && close(g, 0.5));
        let (s, g) = p.eval(30.0).unwrap();
        assert!(close(s, 1.0) && close(g, 0.0));
        let (s, _) = p.eval(5.0).unwrap();
        assert!(close(s, 1.0 - 0.6 * 5.0 / 10.0));
        let (s, g) = p.eval(25.0).unwrap();
        assert!(close(s, 1.0 - 0.6 * 5.0 / 10.0) && close(g, 0.5));
    }

    #[test]
    fn quench_protocol_breakpoints() {
        let p = make_quench_protocol(0.4, 1.0, 0.12).unwrap();
        assert!(close(p.duration(), 30.01));
        assert!(close(p.eval(25.0).unwrap().1, 1.0));
        assert!((p.eval(30.005).unwrap().1 - 0.5).abs() < 1e-9);
        assert!(close(p.eval(30.01).unwrap().1, 0.0));
        assert!(close(p.eval(30.005).unwrap().0, 1.0));
    }

    #[test]
    fn protocol_domain_errors() {
        assert!(make_original_protocol(1.5, 1.0, 0.1).is_err());
        assert!(make_original_protocol(0.0, 1.0, 0.1).is_err());
        assert!(make_quench_protocol(0.5, -1.0, 0.1).is_err());
        assert!(make_original_protocol(1.0, 0.0, 0.0).is_ok());
        let p = make_original_protocol(0.4, 1.0, 0.12).unwrap();
        assert!(matches!(p.eval(30.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(p.eval(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn linear_scales_values() {
        let sc = linear_energy_scales(6.0, 12.0).unwrap();
        assert!(close(sc.a(1.0).unwrap(), 0.0));
        assert!(close(sc.a(0.4).unwrap(), 3.6));
        assert!(close(sc.b(0.6).unwrap(), 7.2));
        assert!(linear_energy_scales(6.0, 0.0).is_err());
        assert!(linear_energy_scales(-1.0, 1.0).is_err());
    }

    #[test]
    fn params_substitution() {
        let p = make_original_protocol(0.4, 1.0, 0.12).unwrap();
        let sc = linear_energy_scales(6.0, 12.0).unwrap();
        let hp = instantaneous_params(&p, &sc, 15.0).unwrap();
        assert!(close(hp.bx, 1.8));
        assert!(close(hp.bz, 1.2));
        assert!(close(hp.jz, 0.288));
        let hp = instantaneous_params(&p, &sc, 5.0).unwrap();
        assert_eq!(hp.bz, 0.0);
        let q = make_original_protocol(0.6, 1.0, 0.12).unwrap();
        assert_eq!(instantaneous_params(&q, &sc, 0.0).unwrap().bx, 0.0);
        assert!(instantaneous_params(&p, &sc, 31.0).is_err());
    }

    #[test]
    fn cycle_closes_with_pure_coupling() {
        let sc = EnergyScales::surrogate();
        for s_bar in [0.3, 0.4, 0.6, 1.0] {
            let p = make_original_protocol(s_bar, 0.7, 0.12).unwrap();
            for t in [0.0, p.duration()] {
                let hp = instantaneous_params(&p, &sc, t).unwrap();
                assert_eq!(hp.bx, 0.0);
                assert_eq!(hp.bz, 0.0);
                assert!(close(hp.jz, 6.0 * 0.12));
            }
        }
    }

    #[test]
    fn classical_flag_cases() {
        let sc = EnergyScales::surrogate();
        let flag = |s| classical_flag(&make_original_protocol(s, 1.0, 0.12).unwrap(), &sc);
        assert!(flag(0.6));
        assert!(!flag(0.4));
        assert!(flag(1.0));
        // Without the cutoff the surrogate has a transverse field at s = 0.6.
        let plain = linear_energy_scales(6.0, 12.0).unwrap();
        assert!(!classical_flag(&make_original_protocol(0.6, 1.0, 0.12).unwrap(), &plain));
        assert!(close(max_transverse_field(&make_original_protocol(0.4, 1.0, 0.0).unwrap(), &sc), 1.8));
    }

    #[test]
    fn custom_schedule_validation() {
        let s = PiecewiseLinear::new(vec![(0.0, 1.0), (1.0, 0.5), (2.0, 1.0)]).unwrap();
        let g = PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let c = ProtocolSchedule::custom(s.clone(), g.clone(), 0.5, 1.0, 0.1).unwrap();
        assert_eq!(c.variant(), ScheduleVariant::Custom);
        assert!(ProtocolSchedule::custom(s.clone(), g.clone(), 0.6, 1.0, 0.1).is_err());
        let short = PiecewiseLinear::new(vec![(0.0, 0.0), (0.005, 1.0), (2.0, 0.0)]).unwrap();
        assert!(ProtocolSchedule::custom(s.clone(), short, 0.5, 1.0, 0.1).is_err());
        let bad_g = PiecewiseLinear::new(vec![(0.0, 0.2), (2.0, 0.0)]).unwrap();
        assert!(ProtocolSchedule::custom(s, bad_g, 0.5, 1.0, 0.1).is_err());
        assert!(PiecewiseLinear::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
    }

    #[test]
    fn schedule_json_round_trip() {
        for p in [
            make_original_protocol(0.4, 1.0, 0.12).unwrap(),
            make_quench_protocol(0.6, 0.25, 0.08).unwrap(),
        ] {
            let back = ProtocolSchedule::from_json(&p.to_json()).unwrap();
            assert_eq!(back, p);
            assert_eq!(back.fingerprint(), p.fingerprint());
        }
        assert!(ProtocolSchedule::from_json(r#"{"variant":"original"}"#).is_err());
    }

    #[test]
    fn energy_scale_csv() {
        let csv = "s,A_GHz,B_GHz\n0,6,0\n0.5,2,5\n1,0,12\n";
        let sc = EnergyScales::from_csv(csv).unwrap();
        assert!(close(sc.a(0.25).unwrap(), 4.0));
        assert!(close(sc.b(0.75).unwrap(), 8.5));
        assert_eq!(EnergyScales::from_csv(&sc.to_csv()).unwrap(), sc);
        assert!(EnergyScales::from_csv("s,A,B\n0,1,1\n1,0,1\n").is_err());
        assert!(EnergyScales::from_csv("s,A_GHz,B_GHz\n0,6,0\n1,1,12\n").is_err());
        assert!(EnergyScales::from_csv("s,A_GHz,B_GHz\n0,6,5\n1,0,1\n").is_err());
        assert!(EnergyScales::from_csv("s,A_GHz,B_GHz\n0,6,0\n0.5,2,5\n0.5,1,6\n1,0,12\n").is_err());
    }

    #[test]
    fn b_floor_clamps() {
        let sc = linear_energy_scales(6.0, 12.0).unwrap().with_b_floor(3.0).unwrap();
        assert!(close(sc.b(0.1).unwrap(), 3.0));
        assert!(close(sc.b(0.5).unwrap(), 6.0));
    }
}

//! Seeded scenario runner behind the `qvernam` binary.
//!
//! A scenario is a TOML table naming a protocol, its parameters, a trial
//! count and a seed. Trial `i` draws from `SimRng::stream(seed, i)`, so the
//! summary is the same for any thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use toml::{Table, Value};

use crate::baselines::{
    bb84_round, classical_otp, ebit_key_distribution, edc_send, superdense, teleport, Bb84Eve,
    InterceptPositions,
};
use crate::channels::{PauliChannel, Preset};
use crate::dense::{default_cap, DenseState};
use crate::density::DensityMatrix;
use crate::error::{Result, SimError};
use crate::pauli::{BellLabel, PauliOperator};
use crate::pqc::{
    acceptance_trial, authenticate_message, key_average, pqc_decrypt, pqc_encrypt,
    ClassicalPauliKey, Tampering, TestQubitLayout,
};
use crate::qvc::{recycle_round, QvcFrame, RecycleParams, RoundOutcome, Stage};
use crate::resources::{compare_methods, simulate_recyclable_fraction, ResourceComparison, Verdict};
use crate::rng::SimRng;
use crate::secret_sharing::{
    fivebit_decode, fivebit_encode, fivebit_initial, fivebit_locc_syndrome,
    fivebit_message_correction, qutrit_decode_and_correct, qutrit_encode, qutrit_error_table,
    qutrit_initial,
};
use crate::stats::{bernoulli_sigma, chi_square_uniform, wilson_interval};
use crate::transcript::Transcript;

/// Standard deviations allowed on statistical bound checks.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    QvcRecycle,
    Pqc,
    Mpqc,
    Authenticate,
    Fivebit,
    Qutrit,
    Otp,
    Edc,
    Teleport,
    Superdense,
    Bb84,
    EbitKd,
    ResourceCompare,
}

impl Protocol {
    pub const ALL: [Protocol; 13] = [
        Protocol::QvcRecycle,
        Protocol::Pqc,
        Protocol::Mpqc,
        Protocol::Authenticate,
        Protocol::Fivebit,
        Protocol::Qutrit,
        Protocol::Otp,
        Protocol::Edc,
        Protocol::Teleport,
        Protocol::Superdense,
        Protocol::Bb84,
        Protocol::EbitKd,
        Protocol::ResourceCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::QvcRecycle => "qvc-recycle",
            Protocol::Pqc => "pqc",
            Protocol::Mpqc => "mpqc",
            Protocol::Authenticate => "authenticate",
            Protocol::Fivebit => "fivebit",
            Protocol::Qutrit => "qutrit",
            Protocol::Otp => "otp",
            Protocol::Edc => "edc",
            Protocol::Teleport => "teleport",
            Protocol::Superdense => "superdense",
            Protocol::Bb84 => "bb84",
            Protocol::EbitKd => "ebit-kd",
            Protocol::ResourceCompare => "resource-compare",
        }
    }

    fn needs_n(self) -> bool {
        matches!(
            self,
            Protocol::QvcRecycle
                | Protocol::Pqc
                | Protocol::Mpqc
                | Protocol::Authenticate
                | Protocol::Otp
                | Protocol::Edc
                | Protocol::Bb84
                | Protocol::EbitKd
        )
    }

    fn needs_r(self) -> bool {
        matches!(
            self,
            Protocol::QvcRecycle | Protocol::Mpqc | Protocol::Authenticate | Protocol::Edc
        )
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Protocol::ALL.iter().map(|p| p.name()).collect();
                format!("unknown protocol {s:?}, expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected json or csv")),
        }
    }
}

/// Channel as written in a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    /// The same `(I, X, Z, XZ)` distribution on every qubit.
    Product([f64; 4]),
    /// Explicit operators, e.g. `XI:0.1,II:0.9`.
    Ops(Vec<(PauliOperator, f64)>),
}

impl ChannelSpec {
    pub fn noiseless() -> Self {
        ChannelSpec::Product(Preset::Noiseless.per_qubit())
    }

    /// Preset name, four comma-separated probabilities, or `OP:w,...`.
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Ok(p) = s.parse::<Preset>() {
            return Ok(ChannelSpec::Product(p.per_qubit()));
        }
        if s.contains(':') {
            let mut ops = Vec::new();
            for item in s.split(',') {
                let (op, w) = item
                    .split_once(':')
                    .ok_or_else(|| format!("expected OP:weight, got {item:?}"))?;
                let op = PauliOperator::parse_qubits(op.trim()).map_err(|e| e.to_string())?;
                let w: f64 = w.trim().parse().map_err(|_| format!("bad weight {w:?}"))?;
                ops.push((op, w));
            }
            let len = ops[0].0.len();
            if ops.iter().any(|(o, _)| o.len() != len) {
                return Err("operators act on different numbers of qubits".into());
            }
            let ch = PauliChannel::explicit(len, ops.clone()).map_err(|e| e.to_string())?;
            return Ok(ChannelSpec::Ops(ch.entries()));
        }
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() == 4 {
            let mut p = [0.0; 4];
            for (slot, t) in p.iter_mut().zip(&parts) {
                *slot = t.trim().parse().map_err(|_| format!("bad probability {t:?}"))?;
            }
            PauliChannel::product(1, p).map_err(|e| e.to_string())?;
            return Ok(ChannelSpec::Product(p));
        }
        let presets: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
        Err(format!(
            "unknown channel {s:?}: use a preset ({}), four probabilities or OP:weight pairs",
            presets.join(", ")
        ))
    }

    /// Number of qubits for explicit channels.
    pub fn width(&self) -> Option<usize> {
        match self {
            ChannelSpec::Product(_) => None,
            ChannelSpec::Ops(e) => Some(e[0].0.len()),
        }
    }

    pub fn is_noiseless(&self) -> bool {
        match self {
            ChannelSpec::Product(p) => p[0] == 1.0,
            ChannelSpec::Ops(e) => e.iter().all(|(o, w)| o.is_identity() || *w == 0.0),
        }
    }

    /// Channel on `n` qubits; product channels adapt to any width.
    pub fn build(&self, n: usize) -> Result<PauliChannel> {
        match self {
            ChannelSpec::Product(p) => PauliChannel::product(n, *p),
            ChannelSpec::Ops(e) => PauliChannel::explicit(n, e.clone()),
        }
    }

    /// Mean probability that a syndrome bit is set.
    fn flag_weight(&self) -> f64 {
        match self {
            ChannelSpec::Product(p) => (p[1] + p[2] + 2.0 * p[3]) / 2.0,
            ChannelSpec::Ops(e) => {
                let n = e[0].0.len();
                let bits: f64 = e
                    .iter()
                    .map(|(o, w)| {
                        let set = (0..n)
                            .map(|q| {
                                let (x, z) = o.letter(q).bits();
                                x as usize + z as usize
                            })
                            .sum::<usize>();
                        w * set as f64
                    })
                    .sum();
                bits / (2 * n) as f64
            }
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::Product(p) => match Preset::ALL.into_iter().find(|s| s.per_qubit() == *p) {
                Some(s) => f.write_str(s.name()),
                None => write!(f, "{},{},{},{}", p[0], p[1], p[2], p[3]),
            },
            ChannelSpec::Ops(e) => {
                let items: Vec<String> = e.iter().map(|(o, w)| format!("{o}:{w}")).collect();
                f.write_str(&items.join(","))
            }
        }
    }
}

impl Serialize for ChannelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioConfig {
    pub protocol: Protocol,
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub r: usize,
    pub channel: ChannelSpec,
    pub delta: f64,
    pub eps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<usize>,
    /// Intercepted positions for `edc`, intercept probability for `bb84`.
    pub intercept: f64,
    pub test_fraction: f64,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub out: Option<String>,
    #[serde(skip)]
    pub threads: usize,
}

/// One problem with a scenario, tied to the field at fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

const KNOWN_KEYS: [&str; 15] = [
    "protocol",
    "seed",
    "trials",
    "n",
    "r",
    "channel",
    "delta",
    "eps",
    "r2",
    "intercept",
    "test_fraction",
    "format",
    "out",
    "threads",
    "alpha",
];

/// Parse and validate scenario text.
pub fn validate_config(raw: &str) -> std::result::Result<ScenarioConfig, Vec<Diagnostic>> {
    match raw.parse::<Table>() {
        Ok(t) => validate_table(&t),
        Err(e) => Err(vec![Diagnostic::new("config", format!("not valid TOML: {}", e.message()))]),
    }
}

struct Reader<'a> {
    table: &'a Table,
    diags: Vec<Diagnostic>,
}

impl Reader<'_> {
    fn int(&mut self, key: &str) -> Option<i64> {
        match self.table.get(key)? {
            Value::Integer(i) => Some(*i),
            other => {
                self.diags.push(Diagnostic::new(key, format!("expected an integer, got {other}")));
                None
            }
        }
    }

    fn count(&mut self, key: &str, min: i64) -> Option<usize> {
        let v = self.int(key)?;
        if v < min {
            self.diags.push(Diagnostic::new(key, format!("must be at least {min}, got {v}")));
            return None;
        }
        Some(v as usize)
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        match self.table.get(key)? {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            other => {
                self.diags.push(Diagnostic::new(key, format!("expected a number, got {other}")));
                None
            }
        }
    }

    fn string(&mut self, key: &str) -> Option<String> {
        match self.table.get(key)? {
            Value::String(s) => Some(s.clone()),
            other => {
                self.diags.push(Diagnostic::new(key, format!("expected a string, got {other}")));
                None
            }
        }
    }

    fn channel(&mut self) -> Option<ChannelSpec> {
        let v = match self.table.get("channel") {
            None => return Some(ChannelSpec::noiseless()),
            Some(v) => v,
        };
        let parsed = match v {
            Value::String(s) => ChannelSpec::parse(s),
            Value::Table(t) => channel_table(t),
            other => Err(format!("expected a string or table, got {other}")),
        };
        parsed.map_err(|e| self.diags.push(Diagnostic::new("channel", e))).ok()
    }
}

/// `[channel]` with an optional `preset` and per-letter overrides
/// `pi`, `px`, `pz`, `pxz`, or an `ops` string.
fn channel_table(t: &Table) -> std::result::Result<ChannelSpec, String> {
    for k in t.keys() {
        if !["preset", "pi", "px", "pz", "pxz", "ops"].contains(&k.as_str()) {
            return Err(format!("unknown key {k:?} in channel table"));
        }
    }
    if let Some(ops) = t.get("ops") {
        if t.len() > 1 {
            return Err("ops cannot be combined with preset or overrides".into());
        }
        return match ops {
            Value::String(s) => ChannelSpec::parse(s),
            _ => Err("ops must be a string".into()),
        };
    }
    let mut p = match t.get("preset") {
        None => Preset::Noiseless.per_qubit(),
        Some(Value::String(s)) => s.parse::<Preset>().map_err(|e| e.to_string())?.per_qubit(),
        Some(_) => return Err("preset must be a string".into()),
    };
    for (i, k) in ["pi", "px", "pz", "pxz"].into_iter().enumerate() {
        match t.get(k) {
            None => {}
            Some(Value::Float(x)) => p[i] = *x,
            Some(Value::Integer(x)) => p[i] = *x as f64,
            Some(_) => return Err(format!("{k} must be a number")),
        }
    }
    PauliChannel::product(1, p).map_err(|e| format!("{e} (after overrides: {p:?})"))?;
    Ok(ChannelSpec::Product(p))
}

/// Validate an already parsed table; every problem is reported.
pub fn validate_table(table: &Table) -> std::result::Result<ScenarioConfig, Vec<Diagnostic>> {
    let mut rd = Reader {
        table,
        diags: Vec::new(),
    };
    for k in table.keys() {
        if !KNOWN_KEYS.contains(&k.as_str()) {
            rd.diags.push(Diagnostic::new(k, "unknown field"));
        }
    }
    let protocol = match rd.string("protocol") {
        None => {
            if !table.contains_key("protocol") {
                rd.diags.push(Diagnostic::new("protocol", "required"));
            }
            None
        }
        Some(s) => s.parse::<Protocol>().map_err(|e| rd.diags.push(Diagnostic::new("protocol", e))).ok(),
    };
    let seed = match rd.int("seed") {
        None if !table.contains_key("seed") => {
            rd.diags.push(Diagnostic::new("seed", "required"));
            None
        }
        Some(s) if s < 0 => {
            rd.diags.push(Diagnostic::new("seed", format!("must be non-negative, got {s}")));
            None
        }
        other => other.map(|s| s as u64),
    };
    let trials_required = protocol.is_some_and(|p| p != Protocol::ResourceCompare);
    let trials = match rd.int("trials") {
        None if !table.contains_key("trials") => {
            if trials_required {
                rd.diags.push(Diagnostic::new("trials", "required"));
            }
            Some(0)
        }
        Some(t) if t < 0 || (t == 0 && trials_required) => {
            rd.diags.push(Diagnostic::new("trials", format!("must be positive, got {t}")));
            None
        }
        other => other.map(|t| t as usize),
    };
    let n = rd.count("n", 1);
    let r = rd.count("r", 1);
    let r2 = rd.count("r2", 1);
    let threads = rd.count("threads", 1).unwrap_or(1);
    let channel = rd.channel();
    let delta = rd.float("delta").unwrap_or(0.1);
    let eps = rd.float("eps").unwrap_or(0.05);
    let intercept = rd.float("intercept").unwrap_or(0.0);
    let test_fraction = rd.float("test_fraction").unwrap_or(0.5);
    let alpha = rd.float("alpha");
    let format = match rd.string("format") {
        None => Format::Json,
        Some(s) => s.parse().unwrap_or_else(|e| {
            rd.diags.push(Diagnostic::new("format", e));
            Format::Json
        }),
    };
    let out = rd.string("out");
    let mut diags = rd.diags;

    if !(delta > 0.0 && delta < 0.5) {
        diags.push(Diagnostic::new("delta", format!("must lie in (0, 1/2), got {delta}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        diags.push(Diagnostic::new("eps", format!("must lie in (0, 1), got {eps}")));
    }
    if !(0.0..=1.0).contains(&test_fraction) {
        diags.push(Diagnostic::new("test_fraction", format!("must lie in [0, 1], got {test_fraction}")));
    }

    let Some(protocol) = protocol else {
        return Err(diags);
    };
    if protocol.needs_n() && n.is_none() && !table.contains_key("n") {
        diags.push(Diagnostic::new("n", format!("required for {protocol}")));
    }
    if protocol.needs_r() && r.is_none() && !table.contains_key("r") {
        diags.push(Diagnostic::new("r", format!("required for {protocol}")));
    }
    let n_val = n.unwrap_or(match protocol {
        Protocol::ResourceCompare => 128,
        _ => 1,
    });
    let r_val = r.unwrap_or(match protocol {
        Protocol::ResourceCompare => 8,
        _ => 1,
    });

    match protocol {
        Protocol::QvcRecycle => {
            if let (Some(ch), Some(_)) = (&channel, n) {
                check_width(&mut diags, ch, &[n_val]);
                let a = alpha.unwrap_or_else(|| ch.flag_weight());
                if a + delta >= 0.5 {
                    diags.push(Diagnostic::new(
                        "delta",
                        format!(
                            "hashing needs alpha + delta < 1/2; expected syndrome weight fraction alpha = {a:.4} with delta = {delta}"
                        ),
                    ));
                }
            }
        }
        Protocol::Pqc => {
            if 1usize << n_val.min(63) > default_cap(2) {
                diags.push(Diagnostic::new(
                    "n",
                    format!("{n_val} qubits exceed the dense engine cap of {}", default_cap(2)),
                ));
            }
            if let Some(ch) = &channel {
                check_width(&mut diags, ch, &[n_val]);
            }
        }
        Protocol::Mpqc | Protocol::Authenticate => {
            if n_val > 64 || r_val > 64 {
                diags.push(Diagnostic::new("n", "n and r must be at most 64"));
            }
            if protocol == Protocol::Authenticate && 1usize << (n_val + 2 * r_val).min(63) > default_cap(2) {
                diags.push(Diagnostic::new(
                    "r",
                    format!(
                        "n + 2r = {} qubits exceed the dense engine cap of {}; the transit errors are Pauli, so protocol = \"mpqc\" runs the same test on the stabilizer frame",
                        n_val + 2 * r_val,
                        default_cap(2)
                    ),
                ));
            }
            if let Some(ch) = &channel {
                check_width(&mut diags, ch, &[n_val, n_val + 2 * r_val]);
            }
        }
        Protocol::Fivebit => {
            if let Some(ch) = &channel {
                check_width(&mut diags, ch, &[1]);
            }
        }
        Protocol::Edc => {
            if intercept < 0.0 || intercept.fract() != 0.0 || intercept > (n_val + r_val) as f64 {
                diags.push(Diagnostic::new(
                    "intercept",
                    format!("must be a whole number of positions in 0..={}, got {intercept}", n_val + r_val),
                ));
            }
        }
        Protocol::Bb84 => {
            if !(0.0..=1.0).contains(&intercept) {
                diags.push(Diagnostic::new("intercept", format!("must be a probability, got {intercept}")));
            }
        }
        Protocol::ResourceCompare => {
            if let Some(ChannelSpec::Ops(_)) = &channel {
                diags.push(Diagnostic::new("channel", "resource comparison needs a per-qubit distribution"));
            }
        }
        _ => {}
    }

    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(ScenarioConfig {
        protocol,
        seed: seed.expect("checked"),
        trials: trials.expect("checked"),
        n: n_val,
        r: r_val,
        channel: channel.expect("checked"),
        delta,
        eps,
        r2,
        intercept,
        test_fraction,
        format,
        out,
        threads,
    })
}

fn check_width(diags: &mut Vec<Diagnostic>, ch: &ChannelSpec, allowed: &[usize]) {
    if let Some(w) = ch.width() {
        if !allowed.contains(&w) {
            diags.push(Diagnostic::new(
                "channel",
                format!("operators act on {w} qubits, expected {allowed:?}"),
            ));
        }
    }
}

/// Round to 12 significant digits so the printed value is stable.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Aggregate {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundCheck {
    /// Stable identifier listed in the README claims table.
    pub id: String,
    pub claim: String,
    pub bound: f64,
    pub observed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunSummary {
    pub scenario: ScenarioConfig,
    pub aggregates: Vec<Aggregate>,
    pub bound_checks: Vec<BoundCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<ResourceComparison>,
}

impl RunSummary {
    pub fn all_pass(&self) -> bool {
        self.bound_checks.iter().all(|b| b.pass)
    }

    pub fn aggregate(&self, name: &str) -> Option<f64> {
        self.aggregates.iter().find(|a| a.name == name).map(|a| a.value)
    }

    pub fn check(&self, id: &str) -> Option<&BoundCheck> {
        self.bound_checks.iter().find(|b| b.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }

    /// Header row, then one line per aggregate and per bound check.
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut s = String::from("kind,name,value,low,high,bound,pass\n");
        for a in &self.aggregates {
            s += &format!("aggregate,{},{},{},{},,\n", a.name, a.value, opt(a.low), opt(a.high));
        }
        for b in &self.bound_checks {
            s += &format!("bound,{},{},,,{},{}\n", b.id, b.observed, b.bound, b.pass);
        }
        for t in &self.table {
            s += &format!(
                "table,{}.F,{},,,,\ntable,{}.D2,{},,,,\ntable,{}.verdict,{},,,,\n",
                t.channel,
                t.f,
                t.channel,
                t.d2,
                t.channel,
                serde_json::to_value(t.verdict).expect("verdict").as_str().expect("string")
            );
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

struct Builder {
    aggregates: Vec<Aggregate>,
    checks: Vec<BoundCheck>,
    table: Vec<ResourceComparison>,
}

impl Builder {
    fn new() -> Self {
        Self {
            aggregates: Vec::new(),
            checks: Vec::new(),
            table: Vec::new(),
        }
    }

    fn value(&mut self, name: &str, v: f64) {
        self.aggregates.push(Aggregate {
            name: name.into(),
            value: sig12(v),
            low: None,
            high: None,
        });
    }

    fn rate(&mut self, name: &str, hits: usize, trials: usize) {
        let (lo, hi) = wilson_interval(hits, trials, SIGMAS);
        self.aggregates.push(Aggregate {
            name: name.into(),
            value: sig12(hits as f64 / trials.max(1) as f64),
            low: Some(sig12(lo)),
            high: Some(sig12(hi)),
        });
    }

    fn check(&mut self, id: &str, claim: &str, bound: f64, observed: f64, pass: bool) {
        self.checks.push(BoundCheck {
            id: id.into(),
            claim: claim.into(),
            bound: sig12(bound),
            observed: sig12(observed),
            pass,
        });
    }

    /// `observed <= p + 3 sigma(p)`.
    fn upper(&mut self, id: &str, claim: &str, p: f64, hits: usize, trials: usize) {
        let observed = hits as f64 / trials as f64;
        let pass = observed <= p + SIGMAS * bernoulli_sigma(p, trials) + 1e-15;
        self.check(id, claim, p, observed, pass);
    }

    fn exact(&mut self, id: &str, claim: &str, hits: usize, trials: usize) {
        let observed = hits as f64 / trials as f64;
        self.check(id, claim, 1.0, observed, hits == trials);
    }

    fn finish(self, cfg: &ScenarioConfig) -> RunSummary {
        RunSummary {
            scenario: cfg.clone(),
            aggregates: self.aggregates,
            bound_checks: self.checks,
            table: self.table,
        }
    }
}

const FID_TOL: f64 = 1e-9;

fn run_trials<T, F>(cfg: &ScenarioConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SimRng) -> Result<T> + Sync,
{
    let seed = cfg.seed;
    let work = || {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| f(&mut SimRng::stream(seed, i)))
            .collect::<Result<Vec<T>>>()
    };
    if cfg.threads <= 1 {
        return (0..cfg.trials as u64)
            .map(|i| f(&mut SimRng::stream(seed, i)))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| SimError::Precondition(format!("thread pool: {e}")))?;
    pool.install(work)
}

/// Stream for scenario-level randomness outside the trial loop.
fn aux_stream(cfg: &ScenarioConfig, k: u64) -> SimRng {
    SimRng::stream(cfg.seed, u64::MAX - k)
}

fn count<T>(v: &[T], pred: impl Fn(&T) -> bool) -> usize {
    v.iter().filter(|x| pred(x)).count()
}

fn mean<T>(v: &[T], f: impl Fn(&T) -> f64) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.iter().map(f).sum::<f64>() / v.len() as f64
}

/// Execute a validated scenario.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunSummary> {
    let mut b = Builder::new();
    match cfg.protocol {
        Protocol::QvcRecycle => run_qvc(cfg, &mut b)?,
        Protocol::Pqc => run_pqc(cfg, &mut b)?,
        Protocol::Mpqc => run_mpqc(cfg, &mut b)?,
        Protocol::Authenticate => run_authenticate(cfg, &mut b)?,
        Protocol::Fivebit => run_fivebit(cfg, &mut b)?,
        Protocol::Qutrit => run_qutrit(cfg, &mut b)?,
        Protocol::Otp => run_otp(cfg, &mut b)?,
        Protocol::Edc => run_edc(cfg, &mut b)?,
        Protocol::Teleport => run_teleport(cfg, &mut b)?,
        Protocol::Superdense => run_superdense(cfg, &mut b)?,
        Protocol::Bb84 => run_bb84(cfg, &mut b)?,
        Protocol::EbitKd => run_ebit_kd(cfg, &mut b)?,
        Protocol::ResourceCompare => run_resources(cfg, &mut b)?,
    }
    Ok(b.finish(cfg))
}

fn run_qvc(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let channel = cfg.channel.build(cfg.n)?;
    let params = RecycleParams {
        r: cfg.r,
        delta: cfg.delta,
        eps: cfg.eps,
        ..RecycleParams::default()
    };
    let trials = run_trials(cfg, |rng| {
        let mut frame = QvcFrame::new(cfg.n, cfg.r);
        let out = recycle_round(&mut frame, &channel, &params, rng)?;
        Ok(out)
    })?;
    let t = trials.len();
    b.rate("acceptRate", count(&trials, |o| o.report.accepted), t);
    b.rate("preliminaryPassRate", count(&trials, |o| o.report.stage == Stage::PassedPreliminary), t);
    b.value("meanFidelity", mean(&trials, |o| o.message_intact as u8 as f64));
    b.value("ebitsConsumed", mean(&trials, |o| o.report.ebits_consumed as f64));
    b.value("ebitsRecycled", mean(&trials, |o| o.report.ebits_recycled as f64));
    let slipped = |o: &RoundOutcome| o.report.stage == Stage::PassedPreliminary && !o.truth.is_zero();
    let bad_pass = count(&trials, slipped);
    b.rate("passWithErrorRate", bad_pass, t);
    // Undetected passes skip correction; their rate is the next check.
    b.exact(
        "qvc.corrected-fidelity",
        "decoded message after correction equals the original",
        count(&trials, |o| o.message_intact || slipped(o)),
        t,
    );
    b.upper(
        "qvc.prelim-2^-r",
        "nonzero syndrome passes the preliminary parity test with probability 2^-r",
        0.5f64.powi(cfg.r as i32),
        bad_pass,
        t,
    );
    Ok(())
}

fn run_pqc(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let n = cfg.n;
    let channel = cfg.channel.build(n)?;
    let qubits: Vec<usize> = (0..n).collect();
    let fids = run_trials(cfg, |rng| {
        let psi = DenseState::<f64>::random(n, 2, rng)?;
        let key = ClassicalPauliKey::random(n, rng);
        let mut st = psi.clone();
        pqc_encrypt(&mut st, &qubits, &key)?;
        crate::channels::apply_pauli_channel(&mut st, &channel, &qubits, rng)?;
        pqc_decrypt(&mut st, &qubits, &key)?;
        psi.fidelity(&st)
    })?;
    b.value("meanFidelity", mean(&fids, |f| *f));
    if n <= 3 {
        let probe = DenseState::<f64>::random(n, 2, &mut aux_stream(cfg, 0))?.density();
        let d = key_average(&probe)?.trace_distance(&DensityMatrix::maximally_mixed(n, 2))?;
        b.value("keyAverageTraceDistance", d);
        b.check(
            "pqc.randomization",
            "average over all Pauli keys maps every state to the maximally mixed state",
            FID_TOL,
            d,
            d <= FID_TOL,
        );
    }
    if cfg.channel.is_noiseless() {
        b.exact(
            "pqc.fidelity",
            "decryption with the shared key restores the message",
            count(&fids, |f| *f >= 1.0 - FID_TOL),
            fids.len(),
        );
    }
    Ok(())
}

fn mpqc_channel(cfg: &ScenarioConfig) -> Result<(PauliChannel, Vec<usize>)> {
    let m = cfg.n + 2 * cfg.r;
    let width = cfg.channel.width().unwrap_or(cfg.n);
    let ch = cfg.channel.build(width)?;
    let pos: Vec<usize> = if width == m { (0..m).collect() } else { (0..cfg.n).collect() };
    Ok((ch, pos))
}

fn accept_bound(e0: f64, r: usize) -> f64 {
    e0 + (1.0 - e0) * 0.5f64.powi(r as i32)
}

fn run_mpqc(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let (n, r) = (cfg.n, cfg.r);
    let m = n + 2 * r;
    let (channel, pos) = mpqc_channel(cfg)?;
    let trials = run_trials(cfg, |rng| {
        let e = channel.sample(rng).embed(m, &pos);
        acceptance_trial(&e, n, r, rng)
    })?;
    let t = trials.len();
    let accepted = count(&trials, |o| o.is_some());
    let clean = count(&trials, |o| *o == Some((0, 0)));
    let e0 = channel.identity_probability();
    b.rate("acceptRate", accepted, t);
    b.rate("cleanAcceptRate", clean, t);
    b.value("identityProbability", e0);
    b.upper(
        "mpqc.accept-2^-r",
        "acceptance probability is at most e00 + 2^-r (1 - e00)",
        accept_bound(e0, r),
        accepted,
        t,
    );
    if cfg.channel.is_noiseless() {
        b.exact("mpqc.noiseless-accept", "untampered rounds always accept", clean, t);
    }
    Ok(())
}

fn run_authenticate(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let (n, r) = (cfg.n, cfg.r);
    let (channel, pos) = mpqc_channel(cfg)?;
    let m = n + 2 * r;
    let full = PauliChannel::explicit(
        m,
        channel.entries().into_iter().map(|(p, w)| (p.embed(m, &pos), w)).collect(),
    )?;
    let tampering = if cfg.channel.is_noiseless() {
        Tampering::None
    } else {
        Tampering::Channel(full)
    };
    let trials = run_trials(cfg, |rng| {
        let psi = DenseState::<f64>::random(n, 2, rng)?;
        let mut layout = TestQubitLayout::random(n, r, rng);
        authenticate_message(&psi, &mut layout, &tampering, rng)
    })?;
    let t = trials.len();
    let accepted = count(&trials, |o| o.accept);
    let fids: Vec<f64> = trials.iter().filter_map(|o| o.fidelity).collect();
    b.rate("acceptRate", accepted, t);
    b.value("meanAcceptedFidelity", mean(&fids, |f| *f));
    b.upper(
        "auth.accept-2^-r",
        "acceptance probability is at most e00 + 2^-r (1 - e00)",
        accept_bound(channel.identity_probability(), r),
        accepted,
        t,
    );
    if cfg.channel.is_noiseless() {
        b.exact(
            "auth.noiseless-fidelity",
            "untampered rounds accept and return the message unchanged",
            count(&trials, |o| o.fidelity.is_some_and(|f| f >= 1.0 - FID_TOL)),
            t,
        );
    }
    Ok(())
}

fn run_fivebit(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let channel = cfg.channel.build(1)?;
    let trials = run_trials(cfg, |rng| {
        let psi = DenseState::<f64>::random(1, 2, rng)?;
        let mut st = fivebit_initial(&psi)?;
        fivebit_encode(&mut st)?;
        let e = channel.sample(rng);
        st.apply_pauli(&e.embed(5, &[0]))?;
        fivebit_decode(&mut st)?;
        let mut t = Transcript::new();
        let found = fivebit_locc_syndrome(&mut st, &mut t, 0, rng)?;
        let label = BellLabel::ALL
            .into_iter()
            .find(|l| l.pauli_from_phi_plus() == found)
            .expect("every letter has a label");
        st.apply_pauli(&PauliOperator::qubit(5, 0, fivebit_message_correction(label)?))?;
        let fid = st.reduced(&[0]).overlap_pure(psi.amplitudes());
        Ok((found == e.letter(0), fid))
    })?;
    let t = trials.len();
    let identified = count(&trials, |o| o.0);
    b.rate("syndromeIdentifiedRate", identified, t);
    b.value("meanFidelity", mean(&trials, |o| o.1));
    b.exact(
        "fivebit.locc-syndrome",
        "local measurements on the two pairs identify the Pauli error on the transmitted share",
        identified,
        t,
    );
    b.exact(
        "fivebit.fidelity",
        "the corrected secret equals the original",
        count(&trials, |o| o.1 >= 1.0 - FID_TOL),
        t,
    );
    Ok(())
}

fn run_qutrit(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let table = qutrit_error_table()?;
    let noisy = !cfg.channel.is_noiseless();
    let trials = run_trials(cfg, |rng| {
        let psi = DenseState::<f64>::random(1, 3, rng)?;
        let mut st = qutrit_initial(&psi)?;
        qutrit_encode(&mut st)?;
        let k = if noisy { rng.below(9) } else { 0 };
        let (s, t) = table[k].error;
        st.apply_pauli(&PauliOperator::single(3, 3, 0, s as u8, t as u8))?;
        let found = qutrit_decode_and_correct(&mut st, rng)?;
        let fid = st.reduced(&[0]).overlap_pure(psi.amplitudes());
        Ok((found == k, fid))
    })?;
    let t = trials.len();
    let identified = count(&trials, |o| o.0);
    b.rate("errorIdentifiedRate", identified, t);
    b.value("meanFidelity", mean(&trials, |o| o.1));
    b.exact(
        "qutrit.fidelity",
        "the receiver holding two shares recovers the secret exactly",
        count(&trials, |o| o.1 >= 1.0 - FID_TOL),
        t,
    );
    Ok(())
}

fn run_otp(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let n = cfg.n;
    let trials = run_trials(cfg, |rng| {
        let (m1, m2, k) = (rng.bits(n), rng.bits(n), rng.bits(n));
        let c1 = classical_otp(&m1, &k)?;
        let c2 = classical_otp(&m2, &k)?;
        let leak = classical_otp(&c1, &c2)? == classical_otp(&m1, &m2)?;
        Ok((leak, classical_otp(&c1, &k)? == m1))
    })?;
    let t = trials.len();
    b.rate("decodeRate", count(&trials, |o| o.1), t);
    b.rate("keyReuseLeakRate", count(&trials, |o| o.0), t);
    b.exact(
        "otp.key-reuse-leak",
        "two cipher-texts under one key XOR to the XOR of the messages",
        count(&trials, |o| o.0),
        t,
    );
    Ok(())
}

fn run_edc(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let (n, r) = (cfg.n, cfg.r);
    let l = cfg.intercept as usize;
    let trials = run_trials(cfg, |rng| {
        let m = rng.bits(n);
        let k1 = rng.bits(n + r);
        let k2 = rng.bits(n + r);
        let eve = InterceptPositions {
            positions: rng.sample_distinct(n + r, l),
        };
        let mut t = Transcript::new();
        let out = edc_send(&m, &k1, &k2, r, &eve, &mut t, 0, rng)?;
        Ok((out.accept, out.decoded == m))
    })?;
    let t = trials.len();
    let accepted = count(&trials, |o| o.0);
    b.rate("acceptRate", accepted, t);
    b.rate("correctDecodeRate", count(&trials, |o| o.1), t);
    b.upper(
        "edc.undetected-(3/4)^l",
        "intercept-resend on l positions passes every parity check with probability at most (3/4)^l",
        0.75f64.powi(l as i32),
        accepted,
        t,
    );
    Ok(())
}

fn run_teleport(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let trials = run_trials(cfg, |rng| {
        let psi = DenseState::<f64>::random(1, 2, rng)?;
        teleport(&psi, rng)
    })?;
    let t = trials.len();
    let mut counts = [0usize; 4];
    for o in &trials {
        counts[o.k1 as usize + 2 * o.k2 as usize] += 1;
    }
    b.value("meanFidelity", mean(&trials, |o| o.fidelity));
    for (i, name) in ["k00", "k10", "k01", "k11"].iter().enumerate() {
        b.rate(&format!("outcome.{name}"), counts[i], t);
    }
    let (_, p) = chi_square_uniform(&counts);
    b.value("outcomeUniformityPValue", p);
    b.exact(
        "teleport.fidelity",
        "Bob's corrected qubit equals the input in every branch",
        count(&trials, |o| o.fidelity >= 1.0 - FID_TOL),
        t,
    );
    let dev = counts.iter().map(|&c| (c as f64 / t as f64 - 0.25).abs()).fold(0.0, f64::max);
    let tol = 0.02f64.max(SIGMAS * bernoulli_sigma(0.25, t));
    b.check(
        "teleport.uniform-outcomes",
        "the four measurement outcomes are equiprobable",
        tol,
        dev,
        dev <= tol,
    );
    Ok(())
}

fn run_superdense(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let trials = run_trials(cfg, |rng| {
        let (c1, c2) = (rng.bit(), rng.bit());
        Ok(superdense(c1, c2, rng)?.decoded == (c1, c2))
    })?;
    let t = trials.len();
    b.rate("decodeRate", count(&trials, |o| *o), t);
    b.exact("superdense.decoding", "two classical bits are decoded exactly", count(&trials, |o| *o), t);
    let mut rng = aux_stream(cfg, 0);
    let mixed = DensityMatrix::maximally_mixed(1, 2);
    let mut worst: f64 = 0.0;
    for code in 0..4 {
        let out = superdense(code & 1 == 1, code & 2 == 2, &mut rng)?;
        worst = worst.max(out.transmitted.trace_distance(&mixed)?);
    }
    b.check(
        "superdense.transmitted-independent",
        "the transmitted qubit alone is maximally mixed for every message",
        FID_TOL,
        worst,
        worst <= FID_TOL,
    );
    Ok(())
}

fn run_bb84(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let eve = if cfg.intercept > 0.0 {
        Bb84Eve::InterceptResend(cfg.intercept)
    } else {
        Bb84Eve::None
    };
    let trials = run_trials(cfg, |rng| {
        let mut t = Transcript::new();
        bb84_round(cfg.n, eve, cfg.test_fraction, &mut t, rng)
    })?;
    let t = trials.len();
    let tested: usize = trials.iter().map(|o| o.tested).sum();
    let errors: usize = trials.iter().map(|o| o.errors).sum();
    let rate = errors as f64 / tested.max(1) as f64;
    b.value("errorRate", rate);
    b.value("meanSifted", mean(&trials, |o| o.sifted as f64));
    b.value("meanKeyLength", mean(&trials, |o| o.key.as_ref().map_or(0.0, |k| k.len() as f64)));
    b.rate("abortRate", count(&trials, |o| o.key.is_none()), t);
    let expected = cfg.intercept / 4.0;
    let tol = 0.01f64.max(SIGMAS * bernoulli_sigma(expected, tested.max(1)));
    let dev = (rate - expected).abs();
    b.check(
        "bb84.error-rate",
        "intercept-resend in random bases causes errors on a quarter of the intercepted tested bits",
        expected,
        rate,
        if expected == 0.0 { errors == 0 } else { dev <= tol },
    );
    Ok(())
}

fn run_ebit_kd(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let trials = run_trials(cfg, |rng| {
        let (a, k) = ebit_key_distribution(cfg.n, rng)?;
        Ok((a == k, a.iter().filter(|&&x| x).count()))
    })?;
    let t = trials.len();
    let agree = count(&trials, |o| o.0);
    b.rate("agreementRate", agree, t);
    let ones: usize = trials.iter().map(|o| o.1).sum();
    b.value("onesFraction", ones as f64 / (t * cfg.n) as f64);
    b.exact("ebitkd.agreement", "both halves of each pair give the same key bit", agree, t);
    Ok(())
}

/// `(F, D2)` reference values for the four presets.
pub const PRESET_TABLE: [(Preset, f64, f64, Verdict); 4] = [
    (Preset::Noiseless, 1.0, 1.0, Verdict::Equal),
    (Preset::ZMeasureAll, 0.5, 0.0, Verdict::Equal),
    (Preset::PaperMix, 0.1037, 0.0, Verdict::TeleportBetter),
    (Preset::DepolarizingComplete, 0.0, 0.0, Verdict::TeleportBetter),
];

fn round_comparison(c: ResourceComparison) -> ResourceComparison {
    ResourceComparison {
        f: sig12(c.f),
        d2: sig12(c.d2),
        qvc_ebits: sig12(c.qvc_ebits),
        teleport_ebits: sig12(c.teleport_ebits),
        ..c
    }
}

/// Random per-qubit distribution, occasionally with zero entries.
pub fn random_distribution(rng: &mut SimRng) -> [f64; 4] {
    let mut p = [0.0; 4];
    for x in &mut p {
        *x = if rng.below(4) == 0 { 0.0 } else { -rng.unit().max(1e-300).ln() };
    }
    let total: f64 = p.iter().sum();
    if total == 0.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    p.map(|x| x / total)
}

fn run_resources(cfg: &ScenarioConfig, b: &mut Builder) -> Result<()> {
    let n = cfg.n;
    let mut table_ok = true;
    let mut worst: f64 = 0.0;
    for (preset, f, d2, verdict) in PRESET_TABLE {
        let c = compare_methods(preset.name(), &preset.per_qubit(), n)?;
        let tol = if preset == Preset::PaperMix { 1e-3 } else { 1e-12 };
        worst = worst.max((c.f - f).abs()).max((c.d2 - d2).abs());
        table_ok &= (c.f - f).abs() <= tol && (c.d2 - d2).abs() <= 1e-12 && c.verdict == verdict;
        b.table.push(round_comparison(c));
    }
    b.check(
        "resources.table",
        "recyclable fraction and distillable rate for the four reference channels, with verdicts",
        1e-3,
        worst,
        table_ok,
    );
    let ChannelSpec::Product(p) = cfg.channel else {
        unreachable!("validated")
    };
    if !Preset::ALL.iter().any(|s| s.per_qubit() == p) {
        b.table.push(round_comparison(compare_methods(&cfg.channel.to_string(), &p, n)?));
    }
    let mut rng = aux_stream(cfg, 0);
    let mut agree = 0;
    for _ in 0..100 {
        let q = random_distribution(&mut rng);
        let c = compare_methods("random", &q, n)?;
        let direct = c.teleport_ebits <= c.qvc_ebits + 1e-12 * n as f64;
        agree += (direct == c.teleport_at_least_as_good()) as usize;
    }
    b.exact(
        "resources.predicate",
        "F <= (1 + D2)/2 exactly when teleportation uses no more ebits",
        agree,
        100,
    );
    if cfg.trials > 0 {
        let params = RecycleParams {
            r: cfg.r,
            delta: cfg.delta,
            eps: cfg.eps,
            ..RecycleParams::default()
        };
        let f = simulate_recyclable_fraction(&p, n, cfg.trials, &params, &mut aux_stream(cfg, 1))?;
        b.value("simulatedRecyclableFraction", f);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(r: std::result::Result<ScenarioConfig, Vec<Diagnostic>>) -> Vec<String> {
        r.unwrap_err().into_iter().map(|d| d.field).collect()
    }

    #[test]
    fn missing_seed_is_reported() {
        let d = validate_config("protocol = \"otp\"\nn = 4\ntrials = 10\n").unwrap_err();
        assert!(d.iter().any(|d| d.to_string() == "seed: required"), "{d:?}");
    }

    #[test]
    fn negative_trials_and_unknown_fields() {
        let f = fields(validate_config("protocol = \"otp\"\nn = 4\ntrials = -3\nseed = 1\nbogus = 2\n"));
        assert!(f.contains(&"trials".to_string()));
        assert!(f.contains(&"bogus".to_string()));
    }

    #[test]
    fn hashing_regime_is_enforced() {
        let f = fields(validate_config(
            "protocol = \"qvc-recycle\"\nn = 8\nr = 4\ntrials = 5\nseed = 1\nchannel = \"depolarizing-complete\"\n",
        ));
        assert_eq!(f, vec!["delta".to_string()]);
    }

    #[test]
    fn channel_forms() {
        assert_eq!(ChannelSpec::parse("paper-mix").unwrap().to_string(), "paper-mix");
        assert_eq!(
            ChannelSpec::parse("0.9,0.1,0,0").unwrap(),
            ChannelSpec::Product([0.9, 0.1, 0.0, 0.0])
        );
        let ops = ChannelSpec::parse("XI:0.1,II:0.9").unwrap();
        assert_eq!(ops.width(), Some(2));
        let t: Table = "preset = \"z-measure-all\"\npz = 0.3\npi = 0.7\n".parse().unwrap();
        assert_eq!(channel_table(&t).unwrap(), ChannelSpec::Product([0.7, 0.0, 0.3, 0.0]));
        let bad: Table = "preset = \"noiseless\"\npx = 0.5\n".parse().unwrap();
        assert!(channel_table(&bad).is_err());
    }

    #[test]
    fn noiseless_qvc_scenario() {
        let cfg = validate_config(
            "protocol = \"qvc-recycle\"\nchannel = \"noiseless\"\nn = 32\nr = 6\ntrials = 1000\nseed = 7\n",
        )
        .unwrap();
        let s = run_scenario(&cfg).unwrap();
        assert_eq!(s.aggregate("acceptRate"), Some(1.0));
        assert_eq!(s.aggregate("meanFidelity"), Some(1.0));
        assert!(s.all_pass());
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let text = "protocol = \"teleport\"\ntrials = 200\nseed = 3\n";
        let mut cfg = validate_config(text).unwrap();
        let one = run_scenario(&cfg).unwrap().to_json();
        cfg.threads = 3;
        assert_eq!(one, run_scenario(&cfg).unwrap().to_json());
    }

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(0.1 + 0.2), 0.3);
        assert_eq!(sig12(1.0 / 3.0).to_string(), "0.333333333333");
    }
}

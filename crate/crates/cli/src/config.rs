//! Line-oriented `key = value` configuration with `[section]` headers, the
//! bundled presets, and the manifest writer whose output parses back into an
//! equivalent configuration.
//!
//! Sections: `model`, `grid`, `sim`, `sweep`, `output`. A top-level
//! `preset = <name>` line (before any section) fills in defaults that
//! explicit keys override. Unknown keys and duplicate keys are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crossdiff_core::model::CrossParam;
use crossdiff_core::pde::{Grid, Scheme, SimConfig};
use crossdiff_core::ModelParams;

/// Errors from reading a configuration document.
#[derive(Debug)]
pub enum ConfigError {
    /// Malformed syntax, duplicate key, or unknown key/section.
    Parse { line: usize, msg: String },
    /// Well-formed document violating a downstream invariant.
    Validation(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            ConfigError::Validation(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Which graymap variants `simulate` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmVariant {
    P2,
    P5,
    Both,
}

/// Inputs for the stability sweeps: swept coefficient, explicit value list,
/// bisection bracket, and the wavenumber lattice geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub param: CrossParam,
    pub values: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub lx: f64,
    pub ly: f64,
    pub m_max: usize,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub pgm: PgmVariant,
    pub dump: bool,
}

/// Everything a run needs, validated against every downstream invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub grid: Grid,
    pub sim: SimConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

const SECTIONS: [&str; 5] = ["model", "grid", "sim", "sweep", "output"];

fn section_keys(section: &str) -> &'static [&'static str] {
    match section {
        "model" => &[
            "a", "b", "c", "d", "e", "k11", "k13", "k22", "k23", "k31", "k32", "k33",
        ],
        "grid" => &["nx", "ny", "dx"],
        "sim" => &[
            "dt",
            "steps",
            "snapshot_every",
            "seed",
            "amplitude",
            "scheme",
            "picard_tol",
            "picard_max_iters",
            "reaction",
        ],
        "sweep" => &["param", "values", "lo", "hi", "tol", "lx", "ly", "m_max", "n_max"],
        "output" => &["dir", "pgm", "dump"],
        _ => &[],
    }
}

/// The bundled presets, each a list of `(section, key, value)` defaults.
///
/// `paper-fig3` pins the reference rate set with every fixed diffusion
/// coefficient at 0.1 plus the 100-site grid and the long production run;
/// `fig3-k17` through `fig3-k20` additionally pin `k32`. `fig1` and `fig2`
/// configure the dispersion sweep and the bifurcation sweep on the same
/// model, with the 40x40 wavenumber lattice.
pub fn preset(name: &str) -> Option<Vec<(&'static str, &'static str, &'static str)>> {
    let base = vec![
        ("model", "a", "1"),
        ("model", "b", "1"),
        ("model", "c", "0.1"),
        ("model", "d", "0.1"),
        ("model", "e", "0.1"),
        ("model", "k11", "0.1"),
        ("model", "k13", "0.1"),
        ("model", "k22", "0.1"),
        ("model", "k23", "0.1"),
        ("model", "k31", "0.1"),
        ("model", "k33", "0.1"),
        ("grid", "nx", "100"),
        ("grid", "ny", "100"),
        ("grid", "dx", "1"),
        ("sim", "dt", "0.005"),
        ("sim", "steps", "40000"),
        ("sim", "snapshot_every", "4000"),
        ("sim", "seed", "42"),
        ("sim", "amplitude", "0.05"),
        ("sweep", "param", "k32"),
        ("sweep", "lx", "40"),
        ("sweep", "ly", "40"),
        ("sweep", "m_max", "50"),
        ("sweep", "n_max", "50"),
    ];
    let mut out = base;
    match name {
        "paper-fig3" => {}
        "fig3-k17" => out.push(("model", "k32", "1.7")),
        "fig3-k18" => out.push(("model", "k32", "1.8")),
        "fig3-k19" => out.push(("model", "k32", "1.9")),
        "fig3-k20" => out.push(("model", "k32", "2")),
        "fig1" => out.push((
            "sweep",
            "values",
            "0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0",
        )),
        "fig2" => {
            out.push(("model", "k32", "2"));
            out.push(("sweep", "values", "1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0"));
        }
        _ => return None,
    }
    Some(out)
}

struct Entry {
    line: usize,
    value: String,
}

/// Raw parsed document: `(section, key) -> entry`, before validation.
struct Document {
    entries: BTreeMap<(String, String), Entry>,
}

impl Document {
    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .map(|e| e.value.as_str())
    }

    fn has_section(&self, section: &str) -> bool {
        self.entries.keys().any(|(s, _)| s == section)
    }
}

fn parse_document(text: &str) -> Result<Document, ConfigError> {
    let mut entries: BTreeMap<(String, String), Entry> = BTreeMap::new();
    let mut section: Option<String> = None;
    let mut preset_applied: Vec<(&str, &str, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Parse {
                    line: lineno,
                    msg: format!("unknown section [{name}]"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Parse {
                line: lineno,
                msg: format!("expected `key = value` or `[section]`, got `{line}`"),
            });
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        match &section {
            None => {
                if key == "preset" {
                    let Some(defaults) = preset(&value) else {
                        return Err(ConfigError::Parse {
                            line: lineno,
                            msg: format!("unknown preset `{value}`"),
                        });
                    };
                    preset_applied = defaults;
                } else {
                    return Err(ConfigError::Parse {
                        line: lineno,
                        msg: format!("key `{key}` before any [section] (only `preset` may appear here)"),
                    });
                }
            }
            Some(sec) => {
                if !section_keys(sec).contains(&key.as_str()) {
                    return Err(ConfigError::Parse {
                        line: lineno,
                        msg: format!("unknown key `{key}` in section [{sec}]"),
                    });
                }
                if let Some(prev) = entries.get(&(sec.clone(), key.clone())) {
                    return Err(ConfigError::Parse {
                        line: lineno,
                        msg: format!("duplicate key `{key}` in section [{sec}]: first set at line {}", prev.line),
                    });
                }
                entries.insert((sec.clone(), key), Entry { line: lineno, value });
            }
        }
    }
    // preset defaults fill in only what the document leaves unset
    for (sec, key, value) in preset_applied {
        entries
            .entry((sec.to_string(), key.to_string()))
            .or_insert(Entry { line: 0, value: value.to_string() });
    }
    Ok(Document { entries })
}

fn parse_f64(doc: &Document, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
    doc.get(section, key)
        .map(|v| {
            v.parse::<f64>().map_err(|_| {
                ConfigError::Validation(format!("[{section}] {key} = `{v}` is not a number"))
            })
        })
        .transpose()
}

fn require_f64(doc: &Document, section: &str, key: &str) -> Result<f64, ConfigError> {
    parse_f64(doc, section, key)?
        .ok_or_else(|| ConfigError::Validation(format!("[{section}] {key} is required")))
}

fn f64_or(doc: &Document, section: &str, key: &str, default: f64) -> Result<f64, ConfigError> {
    Ok(parse_f64(doc, section, key)?.unwrap_or(default))
}

fn usize_or(doc: &Document, section: &str, key: &str, default: usize) -> Result<usize, ConfigError> {
    doc.get(section, key)
        .map(|v| {
            v.parse::<usize>().map_err(|_| {
                ConfigError::Validation(format!("[{section}] {key} = `{v}` is not a nonnegative integer"))
            })
        })
        .transpose()
        .map(|o| o.unwrap_or(default))
}

fn bool_or(doc: &Document, section: &str, key: &str, default: bool) -> Result<bool, ConfigError> {
    match doc.get(section, key) {
        None => Ok(default),
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(v) => Err(ConfigError::Validation(format!(
            "[{section}] {key} = `{v}` must be `true` or `false`"
        ))),
    }
}

fn values_list(doc: &Document, section: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
    let Some(text) = doc.get(section, key) else { return Ok(Vec::new()) };
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| {
                ConfigError::Validation(format!("[{section}] {key}: `{t}` is not a number"))
            })
        })
        .collect()
}

/// Parse and fully validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Like [`parse_config`], with `(section, key, value)` overrides applied on
/// top of the document (command-line `--set` options).
pub fn parse_config_with(
    text: &str,
    overrides: &[(String, String, String)],
) -> Result<RunConfig, ConfigError> {
    let mut doc = parse_document(text)?;
    for (sec, key, value) in overrides {
        if !SECTIONS.contains(&sec.as_str()) || !section_keys(sec).contains(&key.as_str()) {
            return Err(ConfigError::Validation(format!("unknown override key `{sec}.{key}`")));
        }
        doc.entries.insert(
            (sec.clone(), key.clone()),
            Entry { line: 0, value: value.clone() },
        );
    }
    resolve(&doc)
}

fn resolve(doc: &Document) -> Result<RunConfig, ConfigError> {
    if !doc.has_section("model") {
        return Err(ConfigError::Validation(
            "the [model] section is required (directly or via a preset)".into(),
        ));
    }

    let k = [
        [require_f64(doc, "model", "k11")?, 0.0, f64_or(doc, "model", "k13", 0.0)?],
        [0.0, require_f64(doc, "model", "k22")?, f64_or(doc, "model", "k23", 0.0)?],
        [
            f64_or(doc, "model", "k31", 0.0)?,
            f64_or(doc, "model", "k32", 0.0)?,
            require_f64(doc, "model", "k33")?,
        ],
    ];
    let model = ModelParams::new(
        require_f64(doc, "model", "a")?,
        require_f64(doc, "model", "b")?,
        require_f64(doc, "model", "c")?,
        require_f64(doc, "model", "d")?,
        require_f64(doc, "model", "e")?,
        k,
    )
    .map_err(|e| ConfigError::Validation(e.to_string()))?;

    let grid = Grid::new(
        usize_or(doc, "grid", "nx", 64)?,
        usize_or(doc, "grid", "ny", 64)?,
        f64_or(doc, "grid", "dx", 1.0)?,
    )
    .map_err(|e| ConfigError::Validation(e.to_string()))?;

    let steps = usize_or(doc, "sim", "steps", 10_000)?;
    let scheme = match doc.get("sim", "scheme") {
        None | Some("explicit") => Scheme::Explicit,
        Some("semi-implicit") => Scheme::SemiImplicit,
        Some(v) => {
            return Err(ConfigError::Validation(format!(
                "[sim] scheme = `{v}` must be `explicit` or `semi-implicit`"
            )))
        }
    };
    let sim = SimConfig {
        dt: f64_or(doc, "sim", "dt", 0.01)?,
        steps,
        snapshot_every: usize_or(doc, "sim", "snapshot_every", steps.max(1))?,
        seed: doc
            .get("sim", "seed")
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    ConfigError::Validation(format!("[sim] seed = `{v}` is not a 64-bit integer"))
                })
            })
            .transpose()?
            .unwrap_or(42),
        perturb_amplitude: f64_or(doc, "sim", "amplitude", 0.05)?,
        scheme,
        picard_tol: f64_or(doc, "sim", "picard_tol", 1e-8)?,
        picard_max_iters: usize_or(doc, "sim", "picard_max_iters", 50)?,
        reaction_enabled: bool_or(doc, "sim", "reaction", true)?,
    };
    sim.validate().map_err(|e| ConfigError::Validation(e.to_string()))?;

    let param = match doc.get("sweep", "param") {
        None | Some("k32") => CrossParam::K32,
        Some("k31") => CrossParam::K31,
        Some(v) => {
            return Err(ConfigError::Validation(format!(
                "[sweep] param = `{v}` must be `k31` or `k32`"
            )))
        }
    };
    let sweep = SweepConfig {
        param,
        values: values_list(doc, "sweep", "values")?,
        lo: f64_or(doc, "sweep", "lo", 0.1)?,
        hi: f64_or(doc, "sweep", "hi", 3.0)?,
        tol: f64_or(doc, "sweep", "tol", 1e-4)?,
        lx: f64_or(doc, "sweep", "lx", 40.0)?,
        ly: f64_or(doc, "sweep", "ly", 40.0)?,
        m_max: usize_or(doc, "sweep", "m_max", 50)?,
        n_max: usize_or(doc, "sweep", "n_max", 50)?,
    };
    if !sweep.values.windows(2).all(|w| w[0] < w[1]) {
        return Err(ConfigError::Validation(
            "[sweep] values must be strictly increasing".into(),
        ));
    }
    if !(sweep.lo < sweep.hi) || !(sweep.tol > 0.0) {
        return Err(ConfigError::Validation(
            "[sweep] needs lo < hi and tol > 0".into(),
        ));
    }

    let pgm = match doc.get("output", "pgm") {
        None | Some("both") => PgmVariant::Both,
        Some("p2") => PgmVariant::P2,
        Some("p5") => PgmVariant::P5,
        Some(v) => {
            return Err(ConfigError::Validation(format!(
                "[output] pgm = `{v}` must be `p2`, `p5`, or `both`"
            )))
        }
    };
    let output = OutputConfig {
        dir: PathBuf::from(doc.get("output", "dir").unwrap_or("out")),
        pgm,
        dump: bool_or(doc, "output", "dump", false)?,
    };

    Ok(RunConfig { model, grid, sim, sweep, output })
}

/// Serialize a configuration as a manifest document; `parse_config` on the
/// result reproduces an equivalent [`RunConfig`].
pub fn write_manifest(cfg: &RunConfig) -> String {
    let m = &cfg.model;
    let values = cfg
        .sweep
        .values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let scheme = match cfg.sim.scheme {
        Scheme::Explicit => "explicit",
        Scheme::SemiImplicit => "semi-implicit",
    };
    let pgm = match cfg.output.pgm {
        PgmVariant::P2 => "p2",
        PgmVariant::P5 => "p5",
        PgmVariant::Both => "both",
    };
    let mut out = String::new();
    out.push_str(&format!("# crossdiff {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str("[model]\n");
    for (key, v) in [
        ("a", m.a),
        ("b", m.b),
        ("c", m.c),
        ("d", m.d),
        ("e", m.e),
        ("k11", m.k[0][0]),
        ("k13", m.k[0][2]),
        ("k22", m.k[1][1]),
        ("k23", m.k[1][2]),
        ("k31", m.k[2][0]),
        ("k32", m.k[2][1]),
        ("k33", m.k[2][2]),
    ] {
        out.push_str(&format!("{key} = {v}\n"));
    }
    out.push_str(&format!(
        "\n[grid]\nnx = {}\nny = {}\ndx = {}\n",
        cfg.grid.nx, cfg.grid.ny, cfg.grid.dx
    ));
    out.push_str(&format!(
        "\n[sim]\ndt = {}\nsteps = {}\nsnapshot_every = {}\nseed = {}\namplitude = {}\nscheme = {}\npicard_tol = {}\npicard_max_iters = {}\nreaction = {}\n",
        cfg.sim.dt,
        cfg.sim.steps,
        cfg.sim.snapshot_every,
        cfg.sim.seed,
        cfg.sim.perturb_amplitude,
        scheme,
        cfg.sim.picard_tol,
        cfg.sim.picard_max_iters,
        cfg.sim.reaction_enabled,
    ));
    out.push_str(&format!(
        "\n[sweep]\nparam = {}\nlo = {}\nhi = {}\ntol = {}\nlx = {}\nly = {}\nm_max = {}\nn_max = {}\n",
        cfg.sweep.param, cfg.sweep.lo, cfg.sweep.hi, cfg.sweep.tol, cfg.sweep.lx, cfg.sweep.ly,
        cfg.sweep.m_max, cfg.sweep.n_max,
    ));
    if !values.is_empty() {
        out.push_str(&format!("values = {values}\n"));
    }
    out.push_str(&format!(
        "\n[output]\ndir = {}\npgm = {}\ndump = {}\n",
        cfg.output.dir.display(),
        pgm,
        cfg.output.dump,
    ));
    out
}

//! Drives the miner from the command line: dataset conversion, mining
//! with any of the four models, trie size reports, and a CSV benchmark
//! sweep. Kept as a library so the pipeline is callable from tests.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use seqtrie::{
    check_layer_bounds, compute_stats, filter_by_support, flatten_separators,
    flatten_transformed, leaf_count, mine_tabular, mine_tabular_separators, mine_trie,
    oracle_mine, parse_spmf_str, unflatten, write_patterns, write_spmf, BdTrie, MiningParams,
    PatternSet, SdTrie, TrieStats,
};

/// Errors split by exit code: usage mistakes exit 1, runtime failures
/// (unreadable input, malformed data) exit 2.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

/// The four interchangeable mining paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    Oracle,
    Tabular,
    Sdtrie,
    Bdtrie,
}

pub const ALL_MODELS: [Model; 4] = [Model::Oracle, Model::Tabular, Model::Sdtrie, Model::Bdtrie];

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Oracle => "oracle",
            Model::Tabular => "tabular",
            Model::Sdtrie => "sdtrie",
            Model::Bdtrie => "bdtrie",
        }
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Model, String> {
        ALL_MODELS
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FlattenMode {
    /// Mark each itemset's first event with a negative code.
    Transformed,
    /// Put a zero cell between itemsets (tabular model only).
    Separator,
}

/// Minimum support as given on the command line: a fraction in (0, 1]
/// with a decimal point, or an absolute sequence count without one.
///
/// Fractions are kept as exact decimals so the threshold is
/// `ceil(num * N / den)` in integer arithmetic — no float rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinsupSpec {
    Fraction { num: u64, den: u64 },
    Count(u64),
}

impl FromStr for MinsupSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<MinsupSpec, String> {
        let bad = || format!("invalid minimum support {s:?}: expected a fraction in (0, 1] like 0.05 or a count like 20");
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
            return Err(bad());
        }
        match s.split_once('.') {
            None => {
                let count: u64 = s.parse().map_err(|_| bad())?;
                if count == 0 {
                    return Err(bad());
                }
                Ok(MinsupSpec::Count(count))
            }
            Some((int, frac)) => {
                if frac.is_empty() || frac.len() > 9 || int.len() > 1 {
                    return Err(bad());
                }
                let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
                let frac_val: u64 = frac.parse().map_err(|_| bad())?;
                let den = 10u64.pow(frac.len() as u32);
                let num = int * den + frac_val;
                if num == 0 || num > den {
                    return Err(bad());
                }
                Ok(MinsupSpec::Fraction { num, den })
            }
        }
    }
}

impl MinsupSpec {
    /// The `(theta, absolute count)` pair for a dataset of `n` sequences.
    pub fn resolve(&self, n_sequences: usize) -> (f64, u64) {
        match *self {
            MinsupSpec::Fraction { num, den } => {
                let n = n_sequences as u128;
                let count = (num as u128 * n).div_ceil(den as u128).max(1) as u64;
                (num as f64 / den as f64, count)
            }
            MinsupSpec::Count(count) => {
                let theta = if n_sequences == 0 {
                    1.0
                } else {
                    count as f64 / n_sequences as f64
                };
                (theta, count)
            }
        }
    }
}

impl fmt::Display for MinsupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MinsupSpec::Fraction { num, den } => write!(f, "{}", num as f64 / den as f64),
            MinsupSpec::Count(c) => write!(f, "{c}"),
        }
    }
}

/// Peak resident set size of this process, in bytes. A process-wide
/// high-water mark: it never decreases within a run, so per-phase
/// readings are upper bounds.
pub fn peak_rss_bytes() -> u64 {
    let mut ru = std::mem::MaybeUninit::<libc::rusage>::uninit();
    // SAFETY: getrusage fills the struct we hand it; checked return.
    unsafe {
        if libc::getrusage(libc::RUSAGE_SELF, ru.as_mut_ptr()) == 0 {
            // ru_maxrss is in kilobytes on Linux.
            ru.assume_init().ru_maxrss as u64 * 1024
        } else {
            0
        }
    }
}

/// One mining run's summary.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub model: Model,
    pub theta: f64,
    pub minsup_count: u64,
    pub patterns: usize,
    pub wall_ms: u64,
    pub peak_bytes: u64,
    /// Trie models only.
    pub nodes: Option<usize>,
    /// Trie models only.
    pub compression: Option<f64>,
}

pub const CSV_HEADER: &str = "model,theta,minsup_count,patterns,wall_ms,peak_bytes,nodes,compression";

impl RunReport {
    /// Row for the fixed benchmark schema ([`CSV_HEADER`]); absent trie
    /// fields stay empty.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.model.name(),
            self.theta,
            self.minsup_count,
            self.patterns,
            self.wall_ms,
            self.peak_bytes,
            self.nodes.map(|n| n.to_string()).unwrap_or_default(),
            self.compression.map(|c| c.to_string()).unwrap_or_default(),
        )
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model={} theta={} minsup={} patterns={} wall_ms={} peak_bytes={} nodes={} compression={}",
            self.model.name(),
            self.theta,
            self.minsup_count,
            self.patterns,
            self.wall_ms,
            self.peak_bytes,
            self.nodes.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
            self.compression
                .map(|c| format!("{c:.4}"))
                .unwrap_or_else(|| "-".into()),
        )
    }
}

pub struct MineConfig {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub minsup: MinsupSpec,
    pub model: Model,
    pub flatten: FlattenMode,
    pub filter: bool,
}

fn read_dataset(path: &Path) -> Result<seqtrie::StructuredDataset, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    parse_spmf_str(&text)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

struct MineOutcome {
    patterns: PatternSet,
    nodes: Option<usize>,
    compression: Option<f64>,
}

/// Flatten, optionally filter, build the chosen model, mine.
fn mine_once(
    d: &seqtrie::StructuredDataset,
    model: Model,
    flatten: FlattenMode,
    filter: bool,
    params: &MiningParams,
) -> Result<MineOutcome, CliError> {
    let runtime = |e: seqtrie::DatasetError| CliError::Runtime(e.to_string());
    if flatten == FlattenMode::Separator {
        if model != Model::Tabular {
            return Err(CliError::Usage(
                "separator flattening is only supported with --model tabular".into(),
            ));
        }
        let mut f = flatten_separators(d);
        if filter {
            f = filter_by_support(&f, params.minsup_count);
        }
        return Ok(MineOutcome {
            patterns: mine_tabular_separators(&f, params).map_err(runtime)?,
            nodes: None,
            compression: None,
        });
    }
    let mut f = flatten_transformed(d);
    if filter {
        f = filter_by_support(&f, params.minsup_count);
    }
    let outcome = match model {
        Model::Oracle => {
            let patterns = if filter {
                oracle_mine(&unflatten(&f).map_err(runtime)?, params)
            } else {
                oracle_mine(d, params)
            };
            MineOutcome {
                patterns,
                nodes: None,
                compression: None,
            }
        }
        Model::Tabular => MineOutcome {
            patterns: mine_tabular(&f, params).map_err(runtime)?,
            nodes: None,
            compression: None,
        },
        Model::Sdtrie => {
            let t = SdTrie::build(&f).map_err(runtime)?;
            let stats = compute_stats(&t, &f);
            MineOutcome {
                patterns: mine_trie(&t, params),
                nodes: Some(stats.node_count),
                compression: Some(stats.compression),
            }
        }
        Model::Bdtrie => {
            let t = BdTrie::build(&f).map_err(runtime)?;
            let stats = compute_stats(&t, &f);
            MineOutcome {
                patterns: mine_trie(&t, params),
                nodes: Some(stats.node_count),
                compression: Some(stats.compression),
            }
        }
    };
    Ok(outcome)
}

fn write_output(path: Option<&Path>, body: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
        }
    }
}

/// Mine one dataset with one model, write the pattern file, and return
/// the run summary. The timer covers flattening, filtering, model
/// construction and mining — not parsing or output.
pub fn run_mine(cfg: &MineConfig) -> Result<RunReport, CliError> {
    let d = read_dataset(&cfg.input)?;
    let (theta, minsup_count) = cfg.minsup.resolve(d.len());
    let params = MiningParams { theta, minsup_count };
    let started = Instant::now();
    let outcome = mine_once(&d, cfg.model, cfg.flatten, cfg.filter, &params)?;
    let wall_ms = started.elapsed().as_millis() as u64;
    let mut body = Vec::new();
    write_patterns(&outcome.patterns, &mut body)
        .map_err(|e| CliError::Runtime(format!("cannot format patterns: {e}")))?;
    write_output(cfg.output.as_deref(), &body)?;
    Ok(RunReport {
        model: cfg.model,
        theta,
        minsup_count,
        patterns: outcome.patterns.len(),
        wall_ms,
        peak_bytes: peak_rss_bytes(),
        nodes: outcome.nodes,
        compression: outcome.compression,
    })
}

/// Parse, canonicalize, and rewrite a dataset.
pub fn run_convert(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let d = read_dataset(input)?;
    let mut body = Vec::new();
    write_spmf(&d, &mut body)
        .map_err(|e| CliError::Runtime(format!("cannot format dataset: {e}")))?;
    write_output(output, &body)
}

/// Build both tries over a dataset and describe their size; with a
/// threshold given, rows are support-filtered first.
pub fn run_stats(input: &Path, minsup: Option<&MinsupSpec>) -> Result<String, CliError> {
    let d = read_dataset(input)?;
    let mut f = flatten_transformed(&d);
    if let Some(spec) = minsup {
        let (_, count) = spec.resolve(d.len());
        f = filter_by_support(&f, count);
    }
    let runtime = |e: seqtrie::DatasetError| CliError::Runtime(e.to_string());
    let sd = SdTrie::build(&f).map_err(runtime)?;
    let bd = BdTrie::build(&f).map_err(runtime)?;
    let stats: TrieStats = compute_stats(&sd, &f);
    debug_assert_eq!(stats, compute_stats(&bd, &f));
    let layers: Vec<String> = stats.layer_sizes.iter().map(|s| s.to_string()).collect();
    Ok(format!
        (
        "rows={} entries={} alphabet={} max_len={}\n\
         nodes={} compression={:.6} layers={} leaves={} bounds_ok={}\n\
         est_bytes tabular={} sdtrie={} bdtrie={}\n",
        f.rows().len(),
        stats.entry_count,
        f.alphabet_size(),
        f.max_row_len(),
        stats.node_count,
        stats.compression,
        layers.join(","),
        leaf_count(&sd),
        check_layer_bounds(&sd) && check_layer_bounds(&bd),
        stats.est_bytes_tabular,
        stats.est_bytes_sdtrie,
        stats.est_bytes_bdtrie,
    ))
}

pub struct BenchConfig {
    pub input: PathBuf,
    pub minsups: Vec<MinsupSpec>,
    pub models: Vec<Model>,
    pub repeat: usize,
    pub threads: usize,
    pub filter: bool,
}

/// Run every (threshold, model) cell `repeat` times and return the CSV
/// table: [`CSV_HEADER`], then one row per cell in sweep order with the
/// median wall time. A failed cell becomes a row with `error` in the
/// patterns column; the sweep continues.
///
/// With `threads > 1`, cells run in parallel worker threads. Each cell
/// builds its own model from the shared read-only dataset; nothing
/// mutable crosses threads. Peak memory is process-wide, so concurrent
/// cells inflate each other's readings.
pub fn run_bench(cfg: &BenchConfig) -> Result<String, CliError> {
    if cfg.repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    if cfg.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    if cfg.minsups.is_empty() || cfg.models.is_empty() {
        return Err(CliError::Usage(
            "need at least one threshold and one model".into(),
        ));
    }
    let d = read_dataset(&cfg.input)?;
    let cells: Vec<(MinsupSpec, Model)> = cfg
        .minsups
        .iter()
        .flat_map(|s| cfg.models.iter().map(move |&m| (s.clone(), m)))
        .collect();

    let run_cell = |(spec, model): &(MinsupSpec, Model)| -> String {
        let (theta, minsup_count) = spec.resolve(d.len());
        let params = MiningParams { theta, minsup_count };
        let mut walls = Vec::with_capacity(cfg.repeat);
        let mut last: Option<MineOutcome> = None;
        for _ in 0..cfg.repeat {
            let started = Instant::now();
            match mine_once(&d, *model, FlattenMode::Transformed, cfg.filter, &params) {
                Ok(outcome) => {
                    walls.push(started.elapsed().as_millis() as u64);
                    last = Some(outcome);
                }
                Err(_) => {
                    return format!("{},{},{},error,,,,", model.name(), theta, minsup_count);
                }
            }
        }
        walls.sort_unstable();
        let outcome = last.expect("repeat >= 1");
        RunReport {
            model: *model,
            theta,
            minsup_count,
            patterns: outcome.patterns.len(),
            wall_ms: walls[walls.len() / 2],
            peak_bytes: peak_rss_bytes(),
            nodes: outcome.nodes,
            compression: outcome.compression,
        }
        .csv_row()
    };

    let mut rows: Vec<String> = Vec::with_capacity(cells.len());
    if cfg.threads == 1 {
        rows.extend(cells.iter().map(run_cell));
    } else {
        let mut slots: Vec<Option<String>> = vec![None; cells.len()];
        let chunk = cells.len().div_ceil(cfg.threads);
        std::thread::scope(|scope| {
            for (cell_chunk, slot_chunk) in
                cells.chunks(chunk).zip(slots.chunks_mut(chunk))
            {
                scope.spawn(|| {
                    for (cell, slot) in cell_chunk.iter().zip(slot_chunk.iter_mut()) {
                        *slot = Some(run_cell(cell));
                    }
                });
            }
        });
        rows.extend(slots.into_iter().map(|s| s.expect("all cells ran")));
    }

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(csv)
}

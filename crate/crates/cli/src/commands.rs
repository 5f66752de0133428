use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use corrdim::corrint::{distance_matrix_capped, grid, GridConfig};
use corrdim::dimension::{estimate_grid, estimate_rows};
use corrdim::embedding::{embed, EmbeddingConfig};
use corrdim::export::{
    format_estimates_csv, format_matrix_csv, format_pairs_csv, format_scan_csv, format_summary_csv,
    format_taps_csv, format_vectors_csv, read_grid_csv, write_csv, write_grid_csv, write_heatmap_pgm,
    write_report_json, ConditionLabels, EmbeddingRecord, HeatmapRecord, InputRecord, PreprocessingRecord,
    ReportBuilder, RunRecord, StatRecord,
};
use corrdim::signal_io::{
    format_ascii_signal, gen_henon, gen_logistic, gen_sine, load_ascii_signal, load_manifest, DatasetManifest,
    RawSignal,
};
use corrdim::stats::{compare, threshold_scan, PairedConfig, ScanRow};
use corrdim::{Error, Kernel, Result};

use crate::args::*;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Ci(a) => ci(a),
        Command::Cd(a) => cd(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Scan(a) => scan(a),
        Command::Heatmap(a) => heatmap(a),
        Command::Synth(a) => synth(a),
        Command::Embed(a) => embed_cmd(a),
    }
}

fn load(args: &SignalArgs) -> Result<RawSignal> {
    let label = args
        .input
        .file_stem()
        .map_or_else(|| "signal".to_string(), |s| s.to_string_lossy().into_owned());
    let signal = load_ascii_signal(&args.input, args.sample_rate, &label)?;
    log::info!("{}: {} samples", args.input.display(), signal.len());
    Ok(signal)
}

fn out_dir(dir: &Path) -> Result<&Path> {
    fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    Ok(dir)
}

fn to_stdout_or(path: Option<&PathBuf>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_csv(contents, p),
        None => std::io::stdout()
            .lock()
            .write_all(contents.as_bytes())
            .map_err(|source| Error::Write {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn grid_config(g: &GridArgs) -> Result<GridConfig> {
    Ok(GridConfig {
        m_values: g.m.0.clone(),
        lag: g.lag as usize,
        fixed_count: g.fixed_count,
        r_values: g.thresholds.values()?,
        kernel: g.kernel.into(),
        metric: g.metric.into(),
        preprocessing: g.signal.pre.preprocessing(),
    })
}

fn signal_record(g: &GridArgs, cfg: &GridConfig) -> RunRecord {
    let fs = g.signal.sample_rate;
    RunRecord {
        input: InputRecord::Signal {
            path: path_string(&g.signal.input),
        },
        sample_rate_hz: Some(fs),
        preprocessing: Some(PreprocessingRecord::new(&cfg.preprocessing, fs)),
        embedding: Some(EmbeddingRecord {
            m_values: cfg.m_values.clone(),
            lag: cfg.lag,
            fixed_count: cfg.fixed_count,
        }),
        kernels: vec![cfg.kernel],
        metric: Some(cfg.metric),
        thresholds: cfg.r_values.clone(),
        scaling: None,
    }
}

fn ci(args: CiArgs) -> Result<()> {
    let g = &args.grid;
    let signal = load(&g.signal)?;
    let cfg = grid_config(g)?;
    let table = grid(&signal, &cfg)?;
    let taps = match (&cfg.preprocessing.filter, args.taps) {
        (Some(f), true) => Some(f.design(g.signal.sample_rate)?),
        _ => None,
    };

    let dir = out_dir(&g.out_dir)?;
    write_grid_csv(&table, dir.join("grid.csv"))?;
    if let Some(t) = taps {
        write_csv(&format_taps_csv(&t), dir.join("taps.csv"))?;
    }
    let report = ReportBuilder::new("ci")
        .config(signal_record(g, &cfg))
        .n_vectors(&table.m_values, &table.n_vectors)
        .build()?;
    write_report_json(&report, dir.join("report.json"))
}

fn cd(args: CdArgs) -> Result<()> {
    let g = &args.grid;
    let search = args.scaling.search();
    let (estimates, record, n_vectors) = if args.from_grid {
        let table = read_grid_csv(&g.signal.input)?;
        let estimates = estimate_rows(&table.m_values, &table.r_values, &table.c, &search)?;
        let record = RunRecord {
            input: InputRecord::Grid {
                path: path_string(&g.signal.input),
            },
            sample_rate_hz: None,
            preprocessing: None,
            embedding: None,
            kernels: Vec::new(),
            metric: None,
            thresholds: table.r_values,
            scaling: Some(search),
        };
        (estimates, record, Vec::new())
    } else {
        let signal = load(&g.signal)?;
        let cfg = grid_config(g)?;
        let table = grid(&signal, &cfg)?;
        let estimates = estimate_grid(&table, &search)?;
        let mut record = signal_record(g, &cfg);
        record.scaling = Some(search);
        let counts: Vec<[usize; 2]> = table.m_values.iter().zip(&table.n_vectors).map(|(&m, &n)| [m, n]).collect();
        (estimates, record, counts)
    };
    for e in &estimates {
        log::info!("m = {}: slope {} (r² {})", e.m, e.fit.slope, e.fit.r_squared);
    }

    let dir = out_dir(&g.out_dir)?;
    write_csv(&format_estimates_csv(&estimates), dir.join("estimates.csv"))?;
    let (m, n): (Vec<usize>, Vec<usize>) = n_vectors.iter().map(|[m, n]| (*m, *n)).unzip();
    let report = ReportBuilder::new("cd")
        .config(record)
        .n_vectors(&m, &n)
        .estimates(estimates)
        .build()?;
    write_report_json(&report, dir.join("report.json"))
}

fn paired_config(p: &PairedArgs, r_values: Vec<f64>) -> PairedConfig {
    PairedConfig {
        m: p.m as usize,
        lag: p.lag as usize,
        r_values,
        metric: p.metric.into(),
        preprocessing: p.pre.preprocessing(),
    }
}

fn paired_record(p: &PairedArgs, manifest: &DatasetManifest, cfg: &PairedConfig) -> RunRecord {
    let (a, b) = manifest.condition_labels();
    RunRecord {
        input: InputRecord::Manifest {
            path: path_string(&p.manifest),
            pairs: manifest.entries.len(),
            conditions: ConditionLabels {
                a: a.to_string(),
                b: b.to_string(),
            },
        },
        sample_rate_hz: Some(manifest.sample_rate_hz),
        preprocessing: Some(PreprocessingRecord::new(&cfg.preprocessing, manifest.sample_rate_hz)),
        embedding: Some(EmbeddingRecord {
            m_values: vec![cfg.m],
            lag: cfg.lag,
            fixed_count: false,
        }),
        kernels: Kernel::ALL.to_vec(),
        metric: Some(cfg.metric),
        thresholds: cfg.r_values.clone(),
        scaling: None,
    }
}

fn difference_label(manifest: &DatasetManifest) -> String {
    let (a, b) = manifest.condition_labels();
    format!("{a} - {b}")
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let p = &args.paired;
    let manifest = load_manifest(&p.manifest)?;
    let cfg = paired_config(p, vec![args.r]);
    let comparisons = compare(&manifest, &cfg)?;

    let dir = out_dir(&p.out_dir)?;
    for c in &comparisons {
        write_csv(&format_pairs_csv(&c.pairs), dir.join(format!("pairs_{}.csv", c.kernel)))?;
    }
    write_csv(&format_summary_csv(&comparisons), dir.join("summary.csv"))?;
    let label = difference_label(&manifest);
    let stats = comparisons
        .iter()
        .map(|c| {
            let row = ScanRow {
                kernel: c.kernel,
                r: args.r,
                m: cfg.m,
                stat: c.summary,
            };
            StatRecord::from_scan(&row, &label)
        })
        .collect();
    let report = ReportBuilder::new("compare")
        .config(paired_record(p, &manifest, &cfg))
        .stats(stats)
        .build()?;
    write_report_json(&report, dir.join("report.json"))
}

fn scan(args: ScanArgs) -> Result<()> {
    let p = &args.paired;
    let manifest = load_manifest(&p.manifest)?;
    let r_values = args.r_values.map_or_else(|| SCAN_THRESHOLDS.to_vec(), |t| t.0);
    let cfg = paired_config(p, r_values);
    let rows = threshold_scan(&manifest, &cfg)?;

    let dir = out_dir(&p.out_dir)?;
    write_csv(&format_scan_csv(&rows), dir.join("scan.csv"))?;
    let label = difference_label(&manifest);
    let report = ReportBuilder::new("scan")
        .config(paired_record(p, &manifest, &cfg))
        .stats(rows.iter().map(|r| StatRecord::from_scan(r, &label)).collect())
        .build()?;
    write_report_json(&report, dir.join("report.json"))
}

fn heatmap(args: HeatmapArgs) -> Result<()> {
    let s = &args.signal;
    let signal = load(s)?;
    let pre = s.pre.preprocessing();
    let embedding = EmbeddingConfig::new(args.m as usize, args.lag as usize);
    let series = embed(&pre.apply(&signal)?, &embedding)?;
    let matrix = distance_matrix_capped(&series, args.metric.into(), args.max_vectors)?;

    let dir = out_dir(&args.out_dir)?;
    let d_max = write_heatmap_pgm(&matrix, args.invert, dir.join("dij.pgm"))?;
    if args.csv {
        write_csv(&format_matrix_csv(&matrix), dir.join("dij.csv"))?;
    }
    let record = RunRecord {
        input: InputRecord::Signal {
            path: path_string(&s.input),
        },
        sample_rate_hz: Some(s.sample_rate),
        preprocessing: Some(PreprocessingRecord::new(&pre, s.sample_rate)),
        embedding: Some(EmbeddingRecord {
            m_values: vec![embedding.dim],
            lag: embedding.lag,
            fixed_count: false,
        }),
        kernels: Vec::new(),
        metric: Some(args.metric.into()),
        thresholds: Vec::new(),
        scaling: None,
    };
    let report = ReportBuilder::new("heatmap")
        .config(record)
        .n_vectors(&[embedding.dim], &[matrix.n()])
        .heatmap(HeatmapRecord {
            n_vectors: matrix.n(),
            d_max,
            inverted: args.invert,
        })
        .build()?;
    write_report_json(&report, dir.join("report.json"))
}

fn synth(args: SynthArgs) -> Result<()> {
    let signal = match args.kind {
        SynthKind::Logistic => gen_logistic(args.n, args.mu, args.x0.unwrap_or(0.3))?,
        SynthKind::Henon => gen_henon(args.n, args.a, args.b, args.x0.unwrap_or(0.0), args.y0, args.burn_in)?,
        SynthKind::Sine => gen_sine(args.n, args.freq, args.sample_rate, args.amplitude)?,
    };
    log::info!("{}", signal.source());
    to_stdout_or(args.out.as_ref(), &format_ascii_signal(signal.samples()))
}

fn embed_cmd(args: EmbedArgs) -> Result<()> {
    let signal = load(&args.signal)?;
    let prepared = args.signal.pre.preprocessing().apply(&signal)?;
    let series = embed(&prepared, &EmbeddingConfig::new(args.m as usize, args.lag as usize))?;
    to_stdout_or(args.out.as_ref(), &format_vectors_csv(&series))
}

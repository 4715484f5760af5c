use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pseudocone::bounds::{bound_curve, ilp_union_bound, intersection_lower, PairGeometry};
use pseudocone::fundamental_cone::{
    cone_inequalities, enumerate_rays, header_row, parse_generators, render_generators, sample_rays, select_subgroup,
    weight_histogram, Criterion, GeneratorSet,
};
use pseudocone::gf2codes::{
    builtin, enumerate_codewords, parse_parity_matrix, parse_poly, systematic_from_generator_poly, BinaryMatrix,
    Codeword, DEFAULT_MAX_K,
};
use pseudocone::pseudogeometry::{angle_deg, boundary_distance, ChannelParams};
use pseudocone::simulate::{lpd_full_fer, lpd_subgroup_fer, mld_subgroup_fer, FerEstimate, SimConfig};
use pseudocone::spanning::mst_angle_distribution;

use clap::ValueEnum;

use crate::args::{AnglesArgs, BoundsArgs, CodewordsArgs, MatrixSource, Mode, RaysArgs, SimArgs};
use crate::CliError;

/// In-memory result of a command; `main` writes the files and the manifest.
#[derive(Debug, Default)]
pub struct Run {
    pub outputs: Vec<(PathBuf, Vec<u8>)>,
    pub stdout: String,
    pub inputs: Vec<PathBuf>,
    pub matrix_source: Option<String>,
    pub generator_source: Option<String>,
    pub snr_grid: Vec<f64>,
    pub seed: Option<u64>,
}

/// Parses `lo:hi:step` (inclusive) or a single value.
pub fn parse_snr_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad SNR grid {text:?}, expected lo:hi:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (lo, hi, step) = match parts[..] {
        [x] => (x, x, 1.0),
        [lo, hi, step] => (lo, hi, step),
        _ => return Err(bad()),
    };
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && hi >= lo) {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

fn read_text(path: &Path, inputs: &mut Vec<PathBuf>) -> Result<String, CliError> {
    inputs.push(path.to_path_buf());
    std::fs::read_to_string(path).map_err(|e| CliError::Lib(pseudocone::Error::Io(format!("{}: {e}", path.display()))))
}

fn load_matrix(src: &MatrixSource, run: &mut Run) -> Result<Option<BinaryMatrix>, CliError> {
    let (h, desc) = if let Some(path) = &src.matrix {
        let text = read_text(path, &mut run.inputs)?;
        (parse_parity_matrix(&text)?, format!("file:{}", path.display()))
    } else if let Some(name) = &src.builtin {
        (builtin(name)?, format!("builtin:{name}"))
    } else if let Some(poly) = &src.poly {
        let n = src.length.ok_or_else(|| CliError::Usage("--poly needs --length".into()))?;
        (systematic_from_generator_poly(&parse_poly(poly)?, n)?, format!("poly:{poly}:n={n}"))
    } else {
        return Ok(None);
    };
    run.matrix_source = Some(desc);
    Ok(Some(h))
}

fn require_matrix(src: &MatrixSource, run: &mut Run) -> Result<BinaryMatrix, CliError> {
    load_matrix(src, run)?.ok_or_else(|| CliError::Usage("one of --matrix, --builtin or --poly is required".into()))
}

fn load_generators(path: &Path, run: &mut Run) -> Result<GeneratorSet, CliError> {
    let text = read_text(path, &mut run.inputs)?;
    let set = parse_generators(&text, &path.display().to_string())?;
    run.generator_source = Some(format!("file:{}", path.display()));
    Ok(set)
}

fn load_codewords(path: &Path, run: &mut Run) -> Result<Vec<Codeword>, CliError> {
    let set = load_generators(path, run)?;
    if let Some(r) = set.rays().iter().find(|r| !r.is_binary()) {
        return Err(CliError::Lib(pseudocone::Error::InvalidParameter(format!(
            "codeword file contains a non-binary vector {r}"
        ))));
    }
    Ok(set
        .rays()
        .iter()
        .map(|r| Codeword::new(r.values().iter().map(|&v| v as u8).collect()))
        .collect())
}

fn render_codewords(cws: &[Codeword]) -> String {
    let mut out = String::new();
    if let Some(c) = cws.first() {
        out += &header_row(c.bits.len());
        out.push('\n');
    }
    for c in cws {
        let row: Vec<String> = c.bits.iter().map(u8::to_string).collect();
        out += &row.join(",");
        out.push('\n');
    }
    out
}

pub fn rays(a: &RaysArgs) -> Result<Run, CliError> {
    let mut run = Run::default();
    let h = require_matrix(&a.source, &mut run)?;
    let sys = cone_inequalities(&h)?;
    let mut set = match a.sample {
        Some(trials) => {
            run.seed = Some(a.seed);
            sample_rays(&sys, trials, a.seed)?
        }
        None => enumerate_rays(&sys, a.max_rays)?,
    };
    set.matrix_id = run.matrix_source.clone().unwrap_or_default();
    if let Some(t) = a.wp_max {
        set = select_subgroup(&set, Criterion::WpAtMost(t));
    } else if let Some(k) = a.k_smallest {
        set = select_subgroup(&set, Criterion::KSmallest(k));
    }
    let mut csv = format!("# n={} source={} matrix={}\n", h.cols(), set.source, set.matrix_id);
    csv += &render_generators(&set);
    run.outputs.push((a.out.clone(), csv.into_bytes()));
    if let Some(path) = &a.histogram {
        run.outputs.push((path.clone(), weight_histogram(&set, a.bin_width)?.to_csv().into_bytes()));
    }
    let wp = set.min_pseudo_weight().map_or("-".to_string(), |w| format!("{w:.6}"));
    writeln!(run.stdout, "{} generators ({}), min pseudo-weight {wp}", set.len(), set.source).unwrap();
    Ok(run)
}

pub fn codewords(a: &CodewordsArgs) -> Result<Run, CliError> {
    let mut run = Run::default();
    let h = require_matrix(&a.source, &mut run)?;
    let all = enumerate_codewords(&h, DEFAULT_MAX_K)?;
    let weight = match a.weight {
        Some(w) => w,
        None => all.iter().map(|c| c.hamming_weight).filter(|&w| w > 0).min().unwrap_or(0),
    };
    let kept: Vec<Codeword> = all.into_iter().filter(|c| c.hamming_weight == weight && weight > 0).collect();
    run.outputs.push((a.out.clone(), render_codewords(&kept).into_bytes()));
    writeln!(run.stdout, "{} codewords of weight {weight}", kept.len()).unwrap();
    Ok(run)
}

pub fn bounds(a: &BoundsArgs) -> Result<Run, CliError> {
    let mut run = Run::default();
    let set = load_generators(&a.generators, &mut run)?;
    run.snr_grid = parse_snr_grid(&a.snr)?;
    ChannelParams::new(run.snr_grid[0], a.rate)?;
    let curve = bound_curve(&set, &run.snr_grid, a.rate)?;
    run.outputs.push((a.out.clone(), curve.to_csv(a.timing).into_bytes()));
    if let Some(path) = &a.tree_out {
        let ch = ChannelParams::new(*run.snr_grid.last().unwrap(), a.rate)?;
        let (_, tree) = ilp_union_bound(&set, &ch)?;
        let rays = set.rays();
        let mut csv = String::from("edge_i,edge_j,angle_deg,intersection_lower\n");
        for &(i, j) in &tree.edges {
            let theta = angle_deg(&rays[i], &rays[j]);
            let g = PairGeometry {
                r_i: boundary_distance(&rays[i], &ch),
                r_j: boundary_distance(&rays[j], &ch),
                theta,
                sigma: ch.sigma(),
            };
            writeln!(csv, "{i},{j},{theta},{:e}", intersection_lower(&g)).unwrap();
        }
        run.outputs.push((path.clone(), csv.into_bytes()));
    }
    writeln!(run.stdout, "{} SNR points over {} generators", curve.points.len(), set.len()).unwrap();
    Ok(run)
}

pub fn sim(a: &SimArgs) -> Result<Run, CliError> {
    let mut run = Run::default();
    run.seed = Some(a.seed);
    run.snr_grid = parse_snr_grid(&a.snr)?;
    let mode = a.mode.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mismatch = |what: &str| CliError::Usage(format!("--mode {mode} does not accept {what}"));
    let has_matrix = a.source.matrix.is_some() || a.source.builtin.is_some() || a.source.poly.is_some();
    let need_rate = |r: Option<f64>| r.ok_or_else(|| CliError::Usage("--rate is required for this input".into()));
    enum Job {
        Ml(Vec<Codeword>),
        Lpd(GeneratorSet),
        Full(BinaryMatrix),
    }
    let (job, rate) = match a.mode {
        Mode::MlSub => {
            if a.generators.is_some() {
                return Err(mismatch("--generators"));
            }
            match (&a.codewords, has_matrix) {
                (Some(path), false) => (Job::Ml(load_codewords(path, &mut run)?), need_rate(a.rate)?),
                (None, true) => {
                    let h = require_matrix(&a.source, &mut run)?;
                    let all = enumerate_codewords(&h, DEFAULT_MAX_K)?;
                    let d = all.iter().map(|c| c.hamming_weight).filter(|&w| w > 0).min().unwrap_or(0);
                    let cws = all.into_iter().filter(|c| c.hamming_weight == d && d > 0).collect();
                    (Job::Ml(cws), a.rate.unwrap_or(h.params().rate()))
                }
                _ => return Err(CliError::Usage("ml-sub needs exactly one of --codewords or a matrix".into())),
            }
        }
        Mode::LpdSub => {
            if a.codewords.is_some() {
                return Err(mismatch("--codewords"));
            }
            if has_matrix {
                return Err(mismatch("a matrix"));
            }
            let path = a.generators.as_ref().ok_or_else(|| CliError::Usage("lpd-sub needs --generators".into()))?;
            (Job::Lpd(load_generators(path, &mut run)?), need_rate(a.rate)?)
        }
        Mode::LpdFull => {
            if a.codewords.is_some() || a.generators.is_some() {
                return Err(mismatch("--codewords or --generators"));
            }
            let h = require_matrix(&a.source, &mut run)?;
            let rate = a.rate.unwrap_or(h.params().rate());
            (Job::Full(h), rate)
        }
    };
    let mut csv = format!("{}\n", FerEstimate::csv_header());
    for &snr in &run.snr_grid {
        let cfg = SimConfig {
            snr_db: snr,
            seed: a.seed,
            max_frames: a.max_frames,
            target_errors: a.target_errors,
            rate,
        };
        let est = match &job {
            Job::Ml(cws) => mld_subgroup_fer(cws, &cfg)?,
            Job::Lpd(set) => lpd_subgroup_fer(set, &cfg)?,
            Job::Full(h) => lpd_full_fer(h, &cfg)?,
        };
        csv += &est.csv_row(snr);
        csv.push('\n');
    }
    run.outputs.push((a.out.clone(), csv.into_bytes()));
    writeln!(run.stdout, "{} SNR points simulated", run.snr_grid.len()).unwrap();
    Ok(run)
}

pub fn angles(a: &AnglesArgs) -> Result<Run, CliError> {
    let mut run = Run::default();
    let set = load_generators(&a.generators, &mut run)?;
    let d = mst_angle_distribution(&set)?;
    let mut csv = String::from("edge_i,edge_j,angle_deg\n");
    for (&(i, j), ang) in d.tree.edges.iter().zip(&d.angles) {
        writeln!(csv, "{i},{j},{ang}").unwrap();
    }
    run.outputs.push((a.out.clone(), csv.into_bytes()));
    write!(run.stdout, "mean_deg,std_deg\n{:.6},{:.6}\n", d.mean, d.std).unwrap();
    Ok(run)
}

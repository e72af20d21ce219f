//! qchar: file-based front end for the workspace.  Builds characters by
//! completion, runs screening-kernel verdicts, exports monomial graphs,
//! solves rank-one Bethe systems against the transfer-matrix oracle, and
//! tabulates the difference-operator reduction cross-check.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 algorithmic failure
//! (completion limit, kernel violation, missing solutions, failed
//! cross-check) — so automation can tell bad invocations from genuine
//! negative results.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qc_bethe::oracle::sector_eigenvalues;
use qc_bethe::{solve_sl2, BaeForm, EigenvalueSl2, Site};
use qc_cartan::{CartanData, Series};
use qc_charbuild::{build_graph, export_dot, fm_expand, FmLimits, HighestWeightData};
use qc_dsred::compare_with_qcharacter;
use qc_screening::{apply_screening, in_kernel_all};
use qc_sl2::{chi_irreducible, chi_wr, decompose_into_segments, is_irregular, mukhin_counterexample};
use qc_ypoly::YPoly;

#[derive(Parser)]
#[command(name = "qchar", version, about = "symbolic q-character toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Complete a highest weight to a full character (JSON out)
    Char(CharArgs),
    /// Per-node screening-kernel verdict for a polynomial
    Screen(ScreenArgs),
    /// Export the monomial graph of a character as DOT
    Graph(GraphArgs),
    /// Solve a rank-one Bethe system; optional oracle comparison
    Bethe(BetheArgs),
    /// Reduction coefficients vs fundamental characters, as a table
    Dsred(DsredArgs),
    /// Rank-one characters and segment decompositions
    Sl2(Sl2Args),
}

#[derive(Args)]
struct TypeArgs {
    /// Series letter: A, B, C or D
    #[arg(long)]
    series: String,
    #[arg(long)]
    rank: usize,
}

#[derive(Args)]
struct WeightArgs {
    /// Fundamental weight node (with --pos)
    #[arg(long)]
    fundamental: Option<usize>,
    /// Lattice position of the fundamental weight
    #[arg(long, default_value_t = 0)]
    pos: i64,
    /// Inline root spec, e.g. 1:[0,2],2:[1]
    #[arg(long)]
    roots: Option<String>,
    /// Highest-weight JSON file (format of this tool's own output)
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct CharArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[command(flatten)]
    weight: WeightArgs,
    /// Write the character JSON here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// Also write the monomial graph as DOT
    #[arg(long)]
    dot: Option<String>,
    /// Verify kernel membership and report on stderr
    #[arg(long)]
    check_kernel: bool,
    #[arg(long, default_value_t = 200_000)]
    max_terms: usize,
    #[arg(long, default_value_t = 10_000)]
    max_iterations: usize,
}

#[derive(Args)]
struct ScreenArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Polynomial JSON file
    #[arg(long)]
    input: Option<String>,
    /// Built-in test polynomial (choices: mukhin)
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[command(flatten)]
    weight: WeightArgs,
    /// Write DOT here instead of stdout
    #[arg(long)]
    dot: Option<String>,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormArg {
    /// scalar -q^{-N}
    Standard,
    /// scalar q^{2m} (residue cancellation)
    Pole,
}

#[derive(Args)]
struct BetheArgs {
    /// Sites as r:b pairs, e.g. 1:1.0,1:1.3
    #[arg(long)]
    sites: String,
    /// Number of Bethe roots
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.3)]
    q: f64,
    #[arg(long, value_enum, default_value_t = FormArg::Pole)]
    form: FormArg,
    /// Number of random Newton seeds
    #[arg(long, default_value_t = 32)]
    seeds: usize,
    /// RNG seed for the seed cloud
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Seed box re_min,re_max,im_min,im_max
    #[arg(long, default_value = "-8,4,-1,1")]
    seed_box: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Minimum number of distinct solutions for exit code 0
    #[arg(long, default_value_t = 1)]
    want: usize,
    /// Write an eigenvalue-ratio comparison against the transfer matrix
    #[arg(long)]
    csv: Option<String>,
    /// Add a residue table for roots perturbed by this amount
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DsredArgs {
    /// Number of diagonal entries N (type A_{N-1})
    #[arg(long)]
    n: usize,
    /// Single component index; default: the whole 1..N-1 table
    #[arg(long)]
    i: Option<usize>,
    /// Base lattice position
    #[arg(long, default_value_t = 0)]
    a: i64,
}

#[derive(Args)]
struct Sl2Args {
    /// Drinfeld root positions, e.g. 0,2,-4
    #[arg(long)]
    roots: Option<String>,
    /// Single string center,length
    #[arg(long)]
    wr: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

enum Failure {
    Usage(String),
    Algorithm(String),
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Failure {
        Failure::Usage(e.to_string())
    }
    fn algo(e: impl std::fmt::Display) -> Failure {
        Failure::Algorithm(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code: u8 = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Char(a) => cmd_char(a),
        Cmd::Screen(a) => cmd_screen(a),
        Cmd::Graph(a) => cmd_graph(a),
        Cmd::Bethe(a) => cmd_bethe(a),
        Cmd::Dsred(a) => cmd_dsred(a),
        Cmd::Sl2(a) => cmd_sl2(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Algorithm(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
    }
}

fn build_type(ty: &TypeArgs) -> Result<CartanData, Failure> {
    let series =
        Series::parse(&ty.series).ok_or_else(|| Failure::Usage(format!("unknown series {:?}", ty.series)))?;
    CartanData::build(series, ty.rank).map_err(Failure::usage)
}

fn parse_roots_spec(s: &str) -> Result<HighestWeightData, Failure> {
    let mut hw = HighestWeightData::new();
    for chunk in s.split(']') {
        let chunk = chunk.trim().trim_start_matches(',').trim();
        if chunk.is_empty() {
            continue;
        }
        let (node, list) = chunk
            .split_once(":[")
            .ok_or_else(|| Failure::Usage(format!("bad root spec near {chunk:?}")))?;
        let node: usize = node.trim().parse().map_err(Failure::usage)?;
        for tok in list.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            hw.add_root(node, tok.parse().map_err(Failure::usage)?);
        }
    }
    if hw.is_empty() {
        return Err(Failure::Usage("empty root spec".into()));
    }
    Ok(hw)
}

fn build_weight(w: &WeightArgs, cd: &CartanData) -> Result<HighestWeightData, Failure> {
    let picks =
        usize::from(w.fundamental.is_some()) + usize::from(w.roots.is_some()) + usize::from(w.input.is_some());
    if picks != 1 {
        return Err(Failure::Usage(
            "choose exactly one of --fundamental, --roots, --input".into(),
        ));
    }
    let hw = if let Some(i) = w.fundamental {
        if i == 0 || i > cd.rank {
            return Err(Failure::Usage(format!("node {i} outside 1..={}", cd.rank)));
        }
        let mut hw = HighestWeightData::new();
        hw.add_root(i, w.pos);
        hw
    } else if let Some(spec) = &w.roots {
        parse_roots_spec(spec)?
    } else {
        let text = fs::read_to_string(w.input.as_ref().unwrap()).map_err(Failure::usage)?;
        HighestWeightData::from_json(&text).map_err(Failure::usage)?
    };
    if let Some(&bad) = hw.nodes().collect::<Vec<_>>().iter().find(|&&i| i > cd.rank) {
        return Err(Failure::Usage(format!("node {bad} outside 1..={}", cd.rank)));
    }
    Ok(hw)
}

fn emit(text: &str, path: Option<&str>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(Failure::usage),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {
                    std::process::exit(0);
                }
                r => r.map_err(Failure::usage),
            }
        }
    }
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("QCHAR_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("QCHAR_THREADS={v:?} is not a thread count")))
            .map(|t| t.max(1)),
        Err(_) => Ok(1),
    }
}

fn cmd_char(a: CharArgs) -> Result<(), Failure> {
    let cd = build_type(&a.ty)?;
    let hw = build_weight(&a.weight, &cd)?;
    let limits = FmLimits {
        max_terms: a.max_terms,
        max_iterations: a.max_iterations,
    };
    let poly = fm_expand(&cd, &hw, limits).map_err(Failure::algo)?;
    emit(&poly.to_json(), a.out.as_deref())?;
    if let Some(dot) = &a.dot {
        let g = build_graph(&cd, &poly, &hw).map_err(Failure::algo)?;
        fs::write(dot, export_dot(&g)).map_err(Failure::usage)?;
    }
    if a.check_kernel {
        if in_kernel_all(&cd, &poly).map_err(Failure::algo)? {
            eprintln!("kernel: PASS");
        } else {
            return Err(Failure::Algorithm("kernel: FAIL".into()));
        }
    }
    Ok(())
}

fn cmd_screen(a: ScreenArgs) -> Result<(), Failure> {
    let cd = build_type(&a.ty)?;
    let (poly, note) = match (&a.input, &a.builtin) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(Failure::usage)?;
            (YPoly::from_json(&text).map_err(Failure::usage)?, None)
        }
        (None, Some(name)) if name == "mukhin" => (
            mukhin_counterexample(),
            Some("note: in every kernel, yet not an irreducible character (two dominant terms)"),
        ),
        (None, Some(name)) => return Err(Failure::Usage(format!("unknown builtin {name:?}"))),
        _ => return Err(Failure::Usage("choose exactly one of --input, --builtin".into())),
    };
    let mut witness = None;
    for i in 1..=cd.rank {
        let image = apply_screening(&cd, i, &poly).map_err(Failure::algo)?;
        if image.is_zero() {
            println!("node {i}: PASS");
        } else {
            println!("node {i}: FAIL");
            witness.get_or_insert(image);
        }
    }
    if let Some(note) = note {
        println!("{note}");
    }
    match witness {
        Some(w) => Err(Failure::Algorithm(format!("nonzero image: {}", w.to_json()))),
        None => Ok(()),
    }
}

fn cmd_graph(a: GraphArgs) -> Result<(), Failure> {
    let cd = build_type(&a.ty)?;
    let hw = build_weight(&a.weight, &cd)?;
    let poly = fm_expand(&cd, &hw, FmLimits::default()).map_err(Failure::algo)?;
    let g = build_graph(&cd, &poly, &hw).map_err(Failure::algo)?;
    emit(&export_dot(&g), a.dot.as_deref())
}

fn parse_sites(s: &str) -> Result<Vec<Site>, Failure> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (r, b) = part
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("bad site {part:?}, want r:b")))?;
        out.push(Site::new(
            r.trim().parse().map_err(Failure::usage)?,
            Complex64::new(b.trim().parse().map_err(Failure::usage)?, 0.0),
        ));
    }
    if out.is_empty() {
        return Err(Failure::Usage("no sites given".into()));
    }
    Ok(out)
}

fn cmd_bethe(a: BetheArgs) -> Result<(), Failure> {
    let sites = parse_sites(&a.sites)?;
    let q = Complex64::new(a.q, 0.0);
    let form = match a.form {
        FormArg::Standard => BaeForm::Standard,
        FormArg::Pole => BaeForm::PoleCancellation,
    };
    let boxv: Vec<f64> = a
        .seed_box
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(Failure::usage)?;
    let [re0, re1, im0, im1] = boxv.as_slice() else {
        return Err(Failure::Usage("seed box needs four numbers".into()));
    };

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let seeds: Vec<Vec<Complex64>> = (0..a.seeds)
        .map(|_| {
            (0..a.m)
                .map(|_| {
                    Complex64::new(
                        re0 + (re1 - re0) * rng.gen::<f64>(),
                        im0 + (im1 - im0) * rng.gen::<f64>(),
                    )
                })
                .collect()
        })
        .collect();
    let sols = solve_sl2(&sites, a.m, q, form, &seeds, a.tol, threads()?);

    let mut sol_values = Vec::new();
    for s in &sols {
        let eig = EigenvalueSl2::delta_pole_consistent(q, &sites, &s.roots).map_err(Failure::usage)?;
        let mut entry = serde_json::json!({
            "roots": s.roots.iter().map(|w| vec![w.re, w.im]).collect::<Vec<_>>(),
            "residual": s.residual,
            "residues": eig.residue_checks(1e-3),
        });
        if let Some(eps) = a.perturb {
            let mut rows = Vec::new();
            for (k, &w) in s.roots.iter().enumerate() {
                let mut moved = s.roots.clone();
                moved[k] = w + eps;
                let off = EigenvalueSl2::delta_pole_consistent(q, &sites, &moved)
                    .map_err(Failure::usage)?;
                rows.push(serde_json::json!({
                    "root": k,
                    "residue": eig.residue_check(k, 1e-3),
                    "perturbed": off.residue_check(k, 1e-3),
                }));
            }
            entry["perturbation"] = serde_json::Value::Array(rows);
        }
        sol_values.push(entry);
    }
    let truncation = sols
        .first()
        .map(|s| EigenvalueSl2::delta_pole_consistent(q, &sites, &s.roots).map(|e| e.truncation))
        .transpose()
        .map_err(Failure::usage)?
        .unwrap_or(0);
    let report = serde_json::json!({
        "q": a.q,
        "m": a.m,
        "truncation": truncation,
        "solutions": sol_values,
    });
    emit(&report.to_string(), a.out.as_deref())?;

    if let Some(csv) = &a.csv {
        if a.m == 0 {
            return Err(Failure::Usage("--csv needs at least one root".into()));
        }
        if sites.iter().any(|s| s.r != 1) {
            return Err(Failure::Usage("--csv compares spin-1/2 chains: all sites need r=1".into()));
        }
        let sol = sols
            .first()
            .ok_or_else(|| Failure::Algorithm("no solution to compare".into()))?;
        let bs: Vec<Complex64> = sites.iter().map(|s| s.b).collect();
        let lam0 = EigenvalueSl2::delta_pole_consistent(q, &sites, &[]).map_err(Failure::usage)?;
        let lam1 =
            EigenvalueSl2::delta_pole_consistent(q, &sites, &sol.roots).map_err(Failure::usage)?;
        let mut text = String::from("z,ratio_re,ratio_im,oracle_err\n");
        for &z in &[0.17, 0.44, 0.71, 1.13, 1.57] {
            let zc = Complex64::new(z, 0.0);
            let ratio = lam0.baxter_eigenvalue(zc).map_err(Failure::algo)?
                / lam1.baxter_eigenvalue(zc).map_err(Failure::algo)?;
            let eigs = sector_eigenvalues(zc, &bs, q).map_err(Failure::algo)?;
            let err = eigs[1]
                .iter()
                .map(|&e| (eigs[0][0] / e - ratio).norm())
                .fold(f64::INFINITY, f64::min);
            text.push_str(&format!("{z},{},{},{:e}\n", ratio.re, ratio.im, err));
        }
        fs::write(csv, text).map_err(Failure::usage)?;
    }

    if sols.len() < a.want {
        return Err(Failure::Algorithm(format!(
            "found {} solution(s), wanted {}",
            sols.len(),
            a.want
        )));
    }
    Ok(())
}

fn cmd_dsred(a: DsredArgs) -> Result<(), Failure> {
    if a.n < 2 {
        return Err(Failure::Usage("need --n at least 2".into()));
    }
    let picks: Vec<usize> = match a.i {
        Some(i) => vec![i],
        None => (1..a.n).collect(),
    };
    let mut ok = true;
    for i in picks {
        match compare_with_qcharacter(a.n, i, a.a) {
            Ok(out) if out.matches => {
                println!("N={} i={i}: PASS shift={} terms={}", a.n, out.shift, out.terms)
            }
            Ok(out) => {
                ok = false;
                println!("N={} i={i}: FAIL shift={} terms={}", a.n, out.shift, out.terms)
            }
            Err(qc_dsred::DsError::IndexOutOfRange { n, i }) => {
                return Err(Failure::Usage(format!("index i={i} out of range for N={n}")))
            }
            Err(e) => {
                ok = false;
                println!("N={} i={i}: FAIL ({e})", a.n)
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Algorithm("reduction mismatch".into()))
    }
}

fn cmd_sl2(a: Sl2Args) -> Result<(), Failure> {
    match (&a.roots, &a.wr) {
        (Some(spec), None) => {
            let roots: Vec<i64> = spec
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(Failure::usage)?;
            let segs = decompose_into_segments(&roots);
            let seg_list: Vec<String> = segs.iter().map(|s| format!("({},{})", s.center, s.len)).collect();
            println!("segments: {}", seg_list.join(" "));
            println!("irregular: {}", is_irregular(&roots));
            emit(&chi_irreducible(&roots).to_json(), a.out.as_deref())
        }
        (None, Some(spec)) => {
            let (c, r) = spec
                .split_once(',')
                .ok_or_else(|| Failure::Usage("want --wr center,length".into()))?;
            let c: i64 = c.trim().parse().map_err(Failure::usage)?;
            let r: u32 = r.trim().parse().map_err(Failure::usage)?;
            emit(&chi_wr(c, r).to_json(), a.out.as_deref())
        }
        _ => Err(Failure::Usage("choose exactly one of --roots, --wr".into())),
    }
}

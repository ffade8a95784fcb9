use std::fs;
use std::path::{Path, PathBuf};

use raf_core::af::{self, sort_extensions, Extension};
use raf_core::encode::{encode as encode_raf, Fragment};
use raf_core::parse::{parse_af, parse_caf, parse_raf, render_raf};
use raf_core::qbf::format::{read_qdimacs, write_qcir, write_qdimacs, Circuit, QdimacsOptions};
use raf_core::qbf::{evaluate_qbf, prenex_cnf, Qbf, Quant};
use raf_core::raf::{self as semantics, Maximality};
use raf_core::td::{heuristic_td, heuristic_td_with, primal_raf, read_pace, validate_td, write_pace};
use raf_core::translate::{af_to_raf, caf_oracle, caf_to_raf, cred_hardness_instance, hardness_instance, twofold_to_raf};
use raf_core::{random, Af, Caf, Config, Error, Mode, Raf, RcClass};
use thiserror::Error as ThisError;

use crate::{
    report, DecomposeArgs, EncodeArgs, From, GenerateArgs, InputKind, Kind, MaxReading, QbfEvalArgs, QbfFormat,
    SolveArgs, Task, TranslateArgs, NO, YES,
};

#[derive(Debug, ThisError)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(Error::CapExceeded { .. }) => 3,
            Failure::Io { .. } | Failure::Core(_) => 2,
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(yes: bool) -> u8 {
    println!("{}", if yes { "YES" } else { "NO" });
    if yes {
        YES
    } else {
        NO
    }
}

enum Input {
    Af(Af),
    Raf(Raf),
    Caf(Caf),
}

fn load(path: &Path, kind: InputKind) -> Result<Input, Failure> {
    let text = read(path)?;
    let kind = match kind {
        InputKind::Auto => match path.extension().and_then(|e| e.to_str()) {
            Some("af") => InputKind::Af,
            Some("caf") => InputKind::Caf,
            _ if text.lines().any(|l| l.trim_start().starts_with("constraint:")) => InputKind::Caf,
            _ => InputKind::Raf,
        },
        k => k,
    };
    Ok(match kind {
        InputKind::Af => Input::Af(parse_af(&text)?),
        InputKind::Caf => Input::Caf(parse_caf(&text)?),
        _ => Input::Raf(parse_raf(&text)?),
    })
}

/// Any input viewed as a RAF; plain frameworks get no conditions.
fn load_raf(path: &Path) -> Result<Raf, Failure> {
    Ok(match load(path, InputKind::Auto)? {
        Input::Af(af) => Raf::new(af, Mode::Classical),
        Input::Raf(r) => r,
        Input::Caf(c) => Raf::new(c.af, Mode::Classical),
    })
}

pub fn solve(a: &SolveArgs, cfg: &Config) -> Outcome {
    let max = match a.maximality {
        MaxReading::Base => Maximality::BaseAf,
        MaxReading::Rejected => Maximality::Rejected,
    };
    let input = load(&a.file, a.input)?;
    let af = match &input {
        Input::Af(af) => af,
        Input::Raf(r) => &r.af,
        Input::Caf(c) => &c.af,
    };
    let query = match (a.task, &a.arg) {
        (Task::Cred | Task::Skept, None) => return Err(Failure::Usage(format!("--arg is required for {:?}", a.task).to_lowercase())),
        (_, Some(name)) => Some(af.index_of(name).ok_or_else(|| Error::UnknownArgument(name.clone()))?),
        _ => None,
    };
    if let (Task::Cons, Input::Raf(r)) = (a.task, &input) {
        return Ok(verdict(semantics::cons_with(r, a.sem, cfg, max)?));
    }
    if let (Task::Cred, Input::Raf(r), Some(name)) = (a.task, &input, &a.arg) {
        return Ok(verdict(semantics::cred_with(r, a.sem, name, cfg, max)?));
    }
    let mut exts: Vec<Extension> = match &input {
        Input::Af(af) => af::enumerate_with(af, a.sem, cfg)?,
        Input::Raf(r) => semantics::enumerate_extensions_with(r, a.sem, cfg, max)?,
        Input::Caf(c) => caf_oracle(c, a.sem, cfg)?
            .into_iter()
            .map(|s| Extension { members: s, range: af::range(&c.af, s) })
            .collect(),
    };
    sort_extensions(af, &mut exts);
    Ok(match a.task {
        Task::Enum => {
            print!("{}", report::render(af, &exts, a.format));
            0
        }
        Task::Count => {
            println!("{}", exts.len());
            0
        }
        Task::Cons => verdict(!exts.is_empty()),
        Task::Cred => verdict(exts.iter().any(|e| e.members.contains(query.unwrap_or_default()))),
        Task::Skept => verdict(exts.iter().all(|e| e.members.contains(query.unwrap_or_default()))),
    })
}

pub fn encode(a: &EncodeArgs, cfg: &Config) -> Outcome {
    let raf = load_raf(&a.file)?;
    let fragment = a.fragment.unwrap_or_else(|| {
        if raf.rc_vars().is_empty() && (0..raf.af.len()).all(|i| raf.conditions(i).is_empty()) {
            Fragment::Stab
        } else {
            Fragment::for_class(raf.classify())
        }
    });
    let g = primal_raf(&raf);
    let td = match &a.td {
        Some(p) => read_pace(&read(p)?, Some(&g))?,
        None => heuristic_td(&g),
    };
    let e = encode_raf(&raf, &td, fragment)?;
    let prefix = a.out.clone().unwrap_or_else(|| {
        let stem = a.file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
        PathBuf::from(format!("{stem}.{fragment}"))
    });
    let with_ext = |ext: &str| {
        let mut s = prefix.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    let (qbf_path, text, provenance) = match a.format {
        QbfFormat::Qdimacs => {
            let q = prenex_cnf(&e.qbf);
            let order: Vec<String> = q.prefix_vars().cloned().collect();
            let text = write_qdimacs(&q, QdimacsOptions { names: true, allow_dnf: false })?;
            (with_ext(".qdimacs"), text, e.numbered_provenance(&order))
        }
        QbfFormat::Qcir => (with_ext(".qcir"), write_qcir(&e.qbf)?, e.provenance_json()),
    };
    let prov_path = with_ext(".provenance.json");
    write(&qbf_path, &text)?;
    let prov = serde_json::to_string_pretty(&provenance).expect("provenance serializes");
    write(&prov_path, &(prov + "\n"))?;
    println!("{}", qbf_path.display());
    println!("{}", prov_path.display());
    println!("c fragment {fragment}");
    println!("c width source={} induced={}", e.source_width, e.induced.width());
    if a.eval {
        return Ok(verdict(evaluate_qbf(&e.qbf, cfg.caps.qbf_vars)?));
    }
    Ok(0)
}

pub fn decompose(a: &DecomposeArgs) -> Outcome {
    let raf = load_raf(&a.file)?;
    let g = primal_raf(&raf);
    if let Some(p) = &a.check {
        let td = read_pace(&read(p)?, Some(&g))?;
        let w = validate_td(&g, &td)?;
        println!("c valid width {w}");
        return Ok(0);
    }
    let td = heuristic_td_with(&g, a.heuristic);
    let mut text = format!("c width {}\n", td.width());
    text.push_str(&write_pace(&td, if a.names { None } else { Some(&g) }));
    emit(a.out.as_ref(), &text)?;
    Ok(0)
}

pub fn translate(a: &TranslateArgs) -> Outcome {
    let text = read(&a.file)?;
    let out = match a.from {
        From::Af => render_raf(&af_to_raf(&parse_af(&text)?)),
        From::Caf => {
            let sem = a.sem.ok_or_else(|| Failure::Usage("--sem is required for --from caf".into()))?;
            let sim = caf_to_raf(&parse_caf(&text)?, sem)?;
            format!("% query semantics: {}\n{}", sim.semantics, render_raf(&sim.raf))
        }
        From::Twofold => {
            let af = parse_af(&text)?;
            let s = af.set_of(&a.shrinking)?;
            render_raf(&twofold_to_raf(&af, s)?)
        }
    };
    emit(a.out.as_ref(), &out)?;
    Ok(0)
}

fn random_input(a: &GenerateArgs) -> Result<Qbf, Failure> {
    let mut r = random::rng(a.seed);
    let (b, p) = (a.block, a.parts);
    Ok(match a.kind {
        Kind::SatSimple => random::qbf(&mut r, Quant::Exists, &[b], p, 3, false),
        Kind::Qsat2Prop | Kind::Qsat2Tight => random::qbf_exists_forall_dnf(&mut r, b, b, p, 3),
        Kind::Qsat3Disj => random::qbf_efe_cnf(&mut r, b, b, b, p, 3),
        Kind::DwCred => match a.class {
            RcClass::Simple => random::qbf(&mut r, Quant::Forall, &[b, b], p, 3, false),
            RcClass::Propositional => random::qbf(&mut r, Quant::Forall, &[b, b, b], p, 3, true),
            RcClass::Disjunctive => random::qbf(&mut r, Quant::Forall, &[b, b, b, b], p, 3, false),
            c => return Err(Error::Unsupported(format!("no credulous generator for the {c} class")).into()),
        },
    })
}

pub fn generate(a: &GenerateArgs) -> Outcome {
    let q = match &a.file {
        Some(p) => read_qdimacs(&read(p)?)?,
        None => random_input(a)?,
    };
    let mut out = format!("% input: {q}\n");
    let cls = match a.kind {
        Kind::SatSimple => RcClass::Simple,
        Kind::Qsat2Prop => RcClass::Propositional,
        Kind::Qsat2Tight => RcClass::Tight,
        Kind::Qsat3Disj => RcClass::Disjunctive,
        Kind::DwCred => {
            let c = cred_hardness_instance(&q, a.class)?;
            let reading = match c.maximality {
                Maximality::BaseAf => "base",
                Maximality::Rejected => "rejected",
            };
            out.push_str(&format!("% query: {}\n% maximality: {reading}\n", c.query));
            out.push_str(&render_raf(&c.raf));
            emit(a.out.as_ref(), &out)?;
            return Ok(0);
        }
    };
    out.push_str(&render_raf(&hardness_instance(&q, cls)?));
    emit(a.out.as_ref(), &out)?;
    Ok(0)
}

pub fn qbf_eval(a: &QbfEvalArgs, cfg: &Config) -> Outcome {
    let text = read(&a.file)?;
    let cap = cfg.caps.qbf_vars;
    let yes = if text.trim_start().to_ascii_uppercase().starts_with("#QCIR") {
        Circuit::parse(&text)?.evaluate(cap)?
    } else {
        evaluate_qbf(&read_qdimacs(&text)?, cap)?
    };
    Ok(verdict(yes))
}

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use rmc::automata::text::{parse_items, write_nfa, Item};
use rmc::automata::Nfa;
use rmc::ind1::{a1_nfa, check_safety_ind1, check_safety_ind1_boxes, ind1_boxes_min_dfa, ind1_min_dfa};
use rmc::interp::{check_certificates, check_safety_indb, parse_certificate, Certificate};
use rmc::model::{catalog, ladder, model, parse_model, print_model, Rts};
use rmc::oracle::LengthSlice;
use rmc::verdict::Verdict;

use crate::args::*;
use crate::report::RunReport;
use crate::resolve_budget;

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Check(a) => cmd_check(&a, out),
        Command::Certify(a) => cmd_certify(&a, out),
        Command::Table(a) => cmd_table(&a, out),
        Command::Oracle(a) => cmd_oracle(&a, out),
        Command::Dfa(a) => cmd_dfa(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
    }
}

/// A model file if the path exists, otherwise a built-in model of that name.
pub fn load_model(spec: &str) -> Result<(String, Rts)> {
    let path = Path::new(spec);
    if path.exists() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        let r = parse_model(&text).with_context(|| format!("in {spec}"))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok((name, r));
    }
    match model(spec) {
        Some(m) => Ok((m.name.to_string(), m.rts)),
        None => bail!("no model file or built-in model named `{spec}`"),
    }
}

fn load_unsafe(r: &Rts, args: &UnsafeArgs) -> Result<(String, Nfa)> {
    if let Some(name) = &args.name {
        let set = r.unsafe_set(name).ok_or_else(|| {
            let known: Vec<&str> = r.unsafe_sets.iter().map(|(n, _)| n.as_str()).collect();
            anyhow!("the model has no unsafe set `{name}` (known: {})", known.join(", "))
        })?;
        return Ok((name.clone(), set.clone()));
    }
    let path = args.file.as_ref().expect("clap requires one unsafe source");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut blocks = parse_items(&text)?.into_iter().filter_map(|i| match i {
        Item::Block(b) => Some(b),
        Item::Alphabet { .. } => None,
    });
    let block = blocks
        .next()
        .ok_or_else(|| anyhow!("{} holds no automaton", path.display()))?;
    if blocks.next().is_some() {
        bail!("{} must hold exactly one automaton", path.display());
    }
    let set = block
        .to_nfa(&r.alphabet)
        .with_context(|| format!("in {}", path.display()))?;
    Ok((block.name, set))
}

fn emit(report: &RunReport, format: Format, out: &mut dyn Write) -> Result<i32> {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    out.write_all(text.as_bytes())?;
    Ok(report.exit_code())
}

pub fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let budget = resolve_budget(a.budget_states)?;
    let (name, r) = load_model(&a.model)?;
    let (_, unsafe_set) = load_unsafe(&r, &a.unsafe_set)?;
    let start = Instant::now();
    let (method, verdict) = match (a.method, a.engine) {
        (Method::Ind1, Engine::Boxes) => ("ind1".to_string(), check_safety_ind1_boxes(&r, &unsafe_set, budget)?),
        (Method::Ind1, Engine::A1) => ("ind1".to_string(), check_safety_ind1(&r, &unsafe_set, budget)?),
        (Method::Indb, _) => (
            format!("indb:{}", a.bound),
            check_safety_indb(&r, &unsafe_set, a.bound, budget)?,
        ),
    };
    let report = RunReport::new(&name, &method, &r.alphabet, &verdict, start.elapsed());
    emit(&report, a.format, out)
}

pub fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let budget = resolve_budget(a.budget_states)?;
    let (name, r) = load_model(&a.model)?;
    let (_, unsafe_set) = load_unsafe(&r, &a.unsafe_set)?;
    let parts = a
        .certificates
        .iter()
        .map(|path| -> Result<Certificate> {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_certificate(&r.alphabet, &text, a.bound).with_context(|| format!("in {}", path.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    let start = Instant::now();
    let verdict = check_certificates(&r, &unsafe_set, &parts, budget)?;
    let report = RunReport::new(&name, "certificate", &r.alphabet, &verdict, start.elapsed());
    emit(&report, a.format, out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub model: String,
    pub property: String,
    pub verdict: String,
    pub witness: Option<String>,
    pub explored: usize,
    /// States of the minimal DFA of Ind_1, when it fits the budget.
    pub ind1_dfa: Option<usize>,
    pub time_ms: String,
}

/// Models of a catalog directory in file-name order, or the built-in ones.
/// A model file that fails to load yields its error in place of the system.
pub fn table_models(dir: Option<&Path>) -> Result<Vec<(String, Result<Rts, String>)>> {
    let Some(dir) = dir else {
        return Ok(catalog().into_iter().map(|m| (m.name.to_string(), Ok(m.rts))).collect());
    };
    let mut files: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "rts"))
        .collect();
    files.sort();
    Ok(files
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let r = fs::read_to_string(&p)
                .map_err(|e| e.to_string())
                .and_then(|t| parse_model(&t).map_err(|e| e.to_string()));
            (name, r)
        })
        .collect())
}

fn table_row(name: &str, r: &Rts, property: &str, budget: usize) -> TableRow {
    let start = Instant::now();
    let set = r.unsafe_set(property).expect("property of this model");
    let (verdict, witness, explored) = match check_safety_ind1_boxes(r, set, budget) {
        Ok(v) => {
            let Verdict {
                status,
                witness,
                explored,
                ..
            } = v;
            (status.to_string(), witness.map(|w| w.describe(&r.alphabet)), explored)
        }
        Err(_) => ("ERROR".to_string(), None, 0),
    };
    let ind1_dfa = ind1_boxes_min_dfa(r, budget).ok().map(|d| d.num_states());
    TableRow {
        model: name.to_string(),
        property: property.to_string(),
        verdict,
        witness,
        explored,
        ind1_dfa,
        time_ms: format!("{:.3}", start.elapsed().as_secs_f64() * 1e3),
    }
}

/// One row per model/property pair, in catalog order whatever `jobs` is.
pub fn table_rows(models: &[(String, Result<Rts, String>)], jobs: usize, budget: usize) -> Result<Vec<TableRow>> {
    let mut pairs: Vec<(&str, Result<&Rts, &str>, String)> = Vec::new();
    for (name, r) in models {
        match r {
            Ok(r) if !r.unsafe_sets.is_empty() => {
                pairs.extend(r.unsafe_sets.iter().map(|(p, _)| (name.as_str(), Ok(r), p.clone())))
            }
            Ok(_) => {}
            Err(e) => pairs.push((name.as_str(), Err(e.as_str()), String::new())),
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    Ok(pool.install(|| {
        pairs
            .par_iter()
            .map(|(name, r, property)| match r {
                Ok(r) => table_row(name, r, property, budget),
                Err(e) => TableRow {
                    model: name.to_string(),
                    property: String::new(),
                    verdict: "ERROR".into(),
                    witness: Some(e.to_string()),
                    explored: 0,
                    ind1_dfa: None,
                    time_ms: "0.000".into(),
                },
            })
            .collect()
    }))
}

pub fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let budget = resolve_budget(a.budget_states)?;
    let models = table_models(a.catalog.as_deref())?;
    let rows = table_rows(&models, a.jobs, budget)?;
    let mut buf = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        buf.serialize(row)?;
    }
    let bytes = buf.into_inner().map_err(|e| anyhow!("writing csv: {e}"))?;
    match &a.out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(&bytes)?,
    }
    Ok(0)
}

pub fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let budget = resolve_budget(a.budget_states)?;
    let (name, r) = load_model(&a.model)?;
    let bounds: Vec<usize> = (1..=a.bound).collect();
    let slice = LengthSlice::compute(&name, &r, a.length, &bounds, budget)?;
    let mut w = csv::Writer::from_writer(out);
    for row in slice.rows(&r) {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(0)
}

pub fn cmd_dfa(a: &DfaArgs, out: &mut dyn Write) -> Result<i32> {
    let budget = resolve_budget(a.budget)?;
    let (name, r) = load_model(&a.model)?;
    let mut text = String::new();
    match a.what {
        What::Ind1 => {
            let dfa = match a.engine {
                Engine::Boxes => ind1_boxes_min_dfa(&r, budget)?,
                Engine::A1 => ind1_min_dfa(&r, budget)?,
            };
            text.push_str(&format!(
                "# minimal DFA of Ind_1 for {name}: {} states\n",
                dfa.num_states()
            ));
            write_nfa(&mut text, "ind1", &dfa.to_nfa());
        }
        What::A1Raw => {
            let nfa = a1_nfa(&r, budget)?;
            text.push_str(&format!(
                "# reachable part of A_1 for {name}: {} states\n",
                nfa.num_states()
            ));
            write_nfa(&mut text, "a1", &nfa);
        }
    }
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn ladder_description(b: usize) -> String {
    format!("Ladder system with b = {b} over {{0,1}}; initial configurations 0*.\none: some cell is 1.")
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for m in catalog() {
            let path = dir.join(format!("{}.rts", m.name));
            fs::write(&path, print_model(&m.rts, m.description))
                .with_context(|| format!("writing {}", path.display()))?;
        }
        return Ok(0);
    }
    let text = match (&a.name, a.ladder) {
        (Some(name), _) => {
            let m = model(name).ok_or_else(|| anyhow!("no built-in model named `{name}`"))?;
            print_model(&m.rts, m.description)
        }
        (None, Some(b)) => print_model(&ladder(b), &ladder_description(b)),
        (None, None) => bail!("expected one of --out, --name or --ladder"),
    };
    out.write_all(text.as_bytes())?;
    Ok(0)
}

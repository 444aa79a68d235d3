//! The acceptance criteria, one PASS/FAIL line each.
//!
//! The lines go straight to stderr, so they show up without `--nocapture`.
//! A failing criterion fails the test only with `RMC_ACCEPTANCE_STRICT=1`;
//! otherwise the rest of a workspace run would be skipped.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;
use rmc::automata::{
    complement, determinize, intersect, join, minimize, post_image, pre_image, union, Alphabet, Nfa, Sym, SymSet,
    Transducer, Word,
};
use rmc::bforms::{build_vb, inductive_powerwords_at_length, PowerWord};
use rmc::ind1::{check_safety_ind1, in_ind1_at_length, ind1_boxes_words, ind1_min_dfa, separator_box};
use rmc::interp::{ind_b_words, ind_v_nfa_bounded};
use rmc::model::{catalog, model, reach_at_length, transitions_at_length, Rts};
use rmc::oracle::{oracle_ind_b, verify_philosophers_invariants};
use rmc::verdict::Status;

const BUDGET: usize = 1_000_000;
const BIG: usize = 1 << 24;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn rmc(args: &[&str]) -> (Option<i32>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_rmc"))
        .args(args)
        .env_remove("RMC_BUDGET_STATES")
        .output()
        .expect("binary runs");
    (o.status.code(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(&format!("{key}: ")))
}

fn certify(model: &str, set: &str, files: &[&str]) -> Result<(), String> {
    let mut args = vec![
        "certify".to_string(),
        "--model".into(),
        model.into(),
        "--unsafe".into(),
        set.into(),
    ];
    for f in files {
        args.push("--certificate".into());
        args.push(root().join("certificates").join(f).display().to_string());
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (code, out) = rmc(&args);
    ensure(code == Some(0) && field(&out, "verdict") == Some("SAFE"), || {
        format!("certify {model}: exit {code:?}, {}", out.replace('\n', "; "))
    })
}

fn sorted(mut v: Vec<Word>) -> Vec<Word> {
    v.sort();
    v.dedup();
    v
}

fn all_words(k: usize, len: usize) -> Vec<Word> {
    (0..k.pow(len as u32))
        .map(|mut i| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = (i % k) as Sym;
                i /= k;
            }
            w
        })
        .collect()
}

fn words_up_to(k: usize, max: usize) -> Vec<Word> {
    (0..=max).flat_map(|len| all_words(k, len)).collect()
}

fn closed_with_init(r: &Rts, words: &[Word], len: usize) -> bool {
    let set: BTreeSet<&Word> = words.iter().collect();
    r.initial
        .words_of_length(len, BIG)
        .unwrap()
        .iter()
        .all(|u| set.contains(u))
        && transitions_at_length(r, len, BIG)
            .unwrap()
            .iter()
            .all(|(u, w)| !set.contains(u) || set.contains(w))
}

fn philosophers_deadlock() -> Outcome {
    let start = Instant::now();
    let (code, out) = rmc(&[
        "check",
        "--model",
        "philosophers",
        "--unsafe",
        "deadlock",
        "--method",
        "ind1",
    ]);
    let cli_time = start.elapsed();
    ensure(code == Some(0) && field(&out, "verdict") == Some("SAFE"), || {
        format!("cli: {out}")
    })?;
    let r = model("philosophers").unwrap().rts;
    let start = Instant::now();
    let v = check_safety_ind1(&r, r.unsafe_set("deadlock").unwrap(), BUDGET).map_err(|e| e.to_string())?;
    let a1_time = start.elapsed();
    ensure(v.status == Status::Safe, || format!("A_1 engine: {:?}", v.status))?;
    ensure(v.explored < 100_000, || format!("{} states explored", v.explored))?;
    ensure(cli_time.max(a1_time) < Duration::from_secs(10), || {
        format!("took {cli_time:?} / {a1_time:?}")
    })?;
    Ok(format!(
        "SAFE; box engine {}, A_1 engine {} states in {:.1} ms",
        field(&out, "explored").unwrap_or("?"),
        v.explored,
        a1_time.as_secs_f64() * 1e3
    ))
}

/// Longest length with at most a million words.
fn max_len(k: usize) -> usize {
    (0..).take_while(|&l| (k as f64).powi(l as i32) <= 1e6).last().unwrap()
}

fn ind1_oracle_equivalence() -> Outcome {
    let mut a1_missing = Vec::new();
    let mut lengths = 0;
    for m in catalog() {
        let r = &m.rts;
        let k = r.alphabet.len();
        let a1 = ind1_min_dfa(r, BUDGET);
        if a1.is_err() {
            a1_missing.push(m.name);
        }
        for len in 0..=max_len(k) {
            let words = all_words(k, len);
            let by_separator: Vec<Word> = words
                .par_iter()
                .filter(|w| in_ind1_at_length(r, w, BIG).unwrap())
                .cloned()
                .collect();
            let boxes = sorted(ind1_boxes_words(r, len, BIG).map_err(|e| format!("{} boxes at {len}: {e}", m.name))?);
            ensure(boxes == by_separator, || {
                format!("{}: box engine differs at {len}", m.name)
            })?;
            if len <= 3 && k <= 4 {
                let oracle = oracle_ind_b(r, 1, len, BIG).map_err(|e| e.to_string())?;
                ensure(oracle == by_separator, || {
                    format!("{}: oracle differs at {len}", m.name)
                })?;
            }
            if let Ok(dfa) = &a1 {
                let accepted: Vec<Word> = words.into_iter().filter(|w| dfa.accepts(w)).collect();
                ensure(accepted == by_separator, || format!("{}: A_1 differs at {len}", m.name))?;
            }
            lengths += 1;
        }
    }
    ensure(a1_missing.is_empty(), || {
        format!(
            "A_1 exceeds its column budget on {}; box engine, separators and oracle agree on all {lengths} model lengths",
            a1_missing.join(", ")
        )
    })?;
    Ok(format!("{lengths} model lengths"))
}

fn indb_pipeline_equivalence() -> Outcome {
    let mut cases: Vec<(&str, usize, usize)> = Vec::new();
    for name in ["ladder1", "ladder2"] {
        cases.extend((1..=3).map(|b| (name, b, 5)));
    }
    for name in ["philosophers", "berkeley"] {
        cases.push((name, 1, 4));
        cases.push((name, 2, 3));
    }
    let mut checked = 0;
    for (name, b, max) in cases {
        let r = model(name).unwrap().rts;
        let v = build_vb(&r.alphabet, b).map_err(|e| e.to_string())?;
        let a = ind_v_nfa_bounded(&r, &v, max, BIG).map_err(|e| format!("{name} b={b}: {e}"))?;
        for len in 0..=max {
            let got = sorted(a.words_of_length(len, BIG).map_err(|e| e.to_string())?);
            let expected = oracle_ind_b(&r, b, len, BIG).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("{name} b={b} length {len}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} slices equal"))
}

fn ladder_separation() -> Outcome {
    for b in 1..=2usize {
        let name = format!("ladder{b}");
        let r = model(&name).unwrap().rts;
        let mut zero_one = vec![0; b];
        zero_one.push(1);
        for words in [
            ind_b_words(&r, b, b + 1, BIG).map_err(|e| e.to_string())?,
            oracle_ind_b(&r, b, b + 1, BIG).map_err(|e| e.to_string())?,
        ] {
            ensure(words.contains(&zero_one), || {
                format!("{} not in Ind_{b}", r.format(&zero_one))
            })?;
        }
        for len in 0..=b + 2 {
            let pipeline = sorted(ind_b_words(&r, b + 1, len, BIG).map_err(|e| e.to_string())?);
            let oracle = oracle_ind_b(&r, b + 1, len, BIG).map_err(|e| e.to_string())?;
            ensure(pipeline == vec![vec![0; len]] && oracle == pipeline, || {
                format!("Ind_{} of {name} at {len} is not 0^{len}", b + 1)
            })?;
        }
    }
    Ok("0^b 1 in Ind_b, Ind_{b+1} = 0* for b = 1, 2".into())
}

fn philosophers_characterization() -> Outcome {
    let start = Instant::now();
    let r = model("philosophers").unwrap().rts;
    for len in [2, 4, 6, 8] {
        let report = verify_philosophers_invariants(&r, len, BIG).map_err(|e| e.to_string())?;
        ensure(report.passed(), || {
            format!("families fail at {len}: {:?}", report.families)
        })?;
    }
    certify(
        "philosophers",
        "deadlock",
        &["philosophers-1inv.cert", "philosophers-3inv.cert"],
    )?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "lengths 2, 4, 6, 8 and certificate in {:.1} s",
        t.as_secs_f64()
    ))
}

fn coherence_protocols() -> Outcome {
    for (name, set, witness, cert) in [
        ("berkeley", "two-exclusive", "\"ee\"", "berkeley-two-exclusive.cert"),
        ("dragon", "two-modified", "\"EE\"", "dragon-two-modified.cert"),
    ] {
        let (code, out) = rmc(&["check", "--model", name, "--unsafe", set, "--method", "ind1"]);
        ensure(code == Some(1) && field(&out, "witness") == Some(witness), || {
            format!("{name}: {out}")
        })?;
        certify(name, set, &[cert])?;
    }
    Ok("ind1 INCONCLUSIVE on ee / EE, Ind_2 certificates SAFE".into())
}

fn lr_philosophers() -> Outcome {
    let (code, out) = rmc(&[
        "check",
        "--model",
        "philosophers-lr",
        "--unsafe",
        "deadlock",
        "--method",
        "ind1",
    ]);
    ensure(code == Some(1), || format!("philosophers-lr: {out}"))?;
    let (code, out) = rmc(&[
        "check",
        "--model",
        "philosophers-lr-tagged",
        "--unsafe",
        "deadlock",
        "--method",
        "ind1",
    ]);
    ensure(code == Some(0), || format!("philosophers-lr-tagged: {out}"))?;
    for name in ["philosophers-lr", "philosophers-lr-tagged"] {
        let r = model(name).unwrap().rts;
        let v = check_safety_ind1(&r, r.unsafe_set("deadlock").unwrap(), BUDGET).map_err(|e| e.to_string())?;
        let expected = if name == "philosophers-lr" {
            Status::Inconclusive
        } else {
            Status::Safe
        };
        ensure(v.status == expected, || format!("A_1 engine on {name}: {:?}", v.status))?;
    }
    certify(
        "philosophers-lr",
        "deadlock",
        &["philosophers-lr-1inv.cert", "philosophers-lr-3inv.cert"],
    )?;
    Ok("INCONCLUSIVE untagged, SAFE tagged, certificate SAFE".into())
}

/// `w ∈ Ind_1` by saturating the box of `w` over enumerated steps.
fn in_ind1_by_saturation(steps: &[(Word, Word)], init: &[Word], w: &[Sym]) -> bool {
    let mut incl: Vec<SymSet> = w.iter().map(|&a| SymSet::singleton(a)).collect();
    let inside = |incl: &[SymSet], u: &[Sym]| u.iter().zip(incl).all(|(&a, s)| s.contains(a));
    loop {
        let mut changed = false;
        for (u, v) in steps {
            if inside(&incl, v) && !inside(&incl, u) {
                for (s, &a) in incl.iter_mut().zip(u) {
                    s.insert(a);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    init.iter().any(|u| inside(&incl, u))
}

fn turing_reduction() -> Outcome {
    let r = model("tm-demo").unwrap().rts;
    let hole = r.alphabet.index_of("_").unwrap();
    let plain: Vec<Sym> = r.alphabet.symbols().filter(|&a| a != hole).collect();
    for pages in 1..=3 {
        let len = 3 * pages;
        let reach: Vec<Word> = reach_at_length(&r, len, BIG)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter(|w| !w.contains(&hole))
            .collect();
        let steps = if pages <= 2 {
            transitions_at_length(&r, len, BIG).map_err(|e| e.to_string())?
        } else {
            Vec::new()
        };
        let init = r.initial.words_of_length(len, BIG).map_err(|e| e.to_string())?;
        let candidates: Vec<Word> = all_words(plain.len(), len)
            .into_iter()
            .map(|w| w.into_iter().map(|i| plain[i as usize]).collect())
            .collect();
        let by_separator: Vec<Word> = sorted(
            candidates
                .par_iter()
                .filter(|w| in_ind1_at_length(&r, w, BIG).unwrap())
                .cloned()
                .collect(),
        );
        ensure(by_separator == reach, || {
            format!("{pages} pages: Ind_1 {} vs Reach {}", by_separator.len(), reach.len())
        })?;
        if pages <= 2 {
            let saturated: Vec<Word> = sorted(
                candidates
                    .into_par_iter()
                    .filter(|w| in_ind1_by_saturation(&steps, &init, w))
                    .collect(),
            );
            ensure(saturated == reach, || {
                format!("{pages} pages: enumerated saturation differs")
            })?;
        }
        let boxes: Vec<Word> = sorted(ind1_boxes_words(&r, len, BIG).map_err(|e| e.to_string())?)
            .into_iter()
            .filter(|w| !w.contains(&hole))
            .collect();
        ensure(boxes == reach, || format!("{pages} pages: box engine differs"))?;
        if pages == 1 {
            let oracle: Vec<Word> = oracle_ind_b(&r, 1, len, BIG)
                .map_err(|e| e.to_string())?
                .into_iter()
                .filter(|w| !w.contains(&hole))
                .collect();
            ensure(oracle == reach, || "one page: oracle differs".into())?;
        }
    }
    let (code, out) = rmc(&["check", "--model", "tm-demo", "--unsafe", "accept"]);
    let witness = field(&out, "witness").map(|w| w.trim_matches('"').to_string());
    let accepted = witness
        .as_deref()
        .and_then(|w| r.word(w).ok())
        .is_some_and(|w| r.unsafe_set("accept").unwrap().accepts(&w) && !w.contains(&hole));
    ensure(code == Some(1) && accepted, || format!("check: {out}"))?;
    Ok(format!(
        "full words of Ind_1 equal Reach for 1..3 pages; witness {}",
        witness.unwrap()
    ))
}

fn random_nfa(alphabet: &Alphabet, states: usize, trans: &[(usize, usize, usize)], flags: &[(bool, bool)]) -> Nfa {
    let mut a = Nfa::with_states(alphabet, states);
    for &(p, x, q) in trans {
        a.add_transition((p % states) as u32, (x % alphabet.len()) as Sym, (q % states) as u32);
    }
    for (q, &(init, acc)) in flags.iter().take(states).enumerate() {
        if init {
            a.set_initial(q as u32);
        }
        a.set_accepting(q as u32, acc);
    }
    a
}

type RawNfa = (usize, Vec<(usize, usize, usize)>, Vec<(bool, bool)>);

fn raw_nfa() -> impl Strategy<Value = RawNfa> {
    (
        1usize..=5,
        prop::collection::vec((0usize..5, 0usize..25, 0usize..5), 0..=12),
        prop::collection::vec((prop::bool::weighted(0.4), prop::bool::weighted(0.4)), 5),
    )
}

fn algebra_semantics() -> Result<usize, String> {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let sigma = |k: usize| Alphabet::new((0..k).map(|i| format!("s{i}"))).unwrap();
    runner
        .run(&(1usize..=5, raw_nfa(), raw_nfa()), |(k, x, y)| {
            let s = sigma(k);
            let (a, b) = (random_nfa(&s, x.0, &x.1, &x.2), random_nfa(&s, y.0, &y.1, &y.2));
            let u = union(&a, &b).unwrap();
            let i = intersect(&a, &b).unwrap();
            let d = determinize(&a, BIG).unwrap();
            let c = complement(&d);
            let m = minimize(&d);
            let horizon = if k <= 3 { 5 } else { 4 };
            for w in words_up_to(k, horizon) {
                let (in_a, in_b) = (a.accepts(&w), b.accepts(&w));
                prop_assert_eq!(u.accepts(&w), in_a || in_b);
                prop_assert_eq!(i.accepts(&w), in_a && in_b);
                prop_assert_eq!(c.accepts(&w), !in_a);
                prop_assert_eq!(m.accepts(&w), in_a);
            }
            Ok(())
        })
        .map_err(|e| format!("language operations: {e}"))?;
    let two = sigma(2);
    let pairs = Alphabet::pair(&two, &two);
    runner
        .run(&(raw_nfa(), raw_nfa(), raw_nfa()), |(x, y, z)| {
            let t = Transducer::from_nfa(random_nfa(&pairs, x.0, &x.1, &x.2)).unwrap();
            let t2 = Transducer::from_nfa(random_nfa(&pairs, y.0, &y.1, &y.2)).unwrap();
            let lang = random_nfa(&two, z.0, &z.1, &z.2);
            let j = join(&t, &t2).unwrap();
            let post = post_image(&lang, &t).unwrap();
            let pre = pre_image(&t, &lang).unwrap();
            for len in 0..=4 {
                let ws = all_words(2, len);
                for w in &ws {
                    prop_assert_eq!(post.accepts(w), ws.iter().any(|v| lang.accepts(v) && t.accepts(v, w)));
                    prop_assert_eq!(pre.accepts(w), ws.iter().any(|v| lang.accepts(v) && t.accepts(w, v)));
                    for v in &ws {
                        prop_assert_eq!(j.accepts(w, v), ws.iter().any(|m| t.accepts(w, m) && t2.accepts(m, v)));
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| format!("relation operations: {e}"))?;
    Ok(2000)
}

fn property_suites() -> Outcome {
    let mut slices = 0;
    for m in catalog() {
        let r = &m.rts;
        let k = r.alphabet.len();
        for len in 0..=3 {
            let reach = reach_at_length(r, len, BIG).map_err(|e| e.to_string())?;
            let top = if k <= 2 {
                3
            } else if k <= 4 || len <= 2 {
                2
            } else {
                1
            };
            let mut upper = all_words(k, len);
            for b in 1..=top {
                let ind = oracle_ind_b(r, b, len, BIG).map_err(|e| e.to_string())?;
                ensure(ind.iter().all(|w| upper.binary_search(w).is_ok()), || {
                    format!("{} chain b={b} at {len}", m.name)
                })?;
                ensure(reach.iter().all(|w| ind.binary_search(w).is_ok()), || {
                    format!("{} Reach at {len}", m.name)
                })?;
                ensure(closed_with_init(r, &ind, len), || {
                    format!("{} Ind_{b} at {len} not inductive", m.name)
                })?;
                upper = ind;
                slices += 1;
            }
        }
    }
    let mut separators = 0;
    for m in catalog() {
        let r = &m.rts;
        let k = r.alphabet.len();
        for len in 0..=if k <= 4 { 3 } else { 2 } {
            let inductive = inductive_powerwords_at_length(r, 1, len, BIG).map_err(|e| e.to_string())?;
            for w in all_words(k, len) {
                let mut union_rows = vec![SymSet::EMPTY; len];
                for phi in inductive.iter().filter(|phi| !phi.satisfies(&w).unwrap()) {
                    for (j, slot) in union_rows.iter_mut().enumerate() {
                        *slot = slot.union(phi.clause(0, j));
                    }
                }
                let sepf = separator_box(r, &w, BIG).map_err(|e| e.to_string())?.sepf(r);
                ensure(sepf == PowerWord::from_clauses(&r.alphabet, &[union_rows]), || {
                    format!("{} separator of {}", m.name, r.format(&w))
                })?;
                separators += 1;
            }
        }
    }
    let cases = algebra_semantics()?;
    Ok(format!(
        "{slices} oracle slices, {separators} separators, {cases} random automata cases"
    ))
}

fn strip_time(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut fields: Vec<&str> = l.split(',').collect();
            fields.pop();
            fields.join(",")
        })
        .collect()
}

fn table_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (one, many) = (dir.path().join("one.csv"), dir.path().join("many.csv"));
    for (jobs, path) in [("1", &one), ("8", &many)] {
        let (code, _) = rmc(&["table", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        ensure(code == Some(0), || format!("table --jobs {jobs} exited {code:?}"))?;
    }
    let read = |p: &PathBuf| std::fs::read_to_string(p).map_err(|e| e.to_string());
    let (a, b) = (read(&one)?, read(&many)?);
    ensure(strip_time(&a) == strip_time(&b), || {
        "rows differ between --jobs 1 and --jobs 8".into()
    })?;
    Ok(format!("{} rows identical apart from time_ms", a.lines().count() - 1))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("dining philosophers deadlock freedom with Ind_1", philosophers_deadlock),
        ("Ind_1 engines equal the oracles", ind1_oracle_equivalence),
        ("Ind_b pipeline equals the oracle", indb_pipeline_equivalence),
        ("ladder separation", ladder_separation),
        (
            "philosophers invariant families and certificate",
            philosophers_characterization,
        ),
        ("Berkeley and Dragon", coherence_protocols),
        ("LR philosophers", lr_philosophers),
        ("Turing machine reduction", turing_reduction),
        ("property suites", property_suites),
        ("table determinism", table_determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(detail) => format!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("FAIL {:>2} {name}: {why} ({secs:.1} s)", i + 1)
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    writeln!(
        err,
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed.len(),
        criteria.len()
    )
    .unwrap();
    if std::env::var("RMC_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        assert!(failed.is_empty(), "failed criteria: {failed:?}");
    }
}

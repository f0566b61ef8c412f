use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use jmfree::characters::{transition_measure, YoungDiagram};
use jmfree::free_prob::{
    free_mixed_moment, moments, moments_to_cumulants, vanishing_mixed_cumulant_expansion,
    CumulantSequence, FreeLetter, MomentSequence,
};
use jmfree::model::{
    compression_comparison, convergence_experiment, factor_limit_check, format_word, gaps_shrink,
    kreweras_block_identification, moment_via_partitions, parse_word, state, tuple_state, JmWord,
    Letter, Model, MAX_TUPLE_LENGTH, MAX_TUPLE_N,
};
use jmfree::partitions::{
    check_crossing_bound, check_kreweras_cycles, check_zero_set_bound, kreweras, BoundReport,
    SetPartition,
};
use jmfree::scalar::{format_rational, parse_rational};
use jmfree::{Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{float, Report};
use crate::{record, Command, ModelArg, RouteArg};

const MAX_KMAX: usize = 10;
const FACTOR_GRID: [usize; 4] = [8, 16, 32, 64];

pub fn run(command: &Command, seed: u64) -> Result<(Value, Report)> {
    match command {
        Command::Moments { lambda, len } => cmd_moments(lambda, *len),
        Command::Mixed {
            word,
            lambda,
            k,
            model,
            route,
        } => cmd_mixed(word, lambda, *k, *model, *route),
        Command::Converge {
            word,
            family,
            grid,
            c,
        } => cmd_converge(word, family, grid.as_deref(), c),
        Command::Kreweras { partition } => cmd_kreweras(partition),
        Command::Cumulants {
            lambda,
            moments,
            len,
        } => cmd_cumulants(lambda.as_deref(), moments.as_deref(), *len),
        Command::Compress { lambda, c, len } => cmd_compress(lambda, c, *len),
        Command::VerifyLemmas { kmax, trials } => cmd_verify_lemmas(*kmax, *trials, seed),
    }
}

fn diagram(s: &str) -> Result<YoungDiagram> {
    s.parse().map_err(|e| anyhow!("--lambda {s:?}: {e}"))
}

fn letters(s: &str) -> Result<Vec<Letter>> {
    parse_word(s).map_err(|e| anyhow!("--word {s:?}: {e}"))
}

fn proportion(s: &str) -> Result<Rational> {
    let c =
        parse_rational(s).ok_or_else(|| anyhow!("--c {s:?}: expected a rational such as 1/2"))?;
    if c <= Rational::from_integer(0.into()) || c > Rational::from_integer(1.into()) {
        bail!("--c {s}: must lie in (0, 1]");
    }
    Ok(c)
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        bail!("{name}: must be positive");
    }
    Ok(())
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn normalized(x: &Rational, n: usize, x_count: usize) -> Value {
    float(x.to_f64() / (n as f64).powf(x_count as f64 / 2.0))
}

fn word_record(word: &JmWord, value: &Rational, route: &str) -> serde_json::Map<String, Value> {
    record! {
        "word" => format_word(word.letters()),
        "n" => word.n(),
        "k" => word.k(),
        "lambda" => word.diagram().to_string(),
        "exact_value" => format_rational(value),
        "normalized_value" => normalized(value, word.n(), word.x_count()),
        "route" => route,
    }
}

fn cmd_moments(lambda: &str, len: usize) -> Result<(Value, Report)> {
    let d = diagram(lambda)?;
    positive("--L", len)?;
    positive("--lambda", d.size())?;
    let m = moments(&transition_measure(&d).to_measure::<Rational>(), len);
    let mut records = Vec::new();
    let mut passed = true;
    for j in 1..=len {
        let w = JmWord::new(vec![Letter::X; j], d.size(), d.clone(), Model::Right)?;
        let s = state::<Rational>(&w)?;
        let expected = &m.values()[j - 1];
        passed &= s == *expected;
        let mut r = word_record(&w, &s, "matrix");
        r.insert("transition_moment".into(), json!(format_rational(expected)));
        r.insert("equal".into(), json!(s == *expected));
        records.push(r);
    }
    let config = json!({"command": "moments", "lambda": d.to_string(), "L": len});
    Ok((config, Report::new(records, passed)))
}

fn cmd_mixed(
    word: &str,
    lambda: &str,
    k: usize,
    model: ModelArg,
    route: RouteArg,
) -> Result<(Value, Report)> {
    let d = diagram(lambda)?;
    let model = match model {
        ModelArg::Right => Model::Right,
        ModelArg::Left => Model::Left,
    };
    let w =
        JmWord::new(letters(word)?, k, d.clone(), model).map_err(|e| anyhow!("--k {k}: {e}"))?;
    let routes: Vec<RouteArg> = match (route, model) {
        (RouteArg::All, Model::Right) => {
            vec![RouteArg::Matrix, RouteArg::Tuple, RouteArg::Partitions]
        }
        (RouteArg::All, Model::Left) | (RouteArg::Matrix, _) => vec![RouteArg::Matrix],
        (_, Model::Left) => {
            bail!("--route: the tuple and partition routes evaluate the right model only")
        }
        (r, _) => vec![r],
    };
    if routes.len() > 1 || routes[0] != RouteArg::Matrix {
        if d.size() > MAX_TUPLE_N {
            bail!("--lambda {d}: the tuple and partition routes need n ≤ {MAX_TUPLE_N}; use --route matrix");
        }
        if w.letters().len() > MAX_TUPLE_LENGTH {
            bail!("--word: the tuple and partition routes need at most {MAX_TUPLE_LENGTH} letters");
        }
    }
    let mut records = Vec::new();
    let mut values = Vec::new();
    for r in routes {
        let (name, v) = match r {
            RouteArg::Matrix => ("matrix", state::<Rational>(&w)?),
            RouteArg::Tuple => ("tuple", tuple_state::<Rational>(&w)?),
            RouteArg::Partitions => ("partitions", moment_via_partitions::<Rational>(&w)?),
            RouteArg::All => unreachable!(),
        };
        records.push(word_record(&w, &v, name));
        values.push(v);
    }
    let passed = values.windows(2).all(|p| p[0] == p[1]);
    let config = json!({
        "command": "mixed",
        "word": format_word(w.letters()),
        "lambda": d.to_string(),
        "k": k,
        "model": format!("{model:?}").to_lowercase(),
        "route": format!("{route:?}").to_lowercase(),
    });
    Ok((config, Report::new(records, passed)))
}

fn family_diagrams(family: &str, grid: Option<&str>) -> Result<Vec<YoungDiagram>> {
    let builtin = |shape: fn(usize) -> Option<YoungDiagram>| -> Result<Vec<YoungDiagram>> {
        let grid = grid.ok_or_else(|| anyhow!("--grid is required for the {family} family"))?;
        grid.split(',')
            .map(|t| {
                let n: usize = t.trim().parse().map_err(|e| anyhow!("--grid {t:?}: {e}"))?;
                shape(n).ok_or_else(|| anyhow!("--grid {n}: no {family} diagram of that size"))
            })
            .collect()
    };
    match family {
        "square" => builtin(|n| {
            let s = (n as f64).sqrt().round() as usize;
            (s > 0 && s * s == n).then(|| YoungDiagram::square(s))
        }),
        "rectangle" => builtin(|n| {
            let s = ((n / 2) as f64).sqrt().round() as usize;
            (s > 0 && 2 * s * s == n).then(|| YoungDiagram::rectangle(s, 2 * s))
        }),
        path => {
            if grid.is_some() {
                bail!("--grid applies only to the built-in families");
            }
            let text = fs::read_to_string(path).with_context(|| format!("--family {path}"))?;
            let rows: Vec<Vec<usize>> =
                serde_json::from_str(&text).with_context(|| format!("--family {path}"))?;
            rows.into_iter()
                .map(|r| YoungDiagram::new(r).map_err(|e| anyhow!("--family {path}: {e}")))
                .collect()
        }
    }
}

fn cmd_converge(word: &str, family: &str, grid: Option<&str>, c: &str) -> Result<(Value, Report)> {
    let w = letters(word)?;
    let c = proportion(c)?;
    let diagrams = family_diagrams(family, grid)?;
    if diagrams.is_empty() {
        bail!("--family: no diagrams");
    }
    let report = convergence_experiment(&w, &diagrams, &c)?;
    let records = report
        .rows
        .iter()
        .map(|r| {
            record! {
                "word" => format_word(&w),
                "n" => r.n,
                "k" => r.k,
                "lambda" => r.lambda.to_string(),
                "exact_value" => format_rational(&r.exact_value),
                "normalized_value" => float(r.normalized_value),
                "route" => "matrix",
                "tr_p" => format_rational(&r.tr_p),
                "exact_target" => format_rational(&r.exact_target),
                "normalized_target" => float(r.normalized_target),
                "gap" => float(r.gap),
            }
        })
        .collect();
    let config = json!({
        "command": "converge",
        "word": format_word(&w),
        "family": family,
        "diagrams": diagrams.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "c": format_rational(&c),
    });
    Ok((config, Report::new(records, report.shrinking())))
}

fn cmd_kreweras(partition: &str) -> Result<(Value, Report)> {
    let p: SetPartition = partition
        .parse()
        .map_err(|e| anyhow!("partition {partition:?}: {e}"))?;
    let k = kreweras(&p).map_err(|e| anyhow!("partition {partition:?}: {e}"))?;
    let records = vec![record! {
        "partition" => p.to_string(),
        "kreweras" => k.to_string(),
        "blocks" => p.num_blocks(),
        "kreweras_blocks" => k.num_blocks(),
    }];
    let config = json!({"command": "kreweras", "partition": p.to_string()});
    Ok((config, Report::new(records, true)))
}

fn cmd_cumulants(
    lambda: Option<&str>,
    given: Option<&str>,
    len: Option<usize>,
) -> Result<(Value, Report)> {
    let (m, config) = match (lambda, given) {
        (Some(l), None) => {
            let d = diagram(l)?;
            let len = len.ok_or_else(|| anyhow!("--L is required with --lambda"))?;
            positive("--L", len)?;
            let m = moments(&transition_measure(&d).to_measure::<Rational>(), len);
            (
                m,
                json!({"command": "cumulants", "lambda": d.to_string(), "L": len}),
            )
        }
        (None, Some(s)) => {
            let values = s
                .split(',')
                .map(|t| {
                    parse_rational(t).ok_or_else(|| anyhow!("--moments {t:?}: expected a rational"))
                })
                .collect::<Result<Vec<_>>>()?;
            if len.is_some_and(|l| l != values.len()) {
                bail!("--L disagrees with the number of --moments");
            }
            let config = json!({"command": "cumulants", "moments": strings(&values)});
            (MomentSequence::new(values), config)
        }
        _ => bail!("exactly one of --lambda and --moments is required"),
    };
    let k = moments_to_cumulants(&m);
    let records = m
        .values()
        .iter()
        .zip(k.values())
        .enumerate()
        .map(|(i, (a, b))| record! {"j" => i + 1, "moment" => format_rational(a), "cumulant" => format_rational(b)})
        .collect();
    Ok((config, Report::new(records, true)))
}

fn cmd_compress(lambda: &str, c: &str, len: usize) -> Result<(Value, Report)> {
    let d = diagram(lambda)?;
    let c = proportion(c)?;
    positive("--L", len)?;
    let report = compression_comparison(std::slice::from_ref(&d), &c, len)
        .map_err(|e| anyhow!("--L {len}: {e}"))?;
    let row = &report.rows[0];
    let records = [("pxp", &row.compressed), ("free_compress", &row.free)]
        .into_iter()
        .map(|(name, m)| {
            record! {
                "sequence" => name,
                "n" => row.n,
                "k" => row.k,
                "lambda" => row.lambda.to_string(),
                "t" => format_rational(&row.t),
                "values" => strings(m.values()),
                "normalized_gap" => float(row.gap),
            }
        })
        .collect();
    let config =
        json!({"command": "compress", "lambda": d.to_string(), "c": format_rational(&c), "L": len});
    Ok((config, Report::new(records, true)))
}

fn check_record(check: &str, r: &BoundReport) -> serde_json::Map<String, Value> {
    record! {
        "check" => check,
        "k" => r.k,
        "checked" => r.checked,
        "holds" => r.holds,
        "min_gap" => r.min_gap,
        "detail" => r.counterexample.clone().unwrap_or_default(),
    }
}

fn cmd_verify_lemmas(kmax: usize, trials: usize, seed: u64) -> Result<(Value, Report)> {
    positive("--kmax", kmax)?;
    if kmax > MAX_KMAX {
        bail!("--kmax {kmax}: at most {MAX_KMAX}");
    }
    let mut records = Vec::new();
    for k in 1..=kmax {
        records.push(check_record("crossing-bound", &check_crossing_bound(k)));
        records.push(check_record("zero-set-bound", &check_zero_set_bound(k)));
        records.push(check_record("kreweras-cycles", &check_kreweras_cycles(k)));
        let mut checked = 0;
        let mut holds = true;
        let mut detail = String::new();
        for mask in 0..(1u32 << k) {
            let w: Vec<Letter> = (0..k)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        Letter::PX
                    } else {
                        Letter::X
                    }
                })
                .collect();
            let b = kreweras_block_identification(&w)?;
            checked += b.checked;
            if !b.holds() && holds {
                holds = false;
                detail = format!(
                    "{}: {}",
                    format_word(&w),
                    b.counterexample.unwrap_or_default()
                );
            }
        }
        records.push(record! {
            "check" => "block-count", "k" => k, "checked" => checked, "holds" => holds,
            "min_gap" => Value::Null, "detail" => detail,
        });
    }
    let c = Rational::new(1.into(), 2.into());
    for s in 0..=3usize {
        for blocks in s.max(1)..=4 {
            let rows = factor_limit_check(s, blocks, &c, &FACTOR_GRID)?;
            let devs: Vec<Rational> = rows.iter().map(|r| r.deviation.clone()).collect();
            let holds = gaps_shrink(&devs);
            records.push(record! {
                "check" => "counting-factor", "k" => blocks, "checked" => rows.len(), "holds" => holds,
                "min_gap" => Value::Null,
                "detail" => format!("S={s} deviations {}", strings(&devs).join(" ")),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut detail = String::new();
    for _ in 0..trials {
        let len = rng.gen_range(1..=kmax.min(8));
        let word: Vec<FreeLetter> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    FreeLetter::A
                } else {
                    FreeLetter::B
                }
            })
            .collect();
        let kappa: Vec<Rational> = (0..len)
            .map(|_| Rational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=6).into()))
            .collect();
        let cum = CumulantSequence::new(kappa);
        let tr = Rational::new(rng.gen_range(1..=7).into(), 8.into());
        let a = free_mixed_moment(&word, &cum, &tr)?.value;
        let b = vanishing_mixed_cumulant_expansion(&word, &cum, &tr)?;
        if a != b {
            failures += 1;
            if detail.is_empty() {
                detail = word.iter().map(|l| l.to_string()).collect();
            }
        }
    }
    records.push(record! {
        "check" => "free-formula", "k" => kmax.min(8), "checked" => trials, "holds" => failures == 0,
        "min_gap" => Value::Null, "detail" => detail,
    });
    let passed = records.iter().all(|r| r["holds"] == json!(true));
    let config = json!({
        "command": "verify-lemmas",
        "kmax": kmax,
        "trials": trials,
        "factor_c": "1/2",
        "factor_grid": FACTOR_GRID,
    });
    Ok((config, Report::new(records, passed)))
}

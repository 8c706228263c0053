//! Command implementations. Each writes its report (file or stdout) and
//! returns whether every check it performed passed.

use std::error::Error;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use quadword::{
    anchors_to_length, bergman_gap_check, build_periodic_quotient, canonical_rotation,
    check_u_bounds, complexity_bound_checks, enumerate_cogk1_candidates, envelope_increases,
    estimate_growth_constant, fibonacci_stream, growth_report, growth_sandwich_check,
    matrix_image_degrees, mechanical_stream, prime_budget, primitive_root, transfer_counts,
    u_stream, verify_quotient_identities, verify_stage_length_bound, verify_sturmian, Alphabet,
    ConstructionParams, ConstructionTrace, FactorIndex, FiniteWord, ForbiddenPresentation,
    PeriodicityClass, RecurrenceScan, SlopeSpec, TraceFile, WordStream,
};

use crate::config::RunConfig;
use crate::reports::*;

type RunResult = Result<bool, Box<dyn Error>>;

pub fn run(config: &RunConfig) -> RunResult {
    match config.command.as_str() {
        "gen" => gen(config),
        "construct" => construct(config),
        "complexity" => complexity(config),
        "growth" => growth(config),
        "hilbert" => hilbert(config),
        "primes" => primes(config),
        "quotient" => quotient(config),
        "degrees" => degrees(config),
        "verify-all" => verify_all(config),
        other => Err(format!("unknown command {other:?}").into()),
    }
}

fn full_alphabet() -> Alphabet {
    Alphabet::new("abcdefghijklmnopqrstuvwxyz").expect("static alphabet")
}

fn make_base(config: &RunConfig) -> Result<Arc<dyn WordStream>, Box<dyn Error>> {
    if let Some(quotients) = &config.slope {
        let slope = SlopeSpec::new(quotients)?;
        return Ok(Arc::new(mechanical_stream(&slope)));
    }
    match config.base.as_deref() {
        Some("fibonacci") | None => Ok(Arc::new(fibonacci_stream())),
        Some(other) => Err(format!("unknown base {other:?}").into()),
    }
}

fn read_word(path: &Path) -> Result<FiniteWord, Box<dyn Error>> {
    let text = fs::read_to_string(path)?;
    let line = text.trim_end_matches(['\n', '\r']);
    if line.contains('\n') {
        return Err(format!("{}: expected a single-line word file", path.display()).into());
    }
    Ok(full_alphabet().word(line)?)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), Box<dyn Error>> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(path: Option<&PathBuf>, value: &T) -> Result<(), Box<dyn Error>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_output(path, &text)
}

fn gen(config: &RunConfig) -> RunResult {
    let base = make_base(config)?;
    let word = base.prefix(config.length.unwrap())?;
    let mut text = base.alphabet().text(&word);
    text.push('\n');
    write_output(config.out.as_ref(), &text)?;
    Ok(true)
}

fn construct(config: &RunConfig) -> RunResult {
    let base = make_base(config)?;
    let params = ConstructionParams::new(base, config.depth.unwrap());
    let trace = ConstructionTrace::build(&params)?;
    let bounds = verify_stage_length_bound(&trace);
    let u = u_stream(&params)?;
    let word = u.prefix(config.length.unwrap())?;
    let mut text = u.alphabet().text(&word);
    text.push('\n');
    write_output(config.out.as_ref(), &text)?;
    if let Some(trace_path) = &config.trace {
        let report = TraceReport {
            config: config.clone(),
            version: VERSION,
            trace: TraceFile::from_trace(&trace, u.alphabet()),
            stage_bounds: bounds.rows.clone(),
        };
        write_json(Some(trace_path), &report)?;
    }
    Ok(bounds.all_pass)
}

fn complexity(config: &RunConfig) -> RunResult {
    let nmax = config.nmax.unwrap();
    let index = match &config.input {
        Some(path) => {
            let word = read_word(path)?;
            FactorIndex::index_prefix(&word, format!("file:{}", path.display()))?
        }
        None => {
            let base = make_base(config)?;
            FactorIndex::index_stream(base.as_ref(), config.length.unwrap())?
        }
    };
    let profile = index.profile(nmax);
    let rows: Vec<ComplexityRow> = (1..=profile.n_max())
        .map(|n| ComplexityRow {
            n,
            p_n: profile.p(n),
            trusted: u8::from(n <= profile.n_trust()),
        })
        .collect();
    match config.format.as_deref() {
        Some("csv") => {
            let mut text = String::from("n,p_n,trusted\n");
            for r in &rows {
                text.push_str(&format!("{},{},{}\n", r.n, r.p_n, r.trusted));
            }
            write_output(config.out.as_ref(), &text)?;
        }
        _ => {
            let report = ComplexityReport {
                config: config.clone(),
                version: VERSION,
                n_trust: profile.n_trust(),
                rows,
            };
            write_json(config.out.as_ref(), &report)?;
        }
    }
    Ok(true)
}

fn growth(config: &RunConfig) -> RunResult {
    let nmax = config.nmax.unwrap();
    let path = config.input.as_ref().unwrap();
    let word = read_word(path)?;
    let index = FactorIndex::index_prefix(&word, format!("file:{}", path.display()))?;
    let profile = index.profile(nmax);
    let report = growth_report(&profile, nmax)?;
    let bound_checks = complexity_bound_checks(&profile, nmax);
    let bounds_all_pass = bound_checks.iter().all(|c| c.pass);
    let file = GrowthFile {
        config: config.clone(),
        version: VERSION,
        dims: report.dims,
        gk_estimate: report.gk_estimate,
        gc_estimate: report.gc_estimate,
        c_lower: report.c_lower,
        c_upper: report.c_upper,
        window: report.window,
        n_trust: report.n_trust,
        bound_checks,
        bounds_all_pass,
    };
    write_json(config.report.as_ref(), &file)?;
    Ok(bounds_all_pass)
}

fn hilbert(config: &RunConfig) -> RunResult {
    let alphabet = Alphabet::new(config.alphabet.as_deref().unwrap_or("ab"))?;
    let forbidden: Vec<FiniteWord> = config
        .forbidden
        .clone()
        .unwrap_or_default()
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| alphabet.word(t))
        .collect::<quadword::Result<_>>()?;
    let pres = ForbiddenPresentation::new(alphabet, forbidden)?;
    let nmax = config.nmax.unwrap();
    let counts = transfer_counts(&pres, nmax);
    let rows: Vec<HilbertRow> = counts
        .iter()
        .enumerate()
        .map(|(n, c)| HilbertRow {
            n,
            count: c.to_string(),
        })
        .collect();
    match config.format.as_deref() {
        Some("json") => {
            let report = HilbertReport {
                config: config.clone(),
                version: VERSION,
                counts: rows,
            };
            write_json(config.out.as_ref(), &report)?;
        }
        _ => {
            let mut text = String::from("n,count\n");
            for r in &rows {
                text.push_str(&format!("{},{}\n", r.n, r.count));
            }
            write_output(config.out.as_ref(), &text)?;
        }
    }
    Ok(true)
}

fn primes(config: &RunConfig) -> RunResult {
    let path = config.input.as_ref().unwrap();
    let word = read_word(path)?;
    let index = FactorIndex::index_prefix(&word, format!("file:{}", path.display()))?;
    let candidates =
        enumerate_cogk1_candidates(&index, config.power.unwrap(), config.dmax.unwrap())?;
    let alphabet = full_alphabet();
    let report = PrimesReport {
        config: config.clone(),
        version: VERSION,
        candidates: candidates
            .iter()
            .map(|c| CandidateRow {
                word: alphabet.text(&c.canonical_word),
                d: c.period,
                pi_degree: c.pi_degree,
                verified_power: c.verified_power,
            })
            .collect(),
    };
    write_json(config.out.as_ref(), &report)?;
    Ok(true)
}

fn quotient(config: &RunConfig) -> RunResult {
    let alphabet = full_alphabet();
    let period = alphabet.word(config.period.as_deref().unwrap())?;
    let q = build_periodic_quotient(&period)?;
    let check_len = config.check_length.unwrap_or(30).max(2 * q.d());
    let rep = verify_quotient_identities(&q, check_len)?;
    let report = QuotientReport {
        config: config.clone(),
        version: VERSION,
        period: alphabet.text(q.period()),
        d: q.d(),
        pi_degree: q.pi_degree(),
        identities: QuotientIdentities {
            central: IdentityRow {
                pass: rep.central_ok,
                witness: rep.central_witness.map(|w| alphabet.text(&w)),
            },
            orthogonal: IdentityRow {
                pass: rep.orthogonal_ok,
                witness: rep.orthogonal_witness.map(|(i, j)| format!("Y{i} * Y{j}")),
            },
            squares: IdentityRow {
                pass: rep.squares_ok,
                witness: rep.squares_witness.map(|i| format!("Y{i}")),
            },
        },
        words_checked: rep.words_checked,
        all_pass: rep.all_pass,
    };
    write_json(config.out.as_ref(), &report)?;
    Ok(rep.all_pass)
}

fn degrees(config: &RunConfig) -> RunResult {
    let trace_path = config.trace.as_ref().unwrap();
    let trace_text = fs::read_to_string(trace_path)?;
    let trace_file: TraceFile = serde_json::from_str(&trace_text)?;
    let alphabet = full_alphabet();
    let anchors = trace_file.parse_anchors(&alphabet)?;
    let path = config.input.as_ref().unwrap();
    let word = read_word(path)?;
    let index = FactorIndex::index_prefix(&word, format!("file:{}", path.display()))?;
    let rows = matrix_image_degrees(&anchors, &index, config.power.unwrap())?;
    let report = DegreesReport {
        config: config.clone(),
        version: VERSION,
        rows: rows
            .iter()
            .map(|r| DegreeRowOut {
                j: r.j,
                anchor_len: r.anchor_len,
                d_j: r.d_j,
                pi_degree: r.pi_degree,
                envelope: r.envelope,
            })
            .collect(),
        envelope_increases: envelope_increases(&rows),
    };
    write_json(config.out.as_ref(), &report)?;
    Ok(true)
}

fn verify_all(config: &RunConfig) -> RunResult {
    let length = config.length.unwrap();
    let nmax = config.nmax.unwrap();
    let depth = config.depth.unwrap();
    let power = config.power.unwrap();
    let dmax = config.dmax.unwrap();
    let kmin = config.kmin.unwrap();
    let mut checks: Vec<Check> = Vec::new();

    // base word: Sturmian property at a bounded horizon
    let base = make_base(config)?;
    let n_sturm = 500.min(nmax);
    let base_len = (3 * n_sturm as u64).max(100_000.min(length));
    let sturmian = verify_sturmian(base.as_ref(), base_len, n_sturm)?;
    checks.push(Check {
        name: "base_sturmian",
        pass: sturmian.ok,
        detail: format!(
            "p(n) = n+1 for n <= {n_sturm} at prefix {base_len}, n_trust {}",
            sturmian.n_trust
        ),
    });
    let base_index = FactorIndex::index_stream(base.as_ref(), base_len)?;
    let base_profile = base_index.profile(nmax.max(500));

    // construction and stage bound
    let params = ConstructionParams::new(Arc::clone(&base), depth);
    let trace = ConstructionTrace::build(&params)?;
    let stage_bounds = verify_stage_length_bound(&trace);
    checks.push(Check {
        name: "stage_length_bound",
        pass: stage_bounds.all_pass,
        detail: format!(
            "stage lengths {:?} within 4 d^2 |W_d| for d <= {depth}",
            trace.stage_lengths
        ),
    });

    // limit word prefix, complexity bounds, sandwich
    let u = u_stream(&params)?;
    let u_prefix = u.prefix(length)?;
    let u_index = FactorIndex::index_prefix(&u_prefix, u.descriptor())?;
    let u_profile = u_index.profile(nmax);
    let anchors_ext = anchors_to_length(base.as_ref(), nmax, params.growth_factor)?;
    let bounds = check_u_bounds(&u_profile, &anchors_ext, nmax)?;
    checks.push(Check {
        name: "complexity_bound",
        pass: bounds.all_pass,
        detail: format!(
            "f(n) <= 100 (n+1) (log2 n)^2 for 2 <= n <= {nmax}; n_trust {}; max ratio {:.4}; stage index within floor(log2 n) + 1: {}",
            bounds.n_trust, bounds.max_ratio_bound, bounds.depth_ok
        ),
    });
    let sandwich = growth_sandwich_check(&u_profile, nmax)?;
    checks.push(Check {
        name: "growth_sandwich",
        pass: sandwich.all_pass,
        detail: format!(
            "C(n+1,2) <= dim(V^n) <= 1 + f(1) + sum 100 (j+1) (log2 j)^2 for trusted n <= {}",
            sandwich.checked_to
        ),
    });

    // recurrence of every short factor
    let scan = RecurrenceScan::over_word(&u_prefix)?;
    let mut recurrence_ok = true;
    let mut worst = u64::MAX;
    let max_recur = 30.min((length / 4) as usize);
    for n in 1..=max_recur {
        let rep = scan.check(n, kmin)?;
        recurrence_ok &= rep.ok;
        if let Some((_, c)) = rep.worst {
            worst = worst.min(c);
        }
    }
    checks.push(Check {
        name: "recurrence",
        pass: recurrence_ok,
        detail: format!(
            "factors of length <= {max_recur} of the half prefix occur >= {kmin} times; minimum count {worst}"
        ),
    });

    // gap classification of base and limit word
    let horizon = 200.min(nmax);
    let base_class = bergman_gap_check(&base_profile);
    let u_class = bergman_gap_check(&u_profile);
    let base_aperiodic =
        matches!(base_class, PeriodicityClass::AperiodicAtHorizon { n_trust } if n_trust >= horizon);
    let u_aperiodic =
        matches!(u_class, PeriodicityClass::AperiodicAtHorizon { n_trust } if n_trust >= horizon);
    checks.push(Check {
        name: "aperiodicity",
        pass: base_aperiodic && u_aperiodic,
        detail: format!("base {base_class:?}, limit {u_class:?}, horizon {horizon}"),
    });

    // PI-degree envelope over the trace anchors
    let rows = matrix_image_degrees(&trace.anchors, &u_index, power)?;
    let increases = envelope_increases(&rows);
    let needed_increases = depth / 2 + 1;
    checks.push(Check {
        name: "degrees_envelope",
        pass: increases >= needed_increases,
        detail: format!(
            "d_j = {:?}, envelope strictly increases {increases} times (need >= {needed_increases})",
            rows.iter().map(|r| r.d_j).collect::<Vec<_>>()
        ),
    });

    // candidate budget on the base vs candidates of the limit word
    let base_candidates = enumerate_cogk1_candidates(&base_index, power, 12)?;
    let gc = estimate_growth_constant(&base_profile, 500)?;
    let budget = prime_budget(gc);
    checks.push(Check {
        name: "base_candidate_budget",
        pass: (base_candidates.len() as u64) <= budget,
        detail: format!(
            "{} candidates at power {power}, d <= 12; budget floor(2 GC) = {budget} (GC ~ {gc:.3})",
            base_candidates.len()
        ),
    });
    let u_candidates = enumerate_cogk1_candidates(&u_index, power, dmax)?;
    let canonicals: Vec<FiniteWord> = u_candidates
        .iter()
        .map(|c| c.canonical_word.clone())
        .collect();
    let mut required: Vec<FiniteWord> = trace
        .anchors
        .iter()
        .filter(|w| w.len() <= dmax)
        .map(|w| canonical_rotation(&primitive_root(w)))
        .collect();
    required.sort();
    required.dedup();
    let anchors_present = required.iter().all(|w| canonicals.contains(w));
    checks.push(Check {
        name: "limit_candidates",
        pass: anchors_present && u_candidates.len() >= required.len(),
        detail: format!(
            "{} candidates at power {power}, d <= {dmax}; anchors' canonical rotations present: {anchors_present}",
            u_candidates.len()
        ),
    });

    let all_pass = checks.iter().all(|c| c.pass);
    let report = VerifyAllReport {
        config: config.clone(),
        version: VERSION,
        checks,
        all_pass,
    };
    write_json(config.report.as_ref(), &report)?;
    Ok(all_pass)
}

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_traits::Signed;
use power_sum_lab::algebraic::AlgebraicNumber;
use power_sum_lab::characterize::{decide_existence, Existence, FailureReason, Theta0};
use power_sum_lab::decimal::{format_sig, parse_rational, rational_string};
use power_sum_lab::heights::{budget_check, weil_height};
use power_sum_lab::pisot::{classify_tuple, is_pisot_number, FailingCondition};
use power_sum_lab::serial::{self, CertificateRecord};
use power_sum_lab::sml::decompose;
use power_sum_lab::structure::{check_nondegenerate, equiv_classes};
use power_sum_lab::trajectory::{scan, waring_check, EvalConfig};
use power_sum_lab::Rational;
use serde_json::{json, Value};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "power-sum-lab", version, about = "Exact tools for powers of algebraic numbers close to integers")]
struct Cli {
    /// Target precision in bits for rigorous enclosures.
    #[arg(long, global = true, env = "POWER_SUM_LAB_PRECISION", default_value_t = 128)]
    precision_bits: u32,
    /// Precision doublings before a comparison is reported undecided.
    #[arg(long, global = true, default_value_t = 8)]
    max_escalations: u32,
    /// Worker threads for scans (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable JSON on stdout instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Non-degeneracy, classes, Pisot flags and tuple classification.
    Classify { input: PathBuf },
    /// Decide whether coefficients exist that make the power sum converge
    /// to integers exponentially fast.
    Decide {
        input: PathBuf,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rigorous distances to the nearest integer over a range of n.
    Trajectory {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Compare against theta^n (rational, e.g. 7/10 or 0.7).
        #[arg(long)]
        theta: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Split {n : ||a_n|| < theta^n} into a finite set and progressions.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 200)]
        scan_limit: u64,
        /// Write the decomposition JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// g(k) = 2^k + floor((3/2)^k) - 2 with the distance of (3/2)^k.
    Waring {
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
    /// Weil heights, optionally checked against a sublinear budget.
    Height {
        input: PathBuf,
        /// Budget JSON, e.g. {"form": "power", "c": "1", "e": "1/2"}.
        #[arg(long, requires = "n")]
        budget: Option<String>,
        #[arg(long)]
        n: Option<u64>,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn theta_arg(s: &str) -> Result<Rational> {
    match parse_rational(s) {
        Some(t) if t.is_positive() => Ok(t),
        _ => bail!("theta must be a positive rational, got {s:?}"),
    }
}

fn short(a: &AlgebraicNumber) -> String {
    match a.rational_value() {
        Some(r) => rational_string(r),
        None => a.to_string(),
    }
}

struct Ctx {
    config: EvalConfig,
    precision_bits: u32,
    json: bool,
}

fn classify(ctx: &Ctx, input: &Path) -> Result<u8> {
    let betas = serial::algebraic_list_from_json(&read_json(input)?)?;
    let degeneracy = check_nondegenerate(&betas)?;
    let classes = equiv_classes(&betas)?;
    let pisot: Vec<bool> = betas.iter().map(is_pisot_number).collect::<power_sum_lab::Result<_>>()?;
    let c = classify_tuple(&betas)?;
    let verdict = serde_json::to_value(c.verdict)?;
    if ctx.json {
        let failing = match &c.failing_condition {
            None => Value::Null,
            Some(FailingCondition::SumNotInteger(s)) => json!({ "sum_not_integer": rational_string(s) }),
            Some(FailingCondition::LargeExtraConjugate(b)) => {
                json!({ "large_extra_conjugate": serial::algebraic_to_json(b) })
            }
        };
        let out = json!({
            "degenerate": degeneracy.as_ref().map(|d| json!({ "i": d.i, "j": d.j, "order": d.order })),
            "classes": classes,
            "pisot_number": pisot,
            "verdict": verdict,
            "extra_conjugates": c.extra_conjugates.iter().map(serial::algebraic_to_json).collect::<Vec<_>>(),
            "completed_sum": rational_string(&c.completed_sum),
            "failing_condition": failing,
        });
        println!("{}", pretty(&out));
        return Ok(0);
    }
    match &degeneracy {
        Some(d) => println!("degenerate: ratio order {} (entries {} and {})", d.order, d.i, d.j),
        None => println!("degenerate: false"),
    }
    let cls: Vec<String> =
        classes.iter().map(|c| format!("{{{}}}", c.iter().map(usize::to_string).collect::<Vec<_>>().join(", "))).collect();
    println!("classes: {}", cls.join(" "));
    for (i, (b, p)) in betas.iter().zip(&pisot).enumerate() {
        println!("entry {i}: {}", short(b));
        println!("  pisot number: {p}");
    }
    for b in &c.extra_conjugates {
        println!("extra conjugate: {}", short(b));
    }
    let sum = rational_string(&c.completed_sum);
    match &c.failing_condition {
        None => println!("pseudo-pisot: true (sum {sum})"),
        Some(FailingCondition::SumNotInteger(_)) => println!("pseudo-pisot: false (sum {sum} not an integer)"),
        Some(FailingCondition::LargeExtraConjugate(b)) => {
            println!("pseudo-pisot: false (extra conjugate {} has modulus at least 1)", short(b))
        }
    }
    println!("verdict: {}", verdict.as_str().unwrap_or_default());
    Ok(0)
}

fn decide(ctx: &Ctx, input: &Path, out: Option<&Path>) -> Result<u8> {
    let spec = serial::power_sum_from_json(&read_json(input)?)?;
    let cert = decide_existence(&spec.alphas())?;
    let rec = CertificateRecord::from_certificate(&cert);
    let v = serial::certificate_to_json(&rec);
    if let Some(p) = out {
        std::fs::write(p, pretty(&v) + "\n").with_context(|| format!("cannot write {}", p.display()))?;
    }
    if ctx.json {
        println!("{}", pretty(&v));
    } else {
        let verdict = match cert.verdict {
            Existence::Exists => "exists",
            Existence::NotExists => "not_exists",
        };
        println!("verdict: {verdict}");
        println!("m: {}", cert.exponent_m);
        match &cert.theta0 {
            Theta0::Zero => println!("theta0: 0 (no adjoined conjugates)"),
            Theta0::Value { number, lo, hi } => {
                let (d, e) = serial::decimal_with_error(lo, hi);
                println!("theta0: {d} +/- {e}");
                println!("theta0 is {}", short(number));
            }
        }
        if let Some((lo, hi)) = rec.original_rate {
            let (d, e) = serial::decimal_with_error(&lo, &hi);
            println!("rate per original index: {d} +/- {e}");
        }
        for r in &cert.failure_reasons {
            match r {
                FailureReason::NonIntegral { index, alpha } => {
                    println!("reason: non_integral (term {index}, {})", short(alpha))
                }
                FailureReason::LargeOutsideConjugate { class, beta } => {
                    println!("reason: large_outside_conjugate (class {class}, {})", short(beta))
                }
            }
        }
    }
    Ok(match cert.verdict {
        Existence::Exists => 0,
        Existence::NotExists => 1,
    })
}

fn trajectory(ctx: &Ctx, input: &Path, from: u64, to: u64, theta: Option<&str>, csv: Option<&Path>) -> Result<u8> {
    let spec = serial::power_sum_from_json(&read_json(input)?)?;
    let theta = theta.map(theta_arg).transpose()?;
    let report = scan(&spec, from, to, theta.as_ref(), ctx.config)?;
    let members = report.members();
    let undecided = report.undecided();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let summary = format!(
        "rows: {}\nmembers: {}\nundecided: {}",
        report.samples.len(),
        if theta.is_some() { join(&members) } else { "(no theta)".into() },
        join(&undecided)
    );
    if ctx.json {
        let rows: Vec<Value> = report
            .samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut row = json!({
                    "n": s.n,
                    "p": s.p.to_string(),
                    "dist_lo": format_sig(&s.dist_lo, 20),
                    "dist_hi": format_sig(&s.dist_hi, 20),
                    "decided": s.decided,
                });
                if let Some(c) = &report.comparison {
                    row["theta_power"] = json!(format_sig(&c[i].theta_power, 20));
                    row["in_M"] = json!(c[i].in_m);
                }
                row
            })
            .collect();
        println!("{}", pretty(&json!({ "rows": rows, "members": members, "undecided": undecided })));
    } else if let Some(p) = csv {
        std::fs::write(p, report.to_csv()).with_context(|| format!("cannot write {}", p.display()))?;
        println!("{summary}");
    } else {
        print!("{}", report.to_csv());
        eprintln!("{summary}");
    }
    let all_undecided = undecided.len() == report.samples.len();
    Ok(u8::from(all_undecided))
}

fn decompose_cmd(ctx: &Ctx, input: &Path, theta: &str, scan_limit: u64, out: Option<&Path>) -> Result<u8> {
    let spec = serial::recurrence_from_json(&read_json(input)?)?;
    let theta = theta_arg(theta)?;
    let d = decompose(&spec, &theta, scan_limit, ctx.config)?;
    let v = serial::decomposition_to_json(&d);
    if let Some(p) = out {
        std::fs::write(p, pretty(&v) + "\n").with_context(|| format!("cannot write {}", p.display()))?;
    }
    if ctx.json {
        println!("{}", pretty(&v));
    } else {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        println!("theta: {}", rational_string(&d.theta_tilde));
        println!("certified: {}", d.certified);
        println!("threshold: {}", d.threshold);
        println!("exceptional: {}", join(&d.exceptional));
        for p in &d.progressions {
            println!("progression: n = {} mod {} for n >= {}", p.residue, p.modulus, d.threshold);
        }
        if d.certified || !d.progressions.is_empty() {
            println!("period: {} (preperiod {}, m {})", d.period, d.preperiod, d.exponent_m);
        }
        if !d.mismatches.is_empty() {
            println!("cross-check mismatches: {}", join(&d.mismatches));
        }
        for b in &d.boundary {
            println!(
                "boundary: n = {}, distance in [{}, {}], theta^n = {}",
                b.n,
                format_sig(&b.dist_lo, 20),
                format_sig(&b.dist_hi, 20),
                format_sig(&b.theta_power, 20)
            );
        }
        if let Some(note) = &d.note {
            println!("not certified beyond {}: {note}", d.scan_limit);
        }
    }
    Ok(u8::from(!d.certified))
}

fn waring(ctx: &Ctx, kmax: u32) -> Result<u8> {
    let rows = waring_check(kmax)?;
    if ctx.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "k": r.k,
                    "g": r.g.to_string(),
                    "floor_term": r.floor_term.to_string(),
                    "distance": format_sig(&r.distance.dist_lo, 20),
                })
            })
            .collect();
        println!("{}", pretty(&Value::Array(v)));
    } else {
        println!("k,g,floor_term,distance");
        for r in &rows {
            println!("{},{},{},{}", r.k, r.g, r.floor_term, format_sig(&r.distance.dist_lo, 20));
        }
    }
    Ok(0)
}

fn height(ctx: &Ctx, input: &Path, budget: Option<&str>, n: Option<u64>) -> Result<u8> {
    let v = read_json(input)?;
    let nums = if v.is_array() || v.get("tuple").is_some() || v.get("alphas").is_some() {
        serial::algebraic_list_from_json(&v)?
    } else {
        vec![serial::algebraic_from_json(&v)?]
    };
    let budget = budget.map(|b| -> Result<_> { Ok(serial::budget_from_json(&serde_json::from_str(b)?)?) }).transpose()?;
    let mut rows = Vec::new();
    for a in &nums {
        let h = weil_height(a, ctx.precision_bits)?;
        let (d, e) = serial::decimal_with_error(&h.lo, &h.hi);
        let within = match (&budget, n) {
            (Some(b), Some(n)) => Some(budget_check(&h, b, n)),
            _ => None,
        };
        rows.push((short(a), d, e, h.exact_zero, within));
    }
    if ctx.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(a, d, e, z, w)| json!({ "number": a, "height": d, "error": e, "exact_zero": z, "within_budget": w }))
            .collect();
        println!("{}", pretty(&Value::Array(v)));
    } else {
        for (a, d, e, z, w) in &rows {
            let mut line = if *z { format!("h({a}) = 0 (root of unity)") } else { format!("h({a}) = {d} +/- {e}") };
            if let Some(w) = w {
                line.push_str(&format!(", within budget: {w}"));
            }
            println!("{line}");
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if cli.precision_bits == 0 || cli.max_escalations == 0 {
        bail!("precision and escalation count must be positive");
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let ctx = Ctx {
        config: EvalConfig { target_bits: cli.precision_bits, max_escalations: cli.max_escalations },
        precision_bits: cli.precision_bits,
        json: cli.json,
    };
    match &cli.cmd {
        Cmd::Classify { input } => classify(&ctx, input),
        Cmd::Decide { input, out } => decide(&ctx, input, out.as_deref()),
        Cmd::Trajectory { input, from, to, theta, csv } => {
            trajectory(&ctx, input, *from, *to, theta.as_deref(), csv.as_deref())
        }
        Cmd::Decompose { input, theta, scan_limit, out } => decompose_cmd(&ctx, input, theta, *scan_limit, out.as_deref()),
        Cmd::Waring { kmax } => waring(&ctx, *kmax),
        Cmd::Height { input, budget, n } => height(&ctx, input, budget.as_deref(), *n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flatperm::bijections::{
    avoider_23_1_to_partition, inverse_32_1_to_23_1, map_23_1_to_32_1, partition_to_23_1_avoider,
};
use flatperm::closed_forms::SpecialNumberCache;
use flatperm::recurrences::distribution_table;
use flatperm::series::{
    expand_egf_12_3_avoid, expand_egf_21_3_avoid, expand_g_r_31_2, egf_coefficient,
};
use flatperm::{BruteForce, CycleForm, MarkedPartition, PatternId, PowerSeries, QPoly, Suite, Verifier};
use serde_json::{json, Value};

mod render;

use render::{coefficient_map, decimal, json_rational, json_string, rational};

const RECURRENCE_CAP: usize = 200;
const ORDER_CAP: usize = 64;
const DEFAULT_BRUTE_CAP: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "flatperm", version, about = "Vincular pattern statistics on flattened permutations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The distribution g_n(q) of one pattern.
    Distribution {
        #[arg(long)]
        pattern: PatternId,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Avoider counts and average occurrence numbers for all six patterns.
    Table {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients of a generating function.
    Series {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the marked-partition and reversal bijections.
    Bijection {
        /// A marked partition such as "{6,5,2}{10,7,3}*{4}*{9,8}".
        #[arg(long, conflicts_with = "cycles", required_unless_present = "cycles")]
        partition: Option<MarkedPartition>,
        /// A permutation in cycle form such as "(1,6,5,2,10,7)(3)(4,9,8)".
        #[arg(long)]
        cycles: Option<CycleForm>,
        /// Which avoider class the --cycles input belongs to.
        #[arg(long, value_enum, default_value_t = Source::Avoid23_1)]
        from: Source,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Brute,
    Recurrence,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    #[value(name = "g31_2_r0")]
    G31_2R0,
    #[value(name = "g31_2_r1")]
    G31_2R1,
    #[value(name = "g31_2_r2")]
    G31_2R2,
    #[value(name = "g31_2_r3")]
    G31_2R3,
    #[value(name = "egf_21_3")]
    Egf21_3,
    #[value(name = "egf_12_3")]
    Egf12_3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    #[value(name = "23-1")]
    Avoid23_1,
    #[value(name = "32-1")]
    Avoid32_1,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<flatperm::Error> for Failure {
    fn from(e: flatperm::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, result) = run(cli.command);
    match result {
        Ok(text) => match emit(out, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verification(text)) => {
            let _ = emit(out, &text);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> (Option<PathBuf>, Outcome) {
    match cmd {
        Command::Distribution { pattern, n, method, format, out } => (out, distribution(pattern, n, method, format)),
        Command::Table { n_max, format, out } => (out, table(n_max, format)),
        Command::Verify { suite, n_max, format, out } => (out, verify(suite, n_max, format)),
        Command::Series { which, order, format, out } => (out, series(which, order, format)),
        Command::Bijection { partition, cycles, from, format, out } => {
            (out, bijection(partition, cycles, from, format))
        }
    }
}

fn brute_cap() -> Result<usize, Failure> {
    match std::env::var("FLATPERM_MAX_N") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("FLATPERM_MAX_N must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BRUTE_CAP),
    }
}

fn check_n(what: &str, n: usize, cap: usize, cap_name: &str) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage(format!("{what} must be at least 1")));
    }
    if n > cap {
        return Err(Failure::Usage(format!("{what} = {n} exceeds the {cap_name} cap of {cap}")));
    }
    Ok(())
}

fn distribution(pattern: PatternId, n: usize, method: Method, format: Format) -> Outcome {
    let rec = if method != Method::Brute {
        if !pattern.has_recurrence() {
            return Err(Failure::Usage(format!("no recurrence for {pattern}; use --method brute")));
        }
        check_n("n", n, RECURRENCE_CAP, "recurrence")?;
        Some(distribution_table(pattern, n)?.get(n).expect("n >= 1").clone())
    } else {
        None
    };
    let brute = if method != Method::Recurrence {
        let cap = brute_cap()?;
        check_n("n", n, cap, "brute-force (FLATPERM_MAX_N)")?;
        Some(BruteForce::with_cap(cap).distribution(n, &pattern.vincular())?)
    } else {
        None
    };
    let main: &QPoly = rec.as_ref().or(brute.as_ref()).expect("one method ran");
    let matched = match (&rec, &brute) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let method_name = match method {
        Method::Brute => "brute",
        Method::Recurrence => "recurrence",
        Method::Both => "both",
    };
    Ok(match format {
        Format::Json => {
            let mut v = json!({
                "pattern": pattern.name(),
                "n": n,
                "method": method_name,
                "coefficients": coefficient_map(main),
            });
            if let (Some(b), Some(m)) = (&brute, matched) {
                v["brute_force"] = coefficient_map(b);
                v["match"] = Value::Bool(m);
            }
            json_string(&v)
        }
        Format::Csv => {
            let mut s = String::from(if matched.is_some() { "exponent,recurrence,brute_force\n" } else { "exponent,coefficient\n" });
            let len = main.coeffs().len().max(brute.as_ref().map_or(0, |b| b.coeffs().len())).max(1);
            for i in 0..len {
                match (&rec, &brute) {
                    (Some(a), Some(b)) => writeln!(s, "{i},{},{}", a.coeff(i), b.coeff(i)),
                    _ => writeln!(s, "{i},{}", main.coeff(i)),
                }
                .expect("writing to a String");
            }
            s
        }
        Format::Text => {
            let mut s = format!("g_{n}(q) for {pattern} = {main}\n");
            if let (Some(b), Some(m)) = (&brute, matched) {
                writeln!(s, "brute force = {b}\nmatch = {m}").expect("writing to a String");
            }
            s
        }
    })
}

fn table(n_max: usize, format: Format) -> Outcome {
    check_n("n-max", n_max, RECURRENCE_CAP, "table")?;
    let cache = SpecialNumberCache::new(n_max);
    let mut rows = Vec::new();
    for p in PatternId::ALL {
        for n in 1..=n_max {
            rows.push((p, n, cache.avoiders(p, n)?, cache.average_occurrences(p, n)?));
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("pattern,n,avoiders,average_num,average_den\n");
            for (p, n, a, avg) in &rows {
                writeln!(s, "{p},{n},{a},{},{}", avg.numer(), avg.denom()).expect("writing to a String");
            }
            s
        }
        Format::Json => json_string(&Value::Array(
            rows.iter()
                .map(|(p, n, a, avg)| {
                    json!({
                        "pattern": p.name(),
                        "n": n,
                        "avoiders": a.to_string(),
                        "average": json_rational(avg),
                        "average_decimal": decimal(avg, 6),
                    })
                })
                .collect(),
        )),
        Format::Text => {
            let mut s = format!("{:<6}{:>5}  {:>28}  {:>24}  {:>14}\n", "pattern", "n", "avoiders", "average", "decimal");
            for (p, n, a, avg) in &rows {
                writeln!(s, "{:<7}{:>4}  {:>28}  {:>24}  {:>14}", p.name(), n, a, rational(avg), decimal(avg, 6))
                    .expect("writing to a String");
            }
            s
        }
    })
}

fn verify(suite: Suite, n_max: usize, format: Format) -> Outcome {
    let cap = brute_cap()?;
    check_n("n-max", n_max, cap, "brute-force (FLATPERM_MAX_N)")?;
    let report = Verifier::with_brute(n_max, BruteForce::with_cap(cap))?.run(suite)?;
    let text = match format {
        Format::Json => json_string(&json!({
            "suite": suite.name(),
            "n_max": n_max,
            "passed": report.all_pass(),
            "checks": report.checks.iter().map(|c| json!({
                "suite": c.suite.name(),
                "name": c.name,
                "status": if c.passed { "PASS" } else { "FAIL" },
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "findings": report.findings.iter().map(|f| json!({
                "name": f.name,
                "detail": f.detail,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("suite,check,status\n");
            for c in &report.checks {
                writeln!(s, "{},{},{}", c.suite.name(), c.name.replace(',', ";"), if c.passed { "PASS" } else { "FAIL" })
                    .expect("writing to a String");
            }
            s
        }
        Format::Text => format!("{report}\n"),
    };
    if report.all_pass() {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn series(which: Which, order: usize, format: Format) -> Outcome {
    check_n("order", order, ORDER_CAP, "series order")?;
    let s: PowerSeries = match which {
        Which::G31_2R0 | Which::G31_2R1 | Which::G31_2R2 | Which::G31_2R3 => {
            let r = which as usize - Which::G31_2R0 as usize;
            expand_g_r_31_2(r, order.max(4))?.truncate(order)
        }
        Which::Egf21_3 => expand_egf_21_3_avoid(order.max(2))?.truncate(order),
        Which::Egf12_3 => expand_egf_12_3_avoid(order.max(2))?.truncate(order),
    };
    let name = which.to_possible_value().expect("no skipped variants").get_name().to_string();
    let egf = matches!(which, Which::Egf21_3 | Which::Egf12_3);
    let scaled: Option<Vec<String>> = egf.then(|| {
        (0..order)
            .map(|n| egf_coefficient(&s, n).map_or_else(|| "non-integer".to_string(), |c| c.to_string()))
            .collect()
    });
    let coeffs: Vec<String> = s.coeffs().iter().map(rational).collect();
    Ok(match format {
        Format::Json => {
            let mut v = json!({ "which": name, "order": order, "coefficients": coeffs });
            if let Some(sc) = scaled {
                v["factorial_scaled"] = json!(sc);
            }
            json_string(&v)
        }
        Format::Csv => {
            let mut s = String::from(if egf { "power,coefficient,factorial_scaled\n" } else { "power,coefficient\n" });
            for (i, c) in coeffs.iter().enumerate() {
                match &scaled {
                    Some(sc) => writeln!(s, "{i},{c},{}", sc[i]),
                    None => writeln!(s, "{i},{c}"),
                }
                .expect("writing to a String");
            }
            s
        }
        Format::Text => {
            let mut s = format!("{name}: {}\n", coeffs.join(", "));
            if let Some(sc) = scaled {
                writeln!(s, "n! * coefficient: {}", sc.join(", ")).expect("writing to a String");
            }
            s
        }
    })
}

fn bijection(partition: Option<MarkedPartition>, cycles: Option<CycleForm>, from: Source, format: Format) -> Outcome {
    let (p, a231, a321) = match (partition, cycles) {
        (Some(p), _) => {
            let a = partition_to_23_1_avoider(&p);
            let b = map_23_1_to_32_1(&a)?;
            (p, a, b)
        }
        (None, Some(c)) => match from {
            Source::Avoid23_1 => {
                let b = map_23_1_to_32_1(&c)?;
                (avoider_23_1_to_partition(&c)?, c, b)
            }
            Source::Avoid32_1 => {
                let a = inverse_32_1_to_23_1(&c)?;
                (avoider_23_1_to_partition(&a)?, a, c)
            }
        },
        (None, None) => return Err(Failure::Usage("give --partition or --cycles".into())),
    };
    Ok(match format {
        Format::Json => json_string(&json!({
            "partition": p.to_string(),
            "blocks": p.num_blocks(),
            "avoider_23_1": a231.to_string(),
            "avoider_32_1": a321.to_string(),
        })),
        Format::Csv => {
            let field = |x: String| x.replace(',', " ");
            format!(
                "partition,avoider_23_1,avoider_32_1\n{},{},{}\n",
                field(p.to_string()),
                field(a231.to_string()),
                field(a321.to_string())
            )
        }
        Format::Text => format!("partition    {p}\n23-1 avoider {a231}\n32-1 avoider {a321}\n"),
    })
}

//! The five subcommands, each producing a rendered [`Report`].

use crate::output::{render, Report};
use crate::{
    ingest, BuildArgs, CompareArgs, ConstantArgs, ExactArgs, Failure, Method, SimulateArgs,
    StatisticArg,
};
use dstprot_core::asymptotics::{protected_constant, residual_table};
use dstprot_core::dst_sim::{
    build_from_strings, count_leaves, enumerate_leaves, k_protected_nodes, monte_carlo_trial,
    DstTree, Statistic, SummaryStats,
};
use dstprot_core::exact_sequence::{l_closed_form_table, l_sequence_recursion, l_values_via_m};
use dstprot_core::precision::{PrecFloat, PrecisionConfig};
use dstprot_core::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Digits of the `l_n/n` column of `exact`.
const RATIO_DIGITS: u32 = 15;
/// Largest size that still gets an exact 2-protected reference value
/// next to a simulation (streamed exact evaluation, sub-second).
const PROTECTED_REFERENCE_CAP: usize = 600;
/// Largest size the exhaustive split enumeration certifies, and so the
/// largest with an exact leaf reference.
const LEAVES_REFERENCE_CAP: usize = 12;

fn version_metadata() -> (String, String) {
    ("version".to_string(), VERSION.to_string())
}

fn pair(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

/// Shortest round-trip decimal of a measured (floating-point) value.
fn float_str(x: f64) -> String {
    format!("{x}")
}

fn ratio_of(value: &Rational, n: usize) -> Rational {
    value / Rational::from_integer(BigInt::from(n as u64))
}

/// `exact`: the table of expected 2-protected counts.
pub fn cmd_exact(args: &ExactArgs) -> Result<String, Failure> {
    if args.n > args.max_n {
        return Err(Failure::Usage(format!(
            "--n {} exceeds the size cap {}; raise --max-n if the run is intended",
            args.n, args.max_n
        )));
    }
    let recursion = matches!(args.method, Method::Recursion | Method::Both)
        .then(|| l_sequence_recursion(args.n).values);
    let closed = matches!(args.method, Method::ClosedForm | Method::Both)
        .then(|| l_closed_form_table(args.n));
    let primary = recursion.as_ref().or(closed.as_ref()).expect("some route is always selected");

    let mut rows = Vec::with_capacity(args.n + 1);
    let mut disagreements = 0usize;
    for n in 0..=args.n {
        let value = &primary[n];
        let agreement = match (&recursion, &closed) {
            (Some(rec), Some(clo)) => {
                let ok = rec[n] == clo[n];
                disagreements += usize::from(!ok);
                if ok { "yes" } else { "no" }
            }
            _ => "",
        };
        let ratio = if n == 0 {
            String::new()
        } else {
            PrecFloat::from_rational(&ratio_of(value, n), RATIO_DIGITS)
                .to_decimal_string(RATIO_DIGITS)
        };
        rows.push(vec![n.to_string(), value.to_string(), ratio, agreement.to_string()]);
    }

    let method_name = match args.method {
        Method::Recursion => "recursion",
        Method::ClosedForm => "closed-form",
        Method::Both => "both",
    };
    let report = Report {
        command: "exact",
        parameters: vec![
            pair("n", args.n),
            pair("method", method_name),
            pair("ratio_digits", RATIO_DIGITS),
        ],
        metadata: vec![version_metadata()],
        columns: vec!["n", "l_n", "ratio", "agreement"],
        rows,
    };
    let text = render(&report, args.format);
    if disagreements > 0 {
        return Err(Failure::Internal {
            output: Some(text),
            message: format!("{disagreements} row(s) disagree between evaluation routes"),
        });
    }
    Ok(text)
}

/// `constant`: the asymptotic slope with its truncation evidence.
pub fn cmd_constant(args: &ConstantArgs) -> Result<String, Failure> {
    let cfg = validated_config(args.digits)?;
    let constant = protected_constant(&cfg)
        .map_err(|e| Failure::Usage(format!("precision {} infeasible: {e}", args.digits)))?;
    let report = Report {
        command: "constant",
        parameters: vec![pair("digits", args.digits)],
        metadata: vec![version_metadata()],
        columns: vec!["constant", "truncation_index", "tail_bound"],
        rows: vec![vec![
            constant.value.to_decimal_string(args.digits),
            constant.truncation_index.to_string(),
            constant.tail_bound.to_decimal_string(cfg.working_digits()),
        ]],
    };
    Ok(render(&report, args.format))
}

fn validated_config(digits: u32) -> Result<PrecisionConfig, Failure> {
    if !(1..=1000).contains(&digits) {
        return Err(Failure::Usage(format!("--digits must lie in 1..=1000, got {digits}")));
    }
    Ok(PrecisionConfig::with_digits(digits))
}

/// Monte Carlo sums over rayon's pool. Trial counts are accumulated as
/// exact integers, so the partitioning across threads cannot change any
/// reported value — output is byte-identical for every thread count.
fn parallel_monte_carlo(n: usize, trials: u64, seed: u64, statistic: Statistic) -> SummaryStats {
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let value = u128::from(monte_carlo_trial(n, seed, trial, statistic));
            (value, value * value)
        })
        .reduce(|| (0u128, 0u128), |a, b| (a.0 + b.0, a.1 + b.1));
    SummaryStats::from_sums(trials, seed, sum, sum_sq)
}

fn exact_reference(n: usize, statistic: StatisticArg) -> Option<Rational> {
    match statistic {
        StatisticArg::Protected2 if n <= PROTECTED_REFERENCE_CAP => {
            l_values_via_m(&[n]).pop()
        }
        StatisticArg::Leaves if n <= LEAVES_REFERENCE_CAP => Some(
            enumerate_leaves(n)
                .into_iter()
                .fold(Rational::zero(), |acc, (value, prob)| {
                    acc + Rational::from_integer(BigInt::from(value)) * prob
                }),
        ),
        _ => None,
    }
}

/// `simulate`: one Monte Carlo run with an exact cross-check when the
/// size admits one.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<String, Failure> {
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".to_string()));
    }
    let statistic = match args.statistic {
        StatisticArg::Protected2 => Statistic::KProtected(2),
        StatisticArg::Leaves => Statistic::Leaves,
    };
    let stats = parallel_monte_carlo(args.n, args.trials, args.seed, statistic);

    let (reference_str, z_str) = match exact_reference(args.n, args.statistic) {
        Some(reference) => {
            let reference_f = PrecFloat::from_rational(&reference, 20).to_f64();
            let diff = stats.mean - reference_f;
            let z = if diff == 0.0 { 0.0 } else { diff / stats.std_error };
            (reference.to_string(), float_str(z))
        }
        None => (String::new(), String::new()),
    };

    let statistic_name = match args.statistic {
        StatisticArg::Protected2 => "protected2",
        StatisticArg::Leaves => "leaves",
    };
    let report = Report {
        command: "simulate",
        parameters: vec![
            pair("n", args.n),
            pair("trials", args.trials),
            pair("statistic", statistic_name),
        ],
        metadata: vec![version_metadata(), pair("seed", args.seed)],
        columns: vec![
            "mean",
            "variance",
            "std_error",
            "ci_low",
            "ci_high",
            "exact_reference",
            "z_score",
        ],
        rows: vec![vec![
            float_str(stats.mean),
            float_str(stats.variance),
            float_str(stats.std_error),
            float_str(stats.ci_low),
            float_str(stats.ci_high),
            reference_str,
            z_str,
        ]],
    };
    Ok(render(&report, args.format))
}

fn parse_n_list(text: &str) -> Result<Vec<u64>, Failure> {
    let mut sizes = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let n: u64 = piece
            .parse()
            .map_err(|_| Failure::Usage(format!("--n-list entry {piece:?} is not a size")))?;
        sizes.push(n);
    }
    if sizes.is_empty() {
        return Err(Failure::Usage("--n-list needs at least one size".to_string()));
    }
    Ok(sizes)
}

/// `compare`: exact ratio, asymptotic slope, residual, and Monte Carlo
/// estimate side by side for each requested size.
pub fn cmd_compare(args: &CompareArgs) -> Result<String, Failure> {
    let sizes = parse_n_list(&args.n_list)?;
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".to_string()));
    }
    let cfg = validated_config(args.digits)?;
    for &n in &sizes {
        if n == 0 {
            return Err(Failure::Usage("--n-list sizes must be positive".to_string()));
        }
        if n > args.max_n as u64 {
            return Err(Failure::Usage(format!(
                "size {n} exceeds the cap {}; raise --max-n if the run is intended",
                args.max_n
            )));
        }
    }

    let exact_rows = residual_table(&sizes, &cfg)
        .map_err(|e| Failure::Usage(format!("precision {} infeasible: {e}", args.digits)))?;

    let mut rows = Vec::with_capacity(sizes.len());
    for row in &exact_rows {
        let n = row.n as usize;
        let stats = parallel_monte_carlo(n, args.trials, args.seed, Statistic::KProtected(2));
        let scale = n as f64;
        rows.push(vec![
            n.to_string(),
            row.exact_ratio.to_decimal_string(args.digits),
            row.constant.to_decimal_string(args.digits),
            row.residual.to_decimal_string(args.digits),
            float_str(stats.mean / scale),
            float_str(stats.ci_low / scale),
            float_str(stats.ci_high / scale),
            float_str(row.log2n_frac),
        ]);
    }

    let normalized_list =
        sizes.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let report = Report {
        command: "compare",
        parameters: vec![
            pair("n_list", normalized_list),
            pair("trials", args.trials),
            pair("digits", args.digits),
        ],
        metadata: vec![version_metadata(), pair("seed", args.seed)],
        columns: vec![
            "n",
            "exact_ratio",
            "constant",
            "residual",
            "mc_ratio",
            "mc_ratio_ci_low",
            "mc_ratio_ci_high",
            "log2n_frac",
        ],
        rows,
    };
    Ok(render(&report, args.format))
}

fn render_node(tree: &DstTree, index: usize) -> String {
    let name = tree.label(index).unwrap_or("*");
    match (tree.left(index), tree.right(index)) {
        (None, None) => name.to_string(),
        (left, right) => {
            let left = left.map_or_else(|| "-".to_string(), |c| render_node(tree, c));
            let right = right.map_or_else(|| "-".to_string(), |c| render_node(tree, c));
            format!("({name} {left} {right})")
        }
    }
}

fn render_tree(tree: &DstTree) -> String {
    match tree.root() {
        None => "-".to_string(),
        Some(root) => render_node(tree, root),
    }
}

/// `build`: one explicit tree with its protection census.
pub fn cmd_build(args: &BuildArgs) -> Result<String, Failure> {
    let records = ingest::parse_bit_strings(&args.input)?;
    let tree = build_from_strings(&records).map_err(|e| {
        Failure::Usage(match e {
            dstprot_core::Error::BitsExhausted { item, label } => {
                let who = label.map_or_else(String::new, |l| format!(" ({l:?})"));
                format!(
                    "{}: record {}{who} ran out of routing bits before an empty slot",
                    args.input.display(),
                    item + 1
                )
            }
            other => format!("{}: {other}", args.input.display()),
        })
    })?;

    let protected = k_protected_nodes(&tree, args.k);
    let set = protected
        .iter()
        .map(|&i| tree.label(i).map_or_else(|| format!("#{i}"), str::to_string))
        .collect::<Vec<_>>()
        .join(";");

    let report = Report {
        command: "build",
        parameters: vec![pair("input", args.input.display()), pair("k", args.k)],
        metadata: vec![version_metadata()],
        columns: vec!["nodes", "leaves", "protected_count", "protected_set", "tree"],
        rows: vec![vec![
            tree.node_count().to_string(),
            count_leaves(&tree).to_string(),
            protected.len().to_string(),
            set,
            render_tree(&tree),
        ]],
    };
    Ok(render(&report, args.format))
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use multiholo::certificate::{oracle_certificate, Certificate, CERTIFICATE_VERSION};
use multiholo::classify::classify;
use multiholo::gamma::{
    gamma_table, gamma_table_json, theta_table, theta_table_json, verify_correspondence,
    CorrespondenceOptions,
};
use multiholo::group::{parse_group_descriptor, GroupError, GroupShape};
use multiholo::oracle::{compute_h_and_t, OracleConfig, OracleError, DEFAULT_SYM_LIMIT};
use multiholo::ring::{
    brute_enumerate_tables, circle_invariant_factors, enumerate_rings, validate_ring, RingError,
    RingStructure, DEFAULT_BRUTE_LIMIT,
};

#[derive(Parser, Debug)]
#[command(
    name = "multiholo",
    version,
    about = "Ring structures, regular subgroups and T(G) for abelian groups"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Case label, |T(G)| and the rings giving members of H(G).
    Classify {
        #[arg(short = 'g', long = "group")]
        group: String,
    },
    /// The ring list, optionally with the rings whose circle group is not isomorphic to G.
    Rings {
        #[arg(short = 'g', long = "group")]
        group: String,
        #[arg(long)]
        include_k: bool,
    },
    /// gamma and theta tables for one ring.
    Theta {
        #[arg(short = 'g', long = "group")]
        group: String,
        /// Index into the ring list (trivial ring is 0).
        #[arg(long)]
        ring: usize,
        /// Index into the list that includes the K-only rings.
        #[arg(long)]
        include_k: bool,
    },
    /// Brute-force certificate for a small finite group.
    Oracle {
        #[arg(short = 'g', long = "group")]
        group: String,
        #[arg(long, default_value_t = 64)]
        max_order: usize,
        #[arg(long, default_value_t = DEFAULT_SYM_LIMIT)]
        sym_limit: usize,
        /// Ignore and do not write the certificate cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Compares the classifier with the oracle on every abelian group up to the given order.
    Verify {
        #[arg(long, default_value_t = 32)]
        max_order: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderBound { .. } | GroupError::Infinite | GroupError::TorsionTooLarge => {
                Failure {
                    code: 3,
                    message: e.to_string(),
                }
            }
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure {
            code: if e.is_bound() { 3 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Self {
        match e {
            RingError::Group(g) => g.into(),
            RingError::Oracle(o) => o.into(),
            RingError::SearchSpace { .. } | RingError::TorsionBound { .. } => Failure {
                code: 3,
                message: e.to_string(),
            },
            e => Failure {
                code: 1,
                message: e.to_string(),
            },
        }
    }
}

/// Text written to stdout together with the exit code.
struct Output {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn render(format: Format, value: Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n",
        Format::Text => text(),
    }
}

fn parse(desc: &str) -> Result<GroupShape, Failure> {
    Ok(parse_group_descriptor(desc)?)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let ok = |text| Ok(Output { text, code: 0 });
    match &cli.command {
        Command::Classify { group } => {
            let mut report = classify(&parse(group)?);
            report.group = group.clone();
            ok(render(cli.format, report.to_json(), || report.to_string()))
        }
        Command::Rings { group, include_k } => {
            let shape = parse(group)?;
            let rings = enumerate_rings(&shape, *include_k)?;
            ok(rings_output(cli.format, group, &shape, &rings)?)
        }
        Command::Theta {
            group,
            ring,
            include_k,
        } => {
            let shape = parse(group)?;
            let rings = enumerate_rings(&shape, *include_k)?;
            let r = rings.get(*ring).ok_or_else(|| {
                Failure::usage(format!(
                    "ring index {ring} out of range (0..{})",
                    rings.len()
                ))
            })?;
            let value = json!({
                "group": group,
                "ring_index": ring,
                "ring": r.to_json(),
                "gamma": gamma_table_json(r)?,
                "theta": theta_table_json(r)?,
            });
            let gamma = gamma_table(r)?;
            let theta = theta_table(r)?;
            ok(render(cli.format, value, || {
                let mut s = format!("ring {ring} on {shape}:\n");
                for line in r.to_string().lines() {
                    let _ = writeln!(s, "  {line}");
                }
                for (g, rows) in &gamma {
                    let _ = writeln!(s, "gamma({g}):");
                    for (h, img) in rows {
                        let _ = writeln!(s, "  {h} -> {img}");
                    }
                }
                let _ = writeln!(s, "theta:");
                for (a, img) in &theta {
                    let _ = writeln!(s, "  {a} -> {img}");
                }
                s
            }))
        }
        Command::Oracle {
            group,
            max_order,
            sym_limit,
            no_cache,
        } => {
            if *max_order == 0 {
                return Err(Failure::usage("--max-order must be positive"));
            }
            let shape = parse(group)?;
            let cfg = OracleConfig {
                max_order: *max_order,
                sym_limit: *sym_limit,
                ..OracleConfig::default()
            };
            let cert = cached_certificate(&shape, &cfg, *no_cache)?;
            let value = serde_json::to_value(&cert).expect("certificate serializes");
            ok(render(cli.format, value, || certificate_text(&cert)))
        }
        Command::Verify { max_order } => {
            if *max_order == 0 {
                return Err(Failure::usage("--max-order must be positive"));
            }
            verify(cli.format, *max_order)
        }
    }
}

fn rings_output(
    format: Format,
    group: &str,
    shape: &GroupShape,
    rings: &[RingStructure],
) -> Result<String, Failure> {
    let mut entries = Vec::new();
    let mut text = format!("{} ring(s) on {shape}\n", rings.len());
    for (i, r) in rings.iter().enumerate() {
        let circle = circle_invariant_factors(r)?;
        let k_only = circle != shape.invariant_factors();
        entries.push(json!({
            "index": i,
            "k_only": k_only,
            "circle_invariant_factors": circle
                .torsion
                .iter()
                .map(|&d| u64::try_from(d).map_or_else(|_| Value::String(d.to_string()), Value::from))
                .collect::<Vec<_>>(),
            "table": r.to_json(),
        }));
        let _ = writeln!(
            text,
            "ring {i}{}: (G, o) = {circle}",
            if k_only { " [k-only]" } else { "" }
        );
        for line in r.to_string().lines() {
            let _ = writeln!(text, "  {line}");
        }
    }
    Ok(render(
        format,
        json!({ "group": group, "rings": entries }),
        || text,
    ))
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = format!(
        "{}: |G| = {}, |Aut| = {}, |Hol| = {}, search {}\nK(G): {} abelian members, {} in H(G); {} non-abelian normal regular subgroups\n",
        c.group, c.order, c.aut_order, c.hol_order, c.search_path, c.k_count, c.h_count, c.nonabelian_count
    );
    for m in &c.members {
        let _ = writeln!(
            s,
            "member {}: invariant factors {:?}, in H {}, normal {}, ring {}",
            m.index, m.invariant_factors, m.in_h, m.normal_in_hol, m.ring
        );
    }
    if let Some(n) = &c.symmetric_normalizer {
        let _ = writeln!(
            s,
            "N_S(G)(Hol(G)) has order {}, |T(G)| = {}, elementary abelian {}",
            n.normalizer_order, n.t_order, n.elementary_abelian
        );
    }
    s
}

fn cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("HOLO_CACHE_DIR") {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(Path::new(&d).join("multiholo"));
    }
    std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache").join("multiholo"))
}

fn cache_key(shape: &GroupShape, cfg: &OracleConfig) -> String {
    let name: String = format!(
        "{shape}-{CERTIFICATE_VERSION}-m{}-s{}",
        cfg.max_order, cfg.sym_limit
    )
    .chars()
    .map(|c| {
        if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
            c
        } else {
            '_'
        }
    })
    .collect();
    name + ".json"
}

fn cached_certificate(
    shape: &GroupShape,
    cfg: &OracleConfig,
    no_cache: bool,
) -> Result<Certificate, Failure> {
    let path = if no_cache {
        None
    } else {
        cache_dir().map(|d| d.join(cache_key(shape, cfg)))
    };
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(cert) = serde_json::from_str::<Certificate>(&text) {
                if cert.version == CERTIFICATE_VERSION {
                    return Ok(cert);
                }
            }
        }
    }
    let cert = oracle_certificate(shape, cfg)?;
    if let Some(p) = &path {
        // the cache is an optimization; failing to write it is not an error
        if let Some(dir) = p.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let _ = std::fs::write(
            p,
            serde_json::to_string(&cert).expect("certificate serializes"),
        );
    }
    Ok(cert)
}

/// Finite abelian groups of order at most `max`, as shapes, in a fixed order.
fn finite_shapes(max: usize) -> Vec<GroupShape> {
    fn partitions(total: u32, largest: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
        if total == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=largest.min(total)).rev() {
            cur.push(part);
            partitions(total - part, part, out, cur);
            cur.pop();
        }
    }
    let max = max as u64;
    let mut shapes = Vec::new();
    for order in 1..=max {
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = order;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut k = 0;
                while rest % p == 0 {
                    rest /= p;
                    k += 1;
                }
                factors.push((p, k));
            }
            p += 1;
        }
        let mut combos: Vec<(Vec<u32>, Vec<u64>)> = vec![(Vec::new(), Vec::new())];
        for &(p, k) in &factors {
            let mut parts = Vec::new();
            partitions(k, k, &mut parts, &mut Vec::new());
            combos = combos
                .into_iter()
                .flat_map(|(two, odd)| {
                    parts.iter().map(move |part| {
                        let (mut two, mut odd) = (two.clone(), odd.clone());
                        if p == 2 {
                            two.extend(part);
                        } else {
                            odd.extend(part.iter().map(|&e| p.pow(e)));
                        }
                        (two, odd)
                    })
                })
                .collect();
        }
        for (two, odd) in combos {
            shapes.push(GroupShape::new(0, two, odd).expect("valid shape"));
        }
    }
    shapes
}

/// 2-groups of order at most 16 (including the trivial one) paired with free ranks 1 to 3.
fn infinite_shapes() -> Vec<GroupShape> {
    let mut out = Vec::new();
    for rank in 1..=3 {
        for s in finite_shapes(16) {
            if s.odd_part().is_empty() {
                out.push(
                    GroupShape::new(rank, s.two_part().to_vec(), Vec::new()).expect("valid shape"),
                );
            }
        }
    }
    out
}

struct ShapeResult {
    shape: GroupShape,
    classifier: usize,
    oracle: Option<usize>,
    k_rings: usize,
    k_oracle: Option<usize>,
    problems: Vec<String>,
}

fn verify(format: Format, max_order: usize) -> Result<Output, Failure> {
    let cfg = OracleConfig {
        max_order,
        ..OracleConfig::default()
    };
    let corr = CorrespondenceOptions {
        bound: max_order,
        ..CorrespondenceOptions::default()
    };
    let mut results = Vec::new();
    for shape in finite_shapes(max_order)
        .into_iter()
        .chain(infinite_shapes())
    {
        let report = classify(&shape);
        let mut problems = Vec::new();
        if !report.is_consistent() {
            problems.push(format!(
                "case label {} disagrees with {} rings",
                report.case, report.t_order
            ));
        }
        let all = enumerate_rings(&shape, true)?;
        for (i, r) in all.iter().enumerate() {
            let v = validate_ring(r);
            if !v.ok {
                problems.push(format!("ring {i} fails validation: {}", v.failures[0]));
            }
            let c = verify_correspondence(r, &corr);
            if !c.passed() {
                problems.push(format!(
                    "ring {i} correspondence: {}",
                    c.to_string().trim_end().replace('\n', "; ")
                ));
            }
        }
        let (oracle, k_oracle) = if shape.is_finite() {
            let ht = compute_h_and_t(&shape, &cfg)?;
            (Some(ht.h_count), Some(ht.k_count))
        } else {
            if let Ok(brute) = brute_enumerate_tables(&shape, DEFAULT_BRUTE_LIMIT) {
                if brute != all {
                    problems.push(format!(
                        "brute table search finds {} rings, enumeration {}",
                        brute.len(),
                        all.len()
                    ));
                }
            }
            (None, None)
        };
        if oracle.is_some_and(|h| h != report.t_order) || k_oracle.is_some_and(|k| k != all.len()) {
            problems.push("classifier and oracle disagree".into());
        }
        results.push(ShapeResult {
            shape,
            classifier: report.t_order,
            oracle,
            k_rings: all.len(),
            k_oracle,
            problems,
        });
    }
    let failed: Vec<&ShapeResult> = results.iter().filter(|r| !r.problems.is_empty()).collect();
    let value = json!({
        "max_order": max_order,
        "shapes": results.len(),
        "ok": failed.is_empty(),
        "first_failure": failed.first().map(|r| json!({
            "group": r.shape.to_string(),
            "classifier_t_order": r.classifier,
            "oracle_h_count": r.oracle,
            "ring_count_with_k": r.k_rings,
            "oracle_k_count": r.k_oracle,
            "problems": r.problems,
        })),
        "results": results.iter().map(|r| json!({
            "group": r.shape.to_string(),
            "t_order": r.classifier,
            "oracle_h_count": r.oracle,
            "k_rings": r.k_rings,
            "oracle_k_count": r.k_oracle,
            "ok": r.problems.is_empty(),
        })).collect::<Vec<_>>(),
    });
    let text = || {
        let mut s = String::new();
        for r in &results {
            let oracle = r.oracle.map_or("-".to_string(), |h| h.to_string());
            let k = r.k_oracle.map_or("-".to_string(), |k| k.to_string());
            let _ = writeln!(
                s,
                "{:<24} |T| {} oracle {:<2} K {} oracle {:<2} {}",
                r.shape.to_string(),
                r.classifier,
                oracle,
                r.k_rings,
                k,
                if r.problems.is_empty() {
                    "ok"
                } else {
                    "MISMATCH"
                }
            );
        }
        match failed.first() {
            None => {
                let _ = writeln!(s, "all {} shapes agree", results.len());
            }
            Some(r) => {
                let _ = writeln!(
                    s,
                    "first mismatch: {} (classifier {}, oracle {}): {}",
                    r.shape,
                    r.classifier,
                    r.oracle.map_or("-".to_string(), |h| h.to_string()),
                    r.problems.join("; ")
                );
            }
        }
        s
    };
    Ok(Output {
        text: render(format, value, text),
        code: if failed.is_empty() { 0 } else { 1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts_by_order() {
        // number of abelian groups of order 1..=16
        let counts: Vec<usize> = (1..=16)
            .map(|n| finite_shapes(n).len() - if n > 1 { finite_shapes(n - 1).len() } else { 0 })
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
    }
}

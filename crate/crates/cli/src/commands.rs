use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use quiver_dt::ff_oracle::{verify_framed_counts, verify_pd_counts, Budget, Oracle};
use quiver_dt::hn::{series_real_root, HnContext};
use quiver_dt::poisson::{phi, verify_main_theorem, verify_poisson};
use quiver_dt::quiver::catalog::{a_alternating, a_linear, d_linear, e_linear};
use quiver_dt::quiver::slope_classes;
use quiver_dt::report::Report;
use quiver_dt::scenarios::{dt_table, dynkin_factorization, is_generic};
use quiver_dt::wallcross::{smooth_model_table, vertex_family};
use quiver_dt::{BigRational, DimVector, Error, Functional, Quiver, Slope, SkewSeries, Stability};

use crate::input::{parse_slope, CliError, CliResult, Input, Layout};
use crate::render;
use crate::{Cli, Command, Orientation};

pub struct Output {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

const SUITES: [&str; 7] = ["hn", "factorization", "integrality", "poisson", "oracle", "dynkin", "kronecker"];

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Hn => hn(cli, &load(cli)?),
        Command::Wallcross => wallcross(cli, &load(cli)?),
        Command::Verify { suites, fixture } => verify(cli, &load(cli)?, suites.as_deref(), fixture.as_deref()),
        Command::Kronecker { m } => kronecker(cli, *m),
        Command::Dynkin { kind, orientation } => dynkin(cli, kind, *orientation),
    }
}

fn load(cli: &Cli) -> CliResult<Input> {
    let path = cli
        .quiver
        .as_ref()
        .ok_or_else(|| CliError::Config("--quiver is required for this command".into()))?;
    Input::load(path)
}

fn slope_filter(cli: &Cli) -> CliResult<Option<Slope>> {
    cli.slope.as_deref().map(parse_slope).transpose()
}

fn context(input: &Input) -> HnContext {
    HnContext::new(input.quiver.clone(), input.theta.clone())
}

fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn quiver_json(input: &Input) -> Value {
    let arrows: Vec<Value> = input
        .desc
        .arrows
        .iter()
        .map(|(s, t)| Value::from(vec![s.clone(), t.clone()]))
        .collect();
    object(vec![
        ("vertices", Value::from(input.desc.vertices.clone())),
        ("arrows", Value::Array(arrows)),
        ("theta", render::theta(&input.layout, &input.theta)),
    ])
}

struct HnRow {
    d: DimVector,
    slope: Slope,
    e: quiver_dt::QRational,
    p: quiver_dt::QRational,
}

fn hn_row(ctx: &HnContext, d: &DimVector) -> CliResult<HnRow> {
    Ok(HnRow {
        d: d.clone(),
        slope: ctx.slope(d)?,
        e: ctx.e_d(d),
        p: ctx.p_d_recursive(d)?,
    })
}

fn hn_row_json(layout: &Layout, row: &HnRow) -> Value {
    object(vec![
        ("d", render::dim(layout, &row.d)),
        ("slope", render::rational(row.slope.value())),
        ("e", render::rational_function(&row.e)),
        ("p", render::rational_function(&row.p)),
    ])
}

fn hn(cli: &Cli, input: &Input) -> CliResult<Output> {
    let ctx = context(input);
    let dims = match &cli.dim {
        Some(csv) => vec![input.layout.parse_dim(csv)?],
        None => DimVector::all_up_to(input.quiver.vertex_count(), cli.order)
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect(),
    };
    let filter = slope_filter(cli)?;
    let mut rows = Vec::new();
    for d in &dims {
        let row = hn_row(&ctx, d)?;
        if filter.as_ref().is_none_or(|s| *s == row.slope) {
            rows.push(row);
        }
    }
    let mut text = String::new();
    for row in &rows {
        let _ = writeln!(text, "d {}  slope {}", input.layout.show(&row.d), row.slope);
        let _ = writeln!(text, "  e = {}", row.e);
        let _ = writeln!(text, "  p = {}", row.p);
    }
    let json = object(vec![
        ("command", Value::from("hn")),
        ("quiver", quiver_json(input)),
        ("order", Value::from(cli.order)),
        ("rows", Value::Array(rows.iter().map(|r| hn_row_json(&input.layout, r)).collect())),
    ]);
    Ok(Output { json, text, ok: true })
}

/// Framings `k e_v` for `1 <= k <= max(order, 1)`, vertices in display order.
fn framings(layout: &Layout, order: u32) -> Vec<DimVector> {
    let mut out = Vec::new();
    for u in layout.unit_vectors() {
        for k in 1..=order.max(1) {
            out.push(u.scale(k));
        }
    }
    out
}

/// One slope block of the wallcross output.
fn wallcross_slope(ctx: &HnContext, layout: &Layout, mu: &Slope, class: &[DimVector], order: u32) -> CliResult<Value> {
    let framings = framings(layout, order);
    let table = smooth_model_table(ctx, mu, &framings, order)?;
    let mut rows = Vec::new();
    for n in &framings {
        for d in class {
            let row = table.get(d, n).expect("class member");
            if row.poincare.is_zero() {
                continue;
            }
            rows.push(object(vec![
                ("framing", render::dim(layout, n)),
                ("d", render::dim(layout, d)),
                ("poincare", render::laurent(&row.poincare)),
                ("euler", render::int(&row.euler)),
            ]));
        }
    }
    Ok(object(vec![
        ("slope", render::rational(mu.value())),
        ("rows", Value::Array(rows)),
    ]))
}

fn wallcross_json(input: &Input, order: u32, filter: Option<&Slope>) -> CliResult<Value> {
    let ctx = context(input);
    let mut slopes = Vec::new();
    for (mu, class) in slope_classes(&input.quiver, &input.theta, order) {
        if filter.is_none_or(|s| *s == mu) {
            slopes.push(wallcross_slope(&ctx, &input.layout, &mu, &class, order)?);
        }
    }
    Ok(object(vec![
        ("command", Value::from("wallcross")),
        ("quiver", quiver_json(input)),
        ("order", Value::from(order)),
        ("slopes", Value::Array(slopes)),
    ]))
}

fn show_function(v: &Value) -> String {
    match render::parse_rational_function(v) {
        Some(r) => r.to_string(),
        None => v.to_string(),
    }
}

fn show_dim(layout: &Layout, v: &Value) -> String {
    match layout.parse_map(v) {
        Some(d) => layout.show(&d),
        None => v.to_string(),
    }
}

fn show_rational(v: &Value) -> String {
    match (v.get("numerator"), v.get("denominator")) {
        (Some(n), Some(d)) if d.as_u64() == Some(1) => n.to_string(),
        (Some(n), Some(d)) => format!("{n}/{d}"),
        _ => v.to_string(),
    }
}

fn wallcross(cli: &Cli, input: &Input) -> CliResult<Output> {
    let json = wallcross_json(input, cli.order, slope_filter(cli)?.as_ref())?;
    let mut text = String::new();
    let slopes = json["slopes"].as_array().expect("array");
    if slopes.is_empty() {
        let _ = writeln!(text, "order {}: every conjugation series is the constant 1", cli.order);
    }
    for block in slopes {
        let _ = writeln!(text, "slope {}", show_rational(&block["slope"]));
        for row in block["rows"].as_array().expect("array") {
            let _ = writeln!(
                text,
                "  n {}  d {}  P = {}  chi = {}",
                show_dim(&input.layout, &row["framing"]),
                show_dim(&input.layout, &row["d"]),
                show_function(&row["poincare"]),
                row["euler"]
            );
        }
    }
    Ok(Output { json, text, ok: true })
}

fn selected_suites(list: Option<&str>, fixture: bool) -> CliResult<Vec<(&'static str, bool)>> {
    let list = match list {
        Some(l) => l,
        None if fixture => return Ok(Vec::new()),
        None => "all",
    };
    let mut out: Vec<(&'static str, bool)> = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            for s in SUITES {
                if !out.iter().any(|(t, _)| *t == s) {
                    out.push((s, false));
                }
            }
            continue;
        }
        let Some(&s) = SUITES.iter().find(|&&s| s == name) else {
            return Err(CliError::Config(format!(
                "unknown suite `{name}`; expected one of {} or all",
                SUITES.join(", ")
            )));
        };
        match out.iter_mut().find(|(t, _)| *t == s) {
            Some(entry) => entry.1 = true,
            None => out.push((s, true)),
        }
    }
    Ok(out)
}

fn skipped(name: &str, why: String) -> Report {
    let mut r = Report::new(name);
    r.note(format!("skipped: {why}"));
    r
}

fn hn_suite(ctx: &HnContext, order: u32) -> CliResult<Report> {
    let mut r = Report::new("hn");
    for d in DimVector::all_up_to(ctx.quiver().vertex_count(), order) {
        if d.is_zero() {
            continue;
        }
        let a = ctx.p_d_recursive(&d)?;
        let b = ctx.p_d_resolved(&d)?;
        r.record(format!("recursive p_d = resolved p_d at {d}"), a == b, format!("{a} vs {b}"));
    }
    Ok(r)
}

fn factorization_suite(ctx: &HnContext, order: u32) -> CliResult<Report> {
    let mut r = Report::new("factorization");
    r.absorb(ctx.verify_hnsa(order));
    r.absorb(verify_main_theorem(ctx, order)?);
    Ok(r)
}

fn integrality_suite(ctx: &HnContext, order: u32) -> CliResult<Report> {
    let mut r = Report::new("integrality");
    for (mu, _) in slope_classes(ctx.quiver(), ctx.theta(), order) {
        match vertex_family(ctx, &mu, order) {
            Ok(family) => r.pass(format!("{} series at slope {mu} certified", family.len())),
            Err(e @ Error::IntegralityFailure { .. }) => r.fail(format!("slope {mu}"), e.to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(r)
}

fn random_member(rng: &mut ChaCha8Rng, ctx: &HnContext, order: u32) -> CliResult<Option<SkewSeries>> {
    let quiver = ctx.quiver_arc();
    let n = quiver.vertex_count();
    let roots: Vec<DimVector> = DimVector::all_up_to(n, order.min(3))
        .into_iter()
        .filter(|d| !d.is_zero() && quiver.tits_form(d) == 1)
        .collect();
    let classes = slope_classes(quiver, ctx.theta(), order);
    if roots.is_empty() || classes.is_empty() {
        return Ok(None);
    }
    if rng.gen_bool(0.5) {
        let root = &roots[rng.gen_range(0..roots.len())];
        let eta = Functional::new((0..n).map(|_| rng.gen_range(-2..=2)).collect());
        Ok(Some(series_real_root(quiver, root, order)?.twist(&eta)))
    } else {
        let (mu, _) = &classes[rng.gen_range(0..classes.len())];
        Ok(Some(ctx.series_p_mu(mu, order)))
    }
}

fn poisson_suite(ctx: &HnContext, order: u32, seed: u64) -> CliResult<Report> {
    let mut r = Report::new("poisson");
    r.absorb(verify_poisson(ctx, order)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..5 {
        let (Some(a), Some(b)) = (random_member(&mut rng, ctx, order)?, random_member(&mut rng, ctx, order)?) else {
            r.note("no random members at this order");
            break;
        };
        let lhs = phi(&a.mul(&b)?)?;
        let rhs = phi(&a)?.compose(&phi(&b)?)?;
        r.record(format!("Phi(P1 P2) = Phi(P1) o Phi(P2), pair {k} (seed {seed})"), lhs == rhs, "multipliers differ");
    }
    Ok(r)
}

fn oracle_suite(cli: &Cli, input: &Input, ctx: &HnContext) -> CliResult<Report> {
    let explicit = cli.dim.as_deref().map(|csv| input.layout.parse_dim(csv)).transpose()?;
    let n = input.quiver.vertex_count();
    let dims: Vec<DimVector> = match &explicit {
        Some(d) => vec![d.clone()],
        None => DimVector::new(vec![2; n])
            .sub_vectors()
            .into_iter()
            .filter(|d| !d.is_zero() && d.dim() <= cli.order)
            .collect(),
    };
    let primes = cli.q.map_or(vec![2, 3], |q| vec![q]);
    let budget = Budget {
        reps: cli.budget_reps,
        subspaces: cli.budget_subspaces,
    };
    let mut r = Report::new("oracle");
    let mut over = 0;
    for p in primes {
        let o = Oracle::new(input.quiver.clone(), p, budget)?;
        let mut attempt = |result: quiver_dt::Result<Report>, r: &mut Report| -> CliResult<()> {
            match result {
                Ok(rep) => r.absorb(rep),
                Err(Error::BudgetExceeded { .. }) if explicit.is_none() => over += 1,
                Err(e) => return Err(e.into()),
            }
            Ok(())
        };
        for d in &dims {
            attempt(verify_pd_counts(ctx, &o, d), &mut r)?;
        }
        for d in dims.iter().filter(|d| d.dim() <= 2) {
            let mu = ctx.slope(d)?;
            for framing in input.layout.unit_vectors() {
                let result = verify_framed_counts(ctx, &o, &mu, d, &framing).map(|mut rep| {
                    rep.notes.clear();
                    rep
                });
                attempt(result, &mut r)?;
            }
        }
    }
    r.note("framed counts are compared through the twisted per-degree identity");
    if over > 0 {
        if r.checks.is_empty() {
            return Err(CliError::Budget("every oracle case exceeds the enumeration budget".into()));
        }
        r.note(format!("{over} cases over budget were skipped"));
    }
    Ok(r)
}

fn dynkin_suite(input: &Input, order: u32, explicit: bool) -> CliResult<Report> {
    if !input.quiver.is_dynkin() {
        if explicit {
            return Err(CliError::Config("the dynkin suite needs a quiver of Dynkin type".into()));
        }
        return Ok(skipped("dynkin", "not of Dynkin type".into()));
    }
    match dynkin_factorization(&input.quiver, &input.theta, order) {
        Ok(f) => Ok(f.report),
        Err(e @ Error::NonGenericStability { .. }) => {
            let mut r = Report::new("dynkin");
            r.fail("every slope factor is a single positive root", e.to_string());
            Ok(r)
        }
        Err(e) => Err(e.into()),
    }
}

/// `m` when the quiver is two vertices with all `m >= 1` arrows pointing the same way.
fn kronecker_arrows(quiver: &Quiver) -> Option<usize> {
    let arrows = quiver.arrows();
    let first = *arrows.first()?;
    (quiver.vertex_count() == 2 && arrows.iter().all(|&a| a == first)).then_some(arrows.len())
}

fn kronecker_suite(input: &Input, order: u32, explicit: bool) -> CliResult<Report> {
    let Some(m) = kronecker_arrows(&input.quiver) else {
        if explicit {
            return Err(CliError::Config("the kronecker suite needs a Kronecker quiver".into()));
        }
        return Ok(skipped("kronecker", "not a Kronecker quiver".into()));
    };
    match dt_table(m, order) {
        Ok(t) => {
            let mut r = t.report;
            r.note("computed with Theta = 1 on the source, 0 on the sink");
            Ok(r)
        }
        Err(e @ Error::NonIntegerExponent { .. }) => {
            let mut r = Report::new("kronecker");
            r.fail("exponents c(mu,k) are integers", e.to_string());
            Ok(r)
        }
        Err(e) => Err(e.into()),
    }
}

fn compare(r: &mut Report, label: String, fixture: &Value, computed: &Value, show: impl Fn(&Value) -> String) {
    r.record(
        label,
        fixture == computed,
        format!("fixture {}, computed {}", show(fixture), show(computed)),
    );
}

fn fixture_suite(input: &Input, path: &Path) -> CliResult<Report> {
    let shown = path.display();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {shown}: {e}")))?;
    let fixture: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{shown}: {e}")))?;
    if fixture.get("quiver") != Some(&quiver_json(input)) {
        return Err(CliError::Config(format!("{shown} was written for a different quiver or stability")));
    }
    let bad = |what: &str| CliError::Config(format!("{shown}: malformed {what}"));
    let layout = &input.layout;
    let mut r = Report::new(format!("fixture {shown}"));
    match fixture.get("command").and_then(Value::as_str) {
        Some("hn") => {
            let ctx = context(input);
            for row in fixture["rows"].as_array().ok_or_else(|| bad("rows"))? {
                let d = layout.parse_map(&row["d"]).ok_or_else(|| bad("dimension vector"))?;
                let computed = hn_row_json(layout, &hn_row(&ctx, &d)?);
                for key in ["e", "p"] {
                    compare(&mut r, format!("{key} at {}", layout.show(&d)), &row[key], &computed[key], show_function);
                }
            }
        }
        Some("wallcross") => {
            let order = fixture["order"].as_u64().and_then(|o| u32::try_from(o).ok()).ok_or_else(|| bad("order"))?;
            let ctx = context(input);
            let classes: BTreeMap<Slope, Vec<DimVector>> =
                slope_classes(&input.quiver, &input.theta, order).into_iter().collect();
            for block in fixture["slopes"].as_array().ok_or_else(|| bad("slopes"))? {
                let mu = parse_rational(&block["slope"]).map(Slope).ok_or_else(|| bad("slope"))?;
                let Some(class) = classes.get(&mu) else {
                    r.fail(format!("slope {mu}"), "no dimension vector of this slope");
                    continue;
                };
                let computed = wallcross_slope(&ctx, layout, &mu, class, order)?;
                let key = |row: &Value| (row["framing"].to_string(), row["d"].to_string());
                let want: BTreeMap<_, &Value> =
                    computed["rows"].as_array().expect("array").iter().map(|row| (key(row), row)).collect();
                let got: BTreeMap<_, &Value> =
                    block["rows"].as_array().ok_or_else(|| bad("rows"))?.iter().map(|row| (key(row), row)).collect();
                for (k, row) in &got {
                    let place = format!(
                        "slope {mu}, n {}, d {}",
                        show_dim(layout, &row["framing"]),
                        show_dim(layout, &row["d"])
                    );
                    let Some(c) = want.get(k) else {
                        r.fail(place, "the moduli space is empty, the fixture has a row");
                        continue;
                    };
                    compare(&mut r, format!("{place}: poincare"), &row["poincare"], &c["poincare"], show_function);
                    compare(&mut r, format!("{place}: euler"), &row["euler"], &c["euler"], Value::to_string);
                }
                for (k, row) in &want {
                    if !got.contains_key(k) {
                        r.fail(
                            format!("slope {mu}, n {}, d {}", show_dim(layout, &row["framing"]), show_dim(layout, &row["d"])),
                            "row missing from the fixture",
                        );
                    }
                }
            }
        }
        _ => return Err(bad("command (expected hn or wallcross)")),
    }
    Ok(r)
}

fn parse_rational(v: &Value) -> Option<BigRational> {
    let n: BigInt = v.get("numerator")?.to_string().parse().ok()?;
    let d: BigInt = v.get("denominator")?.to_string().parse().ok()?;
    (d != BigInt::from(0)).then(|| BigRational::new(n, d))
}

fn verify(cli: &Cli, input: &Input, suites: Option<&str>, fixture: Option<&Path>) -> CliResult<Output> {
    let ctx = context(input);
    let order = cli.order;
    let mut reports = Vec::new();
    for (name, explicit) in selected_suites(suites, fixture.is_some())? {
        let report = match name {
            "hn" => hn_suite(&ctx, order)?,
            "factorization" => factorization_suite(&ctx, order)?,
            "integrality" => integrality_suite(&ctx, order)?,
            "poisson" => poisson_suite(&ctx, order, cli.seed)?,
            "oracle" => oracle_suite(cli, input, &ctx)?,
            "dynkin" => dynkin_suite(input, order, explicit)?,
            "kronecker" => kronecker_suite(input, order, explicit)?,
            _ => unreachable!("suite names are validated"),
        };
        reports.push(report);
    }
    if let Some(path) = fixture {
        reports.push(fixture_suite(input, path)?);
    }
    let ok = reports.iter().all(Report::is_success);
    let failures: usize = reports.iter().map(Report::failure_count).sum();
    let mut text = String::new();
    for r in &reports {
        let _ = write!(text, "{r}");
    }
    let _ = writeln!(
        text,
        "{}",
        if ok { "verify: all checks passed".to_string() } else { format!("verify: {failures} checks failed") }
    );
    let json = object(vec![
        ("command", Value::from("verify")),
        ("quiver", quiver_json(input)),
        ("order", Value::from(order)),
        ("suites", Value::Array(reports.iter().map(render::report).collect())),
        ("passed", Value::from(ok)),
    ]);
    Ok(Output { json, text, ok })
}

fn kronecker(cli: &Cli, m: usize) -> CliResult<Output> {
    let table = dt_table(m, cli.order)?;
    let filter = slope_filter(cli)?;
    let quiver = Arc::new(quiver_dt::quiver::catalog::kronecker(m));
    let layout = Layout::sorted(&quiver);
    let ab = |a: u32, b: u32| render::dim(&layout, &DimVector::new(vec![a, b]));
    let mut rays = Vec::new();
    let mut nonzero = Vec::new();
    let mut text = String::new();
    let _ = writeln!(text, "K{m}, Theta = j*, total degree <= {}", cli.order);
    let _ = writeln!(text, "nonzero d(a,b), a on i and b on j:");
    let mut rows: Vec<_> = table.rows.iter().collect();
    rows.sort_by(|x, y| y.1.slope.cmp(&x.1.slope));
    for (&(a, b), row) in rows {
        if filter.as_ref().is_some_and(|s| *s != row.slope) {
            continue;
        }
        let c: Vec<Value> = row
            .c
            .iter()
            .map(|(&k, v)| object(vec![("k", Value::from(k)), ("value", render::int(v))]))
            .collect();
        rays.push(object(vec![
            ("ray", ab(a, b)),
            ("slope", render::rational(row.slope.value())),
            ("c", Value::Array(c)),
        ]));
        for (&(x, y), v) in &row.d {
            if v != &BigRational::from_integer(0.into()) {
                let _ = writeln!(text, "  d({x},{y}) = {v}");
                nonzero.push(object(vec![("d", ab(x, y)), ("value", render::rational(v))]));
            }
        }
    }
    let _ = write!(text, "{}", table.report);
    let ok = table.report.is_success();
    let json = object(vec![
        ("command", Value::from("kronecker")),
        ("m", Value::from(m)),
        ("order", Value::from(cli.order)),
        ("rays", Value::Array(rays)),
        ("nonzero", Value::Array(nonzero)),
        ("report", render::report(&table.report)),
    ]);
    Ok(Output { json, text, ok })
}

fn dynkin_quiver(kind: &str, orientation: Orientation) -> CliResult<Quiver> {
    let bad = || CliError::Config(format!("unknown Dynkin type `{kind}`; expected A<n>, D<n> (n >= 4) or E6, E7, E8"));
    let mut chars = kind.trim().chars();
    let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    if letter != 'A' && orientation == Orientation::Alternating {
        return Err(CliError::Config(format!("{kind} is only available with the linear orientation")));
    }
    match (letter, orientation) {
        ('A', Orientation::Linear) if n >= 1 => Ok(a_linear(n)),
        ('A', Orientation::Alternating) if n >= 1 => Ok(a_alternating(n)),
        ('D', _) if n >= 4 => Ok(d_linear(n)),
        ('E', _) if (6..=8).contains(&n) => Ok(e_linear(n)),
        _ => Err(bad()),
    }
}

const DRAWS: usize = 256;

fn dynkin(cli: &Cli, kind: &str, orientation: Orientation) -> CliResult<Output> {
    let quiver = Arc::new(dynkin_quiver(kind, orientation)?);
    let layout = Layout::sorted(&quiver);
    let n = quiver.vertex_count();
    let expected = quiver.positive_roots()?.iter().filter(|r| r.dim() <= cli.order).count();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut found = None;
    for _ in 0..DRAWS {
        let theta = Stability::new((0..n).map(|_| rng.gen_range(0..=4 * n as i64)).collect());
        if !is_generic(&quiver, &theta)? {
            continue;
        }
        match dynkin_factorization(&quiver, &theta, cli.order) {
            Ok(f) if f.factors.len() == expected => {
                found = Some((theta, f));
                break;
            }
            Ok(_) | Err(Error::NonGenericStability { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    let (theta, mut f) = found.ok_or_else(|| {
        CliError::Failed(format!(
            "no stability from seed {} separates all {expected} roots after {DRAWS} draws",
            cli.seed
        ))
    })?;
    let orientation_name = match orientation {
        Orientation::Linear => "linear",
        Orientation::Alternating => "alternating",
    };
    let mut text = String::new();
    let weights: Vec<String> = layout.weights(&theta).map(|(v, w)| format!("{v}:{w}")).collect();
    let _ = writeln!(
        text,
        "{kind} ({orientation_name}), theta [{}], order {}",
        weights.join(" "),
        cli.order
    );
    let _ = writeln!(text, "{} factors, composed left to right:", f.factors.len());
    let mut factors = Vec::new();
    for (mu, root) in &f.factors {
        let _ = writeln!(text, "  T{}  slope {mu}", layout.show(root));
        factors.push(object(vec![
            ("slope", render::rational(mu.value())),
            ("root", render::dim(&layout, root)),
        ]));
    }
    f.report.notes.retain(|n| !n.starts_with("order: "));
    let _ = write!(text, "{}", f.report);
    let ok = f.report.is_success();
    let mut head = Map::new();
    head.insert("command".into(), Value::from("dynkin"));
    head.insert("type".into(), Value::from(kind.to_string()));
    head.insert("orientation".into(), Value::from(orientation_name));
    head.insert("order".into(), Value::from(cli.order));
    head.insert("seed".into(), Value::from(cli.seed));
    head.insert("theta".into(), render::theta(&layout, &theta));
    head.insert("factors".into(), Value::Array(factors));
    head.insert("report".into(), render::report(&f.report));
    Ok(Output {
        json: Value::Object(head),
        text,
        ok,
    })
}

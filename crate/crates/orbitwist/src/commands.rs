use bundles::{chern_character, flat_sections, irreducible_projective_reps, TwistedBundle};
use deligne::{group_h2, u1_classes, DeligneCocycle};
use groupoid::{FiniteGroupoid, Group};
use serde::Deserialize;
use transgression::{dimensional_reduction_check, loop_holonomy, partition_function};

use crate::checks;
use crate::manifest::{load, Model, Task};
use crate::table::{self, Table};
use crate::{CliError, Outcome, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    H2,
    Report,
    Selftest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub manifest: Option<String>,
}

pub fn run(cmd: Command, opts: &Options) -> Result<Outcome, CliError> {
    let need = || opts.manifest.clone().ok_or_else(|| CliError::Parse("missing manifest".into()));
    match cmd {
        Command::Validate => {
            let model = Model::build(&load(&need()?)?, opts.seed)?;
            let mut t = Table::new("validate");
            let ok = validate(&model, &mut t);
            Ok(Outcome { table: t, code: if ok { EXIT_OK } else { EXIT_INVALID } })
        }
        Command::H2 => h2(&need()?),
        Command::Report => {
            let model = Model::build(&load(&need()?)?, opts.seed)?;
            report(&model, opts.seed)
        }
        Command::Selftest => selftest(opts),
    }
}

fn names(gd: &FiniteGroupoid, fs: &[usize]) -> String {
    fs.iter().map(|&f| gd.morphism_name(f).to_string()).collect::<Vec<_>>().join(",")
}

/// Rows for every failing condition; true when everything is valid.
fn validate(model: &Model, t: &mut Table) -> bool {
    let gd = &model.groupoid;
    t.push("groupoid", "objects", gd.n_objects().to_string());
    t.push("groupoid", "morphisms", gd.n_morphisms().to_string());
    let mut ok = true;
    match &model.cocycle {
        Ok(c) => {
            let r = c.validate();
            t.push("cocycle", "kind", if c.is_smooth() { "smooth" } else { "discrete" });
            for (g, f) in &r.normalization {
                t.push("cocycle", "normalization", format!("({})", names(gd, &[*g, *f])));
            }
            for (a, b, c) in &r.triples {
                t.push("cocycle", "triple", format!("({})", names(gd, &[*a, *b, *c])));
            }
            for (g, f) in &r.pairs {
                t.push("cocycle", "connection", format!("({})", names(gd, &[*g, *f])));
            }
            for f in &r.morphisms {
                t.push("cocycle", "curving", gd.morphism_name(*f));
            }
            ok &= r.is_valid();
            t.push("cocycle", "valid", r.is_valid().to_string());
        }
        Err(e) => {
            ok = false;
            t.push("cocycle", "error", e.clone());
            t.push("cocycle", "valid", "false");
        }
    }
    for (name, b) in &model.bundles {
        match b {
            Ok(v) => {
                let r = v.validate();
                if !r.is_valid() {
                    ok = false;
                    let mut bad = Vec::new();
                    if !r.cocycle_valid {
                        bad.push("twist".to_string());
                    }
                    for (what, fs) in [("shape", &r.shapes), ("parity", &r.parity), ("identity", &r.identities), ("singular", &r.singular), ("connection", &r.connections)] {
                        if !fs.is_empty() {
                            bad.push(format!("{what} {}", names(gd, fs)));
                        }
                    }
                    for (g, f) in &r.squares {
                        bad.push(format!("square ({})", names(gd, &[*g, *f])));
                    }
                    t.push("bundle", name.clone(), format!("invalid: {}", bad.join("; ")));
                } else {
                    t.push("bundle", name.clone(), "valid");
                }
            }
            Err(e) => {
                ok = false;
                t.push("bundle", name.clone(), format!("invalid: {e}"));
            }
        }
    }
    for (name, k) in &model.loops {
        match k {
            Ok(k) => t.push("loop", name.clone(), format!("valid, holonomy {}", gd.morphism_name(k.holonomy))),
            Err(e) => {
                ok = false;
                t.push("loop", name.clone(), format!("invalid: {e}"));
            }
        }
    }
    ok
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct H2Spec {
    group: String,
    n: u64,
}

/// Accepts a JSON file `{"group": .., "n": ..}` or the literal text `<group> <n>`.
fn h2(arg: &str) -> Result<Outcome, CliError> {
    let spec = if std::path::Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.to_string(), source })?;
        serde_json::from_str::<H2Spec>(&text)?
    } else {
        let (g, n) = arg.trim().rsplit_once(char::is_whitespace).ok_or_else(|| CliError::Parse(format!("expected `<group> <n>`, got `{arg}`")))?;
        let n = n.parse().map_err(|_| CliError::Parse(format!("bad modulus `{n}`")))?;
        H2Spec { group: g.trim().to_string(), n }
    };
    let g = Group::parse(&spec.group).map_err(|e| CliError::Parse(e.to_string()))?;
    let h = group_h2(&g, spec.n).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut t = Table::new("h2");
    t.push("h2", "group", spec.group.clone());
    t.push("h2", "order", g.order().to_string());
    t.push("h2", format!("Z/{}", spec.n), format!("[{}]", table::list(&h.divisors)));
    t.push("h2", "U(1)", format!("[{}]", table::list(&u1_classes(&g).divisors)));
    Ok(Outcome { table: t, code: EXIT_OK })
}

fn compute<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Compute(e.to_string()))
}

fn valid_bundles(model: &Model) -> Vec<(&str, &TwistedBundle)> {
    model.bundles.iter().filter_map(|(n, b)| b.as_ref().ok().map(|b| (n.as_str(), b))).collect()
}

fn report(model: &Model, seed: u64) -> Result<Outcome, CliError> {
    let mut t = Table::new("report");
    let mut scratch = Table::new("validate");
    if !validate(model, &mut scratch) {
        scratch.command = "report".into();
        return Ok(Outcome { table: scratch, code: EXIT_INVALID });
    }
    let c: &DeligneCocycle = model.cocycle.as_ref().expect("validated");
    let gd = &model.groupoid;
    let line = compute(c.transgress())?;
    let inertia = &line.inertia.groupoid;
    let mut code = EXIT_OK;
    for task in &model.tasks {
        match task {
            Task::Elements => {
                for f in 0..gd.n_morphisms() {
                    t.push("elements", gd.morphism_name(f), format!("{} -> {}", gd.object_name(gd.src(f)), gd.object_name(gd.tgt(f))));
                }
            }
            Task::Sectors => {
                let comps = inertia.connected_components();
                for o in 0..inertia.n_objects() {
                    let k = comps.iter().position(|c| c.contains(&o)).expect("every object lies in a component");
                    t.push("sectors", inertia.object_name(o), format!("component {}", k + 1));
                }
            }
            Task::Holonomy => {
                for f in 0..inertia.n_morphisms() {
                    t.push("holonomy", inertia.morphism_name(f), line.holonomy[f].to_string());
                }
            }
            Task::Flat => {
                t.push("flat", "dimension", flat_sections(&line).dimension().to_string());
                let regular: Vec<&str> = line.regular_sectors().into_iter().map(|o| inertia.object_name(o)).collect();
                t.push("flat", "regular sectors", regular.join(","));
            }
            Task::Irreps => {
                if gd.n_objects() != 1 {
                    t.push("irreps", "dims", "n/a: groupoid has several objects");
                    continue;
                }
                let mut dims: Vec<usize> = compute(irreducible_projective_reps(c, seed))?.iter().map(|r| r.dim).collect();
                dims.sort_unstable();
                t.push("irreps", "dims", format!("[{}]", table::list(&dims)));
            }
            Task::Ch => {
                for (name, v) in valid_bundles(model) {
                    let ch = compute(chern_character(v))?;
                    t.push("ch", name, table::vector(&ch.values));
                    if let Some(forms) = &ch.forms {
                        for (o, f) in forms.values.iter().enumerate() {
                            t.push("ch form", format!("{name}@{}", inertia.object_name(o)), f.to_string());
                        }
                    }
                }
            }
            Task::Loops => {
                for (name, k) in &model.loops {
                    let k = k.as_ref().expect("validated");
                    t.push("loop holonomy", name.clone(), gd.morphism_name(k.holonomy));
                    t.push("loop value", name.clone(), compute(loop_holonomy(k, c))?.to_string());
                }
            }
            Task::Partition => {
                for (name, v) in valid_bundles(model) {
                    for (lname, k) in &model.loops {
                        let z = compute(partition_function(v, k.as_ref().expect("validated")))?;
                        t.push("partition", format!("{name}@{lname}"), table::complex(z.value));
                    }
                }
            }
            Task::Reduction => {
                for (name, v) in valid_bundles(model) {
                    let r = compute(dimensional_reduction_check(v))?;
                    if r.is_ok() {
                        t.push("reduction", name, "PASS");
                    } else {
                        code = EXIT_MISMATCH;
                        let bad: Vec<&str> = r.mismatches.iter().map(|&o| inertia.object_name(o)).collect();
                        t.push("reduction", name, format!("FAIL {}", bad.join(",")));
                    }
                }
            }
        }
    }
    Ok(Outcome { table: t, code })
}

fn selftest(opts: &Options) -> Result<Outcome, CliError> {
    let mut t = Table::new("selftest");
    let mut code = EXIT_OK;
    for r in checks::run_all(opts.seed) {
        let verdict = match (r.passed, r.known_infeasible) {
            (true, _) => "PASS".to_string(),
            (false, Some(why)) => format!("FAIL (known: {why})"),
            (false, None) => {
                code = EXIT_MISMATCH;
                format!("FAIL {}", r.detail)
            }
        };
        t.push("selftest", format!("{} {}", r.id, r.name), verdict);
    }
    if let Some(path) = &opts.manifest {
        let model = Model::build(&load(path)?, opts.seed)?;
        let out = report(&model, opts.seed)?;
        t.rows.extend(out.table.rows);
        if out.code != EXIT_OK {
            code = out.code;
        }
    }
    Ok(Outcome { table: t, code })
}

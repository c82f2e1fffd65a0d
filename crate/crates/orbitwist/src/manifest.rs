use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use bundles::{irreducible_projective_reps, CMatrix, Monomial, TwistedBundle};
use deligne::{group_h2, u1_classes, DeligneCocycle, ExpLift, PhaseTable};
use forms::{coeff, parse_form, Chart, FormMatrix, GradedForm, Phase};
use groupoid::{FiniteGroupoid, Group};
use num_complex::Complex64;
use serde::Deserialize;
use superline::{Connection, SuperFunction, SuperInterval, SuperPoint};
use transgression::{Segment, Skeleton, SuperLoop};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub groupoid: GroupoidSpec,
    #[serde(default)]
    pub cocycle: CocycleSpec,
    #[serde(default)]
    pub bundles: Vec<BundleSpec>,
    #[serde(default)]
    pub loops: Vec<LoopSpec>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupoidSpec {
    /// Group name such as `Z/4`, `(Z/2)^2`, `S3`, `Z/2 x Z/3`.
    Group(String),
    /// Multiplication table with the identity as element 0.
    Table(Vec<Vec<usize>>),
    Pair(usize),
    Action(ActionSpec),
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub group: String,
    pub points: Vec<String>,
    /// Image of every point under each non-identity element, keyed by element name.
    pub images: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    /// `[g, f, g.f]` for every composable pair.
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    #[serde(default)]
    pub entries: Vec<EntrySpec>,
    pub class: Option<ClassSpec>,
    /// Even coordinates; present for smooth twists.
    pub chart: Option<Vec<String>>,
    #[serde(default)]
    pub a: BTreeMap<String, String>,
    #[serde(default)]
    pub b: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub g: String,
    pub f: String,
    #[serde(default = "zero_string")]
    pub q: String,
    pub p: Option<String>,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSpec {
    U1(Vec<i64>),
    Zn { n: u64, coeffs: Vec<i64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub name: String,
    /// Expands to every irreducible twisted representation, named `<name>1`, `<name>2`, ..
    #[serde(default)]
    pub irreps: bool,
    /// Super dimension per object; `*` applies to objects not listed.
    #[serde(default)]
    pub dims: BTreeMap<String, (usize, usize)>,
    /// Square matrices of entries by morphism; identities default to the unit matrix.
    #[serde(default)]
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub superconnection: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub name: String,
    /// Shorthand for the length-1 loop closed up by this automorphism.
    pub constant: Option<String>,
    #[serde(default)]
    pub arcs: Vec<ArcSpec>,
    #[serde(default)]
    pub jumps: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub object: String,
    pub from: String,
    pub to: String,
    #[serde(default = "zero_string")]
    pub a_t: String,
    #[serde(default = "zero_string")]
    pub a_theta: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Elements,
    Sectors,
    Holonomy,
    Flat,
    Irreps,
    Ch,
    Loops,
    Partition,
    Reduction,
}

pub fn load(path: &str) -> Result<Manifest, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Everything a command needs, resolved against the groupoid. Module-level failures are kept
/// next to the item they belong to so `validate` can list them.
#[derive(Debug, Clone)]
pub struct Model {
    pub groupoid: FiniteGroupoid,
    /// Group and stride for groupoids whose morphism `f` lies over element `f % order`.
    pub group: Option<Group>,
    pub cocycle: Result<DeligneCocycle, String>,
    pub bundles: Vec<(String, Result<TwistedBundle, String>)>,
    pub loops: Vec<(String, Result<SuperLoop, String>)>,
    pub tasks: Vec<Task>,
}

impl Model {
    pub fn build(m: &Manifest, seed: u64) -> Result<Self, CliError> {
        let (groupoid, group) = build_groupoid(&m.groupoid)?;
        let cocycle = build_cocycle(&m.cocycle, &groupoid, group.as_ref())?;
        let mut bundles = Vec::new();
        for spec in &m.bundles {
            bundles.extend(build_bundles(spec, &groupoid, &cocycle, seed)?);
        }
        let loop_base = Chart::new::<&str>(&[], &[]).expect("empty chart");
        let loops = m.loops.iter().map(|l| Ok((l.name.clone(), build_loop(l, &groupoid, &loop_base)?))).collect::<Result<_, CliError>>()?;
        Ok(Model { groupoid, group, cocycle, bundles, loops, tasks: m.tasks.clone() })
    }
}

fn object(gd: &FiniteGroupoid, name: &str) -> Result<usize, CliError> {
    gd.object_index(name).ok_or_else(|| parse_err(format!("unknown object `{name}`")))
}

fn morphism(gd: &FiniteGroupoid, name: &str) -> Result<usize, CliError> {
    gd.morphism_index(name).ok_or_else(|| parse_err(format!("unknown morphism `{name}`")))
}

fn build_groupoid(spec: &GroupoidSpec) -> Result<(FiniteGroupoid, Option<Group>), CliError> {
    let group_err = |e: groupoid::GroupoidError| parse_err(e.to_string());
    match spec {
        GroupoidSpec::Group(s) => {
            let g = Group::parse(s).map_err(group_err)?;
            Ok((FiniteGroupoid::from_group(&g), Some(g)))
        }
        GroupoidSpec::Table(t) => {
            let g = Group::from_table(t.clone(), None).map_err(group_err)?;
            Ok((FiniteGroupoid::from_group(&g), Some(g)))
        }
        GroupoidSpec::Pair(n) => Ok((FiniteGroupoid::pair_groupoid(*n).map_err(group_err)?, None)),
        GroupoidSpec::Action(a) => {
            let g = Group::parse(&a.group).map_err(group_err)?;
            let point = |p: &str| a.points.iter().position(|q| q == p).ok_or_else(|| parse_err(format!("unknown point `{p}`")));
            let mut table = vec![(0..a.points.len()).collect::<Vec<_>>(); g.order()];
            for (name, images) in &a.images {
                let e = g.names().iter().position(|n| n == name).ok_or_else(|| parse_err(format!("unknown element `{name}`")))?;
                if images.len() != a.points.len() {
                    return Err(parse_err(format!("element `{name}` needs {} images", a.points.len())));
                }
                table[e] = images.iter().map(|p| point(p)).collect::<Result<_, _>>()?;
            }
            for e in g.elements().filter(|&e| e != g.identity()) {
                if !a.images.contains_key(g.name(e)) {
                    return Err(parse_err(format!("missing images for element `{}`", g.name(e))));
                }
            }
            let gd = FiniteGroupoid::action_groupoid(&g, a.points.clone(), &table).map_err(group_err)?;
            Ok((gd, Some(g)))
        }
        GroupoidSpec::Explicit(x) => {
            let obj = |n: &str| x.objects.iter().position(|o| o == n).ok_or_else(|| parse_err(format!("unknown object `{n}`")));
            let mor = |n: &str| x.morphisms.iter().position(|m| m.name == n).ok_or_else(|| parse_err(format!("unknown morphism `{n}`")));
            let morphisms = x.morphisms.iter().map(|m| Ok((m.name.clone(), obj(&m.src)?, obj(&m.tgt)?))).collect::<Result<Vec<_>, CliError>>()?;
            let n = morphisms.len();
            let mut compose = vec![vec![None; n]; n];
            for [g, f, gf] in &x.compose {
                compose[mor(g)?][mor(f)?] = Some(mor(gf)?);
            }
            let gd = FiniteGroupoid::new(x.objects.clone(), morphisms, &compose).map_err(group_err)?;
            Ok((gd, None))
        }
    }
}

fn phase(s: &str) -> Result<Phase, CliError> {
    Phase::from_str(s).map_err(|e| parse_err(e.to_string()))
}

fn class_table(spec: &ClassSpec, group: &Group) -> Result<PhaseTable, CliError> {
    let t = match spec {
        ClassSpec::U1(c) => u1_classes(group).cocycle(c),
        ClassSpec::Zn { n, coeffs } => group_h2(group, *n).and_then(|h| h.cocycle(coeffs)),
    };
    t.map_err(|e| parse_err(format!("class: {e}")))
}

fn build_cocycle(spec: &CocycleSpec, gd: &FiniteGroupoid, group: Option<&Group>) -> Result<Result<DeligneCocycle, String>, CliError> {
    let n = gd.n_morphisms();
    let mut q: BTreeMap<(usize, usize), Phase> = BTreeMap::new();
    if let Some(class) = &spec.class {
        let g = group.ok_or_else(|| parse_err("classes need a groupoid built from a group"))?;
        let table = class_table(class, g)?;
        let k = g.order();
        for (a, b) in gd.composable_pairs() {
            let v = table.get(a % k).map_or(Phase::zero(), |row| row[b % k].clone());
            q.insert((a, b), v);
        }
    }
    let chart = match &spec.chart {
        Some(names) => Some(Chart::new::<&str>(&names.iter().map(String::as_str).collect::<Vec<_>>(), &[]).map_err(|e| parse_err(e.to_string()))?),
        None => None,
    };
    let mut p: BTreeMap<(usize, usize), GradedForm> = BTreeMap::new();
    for e in &spec.entries {
        let (g, f) = (morphism(gd, &e.g)?, morphism(gd, &e.f)?);
        if !gd.composable(g, f) {
            return Err(parse_err(format!("`{}` and `{}` are not composable", e.g, e.f)));
        }
        let old = q.remove(&(g, f)).unwrap_or_default();
        q.insert((g, f), &old + &phase(&e.q)?);
        if let Some(text) = &e.p {
            let chart = chart.as_ref().ok_or_else(|| parse_err("polynomial exponents need a chart"))?;
            p.insert((g, f), form(chart, text)?);
        }
    }
    let Some(chart) = chart else {
        if !spec.a.is_empty() || !spec.b.is_empty() {
            return Err(parse_err("connection and curving need a chart"));
        }
        return Ok(Ok(DeligneCocycle::discrete(gd.clone(), |g, f| q.get(&(g, f)).cloned().unwrap_or_default())));
    };
    let h = gd
        .composable_pairs()
        .map(|(g, f)| ExpLift { q: q.get(&(g, f)).cloned().unwrap_or_default(), p: p.get(&(g, f)).cloned().unwrap_or_else(|| GradedForm::zero(&chart)) })
        .collect();
    let mut a = vec![GradedForm::zero(&chart); n];
    for (name, text) in &spec.a {
        a[morphism(gd, name)?] = form(&chart, text)?;
    }
    let mut b = vec![GradedForm::zero(&chart); gd.n_objects()];
    for (name, text) in &spec.b {
        b[object(gd, name)?] = form(&chart, text)?;
    }
    Ok(DeligneCocycle::smooth(gd.clone(), chart, h, a, b).map_err(|e| e.to_string()))
}

fn form(chart: &Arc<Chart>, text: &str) -> Result<GradedForm, CliError> {
    parse_form(chart, text).map_err(|e| parse_err(format!("`{text}`: {e}")))
}

/// A matrix entry: zero, an exact root of unity `e(p/q)`, or a Gaussian rational.
#[derive(Debug, Clone, PartialEq)]
enum Entry {
    Zero,
    Root(Phase),
    Number(Complex64),
}

fn entry(s: &str) -> Result<Entry, CliError> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
        return Ok(Entry::Root(phase(inner)?));
    }
    let c = form(&deligne::empty_chart(), t)?;
    if c.is_zero() {
        return Ok(Entry::Zero);
    }
    let v = c.constant_term();
    let i = coeff::imag_unit();
    let units = [(coeff::int(1), "0"), (i.clone(), "1/4"), (coeff::int(-1), "1/2"), (-i, "3/4")];
    if let Some((_, q)) = units.iter().find(|(u, _)| *u == v) {
        return Ok(Entry::Root(phase(q)?));
    }
    let z = coeff::to_f64(&v);
    Ok(Entry::Number(z))
}

fn to_monomial(m: &[Vec<Entry>]) -> Option<Monomial> {
    let n = m.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut hit = None;
        for (i, row) in m.iter().enumerate() {
            match &row[j] {
                Entry::Zero => {}
                Entry::Root(q) if hit.is_none() => hit = Some((i, q.clone())),
                _ => return None,
            }
        }
        columns.push(hit?);
    }
    Some(Monomial { columns })
}

fn to_matrix(m: &[Vec<Entry>]) -> CMatrix {
    let n = m.len();
    CMatrix::from_fn(n, n, |i, j| match &m[i][j] {
        Entry::Zero => Complex64::new(0.0, 0.0),
        Entry::Root(q) => q.to_complex(),
        Entry::Number(z) => *z,
    })
}

fn build_bundles(
    spec: &BundleSpec,
    gd: &FiniteGroupoid,
    cocycle: &Result<DeligneCocycle, String>,
    seed: u64,
) -> Result<Vec<(String, Result<TwistedBundle, String>)>, CliError> {
    let c = match cocycle {
        Ok(c) => c,
        Err(e) => return Ok(vec![(spec.name.clone(), Err(format!("twist: {e}")))]),
    };
    if spec.irreps {
        let reps = match irreducible_projective_reps(c, seed) {
            Ok(r) => r,
            Err(e) => return Ok(vec![(spec.name.clone(), Err(e.to_string()))]),
        };
        return Ok(reps
            .into_iter()
            .enumerate()
            .map(|(i, r)| (format!("{}{}", spec.name, i + 1), r.into_bundle(c).map_err(|e| e.to_string())))
            .collect());
    }
    let default = spec.dims.get("*").copied();
    for name in spec.dims.keys().filter(|k| *k != "*") {
        object(gd, name)?;
    }
    let dims = (0..gd.n_objects())
        .map(|x| {
            spec.dims
                .get(gd.object_name(x))
                .copied()
                .or(default)
                .ok_or_else(|| parse_err(format!("bundle `{}`: no dimension for object `{}`", spec.name, gd.object_name(x))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries: Vec<Option<Vec<Vec<Entry>>>> = vec![None; gd.n_morphisms()];
    for (name, rows) in &spec.matrices {
        let f = morphism(gd, name)?;
        let parsed = rows.iter().map(|r| r.iter().map(|s| entry(s)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
        if parsed.iter().any(|r| r.len() != parsed.len()) {
            return Err(parse_err(format!("bundle `{}`: matrix for `{name}` is not square", spec.name)));
        }
        entries[f] = Some(parsed);
    }
    let mut matrices = Vec::with_capacity(gd.n_morphisms());
    for f in 0..gd.n_morphisms() {
        let m = match entries[f].take() {
            Some(m) => m,
            None if gd.is_identity(f) => {
                let (p, q) = dims[gd.src(f)];
                (0..p + q).map(|i| (0..p + q).map(|j| if i == j { Entry::Root(Phase::zero()) } else { Entry::Zero }).collect()).collect()
            }
            None => return Err(parse_err(format!("bundle `{}`: no matrix for `{}`", spec.name, gd.morphism_name(f)))),
        };
        matrices.push(m);
    }
    let exact: Option<Vec<Monomial>> = matrices.iter().map(|m| to_monomial(m)).collect();
    let built = match exact {
        Some(monos) => TwistedBundle::from_monomials(c.clone(), dims.clone(), monos),
        None => TwistedBundle::new(c.clone(), dims.clone(), matrices.iter().map(|m| to_matrix(m)).collect()),
    };
    let mut bundle = match built {
        Ok(b) => b,
        Err(e) => return Ok(vec![(spec.name.clone(), Err(e.to_string()))]),
    };
    if !spec.superconnection.is_empty() || c.is_smooth() {
        let chart = c.chart();
        let mut nabla = Vec::with_capacity(gd.n_objects());
        for x in 0..gd.n_objects() {
            let (p, q) = dims[x];
            let m = match spec.superconnection.get(gd.object_name(x)) {
                Some(rows) => {
                    if rows.len() != p + q || rows.iter().any(|r| r.len() != p + q) {
                        return Err(parse_err(format!("bundle `{}`: superconnection at `{}` has the wrong shape", spec.name, gd.object_name(x))));
                    }
                    let flat = rows.iter().flatten().map(|s| form(chart, s)).collect::<Result<Vec<_>, _>>()?;
                    FormMatrix::from_entries(chart, p, q, flat).map_err(|e| parse_err(e.to_string()))?
                }
                None => FormMatrix::zero(chart, p, q),
            };
            nabla.push(m);
        }
        bundle = match bundle.with_superconnection(nabla) {
            Ok(b) => b,
            Err(e) => return Ok(vec![(spec.name.clone(), Err(e.to_string()))]),
        };
    }
    Ok(vec![(spec.name.clone(), Ok(bundle))])
}

fn rational(s: &str) -> Result<coeff::Rat, CliError> {
    coeff::Rat::from_str(s.trim()).map_err(|_| parse_err(format!("bad rational `{s}`")))
}

fn build_loop(spec: &LoopSpec, gd: &FiniteGroupoid, base: &Arc<Chart>) -> Result<Result<SuperLoop, String>, CliError> {
    if let Some(g) = &spec.constant {
        if !spec.arcs.is_empty() || !spec.jumps.is_empty() {
            return Err(parse_err(format!("loop `{}`: `constant` excludes arcs and jumps", spec.name)));
        }
        let g = morphism(gd, g)?;
        return Ok(SuperLoop::constant(gd, base, g).map_err(|e| e.to_string()));
    }
    let mut segments = Vec::with_capacity(spec.arcs.len());
    for arc in &spec.arcs {
        let x = object(gd, &arc.object)?;
        let point = |s: &str| -> Result<SuperPoint, CliError> { SuperPoint::real(base, rational(s)?).map_err(|e| parse_err(e.to_string())) };
        let interval = match SuperInterval::new(point(&arc.from)?, point(&arc.to)?) {
            Ok(i) => i,
            Err(e) => return Ok(Err(e.to_string())),
        };
        let function = |s: &str| SuperFunction::parse(base, s).map_err(|e| parse_err(format!("`{s}`: {e}")));
        let connection = Connection { a_t: function(&arc.a_t)?, a_theta: function(&arc.a_theta)? };
        segments.push(Segment { object: x, interval, connection });
    }
    let jumps = spec.jumps.iter().map(|j| morphism(gd, j)).collect::<Result<Vec<_>, _>>()?;
    let sk = match Skeleton::new(gd, segments, jumps, true) {
        Ok(sk) => sk,
        Err(e) => return Ok(Err(e.to_string())),
    };
    Ok(SuperLoop::new(gd, sk).map_err(|e| e.to_string()))
}

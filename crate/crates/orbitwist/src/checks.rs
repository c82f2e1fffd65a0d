//! The acceptance suite, shared by `orbitwist selftest` and the `acceptance` test target.
//!
//! Every check draws from its own ChaCha stream derived from the seed, so a failing line can
//! be replayed alone.

use std::sync::Arc;
use std::time::{Duration, Instant};

use bundles::{
    chern_character, concordance_witness, flat_sections, irreducible_projective_reps, is_closed, rank, twisted_differential, InertiaSection,
    Monomial, TwistedBundle, TOL,
};
use deligne::{group_h2, random as drandom, u1_classes, Coboundary, DeligneCocycle, ExpLift};
use forms::coeff::{self, Rat};
use forms::{random, Chart, FormMatrix, GradedForm, Key, Phase, Poly};
use groupoid::{FiniteGroupoid, Functor, Group};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superline::{
    integrate_direct, integrate_ftc, lemma2_check, lemma2_sign, rudakov, rudakov_regression, Connection, SuperExp, SuperFunction, SuperInterval,
    SuperPoint,
};
use transgression::{
    dimensional_reduction_check, evaluate_q, loop_holonomy, partition_function, Comparison, Segment, Skeleton, SuperLoop, Transfer,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Set when the literal target cannot be met; the reason is printed next to the verdict.
    pub known_infeasible: Option<&'static str>,
    pub elapsed: Duration,
}

/// Criteria whose literal statement contradicts a value computed independently.
pub const KNOWN_INFEASIBLE: &[(u8, &str)] = &[(
    5,
    "H^2((Z/2)^2; Z/2) has three Z/2 summands; the single [2] is the U(1) multiplier, which `orbitwist h2` prints on its own row",
)];

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn finish(id: u8, name: &'static str, start: Instant, budget: Option<Duration>, failures: Vec<String>) -> CheckResult {
    let elapsed = start.elapsed();
    let mut failures = failures;
    if let Some(b) = budget {
        if elapsed > b {
            failures.push(format!("took {:.1}s, budget {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64()));
        }
    }
    let passed = failures.is_empty();
    let detail = if passed { String::new() } else { failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ") };
    let known_infeasible = if passed { None } else { KNOWN_INFEASIBLE.iter().find(|(i, _)| *i == id).map(|(_, w)| *w) };
    CheckResult { id, name, passed, detail, known_infeasible, elapsed }
}

pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        ftc(seed),
        contraction(seed),
        shifted_boundary(),
        holonomy_cocycle(seed),
        twist_classes(),
        delocalized_dimension(seed),
        transgression_laws(seed),
        dimensional_reduction(seed),
        twisted_differential_check(seed),
        morita(seed),
        concordance(seed),
    ]
}

/// Every group of order at most 12 up to isomorphism.
pub fn groups_up_to_12() -> Vec<Group> {
    let c = Group::cyclic;
    let p = Group::product;
    vec![
        c(1),
        c(2),
        c(3),
        c(4),
        p(&c(2), &c(2)),
        c(5),
        c(6),
        Group::symmetric(3).expect("S3"),
        c(7),
        c(8),
        p(&c(4), &c(2)),
        p(&p(&c(2), &c(2)), &c(2)),
        Group::dihedral(4).expect("D4"),
        Group::quaternion(),
        c(9),
        p(&c(3), &c(3)),
        c(10),
        Group::dihedral(5).expect("D5"),
        c(11),
        c(12),
        p(&c(6), &c(2)),
        Group::dihedral(6).expect("D6"),
        Group::alternating(4).expect("A4"),
        Group::semidirect_cyclic(3, 4, 2).expect("Dic3"),
    ]
}

pub fn klein() -> Group {
    Group::product(&Group::cyclic(2), &Group::cyclic(2))
}

/// `q(x, y) = x_2 y_1 / 2` in the product numbering `x = 2 x_1 + x_2`.
pub fn klein_torsion() -> DeligneCocycle {
    DeligneCocycle::discrete(FiniteGroupoid::from_group(&klein()), |x, y| Phase::from_ratio(((x % 2) * (y / 2)) as i64, 2))
}

fn pauli_matrices() -> Vec<Monomial> {
    let half = Phase::from_ratio(1, 2);
    vec![
        Monomial::identity(2),
        Monomial::diagonal(vec![Phase::zero(), half.clone()]),
        Monomial { columns: vec![(1, Phase::zero()), (0, Phase::zero())] },
        Monomial { columns: vec![(1, Phase::zero()), (0, half)] },
    ]
}

pub fn pauli_bundle() -> TwistedBundle {
    TwistedBundle::from_monomials(klein_torsion(), vec![(2, 0)], pauli_matrices()).expect("Pauli matrices are a twisted representation")
}

/// Each group of order at most 12 with each twist class.
pub fn twisted_groups() -> Vec<DeligneCocycle> {
    let mut out = Vec::new();
    for g in groups_up_to_12() {
        let classes = u1_classes(&g);
        for coeffs in classes.classes() {
            let table = classes.cocycle(&coeffs).expect("class coefficients in range");
            out.push(DeligneCocycle::discrete(FiniteGroupoid::from_group(&g), |a, b| table.get(a).map_or(Phase::zero(), |row| row[b].clone())));
        }
    }
    out
}

// ---------------------------------------------------------------------------------------------
// Superline

fn line_function<R: Rng>(r: &mut R, base: &Arc<Chart>, deg: u32, parity: Option<u32>) -> SuperFunction {
    let line = SuperFunction::zero(base).expect("odd-only base").line().clone();
    let keep_f = |k: Key| k.dt == 0 && parity.is_none_or(|p| k.parity() == p);
    let keep_g = |k: Key| k.dt == 0 && parity.is_none_or(|p| k.parity() != p);
    let f = random::form(r, &line, deg, 3).filter(keep_f);
    let g = random::form(r, &line, deg, 3).filter(keep_g);
    SuperFunction::new(base, f, g).expect("components on the line chart")
}

fn super_point<R: Rng>(r: &mut R, base: &Arc<Chart>, body: Rat, odd: Option<GradedForm>) -> SuperPoint {
    let nil = random::form(r, base, 0, 2).filter(|k| k != Key::ONE && k.parity() == 0);
    let odd = odd.unwrap_or_else(|| random::form(r, base, 0, 2).filter(|k| k.parity() == 1));
    SuperPoint::new(&GradedForm::constant(base, coeff::real(body)) + &nil, odd).expect("even and odd parts")
}

fn int_rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn ftc(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut r = rng(seed, 1);
    let mut failures = Vec::new();
    for i in 0..500 {
        let base = Chart::standard(0, r.gen_range(0..=3));
        let u = line_function(&mut r, &base, 5, None);
        let lo: i64 = r.gen_range(-3..=3);
        let hi = lo + r.gen_range(0..=3);
        let j = SuperInterval::new(super_point(&mut r, &base, int_rat(lo), None), super_point(&mut r, &base, int_rat(hi), None)).expect("ordered");
        match (integrate_ftc(&u, &j), integrate_direct(&u, &j)) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => failures.push(format!("sample {i}: {a:?} vs {b:?}")),
        }
    }
    finish(1, "fundamental theorem on superintervals", start, Some(Duration::from_secs(10)), failures)
}

fn contraction(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut r = rng(seed, 2);
    let mut failures = Vec::new();
    for n in 0..12u32 {
        let oracle = if (n * n.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
        if lemma2_sign(n) != oracle {
            failures.push(format!("sign at n = {n}"));
        }
    }
    let chart = Chart::standard(4, 0);
    for degree in 0..=4usize {
        for i in 0..100 {
            let omega = random::homogeneous(&mut r, &chart, degree, (degree % 2) as u32, 3, 3);
            match lemma2_check(&omega) {
                Ok((lhs, rhs)) if lhs == rhs => {}
                Ok(_) => failures.push(format!("degree {degree} sample {i} differs")),
                // The zero form has no degree.
                Err(_) if omega.is_zero() => {}
                Err(e) => failures.push(format!("degree {degree} sample {i}: {e}")),
            }
        }
    }
    finish(2, "contraction identity on R^4", start, Some(Duration::from_secs(30)), failures)
}

fn shifted_boundary() -> CheckResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    if !rudakov_regression() {
        failures.push("u = t".into());
    }
    // u = sum c_k t^k: the naive integral is 0, the shifted one is u(1) - u(0) = sum_{k>0} c_k.
    for d in 1..6u32 {
        let u = (0..=d).fold(Poly::zero(1), |acc, k| &acc + &Poly::monomial(vec![k], coeff::int(i64::from(k) * 3 - 2)));
        let expected: i64 = (1..=d).map(|k| i64::from(k) * 3 - 2).sum();
        let rep = rudakov(&u);
        if rep.naive != coeff::int(0) || rep.shifted != coeff::int(expected) || !rep.discrepancy {
            failures.push(format!("degree {d}: {rep:?}"));
        }
    }
    finish(3, "shifted boundary regression", start, None, failures)
}

// ---------------------------------------------------------------------------------------------
// Cocycles

fn holonomy_cocycle(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut r = rng(seed, 4);
    let groups: Vec<Group> = groups_up_to_12().into_iter().filter(|g| g.order() <= 8).collect();
    let mut failures = Vec::new();
    for i in 0..100 {
        let g = &groups[r.gen_range(0..groups.len())];
        let c = drandom::group_discrete(&mut r, g);
        let gd = c.groupoid();
        let line = match c.transgress() {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("sample {i}: {e}"));
                continue;
            }
        };
        if !line.multiplicativity_failures().is_empty() {
            failures.push(format!("sample {i}: not multiplicative"));
        }
        for (k, &(f, o)) in line.inertia.arrows.iter().enumerate() {
            let g = line.inertia.sectors[o].1;
            let fi = gd.inverse(f);
            let first = &(c.q(f, g) - c.q(f, fi)) + c.q(gd.compose(f, g), fi);
            let second = c.q(f, g) - c.q(gd.compose(gd.compose(f, g), fi), f);
            if first != second || first != line.holonomy[k].q {
                failures.push(format!("sample {i}: arrow {k}"));
            }
        }
    }
    finish(4, "transgressed holonomy is a cocycle", start, None, failures)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn twist_classes() -> CheckResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let budget = Duration::from_secs(5);
    let timed = |g: &Group, n: u64, failures: &mut Vec<String>| {
        let t = Instant::now();
        let h = group_h2(g, n);
        if t.elapsed() > budget {
            failures.push(format!("order {} mod {n} took {:.1}s", g.order(), t.elapsed().as_secs_f64()));
        }
        h
    };
    match timed(&klein(), 2, &mut failures) {
        Ok(h) if h.divisors == [2] => {}
        Ok(h) => failures.push(format!("(Z/2)^2 mod 2 gives {:?}, expected [2]", h.divisors)),
        Err(e) => failures.push(e.to_string()),
    }
    for m in 1..=8u64 {
        for n in 2..=8u64 {
            let expected: Vec<u64> = Some(gcd(m, n)).filter(|&d| d > 1).into_iter().collect();
            match timed(&Group::cyclic(m as usize), n, &mut failures) {
                Ok(h) if h.divisors == expected => {}
                Ok(h) => failures.push(format!("Z/{m} mod {n}: {:?}", h.divisors)),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    finish(5, "twist classification", start, None, failures)
}

// ---------------------------------------------------------------------------------------------
// Bundles

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= TOL)
}

fn delocalized_dimension(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (i, c) in twisted_groups().iter().enumerate() {
        let order = c.groupoid().n_morphisms();
        let line = match c.transgress() {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("fixture {i}: {e}"));
                continue;
            }
        };
        let flat = flat_sections(&line);
        let reps = match irreducible_projective_reps(c, seed) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("order {order}: {e}"));
                continue;
            }
        };
        if flat.dimension() != reps.len() {
            failures.push(format!("order {order}: {} flat sections, {} irreducibles", flat.dimension(), reps.len()));
        }
        let mut chars = Vec::new();
        for rep in reps {
            match rep.into_bundle(c).map(|v| chern_character(&v)) {
                Ok(Ok(ch)) if flat.contains(&ch.values) => chars.push(ch.values),
                _ => failures.push(format!("order {order}: character outside the flat sections")),
            }
        }
        if rank(&chars, line.inertia.groupoid.n_objects()) != flat.dimension() {
            failures.push(format!("order {order}: characters do not span"));
        }
    }
    let c = klein_torsion();
    let line = c.transgress().expect("valid twist");
    let dims: Vec<usize> = irreducible_projective_reps(&c, seed).map(|r| r.iter().map(|p| p.dim).collect()).unwrap_or_default();
    let dim = flat_sections(&line).dimension();
    let ch = chern_character(&pauli_bundle()).map(|ch| ch.values).unwrap_or_default();
    let two = [2.0, 0.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0));
    if dim != 1 || dims != [2] || !close(&ch, &two) {
        failures.push(format!("twisted (Z/2)^2: dim {dim}, irreps {dims:?}, ch {ch:?}"));
    }
    finish(6, "delocalized dimension equals the number of irreducibles", start, None, failures)
}

/// Rank-one smooth bundles with nonzero curving: `G` acting on itself, `h` the coboundary of
/// fourth-root phases `lambda`, and `rho(g, x) = exp(2 pi i lambda(g))`.
pub fn smooth_line_bundle(seed: u64, group: &Group) -> TwistedBundle {
    let mut r = rng(seed, 100);
    let chart = Chart::standard(3, 0);
    let k = group.order();
    let action: Vec<Vec<usize>> = group.elements().map(|a| group.elements().map(|b| group.mul(a, b)).collect()).collect();
    let gd = FiniteGroupoid::action_groupoid(group, group.names().to_vec(), &action).expect("left multiplication");
    let lambda: Vec<Phase> = group.elements().map(|g| if g == group.identity() { Phase::zero() } else { Phase::from_ratio(r.gen_range(0..4), 4) }).collect();
    let q = |a: usize, b: usize| &(&lambda[a % k] + &lambda[b % k]) - &lambda[group.mul(a % k, b % k)];
    let h = gd.composable_pairs().map(|(a, b)| ExpLift::phase(&chart, q(a, b))).collect();
    let b0 = &random::homogeneous(&mut r, &chart, 2, 0, 2, 3) + &forms::parse_form(&chart, "t3*dt1*dt2").expect("fixed form");
    let base = DeligneCocycle::smooth(gd.clone(), chart.clone(), h, vec![GradedForm::zero(&chart); gd.n_morphisms()], vec![b0; k]).expect("shapes");
    let pi: Vec<GradedForm> = (0..k).map(|_| random::homogeneous(&mut r, &chart, 1, 1, 2, 2)).collect();
    let cocycle = base.apply_coboundary(&Coboundary { lambda: vec![ExpLift::one(&chart); gd.n_morphisms()], pi: pi.clone() }).expect("normalized");
    let w = &random::homogeneous(&mut r, &chart, 1, 1, 2, 2) + &random::homogeneous(&mut r, &chart, 3, 1, 1, 1);
    let rho = (0..gd.n_morphisms()).map(|f| Monomial::diagonal(vec![lambda[f % k].clone()])).collect();
    let nabla = pi.iter().map(|p| FormMatrix::scalar(&(&w + p), 1, 0)).collect();
    TwistedBundle::from_monomials(cocycle, vec![(1, 0); k], rho).expect("shapes").with_superconnection(nabla).expect("odd connection")
}

/// The Pauli bundle spread over `(Z/2)^2` acting on itself, with a smooth twist.
pub fn smooth_pauli_bundle(seed: u64) -> TwistedBundle {
    let mut r = rng(seed, 101);
    let chart = Chart::standard(3, 0);
    let g = klein();
    let action: Vec<Vec<usize>> = g.elements().map(|a| g.elements().map(|b| g.mul(a, b)).collect()).collect();
    let gd = FiniteGroupoid::action_groupoid(&g, g.names().to_vec(), &action).expect("left multiplication");
    let h = gd.composable_pairs().map(|(a, b)| ExpLift::phase(&chart, Phase::from_ratio((((a % 4) % 2) * ((b % 4) / 2)) as i64, 2))).collect();
    let b0 = random::homogeneous(&mut r, &chart, 2, 0, 2, 3);
    let base = DeligneCocycle::smooth(gd.clone(), chart.clone(), h, vec![GradedForm::zero(&chart); gd.n_morphisms()], vec![b0; 4]).expect("shapes");
    let pi: Vec<GradedForm> = (0..4).map(|_| random::homogeneous(&mut r, &chart, 1, 1, 2, 2)).collect();
    let cocycle = base.apply_coboundary(&Coboundary { lambda: vec![ExpLift::one(&chart); gd.n_morphisms()], pi: pi.clone() }).expect("normalized");
    let w = random::homogeneous(&mut r, &chart, 1, 1, 2, 2);
    let mats = pauli_matrices();
    let rho = (0..gd.n_morphisms()).map(|f| mats[f % 4].clone()).collect();
    let nabla = pi.iter().map(|p| FormMatrix::scalar(&(&w + p), 2, 0)).collect();
    TwistedBundle::from_monomials(cocycle, vec![(2, 0); 4], rho).expect("shapes").with_superconnection(nabla).expect("odd connection")
}

/// Discrete fixtures: every irreducible of every twisted group, the sign line of `Z/2` on a
/// `1|1` space and the Pauli bundle.
pub fn discrete_bundles(seed: u64) -> Vec<(String, TwistedBundle)> {
    let mut out = Vec::new();
    for (i, c) in twisted_groups().iter().enumerate() {
        for (j, rep) in irreducible_projective_reps(c, seed).unwrap_or_default().into_iter().enumerate() {
            if let Ok(v) = rep.into_bundle(c) {
                out.push((format!("fixture {i} irrep {j}"), v));
            }
        }
    }
    let z2 = FiniteGroupoid::from_group(&Group::cyclic(2));
    let sign = vec![Monomial::identity(2), Monomial::diagonal(vec![Phase::zero(), Phase::from_ratio(1, 2)])];
    out.push(("graded sign".into(), TwistedBundle::from_monomials(DeligneCocycle::trivial(z2), vec![(1, 1)], sign).expect("shapes")));
    out.push(("pauli".into(), pauli_bundle()));
    out
}

pub fn smooth_bundles(seed: u64) -> Vec<(String, TwistedBundle)> {
    let mut out = Vec::new();
    for (i, g) in [Group::cyclic(1), Group::cyclic(2), Group::cyclic(3), klein()].iter().enumerate() {
        out.push((format!("line over group {i}"), smooth_line_bundle(seed.wrapping_add(i as u64), g)));
    }
    out.push(("smooth pauli".into(), smooth_pauli_bundle(seed)));
    out
}

fn dimensional_reduction(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (name, v) in discrete_bundles(seed).into_iter().chain(smooth_bundles(seed)) {
        match dimensional_reduction_check(&v) {
            Ok(rep) if rep.is_ok() => {}
            Ok(rep) => failures.push(format!("{name}: sectors {:?}", rep.mismatches)),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    // A perturbed matrix must be caught, either by validation or by the comparison.
    let mut bad = pauli_matrices();
    bad[1] = Monomial::identity(2);
    if let Ok(v) = TwistedBundle::from_monomials(klein_torsion(), vec![(2, 0)], bad) {
        if v.validate().is_valid() && dimensional_reduction_check(&v).map(|r| r.is_ok()).unwrap_or(false) {
            failures.push("perturbed bundle accepted".into());
        }
    }
    finish(8, "dimensional reduction", start, None, failures)
}

fn twisted_differential_check(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut r = rng(seed, 9);
    let mut failures = Vec::new();
    let groups = groups_up_to_12();
    let chart = Chart::standard(4, 0);
    for i in 0..100 {
        let g = &groups[r.gen_range(0..8)];
        let base = drandom::group_discrete(&mut r, g);
        let c = drandom::smooth(&mut r, &base, &chart);
        let line = match c.transgress() {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("sample {i}: {e}"));
                continue;
            }
        };
        let s = InertiaSection { values: line.nabla.iter().map(|_| random::form(&mut r, &chart, 2, 4)).collect() };
        let dd = twisted_differential(&line, &s).and_then(|d| twisted_differential(&line, &d));
        if !dd.map(|d| d.values.iter().all(GradedForm::is_zero)).unwrap_or(false) {
            failures.push(format!("sample {i}: square is not zero"));
        }
    }
    for (name, v) in smooth_bundles(seed) {
        let ok = chern_character(&v).ok().and_then(|ch| ch.forms.as_ref().map(|f| is_closed(&ch.line, f).unwrap_or(false)));
        if ok != Some(true) {
            failures.push(format!("{name}: character not closed"));
        }
    }
    for (name, v) in discrete_bundles(seed) {
        let ok = chern_character(&v).map(|ch| flat_sections(&ch.line).contains(&ch.values)).unwrap_or(false);
        if !ok {
            failures.push(format!("{name}: character not flat"));
        }
    }
    finish(9, "twisted differential", start, None, failures)
}

fn concordance(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    let groups = [Group::cyclic(1), Group::cyclic(2), Group::cyclic(3), klein(), Group::symmetric(3).expect("S3")];
    for i in 0..50u64 {
        let v = if i % 5 == 4 { smooth_pauli_bundle(seed ^ i) } else { smooth_line_bundle(seed ^ i, &groups[(i % 5) as usize]) };
        let mut r = rng(seed ^ i, 11);
        let chart = v.cocycle().chart().clone();
        let Ok(ch) = chern_character(&v) else {
            failures.push(format!("fixture {i}: no character"));
            continue;
        };
        let omega0 = ch.forms.clone().expect("smooth character");
        let alpha = InertiaSection {
            values: omega0.values.iter().map(|_| &random::homogeneous(&mut r, &chart, 1, 1, 2, 2) + &random::homogeneous(&mut r, &chart, 3, 1, 1, 1)).collect(),
        };
        match concordance_witness(&ch.line, &omega0, &alpha) {
            Ok(k) => {
                if !(k.starts_at_omega0 && k.ends_at_shift && k.closed && k.recovered_ok) {
                    failures.push(format!("fixture {i}: endpoints or closedness"));
                }
                for (w, a) in k.witness.values.iter().zip(&alpha.values) {
                    if w.integrate_fiber().ok() != Some(-a) {
                        failures.push(format!("fixture {i}: fiber integral"));
                    }
                }
            }
            Err(e) => failures.push(format!("fixture {i}: {e}")),
        }
    }
    finish(11, "concordance round trip", start, None, failures)
}

// ---------------------------------------------------------------------------------------------
// Loops

fn connection<R: Rng>(r: &mut R, base: &Arc<Chart>) -> Connection {
    Connection { a_t: line_function(r, base, 2, Some(0)), a_theta: line_function(r, base, 2, Some(1)) }
}

fn out_morphism<R: Rng>(r: &mut R, gd: &FiniteGroupoid, x: usize) -> usize {
    let out: Vec<usize> = (0..gd.n_morphisms()).filter(|&f| gd.src(f) == x).collect();
    out[r.gen_range(0..out.len())]
}

/// Random skeleton with up to four arcs of integer length, decreasing parameter.
pub fn random_skeleton<R: Rng>(r: &mut R, gd: &FiniteGroupoid, base: &Arc<Chart>, closed: bool) -> Skeleton {
    let n = r.gen_range(1..=4);
    let mut objects = vec![r.gen_range(0..gd.n_objects())];
    let mut jumps = Vec::new();
    for k in 1..n {
        let j = out_morphism(r, gd, objects[k - 1]);
        jumps.push(j);
        objects.push(gd.tgt(j));
    }
    if closed {
        let hom = gd.hom(objects[n - 1], objects[0]);
        jumps.push(hom[r.gen_range(0..hom.len())]);
    }
    let mut body: i64 = r.gen_range(-1..=3);
    let first_odd = random::form(r, base, 0, 2).filter(|k| k.parity() == 1);
    let mut points = vec![super_point(r, base, int_rat(body), Some(first_odd.clone()))];
    for k in 1..=n {
        body -= r.gen_range(1..=2);
        let odd = (closed && k == n).then(|| first_odd.clone());
        points.push(super_point(r, base, int_rat(body), odd));
    }
    let segments = (0..n)
        .map(|k| Segment {
            object: objects[k],
            interval: SuperInterval::new(points[k + 1].clone(), points[k].clone()).expect("ordered"),
            connection: connection(r, base),
        })
        .collect();
    Skeleton::new(gd, segments, jumps, closed).expect("consistent by construction")
}

fn refine_randomly<R: Rng>(r: &mut R, gd: &FiniteGroupoid, sk: &Skeleton) -> Skeleton {
    let i = r.gen_range(0..sk.segments().len());
    let s = &sk.segments()[i];
    let mid = (s.interval.out_point.body() + s.interval.in_point.body()) / int_rat(2);
    sk.refine(gd, i, super_point(r, sk.base(), mid, None)).expect("interior point")
}

fn transfers<R: Rng>(r: &mut R, gd: &FiniteGroupoid, sk: &Skeleton, pick: impl Fn(&mut R, usize) -> usize) -> Vec<Transfer> {
    let n = sk.segments().len();
    (0..n)
        .map(|i| {
            let x = sk.segments()[i].object;
            let fixed = !sk.is_closed() && (i == 0 || i == n - 1);
            let morphism = if fixed { gd.identity(x) } else { pick(r, x) };
            Transfer { morphism, connection: connection(r, sk.base()) }
        })
        .collect()
}

fn same_value(a: &SuperExp, b: &SuperExp) -> bool {
    a.phase == b.phase && a.exponent() == b.exponent()
}

/// `G`, `G` acting on itself, or `G` acting on itself by conjugation, with a pulled back twist
/// that is smooth half of the time.
fn random_twist<R: Rng>(r: &mut R) -> DeligneCocycle {
    let groups = groups_up_to_12();
    let g = &groups[r.gen_range(0..8)];
    let k = g.order();
    let gd = match r.gen_range(0..3) {
        0 => FiniteGroupoid::from_group(g),
        m => {
            let action: Vec<Vec<usize>> = g
                .elements()
                .map(|a| g.elements().map(|b| if m == 1 { g.mul(a, b) } else { g.mul(g.mul(a, b), g.inv(a)) }).collect())
                .collect();
            FiniteGroupoid::action_groupoid(g, g.names().to_vec(), &action).expect("action")
        }
    };
    let table = drandom::group_cocycle(r, g);
    let discrete = DeligneCocycle::discrete(gd, |a, b| table[a % k][b % k].clone());
    if r.gen_bool(0.5) {
        drandom::smooth(r, &discrete, &Chart::standard(2, 0))
    } else {
        discrete
    }
}

fn random_coboundary<R: Rng>(r: &mut R, c: &DeligneCocycle) -> Coboundary {
    if !c.is_smooth() {
        return Coboundary::phases(c, drandom::phases(r, c.groupoid(), 6));
    }
    let gd = c.groupoid();
    let chart = c.chart();
    let lambda = (0..gd.n_morphisms())
        .map(|f| if gd.is_identity(f) { ExpLift::one(chart) } else { ExpLift { q: drandom::phase(r, 6), p: random::function(r, chart, 1, 2) } })
        .collect();
    let pi = (0..gd.n_objects()).map(|_| random::homogeneous(r, chart, 1, 1, 1, 2)).collect();
    Coboundary { lambda, pi }
}

fn transgression_laws(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut r = rng(seed, 7);
    let mut failures = Vec::new();
    for i in 0..100 {
        let c = random_twist(&mut r);
        let gd = c.groupoid().clone();
        let base = Chart::standard(0, r.gen_range(0..=2));
        let closed = r.gen_bool(0.5);
        let coarse = random_skeleton(&mut r, &gd, &base, closed);
        let fine = refine_randomly(&mut r, &gd, &coarse);
        match evaluate_q(&Comparison::Refinement { fine, coarse: coarse.clone() }, &c) {
            Ok(q) if q.is_one() => {}
            other => failures.push(format!("refinement {i}: {other:?}")),
        }

        let any = |r: &mut ChaCha8Rng, x: usize| out_morphism(r, &gd, x);
        let first = transfers(&mut r, &gd, &coarse, any);
        let Ok(lambda) = Comparison::transport(&gd, &coarse, first.clone()) else {
            failures.push(format!("composition {i}: transport"));
            continue;
        };
        let mid = lambda.target().expect("compatible");
        let second = transfers(&mut r, &gd, &mid, any);
        let mu = Comparison::transport(&gd, &mid, second.clone()).expect("transport");
        let composed = first
            .iter()
            .zip(&second)
            .map(|(s, t)| Transfer {
                morphism: gd.compose(t.morphism, s.morphism),
                connection: Connection { a_t: s.connection.a_t.add(&t.connection.a_t), a_theta: s.connection.a_theta.add(&t.connection.a_theta) },
            })
            .collect();
        let direct = Comparison::transport(&gd, &coarse, composed).expect("transport");
        match (evaluate_q(&direct, &c), evaluate_q(&lambda, &c), evaluate_q(&mu, &c)) {
            (Ok(q), Ok(a), Ok(b)) if same_value(&q, &a.mul(&b)) => {}
            other => failures.push(format!("composition {i}: {other:?}")),
        }

        // Closed loops moved into themselves by an element central in every stabilizer.
        if closed {
            let central = |_: &mut ChaCha8Rng, x: usize| {
                let loops = gd.loops(x);
                let center: Vec<usize> = loops.iter().copied().filter(|&z| loops.iter().all(|&g| gd.compose(z, g) == gd.compose(g, z))).collect();
                center[center.len() - 1]
            };
            let mut auto = transfers(&mut r, &gd, &coarse, central);
            // The same group element on every arc keeps every jump.
            let z = auto[0].morphism;
            if auto.iter().any(|t| t.morphism != z) || coarse.segments().iter().any(|s| s.object != coarse.segments()[0].object) {
                for (t, s) in auto.iter_mut().zip(coarse.segments()) {
                    t.morphism = gd.identity(s.object);
                }
            }
            let lambda = Comparison::transport(&gd, &coarse, auto).expect("transport");
            if lambda.target().expect("compatible") != coarse {
                failures.push(format!("gauge {i}: not an automorphism"));
                continue;
            }
            let gauged = c.apply_coboundary(&random_coboundary(&mut r, &c)).expect("normalized coboundary");
            match (evaluate_q(&lambda, &c), evaluate_q(&lambda, &gauged)) {
                (Ok(a), Ok(b)) if same_value(&a, &b) => {}
                other => failures.push(format!("gauge {i}: {other:?}")),
            }
        }
    }
    finish(7, "transgression laws", start, None, failures)
}

fn morita(seed: u64) -> CheckResult {
    let start = Instant::now();
    let mut r = rng(seed, 10);
    let mut failures = Vec::new();
    let point = FiniteGroupoid::from_group(&Group::trivial());
    let point_line = DeligneCocycle::trivial(point.clone()).transgress().expect("trivial twist");
    let base = Chart::standard(0, 1);
    for n in 1..=5usize {
        let pair = FiniteGroupoid::pair_groupoid(n).expect("nonempty");
        let f = Functor::collapse(&pair, &point, 0);
        if f.check_morita(&pair, &point) != Ok(true) {
            failures.push(format!("n = {n}: collapse is not an equivalence"));
        }
        let c = DeligneCocycle::trivial(pair.clone());
        let line = c.transgress().expect("trivial twist");
        if flat_sections(&line).dimension() != flat_sections(&point_line).dimension() {
            failures.push(format!("n = {n}: flat dimensions"));
        }
        let rk = r.gen_range(1..=3);
        let on_point = TwistedBundle::from_monomials(DeligneCocycle::trivial(point.clone()), vec![(rk, 0)], vec![Monomial::identity(rk)]).expect("shapes");
        let pulled = TwistedBundle::from_monomials(c.clone(), vec![(rk, 0); n], vec![Monomial::identity(rk); n * n]).expect("shapes");
        match (chern_character(&on_point), chern_character(&pulled)) {
            (Ok(a), Ok(b)) => {
                for (o, &(_, g)) in b.line.inertia.sectors.iter().enumerate() {
                    let image = a.line.inertia.sector(f.on_objects[0], f.on_morphisms[g]).expect("sector");
                    if (b.values[o] - a.values[image]).norm() > TOL {
                        failures.push(format!("n = {n}: character at sector {o}"));
                    }
                }
            }
            _ => failures.push(format!("n = {n}: characters")),
        }
        for _ in 0..10 {
            let k = SuperLoop::new(&pair, random_skeleton(&mut r, &pair, &base, true)).expect("closed");
            let segments = k.skeleton.segments().iter().map(|s| Segment { object: f.on_objects[s.object], ..s.clone() }).collect();
            let jumps = k.skeleton.jumps().iter().map(|&j| f.on_morphisms[j]).collect();
            let image = SuperLoop::new(&point, Skeleton::new(&point, segments, jumps, true).expect("image skeleton")).expect("closed");
            match (loop_holonomy(&k, &c), loop_holonomy(&image, &DeligneCocycle::trivial(point.clone()))) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => failures.push(format!("n = {n}: loop holonomy")),
            }
            match (partition_function(&pulled, &k), partition_function(&on_point, &image)) {
                (Ok(a), Ok(b)) if (a.value - b.value).norm() <= TOL => {}
                _ => failures.push(format!("n = {n}: partition function")),
            }
        }
    }
    finish(10, "Morita invariance under collapse", start, None, failures)
}

//! The acceptance criteria as executable checks over the bundled models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{GmAlgebra, Side};
use crate::axioms::{audit_lemmas, verify_gm_type, AbstractAlgebra, Reading};
use crate::error::Result;
use crate::exact::{is_zero_vector, lambda_params, scale, unit_vector, ExactVector, FieldSpec, Scalar};
use crate::forms::{closed_form_determinant, frobenius_defect, gram};
use crate::fusion::{check_grading, miyamoto_group, monster_eta_scan, verify_axis, FusionLaw, LawKind, Violation};
use crate::io::{to_json_pretty, AlgebraFile};
use crate::spectral::{canonical_eigenbasis, decompose};
use crate::system::{construct_model, GroupOrder, DEFAULT_GROUP_CAP};

const Q: FieldSpec = FieldSpec::Rationals;
const SEED: u64 = 0x5eed_0dd7;

/// Models used throughout, with their Miyamoto group orders.
pub const MODELS: [(&str, usize); 5] =
    [("dihedral:5", 10), ("dihedral:7", 14), ("frobenius:5,2", 50), ("frobenius:3,2", 18), ("burnside23", 54)];

/// A sampled good-characteristic `eta` distinct from `-1/(p-2)`.
pub fn generic_eta() -> Scalar {
    Q.ratio(2, 5)
}

pub fn special_eta(p: u64) -> Scalar {
    Q.ratio(-1, p as i64 - 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    /// One line per failed check, then informational notes.
    pub details: Vec<String>,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!("{} criterion {:>2}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title)
    }
}

struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(self, id: u32, title: &'static str) -> CriterionOutcome {
        let pass = self.failures.is_empty();
        let mut details = self.failures;
        details.extend(self.notes);
        CriterionOutcome { id, title, pass, details }
    }
}

fn build(model: &str, eta: Scalar) -> Result<GmAlgebra> {
    GmAlgebra::build(construct_model(model)?, eta, false)
}

fn both_etas(p: u64) -> [Scalar; 2] {
    [special_eta(p), generic_eta()]
}

fn random_nonzero(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> ExactVector {
    loop {
        let v: ExactVector = (0..n).map(|_| field.from_int(rng.gen_range(-3..=3))).collect();
        if !is_zero_vector(&v) {
            return v;
        }
    }
}

type Runner = fn() -> Result<CriterionOutcome>;

pub const CRITERIA: [(u32, &str, Runner); 12] = [
    (1, "left spectrum of dihedral algebras", criterion_1),
    (2, "explicit eigenvectors inside a dihedral block", criterion_2),
    (3, "primitive left semisimple axes with global multiplicities", criterion_3),
    (4, "right operator over F_13 and over Q", criterion_4),
    (5, "Monster and generalized Monster fusion laws", criterion_5),
    (6, "grading laws and Miyamoto groups", criterion_6),
    (7, "no proper right ideals", criterion_7),
    (8, "Frobenius form, Gram determinant and radical", criterion_8),
    (9, "axiomatic round trip and reconstruction", criterion_9),
    (10, "subalgebra closures in frobenius:5,2", criterion_10),
    (11, "equivariance under conjugation", criterion_11),
    (12, "closed-form product identities", criterion_12),
];

/// Runs one criterion; an internal error becomes a failed outcome.
pub fn run_criterion(id: u32) -> Option<CriterionOutcome> {
    let (_, title, f) = CRITERIA.iter().find(|(i, _, _)| *i == id)?;
    Some(f().unwrap_or_else(|e| CriterionOutcome { id, title, pass: false, details: vec![format!("error: {e}")] }))
}

pub fn run_all(parallel: bool) -> Vec<CriterionOutcome> {
    let ids: Vec<u32> = CRITERIA.iter().map(|(i, _, _)| *i).collect();
    if parallel {
        use rayon::prelude::*;
        ids.par_iter().map(|&i| run_criterion(i).expect("known id")).collect()
    } else {
        ids.iter().map(|&i| run_criterion(i).expect("known id")).collect()
    }
}

/// Expected `(eigenvalue, multiplicity)` list for an axis, zero multiplicities dropped.
fn expected_left(p: u64, eta: &Scalar, k: usize) -> Vec<(Scalar, usize)> {
    let p = p as usize;
    let (l1, l2) = lambda_params(p as u64, eta);
    let one = eta.field().one();
    let eta_minus = eta - &one;
    [(one, 1), (l1, k), (l2, k * (p - 3) / 2), (eta_minus, k * (p - 1) / 2)]
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .collect()
}

fn left_spectrum_matches(alg: &GmAlgebra, a: usize) -> Result<std::result::Result<(), String>> {
    let n = alg.dim();
    let p = alg.p() as usize;
    let k = (n - 1) / (p - 1);
    let dec = decompose(alg, a, Side::Left)?;
    let got: Vec<(Scalar, usize)> = dec.parts.iter().map(|part| (part.eigenvalue.clone(), part.dim)).collect();
    let want = expected_left(alg.p(), alg.eta(), k);
    if !dec.semisimple || !dec.primitive || got != want {
        let show = |v: &[(Scalar, usize)]| v.iter().map(|(l, m)| format!("{l}x{m}")).collect::<Vec<_>>().join(" ");
        return Ok(Err(format!(
            "axis {a}: semisimple={} primitive={} spectrum [{}], expected [{}]",
            dec.semisimple,
            dec.primitive,
            show(&got),
            show(&want)
        )));
    }
    Ok(Ok(()))
}

fn criterion_1() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for p in [3u64, 5, 7, 11] {
        for eta in both_etas(p) {
            let alg = build(&format!("dihedral:{p}"), eta.clone())?;
            for a in 0..alg.dim() {
                if let Err(msg) = left_spectrum_matches(&alg, a)? {
                    c.check(false, || format!("dihedral:{p} eta={eta} {msg}"));
                }
            }
        }
    }
    Ok(c.finish(1, CRITERIA[0].1))
}

fn criterion_2() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for p in [5u64, 7] {
        for eta in both_etas(p) {
            let alg = build(&format!("dihedral:{p}"), eta.clone())?;
            for a in 0..alg.dim() {
                let m = alg.mult_matrix(a, Side::Left);
                for b in (0..alg.dim()).filter(|&b| b != a) {
                    let cb = canonical_eigenbasis(&alg, a, b)?;
                    let expected_count = 2 + (p as usize - 3) / 2 + (p as usize - 1) / 2;
                    c.check(cb.pairs().len() == expected_count, || format!("dihedral:{p} ({a},{b}): wrong vector count"));
                    for (lambda, v) in cb.pairs() {
                        c.check(m.mul_vec(v) == scale(&lambda, v), || {
                            format!("dihedral:{p} eta={eta} ({a},{b}): vector for {lambda} is not an eigenvector")
                        });
                    }
                }
            }
        }
    }
    Ok(c.finish(2, CRITERIA[1].1))
}

fn criterion_3() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for (model, _) in MODELS {
        let sys = construct_model(model)?;
        for eta in both_etas(sys.p()) {
            let alg = GmAlgebra::build(sys.clone(), eta.clone(), false)?;
            for a in 0..alg.dim() {
                if let Err(msg) = left_spectrum_matches(&alg, a)? {
                    c.check(false, || format!("{model} eta={eta} {msg}"));
                }
            }
        }
        let k = (sys.n() - 1) / (sys.p() as usize - 1);
        c.note(format!("{model}: n={} k={k}", sys.n()));
    }
    Ok(c.finish(3, CRITERIA[2].1))
}

fn criterion_4() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    let f13 = FieldSpec::prime(13)?;
    let sys = construct_model("dihedral:5")?;
    let alg = GmAlgebra::build(sys.clone(), Scalar::parse("-1/3", f13)?, false)?;
    let want: Vec<i64> = vec![0, 1, 2, 3, 11];
    for a in 0..alg.dim() {
        let dec = decompose(&alg, a, Side::Right)?;
        let mut got: Vec<i64> = dec.eigenvalues().iter().filter_map(Scalar::to_integer).collect();
        got.sort_unstable();
        c.check(dec.semisimple && dec.primitive && got == want, || {
            format!("F:13 axis {a}: semisimple={} spectrum {got:?}", dec.semisimple)
        });
    }
    let alg = GmAlgebra::build(sys, Q.ratio(-1, 3), false)?;
    for a in 0..alg.dim() {
        let dec = decompose(&alg, a, Side::Right)?;
        c.check(dec.primitive && !dec.semisimple && dec.deficit == 2, || {
            format!("Q axis {a}: primitive={} semisimple={} deficit={}", dec.primitive, dec.semisimple, dec.deficit)
        });
    }
    Ok(c.finish(4, CRITERIA[3].1))
}

fn criterion_5() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    let d5 = build("dihedral:5", Q.ratio(-1, 3))?;
    let m43 = FusionLaw::make(LawKind::Monster, Q.ratio(4, 3), Q.ratio(-4, 3))?;
    for a in 0..d5.dim() {
        let r = verify_axis(&d5, a, &m43, Side::Left)?;
        c.check(r.pass, || format!("dihedral:5 axis {a}: M(4/3,-4/3) fails with {} violations", r.violations.len()));
    }
    let d7 = build("dihedral:7", Q.ratio(-1, 5))?;
    let alpha = Q.ratio(6, 5);
    let gm = FusionLaw::make(LawKind::GeneralizedMonster, alpha.clone(), -&alpha)?;
    let m = FusionLaw::make(LawKind::Monster, alpha.clone(), -&alpha)?;
    for a in 0..d7.dim() {
        let r = verify_axis(&d7, a, &gm, Side::Left)?;
        c.check(r.pass, || format!("dihedral:7 axis {a}: GM(6/5,-6/5) fails"));
        let r = verify_axis(&d7, a, &m, Side::Left)?;
        let in_alpha_alpha = r.violations.iter().any(|v| {
            matches!(v, Violation::Product { left, right, offending, .. }
                if *left == alpha && *right == alpha && *offending == alpha)
        });
        c.check(!r.pass && in_alpha_alpha, || format!("dihedral:7 axis {a}: M(6/5,-6/5) has no alpha o alpha witness"));
        if a == 0 {
            for v in &r.violations {
                if let Violation::Product { left, right, offending, witness } = v {
                    c.note(format!(
                        "dihedral:7 axis 0 witness: {left} o {right} reaches {offending} (basis pair {}, {})",
                        witness.left_index, witness.right_index
                    ));
                }
            }
        }
    }
    let scan = monster_eta_scan(7, 9)?;
    c.check(scan.passing.is_empty(), || format!("eta scan found passing values {:?}", scan.passing));
    c.note(format!("eta scan over |r|, s <= 9 tried {} values", scan.tried));
    Ok(c.finish(5, CRITERIA[4].1))
}

fn criterion_6() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for (model, expected) in MODELS {
        let sys = construct_model(model)?;
        let alg = GmAlgebra::build(sys.clone(), special_eta(sys.p()), false)?;
        for a in 0..alg.dim() {
            let g = check_grading(&alg, a)?;
            c.check(g.pass, || format!("{model} axis {a}: grading fails at {:?}", g.failure));
        }
        let miy = miyamoto_group(&alg, DEFAULT_GROUP_CAP)?;
        c.check(miy.non_permutation_axes.is_empty() && miy.mismatched_axes.is_empty(), || {
            format!("{model}: tau differs from conjugation on axes {:?} {:?}", miy.non_permutation_axes, miy.mismatched_axes)
        });
        c.check(miy.matches_conjugation, || format!("{model}: Miyamoto group differs from the conjugation image"));
        c.check(miy.order == GroupOrder::Exact(expected), || {
            format!("{model}: Miyamoto group order {:?}, expected {expected}", miy.order)
        });
        c.note(format!("{model}: Miyamoto order {:?}, conjugation order {:?}", miy.order, miy.conjugation_order));
    }
    Ok(c.finish(6, CRITERIA[5].1))
}

fn criterion_7() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (model, _) in MODELS {
        let sys = construct_model(model)?;
        for eta in both_etas(sys.p()) {
            let alg = GmAlgebra::build(sys.clone(), eta.clone(), false)?;
            let n = alg.dim();
            let mut seeds: Vec<ExactVector> = (0..n).map(|i| alg.basis_vector(i)).collect();
            seeds.extend((0..10).map(|_| random_nonzero(&mut rng, Q, n)));
            for (s, v) in seeds.iter().enumerate() {
                let dim = alg.right_ideal_closure(v)?.len();
                c.check(dim == n, || format!("{model} eta={eta} seed {s}: right ideal of dimension {dim} < {n}"));
            }
        }
    }
    Ok(c.finish(7, CRITERIA[6].1))
}

fn criterion_8() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for (model, _) in MODELS {
        let sys = construct_model(model)?;
        for eta in both_etas(sys.p()) {
            let alg = GmAlgebra::build(sys.clone(), eta.clone(), false)?;
            let n = alg.dim();
            let defect = frobenius_defect(&alg);
            if eta == special_eta(sys.p()) {
                c.check(defect.is_empty(), || format!("{model} eta={eta}: {} defect triples", defect.len()));
            } else {
                c.check(!defect.is_empty(), || format!("{model} eta={eta}: defect unexpectedly empty"));
                c.note(format!("{model} eta={eta}: {} defect triples", defect.len()));
            }
            let g = gram(&alg);
            c.check(g.determinant == closed_form_determinant(Q, n, &eta), || {
                format!("{model} eta={eta}: Gram determinant {} differs from the closed form", g.determinant)
            });
            c.check(g.radical_basis.is_empty(), || format!("{model} eta={eta}: radical of dimension {}", g.radical_basis.len()));
        }
    }
    let degenerate = build("dihedral:5", Q.ratio(-1, 4))?;
    let g = gram(&degenerate);
    c.check(g.radical_basis.len() == 1, || format!("dihedral:5 eta=-1/4: radical dimension {}", g.radical_basis.len()));
    c.note(format!(
        "dihedral:5 eta=-1/4 is in good characteristic yet 1+(n-1)eta = 0; radical spanned by {:?}",
        g.radical_basis.first().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    ));
    Ok(c.finish(8, CRITERIA[7].1))
}

fn criterion_9() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for (model, eta) in [("dihedral:7", Q.ratio(-1, 5)), ("frobenius:5,2", Q.ratio(-1, 3)), ("burnside23", Q.from_int(-1))] {
        let alg = build(model, eta)?;
        let n = alg.dim();
        let text = to_json_pretty(&AlgebraFile::from_abstract(&AbstractAlgebra::from_gm(&alg)))?;
        let abs = serde_json::from_str::<AlgebraFile>(&text)?.to_abstract()?;
        let report = verify_gm_type(&abs);
        c.check(report.passed(), || format!("{model}: axioms fail"));
        c.check(report.recovered_conj.as_deref() == Some(alg.system().table()), || format!("{model}: recovered table differs"));
        match &report.reconstruction {
            Some(rec) => {
                c.check(rec.isomorphic, || format!("{model}: reconstruction differs at {:?}", rec.first_difference));
                c.note(format!("{model}: reconstructed group order {:?}", rec.group_order));
            }
            None => c.check(false, || format!("{model}: no reconstruction")),
        }
        for _ in 0..8 {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let old = abs.product(i, j).iter().find(|(x, _)| *x == k).map_or(Q.zero(), |(_, v)| v.clone());
            let new = &old + &Q.ratio(rng.gen_range(1..=5), rng.gen_range(1..=5));
            let bad = abs.with_entry(i, j, k, new);
            c.check(!verify_gm_type(&bad).passed(), || format!("{model}: perturbation at ({i},{j},{k}) undetected"));
        }
    }
    Ok(c.finish(9, CRITERIA[8].1))
}

fn criterion_10() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    for eta in both_etas(5) {
        let alg = build("frobenius:5,2", eta.clone())?;
        let n = alg.dim();
        let e = |i| unit_vector(Q, n, i);
        // t, x1 t and x2 t sit at indices 0, 1 and 5.
        let two = alg.subalgebra_closure(&[e(0), e(1)], n)?;
        c.check(two.closed && two.dim() == 5, || format!("eta={eta}: <t, x1 t> has dimension {}", two.dim()));
        let three = alg.subalgebra_closure(&[e(0), e(1), e(5)], n)?;
        c.check(three.closed && three.dim() == n, || format!("eta={eta}: <t, x1 t, x2 t> has dimension {}", three.dim()));
        for _ in 0..5 {
            let seeds: Vec<ExactVector> = (0..rng.gen_range(2..=3)).map(|_| e(rng.gen_range(0..n))).collect();
            let cl = alg.subalgebra_closure(&seeds, n)?;
            c.check(cl.closed && cl.dim() <= n, || format!("eta={eta}: random closure not bounded by |T|"));
        }
    }
    Ok(c.finish(10, CRITERIA[9].1))
}

fn equivariant(alg: &GmAlgebra, a: usize, x: usize, y: usize) -> bool {
    let lhs = alg.conjugate_vector(&alg.multiply(&alg.basis_vector(x), &alg.basis_vector(y)), a);
    let sys = alg.system();
    let rhs = alg.multiply(&alg.basis_vector(sys.conj(x, a)), &alg.basis_vector(sys.conj(y, a)));
    lhs == rhs
}

fn criterion_11() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for eta in both_etas(5) {
        let d5 = build("dihedral:5", eta.clone())?;
        for a in 0..5 {
            for x in 0..5 {
                for y in 0..5 {
                    c.check(equivariant(&d5, a, x, y), || format!("dihedral:5 eta={eta}: fails at ({a},{x},{y})"));
                }
            }
        }
        let f = build("frobenius:5,2", eta.clone())?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
        for _ in 0..200 {
            let (a, x, y) = (rng.gen_range(0..25), rng.gen_range(0..25), rng.gen_range(0..25));
            c.check(equivariant(&f, a, x, y), || format!("frobenius:5,2 eta={eta}: fails at ({a},{x},{y})"));
        }
    }
    Ok(c.finish(11, CRITERIA[10].1))
}

fn criterion_12() -> Result<CriterionOutcome> {
    let mut c = Checks::new();
    for p in [5u64, 7] {
        for eta in both_etas(p) {
            let alg = build(&format!("dihedral:{p}"), eta.clone())?;
            let report = audit_lemmas(&alg, 0, 1)?;
            for e in report.mismatches() {
                c.check(false, || format!("dihedral:{p} eta={eta}: {} item {} ({:?}) {} does not match", e.lemma, e.item, e.reading, e.instance));
            }
            if let Some(e) = report.find("prod1", 5, Reading::ClosedForm).next() {
                if !e.counted {
                    let excess = e.gamma_excess.as_ref().map_or("none".to_string(), |x| x.to_string());
                    c.note(format!("dihedral:{p} eta={eta}: z*z exceeds the closed form by {excess} gamma"));
                }
            }
            for e in report.entries.iter().filter(|e| e.reading == Reading::Literal && !e.matches) {
                c.note(format!("dihedral:{p} eta={eta}: literal reading of {} item {} fails for {}", e.lemma, e.item, e.instance));
            }
        }
    }
    Ok(c.finish(12, CRITERIA[11].1))
}

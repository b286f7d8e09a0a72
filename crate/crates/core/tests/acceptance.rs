//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every comparison is exact rational equality (tolerance 0). A criterion
//! listed in `KNOWN_FAILING` is printed as FAIL; the test then asserts that
//! exactly the documented sub-items fail, with the documented computed values,
//! so any other regression still breaks the build.

mod common;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scva_core::brst::{cohomology_dims, cohomology_ring_check, DEFAULT_BASIS_BUDGET};
use scva_core::characters::{compare_characters, enumerate_character, product_character, Formula};
use scva_core::holonomy::{cy_check, cy_states, g2_check, qk_check, qk_states};
use scva_core::rational::{binomial, int, rat};
use scva_core::state::grading;
use scva_core::structures::names::{J, NU, TAU};
use scva_core::structures::{
    conformal_boson, conformal_fermion, n1_from_n2, n1_structure, n2_structure, n4_structure,
    polarized_fermion_conformal, twist, untwist, verify, verify_n1, verify_n2, verify_topological, StructureSpec,
    Twist,
};
use scva_core::vertex::{
    commutator_check, nth_product, skew_symmetry_check, translate, translation_covariance_check,
};
use scva_core::{Grading, Rational, Sector, SpaceSpec, State};

/// Criteria that cannot hold as stated, with the sub-items that fail.
const KNOWN_FAILING: &[(u32, &[&str])] = &[
    (3, &["NS A dim' 1", "NS A dim' 2", "NS A dim' 3", "NS B dim' 1", "NS B dim' 2", "NS B dim' 3"]),
    (5, &["QK n=1 Omega_(1)Omega", "QK n=1 Omega_(0)Omega"]),
];

struct Outcome {
    criterion: u32,
    title: &'static str,
    /// (sub-item, passed, detail)
    items: Vec<(String, bool, String)>,
    seconds: f64,
}

impl Outcome {
    fn new(criterion: u32, title: &'static str) -> Self {
        Outcome { criterion, title, items: Vec::new(), seconds: 0.0 }
    }

    fn item(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push((name.into(), ok, detail.into()));
    }

    fn failed(&self) -> Vec<&str> {
        self.items.iter().filter(|i| !i.1).map(|i| i.0.as_str()).collect()
    }

    fn line(&self) -> String {
        let failed = self.failed();
        let tag = if failed.is_empty() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{tag} criterion {}: {} [{} checks, {} failed, tolerance 0 (exact rationals), {:.1}s]",
            self.criterion,
            self.title,
            self.items.len(),
            failed.len(),
            self.seconds
        );
        for (name, ok, detail) in &self.items {
            if !ok {
                s.push_str(&format!("\n    failed: {name}: {detail}"));
            }
        }
        s
    }
}

fn timed(mut o: Outcome, f: impl FnOnce(&mut Outcome)) -> Outcome {
    let t = Instant::now();
    f(&mut o);
    o.seconds = t.elapsed().as_secs_f64();
    o
}

fn ortho(d: usize) -> SpaceSpec {
    SpaceSpec::orthonormal(d).unwrap()
}

fn pol(d: usize, s: Sector) -> SpaceSpec {
    SpaceSpec::polarized(d, s).unwrap()
}

/// `c` read off the vacuum coefficient of `nu_(3) nu`.
fn central_charge(space: &SpaceSpec, nu: &State) -> Rational {
    nth_product(space, nu, nu, 3).coeff(&scva_core::Monomial::vacuum()) * int(2)
}

fn verify_item(o: &mut Outcome, name: String, st: &StructureSpec, c: Rational) {
    let report = verify(st).unwrap();
    let measured = central_charge(&st.space, st.get(NU).unwrap());
    let ok = report.passed() && st.claimed_c == c;
    let detail = match report.first_failure() {
        Some(f) => format!("first failure {}({:?})", f.id, f.product),
        None => format!("c = {c}, nu_(3)nu gives {measured}"),
    };
    o.item(name, ok, detail);
}

fn criterion_1() -> Outcome {
    timed(Outcome::new(1, "central charges"), |o| {
        for d in 1..=4 {
            let st = conformal_boson(&ortho(d)).unwrap();
            let c = central_charge(&st.space, st.get(NU).unwrap());
            o.item(format!("nu_B dim {d}"), verify(&st).unwrap().passed() && c == int(d as i64), format!("c = {c}"));
            let st = conformal_fermion(&ortho(d)).unwrap();
            let c = central_charge(&st.space, st.get(NU).unwrap());
            o.item(format!("nu_F dim {d}"), verify(&st).unwrap().passed() && c == rat(d as i64, 2), format!("c = {c}"));
        }
        for d in 1..=3 {
            let st = n1_structure(&ortho(d)).unwrap();
            verify_item(o, format!("N=1 dim {d}"), &st, rat(3 * d as i64, 2));
        }
        for lambda in [int(0), rat(1, 3), rat(1, 2), int(1)] {
            let st = polarized_fermion_conformal(&pol(1, Sector::NS), &lambda).unwrap();
            let expected = -(int(6) * &lambda * &lambda - int(6) * &lambda + int(1)) * int(2);
            let c = central_charge(&st.space, st.get(NU).unwrap());
            o.item(
                format!("nu_lambda lambda={lambda} dim 2"),
                verify(&st).unwrap().passed() && c == expected,
                format!("c = {c}"),
            );
        }
        for sector in [Sector::NS, Sector::R] {
            for dp in [1, 2] {
                let st = n2_structure(&pol(dp, sector)).unwrap();
                verify_item(o, format!("N=2 dim {} {sector}", 2 * dp), &st, rat(3 * dp as i64, 1));
            }
        }
        for d in [4, 8] {
            let st = n4_structure(&SpaceSpec::quaternionic(d, Sector::NS).unwrap()).unwrap();
            verify_item(o, format!("N=4 dim {d}"), &st, rat(3 * d as i64, 2));
        }
    })
}

fn criterion_2() -> Outcome {
    timed(Outcome::new(2, "relation suites, twists, N=1 from N=2"), |o| {
        let check = |o: &mut Outcome, name: String, st: &StructureSpec| {
            let r = verify(st).unwrap();
            let detail = format!("{} relations, {} violated", r.rows.len(), r.failures().count());
            o.item(name, r.passed(), detail);
        };
        for d in 1..=3 {
            check(o, format!("verify_n1 dim {d}"), &n1_structure(&ortho(d)).unwrap());
        }
        for sector in [Sector::NS, Sector::R] {
            for dp in [1, 2] {
                let space = pol(dp, sector);
                let n2 = n2_structure(&space).unwrap();
                let r = verify_n2(&n2).unwrap();
                o.item(format!("verify_n2 dim {} {sector}", 2 * dp), r.passed(), format!("{} relations", r.rows.len()));
                for which in [Twist::A, Twist::B] {
                    let top = twist(&n2, which).unwrap();
                    let r = verify_topological(&top, &int(dp as i64)).unwrap();
                    o.item(
                        format!("verify_topological {which:?} dim {} {sector}", 2 * dp),
                        r.passed(),
                        format!("{} relations", r.rows.len()),
                    );
                    let back = untwist(&top, which).unwrap();
                    o.item(
                        format!("round trip {which:?} dim {} {sector}", 2 * dp),
                        back.vectors == n2.vectors && twist(&back, which).unwrap().vectors == top.vectors,
                        "exact",
                    );
                }
                for a in [int(1), int(2), rat(3, 5)] {
                    let r = verify_n1(&n1_from_n2(&n2, &a).unwrap()).unwrap();
                    o.item(format!("n1_from_n2 a={a} dim {} {sector}", 2 * dp), r.passed(), "");
                }
            }
        }
        for d in [4, 8] {
            check(o, format!("verify_n4 dim {d}"), &n4_structure(&SpaceSpec::quaternionic(d, Sector::NS).unwrap()).unwrap());
        }
    })
}

fn criterion_3() -> Outcome {
    timed(Outcome::new(3, "BRST cohomology"), |o| {
        let cutoff = int(2);
        for sector in [Sector::R, Sector::NS] {
            for which in [Twist::A, Twist::B] {
                for dp in 1..=3usize {
                    let table = cohomology_dims(&pol(dp, sector), which, &cutoff, DEFAULT_BASIS_BUDGET).unwrap();
                    let got = table.nonzero();
                    let exterior: Vec<((i32, i32), usize)> = (0..=dp)
                        .map(|k| ((0, k as i32), binomial(dp as i64, k as u32).try_into().unwrap()))
                        .collect();
                    let expected = match sector {
                        Sector::R => exterior.clone(),
                        Sector::NS => vec![((0, 0), 1)],
                    };
                    let detail = format!("(2*weight, charge) -> dim: {got:?}, expected {expected:?}");
                    o.item(format!("{sector} {which:?} dim' {dp}"), got == expected, detail);
                    if sector == Sector::NS {
                        // The table actually found in the NS sector.
                        assert_eq!(got, exterior, "NS {which:?} dim' {dp}");
                    }
                }
            }
        }
        for which in [Twist::A, Twist::B] {
            let r = cohomology_ring_check(&pol(2, Sector::R), which, &cutoff, DEFAULT_BASIS_BUDGET).unwrap();
            o.item(format!("ring {which:?} dim' 2"), r.passed(), format!("{} products", r.rows.len()));
        }
    })
}

fn criterion_4() -> Outcome {
    timed(Outcome::new(4, "characters to q^3"), |o| {
        let cutoff = int(3);
        let budget = 1_000_000;
        for sector in [Sector::R, Sector::NS] {
            for dp in [1, 2] {
                let space = pol(dp, sector);
                for (g, f) in [(Grading::Untwisted, Formula::N2), (Grading::A, Formula::ATwist), (Grading::B, Formula::BTwist)] {
                    let e = enumerate_character(&space, g, &cutoff, false, budget).unwrap();
                    let p = product_character(f, (dp, dp), &cutoff, false).unwrap();
                    let cmp = compare_characters(&e, &p).unwrap();
                    let ok = cmp.equal && (sector == Sector::NS || cmp.prefactors_equal);
                    o.item(
                        format!("{f:?} dim {} {sector}", 2 * dp),
                        ok,
                        format!("{} coefficients, first mismatch {:?}", cmp.compared, cmp.first_mismatch),
                    );
                }
                let a = enumerate_character(&space, Grading::A, &cutoff, false, budget).unwrap().at_y1();
                let b = enumerate_character(&space, Grading::B, &cutoff, false, budget).unwrap().at_y1();
                o.item(format!("y=1 A vs B dim {} {sector}", 2 * dp), a == b, "");
            }
        }
        for d in 1..=3 {
            let e = enumerate_character(&ortho(d), Grading::Untwisted, &cutoff, false, budget).unwrap();
            let p = product_character(Formula::Riemannian, (d, 0), &cutoff, false).unwrap();
            let cmp = compare_characters(&e, &p).unwrap();
            o.item(format!("riemannian dim {d}"), cmp.equal, format!("{} coefficients", cmp.compared));
        }
    })
}

fn criterion_5() -> Outcome {
    timed(Outcome::new(5, "special holonomy tables"), |o| {
        let vac = |c: i64| State::vacuum().scale(&int(c));
        let g2 = g2_check(&ortho(7)).unwrap();
        let pp = g2.line("Phi.Phi").unwrap();
        let (p2, p1) = (pp.row(2).unwrap(), pp.row(1).unwrap());
        o.item("G2 Phi_(2)Phi = -7|0>", p2.equal && p2.lhs == vac(-7), "");
        o.item("G2 Phi_(1)Phi = 0", p1.equal && p1.lhs.is_zero(), "");
        o.item(
            "G2 table resolved",
            g2.passed(),
            format!("discrepancies: {:?}", g2.discrepancies().map(|l| &l.id).collect::<Vec<_>>()),
        );

        let qk = qk_check(&ortho(4)).unwrap();
        let s = qk_states(&ortho(4)).unwrap();
        let oo = qk.line("Omega.Omega").unwrap();
        o.item("QK n=1 Omega_(3)Omega = 9|0>", oo.row(3).unwrap().lhs == vac(9), "");
        let r1 = oo.row(1).unwrap();
        o.item(
            "QK n=1 Omega_(1)Omega",
            r1.equal,
            format!("computed {} (= 18 nu_F), expected -4 Omega + 9 nu_F", qk_text(&r1.lhs)),
        );
        assert_eq!(r1.lhs, s.nu_f.scale(&int(18)));
        let r0 = oo.row(0).unwrap();
        o.item("QK n=1 Omega_(0)Omega", r0.equal, "equals 9 T(nu_F); the expected value carries the -4 Omega term");
        assert_eq!(r0.lhs, translate(&ortho(4), &s.nu_f).scale(&int(9)));
        for id in ["L.Omega", "G.Omega", "L.OmegaHat", "G.OmegaHat"] {
            o.item(format!("QK n=1 {id}"), qk.line(id).unwrap().holds_as_displayed(), "");
        }
        let qk2 = qk_check(&ortho(8)).unwrap();
        o.item("QK n=2 all lines as displayed", qk2.discrepancies().count() == 0, "");

        let sp2 = pol(2, Sector::NS);
        let cy2 = cy_check(&sp2).unwrap();
        let j = cy_states(&sp2).unwrap().j;
        let xx = cy2.line("X+.X-").unwrap();
        o.item("CY n=2 X+_(1)X- = -|0>", xx.row(1).unwrap().equal && xx.row(1).unwrap().lhs == vac(-1), "");
        o.item("CY n=2 X+_(0)X- = -j", xx.row(0).unwrap().lhs == -j, "");
        let yy = cy2.line("Y+.Y-").unwrap();
        o.item("CY n=2 Y+_(2)Y- = 2|0>", yy.row(2).unwrap().lhs == vac(2), "");
        o.item("CY n=2 table resolved", cy2.passed(), "");

        for n in [3usize, 1, 4] {
            let cy = cy_check(&pol(n, Sector::NS)).unwrap();
            let diffs: Vec<&str> = cy.discrepancies().map(|l| l.id.as_str()).collect();
            let mut documented = vec!["G-.X+#2", "G-.Y+#2"];
            if n == 3 {
                documented.extend(["X+.X-", "Y+.Y-"]);
            }
            o.item(
                format!("CY n={n} table resolved, discrepancies documented"),
                cy.passed() && diffs == documented,
                format!("discrepancies {diffs:?}"),
            );
        }
    })
}

fn qk_text(s: &State) -> String {
    scva_core::expr::format_state(&ortho(4), s)
}

/// Random state: one to three basis monomials with small rational coefficients.
fn random_state(rng: &mut ChaCha8Rng, basis: &[scva_core::Monomial]) -> State {
    let mut s = State::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let m = basis.choose(rng).unwrap().clone();
        let num = [-3i64, -2, -1, 1, 2, 3].choose(rng).copied().unwrap();
        s.add_term(m, rat(num, rng.gen_range(1..=2)));
    }
    if s.is_zero() {
        State::vacuum()
    } else {
        s
    }
}

fn criterion_6() -> Outcome {
    timed(Outcome::new(6, "vertex algebra axioms and negative controls"), |o| {
        const INSTANCES: usize = 100;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for space in common::spaces() {
            let big = common::monomials(&space, 4);
            let small = common::monomials(&space, 3);
            let mut failures = [0usize; 5];
            for _ in 0..INSTANCES {
                let a = random_state(&mut rng, &small);
                let b = random_state(&mut rng, &small);
                let p = random_state(&mut rng, &common::monomials(&space, 2));
                let vac = State::vacuum();
                let vacuum_ok = nth_product(&space, &vac, &a, -1) == a
                    && nth_product(&space, &a, &vac, -1) == a
                    && (0..3).all(|n| nth_product(&space, &a, &vac, n).is_zero());
                failures[0] += usize::from(!vacuum_ok);
                let n = rng.gen_range(-2i64..4);
                failures[1] += usize::from(!translation_covariance_check(&space, &a, n, &p).passed());
                failures[2] += usize::from(!skew_symmetry_check(&space, &a, &b, 2).passed());
                let (m, k) = (rng.gen_range(-1i64..3), rng.gen_range(-1i64..3));
                failures[3] += usize::from(!commutator_check(&space, &a, &b, m, k, &p).passed());
                let ma = big.choose(&mut rng).unwrap().clone();
                let mb = big.choose(&mut rng).unwrap().clone();
                let prod = nth_product(&space, &State::from_monomial(ma.clone(), int(1)), &State::from_monomial(mb.clone(), int(1)), n);
                let graded_ok = [Grading::Untwisted, Grading::A, Grading::B]
                    .into_iter()
                    .filter(|g| space.is_polarized() || *g == Grading::Untwisted)
                    .all(|g| {
                        let w = rat((ma.weight2(&space, g) + mb.weight2(&space, g)) as i64, 2) - int(n + 1);
                        let q = ma.charge(&space, g) + mb.charge(&space, g);
                        grading(&space, &prod, g).iter().all(|c| c.weight == w && c.charge == q)
                    });
                failures[4] += usize::from(!graded_ok);
            }
            for (name, f) in ["vacuum", "translation covariance", "skew symmetry", "commutator", "grading additivity"]
                .iter()
                .zip(failures)
            {
                o.item(format!("{name} on {space}"), f == 0, format!("{INSTANCES} instances, {f} failures"));
            }
        }

        // Negative controls with their predicted first broken relation.
        let sp = pol(1, Sector::NS);
        let mut st = n2_structure(&sp).unwrap();
        let bad = st.get(NU).unwrap() + st.get(J).unwrap();
        st.set(NU, bad);
        let r = verify_n2(&st).unwrap();
        let first = r.failures().find(|f| f.id == "nu.nu").map(|f| f.product);
        o.item("control nu + j breaks nu.nu at product 1", first == Some(Some(1)), format!("{first:?}"));

        let mut st = n1_structure(&ortho(1)).unwrap();
        let doubled = st.get(TAU).unwrap().scale(&int(2));
        st.set(TAU, doubled);
        let r = verify_n1(&st).unwrap();
        let first = r.first_failure().map(|f| (f.id.clone(), f.product));
        o.item(
            "control 2 tau breaks tau.tau at product 0",
            first == Some(("tau.tau".to_string(), Some(0))),
            format!("{first:?}"),
        );

        let space = ortho(1);
        let a = State::word(&[(scva_core::Gen::new(scva_core::Letter::A, 1), -1)]);
        let wrong = translate(&space, &a).scale(&int(2));
        let lhs = nth_product(&space, &wrong, &a, 2);
        let rhs = nth_product(&space, &a, &a, 1).scale(&int(-2));
        o.item("control 2T fails translation covariance at n = 2", lhs != rhs && rhs == State::vacuum().scale(&int(-2)), "");
    })
}

#[test]
fn acceptance() {
    let outcomes = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6()];
    println!();
    for o in &outcomes {
        println!("{}", o.line());
    }
    for o in &outcomes {
        let failed = o.failed();
        match KNOWN_FAILING.iter().find(|(c, _)| *c == o.criterion) {
            Some((_, documented)) => assert_eq!(failed, documented.to_vec(), "criterion {}", o.criterion),
            None => assert!(failed.is_empty(), "criterion {} failed: {failed:?}", o.criterion),
        }
    }
}

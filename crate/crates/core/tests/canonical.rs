use dirac_core::canonical::{
    analyze, canonical_eom, dirac_bracket, hamiltonian, pullback, solve_velocity, tilde, verify_variation_identity,
    verify_secondary_equals_lc, CanAnalysis,
};
use dirac_core::conjecture::build_dtr;
use dirac_core::corpus::load;
use dirac_core::expr::{constraint_form, Ideal};
use dirac_core::lagrangian::{self, LagAnalysis};
use dirac_core::model::Model;
use dirac_core::parser::parse_expr;
use dirac_core::{Error, Expr, Options};

const CAP: u32 = 12;

fn setup(key: &str) -> (Model, LagAnalysis, CanAnalysis) {
    let m = load(key).unwrap();
    let la = lagrangian::analyze(&m, &Options::default()).unwrap();
    let can = analyze(&m, &la, &Options::default()).unwrap();
    (m, la, can)
}

fn strs(v: &[Expr]) -> Vec<String> {
    v.iter().map(Expr::to_string).collect()
}

fn ex(text: &str, m: &Model) -> Expr {
    parse_expr(text, m).unwrap()
}

#[test]
fn cawley_velocity_solution() {
    let (m, la, _) = setup("cawley");
    let (uhat, user) = solve_velocity(&m, &la).unwrap();
    assert!(!user);
    assert_eq!(strs(&uhat), ["pq2", "pq1", "theta1"]);
}

#[test]
fn relativistic_velocity_solution() {
    let (m, la, _) = setup("relativistic");
    let (uhat, _) = solve_velocity(&m, &la).unwrap();
    let want = ["-e*px[0]", "e*px[1]", "e*px[2]", "e*px[3]", "theta1"];
    assert_eq!(strs(&uhat), want);
    assert_eq!(m.n(), 5);
}

#[test]
fn frenkel_uses_the_supplied_solution() {
    let (m, _, can) = setup("frenkel");
    assert!(can.user_solution);
    assert_eq!(can.uhat[0], ex("pq2/(2*sqrt(pq1))", &m));
    assert_eq!(can.uhat[1], ex("sqrt(pq1)", &m));
}

#[test]
fn primaries() {
    assert_eq!(strs(&setup("cawley").2.primaries), ["pq3"]);
    assert_eq!(strs(&setup("bilocal").2.primaries), ["pe1", "pe2"]);
    assert!(setup("free_particle").2.primaries.is_empty());
}

#[test]
fn hamiltonians() {
    let (m, _, can) = setup("cawley");
    assert_eq!(can.hamiltonian, ex("pq1*pq2 + (1/2)*q3*q2^2 + theta1*pq3", &m));
    let (m, _, can) = setup("relativistic");
    assert_eq!(can.hamiltonian, ex("e*(px^2 + m^2)/2 + theta1*pe", &m));
    let (m, la, _) = setup("free_particle");
    let (uhat, _) = solve_velocity(&m, &la).unwrap();
    assert_eq!(hamiltonian(&m, &uhat), ex("pq1^2/2", &m));
}

#[test]
fn tilde_examples() {
    let (m, _, can) = setup("cawley");
    let phi = Ideal::new(&can.primaries, CAP);
    let t = tilde(&ex("pq3", &m), &can.hamiltonian, &m);
    assert_eq!(phi.reduce(&t).unwrap(), ex("-(1/2)*q2^2", &m));
    assert!(tilde(&Expr::int(7), &can.hamiltonian, &m).is_zero());
    assert_eq!(tilde(&ex("eps1", &m), &can.hamiltonian, &m), ex("eps1~", &m));
}

#[test]
fn secondary_chains() {
    let (_, _, can) = setup("cawley");
    assert_eq!(can.secondaries.iter().map(|l| strs(l)).collect::<Vec<_>>(), [["q2"], ["pq1"]]);
    assert!(can.chain_terminated);
    let (m, _, can) = setup("relativistic");
    let chi = constraint_form(&ex("(px^2 + m^2)/2", &m), &m.assumptions);
    assert_eq!(can.secondaries, [vec![chi]]);
    let (_, _, can) = setup("bilocal");
    assert_eq!(can.secondaries.iter().map(Vec::len).collect::<Vec<_>>(), [2, 1]);
}

#[test]
fn chain_order_limit_is_reported() {
    let m = load("cawley").unwrap();
    let la = lagrangian::analyze(&m, &Options::default()).unwrap();
    let opts = Options { max_order: Some(1), ..Options::default() };
    let can = analyze(&m, &la, &opts).unwrap();
    assert!(!can.chain_terminated);
}

#[test]
fn classification() {
    for key in ["cawley", "frenkel", "relativistic", "bilocal"] {
        let (_, _, can) = setup(key);
        assert!(can.is_first_class(), "{key}");
        assert!(can.class.second.is_empty());
    }
    let (_, _, can) = setup("second_class");
    assert_eq!(can.class.rank, 2);
    assert_eq!(can.class.second, can.primaries);
    assert_eq!(can.x_matrix[0][1], Expr::int(-2));
    assert_eq!(can.x_matrix[1][0], Expr::int(2));
}

#[test]
fn second_class_multiplier_conditions() {
    let (_, _, can) = setup("second_class");
    assert!(can.secondaries.is_empty());
    assert_eq!(can.multiplier_conditions.len(), 2);
    assert!(can.multiplier_conditions.iter().all(|c| c.level == 1));
}

#[test]
fn pullbacks() {
    let (m, la, _) = setup("cawley");
    assert_eq!(pullback(&ex("pq1", &m), &m, &la), ex("u2", &m));
    assert!(pullback(&ex("pq3", &m), &m, &la).is_zero());
    let (m, la, can) = setup("relativistic");
    let chi = &can.secondaries[0][0];
    let ell = ex("(ux^2/e^2 + m^2)/2", &m);
    let pb = pullback(chi, &m, &la);
    assert!((&pb - &ell).is_zero() || (&pb + &ell).is_zero(), "{pb}");
}

#[test]
fn secondaries_match_lagrangian_constraints() {
    for key in ["cawley", "frenkel", "relativistic", "bilocal", "free_particle", "second_class"] {
        let (m, la, can) = setup(key);
        assert!(verify_secondary_equals_lc(&can, &la, &m, CAP).unwrap(), "{key}");
    }
}

#[test]
fn equations_of_motion() {
    let (m, _, can) = setup("cawley");
    let (qdot, pdot) = canonical_eom(&can.hamiltonian, &m);
    let phi = Ideal::new(&can.primaries, CAP);
    assert_eq!(phi.reduce(&qdot[0]).unwrap(), ex("pq2", &m));
    assert_eq!(phi.reduce(&qdot[1]).unwrap(), ex("pq1", &m));
    assert_eq!(phi.reduce(&qdot[2]).unwrap(), ex("theta1", &m));
    assert_eq!(phi.reduce(&pdot[1]).unwrap(), ex("-q3*q2", &m));

    let (m, _, can) = setup("relativistic");
    let (_, pdot) = canonical_eom(&can.hamiltonian, &m);
    let e = m.coords.iter().position(|c| c.name() == "e").unwrap();
    let phi = Ideal::new(&can.primaries, CAP);
    assert_eq!(phi.reduce(&pdot[e]).unwrap(), -&can.secondaries[0][0]);

    let (m, _, can) = setup("free_particle");
    let (qdot, pdot) = canonical_eom(&can.hamiltonian, &m);
    assert_eq!(qdot[0], ex("pq1", &m));
    assert!(pdot[0].is_zero());
}

#[test]
fn dirac_bracket_equations() {
    let (m, _, can) = setup("second_class");
    let phi = Ideal::new(&can.primaries, CAP);
    let x1 = dirac_bracket(&ex("x1", &m), &can.hamiltonian, &can.class.second, &m).unwrap();
    let x2 = dirac_bracket(&ex("x2", &m), &can.hamiltonian, &can.class.second, &m).unwrap();
    assert_eq!(phi.reduce(&x1).unwrap(), ex("x2/2", &m));
    assert_eq!(phi.reduce(&x2).unwrap(), ex("-x1/2", &m));
}

#[test]
fn dirac_bracket_without_second_class_is_poisson() {
    let (m, _, _) = setup("cawley");
    let b = dirac_bracket(&ex("q1", &m), &ex("pq1", &m), &[], &m).unwrap();
    assert!(b.is_one());
}

#[test]
fn dirac_bracket_needs_invertible_matrix() {
    let (m, _, _) = setup("cawley");
    let r = dirac_bracket(&ex("q1", &m), &ex("pq1", &m), &[ex("pq3", &m)], &m);
    assert_eq!(r, Err(Error::XNotInvertible));
}

#[test]
fn hamiltonian_variation_matches_lagrangian_variation() {
    for key in ["cawley", "relativistic", "bilocal", "frenkel"] {
        let (m, la, can) = setup(key);
        let q = build_dtr(&m, &can).unwrap().q;
        assert!(verify_variation_identity(&q, &m, &la, &can, CAP).unwrap().is_zero(), "{key}");
    }
    let (m, la, can) = setup("cawley");
    assert!(verify_variation_identity(&Expr::zero(), &m, &la, &can, CAP).unwrap().is_zero());
}

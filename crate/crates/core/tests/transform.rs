use dirac_core::canonical::{self, CanAnalysis};
use dirac_core::conjecture::build_dtr;
use dirac_core::corpus::{self, load};
use dirac_core::expr::Ideal;
use dirac_core::lagrangian::{self, LagAnalysis};
use dirac_core::model::Model;
use dirac_core::parser::parse_expr;
use dirac_core::transform::{check_ltr, delta_l, delta_l_explicit_tau, is_sgtr, pullback_htr};
use dirac_core::{Error, Expr, Options, Symbol};

const CAP: u32 = 12;

fn setup(key: &str) -> (Model, LagAnalysis, CanAnalysis) {
    let m = load(key).unwrap();
    let la = lagrangian::analyze(&m, &Options::default()).unwrap();
    let can = canonical::analyze(&m, &la, &Options::default()).unwrap();
    (m, la, can)
}

fn exs(texts: &[&str], m: &Model) -> Vec<Expr> {
    texts.iter().map(|t| parse_expr(t, m).unwrap()).collect()
}

fn ex(text: &str, m: &Model) -> Expr {
    parse_expr(text, m).unwrap()
}

#[test]
fn integrability() {
    let (m, la, _) = setup("cawley");
    assert!(check_ltr(&exs(&["eps2", "0", "eta"], &m), &m, &la));
    assert!(check_ltr(&exs(&["u2^2", "0", "0"], &m), &m, &la));
    assert!(!check_ltr(&exs(&["u1", "0", "0"], &m), &m, &la));
}

#[test]
fn null_directions_are_integrable() {
    for f in corpus::CORPUS.iter().chain(corpus::EXTRA) {
        let (m, la, _) = setup(f.key);
        for z in &la.z {
            let eps: Vec<Expr> = z.iter().map(|c| c * &ex("eps1", &m)).collect();
            assert!(check_ltr(&eps, &m, &la), "{}", f.key);
        }
    }
}

#[test]
fn cawley_variation() {
    let (m, la, _) = setup("cawley");
    let eps = exs(&["eps2", "0", "eta"], &m);
    let e = ex("eps2~*q2", &m);
    let dl = delta_l_explicit_tau(&eps, Some(&e), &m, &la).unwrap();
    assert_eq!(dl, ex("-eps2~~*q2 - (1/2)*eta*q2^2", &m));
    let rest = Ideal::new(&[ex("q2^2", &m)], CAP).reduce(&dl).unwrap();
    assert_eq!(rest, ex("-eps2~~*q2", &m));
}

#[test]
fn frenkel_variation() {
    let (m, la, _) = setup("frenkel");
    let eps = exs(&["eps2", "0", "eta"], &m);
    let dl = delta_l_explicit_tau(&eps, None, &m, &la).unwrap();
    assert_eq!(dl, ex("eps2~*u2^2 - (1/2)*eta*q2^2", &m));
}

#[test]
fn zero_variation() {
    let (m, la, _) = setup("cawley");
    let zero = vec![Expr::zero(); 3];
    assert!(delta_l(&zero, None, &m, &la).unwrap().is_zero());
    assert!(delta_l_explicit_tau(&zero, None, &m, &la).unwrap().is_zero());
}

#[test]
fn associated_function_is_checked() {
    let (m, la, _) = setup("cawley");
    let eps = exs(&["u1", "0", "0"], &m);
    assert!(matches!(delta_l(&eps, None, &m, &la), Err(Error::AssociatedFunctionMissing(_))));
}

#[test]
fn semi_gauge() {
    let (m, la, _) = setup("cawley");
    let eps = exs(&["eps2", "0", "eta"], &m);
    let dl = delta_l_explicit_tau(&eps, None, &m, &la).unwrap();
    assert!(is_sgtr(&dl, &la, CAP).unwrap());
    let dl = delta_l(&exs(&["0", "q1", "0"], &m), None, &m, &la).unwrap();
    assert_eq!(dl, ex("u1^2 - q1*q2*q3", &m));
    assert!(!is_sgtr(&dl, &la, CAP).unwrap());
    // u1*u2 lies in the ideal of the second constraint u2.
    let dl = delta_l(&exs(&["q1", "0", "0"], &m), None, &m, &la).unwrap();
    assert!(is_sgtr(&dl, &la, CAP).unwrap());
}

#[test]
fn cawley_generator_pullback() {
    let (m, la, can) = setup("cawley");
    let q = build_dtr(&m, &can).unwrap().q;
    let lt = pullback_htr(&q, &m, &la).unwrap();
    assert_eq!(lt.eps, exs(&["eps2", "0", "eta"], &m));
    assert_eq!(lt.e, Some(ex("-eps1*q2", &m)));
}

#[test]
fn relativistic_generator_pullback() {
    let (m, la, can) = setup("relativistic");
    let q = build_dtr(&m, &can).unwrap().q;
    let lt = pullback_htr(&q, &m, &la).unwrap();
    let e = m.coords.iter().position(|c| c.name() == "e").unwrap();
    for (a, (eps, u)) in lt.eps.iter().zip(&m.velocities).enumerate() {
        if a == e {
            assert_eq!(*eps, ex("eta", &m));
        } else {
            assert_eq!(*eps, &ex("eps/e", &m) * &Expr::sym(u));
        }
    }
}

#[test]
fn zero_generator_pullback() {
    let (m, la, _) = setup("cawley");
    let lt = pullback_htr(&Expr::zero(), &m, &la).unwrap();
    assert!(lt.eps.iter().all(Expr::is_zero));
    assert!(lt.e.unwrap().is_zero());
}

#[test]
fn generator_pullbacks_are_semi_gauge() {
    for key in ["cawley", "frenkel", "relativistic", "relativistic_massless", "bilocal"] {
        let (m, la, can) = setup(key);
        let q = build_dtr(&m, &can).unwrap().q;
        let lt = pullback_htr(&q, &m, &la).unwrap();
        assert!(check_ltr(&lt.eps, &m, &la), "{key}");
        let dl = delta_l_explicit_tau(&lt.eps, lt.e.as_ref(), &m, &la).unwrap();
        assert!(is_sgtr(&dl, &la, CAP).unwrap(), "{key}: {dl}");
    }
}

#[test]
fn primary_directions_change_lagrangian_by_constraints() {
    for f in corpus::CORPUS.iter().chain(corpus::EXTRA) {
        let (m, la, _) = setup(f.key);
        for (k, z) in la.z.iter().enumerate() {
            let eps_m = Expr::sym(&Symbol::param(&format!("eps{}", k + 1), 0));
            let eps: Vec<Expr> = z.iter().map(|c| c * &eps_m).collect();
            let e: Expr = la.w.iter().zip(&eps).map(|(w, x)| w * x).sum();
            let dl = delta_l(&eps, Some(&e), &m, &la).unwrap();
            let z_omega: Expr = z.iter().zip(&la.omega).map(|(a, b)| a * b).sum();
            assert!((&dl + &(&eps_m * &z_omega)).is_zero(), "{}: {dl}", f.key);
        }
    }
}

use dirac_core::corpus::load;
use dirac_core::expr::Expr;
use dirac_core::lagrangian::{analyze, ele_decompose, independence_filter, LcStatus};
use dirac_core::linalg::mat_mul;
use dirac_core::parser::parse_expr;
use dirac_core::Options;

fn strs(v: &[Expr]) -> Vec<String> {
    v.iter().map(|e| e.to_string()).collect()
}

fn levels(key: &str) -> Vec<Vec<String>> {
    let m = load(key).unwrap();
    let la = analyze(&m, &Options::default()).unwrap();
    la.constraint_levels().iter().map(|l| strs(l)).collect()
}

#[test]
fn cawley_decomposition() {
    let m = load("cawley").unwrap();
    let (w, hess, omega) = ele_decompose(&m);
    assert_eq!(strs(&w), ["u2", "u1", "0"]);
    assert_eq!(strs(&hess[0]), ["0", "1", "0"]);
    assert_eq!(strs(&hess[1]), ["1", "0", "0"]);
    assert_eq!(strs(&hess[2]), ["0", "0", "0"]);
    assert_eq!(strs(&omega), ["0", "q2*q3", "(1/2)*q2^2"]);
}

#[test]
fn free_particle_decomposition() {
    let m = load("free_particle").unwrap();
    let (w, hess, omega) = ele_decompose(&m);
    assert_eq!(strs(&w), ["u1"]);
    assert_eq!(hess[0][0].to_string(), "1");
    assert!(omega[0].is_zero());
    let la = analyze(&m, &Options::default()).unwrap();
    assert!(la.z.is_empty());
    assert!(la.udot[0].is_zero());
    assert!(la.arbitrary.is_empty());
}

#[test]
fn frenkel_hessian() {
    let m = load("frenkel").unwrap();
    let (_, hess, _) = ele_decompose(&m);
    assert_eq!(strs(&hess[0]), ["0", "2*u2", "0"]);
    assert_eq!(strs(&hess[1]), ["2*u2", "2*u1", "0"]);
}

#[test]
fn cawley_sweep_and_solution() {
    let m = load("cawley").unwrap();
    let la = analyze(&m, &Options::default()).unwrap();
    assert_eq!(la.rank, 2);
    assert_eq!(la.z.len(), 1);
    assert_eq!(strs(&la.z[0]), ["0", "0", "1"]);
    assert_eq!(strs(&la.udot), ["-q2*q3", "0", "v3"]);
}

#[test]
fn block_form_for_every_model() {
    for f in dirac_core::corpus::CORPUS.iter().chain(dirac_core::corpus::EXTRA) {
        let m = f.model().unwrap();
        let la = analyze(&m, &Options::default()).unwrap();
        let qm = mat_mul(&la.qmat, &la.m);
        let n = m.n();
        assert_eq!(la.z.len(), n - la.rank, "{}", f.key);
        for (i, row) in qm.iter().enumerate() {
            for j in 0..n {
                let got = &row[la.c_perm[j]];
                let want = if i < la.rank && j < la.rank {
                    if i == j {
                        Expr::one()
                    } else {
                        Expr::zero()
                    }
                } else if i < la.rank {
                    la.n_block[i][j - la.rank].clone()
                } else {
                    Expr::zero()
                };
                assert!((got - &want).is_zero(), "{} entry {i},{j}", f.key);
            }
        }
        for z in &la.z {
            for b in 0..n {
                let s: Expr = z.iter().zip(&la.m).map(|(za, row)| za * &row[b]).sum();
                assert!(s.is_zero(), "{}", f.key);
            }
        }
    }
}

#[test]
fn relativistic_null_direction_is_einbein() {
    let m = load("relativistic").unwrap();
    let la = analyze(&m, &Options::default()).unwrap();
    assert_eq!(la.rank, 4);
    assert_eq!(strs(&la.z[0]), ["0", "0", "0", "0", "1"]);
    assert_eq!(la.udot[1].to_string(), "ux[1]*ue/e");
    assert_eq!(la.udot[4].to_string(), "v5");
}

#[test]
fn second_class_model_has_zero_hessian() {
    let m = load("second_class").unwrap();
    let la = analyze(&m, &Options::default()).unwrap();
    assert_eq!(la.rank, 0);
    assert_eq!(la.z.len(), 2);
    assert_eq!(levels("second_class")[0], ["2*u2 + x1", "2*u1 - x2"]);
    assert!(la.has_second_class_signature());
}

#[test]
fn cawley_chain() {
    assert_eq!(levels("cawley"), vec![vec!["q2"], vec!["u2"]]);
    assert_eq!(levels("frenkel"), vec![vec!["q2"], vec!["u2"]]);
}

#[test]
fn bilocal_chain() {
    let l = levels("bilocal");
    assert_eq!(l.len(), 2);
    let m = load("bilocal").unwrap();
    let u11 = parse_expr("ux1*ux1", &m).unwrap();
    let u22 = parse_expr("ux2*ux2", &m).unwrap();
    let u12 = parse_expr("ux1*ux2", &m).unwrap();
    assert_eq!(l[0], strs(&[u11, u22]));
    assert_eq!(l[1], strs(&[u12]));
    let la = analyze(&m, &Options::default()).unwrap();
    assert!(la.lc_chain.last().unwrap().iter().all(|e| e.status == LcStatus::Identity));
}

#[test]
fn independence_examples() {
    let m = load("cawley").unwrap();
    let q2 = parse_expr("q2", &m).unwrap();
    let three = parse_expr("3*q2", &m).unwrap();
    assert_eq!(independence_filter(&[q2.clone(), three], &[], 12).unwrap(), vec![q2]);
    assert!(independence_filter(&[Expr::zero()], &[], 12).unwrap().is_empty());
    let b = load("bilocal").unwrap();
    let e = |s: &str| parse_expr(s, &b).unwrap();
    let got = independence_filter(&[e("ux1*ux2")], &[e("ux1*ux1"), e("ux2*ux2")], 12).unwrap();
    assert_eq!(got.len(), 1);
}

use pyvfc::{gl_betti, haefliger_table, partition, verify, vey_basis, weil_betti, Cocycle, Form, VectorField};

#[test]
fn tables() {
    assert_eq!(weil_betti(1).into_iter().collect::<Vec<_>>(), vec![(0, 1), (3, 1)]);
    assert_eq!(vey_basis(2, 5), vec!["u1 | c1^2", "u1 | c2"]);
    assert_eq!(partition(6), 11);
    let t = haefliger_table(3, None).unwrap();
    assert_eq!((t[&4], t[&5]), (4, 12));
    assert_eq!(gl_betti(1), vec![1, 1]);
}

#[test]
fn fields_and_forms() {
    let x = VectorField::basis(vec![1, 0], 1, "torus").unwrap();
    let z = VectorField::basis(vec![2, -1], 1, "torus").unwrap();
    let want = VectorField::new(vec![vec![(vec![3, -1], "1".into())], vec![]], "torus").unwrap();
    assert!(x.bracket(&z).unwrap().__eq__(&want));
    assert!(VectorField::basis(vec![1], 0, "torus").is_err());
    let f = Form::monomial(vec![1, 0], vec![2], "1", "torus").unwrap();
    assert!(!f.is_exact() && f.d().is_exact());
    let c = Cocycle::new("psibar", 2, 2, "torus").unwrap();
    assert_eq!(c.evaluate(vec![x, z]).unwrap(), "[-4/3 * t^(3,-1) κ_2]");
}

#[test]
fn verify_json() {
    let j = verify("extensions", 1, "torus", 2, 10, 7, 500_000, false, false).unwrap();
    assert!(j.contains("\"failed\": 0"));
    assert!(verify("bogus", 1, "torus", 2, 10, 7, 500_000, false, false).is_err());
}

use cycletrace::covering::{
    fiber_count, Branch, Component, Covering, FiberCount, ImplicitCovering, ParametricCovering, Scale, Uniformization,
};
use cycletrace::flatness::{
    certify_agf, certify_covering, check_degree_constancy, weight_search, Bounds, ComponentData, FamilyComponent,
    Stratum, VerdictKind, WeightedFamily,
};
use cycletrace::fundclass::trace_via_class;
use cycletrace::poly::{parse_poly, parse_ratfun, q, Poly, RationalFunction, VarTable};
use cycletrace::traceforms::{parse_form, trace_form};

const SPADE: [&str; 10] = [
    "x2^2 - 4*x1*x3",
    "z1^2 - x1*y1",
    "y2^2 - 4*y1*y3",
    "z3^2 - x3*y3",
    "4*z1*z3 - x2*y2",
    "x1*y2 + x2*y1 - 2*z1*z2",
    "2*z2*z3 - x2*y3 - x3*y2",
    "x2*z2 - 2*x1*z3 - 2*x3*z1",
    "y2*z2 - 2*y1*z3 - 2*y3*z1",
    "x1*y3 + x2*y2 + x3*y1 - 2*z1*z3 - z2^2",
];

fn ten() -> (VarTable, WeightedFamily) {
    let t = VarTable::from_names(&[
        "x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3", "t", "u", "v", "a", "b", "c", "d",
    ])
    .unwrap();
    let p = |s: &str| parse_poly(s, &t).unwrap();
    let scale = Scale::new((0..9).collect(), vec![9], vec![10, 11], SPADE.iter().map(|s| p(s)).collect()).unwrap();
    let images = ["a^2", "2*a*b", "b^2", "c^2", "2*c*d", "d^2", "a*c", "a*d + b*c", "b*d"];
    let u = Uniformization::new(vec![12, 13, 14, 15], (0..9).collect(), images.iter().map(|s| p(s)).collect()).unwrap();
    let branches = vec![
        Branch::from_polys(vec![p("a*t + b"), p("c*t + d")]),
        Branch::from_polys(vec![p("-a*t - b"), p("-c*t - d")]),
    ];
    let comp = FamilyComponent { weight: 1, stratum: None, data: ComponentData::Parametric(branches) };
    let mut f = WeightedFamily::new(scale, vec![comp]);
    f.uniformization = Some(u);
    (t, f)
}

fn whitney() -> (VarTable, WeightedFamily) {
    let t = VarTable::from_names(&["a", "b", "c", "t", "u", "v", "tau"]).unwrap();
    let r = |s: &str| parse_ratfun(s, &t).unwrap();
    let scale = Scale::new(vec![0, 1, 2], vec![3], vec![4, 5], vec![r("a^2 - c*b^2").num().clone()]).unwrap();
    let branches = vec![Branch(vec![r("a*t/b"), r("b")]), Branch(vec![r("-a*t/b"), r("-b")])];
    let comp = FamilyComponent { weight: 1, stratum: None, data: ComponentData::Parametric(branches) };
    (t, WeightedFamily::new(scale, vec![comp]))
}

fn rf(t: &VarTable, s: &str) -> RationalFunction {
    parse_ratfun(s, t).unwrap()
}

#[test]
fn cone_routes_agree() {
    let t = VarTable::from_names(&["x", "y", "z", "u", "v", "p", "q"]).unwrap();
    let p = |s: &str| parse_poly(s, &t).unwrap();
    let scale = Scale::new(vec![0, 1, 2], vec![], vec![3, 4], vec![p("x*y - z^2")]).unwrap();
    let implicit = ImplicitCovering::new(scale.clone(), vec![p("u^2 - x"), p("v^2 - y"), p("u*v - z")]).unwrap();
    let u = Uniformization::new(vec![5, 6], vec![0, 1, 2], vec![p("p^2"), p("q^2"), p("p*q")]).unwrap();
    let comp = Component {
        weight: 1,
        base_ideal: scale.base_ideal.clone(),
        branches: vec![Branch::from_polys(vec![p("p"), p("q")]), Branch::from_polys(vec![p("-p"), p("-q")])],
    };
    let param = ParametricCovering::uniformized(scale.clone(), vec![comp], u).unwrap();
    for (h, want) in [("u", "0"), ("v", "0"), ("u^2", "2*x"), ("v^2", "2*y"), ("u*v", "2*z")] {
        assert_eq!(implicit.trace0(&p(h)).unwrap(), rf(&t, want), "{h}");
        assert_eq!(param.trace0(&p(h)).unwrap(), rf(&t, want), "{h}");
    }
    let ci = ImplicitCovering::new(scale, vec![p("u^2 - x"), p("x*v - z*u")]).unwrap();
    for h in cycletrace::covering::fiber_monomials(&[3, 4], 4) {
        let h = Poly::monomial(h);
        assert_eq!(trace_via_class(&ci, &h).unwrap(), implicit.trace0(&h).unwrap());
    }
}

#[test]
fn whitney_values_and_verdict() {
    let (t, f) = whitney();
    let Covering::Parametric(c) = f.covering().unwrap() else { panic!() };
    let p = |s: &str| parse_poly(s, &t).unwrap();
    assert_eq!(c.trace0(&p("u^2")).unwrap(), rf(&t, "2*c*t^2"));
    assert_eq!(c.trace0(&p("v^2")).unwrap(), rf(&t, "2*b^2"));
    assert_eq!(c.trace0(&p("u*v")).unwrap(), rf(&t, "2*a*t"));
    let w = |s: &str| parse_form(s, &t).unwrap();
    assert_eq!(trace_form(&c, &w("u*du")).unwrap(), w("2*c*t*dt"));
    assert!(trace_form(&c, &w("v*dv")).unwrap().is_zero());
    assert_eq!(trace_form(&c, &w("u*dv - v*du")).unwrap(), w("-2*a*dt"));
    let v = certify_agf(&f, Bounds::defaults(&Covering::Parametric(c))).unwrap();
    assert_eq!(v.kind, VerdictKind::AgfCertified { form_degree: 1, monomial_degree: 4 });
    assert!(v.witness.is_none());
}

#[test]
fn whitney_complete_intersection_class() {
    let (t, f) = whitney();
    let p = |s: &str| parse_poly(s, &t).unwrap();
    let ci = ImplicitCovering::new(f.scale.clone(), vec![p("v^2 - b^2"), p("b^2*u - a*t*v")]).unwrap();
    let Covering::Parametric(c) = f.covering().unwrap() else { panic!() };
    for h in cycletrace::covering::fiber_monomials(&[4, 5], 4) {
        let h = Poly::monomial(h);
        assert!(f.scale.base_field().equal(&trace_via_class(&ci, &h).unwrap(), &c.trace0(&h).unwrap()));
    }
}

#[test]
fn whitney_base_change_stays_analytic() {
    let (t, f) = whitney();
    let Covering::Parametric(c) = f.covering().unwrap() else { panic!() };
    let p = |s: &str| parse_poly(s, &t).unwrap();
    for arc in [["0", "tau", "0"], ["2*tau", "tau", "4"]] {
        let gamma: Vec<Poly> = arc.iter().map(|s| p(s)).collect();
        let moved = c.base_change(vec![6], vec![], &gamma).unwrap();
        let cov = Covering::Parametric(moved);
        let v = certify_covering(&cov, Bounds::defaults(&cov)).unwrap();
        assert!(matches!(v.kind, VerdictKind::AgfCertified { .. }), "{arc:?}");
    }
}

#[test]
fn ten_relations_continuous_only() {
    let (t, f) = ten();
    let c = f.covering().unwrap();
    let v = certify_agf(&f, Bounds::defaults(&c)).unwrap();
    assert_eq!(v.kind, VerdictKind::ContinuousOnlyEvidence);
    let w = v.witness.unwrap();
    assert_eq!(w.coefficient, rf(&t, "z1*x2/x1"));
    assert_eq!(w.relation.unwrap().display("s", &t), "s^2 - 4*x3*y1");
    let Covering::Parametric(pc) = c else { panic!() };
    let tr = trace_form(&pc, &parse_form("u*dv", &t).unwrap()).unwrap();
    assert_eq!(tr.coefficient(&[9]), rf(&t, "2*z1*t + z1*x2/x1"));
}

#[test]
fn cartan_fiber_counts() {
    let t = VarTable::from_names(&["x", "y", "z", "u", "v"]).unwrap();
    let p = |s: &str| parse_poly(s, &t).unwrap();
    let scale = Scale::new(vec![0, 1, 2], vec![], vec![3, 4], vec![p("x^3 - z*(x^2 - y^2)")]).unwrap();
    let c = ImplicitCovering::new(scale, vec![p("x - u*(u^2 - v^2)"), p("y - v*(u^2 - v^2)"), p("z - u^3")]).unwrap();
    let count = |pt: [i64; 3]| fiber_count(&c, &pt.map(q), 11).unwrap().distinct;
    assert_eq!([count([0, 0, 0]), count([0, 0, 1]), count([0, 1, 0])], [1, 6, 3]);
    let generic = fiber_count(&c, &[q(1), q(0), q(1)], 11).unwrap();
    assert_eq!(generic, FiberCount { with_multiplicity: 3, distinct: 3 });
}

fn douady() -> WeightedFamily {
    let t = VarTable::from_names(&["x1", "x2", "z1", "z2", "z3", "z4"]).unwrap();
    let p = |s: &str| parse_poly(s, &t).unwrap();
    let ps = |v: &[&str]| v.iter().map(|s| p(s)).collect::<Vec<_>>();
    let scale = Scale::new(vec![0, 1], vec![], vec![2, 3, 4, 5], vec![p("x1*x2")]).unwrap();
    let triple = ps(&["z1*z2", "z1*z4", "z2*z3", "z3*z4", "z1 + z2", "z3 + z4", "x1"]);
    let comps = vec![
        FamilyComponent { weight: 1, stratum: Some(0), data: ComponentData::Implicit(triple) },
        FamilyComponent {
            weight: 1,
            stratum: Some(1),
            data: ComponentData::Implicit(ps(&["z1", "z3", "z2 - x1", "z4"])),
        },
        FamilyComponent {
            weight: 1,
            stratum: Some(1),
            data: ComponentData::Implicit(ps(&["z2", "z4", "z1 - x1", "z3"])),
        },
    ];
    let mut f = WeightedFamily::new(scale, comps);
    f.strata = vec![
        Stratum { gens: ps(&["x1"]), samples: vec![vec![q(0), q(1)], vec![q(0), q(0)]] },
        Stratum { gens: ps(&["x2"]), samples: vec![vec![q(1), q(0)], vec![q(0), q(0)]] },
    ];
    f
}

#[test]
fn douady_weights() {
    let mut f = douady();
    let untied = weight_search(&f, 6, 0).unwrap().unwrap();
    assert_eq!(untied.weights, vec![1, 1, 2]);
    f.groups = vec![vec![1, 2]];
    let tied = weight_search(&f, 6, 0).unwrap().unwrap();
    assert_eq!((tied.weights, tied.degree), (vec![2, 3, 3], 6));
    assert!(check_degree_constancy(&f.with_weights(&[2, 3, 3]).unwrap()).unwrap().constant);
}

#[test]
fn second_weights_example_has_no_solution() {
    let t = VarTable::from_names(&["x", "y", "t", "z"]).unwrap();
    let p = |s: &str| parse_poly(s, &t).unwrap();
    let scale = Scale::new(vec![0, 1, 2], vec![], vec![3], vec![p("t*y")]).unwrap();
    let comps = vec![
        FamilyComponent {
            weight: 1,
            stratum: Some(0),
            data: ComponentData::Implicit(vec![p("x^2 + y^2 - z^2"), p("t")]),
        },
        FamilyComponent { weight: 1, stratum: Some(1), data: ComponentData::Implicit(vec![p("x - z"), p("y")]) },
    ];
    let mut f = WeightedFamily::new(scale, comps);
    f.strata = vec![
        Stratum { gens: vec![p("t")], samples: vec![vec![q(1), q(1), q(0)], vec![q(1), q(0), q(0)]] },
        Stratum { gens: vec![p("y")], samples: vec![vec![q(1), q(0), q(1)], vec![q(1), q(0), q(0)]] },
    ];
    assert_eq!(weight_search(&f, 8, 0).unwrap(), None);
}

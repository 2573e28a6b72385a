use chiral_core::equivariant::{build_complex, TensorAlgebra, WeilModel};
use chiral_core::lie::LieAlgebra;
use chiral_core::rational::Q;
use chiral_core::vertex::{Family, Grade, State};
use chiral_core::weil::WeilAlgebra;
use proptest::prelude::*;

const FAMILIES: [Family; 4] = [Family::B, Family::C, Family::Beta, Family::Gamma];

fn small_q() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Q::new(n, d))
}

fn nonzero_q() -> impl Strategy<Value = Q> {
    small_q().prop_filter("nonzero", |q| !q.is_zero())
}

/// A homogeneous field: a generator, its derivative, or a Wick pair.
fn field(w: &WeilAlgebra, spec: (usize, usize, usize, usize, u8)) -> State {
    let (f1, i1, f2, i2, shape) = spec;
    let a = w.gen(FAMILIES[f1], i1);
    let b = w.gen(FAMILIES[f2], i2);
    match shape {
        0 => a,
        1 => w.gs.derivative(&a),
        _ => w.gs.wick(&a, &b),
    }
}

fn spec() -> impl Strategy<Value = (usize, usize, usize, usize, u8)> {
    (0usize..4, 0usize..3, 0usize..4, 0usize..3, 0u8..3)
}

fn sl2_w() -> WeilAlgebra {
    WeilAlgebra::with_default_form(LieAlgebra::sl2())
}

fn weight(w: &WeilAlgebra, s: &State) -> i64 {
    w.gs.grade_of(s).unwrap().weight as i64
}

/// Inverse of a 3x3 rational matrix by the adjugate.
fn inverse3(p: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let m = |i: usize, j: usize| &p[i % 3][j % 3];
    let cof = |i: usize, j: usize| &(m(i + 1, j + 1) * m(i + 2, j + 2)) - &(m(i + 1, j + 2) * m(i + 2, j + 1));
    let det = (0..3).fold(Q::ZERO, |acc, j| &acc + &(m(0, j) * &cof(0, j)));
    if det.is_zero() {
        return None;
    }
    Some((0..3).map(|i| (0..3).map(|j| &cof(j, i) / &det).collect()).collect())
}

/// sl₂ in the basis `e'_i = Σ_a p[a][i] e_a`.
fn sl2_in_basis(p: &[Vec<Q>]) -> Option<LieAlgebra> {
    let pinv = inverse3(p)?;
    let base = LieAlgebra::sl2();
    let mut sc = vec![vec![vec![Q::ZERO; 3]; 3]; 3];
    for (i, j, a, b, k, l) in itertools(3) {
        let coeff = &(&(&p[a][i] * &p[b][j]) * base.c(a, b, k)) * &pinv[l][k];
        sc[i][j][l] = &sc[i][j][l] + &coeff;
    }
    LieAlgebra::from_structure_constants("sl2'", &["u", "v", "w"], sc).ok()
}

fn itertools(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize, usize, usize)> {
    (0..n.pow(6)).map(move |x| (x % n, x / n % n, x / n.pow(2) % n, x / n.pow(3) % n, x / n.pow(4) % n, x / n.pow(5) % n))
}

fn basic_dims(w: WeilAlgebra, weight: u32) -> Vec<usize> {
    let t = TensorAlgebra::point(w);
    let c = build_complex(&WeilModel, &t, weight, 0, 0..=4).unwrap();
    c.rows().unwrap().iter().map(|r| r.dim).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circle_products_are_bilinear(a in spec(), b in spec(), c in spec(), s in small_q(), n in -1i64..3) {
        let w = sl2_w();
        let (a, b, c) = (field(&w, a), field(&w, b), field(&w, c));
        let left = w.gs.circle(&a.plus(&b.scaled(&s)), &c, n);
        let mut want = w.gs.circle(&a, &c, n);
        want.add_scaled(&w.gs.circle(&b, &c, n), &s);
        prop_assert_eq!(&left, &want);
        let right = w.gs.circle(&c, &a.plus(&b.scaled(&s)), n);
        let mut want = w.gs.circle(&c, &a, n);
        want.add_scaled(&w.gs.circle(&c, &b, n), &s);
        prop_assert_eq!(right, want);
    }

    #[test]
    fn circle_products_respect_the_grading(a in spec(), b in spec(), n in -1i64..3) {
        let w = sl2_w();
        let (a, b) = (field(&w, a), field(&w, b));
        let out = w.gs.circle(&a, &b, n);
        if !out.is_zero() {
            let (ga, gb, go) = (w.gs.grade_of(&a).unwrap(), w.gs.grade_of(&b).unwrap(), w.gs.grade_of(&out));
            let go = go.expect("circle product of homogeneous fields is homogeneous");
            prop_assert_eq!(go.weight as i64, weight(&w, &a) + weight(&w, &b) - n - 1);
            prop_assert_eq!(go.degree, ga.degree + gb.degree);
            prop_assert_eq!(go.charge, ga.charge + gb.charge);
        }
    }

    #[test]
    fn derivative_raises_weight_by_one(a in spec()) {
        let w = sl2_w();
        let a = field(&w, a);
        let da = w.gs.derivative(&a);
        prop_assert_eq!(weight(&w, &da), weight(&w, &a) + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn basic_dimensions_ignore_the_basis(entries in proptest::collection::vec(small_q(), 9)) {
        let p: Vec<Vec<Q>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        prop_assume!(inverse3(&p).is_some());
        let lie = sl2_in_basis(&p).expect("a change of basis preserves the Lie axioms");
        for m in 0..=1 {
            prop_assert_eq!(
                basic_dims(WeilAlgebra::with_default_form(lie.clone()), m),
                basic_dims(sl2_w(), m)
            );
        }
    }

    #[test]
    fn rescaling_the_form_keeps_the_answer(s in nonzero_q()) {
        let lie = LieAlgebra::sl2();
        let form = lie.killing_form().scaled(&s);
        let w = || WeilAlgebra::new(lie.clone(), Some(form.clone()));
        prop_assert_eq!(basic_dims(w(), 1), basic_dims(sl2_w(), 1));
        let t = TensorAlgebra::point(w());
        let g = t.weil.gamma_dgamma().unwrap();
        let c = build_complex(&WeilModel, &t, 1, 0, 3..=5).unwrap();
        prop_assert!(c.class_of(4, &g).unwrap().iter().any(|x| !x.is_zero()));
    }
}

#[test]
fn grade_of_zero_is_none() {
    assert_eq!(sl2_w().gs.grade_of(&State::zero()), None);
    assert_eq!(sl2_w().gs.grade_of(&State::vacuum()), Some(Grade::new(0, 0)));
}

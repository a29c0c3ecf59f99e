use flatperm::bijections::{map_23_1_to_32_1, partition_to_23_1_avoider};
use flatperm::closed_forms::{avoiders, average_occurrences};
use flatperm::recurrences::distribution_table;
use flatperm::{BruteForce, CycleForm, Integer, MarkedPartition, PatternId, Poly, QPoly, Rational, Series};

#[test]
fn poly_is_generic_over_the_scalar() {
    let a: Poly<i64> = Poly::from_ints(&[1, 1]);
    assert_eq!((&a * &a).coeffs(), &[1, 2, 1]);
    let b: QPoly = Poly::from_ints(&[1, 1]);
    assert_eq!(b.pow(3).eval(&Integer::from(1)), Integer::from(8));
    let s: Series<f64> = Series::from_coeffs(vec![0.0, 1.0], 6);
    let e = s.exp().unwrap();
    assert!((e.coeffs()[3] - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn recurrence_brute_force_and_closed_forms_line_up() {
    let brute = BruteForce::default();
    for p in PatternId::RECURRENCE {
        let t = distribution_table(p, 6).unwrap();
        let g6 = t.get(6).unwrap();
        assert_eq!(g6, &brute.distribution(6, &p.vincular()).unwrap());
        assert_eq!(g6.coeff(0), avoiders(p, 6).unwrap());
        let total = g6.derivative().eval(&Integer::from(1));
        assert_eq!(average_occurrences(p, 6).unwrap() * Rational::from_integer(720.into()), Rational::from_integer(total));
    }
}

#[test]
fn string_forms_parse() {
    let p: MarkedPartition = "{3}*{5,4,2}".parse().unwrap();
    let c = partition_to_23_1_avoider(&p);
    assert_eq!(c, "(1,5,4,2)(3)".parse::<CycleForm>().unwrap());
    assert_eq!(map_23_1_to_32_1(&c).unwrap(), "(1,4,5,2)(3)".parse::<CycleForm>().unwrap());
    assert_eq!("31-2".parse::<PatternId>().unwrap(), PatternId::P31_2);
}

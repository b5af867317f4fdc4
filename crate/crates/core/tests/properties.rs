use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use toroidal_core::fan::{declared_table, Cone, IdealSheafModel};
use toroidal_core::field::Field;
use toroidal_core::hull::{hull_ideal, stratum_multiplicity};
use toroidal_core::monomial_ideal::{projection_family, MonomialIdeal};
use toroidal_core::poly::{parse_polynomial, ExponentVector, MonomialMap, Polynomial, VarTable};
use toroidal_core::resolve::{cone_multiplicities, resolve_sequence, MinMaxMult};
use toroidal_core::par::Execution;
use toroidal_core::trace::{ModelDocument, TraceDocument};
use toroidal_core::transform::controlled_transform;

const ARITY: usize = 4;

fn vars() -> Arc<VarTable> {
    let names: Vec<String> = ["x", "y", "u", "v"].iter().map(|s| s.to_string()).collect();
    declared_table(&names, &names[..2]).unwrap()
}

fn terms(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, ARITY), -4i64..=4), 0..=max_terms)
}

fn poly(field: Field, raw: &[(Vec<u32>, i64)]) -> Polynomial {
    Polynomial::from_terms(
        vars(),
        field,
        raw.iter().map(|(e, c)| (ExponentVector::new(e.clone()), field.from_i64(*c))).collect::<Vec<_>>(),
    )
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(7)), Just(Field::Prime(101))]
}

fn monomial_gens(arity: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0u32..=6, arity), 1..=5)
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boundary_decomposition_reconstructs(raw in terms(6, 4), field in field_strategy()) {
        let f = poly(field, &raw);
        prop_assume!(!f.is_zero());
        let boundary = [0usize, 1];
        let mut rebuilt: BTreeMap<Vec<u32>, String> = BTreeMap::new();
        for (e, fe) in f.boundary_decomposition(&boundary).unwrap() {
            prop_assert!(!fe.is_zero());
            for (r, c) in fe.terms() {
                let full = vec![e.get(0), e.get(1), r.get(0), r.get(1)];
                prop_assert!(rebuilt.insert(full, c.to_string()).is_none());
            }
        }
        let original: BTreeMap<Vec<u32>, String> =
            f.terms().map(|(e, c)| (e.as_slice().to_vec(), c.to_string())).collect();
        prop_assert_eq!(rebuilt, original);
    }

    #[test]
    fn monomial_substitution_is_a_ring_map(
        a in terms(4, 3),
        b in terms(4, 3),
        images in prop::collection::vec(prop::collection::vec(0u32..=2, ARITY), ARITY),
        field in field_strategy(),
    ) {
        let (f, g) = (poly(field, &a), poly(field, &b));
        let map = MonomialMap::new(vars(), vars(), images.into_iter().map(ExponentVector::new).collect()).unwrap();
        let s = |p: &Polynomial| p.substitute_monomial_map(&map).unwrap();
        prop_assert_eq!(s(&f.mul(&g).unwrap()), s(&f).mul(&s(&g)).unwrap());
        prop_assert_eq!(s(&f.add(&g).unwrap()), s(&f).add(&s(&g)).unwrap());
        prop_assert_eq!(s(&Polynomial::one(vars(), field)), Polynomial::one(vars(), field));
    }

    #[test]
    fn printing_then_parsing_is_identity(raw in terms(6, 5), field in field_strategy()) {
        let f = poly(field, &raw);
        let back = parse_polynomial(&f.to_string(), &vars(), field).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rational_coefficients_round_trip(num in -50i64..50, den in 1i64..20, e in prop::collection::vec(0u32..3, ARITY)) {
        let q = Field::Rational;
        let c = q.from_ratio(&num.into(), &den.into()).unwrap();
        let f = Polynomial::monomial(vars(), q, ExponentVector::new(e), c);
        prop_assert_eq!(parse_polynomial(&f.to_string(), &vars(), q).unwrap(), f);
    }

    #[test]
    fn ideal_membership_matches_brute_force(
        gens in monomial_gens(3),
        probe in prop::collection::vec(0u32..=8, 3),
    ) {
        let ideal = MonomialIdeal::minimal_generators(3, gens.iter().cloned().map(ExponentVector::new)).unwrap();
        let brute = gens.iter().any(|g| dominates(&probe, g));
        prop_assert_eq!(ideal.contains(&ExponentVector::new(probe)).unwrap(), brute);
        // Minimal generators form an antichain drawn from the input.
        let mins = ideal.to_arrays();
        for (i, a) in mins.iter().enumerate() {
            prop_assert!(gens.contains(a));
            for (j, b) in mins.iter().enumerate() {
                prop_assert!(i == j || !dominates(a, b));
            }
        }
    }

    #[test]
    fn multiplicity_is_monotone_and_projections_compatible(gens in monomial_gens(3)) {
        let ideal = MonomialIdeal::minimal_generators(3, gens.into_iter().map(ExponentVector::new)).unwrap();
        for small in 0u32..8 {
            for big in 0u32..8 {
                if small & !big != 0 {
                    continue;
                }
                let pos = |mask: u32| (0..3).filter(|i| mask & (1 << i) != 0).collect::<Vec<usize>>();
                prop_assert!(
                    ideal.multiplicity_along(&pos(small)).unwrap() <= ideal.multiplicity_along(&pos(big)).unwrap()
                );
            }
        }
        prop_assert_eq!(projection_family(&ideal).unwrap().compatibility_violation(), None);
    }

    #[test]
    fn hull_preserves_stratum_multiplicities(gens in prop::collection::vec(terms(4, 4), 1..=3), field in field_strategy()) {
        let polys: Vec<Polynomial> = gens.iter().map(|g| poly(field, g)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!polys.is_empty());
        let model = IdealSheafModel::initial(vars(), polys.clone(), field).unwrap();
        let chart = model.charts().next().unwrap();
        let hull = hull_ideal(&polys, &[0, 1]).unwrap();
        prop_assert_eq!(chart.hull(), &hull);
        for face in chart.cone().faces() {
            let pos = chart.positions_of(&face).unwrap();
            prop_assert_eq!(stratum_multiplicity(chart, &face).unwrap(), hull.multiplicity_along(&pos).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Blowing up randomly chosen maximal-multiplicity cones keeps the fan
    /// smooth, and each blow-up of a `k`-cone lying in `c` maximal cones adds
    /// `(k - 1) · c` charts.
    #[test]
    fn subdivision_keeps_the_fan_smooth(
        gens in monomial_gens(3),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..10),
    ) {
        let mut model = monomial_xyz(&gens);
        for pick in picks {
            let mults = cone_multiplicities(&model, Execution::Sequential).unwrap();
            let top = mults.values().copied().max().unwrap_or(0);
            if top == 0 {
                break;
            }
            let candidates: Vec<&Cone> = mults.iter().filter(|(_, m)| **m == top).map(|(c, _)| c).collect();
            let center = pick.get(&candidates);
            let containing = model.charts_containing(center).count();
            let expected = model.chart_count() + (center.len() - 1) * containing;
            let (next, step) = controlled_transform(&model, center).unwrap();
            prop_assert_eq!(step.multiplicity, top);
            prop_assert_eq!(step.children.len(), center.len() * containing);
            prop_assert_eq!(next.chart_count(), expected);
            prop_assert!(next.is_smooth());
            model = next;
        }
    }

    #[test]
    fn transform_divides_exactly_and_commutes_with_hulls(gens in monomial_gens(3)) {
        let model = monomial_xyz(&gens);
        let mults = cone_multiplicities(&model, Execution::Sequential).unwrap();
        let top = mults.values().copied().max().unwrap_or(0);
        prop_assume!(top > 0);
        for (cone, _) in mults.iter().filter(|(_, m)| **m == top) {
            let entry = toroidal_core::verify::check_hull_commutation(&model, cone).unwrap();
            prop_assert!(entry.passed, "{:?}", entry);
        }
    }

    #[test]
    fn traces_are_byte_reproducible_and_replayable(gens in monomial_gens(2), extra in terms(2, 2)) {
        let mut strings: Vec<String> = gens.iter().map(|e| format!("x^{}*y^{}", e[0], e[1])).collect();
        let p = poly(Field::Rational, &extra);
        if !p.is_zero() {
            strings.push(format!("x*y*({p})"));
        }
        let doc = ModelDocument {
            variables: vec!["x".into(), "y".into(), "u".into(), "v".into()],
            boundary: vec!["x".into(), "y".into()],
            generators: strings,
            field: "q".into(),
        };
        let model = doc.to_model().unwrap();
        let a = TraceDocument::new(&doc, &resolve_sequence(&model, &MinMaxMult, 500).unwrap()).to_json();
        let b = TraceDocument::new(&doc, &resolve_sequence(&model, &MinMaxMult, 500).unwrap()).to_json();
        prop_assert_eq!(&a, &b);
        let back = TraceDocument::from_json(&a).unwrap();
        prop_assert!(back.replay().is_ok());
    }
}

fn monomial_xyz(gens: &[Vec<u32>]) -> IdealSheafModel {
    let exps: Vec<String> = gens.iter().map(|e| format!("x^{}*y^{}*z^{}", e[0], e[1], e[2])).collect();
    let refs: Vec<&str> = exps.iter().map(|s| s.as_str()).collect();
    IdealSheafModel::from_strings(&["x", "y", "z"], &["x", "y", "z"], &refs, Field::Rational).unwrap()
}

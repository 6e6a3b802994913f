//! Certification of the counting machinery against independent routes:
//! brute-force enumeration, the graded fixed-point solver, the closed forms,
//! and the Catalan-form rational expansion.

use num_bigint::{BigInt, BigUint};
use rnacomb::{
    catalan_form_counts, enumerate, enumerate_structures, r1_count, solve_functional_equation,
    waterman_lambda2_count, ArcCountTable, StructureClass,
};

fn paper_classes() -> Vec<StructureClass> {
    let mut out = Vec::new();
    for lambda in 1..=4 {
        for r in 1..=3 {
            out.push(StructureClass::new(lambda, r).unwrap());
        }
    }
    out
}

#[test]
fn tables_equal_brute_force_up_to_12() {
    for class in paper_classes() {
        let table = ArcCountTable::build(class, 12);
        for n in 0..=12usize {
            let brute = enumerate(class, n).unwrap();
            for l in 0..=n / 2 {
                assert_eq!(
                    table.s_row(n)[l],
                    BigUint::from(brute[&l]),
                    "class {class} n={n} l={l}"
                );
            }
        }
    }
}

#[test]
fn reducible_tables_equal_brute_force_up_to_10() {
    for class in paper_classes() {
        let table = ArcCountTable::build(class, 10);
        for n in 0..=10usize {
            let mut by_l = vec![0u64; n / 2 + 1];
            for s in enumerate_structures(class, n).unwrap() {
                let has_rainbow = n >= 2 && s.arcs().contains(&(1, n));
                if !has_rainbow {
                    by_l[s.arc_count()] += 1;
                }
            }
            for l in 0..=n / 2 {
                assert_eq!(
                    table.t_row(n)[l],
                    BigUint::from(by_l[l]),
                    "class {class} n={n} l={l}"
                );
            }
        }
    }
}

#[test]
fn fixed_point_solver_equals_production_table_to_120() {
    for class in paper_classes() {
        let table = ArcCountTable::build(class, 120);
        let fp = solve_functional_equation(class, 120);
        for n in 0..=120usize {
            assert_eq!(fp.s[n], table.s_row(n), "S row {n} of {class}");
            assert_eq!(fp.t[n], table.t_row(n), "T row {n} of {class}");
        }
    }
}

#[test]
fn r1_closed_form_matches_tables_to_60() {
    for lambda in 1..=4u32 {
        let class = StructureClass::new(lambda, 1).unwrap();
        let table = ArcCountTable::build(class, 60);
        for n in 0..=60usize {
            assert_eq!(table.s_row(n)[0], BigUint::from(1u32), "empty structure at n={n}");
            for l in 1..=n / 2 {
                assert_eq!(
                    table.s_row(n)[l],
                    r1_count(lambda, n as u64, l as u64).unwrap(),
                    "lambda={lambda} n={n} l={l}"
                );
            }
        }
    }
}

#[test]
fn waterman_closed_form_matches_table_to_60() {
    let class = StructureClass::new(2, 1).unwrap();
    let table = ArcCountTable::build(class, 60);
    for n in 0..=60usize {
        for l in 1..=n / 2 {
            assert_eq!(
                table.s_row(n)[l],
                waterman_lambda2_count(n as u64, l as u64).unwrap(),
                "n={n} l={l}"
            );
        }
    }
}

#[test]
fn catalan_form_matches_tables_to_30() {
    for class in paper_classes() {
        let table = ArcCountTable::build(class, 30);
        let cat = catalan_form_counts(class, 30);
        for n in 0..=30usize {
            for l in 0..=n / 2 {
                assert!(cat[n][l].is_integer(), "{class} ({n},{l}) not an integer");
                assert_eq!(
                    cat[n][l].to_integer(),
                    BigInt::from(table.s_row(n)[l].clone()),
                    "{class} ({n},{l})"
                );
            }
        }
    }
}

#[test]
fn every_enumerated_structure_is_valid() {
    for class in paper_classes() {
        for n in 0..=9usize {
            for s in enumerate_structures(class, n).unwrap() {
                assert!(s.validate(class).is_empty());
            }
        }
    }
}

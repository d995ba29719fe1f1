use num_integer::Integer;
use plumb_core::knot::{negative_continued_fraction, validate_knot_graph, AlgebraicKnot};
use plumb_core::{Lattice, PlumbingGraph, Rational};
use proptest::prelude::*;

fn newton_pairs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    let first = (2i64..6, 1i64..12).prop_filter("first pair", |&(p, q)| q > p && p.gcd(&q) == 1);
    let later = (2i64..4, 1i64..6).prop_filter("coprime", |&(p, q)| p.gcd(&q) == 1);
    (first, prop::collection::vec(later, 0..2)).prop_map(|(f, rest)| std::iter::once(f).chain(rest).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_and_alexander(pairs in newton_pairs()) {
        let k = AlgebraicKnot::new(&pairs).unwrap();
        let mu = k.milnor();
        let s = k.semigroup();
        prop_assert_eq!(s.gaps.len() as i64 * 2, mu);
        prop_assert_eq!(s.frobenius, mu - 1);
        prop_assert!(s.is_symmetric());

        let delta = k.alexander().unwrap();
        prop_assert_eq!(delta.len() as i64 - 1, mu);
        prop_assert_eq!(delta.iter().sum::<i128>(), 1);
        let slope: i128 = delta.iter().enumerate().map(|(i, c)| i as i128 * c).sum();
        prop_assert_eq!(Rational::from_integer(slope), Rational::new(i128::from(mu), 2));
        let rev: Vec<i128> = delta.iter().rev().copied().collect();
        prop_assert_eq!(&rev, &delta);

        // Δ(t)/(1 - t) is the generating series of the semigroup
        let mut run = 0i128;
        for l in 0..=mu + 3 {
            run += delta.get(l as usize).copied().unwrap_or(0);
            let member = in_span(l, &k.semigroup_generators());
            prop_assert_eq!(run, i128::from(member), "at {}", l);
        }

        prop_assert_eq!(k.monodromy_part_by_division().unwrap(), k.monodromy_polynomial_part());
        let kg = k.resolution_graph().unwrap();
        prop_assert!(validate_knot_graph(&k, &kg).unwrap().passed());
    }
}

/// `l` is a nonnegative combination of `gens`.
fn in_span(l: i64, gens: &[i64]) -> bool {
    let mut reach = vec![false; l as usize + 1];
    reach[0] = true;
    for i in 1..=l as usize {
        reach[i] = gens.iter().any(|&g| g as usize <= i && reach[i - g as usize]);
    }
    reach[l as usize]
}

#[test]
fn small_knots() {
    let t = AlgebraicKnot::new(&[(2, 3)]).unwrap();
    assert_eq!(t.alexander().unwrap(), vec![1, -1, 1]);
    assert_eq!(t.semigroup().gaps, vec![1]);
    let f = AlgebraicKnot::new(&[(2, 5)]).unwrap();
    assert_eq!(f.alexander().unwrap(), vec![1, -1, 1, -1, 1]);
    assert_eq!(f.semigroup().gaps, vec![1, 3]);
    assert!(AlgebraicKnot::new(&[(3, 2)]).is_err());
    assert!(AlgebraicKnot::new(&[(2, 4)]).is_err());
    assert!(AlgebraicKnot::parse("2,3;x").is_err());
}

fn star(center: i64, legs: &[Vec<i64>]) -> PlumbingGraph {
    let mut vs = vec![("c".to_string(), center)];
    let mut es = Vec::new();
    for (i, leg) in legs.iter().enumerate() {
        let mut prev = "c".to_string();
        for (j, &k) in leg.iter().enumerate() {
            let id = format!("l{i}_{j}");
            vs.push((id.clone(), -k));
            es.push((prev, id.clone()));
            prev = id;
        }
    }
    PlumbingGraph::from_parts(vs, es).unwrap()
}

fn chains(max_len: usize, max_k: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for c in &frontier {
            for k in 2..=max_k {
                let mut d = c.clone();
                d.push(k);
                next.push(d);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.retain(|c| !c.is_empty());
    out
}

/// Every two-legged star with a `(-1)` center, unimodular and negative
/// definite, whose center has `-(E*_c, E*_c) = 10`: this should single out
/// the graph of the (2,5) torus knot.
#[test]
fn brute_force_two_five() {
    let cs = chains(4, 5);
    let mut found = Vec::new();
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i..] {
            let g = star(-1, &[a.clone(), b.clone()]);
            if g.determinant().unwrap() != 1 || !g.validate().negative_definite {
                continue;
            }
            let l = Lattice::new(&g).unwrap();
            if -l.pairing(0, 0) == Rational::from_integer(10) {
                found.push(g);
            }
        }
    }
    assert_eq!(found.len(), 1);
    let kg = AlgebraicKnot::new(&[(2, 5)]).unwrap().resolution_graph().unwrap();
    assert!(found[0].is_isomorphic(&kg.graph));
    assert!(found[0].is_isomorphic(&star(-1, &[vec![2], vec![3, 2]])));
}

/// For one Newton pair `(p, q)` the graph is a `(-1)`-vertex with the chains
/// of `p/ω_1` and `q/ω_2`, where `pq - ω_1 q - ω_2 p = 1`.
#[test]
fn one_pair_chains() {
    for p in 2..8i64 {
        for q in p + 1..14 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let w1 = (1..p).find(|w| (w * q + 1) % p == 0).unwrap();
            let w2 = (p * q - w1 * q - 1) / p;
            assert_eq!(p * q - w1 * q - w2 * p, 1);
            let legs = [negative_continued_fraction(p, w1).unwrap(), negative_continued_fraction(q, w2).unwrap()];
            let kg = AlgebraicKnot::new(&[(p, q)]).unwrap().resolution_graph().unwrap();
            assert!(kg.graph.is_isomorphic(&star(-1, &legs)), "({p},{q})");
        }
    }
}

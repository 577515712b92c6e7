mod common;

use efgc_core::cutset::{solve_cycle, solve_tree_gc_bounded_degree, solve_tree_vdgc, solve_with_cut_set, CutSetError};
use efgc_core::few_edges::solve_few_edges;
use efgc_core::format::parse_instance;
use efgc_core::generators::{
    blowup_gc_to_vdgc, gen_ladder_tw2, gen_matching_plus_two, gen_star_from_numpart, numpart_dp,
};
use efgc_core::model::{normalize, Instance, Variant};
use efgc_core::oracle::solve_explicit_oracle;
use efgc_core::rational::{int, ratio, Rational};
use efgc_core::{solve, verify_assignment, AgentId, EdgeId, SolverSelection, Verdict};
use rand::Rng;

fn instance(graph: efgc_core::Graph, rows: Vec<Vec<Rational>>, variant: Variant) -> Instance {
    let names = (1..=rows.len()).map(|i| format!("a{i}")).collect();
    normalize(&Instance::new(graph, names, rows, variant).unwrap()).unwrap()
}

fn assert_valid(inst: &Instance, v: &Verdict) {
    if let Verdict::Yes(a) = v {
        let r = verify_assignment(inst, a);
        assert!(r.is_valid(), "{:?}", r.failures);
    }
}

fn lengths(v: &Verdict, a: usize) -> Rational {
    v.assignment().unwrap().pieces[a].edge_pieces.iter().map(|p| p.length()).sum()
}

#[test]
fn star_with_two_wholes_and_a_leaf() {
    let rows = vec![
        vec![ratio(1, 2), ratio(1, 2), int(0)],
        vec![int(0), int(0), int(1)],
    ];
    for variant in [Variant::Gc, Variant::Vdgc] {
        let inst = instance(common::star(3), rows.clone(), variant);
        let solvers: Vec<Verdict> = vec![
            solve_few_edges(&inst),
            solve_explicit_oracle(&inst),
            solve(&inst, SolverSelection::Auto).unwrap(),
        ];
        for v in &solvers {
            assert!(v.is_yes());
            assert_valid(&inst, v);
        }
    }
}

#[test]
fn uniform_agents_on_one_edge_get_equal_shares() {
    let g = common::path(1);
    for n in 2..=3 {
        let inst = instance(g.clone(), vec![vec![int(1)]; n], Variant::Gc);
        for v in [
            solve_tree_gc_bounded_degree(&inst).unwrap(),
            solve_explicit_oracle(&inst),
            solve_few_edges(&inst),
        ] {
            for a in 0..n {
                assert_eq!(lengths(&v, a), ratio(1, n as i64));
            }
        }
    }
}

#[test]
fn cut_set_on_a_path() {
    let inst = instance(
        common::path(2),
        vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        Variant::Gc,
    );
    assert!(solve_with_cut_set(&inst, &[EdgeId(1)]).unwrap().is_yes());
    let star = gen_star_from_numpart(&[1, 1, 1]).unwrap();
    for cut in [vec![], vec![EdgeId(0)], vec![EdgeId(1)], vec![EdgeId(2)]] {
        assert_eq!(solve_with_cut_set(&star, &cut), Ok(Verdict::No));
    }
}

#[test]
fn graph_shape_errors() {
    let tri = instance(common::cycle(3), vec![vec![int(1); 3]; 2], Variant::Vdgc);
    assert_eq!(solve_tree_vdgc(&tri), Err(CutSetError::NotTree));
    let path = instance(common::path(2), vec![vec![int(1); 2]; 2], Variant::Gc);
    assert_eq!(solve_cycle(&path), Err(CutSetError::NotCycle));
    let g = parse_instance(
        "efgc-instance v1\nvariant gc\nvertices a b c d\nedge e1 a b\nedge e2 b c\nedge e3 a c\nedge e4 c d\nagent x e1=1 e2=1 e3=1 e4=1\n",
    )
    .unwrap();
    assert_eq!(solve_with_cut_set(&g, &[]), Err(CutSetError::NotTreeOrCycle));
    assert!(matches!(solve_tree_vdgc(&path), Err(CutSetError::WrongVariant(_))));
}

#[test]
fn few_edges_matches_oracle() {
    let mut r = common::rng(11);
    for i in 0..120 {
        let variant = common::random_variant(&mut r);
        let n = r.gen_range(1..=3);
        let inst = if i % 3 == 0 {
            common::identical_instance(&mut r, common::star(3), n, variant)
        } else {
            let g = common::random_graph(&mut r, 3);
            common::random_instance(&mut r, g, n, variant)
        };
        let a = solve_few_edges(&inst);
        let b = solve_explicit_oracle(&inst);
        assert_eq!(a.is_yes(), b.is_yes(), "{inst:?}");
        assert_valid(&inst, &a);
        assert_valid(&inst, &b);
    }
}

#[test]
fn tree_gc_matches_oracle() {
    let mut r = common::rng(12);
    for i in 0..60 {
        let k = r.gen_range(1..=3);
        let n = r.gen_range(2..=3);
        let g = common::random_tree(&mut r, k);
        let inst = if i % 2 == 0 {
            common::identical_instance(&mut r, g, n, Variant::Gc)
        } else {
            common::random_instance(&mut r, g, n, Variant::Gc)
        };
        let a = solve_tree_gc_bounded_degree(&inst).unwrap();
        assert_eq!(a.is_yes(), solve_explicit_oracle(&inst).is_yes(), "{inst:?}");
        assert_valid(&inst, &a);
    }
}

#[test]
fn auto_agrees_with_few_edges() {
    let mut r = common::rng(13);
    for _ in 0..60 {
        let variant = common::random_variant(&mut r);
        let g = common::random_graph(&mut r, 3);
        let n = r.gen_range(1..=3);
        let inst = common::random_instance(&mut r, g, n, variant);
        let a = solve(&inst, SolverSelection::Auto).unwrap();
        assert_eq!(a.is_yes(), solve_few_edges(&inst).is_yes(), "{inst:?}");
        assert_valid(&inst, &a);
    }
}

#[test]
fn one_agent_takes_everything() {
    let mut r = common::rng(14);
    for _ in 0..10 {
        let variant = common::random_variant(&mut r);
        let g = common::random_graph(&mut r, 3);
        let inst = common::random_instance(&mut r, g, 1, variant);
        let v = solve(&inst, SolverSelection::Auto).unwrap();
        assert_valid(&inst, &v);
        assert_eq!(lengths(&v, 0), int(inst.graph().num_edges() as i64));
    }
}

#[test]
fn reductions_on_balanced_inputs() {
    for values in [vec![1, 2, 3], vec![1, 1, 1], vec![2, 2], vec![1, 1, 2], vec![3, 3, 2]] {
        let truth = numpart_dp(&values);
        let star = gen_star_from_numpart(&values).unwrap();
        assert_eq!(solve_tree_gc_bounded_degree(&star).unwrap().is_yes(), truth, "{values:?}");
        assert_eq!(solve_few_edges(&star).is_yes(), truth, "{values:?}");
        let m = gen_matching_plus_two(&values).unwrap();
        assert_eq!(solve_explicit_oracle(&m).is_yes(), truth, "{values:?}");
    }
    let l = gen_ladder_tw2(&[1, 1], Variant::Gc).unwrap();
    assert!(solve_explicit_oracle(&l).is_yes());
    let l = gen_ladder_tw2(&[2, 1, 1], Variant::Vdgc).unwrap();
    assert!(solve_explicit_oracle(&l).is_yes());
}

#[test]
fn a_dominant_value_is_yes_without_a_partition() {
    // One agent takes exactly half of the heavy edge from its far end.
    for values in [vec![3], vec![1, 2], vec![1, 1, 4]] {
        assert!(!numpart_dp(&values));
        let star = gen_star_from_numpart(&values).unwrap();
        let v = solve_tree_gc_bounded_degree(&star).unwrap();
        assert!(v.is_yes());
        assert_valid(&star, &v);
        let m = gen_matching_plus_two(&values).unwrap();
        assert!(solve_explicit_oracle(&m).is_yes());
    }
}

#[test]
fn blowup_keeps_the_star_verdicts() {
    let no = gen_star_from_numpart(&[1, 1, 1]).unwrap();
    let yes = instance(
        common::star(3),
        vec![vec![ratio(1, 2), ratio(1, 2), int(0)], vec![int(0), int(0), int(1)]],
        Variant::Gc,
    );
    for (inst, expect) in [(no, false), (yes, true)] {
        let b = blowup_gc_to_vdgc(&inst);
        assert_eq!(b.graph().num_vertices(), 12);
        assert_eq!(b.graph().num_edges(), 15);
        let v = solve_explicit_oracle(&b);
        assert_eq!(v.is_yes(), expect);
        assert_valid(&b, &v);
    }
}

#[test]
fn cycles_with_identical_agents() {
    for k in 3..=4 {
        for n in 2..=3 {
            let inst = instance(common::cycle(k), vec![vec![int(1); k]; n], Variant::Vdgc);
            let v = solve_cycle(&inst).unwrap();
            assert!(v.is_yes());
            assert_valid(&inst, &v);
            for a in 0..n {
                assert_eq!(lengths(&v, a), ratio(k as i64, n as i64));
            }
        }
    }
}

#[test]
fn witnesses_name_every_agent() {
    let inst = gen_star_from_numpart(&[1, 2, 3]).unwrap();
    let v = solve(&inst, SolverSelection::Auto).unwrap();
    let a = v.assignment().unwrap();
    assert_eq!(a.pieces.len(), 2);
    assert!(inst.agent_ids().all(|x| !a.piece(x).is_empty()));
    assert_eq!(inst.agent_name(AgentId(1)), "a2");
}

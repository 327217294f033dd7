use super::*;
use crate::braid::BraidGroup;
use crate::conj::{
    all_classes, bullet_class, classical_generators, is_bullet_elliptic, PartitionSignature,
};
use crate::coxeter::ElementTable;
use proptest::prelude::*;

fn generator_named(sys: &CoxeterSystem, p: &PartitionSignature, name: &str) -> WeylElement {
    classical_generators(sys, p)
        .unwrap()
        .into_iter()
        .find(|g| g.name == name)
        .unwrap_or_else(|| panic!("no generator {name} for {:?}", p.parts()))
        .element
}

fn block_swap(sys: &CoxeterSystem, p: &PartitionSignature, r: usize) -> WeylElement {
    let perm = crate::conj::block_swap_perm(p, r);
    sys.perm_view().unwrap().from_perm(sys, &perm).unwrap()
}

fn cycle(sys: &CoxeterSystem, p: &PartitionSignature, r: usize) -> WeylElement {
    let perm = crate::conj::cycle_perm(p, r);
    sys.perm_view().unwrap().from_perm(sys, &perm).unwrap()
}

/// `w_r w_σ`, which lies in the even subgroup even when `w_r` does not.
fn primed_cycle(sys: &CoxeterSystem, p: &PartitionSignature, r: usize) -> WeylElement {
    let perm = crate::conj::compose(
        &crate::conj::cycle_perm(p, r),
        &crate::conj::cycle_perm(p, p.sigma()),
    );
    sys.perm_view().unwrap().from_perm(sys, &perm).unwrap()
}

#[test]
fn d4_graph_edges_and_descents() {
    let sys = CoxeterSystem::d4_trivalent();
    for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2), (1, 3, 2)] {
        let a = sys.eval(&[0, i, 0, j, 0, k]);
        let b = sys.eval(&[i, 0, j, 0, k, 0]);
        assert_eq!(
            sys.left_descents(&a).into_iter().collect::<Vec<_>>(),
            vec![0, i]
        );
        assert_eq!(sys.right_descents(&b), [0, k].into_iter().collect());
        assert_eq!(step_target(&sys, &a, Step::pos(0)), Some(b.clone()));
        assert_eq!(
            step_target(&sys, &a, Step::pos(i)),
            Some(sys.eval(&[0, j, 0, i, 0, k]))
        );
        assert_eq!(
            step_target(&sys, &b, Step::pos(i)),
            Some(sys.eval(&[0, j, 0, k, 0, i]))
        );
        assert_eq!(
            step_target(&sys, &b, Step::pos(j)),
            Some(sys.eval(&[i, 0, k, 0, j, 0]))
        );
    }
    let class = bullet_class(&sys, &sys.eval(&[1, 0, 2, 0, 3, 0]));
    let graph = gamma_graph(&sys, &class);
    assert_eq!(graph.vertices().len(), 12);
    assert!(graph.is_connected());
}

#[test]
fn d4_loops_and_relations() {
    let sys = CoxeterSystem::d4_trivalent();
    for (i, j, k) in [(1, 2, 3), (2, 1, 3), (3, 2, 1)] {
        let ex = d4_example(&sys, i, j, k).unwrap();
        let alpha = z_of_path(&sys, &ex.iota).unwrap();
        let beta = z_of_path(&sys, &ex.iota_prime).unwrap();
        let gamma = z_of_path(&sys, &ex.iota_double_prime).unwrap();
        assert_eq!(alpha, sys.eval(&[0, i, j, 0]));
        assert_eq!(beta, sys.eval(&[j, k]));
        assert_eq!(gamma, sys.eval(&[i, 0, k, i, 0, i]));
        for p in [&ex.iota, &ex.iota_prime, &ex.iota_double_prime] {
            assert_eq!(endpoint(&sys, p).unwrap(), ex.w);
        }
        let prod = |x: &WeylElement, y: &WeylElement, z: &WeylElement| sys.mul(&sys.mul(x, y), z);
        assert_eq!(prod(&gamma, &alpha, &beta), ex.w);
        assert_eq!(prod(&alpha, &beta, &gamma), ex.w);
        assert_eq!(prod(&beta, &gamma, &alpha), ex.w);

        // Path-level relation, found by search and replayed.
        let target = Path::new(
            ex.w.clone(),
            ex.product_word.iter().map(|&g| Step::pos(g)).collect(),
        );
        let cat3 =
            |x: &Path, y: &Path, z: &Path| concat(&sys, &concat(&sys, x, y).unwrap(), z).unwrap();
        for lhs in [
            cat3(&ex.iota_double_prime, &ex.iota, &ex.iota_prime),
            cat3(&ex.iota, &ex.iota_prime, &ex.iota_double_prime),
            cat3(&ex.iota_prime, &ex.iota_double_prime, &ex.iota),
        ] {
            match equivalence_search(&sys, &lhs, &target, 8, 500_000).unwrap() {
                SearchOutcome::Equivalent { moves } => {
                    assert_eq!(replay(&sys, &lhs, &moves).unwrap(), target)
                }
                other => panic!("{}: {other:?}", format_path(&sys, &lhs)),
            }
        }
        let group = BraidGroup::new(&sys);
        let b = |p: &Path| braid_of_path(&sys, p).unwrap();
        let lhs = group.mul(
            &group.mul(&b(&ex.iota_double_prime), &b(&ex.iota)),
            &b(&ex.iota_prime),
        );
        assert!(group.equal(&lhs, &group.from_positive_word(&ex.product_word)));
    }
}

#[test]
fn d4_explicit_reduction_chain() {
    // ι''ι ≡ (move iv) ≡ cancel twice, then three positive braid moves and a
    // cancellation reach [w; i,0,j,0,k,0].
    let sys = CoxeterSystem::d4_trivalent();
    let (i, j, k) = (1, 2, 3);
    let ex = d4_example(&sys, i, j, k).unwrap();
    let start = concat(
        &sys,
        &concat(&sys, &ex.iota_double_prime, &ex.iota).unwrap(),
        &ex.iota_prime,
    )
    .unwrap();
    let after_iv = apply_move(&sys, &start, 4, MoveKind::BraidNegative).unwrap();
    let s = |g: usize, pos: bool| Step {
        gen: g,
        positive: pos,
    };
    assert_eq!(
        after_iv.steps,
        vec![
            s(i, true),
            s(0, true),
            s(k, true),
            s(i, true),
            s(i, false),
            s(0, false),
            s(i, false),
            s(i, true),
            s(j, true),
            s(0, true),
            s(j, true),
            s(k, true)
        ]
    );
    let (reduced, cancels) = free_reduce(&after_iv);
    assert_eq!(cancels.len(), 2);
    assert_eq!(reduced.steps.len(), 8);
    let p = apply_move(&sys, &reduced, 4, MoveKind::BraidPositive).unwrap();
    let (p, c) = free_reduce(&p);
    assert_eq!(c.len(), 1);
    let p = apply_move(&sys, &p, 2, MoveKind::BraidPositive).unwrap();
    let p = apply_move(&sys, &p, 3, MoveKind::BraidPositive).unwrap();
    assert_eq!(
        p.steps,
        [i, 0, j, 0, k, 0]
            .iter()
            .map(|&g| Step::pos(g))
            .collect::<Vec<_>>()
    );
}

#[test]
fn type_b_named_loops() {
    for n in 2..=5 {
        let sys = CoxeterSystem::parse(&format!("B{n}")).unwrap();
        for p in PartitionSignature::all(n) {
            for r in 1..=p.sigma() {
                let path = iota_b(&sys, &p, r).unwrap();
                assert_eq!(
                    endpoint(&sys, &path).unwrap(),
                    path.base,
                    "{:?} r={r}",
                    p.parts()
                );
                assert_eq!(
                    z_of_path(&sys, &path).unwrap(),
                    cycle(&sys, &p, r),
                    "{:?} r={r}",
                    p.parts()
                );
            }
            for r in 1..p.sigma() {
                if p.part(r) != p.part(r + 1) {
                    assert!(iota_b_prime(&sys, &p, r).is_err());
                    continue;
                }
                let path = iota_b_prime(&sys, &p, r).unwrap();
                assert_eq!(endpoint(&sys, &path).unwrap(), path.base);
                assert_eq!(
                    z_of_path(&sys, &path).unwrap(),
                    block_swap(&sys, &p, r),
                    "{:?} r={r}",
                    p.parts()
                );
            }
        }
    }
}

#[test]
fn type_b_swap_path_small_cases() {
    let sys = CoxeterSystem::parse("B6").unwrap();
    let p = PartitionSignature::new(vec![3, 3]).unwrap();
    let path = iota_b_prime(&sys, &p, 1).unwrap();
    // a = 3: a, a+1, a-1, a+2, a, a-2, ~(a-1), ~(a+1), ~a.
    assert_eq!(
        format_path(&sys, &path).split("; ").nth(1).unwrap(),
        "3,4,2,5,3,1,2~,4~,3~]"
    );
}

#[test]
fn type_d_named_loops() {
    for n in 4..=6 {
        let sys = CoxeterSystem::parse(&format!("D{n}")).unwrap();
        for p in PartitionSignature::all(n)
            .into_iter()
            .filter(|p| p.sigma() % 2 == 0)
        {
            let sigma = p.sigma();
            for r in 1..=sigma {
                let path = iota_d_double_prime(&sys, &p, r).unwrap();
                let want = primed_cycle(&sys, &p, r);
                assert_eq!(
                    z_of_path(&sys, &path).unwrap(),
                    want,
                    "{:?} r={r}",
                    p.parts()
                );
                assert_eq!(endpoint(&sys, &path).unwrap(), path.base);
            }
            for r in 1..sigma {
                if p.part(r) == p.part(r + 1) {
                    let path = iota_b_prime(&sys, &p, r).unwrap();
                    assert_eq!(z_of_path(&sys, &path).unwrap(), block_swap(&sys, &p, r));
                }
            }
            if p.part(sigma - 1) == p.part(sigma) {
                let path = iota_d_tilde(&sys, &p).unwrap();
                let want = generator_named(&sys, &p, &format!("h'_{}", sigma - 1));
                assert_eq!(z_of_path(&sys, &path).unwrap(), want, "{:?}", p.parts());
                assert_eq!(endpoint(&sys, &path).unwrap(), path.base);
            }
        }
    }
}

#[test]
fn type_d_tilde_matches_displayed_d10_word() {
    let sys = CoxeterSystem::parse("D10").unwrap();
    let p = PartitionSignature::new(vec![5, 5]).unwrap();
    let path = iota_d_tilde(&sys, &p).unwrap();
    let text = format_path(&sys, &path);
    let letters = text.split("; ").nth(1).unwrap().trim_end_matches(']');
    assert_eq!(
        letters,
        "9',8,7,6,5,6,7,8,4,5,6,3,4,2,9',7,5,3,1,2~,4~,3~,6~,5~,4~,8~,7~,6~,5~,6~,7~,8~,9'~"
    );
}

#[test]
fn loop_image_equals_stabilizer_on_small_groups() {
    for name in ["A2", "A3", "B2", "B3", "A3*", "D4"] {
        let sys = CoxeterSystem::parse(name).unwrap();
        let table = ElementTable::new(&sys);
        for class in all_classes(&sys, &table) {
            if !is_bullet_elliptic(&sys, &class) {
                continue;
            }
            let report = verify_conjecture_12a(&sys, &table, &class).unwrap();
            assert!(
                report.holds,
                "{name} class of {}",
                sys.format_element(class.representative())
            );
        }
    }
}

#[test]
fn longest_element_loops_reach_whole_group() {
    // w0 with w0-conjugation as twist: every reduced word gives a loop.
    let sys = CoxeterSystem::parse("A3*").unwrap();
    let w0 = sys.longest_element().clone();
    let y = sys.eval(&[0, 1, 2]);
    let path = Path::new(
        w0.clone(),
        sys.reduced_word(&y)
            .0
            .iter()
            .map(|&g| Step::pos(g))
            .collect(),
    );
    assert_eq!(endpoint(&sys, &path).unwrap(), w0);
    assert_eq!(z_of_path(&sys, &path).unwrap(), y);
}

#[test]
fn search_reports_inequivalent_and_unknown() {
    let sys = CoxeterSystem::d4_trivalent();
    let ex = d4_example(&sys, 1, 2, 3).unwrap();
    let out = equivalence_search(&sys, &ex.iota, &ex.iota_prime, 3, 10_000).unwrap();
    assert!(matches!(out, SearchOutcome::Inequivalent { .. }));
    let lhs = concat(&sys, &ex.iota_double_prime, &ex.iota).unwrap();
    let lhs = concat(&sys, &lhs, &ex.iota_prime).unwrap();
    let target = Path::new(
        ex.w.clone(),
        ex.product_word.iter().map(|&g| Step::pos(g)).collect(),
    );
    assert!(matches!(
        equivalence_search(&sys, &lhs, &target, 0, 10).unwrap(),
        SearchOutcome::Unknown { .. }
    ));
}

#[test]
fn literal_parse_rejects_non_edges() {
    let sys = CoxeterSystem::d4_trivalent();
    let p = parse_path(&sys, "[1.0.2.0.3.0; 0~,1,2,0]").unwrap();
    assert!(validate(&sys, &p).is_ok());
    let bad = parse_path(&sys, "[1.0.2.0.3.0; 3]").unwrap();
    assert!(matches!(
        validate(&sys, &bad),
        Err(PathError::InvalidStep { index: 0, .. })
    ));
    assert!(parse_path(&sys, "1.0; 2").is_err());
}

fn d4_loop_strategy() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..3, 0usize..40), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moves_preserve_endpoints_and_braid_image(choices in d4_loop_strategy()) {
        let sys = CoxeterSystem::d4_trivalent();
        let ex = d4_example(&sys, 1, 2, 3).unwrap();
        let loops = [&ex.iota, &ex.iota_prime, &ex.iota_double_prime];
        let mut path = Path::empty(ex.w.clone());
        for &(which, _) in &choices {
            path = concat(&sys, &path, loops[which]).unwrap();
        }
        let group = BraidGroup::new(&sys);
        let before = braid_of_path(&sys, &path).unwrap();
        for &(_, salt) in &choices {
            let kinds = [MoveKind::BraidPositive, MoveKind::BraidNegative, MoveKind::CancelPosNeg, MoveKind::CancelNegPos];
            let options: Vec<Path> = (0..path.len())
                .flat_map(|pos| kinds.iter().map(move |&k| (pos, k)))
                .filter_map(|(pos, k)| apply_move(&sys, &path, pos, k).ok())
                .collect();
            if options.is_empty() { break; }
            path = options[salt % options.len()].clone();
            prop_assert_eq!(endpoint(&sys, &path).unwrap(), ex.w.clone());
            prop_assert!(group.equal(&braid_of_path(&sys, &path).unwrap(), &before));
        }
    }

    #[test]
    fn literal_round_trip(choices in d4_loop_strategy()) {
        let sys = CoxeterSystem::d4_trivalent();
        let ex = d4_example(&sys, 2, 1, 3).unwrap();
        let loops = [&ex.iota, &ex.iota_prime, &ex.iota_double_prime];
        let mut path = Path::empty(ex.w.clone());
        for &(which, _) in &choices {
            path = concat(&sys, &path, loops[which]).unwrap();
        }
        let text = format_path(&sys, &path);
        prop_assert_eq!(parse_path(&sys, &text).unwrap(), path);
    }

    #[test]
    fn transport_conjugates_z(choices in d4_loop_strategy(), target in 0usize..12) {
        let sys = CoxeterSystem::d4_trivalent();
        let ex = d4_example(&sys, 1, 2, 3).unwrap();
        let class = bullet_class(&sys, &ex.w);
        let graph = gamma_graph(&sys, &class);
        let table = ElementTable::new(&sys);
        // A path from w to another vertex through the spanning structure.
        let dest = graph.vertices()[target].clone();
        let image = tau_image(&sys, &table, &graph, &ex.w).unwrap();
        prop_assert!(!image.certificates.is_empty());
        let mut lp = Path::empty(ex.w.clone());
        let loops = [&ex.iota, &ex.iota_prime, &ex.iota_double_prime];
        for &(which, _) in &choices {
            lp = concat(&sys, &lp, loops[which]).unwrap();
        }
        // Shortest path from w to dest by BFS over incident steps.
        let mut prev: HashMap<usize, (usize, Step)> = HashMap::new();
        let start = graph.index_of(&ex.w).unwrap();
        let goal = graph.index_of(&dest).unwrap();
        let mut queue = VecDeque::from([start]);
        let mut seen = BTreeSet::from([start]);
        while let Some(u) = queue.pop_front() {
            for (step, v, _) in graph.incident(u) {
                if seen.insert(v) { prev.insert(v, (u, step)); queue.push_back(v); }
            }
        }
        let mut steps = Vec::new();
        let mut cur = goal;
        while cur != start { let (u, s) = prev[&cur]; steps.push(s); cur = u; }
        steps.reverse();
        let conn = Path::new(ex.w.clone(), steps);
        let moved = concat(&sys, &concat(&sys, &reverse(&sys, &conn).unwrap(), &lp).unwrap(), &conn).unwrap();
        prop_assert_eq!(endpoint(&sys, &moved).unwrap(), dest.clone());
        let zc = z_of_path(&sys, &conn).unwrap();
        let want = sys.mul(&sys.mul(&sys.inverse(&zc), &z_of_path(&sys, &lp).unwrap()), &zc);
        prop_assert_eq!(z_of_path(&sys, &moved).unwrap(), want);
    }
}

#[test]
fn type_d_tail_relation_in_group_and_braid_group() {
    // With products composed right to left:
    // h'_{σ-1} w'_σ h_{σ-1} = w'_σ h_{σ-1} h'_{σ-1} = h_{σ-1} h'_{σ-1} w'_σ,
    // on the loop z-values and on their braid lifts, where all three equal
    // the positive lift of w.
    for (n, parts) in [
        (4, vec![2, 2]),
        (4, vec![1, 1, 1, 1]),
        (6, vec![3, 3]),
        (6, vec![2, 2, 1, 1]),
        (8, vec![4, 4]),
    ] {
        let sys = CoxeterSystem::parse(&format!("D{n}")).unwrap();
        let p = PartitionSignature::new(parts).unwrap();
        let sigma = p.sigma();
        let h = iota_b_prime(&sys, &p, sigma - 1).unwrap();
        let w = iota_d_double_prime(&sys, &p, sigma).unwrap();
        let ht = iota_d_tilde(&sys, &p).unwrap();
        let z = |x: &Path| z_of_path(&sys, x).unwrap();
        let m3 = |a: &WeylElement, b: &WeylElement, c: &WeylElement| sys.mul(&sys.mul(a, b), c);
        let first = m3(&z(&ht), &z(&w), &z(&h));
        assert_eq!(first, m3(&z(&w), &z(&h), &z(&ht)), "{:?}", p.parts());
        assert_eq!(first, m3(&z(&h), &z(&ht), &z(&w)), "{:?}", p.parts());

        let group = BraidGroup::new(&sys);
        let b = |x: &Path| braid_of_path(&sys, x).unwrap();
        let b3 = |x: &Path, y: &Path, c: &Path| group.mul(&group.mul(&b(x), &b(y)), &b(c));
        let lhs = b3(&ht, &w, &h);
        assert!(group.equal(&lhs, &b3(&w, &h, &ht)), "{:?}", p.parts());
        assert!(group.equal(&lhs, &b3(&h, &ht, &w)), "{:?}", p.parts());
        if p.part(sigma) > 1 {
            assert!(
                group.equal(&lhs, &group.embed_hat(&h.base)),
                "{:?}",
                p.parts()
            );
        }
    }
}

//! The ten acceptance criteria. Each prints one PASS/FAIL line; the test fails
//! if any criterion fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};
use weylvar::braid::{good_element_check, shuffle_by_braid_moves, twisted_order, BraidGroup};
use weylvar::conj::{
    all_classes, block_swap_perm, bullet_class, classical_generators, classical_w, compose,
    cycle_perm, generate_subgroup, is_bullet_elliptic, stabilizer,
};
use weylvar::coxeter::ElementTable;
use weylvar::flagvar::{
    count_matrix, quotient_count_sl2, sigma_identity_suite, verify_53, Identity, SpecialLinear,
};
use weylvar::param::{
    dimension_formula, gram_batch, gram_seeded, gram_solve, gram_verify, random_free, CyclicSpace,
    Form, GramConfig, GramSystem,
};
use weylvar::paths::{
    braid_of_path, concat, d4_example, endpoint, equivalence_search, format_path, gamma_graph,
    iota_b, iota_b_prime, iota_d_double_prime, iota_d_tilde, replay, verify_conjecture_12a,
    z_of_path, Path, SearchOutcome, Step,
};
use weylvar::{CoxeterSystem, FiniteField, PartitionSignature, Twist, WeylElement};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sys(spec: &str) -> CoxeterSystem {
    CoxeterSystem::parse(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

fn d4_suite() -> Outcome {
    let sys = CoxeterSystem::d4_trivalent();
    let table = ElementTable::new(&sys);
    let w = sys.eval(&[1, 0, 2, 0, 3, 0]);
    let class = bullet_class(&sys, &w);
    ensure(class.len() == 12, || format!("class size {}", class.len()))?;
    for x in class.elements() {
        ensure(x.length() == 6 && sys.order_of(x) == 4, || {
            format!("{} has length {}", sys.format_element(x), x.length())
        })?;
    }
    let leaf_orders = [
        [1, 2, 3],
        [1, 3, 2],
        [2, 1, 3],
        [2, 3, 1],
        [3, 1, 2],
        [3, 2, 1],
    ];
    let mut expected = BTreeSet::new();
    for [i, j, k] in leaf_orders {
        let a = sys.eval(&[0, i, 0, j, 0, k]);
        let b = sys.eval(&[i, 0, j, 0, k, 0]);
        ensure(sys.left_descents(&a) == BTreeSet::from([0, i]), || {
            format!("left descents of 0{i}0{j}0{k}")
        })?;
        ensure(sys.right_descents(&b) == BTreeSet::from([0, k]), || {
            format!("right descents of {i}0{j}0{k}0")
        })?;
        expected.insert(table.index_of(&a));
        expected.insert(table.index_of(&b));
    }
    let found: BTreeSet<usize> = class.elements().iter().map(|x| table.index_of(x)).collect();
    ensure(found == expected, || {
        "class is not the twelve alternating words".into()
    })?;

    let stab = stabilizer(&sys, &table, &w);
    ensure(stab.order() == 16 && !stab.is_abelian(&sys), || {
        format!("stabilizer order {}", stab.order())
    })?;
    let poincare = stab.length_generating_function();
    ensure(poincare == [1, 0, 1, 0, 1, 0, 10, 0, 1, 0, 1, 0, 1], || {
        format!("length generating function {poincare:?}")
    })?;

    let group = BraidGroup::new(&sys);
    for [i, j, k] in leaf_orders {
        let ex = d4_example(&sys, i, j, k).map_err(|e| e.to_string())?;
        let z = |p: &Path| z_of_path(&sys, p).unwrap();
        let (alpha, beta, gamma) = (z(&ex.iota), z(&ex.iota_prime), z(&ex.iota_double_prime));
        ensure(alpha == sys.eval(&[0, i, j, 0]), || "alpha".into())?;
        ensure(beta == sys.eval(&[j, k]), || "beta".into())?;
        ensure(gamma == sys.eval(&[i, 0, k, i, 0, i]), || "gamma".into())?;
        let m3 = |a: &WeylElement, b: &WeylElement, c: &WeylElement| sys.mul(&sys.mul(a, b), c);
        for prod in [
            m3(&gamma, &alpha, &beta),
            m3(&alpha, &beta, &gamma),
            m3(&beta, &gamma, &alpha),
        ] {
            ensure(prod == ex.w, || format!("triple product for ({i},{j},{k})"))?;
        }
        let lhs = concat(
            &sys,
            &concat(&sys, &ex.iota_double_prime, &ex.iota).unwrap(),
            &ex.iota_prime,
        )
        .unwrap();
        let target = Path::new(
            ex.w.clone(),
            ex.product_word.iter().map(|&g| Step::pos(g)).collect(),
        );
        match equivalence_search(&sys, &lhs, &target, 8, 500_000).map_err(|e| e.to_string())? {
            SearchOutcome::Equivalent { moves } => ensure(
                replay(&sys, &lhs, &moves).ok() == Some(target.clone()),
                || "replayed moves".into(),
            )?,
            other => return Err(format!("rewriting {}: {other:?}", format_path(&sys, &lhs))),
        }
        let braid = braid_of_path(&sys, &lhs).unwrap();
        ensure(
            group.equal(&braid, &group.from_positive_word(&ex.product_word)),
            || "braid image".into(),
        )?;
    }
    let report = verify_conjecture_12a(&sys, &table, &class).map_err(|e| e.to_string())?;
    ensure(report.holds, || {
        "loop image differs from the stabilizer".into()
    })?;
    Ok("class 12, stabilizer 16 nonabelian, loops and rewriting verified".into())
}

const CONNECTIVITY_SYSTEMS: [&str; 11] = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "A2*", "A3*", "A4*",
];

/// The graph only carries the moves of elliptic classes; a non-elliptic class
/// such as that of `s_1` in `A2` has `C_min = {s_1, s_2}` with no edge between
/// them, so those are tallied but not required to connect.
fn connectivity() -> Outcome {
    let (mut elliptic, mut other, mut other_connected) = (0, 0, 0);
    for name in CONNECTIVITY_SYSTEMS {
        let s = sys(name);
        let table = ElementTable::new(&s);
        for class in all_classes(&s, &table) {
            let connected = gamma_graph(&s, &class).is_connected();
            if !is_bullet_elliptic(&s, &class) {
                other += 1;
                other_connected += usize::from(connected);
                continue;
            }
            elliptic += 1;
            ensure(connected, || {
                format!(
                    "{name}: class of {} disconnected",
                    s.format_element(class.representative())
                )
            })?;
        }
    }
    Ok(format!("{elliptic} elliptic classes all connected; {other_connected} of {other} non-elliptic connected"))
}

fn loop_images() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for name in [
        "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "A2*", "A3*", "A4*", "D4*",
    ] {
        let s = sys(name);
        let table = ElementTable::new(&s);
        for class in all_classes(&s, &table)
            .into_iter()
            .filter(|c| is_bullet_elliptic(&s, c))
        {
            count += 1;
            let rep = s.format_element(class.representative());
            let holds = verify_conjecture_12a(&s, &table, &class)
                .map(|r| r.holds)
                .unwrap_or(false);
            println!(
                "    {name} [{rep}]: {}",
                if holds { "pass" } else { "fail" }
            );
            if !holds {
                failures.push(format!("{name} [{rep}]"));
            }
        }
    }
    ensure(failures.is_empty(), || {
        format!("failing classes: {failures:?}")
    })?;
    Ok(format!("{count} elliptic classes"))
}

fn from_perm(s: &CoxeterSystem, perm: &[usize]) -> WeylElement {
    s.perm_view()
        .expect("signed")
        .from_perm(s, perm)
        .expect("perm lies in the group")
}

fn generator_named(s: &CoxeterSystem, p: &PartitionSignature, name: &str) -> Option<WeylElement> {
    classical_generators(s, p)
        .ok()?
        .into_iter()
        .find(|g| g.name == name)
        .map(|g| g.element)
}

fn path_letters(s: &CoxeterSystem, path: &Path) -> String {
    format_path(s, path)
        .split("; ")
        .nth(1)
        .unwrap_or("")
        .trim_end_matches(']')
        .to_string()
}

fn generator_suite() -> Outcome {
    let mut checked = 0;
    let mut systems: Vec<(CoxeterSystem, bool)> =
        (2..=5).map(|n| (sys(&format!("B{n}")), false)).collect();
    systems.extend((4..=5).map(|n| (sys(&format!("D{n}")), true)));
    for (s, type_d) in &systems {
        let table = ElementTable::new(s);
        let n = s.rank();
        for p in PartitionSignature::all(n)
            .into_iter()
            .filter(|p| !type_d || p.sigma() % 2 == 0)
        {
            let tag = || format!("{} {:?}", s.name(), p.parts());
            let sigma = p.sigma();
            let w = classical_w(s, &p).map_err(|e| e.to_string())?;
            // The cycles are odd in type D, so they only exist as elements in type B.
            let cycles: Vec<WeylElement> = if *type_d {
                Vec::new()
            } else {
                (1..=sigma)
                    .map(|r| from_perm(s, &cycle_perm(&p, r)))
                    .collect()
            };
            if !type_d {
                let total: usize = cycles.iter().map(WeylElement::length).sum();
                ensure(total == w.w.length(), || {
                    format!("{}: lengths not additive", tag())
                })?;
                for a in &cycles {
                    for b in &cycles {
                        ensure(s.mul(a, b) == s.mul(b, a), || {
                            format!("{}: factors do not commute", tag())
                        })?;
                    }
                }
            }
            let gens = classical_generators(s, &p).map_err(|e| e.to_string())?;
            let idx: Vec<usize> = gens.iter().map(|g| table.index_of(&g.element)).collect();
            let generated = generate_subgroup(&table, &idx);
            let stab: BTreeSet<usize> = stabilizer(s, &table, &w.w)
                .elements()
                .iter()
                .map(|z| table.index_of(z))
                .collect();
            ensure(generated == stab, || {
                format!(
                    "{}: generated {} vs stabilizer {}",
                    tag(),
                    generated.len(),
                    stab.len()
                )
            })?;

            for r in 1..=sigma {
                let (path, want) = if *type_d {
                    let primed = from_perm(s, &compose(&cycle_perm(&p, r), &cycle_perm(&p, sigma)));
                    (iota_d_double_prime(s, &p, r), primed)
                } else {
                    (iota_b(s, &p, r), cycles[r - 1].clone())
                };
                let path = path.map_err(|e| e.to_string())?;
                ensure(endpoint(s, &path).ok() == Some(w.w.clone()), || {
                    format!("{}: loop {r} not closed", tag())
                })?;
                ensure(z_of_path(s, &path).ok() == Some(want.clone()), || {
                    format!("{}: cycle loop {r}", tag())
                })?;
                let name = if *type_d {
                    format!("w'_{r}")
                } else {
                    format!("w_{r}")
                };
                if let Some(named) = generator_named(s, &p, &name) {
                    ensure(named == want, || format!("{}: {name}", tag()))?;
                }
            }
            for r in 1..sigma {
                if p.part(r) != p.part(r + 1) {
                    continue;
                }
                let swap = block_swap_perm(&p, r);
                let conjugated = compose(&compose(&swap, &cycle_perm(&p, r + 1)), &swap);
                ensure(conjugated == cycle_perm(&p, r), || {
                    format!("{}: h_{r} w_{} h_{r}", tag(), r + 1)
                })?;
                let h = from_perm(s, &swap);
                let path = iota_b_prime(s, &p, r).map_err(|e| e.to_string())?;
                ensure(z_of_path(s, &path).ok() == Some(h.clone()), || {
                    format!("{}: swap loop {r}", tag())
                })?;
                if let Some(named) = generator_named(s, &p, &format!("h_{r}")) {
                    ensure(named == h, || format!("{}: h_{r}", tag()))?;
                }
            }
            if *type_d && sigma >= 2 && p.part(sigma - 1) == p.part(sigma) {
                let path = iota_d_tilde(s, &p).map_err(|e| e.to_string())?;
                let want =
                    generator_named(s, &p, &format!("h'_{}", sigma - 1)).ok_or("missing h'")?;
                ensure(z_of_path(s, &path).ok() == Some(want), || {
                    format!("{}: tilde loop", tag())
                })?;
            }
            checked += 1;
        }
    }
    // The swap loop written out for blocks of size 1, 2 and 3.
    for (spec, parts, a, expected) in [
        ("B2", vec![1, 1], 1, "1".to_string()),
        ("B4", vec![2, 2], 2, "2,3,1,2~".to_string()),
        ("B6", vec![3, 3], 3, "3,4,2,5,3,1,2~,4~,3~".to_string()),
    ] {
        let s = sys(spec);
        let p = PartitionSignature::new(parts).map_err(|e| e.to_string())?;
        let path = iota_b_prime(&s, &p, 1).map_err(|e| e.to_string())?;
        ensure(path_letters(&s, &path) == expected, || {
            format!("{spec} a={a}: {}", path_letters(&s, &path))
        })?;
    }
    Ok(format!("{checked} partition signatures"))
}

fn e8_braid_identity(budget: Duration) -> Option<bool> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let s = sys("E8");
        let group = BraidGroup::new(&s);
        let w = s
            .parse_element("2.1.3.4.2.3.4.5.4.2.3.4.5.6.5.7.6.8")
            .expect("word");
        let x = s.mul(s.generator(1), &w);
        let lhs = group.mul(
            &group.embed_hat(s.generator(1)),
            &group.power(&group.embed_hat(&x), 7),
        );
        let _ = tx.send(group.equal(&lhs, &group.delta()));
    });
    rx.recv_timeout(budget).ok()
}

/// `det(X - M)` by Faddeev–LeVerrier, highest coefficient first.
fn characteristic_polynomial(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![1i64];
    let mut acc = vec![vec![0i64; n]; n];
    for k in 1..=n {
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += coeffs[k - 1];
        }
        let am = mul(m, &acc);
        let trace: i64 = (0..n).map(|i| am[i][i]).sum();
        coeffs.push(-trace / k as i64);
        acc = am;
    }
    coeffs
}

fn reflection_matrix(s: &CoxeterSystem, letters: &[usize]) -> Vec<Vec<i64>> {
    let n = s.rank();
    let identity: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    letters.iter().fold(identity, |acc, &l| {
        let g = s.simple_action(l);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| acc[i][k] * g[k][j]).sum())
                    .collect()
            })
            .collect()
    })
}

fn braid_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let systems: Vec<CoxeterSystem> = ["A3", "A4", "B3", "B4", "D4", "F4", "G2"]
        .iter()
        .map(|n| sys(n))
        .collect();
    let trials = 10_000;
    for t in 0..trials {
        let s = &systems[t % systems.len()];
        let group = BraidGroup::new(s);
        let len = rng.gen_range(0..=12);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..s.rank())).collect();
        let moved = shuffle_by_braid_moves(s, &word, 20, &mut rng);
        let (a, b) = (
            group.from_positive_word(&word),
            group.from_positive_word(&moved),
        );
        ensure(group.format(&a) == group.format(&b), || {
            format!("{}: normal forms of {word:?} and {moved:?}", s.name())
        })?;
        let other: Vec<usize> = (0..len).map(|_| rng.gen_range(0..s.rank())).collect();
        if s.eval(&other) != s.eval(&word) {
            ensure(
                group.format(&group.from_positive_word(&other)) != group.format(&a),
                || "distinct braids collide".into(),
            )?;
        }
    }

    let mut good = 0;
    for name in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A2*", "A3*"] {
        let s = sys(name);
        let table = ElementTable::new(&s);
        for class in all_classes(&s, &table)
            .into_iter()
            .filter(|c| is_bullet_elliptic(&s, c))
        {
            let rep = class.representative();
            let bound = table.len() as u64 * s.bullet_order() as u64;
            let found = good_element_check(&s, rep, bound)
                .map_err(|e| format!("{name} [{}]: {e}", s.format_element(rep)))?;
            ensure(found.e % twisted_order(&s, rep) == 0, || {
                "exponent not a multiple of the twisted order".into()
            })?;
            good += 1;
        }
    }

    let a2 = sys("A2");
    let group = BraidGroup::new(&a2);
    let c = group.from_positive_word(&[0, 1]);
    ensure(
        group.equal(&group.power(&c, 3), &group.delta_pow(2)),
        || "A2 Coxeter cube".into(),
    )?;

    let d4 = CoxeterSystem::d4_trivalent();
    let group = BraidGroup::new(&d4);
    let ex = d4_example(&d4, 1, 2, 3).map_err(|e| e.to_string())?;
    let b = |p: &Path| braid_of_path(&d4, p).unwrap();
    let lhs = group.mul(
        &group.mul(&b(&ex.iota_double_prime), &b(&ex.iota)),
        &b(&ex.iota_prime),
    );
    ensure(
        group.equal(&lhs, &group.from_positive_word(&ex.product_word)),
        || "D4 loop relation in the braid group".into(),
    )?;

    let e8 = sys("E8");
    let w = e8
        .parse_element("2.1.3.4.2.3.4.5.4.2.3.4.5.6.5.7.6.8")
        .map_err(|e| e.to_string())?;
    let s2 = e8.generator(1).clone();
    let x = e8.mul(&s2, &w);
    ensure(w.length() == 18 && x.length() == 17, || {
        format!("E8 lengths {} {}", w.length(), x.length())
    })?;
    ensure(e8.mul(&x, &s2) == w, || "s2 x = x s2".into())?;
    ensure(
        e8.mul(&s2, &e8.power(&x, 7)) == *e8.longest_element(),
        || "s2 x^7 = w0".into(),
    )?;
    let word = e8.reduced_word(&w);
    let charpoly = characteristic_polynomial(&reflection_matrix(&e8, word.letters()));
    ensure(charpoly == [1, 1, 0, 0, 0, 0, 0, 1, 1], || {
        format!("characteristic polynomial {charpoly:?}")
    })?;
    let braid = match e8_braid_identity(Duration::from_secs(600)) {
        Some(true) => "braid identity holds",
        Some(false) => return Err("E8 braid identity fails".into()),
        None => "braid identity unknown within budget",
    };

    let u = e8.eval(&[0, 1, 2, 3, 4, 5, 6, 7]);
    let u2 = e8.mul(&u, &u);
    ensure(
        u.length() == 8 && u2.length() == 16 && e8.order_of(&u2) == 15,
        || "E8 order-15 element".into(),
    )?;
    let loop_u = Path::new(u2.clone(), (0..8).map(Step::pos).collect());
    ensure(endpoint(&e8, &loop_u).ok() == Some(u2.clone()), || {
        "loop at u^2 not closed".into()
    })?;
    ensure(z_of_path(&e8, &loop_u).ok() == Some(u), || {
        "loop at u^2 has z != u".into()
    })?;
    Ok(format!(
        "{trials} normal-form trials, {good} good elements, E8 {braid}"
    ))
}

fn counting() -> Outcome {
    let mut rows = 0;
    for (n, q, s) in [
        (2, 2, 1),
        (2, 2, 2),
        (2, 3, 1),
        (2, 3, 2),
        (3, 2, 1),
        (3, 2, 2),
    ] {
        let m = count_matrix(n, q, s).map_err(|e| e.to_string())?;
        for r in verify_53(&m, None) {
            ensure(r.pass, || {
                format!(
                    "SL_{n} q={q} s={s} ({}, {}): {} vs {}",
                    r.w, r.w_prime, r.n_s, r.hecke_value
                )
            })?;
            rows += 1;
        }
        if n == 2 {
            for w in &m.elements {
                for v in &m.elements {
                    let (sum, order) = quotient_count_sl2(q, s, w, v).map_err(|e| e.to_string())?;
                    ensure(
                        sum % order == 0 && sum / order * m.group_order == m.get(w, v).unwrap(),
                        || format!("quotient count SL_2 q={q} s={s}"),
                    )?;
                }
            }
        }
    }
    let m = count_matrix(2, 2, 1).map_err(|e| e.to_string())?;
    let s = m.elements[1].clone();
    // |SL_2(F_2)| (q^2 + 1) with q = 2, counted by hand.
    ensure(m.get(&s, &s) == Some(6 * (2 * 2 + 1)), || {
        "N_1 for SL_2, q=2".into()
    })?;
    Ok(format!("{rows} pairs exact"))
}

fn sigma_suite() -> Outcome {
    let report = sigma_identity_suite(3, 2, 3, false).map_err(|e| e.to_string())?;
    ensure(report.pass(), || format!("{:?}", report.tallies))?;
    // SL_3 has no element with two left descents admitting both alternating
    // chains, so the braid identities are exercised on SL_4.
    let wider = sigma_identity_suite(4, 2, 2, true).map_err(|e| e.to_string())?;
    ensure(wider.pass(), || format!("SL_4: {:?}", wider.tallies))?;
    for id in [Identity::BraidFlags, Identity::BraidCover] {
        ensure(report.tally(id).cases == 0, || {
            format!("{id:?} unexpectedly has SL_3 cases")
        })?;
        let t = wider.tally(id);
        ensure(t.cases > 0 && t.points > 0, || {
            format!("{id:?} never exercised on SL_4")
        })?;
    }
    for id in [
        Identity::SplitThenSwap,
        Identity::SwapThenSplit,
        Identity::ReducedWordFlags,
        Identity::ReducedWordCover,
        Identity::CoverProjection,
    ] {
        let t = report.tally(id);
        ensure(t.cases > 0 && t.points > 0, || {
            format!("{id:?} never exercised")
        })?;
    }
    let points: usize = report.tallies.values().map(|t| t.points).sum();
    let braid_points: usize = wider.tallies.values().map(|t| t.points).sum();
    Ok(format!("{points} point evaluations on SL_3(F_2) levels 1..3, {braid_points} braid evaluations on SL_4(F_2) levels 1..2"))
}

fn coxeter_element(sl: &SpecialLinear) -> WeylElement {
    let s = sl.system();
    s.eval(&(0..s.rank()).collect::<Vec<_>>())
}

fn finite_shadows() -> Outcome {
    let mut cover_total = 0;
    for (n, q, m) in [
        (2, 2, 1),
        (2, 2, 2),
        (2, 3, 2),
        (2, 3, 3),
        (3, 2, 1),
        (3, 2, 2),
        (3, 2, 3),
    ] {
        let sl = SpecialLinear::new(n, q, m).map_err(|e| e.to_string())?;
        let report = sl
            .isotropy_check(&coxeter_element(&sl))
            .map_err(|e| e.to_string())?;
        ensure(report.pass(), || format!("SL_{n} q={q} m={m}: {report:?}"))?;
        ensure(
            report.cover_points == sl.x_tilde_points_brute(&coxeter_element(&sl)).len(),
            || "cover enumeration".into(),
        )?;
        cover_total += report.cover_points;
    }
    ensure(cover_total > 0, || "no cover points enumerated".into())?;
    for q in [2u32, 3, 5] {
        let sl = SpecialLinear::new(2, q, 1).map_err(|e| e.to_string())?;
        let c = coxeter_element(&sl);
        ensure(
            sl.torus(&c).map_err(|e| e.to_string())?.order() as u32 == q + 1,
            || format!("torus order q={q}"),
        )?;
        let poly = sl.torus_order_polynomial(&c);
        ensure(poly.specialize(&1i64) == Ok(2), || {
            "torus order at q=1".into()
        })?;
    }
    for (n, q, m) in [(2, 2, 1), (2, 2, 2), (2, 3, 2), (3, 2, 1), (3, 2, 2)] {
        let sl = SpecialLinear::new(n, q, m).map_err(|e| e.to_string())?;
        let report = sl.ustar_action_orbits(&coxeter_element(&sl));
        ensure(report.pass(), || {
            format!("U* action SL_{n} q={q} m={m}: {report:?}")
        })?;
    }
    let sl = SpecialLinear::new(3, 2, 3).map_err(|e| e.to_string())?;
    let report = sl.ustar_action_orbits(&coxeter_element(&sl));
    ensure(report.pass() && report.cover_orbits > 0, || {
        format!("orbit correspondence: {report:?}")
    })?;
    Ok(format!(
        "{cover_total} cover points, free actions, torus orders q+1"
    ))
}

fn cyclic_suite() -> Outcome {
    let mut evaluations = 0;
    for (p, k, twist) in [
        (5, 1, Twist::Frobenius),
        (7, 1, Twist::Frobenius),
        (5, 2, Twist::Frobenius),
        (7, 1, Twist::Trivial),
    ] {
        let field = FiniteField::new(p, k).map_err(|e| e.to_string())?;
        for n in 2..=4 {
            let space = CyclicSpace::new(field.clone(), n, twist).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(u64::from(p * 100 + k * 10) + n as u64);
            for _ in 0..1000 {
                let a = space.random_coefficients(&mut rng);
                let pair = space.tau(&a).map_err(|e| e.to_string())?;
                ensure(space.mu(&pair).as_ref() == Ok(&a), || {
                    format!("GF({p}^{k}) n={n}: mu(tau(a)) != a")
                })?;
                let x = space.random_special_linear(&mut rng);
                let moved = space.conjugate(&x, &pair);
                ensure(space.mu(&moved).as_ref() == Ok(&a), || {
                    "mu not conjugation invariant".into()
                })?;
                ensure(space.orbit_equivalent(&pair, &moved).is_some(), || {
                    "conjugate not recognised".into()
                })?;
                let b = space.random_coefficients(&mut rng);
                let other = space.conjugate(
                    &space.random_special_linear(&mut rng),
                    &space.tau(&b).map_err(|e| e.to_string())?,
                );
                ensure(
                    space.orbit_equivalent(&pair, &other).is_some() == (a == b),
                    || "orbit test disagrees with mu".into(),
                )?;
                evaluations += 3;
            }
        }
    }
    Ok(format!("{evaluations} invariant evaluations"))
}

fn gram_suite() -> Outcome {
    let f = FiniteField::prime(7).map_err(|e| e.to_string())?;
    let configs = [
        (Form::Symplectic, vec![1]),
        (Form::Symplectic, vec![2]),
        (Form::Symplectic, vec![1, 1]),
        (Form::Symplectic, vec![2, 1]),
        (Form::EvenOrthogonal, vec![1, 1]),
    ];
    let (mut runs, mut perturbations) = (0, 0);
    for (form, blocks) in configs {
        for twist in [Twist::Frobenius, Twist::Trivial] {
            let cfg = GramConfig {
                form,
                blocks: blocks.clone(),
                twist,
            };
            let tag = format!("{form:?} {blocks:?} {twist:?}");
            let batch = gram_batch(&f, &cfg, 0..1000).map_err(|e| e.to_string())?;
            ensure(batch.free_count == dimension_formula(&blocks, form), || {
                format!("{tag}: free count")
            })?;
            ensure(batch.pass(), || {
                format!("{tag}: {} of 1000 failed", batch.failed)
            })?;
            runs += 1000;
            for seed in 0..20 {
                let report = gram_seeded(&f, &cfg, seed).map_err(|e| e.to_string())?;
                ensure(report.pass(), || format!("{tag}: seed {seed}"))?;
                let system = solve_seeded(&f, &cfg, seed)?;
                for var in cfg.dependent_variables() {
                    perturbations += 1;
                    let broken = system.perturbed(&f, var, f.one());
                    ensure(!gram_verify(&f, &broken).pass(), || {
                        format!("{tag}: perturbing {var:?} breaks nothing")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{runs} seeded solves, {perturbations} single-coordinate perturbations all detected"
    ))
}

/// The same draw as `gram_seeded`, kept as a coordinate system.
fn solve_seeded(f: &FiniteField, cfg: &GramConfig, seed: u64) -> Result<GramSystem, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = random_free(f, cfg, &mut rng);
    gram_solve(f, cfg, &free).map_err(|e| e.to_string())
}

type Criterion = (&'static str, fn() -> Outcome, u64);

#[test]
fn acceptance() {
    // Name, check, time limit in seconds.
    let criteria: [Criterion; 10] = [
        ("D4 example suite", d4_suite, 5),
        ("graph connectivity", connectivity, 60),
        ("loop image equals stabilizer", loop_images, 300),
        ("classical generator suite", generator_suite, 300),
        ("braid suite", braid_suite, 900),
        ("counting identity", counting, 600),
        ("sigma identity suite", sigma_suite, 600),
        ("finite shadows of the free action", finite_shadows, 600),
        ("cyclic pair parametrisation", cyclic_suite, 30),
        ("Gram elimination", gram_suite, 120),
    ];
    let mut failed = Vec::new();
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if secs > limit as f64 => {
                Err(format!("{detail}; took {secs:.1}s over the {limit}s limit"))
            }
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({secs:.2}s) {detail}", k + 1),
            Err(why) => {
                println!("FAIL criterion {}: {name} ({secs:.2}s) {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

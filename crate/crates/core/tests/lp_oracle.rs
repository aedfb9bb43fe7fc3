use hgmst::lp::{LinearProgram, LpStatus, Relation, RowOrigin, RowSpec};
use proptest::prelude::*;

/// One constraint `a . x (rel) b` of a tiny LP.
#[derive(Debug, Clone)]
struct Con {
    a: Vec<f64>,
    rel: Relation,
    b: f64,
}

/// Solves the square system by Gaussian elimination with partial pivoting.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let k = rhs.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-9 {
            return None;
        }
        m.swap(c, p);
        rhs.swap(c, p);
        for r in 0..k {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..k {
                    m[r][j] -= f * m[c][j];
                }
                rhs[r] -= f * rhs[c];
            }
        }
    }
    Some((0..k).map(|i| rhs[i] / m[i][i]).collect())
}

fn feasible(cons: &[Con], lo: &[f64], hi: &[f64], x: &[f64]) -> bool {
    let tol = 1e-9;
    x.iter().zip(lo.iter().zip(hi)).all(|(&v, (&l, &u))| v >= l - tol && v <= u + tol)
        && cons.iter().all(|c| {
            let act: f64 = c.a.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.rel {
                Relation::Le => act <= c.b + tol,
                Relation::Ge => act >= c.b - tol,
                Relation::Eq => (act - c.b).abs() <= tol,
            }
        })
}

/// Minimum over every basic solution: each choice of `k` tight
/// hyperplanes among the rows and the variable bounds.
fn vertex_enumeration(cost: &[f64], cons: &[Con], lo: &[f64], hi: &[f64]) -> Option<f64> {
    let k = cost.len();
    let mut planes: Vec<(Vec<f64>, f64)> = cons.iter().map(|c| (c.a.clone(), c.b)).collect();
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        planes.push((e.clone(), lo[j]));
        planes.push((e, hi[j]));
    }
    let mut best: Option<f64> = None;
    let total = planes.len();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let m = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs = pick.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(m, rhs) {
            if feasible(cons, lo, hi, &x) {
                let z: f64 = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(z, |b: f64| b.min(z)));
            }
        }
        // Next k-combination of 0..total.
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < total - k + i {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn con_strategy(k: usize) -> impl Strategy<Value = Con> {
    (
        prop::collection::vec(prop_oneof![Just(0.0), Just(1.0), Just(2.0), Just(-1.0), -2.0..2.0f64], k),
        prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)],
        -1.0..3.0f64,
    )
        .prop_map(|(a, rel, b)| Con { a, rel, b })
}

fn lp_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<Con>, Vec<Option<bool>>)> {
    (2usize..=4).prop_flat_map(|k| {
        (
            prop::collection::vec(-3.0..3.0f64, k),
            prop::collection::vec(con_strategy(k), 0..=4),
            prop::collection::vec(prop_oneof![6 => Just(None), 1 => Just(Some(false)), 1 => Just(Some(true))], k),
        )
    })
}

fn build(cost: &[f64], cons: &[Con], fix: &[Option<bool>]) -> LinearProgram {
    let mut lp = LinearProgram::new(cost.to_vec());
    for c in cons {
        let coefs = c.a.iter().enumerate().filter(|(_, &a)| a != 0.0).map(|(j, &a)| (j, a)).collect();
        lp.add_row(RowSpec {
            coefs,
            relation: c.rel,
            rhs: c.b,
            origin: RowOrigin::Subtour,
            pool_key: None,
        })
        .unwrap();
    }
    for (j, f) in fix.iter().enumerate() {
        if let Some(one) = f {
            lp.fix_variable(j, if *one { 1.0 } else { 0.0 });
        }
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn simplex_matches_vertex_enumeration((cost, cons, fix) in lp_strategy()) {
        let k = cost.len();
        let lo: Vec<f64> = fix.iter().map(|f| if *f == Some(true) { 1.0 } else { 0.0 }).collect();
        let hi: Vec<f64> = fix.iter().map(|f| if *f == Some(false) { 0.0 } else { 1.0 }).collect();
        let want = vertex_enumeration(&cost, &cons, &lo, &hi);
        let mut lp = build(&cost, &cons, &fix);
        let sol = lp.solve(None);
        match want {
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            Some(z) => {
                prop_assert_eq!(sol.status, LpStatus::Optimal);
                prop_assert!((sol.objective - z).abs() <= 1e-7 * (1.0 + z.abs()), "{} vs {}", sol.objective, z);
                let within_tol = cons.iter().all(|c| {
                    let act: f64 = c.a.iter().zip(&sol.x).map(|(a, v)| a * v).sum();
                    match c.rel {
                        Relation::Le => act <= c.b + 1e-7,
                        Relation::Ge => act >= c.b - 1e-7,
                        Relation::Eq => (act - c.b).abs() <= 1e-7,
                    }
                });
                prop_assert!(within_tol && sol.x[..k].iter().zip(lo.iter().zip(&hi)).all(|(&v, (&l, &u))| v >= l - 1e-9 && v <= u + 1e-9));
            }
        }
    }

    #[test]
    fn warm_start_after_adding_rows_agrees((cost, cons, fix) in lp_strategy()) {
        prop_assume!(!cons.is_empty());
        let mut lp = build(&cost, &cons[..1], &fix);
        let first = lp.solve(None);
        let mut cold = build(&cost, &cons, &fix);
        let want = cold.solve(None);
        for c in &cons[1..] {
            let coefs = c.a.iter().enumerate().filter(|(_, &a)| a != 0.0).map(|(j, &a)| (j, a)).collect();
            lp.add_row(RowSpec { coefs, relation: c.rel, rhs: c.b, origin: RowOrigin::Subtour, pool_key: None }).unwrap();
        }
        let warm = lp.solve(Some(&first.basis));
        prop_assert_eq!(warm.status, want.status);
        if want.status == LpStatus::Optimal {
            prop_assert!((warm.objective - want.objective).abs() <= 1e-7 * (1.0 + want.objective.abs()));
        }
    }
}

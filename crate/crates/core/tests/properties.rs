use proptest::prelude::*;

use recipe_core::abstraction::{default_atomic_forms, generalize};
use recipe_core::eval::{Posn, RngState};
use recipe_core::game::{distance_on_x, distance_on_y, game_over, move_rocket, tick, Dir, GameConfig, World};
use recipe_core::number;
use recipe_core::syntax::{parse_expr, print_expr};

fn dir() -> impl Strategy<Value = Dir> {
    prop::sample::select(Dir::ALL.to_vec())
}

fn posn() -> impl Strategy<Value = Posn> {
    (0i64..=500, 0i64..=500).prop_map(|(x, y)| Posn::ints(x, y))
}

fn world() -> impl Strategy<Value = World> {
    (posn(), dir(), 0i64..=100, posn(), posn()).prop_map(|(rocket, dir, tenths, gfuel, bfuel)| World {
        rocket,
        dir,
        flevel: number::ratio(tenths, 10),
        gfuel,
        bfuel,
    })
}

fn arith() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![(-5i64..6).prop_map(|n| n.to_string()), Just("x".to_string())];
    leaf.prop_recursive(3, 16, 2, |inner| {
        (prop::sample::select(vec!["+", "-", "*"]), inner.clone(), inner).prop_map(|(op, a, b)| format!("({op} {a} {b})"))
    })
}

proptest! {
    #[test]
    fn moving_stays_on_the_board(p in posn(), d in dir()) {
        let cfg = GameConfig::default();
        let q = move_rocket(&p, d, &cfg);
        let (lo, hi) = (number::int(0), number::int(500));
        prop_assert!(q.x >= lo && q.x <= hi && q.y >= lo && q.y <= hi);
        let moved = distance_on_x(&p, &q) + distance_on_y(&p, &q);
        prop_assert!(moved <= cfg.delta);
    }

    #[test]
    fn tick_keeps_fuel_in_range(w in world(), seed in any::<u64>()) {
        let cfg = GameConfig::default();
        let (next, rng) = tick(&w, &cfg, RngState::seeded(seed));
        prop_assert!(next.flevel >= number::int(0) && next.flevel <= cfg.max_fuel);
        if game_over(&w) {
            prop_assert_eq!(&next, &w);
            prop_assert_eq!(rng, RngState::seeded(seed));
        }
    }

    #[test]
    fn generalization_reproduces_samples(a in arith(), b in arith(), c in arith()) {
        let samples: Vec<_> = [&a, &b, &c]
            .iter()
            .map(|s| {
                let mut e = parse_expr(&format!("(+ {s} 1)")).unwrap();
                e.strip_locations();
                e
            })
            .collect();
        if let Ok(g) = generalize(&samples, &default_atomic_forms()) {
            for (i, s) in samples.iter().enumerate() {
                prop_assert_eq!(print_expr(&g.instantiate(i)), print_expr(s));
            }
        }
    }

    #[test]
    fn rationals_survive_json(n in -1000i64..1000, d in 1i64..50) {
        let r = number::ratio(n, d);
        prop_assert_eq!(number::from_json(&number::to_json(&r)).unwrap(), r);
    }
}

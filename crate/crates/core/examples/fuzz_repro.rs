//! Replays the randomized pipeline draws with timing, for diagnosing slow
//! inputs. Not part of the test suite.

use blowade::certify::{analyze, AnalyzeOptions};
use blowade::poly::{rat_int, Poly};
use rand::{Rng, SeedableRng};

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314159);
    for trial in 0..60 {
        let mut f = Poly::zero();
        for e in [
            [3u16, 0, 0],
            [0, 3, 0],
            [0, 0, 3],
            [1, 1, 1],
            [2, 1, 0],
            [0, 2, 1],
            [1, 0, 2],
        ] {
            if rng.gen_bool(0.6) {
                let c: i64 = rng.gen_range(-2..=2);
                f.insert_add(e, rat_int(c));
            }
        }
        for _ in 0..rng.gen_range(1..=4) {
            let a = rng.gen_range(0..=4u16);
            let b = rng.gen_range(0..=4u16);
            let c = rng.gen_range(0..=4u16);
            let deg = a as u32 + b as u32 + c as u32;
            if (4..=5).contains(&deg) {
                f.insert_add([a, b, c], rat_int(rng.gen_range(1..=3)));
            }
        }
        if f.is_zero() || f.order().unwrap_or(0) < 2 {
            continue;
        }
        eprintln!("trial {}: {}", trial, f);
        let t0 = std::time::Instant::now();
        let r = analyze(&f, &AnalyzeOptions::default());
        eprintln!("  -> {:?} in {:?}", r.map(|x| x.is_blow_ade), t0.elapsed());
    }
}

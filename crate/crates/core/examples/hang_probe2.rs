//! Stage probe: classification and extraction timing on the slow input.

use blowade::blowup::{extract_principal_part, local_strict_transform, Chart, ExtractOptions};
use blowade::curve::{classify_ade, singular_points};
use blowade::parse::parse_polynomial;
use blowade::poly::Rat;
use num_traits::Zero;

fn main() {
    let f = parse_polynomial("2*z3^3 + 2*z2^2*z3 - z2^3 - z1*z3^2 + z1^2*z2*z3^2").unwrap();
    let f3 = parse_polynomial("2*z3^3 + 2*z2^2*z3 - z2^3 - z1*z3^2").unwrap();
    let pts = singular_points(&f3, 64).unwrap();
    eprintln!("points: {:?}", pts.iter().map(|p| p.point.to_string()).collect::<Vec<_>>());
    let t0 = std::time::Instant::now();
    let cl = classify_ade(&pts[0].local_equation).unwrap();
    eprintln!("classified {:?} in {:?}", cl.ade, t0.elapsed());
    let t0 = std::time::Instant::now();
    let (local, chart, _d) = local_strict_transform(&f, &pts[0].point).unwrap();
    eprintln!("local strict transform ({} terms) in {:?}", local.num_terms(), t0.elapsed());
    for trunc in [16u32, 24, 32, 40, 48] {
        let t0 = std::time::Instant::now();
        let data = extract_principal_part(
            &local,
            &cl,
            chart,
            [Rat::zero(), Rat::zero()],
            ExtractOptions { truncation: trunc, max_blow_order: trunc - 3 },
        );
        eprintln!(
            "extract at {} -> {:?} in {:?}",
            trunc,
            data.map(|d| (d.m, d.rounds)).map_err(|e| e.kind()),
            t0.elapsed()
        );
    }
}

//! Stage-by-stage timing probe for a slow input. Not part of the test suite.

use blowade::curve::singular_points;
use blowade::parse::parse_polynomial;

fn main() {
    let f3 = parse_polynomial("2*z3^3 + 2*z2^2*z3 - z2^3 - z1*z3^2").unwrap();
    eprintln!("f3 = {}", f3);
    let t0 = std::time::Instant::now();
    let pts = singular_points(&f3, 64);
    eprintln!("singular_points -> {:?} in {:?}", pts.map(|p| p.len()), t0.elapsed());
}

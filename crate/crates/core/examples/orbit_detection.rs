//! Limit-cycle detection on a chain with an absorbing state and a
//! two-cycle, for every indicator and a few random functions.

use imc::{builtin, default_suite, iterate_orbit, OrbitParams};

fn main() -> imc::Result<()> {
    let fam = builtin::two_cycle();
    let params = OrbitParams::default();
    for (name, f) in default_suite(fam.states(), 3, 7) {
        let r = iterate_orbit(&fam, &f, &params)?;
        match r.detected_period {
            Some(p) => println!("{name:<12} period {p}, cycle {:?}", r.limit_cycle),
            None => println!("{name:<12} no period within {} iterations", r.iterations),
        }
    }
    Ok(())
}

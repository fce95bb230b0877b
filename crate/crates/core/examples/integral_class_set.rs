//! The constellation LP over all integral solutions is exact.

use liftgap::instances::{random_instance, LabeledInstance, Mode};
use liftgap::proper_constructions::theorem_gap1_classset;
use liftgap::rational::fmt_q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> liftgap::Result<()> {
    for (seed, mode, bound) in [(1, Mode::Cfl, 2), (2, Mode::Lbfl, 2), (3, Mode::Cfl, 3)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = LabeledInstance::plain(random_instance(&mut rng, 3, 4, mode, bound)?);
        let (cs, r) = theorem_gap1_classset(&inst, 1 << 16)?;
        println!(
            "{mode:?} seed {seed}: {} classes, LP {} = integral {}, mass in [{}, {}], complexity {}, passed {}",
            cs.len(),
            fmt_q(&r.lp_optimum),
            fmt_q(&r.integral_optimum),
            fmt_q(&r.min_mass),
            fmt_q(&r.max_mass),
            fmt_q(&r.complexity),
            r.passed
        );
    }
    Ok(())
}

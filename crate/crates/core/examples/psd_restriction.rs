//! LS+ check: the diagonal lift of the root y vector is PSD.

use liftgap::ls_hierarchy::psd_restriction_check;
use liftgap::rational::{fmt_q, qi};
use liftgap::witnesses::{root_from_params, LsParams};

fn main() -> liftgap::Result<()> {
    for n in [10, 20, 30] {
        let p = LsParams::new(n, n, qi(10))?;
        let root = root_from_params(&p);
        let r = psd_restriction_check(&root.y)?;
        let min = r.pivots.iter().min().cloned().unwrap_or_default();
        println!("n=l={n}: PSD {} with {} pivots, smallest {}", r.psd, r.pivots.len(), fmt_q(&min));
    }
    Ok(())
}

//! A star-feasible solution that no complexity-3/4 class set reproduces.

use liftgap::proper_constructions::example1_verify;

fn main() -> liftgap::Result<()> {
    let r = example1_verify()?;
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(())
}

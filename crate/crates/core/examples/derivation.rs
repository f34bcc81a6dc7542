//! Prints a do-calculus derivation of the front-door effect and verifies it.
use causal_ident::docalc::{derive_effect, verify_derivation, DeriveResult};
use causal_ident::graph::fixtures::front_door;

fn main() -> causal_ident::Result<()> {
    let g = front_door();
    let (x, y) = (g.set(&["X"])?, g.set(&["Y"])?);
    match derive_effect(&x, &y, &g)? {
        DeriveResult::Derived(d) => {
            print!("{}", d.pretty());
            println!("verdict: {:?}", verify_derivation(&d));
        }
        DeriveResult::NotIdentifiable { c, t } => println!("not identifiable: {} in {}", g.fmt_set(&c), g.fmt_set(&t)),
    }
    Ok(())
}

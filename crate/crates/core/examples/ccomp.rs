use causal_ident::ccomp::{c_components, observable_blocks};
use causal_ident::graph::CausalGraph;

fn main() -> causal_ident::Result<()> {
    // Two confounded pairs sharing no latent: {A, C} and {B, D}.
    let g = CausalGraph::builder()
        .observable("A")
        .observable("B")
        .observable("C")
        .observable("D")
        .latent("U1")
        .latent("U2")
        .edge("A", "B")
        .edge("B", "C")
        .edge("C", "D")
        .edge("U1", "A")
        .edge("U1", "C")
        .edge("U2", "B")
        .edge("U2", "D")
        .build()?;
    for block in observable_blocks(&c_components(&g), &g) {
        println!("{}", g.fmt_set(&block));
    }
    let sub = g.latent_subgraph(&g.set(&["A", "B", "C"])?)?;
    println!("within {{A, B, C}}:");
    for block in observable_blocks(&c_components(&sub), &sub) {
        println!("{}", sub.fmt_set(&block));
    }
    Ok(())
}

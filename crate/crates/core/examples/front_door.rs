//! Identifies the front-door effect and checks it against ground truth.
use causal_ident::graph::CausalGraph;
use causal_ident::ident::{causal_effect, IdentResult};
use causal_ident::oracle::check_estimand;

fn main() -> causal_ident::Result<()> {
    let g = CausalGraph::parse(include_str!("graphs/front_door.cg"))?;
    let (x, y) = (g.set(&["X"])?, g.set(&["Y"])?);
    let IdentResult::Identifiable(e) = causal_effect(&x, &y, &g)? else {
        unreachable!("the front-door effect is identifiable");
    };
    println!("P(y | do(x)) = {}", e.pretty(&g));
    let report = check_estimand(&e, &g, &x, &y, 100, 0)?;
    println!("100 random models, max error {:.2e}", report.max_error);
    Ok(())
}

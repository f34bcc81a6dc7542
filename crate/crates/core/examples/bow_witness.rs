//! The bow graph: X -> Y with a hidden common cause. No formula recovers
//! P(y | do(x)); the witness search exhibits two models that prove it.
use causal_ident::graph::fixtures::bow;
use causal_ident::ident::{causal_effect, IdentResult};
use causal_ident::oracle::{witness_search, DEFAULT_WITNESS_BUDGET};
use causal_ident::table::Assignment;

fn main() -> causal_ident::Result<()> {
    let g = bow();
    let (x, y) = (g.set(&["X"])?, g.set(&["Y"])?);
    if let IdentResult::NotIdentifiable { c, t } = causal_effect(&x, &y, &g)? {
        println!("not identifiable: Q[{}] from Q[{}]", g.fmt_set(&c), g.fmt_set(&t));
    }
    let Some(w) = witness_search(&g, &x, &y, DEFAULT_WITNESS_BUDGET, 0)? else {
        println!("no witness within budget");
        return Ok(());
    };
    println!("observational gap {:.2e}, causal gap {:.2e}", w.observational_gap, w.causal_gap);
    let xv = g.node("X")?;
    for (name, m) in [("m1", &w.m1), ("m2", &w.m2)] {
        let truth = m.interventional_truth(&Assignment::from_pairs(g.universe_len(), &[(xv, 1)]), &y)?;
        println!("{name}: P(y=1 | do(x=1)) = {:.4}", truth.data()[1]);
    }
    Ok(())
}

use causal_ident::graph::fixtures::back_door;
use causal_ident::ident::{causal_effect, compute_q};
use causal_ident::oracle::check_estimand;

fn main() -> causal_ident::Result<()> {
    let g = back_door();
    let (x, y) = (g.set(&["X"])?, g.set(&["Y"])?);
    let e = causal_effect(&x, &y, &g)?;
    let est = e.estimand().expect("identifiable");
    println!("P(y | do(x)) = {}", est.pretty(&g));

    // The same machinery answers Q[S] queries directly.
    let q = compute_q(&g.set(&["Y"])?, &g)?;
    println!("Q[Y] = {}", q.estimand().expect("identifiable").pretty(&g));

    let r = check_estimand(est, &g, &x, &y, 100, 1)?;
    println!("max error over {} models: {:.2e}", r.trials, r.max_error);
    Ok(())
}

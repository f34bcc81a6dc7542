//! Random graphs, random queries: every identified estimand is checked
//! against truncated factorization and every derivation is verified.
use causal_ident::docalc::{derive_effect, verify_derivation, DeriveResult};
use causal_ident::ident::{causal_effect, IdentResult};
use causal_ident::oracle::{check_estimand, random_graph};
use causal_ident::graph::VarSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> causal_ident::Result<()> {
    let graphs: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut yes, mut no, mut worst, mut rejected) = (0, 0, 0.0f64, 0);
    for i in 0..graphs {
        let g = random_graph(rng.gen_range(2..=5), rng.gen_range(0..=3), 0.5, i)?;
        let obs = g.observables().to_vec();
        let split = rng.gen_range(1..obs.len());
        let t: VarSet = obs[..split].iter().copied().collect();
        let s: VarSet = obs[split..].iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        if s.is_empty() {
            continue;
        }
        match causal_effect(&t, &s, &g)? {
            IdentResult::Identifiable(e) => {
                yes += 1;
                worst = worst.max(check_estimand(&e, &g, &t, &s, 10, i)?.max_error);
                if let DeriveResult::Derived(d) = derive_effect(&t, &s, &g)? {
                    rejected += usize::from(!verify_derivation(&d).is_accept());
                }
            }
            IdentResult::NotIdentifiable { .. } => no += 1,
        }
    }
    println!("{yes} identifiable, {no} not identifiable");
    println!("max estimand error {worst:.2e}, rejected derivations {rejected}");
    Ok(())
}

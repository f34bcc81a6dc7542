//! d-separation queries and the graphs behind do-calculus rules.
use causal_ident::graph::fixtures::front_door;
use causal_ident::sep::{d_separated_in, rule_applicable, Rule, RuleInstance};

fn main() -> causal_ident::Result<()> {
    let g = front_door();
    let s = |n: &[&str]| g.set(n);
    for (x, y, z) in [(&["X"][..], &["Y"][..], &[][..]), (&["X"], &["Y"], &["Z"]), (&["Z"], &["U"], &["X"])] {
        let sep = d_separated_in(&g, &s(x)?, &s(y)?, &s(z)?)?;
        println!("{:?} _||_ {:?} | {:?}: {sep}", x, y, z);
    }
    // Rule 2: P(z | do(x)) = P(z | x), licensed in the graph without X's outgoing arrows.
    let r = RuleInstance { rule: Rule::Two, x: s(&[])?, y: s(&["Z"])?, z: s(&["X"])?, w: s(&[])? };
    let ev = rule_applicable(&g, &r)?;
    println!("rule 2 holds: {} (cut outgoing {})", ev.holds, g.fmt_set(&ev.cut_outgoing));
    println!("{}", serde_json::to_string(&ev.to_json(&g)).unwrap());
    Ok(())
}

//! Rule 1 is never needed: any applicable instance splits into a rule-2 and
//! a rule-3 instance that both apply.
use causal_ident::docalc::expand_rule1;
use causal_ident::graph::fixtures::chain;
use causal_ident::sep::{rule_applicable, Rule, RuleInstance};

fn main() -> causal_ident::Result<()> {
    let g = chain();
    let s = |n: &[&str]| g.set(n);
    let r1 = RuleInstance { rule: Rule::One, x: s(&[])?, y: s(&["Y"])?, z: s(&["X"])?, w: s(&["Z"])? };
    println!("rule 1 holds: {}", rule_applicable(&g, &r1)?.holds);
    let (r2, r3) = expand_rule1(&g, &r1)?;
    for r in [r2, r3] {
        let ev = rule_applicable(&g, &r)?;
        println!(
            "rule {}: x={} z={} w={} holds={}",
            r.rule.number(),
            g.fmt_set(&r.x),
            g.fmt_set(&r.z),
            g.fmt_set(&r.w),
            ev.holds
        );
    }
    Ok(())
}

//! Deterministic DOT rendering of a groupoid: objects as nodes, arrows as
//! labeled `d → r` edges, unit arrows suppressed unless requested.

use germoid_core::groupoid::FiniteGroupoid;

pub fn render(g: &FiniteGroupoid, names: Option<&[String]>, show_units: bool) -> String {
    let name = |x: usize| -> String {
        match names {
            Some(ns) if x < ns.len() => ns[x].clone(),
            _ => format!("p{x}"),
        }
    };
    let units = g.unit_image();
    let mut out = String::from("digraph groupoid {\n");
    for x in 0..g.object_count() {
        out.push_str(&format!("  n{x} [label=\"{}\"];\n", name(x)));
    }
    for a in 0..g.arrow_count() {
        let is_unit = germoid_core::bits::contains(units, a);
        if is_unit && !show_units {
            continue;
        }
        out.push_str(&format!(
            "  n{} -> n{} [label=\"a{a}\"];\n",
            g.dmap[a], g.rmap[a]
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use germoid_core::fintop::FiniteSpace;
    use germoid_core::groupoid::{pair_groupoid, unit_groupoid};

    #[test]
    fn unit_groupoid_has_no_visible_edges() {
        let g = unit_groupoid(&FiniteSpace::discrete(2));
        let text = render(&g, None, false);
        assert_eq!(text.matches(" -> ").count(), 0);
        assert_eq!(text.matches("label=").count(), 2);
    }

    #[test]
    fn pair_groupoid_shows_two_non_unit_edges() {
        let g = pair_groupoid(&FiniteSpace::discrete(2)).unwrap();
        let text = render(&g, None, false);
        assert_eq!(text.matches(" -> ").count(), 2);
        let with_units = render(&g, None, true);
        assert_eq!(with_units.matches(" -> ").count(), 4);
    }

    #[test]
    fn output_is_stable() {
        let g = pair_groupoid(&FiniteSpace::discrete(3)).unwrap();
        assert_eq!(render(&g, None, false), render(&g, None, false));
    }
}

//! Deterministic rendering of extension sets.

use raf_core::af::{set_key, Extension};
use raf_core::Af;
use serde_json::json;

use crate::Format;

fn sorted_names(af: &Af, s: raf_core::ArgSet) -> Vec<String> {
    set_key(af, s).1
}

pub fn render(af: &Af, exts: &[Extension], fmt: Format) -> String {
    let mut out = String::new();
    for e in exts {
        let members = sorted_names(af, e.members);
        let line = match fmt {
            Format::Text => format!("{{{}}}", members.join(",")),
            Format::Json => json!({ "extension": members, "range": sorted_names(af, e.range) }).to_string(),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use raf_core::ArgSet;

    #[test]
    fn text_and_json_lines() {
        let af = Af::from_edges(&["b", "a", "c"], &[("a", "c")]).unwrap();
        let e = Extension { members: ArgSet(0b011), range: ArgSet(0b111) };
        assert_eq!(render(&af, &[e], Format::Text), "{a,b}\n");
        assert_eq!(render(&af, &[e], Format::Json), "{\"extension\":[\"a\",\"b\"],\"range\":[\"a\",\"b\",\"c\"]}\n");
        assert_eq!(render(&af, &[], Format::Json), "");
    }
}

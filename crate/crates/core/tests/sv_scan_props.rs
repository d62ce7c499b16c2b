// SPDX-License-Identifier: Apache-2.0

use chipkit::sv_scan::{
    extract_csr_candidates, lint, parse_modules, Direction, NamingConvention, RuleSet, ScanError, SourceFile,
};
use chipkit::Access;
use proptest::prelude::*;

const FRAGMENTS: &[&str] = &[
    "module",
    "endmodule",
    "input",
    "output",
    "inout",
    "logic",
    "wire",
    "reg",
    "always",
    "always_ff",
    "(",
    ")",
    "[",
    "]",
    ":",
    ";",
    ",",
    "#(",
    "parameter",
    "=",
    "7",
    "0",
    "8'hff",
    "cfg_a",
    "sts_b",
    "diag_c",
    "x",
    "//",
    "/*",
    "*/",
    "\"",
    "`define",
    "`FF",
    "\\esc ",
    "\n",
    " ",
    "\t",
    "begin",
    "end",
    "generate",
    "$clog2",
];

fn soup() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(FRAGMENTS), 0..80).prop_map(|v| v.join(" "))
}

#[derive(Debug, Clone)]
struct PortSpec {
    input: bool,
    width: u32,
    role: usize,
}

fn module_strategy() -> impl Strategy<Value = Vec<PortSpec>> {
    prop::collection::vec(
        (any::<bool>(), 1u32..=32, 0usize..4).prop_map(|(input, width, role)| PortSpec { input, width, role }),
        1..12,
    )
}

/// Renders a module; `comment(i)` is appended to port `i`'s line and
/// `block(i)` is placed inside it.
fn render(ports: &[PortSpec], comment: impl Fn(usize) -> String, block: impl Fn(usize) -> String) -> String {
    let mut s = String::from("module dut (\n");
    for (i, p) in ports.iter().enumerate() {
        let dir = if p.input { "input" } else { "output" };
        let range = if p.width == 1 {
            String::new()
        } else {
            format!("[{}:0]", p.width - 1)
        };
        let name = format!("{}{i}", ["cfg_p", "sts_p", "diag_p", "plain"][p.role]);
        let sep = if i + 1 == ports.len() { "" } else { "," };
        s += &format!("  {dir} {} logic {range} {name}{sep} {}\n", block(i), comment(i));
    }
    s += ");\n  logic [3:0] inner;\nendmodule\n";
    s
}

/// Comment bodies full of keywords the scanner and linter would otherwise
/// react to. Never contains a terminator or a newline.
fn comment_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop::sample::select(
            &[
                "wire",
                "reg",
                "always",
                "module fake (",
                "module",
                "endmodule",
                "input",
                "cfg_z",
                "(",
                ";",
                "\"",
            ][..],
        ),
        0..8,
    )
    .prop_map(|v| v.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parse_is_total_on_token_soup(text in soup()) {
        let src = SourceFile::new("soup.sv", text);
        match parse_modules(&src) {
            Ok(_) | Err(ScanError::MalformedSource { .. }) | Err(ScanError::DuplicateModule { .. }) => {}
        }
        let _ = lint(&src, &RuleSet::default());
    }

    #[test]
    fn parse_is_total_on_arbitrary_text(text in "\\PC*") {
        let src = SourceFile::new("any.sv", text);
        let _ = parse_modules(&src);
        let _ = lint(&src, &RuleSet::default());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn comments_do_not_change_the_result(
        ports in module_strategy(),
        line_comments in prop::collection::vec(comment_text(), 12),
        block_comments in prop::collection::vec(comment_text(), 12),
    ) {
        let plain = SourceFile::new("dut.sv", render(&ports, |_| String::new(), |_| String::new()));
        let noisy = SourceFile::new(
            "dut.sv",
            render(
                &ports,
                |i| format!("// {}", line_comments[i]),
                |i| format!("/* {} */", block_comments[i]),
            ),
        );
        let a = parse_modules(&plain).unwrap();
        let b = parse_modules(&noisy).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(lint(&plain, &RuleSet::default()), lint(&noisy, &RuleSet::default()));

        let m = &a.modules[0];
        prop_assert_eq!(m.ports.len(), ports.len());
        for (p, spec) in m.ports.iter().zip(&ports) {
            prop_assert_eq!(p.width_bits(), Some(spec.width));
            prop_assert_eq!(p.direction, if spec.input { Direction::Input } else { Direction::Output });
        }
        // control inputs and status outputs are the only CSR candidates
        let expected: Vec<(String, u32, Access)> = ports
            .iter()
            .enumerate()
            .filter_map(|(i, p)| match (p.role, p.input) {
                (0, true) => Some((format!("cfg_p{i}"), p.width, Access::Rw)),
                (1, false) => Some((format!("sts_p{i}"), p.width, Access::Ro)),
                _ => None,
            })
            .collect();
        let got: Vec<(String, u32, Access)> = extract_csr_candidates(m, &NamingConvention::default())
            .candidates
            .into_iter()
            .map(|c| (c.name, c.width_bits, c.access))
            .collect();
        prop_assert_eq!(got, expected);
    }
}

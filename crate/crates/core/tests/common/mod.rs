// SPDX-License-Identifier: Apache-2.0

//! Generators shared by the property and acceptance tests.

#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::Rng;

use spikegate::netlist::{BlockParams, EndpointRef, NetlistAst, Statement};
use spikegate::Tick;

fn ident() -> impl Strategy<Value = String> {
    "[a-z_][a-z0-9_]{0,7}"
}

fn endpoint() -> impl Strategy<Value = EndpointRef> {
    (ident(), proptest::option::of(ident())).prop_map(|(name, port)| EndpointRef { name, port })
}

fn statement() -> impl Strategy<Value = Statement> {
    prop_oneof![
        (ident(), vec(any::<Tick>(), 0..6)).prop_map(|(name, mut spikes)| {
            spikes.sort_unstable();
            spikes.dedup();
            Statement::Source { name, spikes }
        }),
        (
            ident(),
            ident(),
            proptest::option::of(any::<u64>()),
            proptest::option::of(0..64u64),
            proptest::option::of(any::<Tick>()),
        )
            .prop_map(|(kind, name, inputs, half_period, first)| Statement::Block {
                kind,
                name,
                params: BlockParams {
                    inputs,
                    half_period,
                    first,
                },
            }),
        (endpoint(), endpoint(), prop_oneof![Just(0u64), any::<u64>()])
            .prop_map(|(from, to, delay)| Statement::Connect { from, to, delay }),
        endpoint().prop_map(Statement::Probe),
    ]
}

/// Syntactically valid netlists: declared names are unique and there is
/// at most one `run`, placed last.
pub fn netlist_ast() -> impl Strategy<Value = NetlistAst> {
    (vec(statement(), 0..24), proptest::option::of(1..100_000u64)).prop_map(|(stmts, run)| {
        let mut statements: Vec<Statement> = stmts
            .into_iter()
            .enumerate()
            .map(|(i, s)| match s {
                Statement::Source { name, spikes } => Statement::Source {
                    name: format!("{name}_{i}"),
                    spikes,
                },
                Statement::Block { kind, name, params } => Statement::Block {
                    kind,
                    name: format!("{name}_{i}"),
                    params,
                },
                other => other,
            })
            .collect();
        if let Some(t) = run {
            statements.push(Statement::Run(t));
        }
        NetlistAst::from_statements(statements)
    })
}

/// Edits that make any single statement line unparsable.
const CORRUPTIONS: [fn(&str) -> String; 5] = [
    |l| format!("{l} @"),
    |l| format!("frobnicate {l}"),
    |l| format!("{l} ]"),
    |l| format!("{l} $x"),
    |_| "connect ->".to_string(),
];

/// Corrupts `k` distinct lines of `text` (which must have at least `k`
/// lines) and returns the new text.
pub fn corrupt_lines(text: &str, k: usize, rng: &mut impl Rng) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    for i in sample(rng, lines.len(), k) {
        let edit = CORRUPTIONS[rng.gen_range(0..CORRUPTIONS.len())];
        lines[i] = edit(&lines[i]);
    }
    lines.join("\n")
}

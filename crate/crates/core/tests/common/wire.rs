//! Proptest strategies for protocol messages.

use armordb::protocol::{
    command_table, Arity, CommandRequest, CommandResponse, ErrorCode, WireRequest,
};
use proptest::prelude::*;

pub fn identifier() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_-]{0,10}"
}

/// Any text, including quotes, newlines and non-ASCII.
pub fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => identifier(),
        1 => any::<String>(),
        1 => "[ a-z\"'\\\\\n\t(){}:é→]{0,12}",
    ]
}

fn arg_count(arity: Arity) -> std::ops::RangeInclusive<usize> {
    match arity {
        Arity::Exactly(k) => k..=k,
        Arity::AtLeast(k) => k..=k + 3,
        Arity::Between(lo, hi) => lo..=hi,
    }
}

pub fn request() -> impl Strategy<Value = CommandRequest> {
    let rows: Vec<_> = command_table().collect();
    (identifier(), identifier(), prop::sample::select(rows)).prop_flat_map(
        |(client, reference, row)| {
            prop::collection::vec(text(), arg_count(row.arity)).prop_map(move |args| {
                CommandRequest::new(
                    &client,
                    &reference,
                    row.verb,
                    row.primary,
                    row.secondary,
                    args,
                )
                .expect("generated from a table row")
            })
        },
    )
}

pub fn response() -> impl Strategy<Value = CommandResponse> {
    let errors: Vec<ErrorCode> = ErrorCode::ALL
        .into_iter()
        .filter(|c| *c != ErrorCode::Ok)
        .collect();
    (
        any::<bool>(),
        any::<bool>(),
        prop::sample::select(errors),
        text(),
        prop::collection::vec(text(), 0..5),
        any::<bool>(),
        any::<u64>(),
    )
        .prop_map(
            |(success, consistent, code, desc, names, applied, revision)| CommandResponse {
                success,
                consistent,
                error_code: if success { ErrorCode::Ok } else { code },
                error_description: if success || !desc.is_empty() {
                    desc
                } else {
                    "failed".into()
                },
                queried_names: names,
                applied,
                revision,
            },
        )
}

/// Wire requests that may be invalid in every field.
pub fn raw_request() -> impl Strategy<Value = WireRequest> {
    let verb = prop_oneof![
        prop::sample::select(
            armordb::protocol::Verb::ALL
                .map(|v| v.as_str().to_owned())
                .to_vec()
        ),
        text()
    ];
    let spec = prop_oneof![
        Just(String::new()),
        prop::sample::select(
            armordb::protocol::Spec::ALL
                .map(|s| s.as_str().to_owned())
                .to_vec()
        ),
        text()
    ];
    (
        text(),
        text(),
        verb,
        spec.clone(),
        spec,
        prop::collection::vec(text(), 0..5),
    )
        .prop_map(
            |(client_name, reference_name, command, primary_spec, secondary_spec, args)| {
                WireRequest {
                    client_name,
                    reference_name,
                    command,
                    primary_spec,
                    secondary_spec,
                    args,
                }
            },
        )
}

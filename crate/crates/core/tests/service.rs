//! Scripted command sequences against the request dispatcher, without the
//! network layer.

use std::path::Path;

use armordb::protocol::{parse_command_line, CommandRequest, CommandResponse, ErrorCode};
use armordb::registry::{Flags, ReferenceMap, RegistryConfig};
use armordb::server::{ProcedureRegistry, Service};

fn service_with(config: RegistryConfig, procs: &str, base: &Path) -> Service {
    Service::new(
        ReferenceMap::new(config),
        ProcedureRegistry::parse(procs).unwrap(),
        base.to_path_buf(),
    )
}

fn service() -> Service {
    service_with(RegistryConfig::default(), "", Path::new("."))
}

fn send(svc: &Service, client: &str, reference: &str, line: &str) -> CommandResponse {
    let wire = parse_command_line(line)
        .unwrap()
        .into_wire(client, reference);
    match CommandRequest::try_from(wire) {
        Ok(req) => svc.execute(&req),
        Err(e) => CommandResponse::error(&e, false, 0),
    }
}

#[track_caller]
fn ok(svc: &Service, client: &str, reference: &str, line: &str) -> CommandResponse {
    let r = send(svc, client, reference, line);
    assert!(
        r.success,
        "{line}: {} {}",
        r.error_code, r.error_description
    );
    r
}

#[track_caller]
fn fails(
    svc: &Service,
    client: &str,
    reference: &str,
    line: &str,
    code: ErrorCode,
) -> CommandResponse {
    let r = send(svc, client, reference, line);
    assert_eq!(r.error_code, code, "{line}: {}", r.error_description);
    assert!(!r.success && !r.error_description.is_empty());
    r
}

fn names(r: &CommandResponse) -> Vec<&str> {
    r.queried_names.iter().map(String::as_str).collect()
}

#[test]
fn map_example() {
    let s = service();
    ok(&s, "nodeA", "map", "CREATE");
    assert!(ok(&s, "nodeA", "map", "ADD CLASS Sphere").consistent);
    ok(
        &s,
        "nodeA",
        "map",
        "ADD OBJECTPROP INDIVIDUAL hasNorth LivingRoom Corridor",
    );
    let r = ok(
        &s,
        "nodeB",
        "map",
        "QUERY OBJECTPROP IND hasNorth LivingRoom",
    );
    assert_eq!(names(&r), ["ex:Corridor"]);
    assert!(r.consistent);
    assert_eq!(r.revision, 2);
}

#[test]
fn leases() {
    let s = service();
    ok(&s, "A", "map", "CREATE");
    ok(&s, "A", "map", "MOUNT");
    ok(&s, "A", "map", "MOUNT");
    fails(&s, "B", "map", "ADD CLASS Room", ErrorCode::ReferenceBusy);
    fails(&s, "B", "map", "MOUNT", ErrorCode::ReferenceBusy);
    fails(&s, "B", "map", "UNMOUNT", ErrorCode::NotLeaseHolder);
    fails(&s, "B", "map", "APPLY", ErrorCode::ReferenceBusy);
    fails(
        &s,
        "B",
        "map",
        "CONFIG FLAG buffered_manipulation true",
        ErrorCode::ReferenceBusy,
    );
    fails(&s, "B", "map", "DROP", ErrorCode::ReferenceBusy);
    ok(&s, "A", "map", "ADD INDIVIDUAL CLASS kitchen Room");
    assert_eq!(
        names(&ok(&s, "B", "map", "QUERY IND CLASS Room")),
        ["ex:kitchen"]
    );
    ok(&s, "B", "map", "REASON");
    ok(&s, "A", "map", "UNMOUNT");
    ok(&s, "B", "map", "ADD INDIVIDUAL CLASS hall Room");
    ok(&s, "A", "map", "ADD INDIVIDUAL CLASS bath Room");
    assert_eq!(names(&ok(&s, "C", "map", "QUERY IND CLASS Room")).len(), 3);

    ok(&s, "B", "map", "MOUNT");
    ok(&s, "admin", "map", "UNMOUNT FORCE");
    ok(&s, "A", "map", "MOUNT");
    ok(&s, "A", "map", "DROP");
    fails(
        &s,
        "A",
        "map",
        "QUERY IND CLASS Room",
        ErrorCode::UnknownReference,
    );
}

#[test]
fn mandatory_mount() {
    let cfg = RegistryConfig {
        mandatory_mount: true,
        ..RegistryConfig::default()
    };
    let s = service_with(cfg, "", Path::new("."));
    ok(&s, "A", "map", "CREATE");
    fails(&s, "A", "map", "ADD CLASS Room", ErrorCode::ReferenceBusy);
    ok(&s, "A", "map", "MOUNT");
    ok(&s, "A", "map", "ADD CLASS Room");
    ok(&s, "B", "map", "QUERY CLASS CLASS Room sub");
}

#[test]
fn buffered_manipulation_hides_changes_until_apply() {
    let s = service();
    ok(&s, "A", "k", "CREATE");
    ok(&s, "A", "k", "CONFIG FLAG buffered_manipulation true");
    let r = ok(&s, "A", "k", "ADD INDIVIDUAL CLASS c1 Cup");
    assert!(!r.applied);
    assert_eq!(r.revision, 0);
    assert!(names(&ok(&s, "B", "k", "QUERY IND CLASS Cup")).is_empty());
    let r = ok(&s, "A", "k", "APPLY");
    assert!(r.applied);
    assert_eq!(r.revision, 1);
    assert_eq!(names(&ok(&s, "B", "k", "QUERY IND CLASS Cup")), ["ex:c1"]);
    ok(&s, "A", "k", "ADD INDIVIDUAL CLASS c2 Cup");
    assert_eq!(names(&ok(&s, "B", "k", "QUERY IND CLASS Cup")).len(), 1);
    ok(&s, "B", "k", "REASON");
    assert_eq!(names(&ok(&s, "B", "k", "QUERY IND CLASS Cup")).len(), 2);
}

#[test]
fn lazy_reasoner_keeps_a_stale_consistency_flag() {
    let s = service();
    ok(&s, "A", "k", "CREATE");
    ok(&s, "A", "k", "CONFIG FLAG continuous_reasoner_update false");
    ok(&s, "A", "k", "ADD DISJOINT CLASS Cup Plate");
    let r = ok(&s, "A", "k", "ADD INDIVIDUAL CLASS x Cup");
    assert!(r.applied && r.consistent);
    let r = ok(&s, "A", "k", "ADD INDIVIDUAL CLASS x Plate");
    assert!(r.consistent, "stale until REASON");
    assert_eq!(r.revision, 3);
    let r = ok(&s, "A", "k", "REASON");
    assert!(!r.consistent);
    fails(
        &s,
        "A",
        "k",
        "QUERY CLASS IND x",
        ErrorCode::InconsistentOntology,
    );
    let r = ok(&s, "A", "k", "REMOVE INDIVIDUAL CLASS x Plate");
    assert!(!r.consistent, "still stale");
    assert!(ok(&s, "A", "k", "REASON").consistent);
}

#[test]
fn inconsistent_ontologies_can_be_repaired() {
    let s = service();
    ok(&s, "A", "k", "CREATE");
    ok(&s, "A", "k", "ADD CLASS CLASS Cup owl:Nothing");
    let r = ok(&s, "A", "k", "ADD INDIVIDUAL CLASS x Cup");
    assert!(!r.consistent);
    fails(
        &s,
        "B",
        "k",
        "QUERY IND CLASS Cup",
        ErrorCode::InconsistentOntology,
    );
    let r = ok(&s, "A", "k", "REMOVE CLASS CLASS Cup owl:Nothing");
    assert!(r.consistent);
    assert_eq!(names(&ok(&s, "B", "k", "QUERY IND CLASS Cup")), ["ex:x"]);
}

#[test]
fn queries() {
    let s = service();
    ok(&s, "A", "k", "CREATE");
    for line in [
        "ADD CLASS CLASS Cup Object",
        "ADD CLASS CLASS Mug Cup",
        "ADD EQUIV CLASS Mug Beaker",
        "ADD INDIVIDUAL CLASS m1 Mug",
        "ADD RANGE OBJECTPROP isOn Support",
        "ADD DOMAIN OBJECTPROP isOn Object",
        "ADD OBJECTPROP OBJECTPROP isOn touches",
        "ADD OBJECTPROP INDIVIDUAL isOn m1 t1",
    ] {
        ok(&s, "A", "k", line);
    }
    let q = |line: &str| ok(&s, "B", "k", line).queried_names;
    assert_eq!(q("QUERY CLASS IND m1 direct"), ["ex:Beaker", "ex:Mug"]);
    assert_eq!(
        q("QUERY CLASS IND m1"),
        ["ex:Beaker", "ex:Cup", "ex:Mug", "ex:Object"]
    );
    assert_eq!(q("QUERY CLASS IND t1 direct+top"), ["ex:Support"]);
    assert_eq!(q("QUERY IND CLASS Object direct"), Vec::<String>::new());
    assert_eq!(q("QUERY IND CLASS Object"), ["ex:m1"]);
    assert_eq!(
        q("QUERY IND CLASS \"ObjectSomeValuesFrom(touches Support)\""),
        ["ex:m1"]
    );
    assert_eq!(q("QUERY CLASS CLASS Cup sub"), ["ex:Beaker", "ex:Mug"]);
    assert_eq!(q("QUERY CLASS CLASS Cup sup"), ["ex:Object"]);
    assert_eq!(q("QUERY CLASS CLASS Mug equiv"), ["ex:Beaker"]);
    assert_eq!(q("QUERY OBJECTPROP IND touches m1"), ["ex:t1"]);
    fails(
        &s,
        "B",
        "k",
        "QUERY CLASS CLASS Cup sideways",
        ErrorCode::MalformedRequest,
    );
    fails(
        &s,
        "B",
        "k",
        "QUERY CLASS IND m1 some",
        ErrorCode::MalformedRequest,
    );
    fails(
        &s,
        "B",
        "k",
        "QUERY CLASS IND nobody",
        ErrorCode::UnknownEntity,
    );
    fails(
        &s,
        "B",
        "k",
        "QUERY IND CLASS \"ObjectUnionOf(Cup Mug)\"",
        ErrorCode::UnsupportedExpression,
    );
}

#[test]
fn replace_and_reserved_names() {
    let s = service();
    ok(&s, "A", "map", "CREATE");
    ok(
        &s,
        "A",
        "map",
        "ADD OBJECTPROP INDIVIDUAL isIn robot kitchen",
    );
    let r = ok(
        &s,
        "A",
        "map",
        "REPLACE OBJECTPROP INDIVIDUAL isIn robot hall kitchen",
    );
    assert_eq!(r.revision, 2);
    assert_eq!(
        names(&ok(&s, "A", "map", "QUERY OBJECTPROP IND isIn robot")),
        ["ex:hall"]
    );
    fails(
        &s,
        "A",
        "map",
        "ADD CLASS owl:Thing",
        ErrorCode::ReservedName,
    );
    fails(
        &s,
        "A",
        "map",
        "ADD INDIVIDUAL owl:Nothing",
        ErrorCode::ReservedName,
    );
    fails(&s, "A", "map", "CREATE", ErrorCode::DuplicateReference);
    fails(
        &s,
        "A",
        "nowhere",
        "ADD CLASS Room",
        ErrorCode::UnknownReference,
    );
    fails(&s, "A", "map", "ADD CLASS", ErrorCode::BadArity);
    fails(&s, "A", "map", "ADD FORCE", ErrorCode::UnknownCommand);
    fails(
        &s,
        "A",
        "map",
        "CONFIG FLAG colour true",
        ErrorCode::MalformedRequest,
    );
    fails(
        &s,
        "A",
        "map",
        "CONFIG FLAG buffered_manipulation maybe",
        ErrorCode::MalformedRequest,
    );
}

#[test]
fn files() {
    let dir = tempfile::tempdir().unwrap();
    let s = service_with(RegistryConfig::default(), "", dir.path());
    std::fs::write(
        dir.path().join("map.ofn"),
        "Prefix(ex:=<http://example.org/>)\nOntology(<http://example.org/map>\nObjectPropertyAssertion(ex:hasNorth ex:LivingRoom ex:Corridor)\n)\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("union.ofn"),
        "Ontology(\n SubClassOf(ex:A ObjectUnionOf(ex:B ex:C)))",
    )
    .unwrap();
    ok(&s, "A", "map", "CREATE");
    let r = ok(&s, "A", "map", "LOAD FILE map.ofn");
    assert_eq!(r.revision, 1);
    ok(&s, "A", "map", "ADD CLASS Sphere");
    ok(&s, "A", "map", "SAVE FILE out.ofn");
    let saved = std::fs::read_to_string(dir.path().join("out.ofn")).unwrap();
    let dump = ok(&s, "A", "map", "DUMP").error_description;
    assert_eq!(saved, dump);
    assert!(dump.starts_with("Prefix(ex:=<http://example.org/>)\n"));
    assert!(dump.contains("Ontology(<http://example.org/map>\nDeclaration(Class(ex:Sphere))\n"));

    ok(&s, "A", "copy", "CREATE");
    ok(&s, "A", "copy", "LOAD FILE out.ofn");
    assert_eq!(ok(&s, "A", "copy", "DUMP").error_description, dump);

    let r = fails(
        &s,
        "A",
        "map",
        "LOAD FILE union.ofn",
        ErrorCode::UnsupportedExpression,
    );
    assert!(r.error_description.contains("ObjectUnionOf") && r.error_description.contains("2:"));
    fails(
        &s,
        "A",
        "map",
        "LOAD FILE missing.ofn",
        ErrorCode::FileIoError,
    );
    fails(
        &s,
        "A",
        "map",
        "SAVE FILE no/such/dir/x.ofn",
        ErrorCode::FileIoError,
    );
    assert_eq!(ok(&s, "A", "map", "DUMP").error_description, dump);
}

const PROCS: &str = "\
# test procedures
proc declare2(a, b)
    ADD CLASS $a
    ADD CLASS $a $b

proc nothing()

proc quoted(x)
    ADD INDIVIDUAL CLASS obj \"ObjectSomeValuesFrom(isOn $x)\"
    QUERY IND CLASS \"ObjectSomeValuesFrom(isOn $x)\"
";

#[test]
fn procedure_failure_keeps_earlier_steps() {
    let s = service_with(RegistryConfig::default(), PROCS, Path::new("."));
    ok(&s, "A", "k", "CREATE");
    let r = fails(
        &s,
        "A",
        "k",
        "PROC declare2 Cup Mug",
        ErrorCode::ProcedureFailed,
    );
    assert!(
        r.error_description.contains("step 2"),
        "{}",
        r.error_description
    );
    assert!(
        r.error_description.contains("102"),
        "{}",
        r.error_description
    );

    let replay = service();
    ok(&replay, "A", "k", "CREATE");
    ok(&replay, "A", "k", "ADD CLASS Cup");
    assert_eq!(
        ok(&s, "A", "k", "DUMP").error_description,
        ok(&replay, "A", "k", "DUMP").error_description
    );
    // the temporary mount was released
    ok(&s, "B", "k", "MOUNT");
}

#[test]
fn procedures() {
    let s = service_with(RegistryConfig::default(), PROCS, Path::new("."));
    ok(&s, "A", "k", "CREATE");
    let rev = ok(&s, "A", "k", "PROC nothing").revision;
    assert_eq!(rev, 0);
    let r = ok(&s, "A", "k", "PROC quoted Table");
    assert_eq!(names(&r), ["ex:obj"]);
    fails(&s, "A", "k", "PROC missing", ErrorCode::UnknownProcedure);
    fails(&s, "A", "k", "PROC quoted", ErrorCode::BadArity);
    ok(&s, "B", "k", "MOUNT");
    fails(&s, "A", "k", "PROC nothing", ErrorCode::ReferenceBusy);
    ok(&s, "B", "k", "PROC nothing");
    // a procedure run by the holder keeps the holder's mount
    fails(&s, "A", "k", "MOUNT", ErrorCode::ReferenceBusy);
}

#[test]
fn abstract_class_learns_a_scene() {
    let s = service();
    ok(&s, "robot", "k", "CREATE");
    for line in [
        "ADD CLASS CLASS Cup Object",
        "ADD CLASS CLASS Table Object",
        "ADD INDIVIDUAL CLASS cup1 Cup",
        "ADD INDIVIDUAL CLASS table1 Table",
        "ADD INDIVIDUAL CLASS cup2 Cup",
        "ADD INDIVIDUAL CLASS table2 Table",
        "ADD OBJECTPROP INDIVIDUAL contains scene1 cup1",
        "ADD OBJECTPROP INDIVIDUAL contains scene1 table1",
        "ADD OBJECTPROP INDIVIDUAL contains scene2 cup2",
        "ADD OBJECTPROP INDIVIDUAL contains scene3 table2",
    ] {
        ok(&s, "robot", "k", line);
    }
    let r = ok(&s, "robot", "k", "PROC abstract-class scene1 SceneA");
    assert_eq!(names(&r), ["ex:scene1"]);
    ok(
        &s,
        "robot",
        "k",
        "ADD OBJECTPROP INDIVIDUAL contains scene2 table1",
    );
    assert_eq!(
        names(&ok(&s, "other", "k", "QUERY IND CLASS SceneA")),
        ["ex:scene1", "ex:scene2"]
    );
    assert_eq!(
        names(&ok(&s, "other", "k", "QUERY CLASS IND scene3")),
        Vec::<&str>::new()
    );
    let r = fails(
        &s,
        "robot",
        "k",
        "PROC abstract-class cup1 SceneB",
        ErrorCode::ProcedureFailed,
    );
    assert!(r.error_description.contains("step 1"));
    fails(
        &s,
        "robot",
        "k",
        "PROC abstract-class scene1 owl:Thing",
        ErrorCode::ProcedureFailed,
    );
    fails(
        &s,
        "robot",
        "k",
        "PROC abstract-class scene1",
        ErrorCode::BadArity,
    );
}

#[test]
fn decode_errors_become_responses() {
    let s = service();
    for line in [
        &b"not json"[..],
        b"",
        b"\xff\xfe",
        br#"{"client_name":"a"}"#,
    ] {
        let r = s.handle_line(line);
        assert_eq!(r.error_code, ErrorCode::MalformedRequest);
    }
    let r = s.handle_line(br#"{"client_name":"a","reference_name":"b","command":"EXPLODE","primary_spec":"","secondary_spec":"","args":[]}"#);
    assert_eq!(r.error_code, ErrorCode::UnknownCommand);
}

#[test]
fn flags_default_from_config() {
    let cfg = RegistryConfig {
        default_flags: Flags {
            buffered_manipulation: true,
            continuous_reasoner_update: true,
        },
        mandatory_mount: false,
    };
    let s = service_with(cfg, "", Path::new("."));
    ok(&s, "A", "k", "CREATE");
    assert!(!ok(&s, "A", "k", "ADD CLASS Cup").applied);
}

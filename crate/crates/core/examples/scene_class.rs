//! Learning a scene class from one example: `abstract-class` turns the
//! property assertions of `scene1` into a class definition, and the
//! reasoner then recognizes `scene2` as another instance.

use armordb::client::{format_human, Connection};
use armordb::server::{spawn, ServerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let server = spawn(ServerConfig {
        listen: "127.0.0.1:0".parse()?,
        base_dir: data.into(),
        ..ServerConfig::default()
    })?;
    let mut conn = Connection::connect(server.addr())?;
    for cmd in [
        "CREATE",
        "LOAD FILE kitchen.ofn",
        "QUERY IND CLASS SceneA",
        "PROC abstract-class scene1 SceneA",
        "QUERY IND CLASS SceneA",
        "QUERY CLASS CLASS SceneA equiv",
    ] {
        let resp = conn.command("robot", "kitchen", cmd)?;
        println!("{cmd:<36} {}", format_human(&resp));
    }
    let dump = conn.command("robot", "kitchen", "DUMP")?;
    for line in dump
        .error_description
        .lines()
        .filter(|l| l.contains("SceneA"))
    {
        println!("  {line}");
    }
    server.shutdown();
    Ok(())
}

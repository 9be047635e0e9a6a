//! User-defined procedures: command macros loaded from a file and run
//! under a temporary mount.

use armordb::client::{format_human, Connection};
use armordb::server::{spawn, ServerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let server = spawn(ServerConfig {
        listen: "127.0.0.1:0".parse()?,
        procedures: Some(format!("{data}/kitchen.armorproc").into()),
        base_dir: data.into(),
        ..ServerConfig::default()
    })?;
    let mut conn = Connection::connect(server.addr())?;
    for cmd in [
        "CREATE",
        "LOAD FILE kitchen.ofn",
        "PROC place cup3 Cup shelf1",
        "PROC move cup3 shelf1 table1",
        "PROC move cup3",
        "PROC move cup3 table1 Wall:",
        "QUERY OBJECTPROP IND isOn cup3",
    ] {
        let resp = conn.command("robot", "kitchen", cmd)?;
        println!("{cmd:<32} {}", format_human(&resp));
    }
    server.shutdown();
    Ok(())
}

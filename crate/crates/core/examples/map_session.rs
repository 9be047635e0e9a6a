//! The map example end to end over TCP: create `map`, add `Sphere`, assert
//! `hasNorth(LivingRoom, Corridor)` and ask what lies north of the living
//! room.

use armordb::client::{format_human, Connection};
use armordb::server::{spawn, ServerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let server = spawn(ServerConfig {
        listen: "127.0.0.1:0".parse()?,
        ..ServerConfig::default()
    })?;
    let mut conn = Connection::connect(server.addr())?;
    for cmd in [
        "CREATE",
        "ADD CLASS Sphere",
        "ADD OBJECTPROP INDIVIDUAL hasNorth LivingRoom Corridor",
        "QUERY OBJECTPROP IND hasNorth LivingRoom",
    ] {
        let resp = conn.command("nodeA", "map", cmd)?;
        println!("{cmd:<55} {}", format_human(&resp));
    }
    server.shutdown();
    Ok(())
}

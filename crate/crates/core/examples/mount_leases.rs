//! Mount leases: the holder manipulates, everybody else is told the
//! reference is busy, and queries are always answered.

use armordb::model::{Axiom, Change, ClassExpression};
use armordb::registry::{Query, ReferenceMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = ReferenceMap::default();
    map.create("map", None)?;
    let room = ClassExpression::Named("ex:Room".parse()?);
    let add = |ind: &str| -> Result<Vec<Change>, armordb::Error> {
        Ok(vec![Change::add(Axiom::class_assertion(
            room.clone(),
            ind.parse()?,
        ))])
    };

    map.mount("clientA", "map")?;
    println!(
        "clientA adds Kitchen: {:?}",
        map.manipulate("clientA", "map", add("ex:Kitchen")?)
    );
    match map.manipulate("clientB", "map", add("ex:Hall")?) {
        Err(e) => println!("clientB adds Hall: {} ({})", e.code(), e),
        Ok(o) => println!("clientB adds Hall: {o:?}"),
    }
    let rooms = Query::Instances {
        class: room.clone(),
        direct: false,
    };
    println!(
        "clientB queries rooms: {:?}",
        map.query("map", &rooms)?.names
    );

    map.unmount("clientA", "map")?;
    println!(
        "after unmount clientB adds Hall: {:?}",
        map.manipulate("clientB", "map", add("ex:Hall")?)?
    );
    println!("rooms: {:?}", map.query("map", &rooms)?.names);
    Ok(())
}

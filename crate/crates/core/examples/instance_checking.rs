//! Realization through the reference registry: types of individuals and
//! instances of class expressions, including complex ones.

use armordb::ofn::parse_class_expression;
use armordb::registry::{Query, ReferenceMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = ReferenceMap::default();
    map.create("map", None)?;
    map.load(
        "nodeA",
        "map",
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/map.ofn").as_ref(),
    )?;

    for ind in ["LivingRoom", "Corridor", "Kitchen"] {
        let q = Query::Types {
            individual: armordb::ofn::parse_entity_name(ind)?,
            direct: true,
            include_top: false,
        };
        println!("types of {ind}: {:?}", map.query("map", &q)?.names);
    }
    for class in [
        "Location",
        "ObjectSomeValuesFrom(connectedTo Location)",
        "ObjectSomeValuesFrom(hasNorth owl:Thing)",
    ] {
        let q = Query::Instances {
            class: parse_class_expression(class)?,
            direct: false,
        };
        println!("instances of {class}: {:?}", map.query("map", &q)?.names);
    }
    Ok(())
}

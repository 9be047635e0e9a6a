//! Buffered manipulation and a lazy reasoner: changes become visible only
//! after APPLY, and the consistency flag only after REASON.

use armordb::model::{Axiom, Change, ClassExpression};
use armordb::registry::{Flag, Query, ReferenceMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = ReferenceMap::default();
    map.create("scene", None)?;
    map.set_flag("node", "scene", Flag::BufferedManipulation, true)?;

    let cup = ClassExpression::Named("ex:Cup".parse()?);
    let plate = ClassExpression::Named("ex:Plate".parse()?);
    let cups = Query::Instances {
        class: cup.clone(),
        direct: false,
    };
    map.manipulate(
        "node",
        "scene",
        vec![Change::add(Axiom::class_assertion(
            cup.clone(),
            "ex:c1".parse()?,
        ))],
    )?;
    println!("buffered: cups = {:?}", map.query("scene", &cups)?.names);
    map.apply("node", "scene")?;
    println!("applied:  cups = {:?}", map.query("scene", &cups)?.names);

    map.set_flag("node", "scene", Flag::BufferedManipulation, false)?;
    map.set_flag("node", "scene", Flag::ContinuousReasonerUpdate, false)?;
    map.manipulate(
        "node",
        "scene",
        vec![
            Change::add(Axiom::disjoint(vec![cup.clone(), plate.clone()])?),
            Change::add(Axiom::class_assertion(plate, "ex:c1".parse()?)),
        ],
    )?;
    let snap = map.snapshot("scene")?;
    println!(
        "lazy:     consistent = {} (stale: {})",
        snap.consistent(),
        snap.is_stale()
    );
    let o = map.reason("scene")?;
    println!("reasoned: consistent = {}", o.consistent);
    Ok(())
}

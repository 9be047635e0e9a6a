//! Classifies an ontology file with the built-in reasoner and prints the
//! class hierarchy.
//!
//! ```text
//! cargo run --example classify -- examples/data/kitchen.ofn
//! ```

use armordb::ofn;
use armordb::reasoner::Inference;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/kitchen.ofn").to_owned()
    });
    let doc = ofn::parse(&std::fs::read_to_string(&path)?)?;
    let inf = Inference::from_axioms(0, &doc.axioms);
    println!(
        "{} axioms, consistent: {}",
        doc.axioms.len(),
        inf.is_consistent()
    );
    let h = inf.hierarchy();
    for group in h.groups() {
        let names: Vec<String> = group.iter().map(|c| c.to_string()).collect();
        let supers: Vec<String> = h
            .direct_supers(&group[0])
            .iter()
            .map(|c| c.to_string())
            .collect();
        println!("{:<30} <= {}", names.join(" = "), supers.join(", "));
    }
    Ok(())
}

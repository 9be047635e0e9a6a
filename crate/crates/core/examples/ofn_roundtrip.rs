//! Parses a functional-syntax document, prints its canonical form and
//! shows how unsupported constructs are reported.

use armordb::ofn;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = "Prefix(k:=<http://example.org/kitchen/>)\n\
        Ontology(<http://example.org/kitchen>\n\
          SubClassOf(k:Cup ObjectIntersectionOf(ex:Object ObjectSomeValuesFrom(ex:isOn <http://example.org/kitchen/Table>)))\n\
          ClassAssertion(k:Cup ex:cup1)\n\
        )\n";
    let doc = ofn::parse(text)?;
    let canonical = ofn::serialize(&doc);
    print!("{canonical}");
    assert_eq!(ofn::serialize(&ofn::parse(&canonical)?), canonical);

    for bad in [
        "Ontology(SubClassOf(ex:A ObjectUnionOf(ex:B ex:C)))",
        "Ontology(\n  SubClassOf(ex:A\n)",
        "Ontology(SubClassOf(zz:A ex:B))",
    ] {
        let e = ofn::parse(bad).unwrap_err();
        println!("{}: {e}", e.code());
    }
    Ok(())
}

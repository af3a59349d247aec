//! Loading a function system from JSON and testing the IFS condition.
//!
//! ```text
//! cargo run --example ifs_check
//! ```

use ifs_mdim::config::SystemFile;
use ifs_mdim::ifs::{inverse_doubling_branches, stray_arrow};
use ifs_mdim::FunctionSystem;

fn show(name: &str, fs: &FunctionSystem) {
    let space = fs.space();
    let (ok, witness) = fs.check_ifs();
    let names = |s: &ifs_mdim::ifs::PointSet| s.ones().map(|i| space.label(i).to_string()).collect::<Vec<_>>();
    println!("{name}: {} points, {} maps, IFS = {ok}", fs.n_points(), fs.maps().len());
    if let Some(w) = witness {
        println!("  maximal witness {:?}", names(&w));
    }
    println!("  infinite core   {:?}", names(&fs.graph().infinite_core));
}

fn main() -> ifs_mdim::Result<()> {
    let text = r#"{
        "space": {"kind": "matrix",
                  "labels": ["a", "b", "c", "d"],
                  "dist": [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]]},
        "maps": [
            {"id": "f", "pairs": [["a", "b"], ["b", "c"]]},
            {"id": "g", "domain": ["c"], "pairs": [["c", "a"]]},
            {"id": "h", "pairs": [["d", "a"]]}
        ]
    }"#;
    let file: SystemFile = serde_json::from_str(text)?;
    show("matrix system", &file.build()?);
    show("stray arrow", &stray_arrow()?);
    show("inverse doubling on 7 points", &inverse_doubling_branches(7)?);

    let lonely = SystemFile {
        space: ifs_mdim::config::SpaceSpec::Line { n: 2 },
        maps: vec![ifs_mdim::config::MapSpec::Explicit {
            id: "f".into(),
            domain: None,
            pairs: vec![("0".into(), "1".into())],
        }],
    };
    show("single arrow", &lonely.build()?);
    Ok(())
}

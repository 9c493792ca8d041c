//! Run every sample job file through the library entry point of the CLI.

use skeleta::cli::{run, JobSpec};

fn main() -> skeleta::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/jobs");
    let mut paths: Vec<_> = std::fs::read_dir(dir).expect("jobs dir").map(|e| e.unwrap().path()).collect();
    paths.sort();
    for path in paths {
        let text = std::fs::read_to_string(&path).expect("readable job");
        let report = run(&text.parse::<JobSpec>()?)?;
        let graphs: Vec<&str> = report.graphs.iter().map(|(n, _)| n.as_str()).collect();
        println!("{}: kind {} graphs {:?}", path.file_name().unwrap().to_string_lossy(), report.body["kind"], graphs);
    }
    Ok(())
}

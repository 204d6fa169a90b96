// Drives the command-line front end in process: a JSON height job, its
// byte-identical replay, and the exit code of an out-of-scope request.

use coleman_gross::cli::{run, HeightOutput};

fn main() {
    let job = r#"{
        "curve": "x^5 - 5*x^3 + 4*x + 1",
        "p": 7,
        "precision": 6,
        "divisor_y": [{"point": {"x": "0", "y": "1"}, "mult": 1}, {"point": {"x": "2", "y": "1"}, "mult": -1}],
        "divisor_z": [{"point": {"x": "1", "y": "1"}, "mult": 1}, {"point": {"x": "3", "y": "11"}, "mult": -1}],
        "W": "unit-root",
        "character": {"t": "1", "branch": "0"}
    }"#;
    let dir = std::env::temp_dir().join(format!("coleman-gross-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("job.json");
    std::fs::write(&path, job).expect("write job");

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(["coleman-gross", "height", "--job", path.to_str().unwrap(), "--json"], &mut out, &mut err);
    println!("exit {code}");
    let first = String::from_utf8(out).unwrap();
    println!("{first}");

    let parsed: HeightOutput = serde_json::from_str(&first).expect("valid output");
    std::fs::write(&path, serde_json::to_string(&parsed.job).unwrap()).unwrap();
    let mut again = Vec::new();
    run(["coleman-gross", "height", "--job", path.to_str().unwrap(), "--json"], &mut again, &mut err);
    println!("replay identical: {}", again == first.as_bytes());

    let mut sink = Vec::new();
    let code = run(["coleman-gross", "frobenius", "--curve", "x^3 - x + 1", "--p", "23"], &mut sink, &mut err);
    println!("bad reduction exit code: {code}");
    std::fs::remove_dir_all(&dir).ok();
}

//! Drives the command-line layer in-process: CSV tables and a rank-3 data file.

use mockgw::cli;

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    for args in [
        vec!["mockgw", "hurwitz", "--max", "12"],
        vec!["mockgw", "bps", "--r", "1", "--c1", "0", "--c2max", "6"],
        vec![
            "mockgw", "expand", "--series", "gw", "--r", "2", "--c1", "-1", "--order", "3", "--format", "csv",
        ],
    ] {
        let code = cli::run(args.clone(), &mut out, &mut err);
        println!("$ {} -> exit {code}", args.join(" "));
    }
    print!("{}", String::from_utf8_lossy(&out));

    // A placeholder rank-3 file: the numbers are made up, only the format is real.
    let dir = std::env::temp_dir().join("mockgw-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f30.json");
    std::fs::write(
        &path,
        r#"{"c1":0,"terms":[["-1","4","1","1"],["3","4","-3","1"],["7","4","5","1"]]}"#,
    )
    .unwrap();
    let mut out = Vec::new();
    let code = cli::run(
        [
            "mockgw",
            "expand",
            "--r",
            "3",
            "--c1",
            "0",
            "--order",
            "3",
            "--format",
            "csv",
            "--data",
            path.to_str().unwrap(),
        ],
        &mut out,
        &mut err,
    );
    println!("rank 3 from file -> exit {code}\n{}", String::from_utf8_lossy(&out));
    print!("{}", String::from_utf8_lossy(&err));
}

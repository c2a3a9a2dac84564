#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Output;

use gridevo::ingest::write_asset_records;
use gridevo::synthetic::{synthetic_grid, GrowthParams};

pub const PLANTED_NODES: &str = "\
node_id,label,voltage_kv,year_in,year_out,lat,lon
A,Alpha,400,1980,,47.5,19.0
B,Beta,400,1980,,,
C,Gamma,220,1980,,,
D,Delta,220,1985,,,
E,Epsilon,120,1985,,,
";

/// At the 220 kV floor: lines of 1990 live 5 and 10 years, lines of 2000
/// live 4 and 6 years, L5 is below the floor and L6 is censored.
pub const PLANTED_EDGES: &str = "\
edge_id,node_a,node_b,voltage_kv,circuits,year_in,year_out
L1,A,B,400,1,1990,
L2,B,C,220,2,1990,2000
L3,A,C,400,1,2000,
L4,C,D,220,1,2000,2006
L5,D,E,120,1,2000,
L6,A,D,400,1,2010,
";

pub const PLANTED_EVENTS: &str = "\
edge_id,year,kind
L1,1995,split
L2,2000,decommission
L3,2004,reroute
L4,2002,other
";

pub const PLANTED_MEANS: [(i32, f64); 2] = [(1990, 7.5), (2000, 5.0)];

pub const TOY_NODES: &str = "\
node_id,label,voltage_kv,year_in,year_out,lat,lon
a,a,400,2000,,,
b,b,400,2000,,,
c,c,400,2000,,,
d,d,400,2000,,,
";

pub const TOY_EDGES: &str = "\
edge_id,node_a,node_b,voltage_kv,circuits,year_in,year_out
e1,a,b,400,1,2000,
e2,b,c,400,1,2000,
e3,c,a,400,1,2001,
e4,c,d,400,1,2002,
";

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

pub fn write_planted(dir: &Path) {
    write(dir, "nodes.csv", PLANTED_NODES);
    write(dir, "edges.csv", PLANTED_EDGES);
    write(dir, "events.csv", PLANTED_EVENTS);
}

pub fn write_toy(dir: &Path) {
    write(dir, "nodes.csv", TOY_NODES);
    write(dir, "edges.csv", TOY_EDGES);
    write(dir, "events.csv", "edge_id,year,kind\n");
}

pub fn write_synthetic(dir: &Path, seed: u64) {
    let params = GrowthParams {
        seed,
        start_year: 1970,
        end_year: 2000,
        ..GrowthParams::default()
    };
    write_asset_records(&synthetic_grid(&params), dir).unwrap();
}

/// Config with relative input paths, plus `extra` lines.
pub fn write_config(dir: &Path, extra: &str) -> PathBuf {
    write(
        dir,
        "run.conf",
        &format!("nodes = nodes.csv\nedges = edges.csv\nevents = events.csv\ncountry_tag = TS\nout = out\n{extra}"),
    )
}

pub fn gridevo(args: &[&str]) -> Output {
    gridevo_with_threads(args, None)
}

pub fn gridevo_with_threads(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_gridevo"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t.to_string());
    }
    cmd.output().expect("binary runs")
}

pub fn run_ok(args: &[&str]) {
    let out = gridevo(args);
    assert!(
        out.status.success(),
        "{args:?}: {}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

pub fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

pub fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

/// Every regular file of `dir`, sorted by name, with its bytes.
pub fn snapshot_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

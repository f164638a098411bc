use std::path::PathBuf;

use refclass::dsl::{parse_kb, render};
use refclass::inference::{explain, Trace};
use refclass::{close, Mode};

fn fixtures() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "rck"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn coin_renders_canonically() {
    let text = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/coin.rck"),
    )
    .unwrap();
    let golden = "class tosses\nproperty heads\nindividual t14\n\n\
                  sentence S14 iff heads(t14)\n\n\
                  stat %(tosses, heads) = 0.5\nmember t14 in tosses\n";
    assert_eq!(render(&parse_kb(&text).unwrap()), golden);
}

#[test]
fn fixtures_round_trip() {
    for (name, text) in fixtures() {
        let kb = parse_kb(&text).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        let rendered = render(&kb);
        assert_eq!(parse_kb(&rendered).unwrap(), kb, "{name}");
        assert_eq!(render(&parse_kb(&rendered).unwrap()), rendered, "{name}");
    }
}

#[test]
fn traces_replay_after_json() {
    for (name, text) in fixtures() {
        let ckb = close(&parse_kb(&text).unwrap()).unwrap();
        for label in ckb.builder().sentences() {
            for mode in [Mode::Point, Mode::Interval] {
                let trace = explain(&ckb, label, mode);
                let json = serde_json::to_string(&trace).unwrap();
                let back: Trace = serde_json::from_str(&json).unwrap();
                assert_eq!(back, trace, "{name} {label}");
                assert_eq!(back.replay(), trace.outcome, "{name} {label}");
            }
        }
    }
}

//! Replays the fuzz corpora and a few hostile inputs through the fuzz targets' checks.

use std::path::Path;

use crinv::gauss::GaussRational;
use crinv::renorm::EpsGrid;
use crinv::surface::{HolPoly, Hypersurface, RigidSurface};
use crinv::MultiSeries;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    assert!(!out.is_empty(), "empty corpus {target}");
    out.sort();
    out
}

fn text(b: &[u8]) -> &str {
    std::str::from_utf8(b).unwrap()
}

#[test]
fn series_seeds_round_trip() {
    for b in corpus("series_decode") {
        let s = MultiSeries::decode(text(&b)).unwrap();
        assert_eq!(MultiSeries::decode(&s.to_json_string()).unwrap(), s);
    }
}

#[test]
fn surface_seeds() {
    let mut accepted = 0;
    for b in corpus("surface_decode") {
        if let Ok(s) = RigidSurface::decode(text(&b)) {
            accepted += 1;
            Hypersurface::rigid(&s).unwrap();
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn hol_seeds() {
    for b in corpus("hol_decode") {
        let h = HolPoly::decode(1 + (b[0] % 4) as usize, text(&b[1..])).unwrap();
        assert!(h.real_part2(6).is_real());
    }
}

#[test]
fn rational_seeds_round_trip() {
    for b in corpus("rational_parse") {
        let g = GaussRational::parse(text(&b)).unwrap();
        assert_eq!(GaussRational::parse(&g.to_string()).unwrap(), g);
    }
}

#[test]
fn eps_grid_seeds() {
    for b in corpus("eps_grid_parse") {
        let g = EpsGrid::parse(text(&b)).unwrap();
        assert!(g.values().iter().all(|e| e.is_finite() && *e > 0.0));
    }
}

#[test]
fn hostile_inputs_are_rejected() {
    for s in ["", "1/0", "i/0", "--1", "1/2/3", "ii", "1e999", "1+", "+i+i"] {
        assert!(GaussRational::parse(s).is_err(), "{s:?}");
    }
    for s in ["", "0.1:0.01:5", "0:0.5:5", "0.1:1:5", "NaN:0.5:3", "0.1:0.5:1", "0.1:0.5:99999999999", "a:b:c", "0.1:0.5"] {
        assert!(EpsGrid::parse(s).is_err(), "{s:?}");
    }
    for s in [
        "{}",
        r#"{"vars":["z1"],"trunc":100,"terms":[]}"#,
        r#"{"vars":["z1","zb1"],"trunc":3,"terms":[{"exp":[1],"re":"1","im":"0"}]}"#,
        r#"{"vars":["z1","zb1"],"trunc":3,"terms":[{"exp":[1,0],"re":"1","im":"0"},{"exp":[1,0],"re":"2","im":"0"}]}"#,
        r#"{"vars":["z1","z1"],"trunc":3,"terms":[]}"#,
    ] {
        assert!(MultiSeries::decode(s).is_err(), "{s}");
    }
    for s in [
        r#"{"n":0,"trunc":4,"F_terms":[]}"#,
        r#"{"n":1,"trunc":4,"F_terms":[{"exp_z":[60000],"exp_zbar":[60000],"coeff":"1"}]}"#,
        r#"{"n":1,"trunc":4000000000,"F_terms":[{"exp_z":[1],"exp_zbar":[1],"coeff":"1"}]}"#,
        r#"{"n":1,"trunc":4,"F_terms":[{"exp_z":[1,1],"exp_zbar":[1],"coeff":"1"}]}"#,
    ] {
        assert!(RigidSurface::decode(s).is_err(), "{s}");
    }
    assert!(HolPoly::decode(1, r#"{"hol_terms":[{"exp_z":[1,2],"exp_w":0,"coeff":"1"}]}"#).is_err());
}

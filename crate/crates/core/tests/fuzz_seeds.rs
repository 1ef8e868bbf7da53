//! The fuzz corpus seeds must parse, and byte-level mutations of them must
//! not panic. Mirrors the targets in `fuzz/` without needing a nightly
//! toolchain.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shtukalab_core::drinfeld::DrinfeldModule;
use shtukalab_core::laurent::LaurentSeries;
use shtukalab_core::parse::{parse_mpoly, parse_poly};
use shtukalab_core::poly::ring_r;
use shtukalab_core::shtuka::POneShtuka;
use shtukalab_core::skew::TauRing;
use shtukalab_core::{Fq, Ring};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|f| std::fs::read(f.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

const ALPHABET: &[u8] = b"0123456789xzTtg^*+-()[]{}\",:. e";

fn mutations(seed: &[u8], rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|_| {
            let mut v = seed.to_vec();
            for _ in 0..rng.gen_range(1..=3) {
                let pos = rng.gen_range(0..=v.len());
                let b = ALPHABET[rng.gen_range(0..ALPHABET.len())];
                match rng.gen_range(0..3) {
                    0 if pos < v.len() => v[pos] = b,
                    1 if pos < v.len() => {
                        v.remove(pos);
                    }
                    _ => v.insert(pos, b),
                }
            }
            v
        })
        .collect()
}

fn drive(target: &str, parses: impl Fn(&str) -> bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for s in seeds(target) {
        let text = String::from_utf8(s.clone()).unwrap();
        assert!(parses(&text), "seed does not parse: {text}");
        for m in mutations(&s, &mut rng, 300) {
            if let Ok(t) = std::str::from_utf8(&m) {
                parses(t);
            }
        }
    }
}

#[test]
fn mpoly() {
    let fq = Fq::prime(3).unwrap();
    let r = ring_r(&fq);
    drive("parse_mpoly", |t| {
        let ok = parse_mpoly(&fq, t, &["z", "x0", "x1", "x"]).is_ok();
        if let Ok(p) = parse_poly(&r, t) {
            assert_eq!(parse_poly(&r, &r.fmt_elem(&p)).unwrap(), p, "{t}");
        }
        ok
    });
}

#[test]
fn tau() {
    let fq = Fq::prime(3).unwrap();
    let tr = TauRing::new(ring_r(&fq));
    drive("parse_tau", |t| tr.parse(t).map(|p| tr.fmt(&p)).is_ok());
}

#[test]
fn module_json() {
    drive("module_json", |t| match DrinfeldModule::from_json(t) {
        Ok(e) => {
            let again = DrinfeldModule::from_json(&serde_json::to_string(&e.spec()).unwrap()).unwrap();
            assert_eq!(again.coeffs(), e.coeffs());
            true
        }
        Err(_) => false,
    });
}

#[test]
fn shtuka_json() {
    drive("shtuka_json", |t| match POneShtuka::from_json(t) {
        Ok(p) => {
            let out = serde_json::to_string(&p.to_json()).unwrap();
            let again = POneShtuka::from_json(&out).unwrap();
            assert_eq!(serde_json::to_string(&again.to_json()).unwrap(), out);
            true
        }
        Err(_) => false,
    });
}

#[test]
fn laurent_json() {
    let fq = Fq::prime(2).unwrap();
    drive("laurent_json", |t| {
        let Ok(v) = serde_json::from_str::<serde_json::Value>(t) else { return false };
        match LaurentSeries::from_json(&fq, &v) {
            Ok(s) => {
                assert_eq!(LaurentSeries::from_json(&fq, &s.to_json()).unwrap(), s);
                true
            }
            Err(_) => false,
        }
    });
}

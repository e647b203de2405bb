//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Oracles here are deliberately independent of the library code
//! paths they check (trial division, literal definitions).

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use orblab::abc::{self, AbcTriple};
use orblab::beauville::{self, ActionSpec, BeauvilleConfig};
use orblab::belyi::{self, BelyiMap};
use orblab::chatelet::{self, ChateletSurface, Place};
use orblab::orbifold::{self, OrbifoldDivisor, PrimeSet, ScanOptions};
use orblab::poly::ZPoly;
use orblab::proj_line::enumerate_points;
use orblab::{PrimeForm, ProjPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn orblab(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_orblab"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn pt(s: &str) -> ProjPoint {
    s.parse().expect("point")
}

fn halves(pts: &[&str]) -> OrbifoldDivisor {
    OrbifoldDivisor::halves(&pts.iter().map(|s| pt(s)).collect::<Vec<_>>()).expect("divisor")
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Trial-division factorization of |n|.
fn trial_factor(n: i128) -> Vec<(i128, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn trial_radical(n: i128) -> i128 {
    trial_factor(n).iter().map(|(p, _)| p).product()
}

fn c1_beauville() -> Check {
    let out = orblab(&["beauville", "verify", "--preset", "paper"])?;
    let v: Value = serde_json::from_str(out.trim()).map_err(|e| e.to_string())?;
    let expected: Value = serde_json::from_str(
        r#"{"gC":5,"gD":3,"chi_product":8,"chi_S":1,"q":0,"pg":0,"double_fibres":[6,5],"ramification_points":[24,20],"free":true}"#,
    )
    .unwrap();
    ensure(v == expected, || format!("got {v}"))?;
    Ok(out.trim().to_string())
}

fn c2_freeness() -> Check {
    let cfg = BeauvilleConfig::paper().build().map_err(|e| e.to_string())?;
    ensure(cfg.freeness().map_err(|e| e.to_string())?.free, || "paper configuration not free".into())?;
    // c acting on the first cover only
    let flipped = ActionSpec::new(3, vec![0b101, 0b111, 0b001]).map_err(|e| e.to_string())?;
    let cert = beauville::is_free_diagonal(&cfg.tower_c, &cfg.action_c, &cfg.tower_d, &flipped)
        .map_err(|e| e.to_string())?;
    ensure(!cert.free && !cert.common.is_empty(), || format!("{cert:?}"))?;
    let names: Vec<String> = cert.common.iter().map(|g| beauville::element_name(*g)).collect();
    Ok(format!("free=false, common stabilizers {names:?}"))
}

fn c3_general_type() -> Check {
    let five = halves(&["0", "1", "inf", "2", "3"]);
    let four = halves(&["0", "1", "inf", "2"]);
    let three = halves(&["0", "1", "inf"]);
    let got = [&five, &four, &three].map(|d| (orbifold::canonical_degree(0, d), orbifold::is_general_type(0, d)));
    let want = [(rat(1, 2), true), (rat(0, 1), false), (rat(-1, 2), false)];
    ensure(got == want, || format!("{got:?}"))?;
    Ok("5 -> 1/2 general, 4 -> 0, 3 -> -1/2".into())
}

fn c4_abc_identities() -> Check {
    let points: Vec<ProjPoint> = enumerate_points(500).collect();
    let failures: Vec<String> = points
        .par_iter()
        .filter_map(|r| {
            let t = abc::triple_from_ratio(r).ok()?;
            let (p, q) = (r.x().to_i128()?, r.y().to_i128()?);
            let (n0, n1, ninf) = abc::conductor_split(r).ok()?;
            if n0 * n1 * ninf != abc::triple_conductor(&t) {
                return Some(format!("split at {r}"));
            }
            if abc::triple_conductor(&t) != BigInt::from(trial_radical(p * q * (p - q))) {
                return Some(format!("conductor at {r}"));
            }
            // literal place product: max over entries at each prime, real max
            let entries = [-p, q, p - q];
            let mut h = BigRational::from_integer(BigInt::from(entries.iter().map(|x| x.abs()).max()?));
            for (prime, _) in trial_factor(p * q * (p - q)) {
                let vmin = entries
                    .iter()
                    .map(|x| {
                        let mut v = 0;
                        let mut x = *x;
                        while x % prime == 0 {
                            x /= prime;
                            v += 1;
                        }
                        v
                    })
                    .min()?;
                h /= BigRational::from_integer(BigInt::from(prime).pow(vmin));
            }
            if h != BigRational::from_integer(abc::triple_height(&t)) {
                return Some(format!("height at {r}"));
            }
            None
        })
        .collect();
    ensure(failures.is_empty(), || format!("{} failures, first {:?}", failures.len(), failures.first()))?;
    let q = AbcTriple::from_i64s(-2, 1, 1).map_err(|e| e.to_string())?.quality();
    ensure(q == 1.0, || format!("quality(-2,1,1) = {q}"))?;
    Ok(format!("{} ratios of height <= 500, quality(-2,1,1) = 1", points.len() - 3))
}

/// Per-point membership by trial division, sharing nothing with the sieve.
fn naive_scan(comps: &[(i64, i64, u32)], excluded: &[i128], bound: i64) -> Vec<(i64, i64)> {
    let member = |x: i64, y: i64| {
        comps.iter().all(|&(a, b, m)| {
            // component a*X + b*Y
            let v = a as i128 * x as i128 + b as i128 * y as i128;
            v == 0 || trial_factor(v).iter().all(|(p, e)| *e >= m || excluded.contains(p))
        })
    };
    let mut out = Vec::new();
    if member(1, 0) {
        out.push((1, 0));
    }
    let rows: Vec<Vec<(i64, i64)>> = (1..=bound)
        .into_par_iter()
        .map(|y| (-bound..=bound).filter(|x| x.gcd(&y) == 1 && member(*x, y)).map(|x| (x, y)).collect())
        .collect();
    out.extend(rows.into_iter().flatten());
    out
}

fn c5_oracle_equivalence() -> Check {
    let mut summary = Vec::new();
    let configs: [(&[&str], &[(i64, i64, u32)]); 2] = [
        (&["0", "1", "inf"], &[(1, 0, 2), (1, -1, 2), (0, 1, 2)]),
        (&["0", "1", "inf", "2", "3"], &[(1, 0, 2), (1, -1, 2), (0, 1, 2), (1, -2, 2), (1, -3, 2)]),
    ];
    for (pts, comps) in configs {
        let d = halves(pts);
        for s in [vec![], vec![2u64]] {
            let set: PrimeSet = s.iter().copied().collect();
            let fast: BTreeSet<(i64, i64)> = orbifold::scan_orbifold_points(&d, &set, 2000, ScanOptions::default())
                .map_err(|e| e.to_string())?
                .iter()
                .map(|p| p.to_i64_pair().expect("small"))
                .collect();
            let excl: Vec<i128> = s.iter().map(|p| *p as i128).collect();
            let slow: BTreeSet<(i64, i64)> = naive_scan(comps, &excl, 2000).into_iter().collect();
            ensure(fast == slow, || format!("{pts:?} S={s:?}: sieve {} vs naive {}", fast.len(), slow.len()))?;
            summary.push(format!("{}pts S={s:?}: {}", pts.len(), fast.len()));
        }
    }
    Ok(summary.join(", "))
}

fn random_composite(rng: &mut ChaCha8Rng) -> BelyiMap {
    let basics = belyi::basic_maps();
    let mut m = BelyiMap::identity();
    for _ in 0..rng.gen_range(1..=8) {
        let b = &basics[rng.gen_range(0..4)];
        if m.degree() * b.degree() <= 16 {
            m = b.compose(&m);
        }
    }
    m
}

fn c6_degree_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b1f01d);
    let mut maps: Vec<BelyiMap> = vec![BelyiMap::parse("27*x^2*(1-x)/4").expect("map")];
    while maps.len() < 24 {
        maps.push(random_composite(&mut rng));
    }
    let mut pairs = 0;
    let mut general = 0;
    let mut max_deg = 0;
    for f in &maps {
        max_deg = max_deg.max(f.degree());
        let ram = belyi::ramification_data(f);
        ensure(ram.is_belyi(), || format!("{f} is not Belyi"))?;
        let forms: Vec<PrimeForm> = ram.fibers.iter().flat_map(|fb| fb.points.iter().map(|(d, _)| d.clone())).collect();
        for _ in 0..4 {
            let mut comps: Vec<(PrimeForm, u32)> = Vec::new();
            for d in &forms {
                if rng.gen_bool(0.6) {
                    comps.push((d.clone(), rng.gen_range(2..=6)));
                }
            }
            let div = OrbifoldDivisor::new(comps).map_err(|e| e.to_string())?;
            let id = belyi::verify_degree_identity(f, &div).map_err(|e| e.to_string())?;
            ensure(id.equal, || format!("{f}: {id:?}"))?;
            let t = belyi::transfer_general_type(f, &div).map_err(|e| e.to_string())?;
            let g = orbifold::is_general_type(0, &div);
            ensure(t == g, || format!("{f} with {div:?}: transfer {t}, general type {g}"))?;
            pairs += 1;
            general += g as usize;
        }
    }
    Ok(format!("{} maps (max degree {max_deg}), {pairs} pairs, {general} general type", maps.len()))
}

fn c7_key_inequality() -> Check {
    let out = orblab(&["abc", "keyineq", "--map", "x^2", "--half", "0", "--half", "inf", "--hmax", "1000"])?;
    let mut lines = out.lines();
    let header = "x,y,rx,ry,logH,logN0,logN1,logNinf,slope0,slope1,slopeinf,rho0,rho1,rhoinf";
    ensure(lines.next() == Some(header), || "header mismatch".into())?;
    let mut rows = 0;
    let mut max_rho0 = f64::NEG_INFINITY;
    for line in lines {
        let c: Vec<&str> = line.split(',').collect();
        ensure(c.len() == 14, || format!("row {line}"))?;
        let int = |i: usize| c[i].parse::<i128>().map_err(|e| e.to_string());
        let num = |i: usize| c[i].parse::<f64>().map_err(|e| e.to_string());
        let (rx, ry) = (int(2)?, int(3)?);
        let (n0, n1, ninf) = (trial_radical(rx), trial_radical(rx - ry), trial_radical(ry));
        ensure(n0 * n1 * ninf == trial_radical(rx * ry * (rx - ry)), || format!("split fails at {line}"))?;
        for (i, n) in [(5, n0), (6, n1), (7, ninf)] {
            let want = (n as f64).ln();
            ensure((num(i)? - want).abs() <= 1e-9 * want.max(1.0), || format!("log column {i} at {line}"))?;
        }
        let rho0 = num(11)?;
        ensure(rho0.is_finite(), || format!("rho0 at {line}"))?;
        max_rho0 = max_rho0.max(rho0);
        rows += 1;
    }
    ensure(rows > 0, || "no rows".into())?;
    Ok(format!("{rows} rows, split identity on all, max rho0 = {max_rho0:.10}"))
}

/// Primes dividing `n`, for the product formula.
fn prime_places(n: i128) -> Vec<Place> {
    trial_factor(n).into_iter().map(|(p, _)| Place::Finite(BigInt::from(p))).collect()
}

fn c8_chatelet() -> Check {
    let p = ZPoly::from_i64s(&[-6, 0, 5, 0, -1]);
    let s = ChateletSurface::new(rat(-1, 1), p).map_err(|e| e.to_string())?;
    let (ok, mut reports) = chatelet::everywhere_locally_solvable(&s);
    reports.push(chatelet::locally_solvable_at(&s, &Place::prime(5)));
    let places: Vec<String> = reports.iter().map(|r| r.place.to_string()).collect();
    ensure(ok && reports.iter().all(|r| r.solvable), || format!("{reports:?}"))?;
    ensure(places == ["real", "2", "3", "5"], || format!("places {places:?}"))?;
    let found = chatelet::search_solvable_fibers(&s, 100).map_err(|e| e.to_string())?;
    ensure(found.is_empty(), || format!("fibers with points: {found:?}"))?;
    let split = ChateletSurface::new(rat(1, 1), ZPoly::from_i64s(&[1, 0, 0, 0, 1])).map_err(|e| e.to_string())?;
    let split_found = chatelet::search_solvable_fibers(&split, 1).map_err(|e| e.to_string())?;
    ensure(!split_found.is_empty(), || "split surface has no fiber at B=1".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let mut draw = || loop {
            let v: i64 = rng.gen_range(-1_000_000..=1_000_000);
            if v != 0 {
                return v;
            }
        };
        let (a, b) = (draw(), draw());
        let (qa, qb) = (rat(a, 1), rat(b, 1));
        let mut prod = chatelet::hilbert_symbol(&qa, &qb, &Place::Real).map_err(|e| e.to_string())?;
        for v in prime_places(2 * a as i128 * b as i128) {
            prod *= chatelet::hilbert_symbol(&qa, &qb, &v).map_err(|e| e.to_string())?;
        }
        ensure(prod == 1, || format!("product formula fails for ({a}, {b})"))?;
    }
    Ok(format!("locally solvable at {places:?}, no fibers with points up to 100, split surface: {} fibers at B=1, product formula on 1000 pairs", split_found.len()))
}

fn c9_trend() -> Check {
    let d = halves(&["0", "1", "inf", "2", "3"]);
    let mut counts = Vec::new();
    for b in [100u64, 1000, 10_000] {
        let n = orbifold::scan_orbifold_points(&d, &PrimeSet::new(), b, ScanOptions::default())
            .map_err(|e| e.to_string())?
            .len();
        counts.push((b, n));
    }
    let monotone = counts.windows(2).all(|w| w[0].1 <= w[1].1);
    ensure(monotone, || format!("counts {counts:?}"))?;
    let logged: Vec<String> =
        counts.iter().map(|(b, n)| format!("B={b}: {n} (n/ln B = {:.3})", *n as f64 / (*b as f64).ln())).collect();
    Ok(logged.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 9] = [
        ("1 beauville reproduction", c1_beauville, Some(Duration::from_secs(1))),
        ("2 freeness sensitivity", c2_freeness, Some(Duration::from_secs(1))),
        ("3 general-type criterion", c3_general_type, None),
        ("4 abc identities", c4_abc_identities, Some(Duration::from_secs(30))),
        ("5 orbifold oracle equivalence", c5_oracle_equivalence, Some(Duration::from_secs(60))),
        ("6 degree identity", c6_degree_identity, Some(Duration::from_secs(60))),
        ("7 key-inequality report", c7_key_inequality, None),
        ("8 chatelet", c8_chatelet, Some(Duration::from_secs(60))),
        ("9 finiteness trend", c9_trend, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {name} [{elapsed:.2?}] {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} [{elapsed:.2?}] {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criterion 4 (C(51,5,2) over GF(256), 116,280 patterns of 104 × 104) is
//! opt-in:
//!
//! ```text
//! cargo test --release --test acceptance -- --include-ignored
//! SDCODE_EXTENDED=1 cargo test --test acceptance
//! ```

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use common::{binomial, gf16, gf256, ring, rows_of, Oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdcode::linalg::{determinant, solve, submatrix};
use sdcode::sdcheck::{enumerate_patterns, erased_columns, SdError};
use sdcode::search::{run_search, run_search_with_probe, CoefficientSource, SearchConfig};
use sdcode::{
    build_h1, build_h2, decode, encode, is_sd, shorten, Algebra, AlgebraSpec, ConstructError, Element, Matrix,
    ParityCheckMatrix,
};

type Check = Result<String, String>;
type Builder = fn(usize, usize, &Arc<Algebra>) -> Result<ParityCheckMatrix, ConstructError>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:.2?}, limit {limit:?}"))
}

struct Runner {
    failed: Vec<&'static str>,
}

impl Runner {
    fn run(&mut self, id: &'static str, title: &str, f: impl FnOnce() -> Check) {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS  criterion {id:>2}  {title}: {detail} [{took:.2?}]"),
            Err(why) => {
                println!("FAIL  criterion {id:>2}  {title}: {why} [{took:.2?}]");
                self.failed.push(id);
            }
        }
    }
}

fn token(alg: &Algebra, tok: &str) -> Element {
    match tok {
        "0" => Element::ZERO,
        "1" => Element::ONE,
        _ => alg.alpha_pow(tok.strip_prefix("a^").expect("fixture token").parse().unwrap()),
    }
}

struct Fixture {
    label: &'static str,
    build: Builder,
    r: usize,
    n: usize,
    algebra: fn() -> Arc<Algebra>,
    /// H row index of each printed row.
    row_map: &'static [usize],
    printed: &'static [&'static str],
    skipped: &'static str,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        label: "C(3,5,1) GF(16)",
        build: build_h1,
        r: 3,
        n: 5,
        algebra: gf16,
        row_map: &[0, 1, 2, 3, 4],
        printed: &[
            "1 1 1 1 1 0 0 0 0 0 0 0 0 0 0",
            "0 0 0 0 0 1 1 1 1 1 0 0 0 0 0",
            "0 0 0 0 0 0 0 0 0 0 1 1 1 1 1",
            "1 a^1 a^2 a^3 a^4 a^5 a^6 a^7 a^8 a^9 a^10 a^11 a^12 a^13 a^14",
            "1 a^14 a^13 a^12 a^11 a^10 a^9 a^8 a^7 a^6 a^5 a^4 a^3 a^2 a^1",
        ],
        skipped: "",
    },
    Fixture {
        label: "C(5,3,1) GF(16)",
        build: build_h1,
        r: 5,
        n: 3,
        algebra: gf16,
        row_map: &[0, 1, 2, 3, 4, 5, 6],
        printed: &[
            "1 1 1 0 0 0 0 0 0 0 0 0 0 0 0",
            "0 0 0 1 1 1 0 0 0 0 0 0 0 0 0",
            "0 0 0 0 0 0 1 1 1 0 0 0 0 0 0",
            "0 0 0 0 0 0 0 0 0 1 1 1 0 0 0",
            "0 0 0 0 0 0 0 0 0 0 0 0 1 1 1",
            "1 a^1 a^2 a^3 a^4 a^5 a^6 a^7 a^8 a^9 a^10 a^11 a^12 a^13 a^14",
            "1 a^14 a^13 a^6 a^5 a^4 a^12 a^11 a^10 a^3 a^2 a^1 a^9 a^8 a^7",
        ],
        skipped: "",
    },
    Fixture {
        label: "C(4,4,1) ring p=17",
        build: build_h1,
        r: 4,
        n: 4,
        algebra: || ring(17),
        row_map: &[0, 1, 2, 3, 4, 5],
        printed: &[
            "1 1 1 1 0 0 0 0 0 0 0 0 0 0 0",
            "0 0 0 0 1 1 1 1 0 0 0 0 0 0 0",
            "0 0 0 0 0 0 0 0 1 1 1 1 0 0 0",
            "0 0 0 0 0 0 0 0 0 0 0 0 1 1 1",
            "1 a^1 a^2 a^3 a^4 a^5 a^6 a^7 a^8 a^9 a^10 a^11 a^12 a^13 a^14",
            "1 a^16 a^15 a^14 a^8 a^7 a^6 a^5 a^16 a^15 a^14 a^13 a^7 a^6 a^5",
        ],
        skipped: "column 15 (printed rows stop after 15 entries)",
    },
    Fixture {
        label: "C(3,5,2) GF(16)",
        build: build_h2,
        r: 3,
        n: 5,
        algebra: gf16,
        row_map: &[0, 1, 2, 3, 4, 5, 6, 7],
        printed: &[
            "1 1 1 1 1 0 0 0 0 0 0 0 0 0",
            "1 a^1 a^2 a^3 a^4 0 0 0 0 0 0 0 0 0",
            "0 0 0 0 0 1 1 1 1 1 0 0 0 0",
            "0 0 0 0 0 1 a^1 a^2 a^3 a^4 0 0 0 0",
            "0 0 0 0 0 0 0 0 0 0 1 1 1 1",
            "0 0 0 0 0 0 0 0 0 0 1 a^1 a^2 a^3",
            "1 a^14 a^13 a^12 a^11 1 a^14 a^13 a^12 a^11 1 a^14 a^13 a^12",
            "1 a^2 a^4 a^6 a^8 a^10 a^12 a^14 a^1 a^3 a^5 a^7 a^9 a^11",
        ],
        skipped: "column 14 (printed rows stop after 14 entries)",
    },
    Fixture {
        label: "C(5,3,2) GF(16)",
        build: build_h2,
        r: 5,
        n: 3,
        algebra: gf16,
        row_map: &[0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11],
        printed: &[
            "1 1 1 0 0 0 0 0 0 0 0 0 0 0",
            "1 a^1 a^2 0 0 0 0 0 0 0 0 0 0 0",
            "0 0 0 1 1 1 0 0 0 0 0 0 0 0",
            "0 0 0 1 a^1 a^2 0 0 0 0 0 0 0 0",
            "0 0 0 0 0 0 1 1 1 0 0 0 0 0",
            "0 0 0 0 0 0 1 a^1 a^2 0 0 0 0 0",
            "0 0 0 0 0 0 0 0 0 1 1 1 0 0",
            "0 0 0 0 0 0 0 0 0 1 a^1 a^2 0 0",
            "0 0 0 0 0 0 0 0 0 0 0 0 1 1",
            "1 a^14 a^13 a^9 a^8 a^7 a^3 a^2 a^1 a^12 a^11 a^10 a^6 a^5",
            "1 a^2 a^4 a^6 a^8 a^10 a^12 a^14 a^1 a^3 a^5 a^7 a^9 a^11",
        ],
        skipped: "column 14 (rows stop after 14 entries) and local row 9 (not printed)",
    },
];

fn criterion1() -> Check {
    let mut compared = 0;
    let mut skips = Vec::new();
    for fx in FIXTURES {
        let start = Instant::now();
        let alg = (fx.algebra)();
        let h = (fx.build)(fx.r, fx.n, &alg).map_err(|e| format!("{}: {e}", fx.label))?;
        ensure(fx.row_map.len() == fx.printed.len(), || format!("{}: fixture row map", fx.label))?;
        for (pr, line) in fx.printed.iter().enumerate() {
            let row = fx.row_map[pr];
            for (c, tok) in line.split_whitespace().enumerate() {
                let want = token(&alg, tok);
                let got = h.get(row, c);
                ensure(got == want, || format!("{}: H[{row}][{c}] = {got}, printed {tok}", fx.label))?;
                compared += 1;
            }
        }
        let printed_cols = fx.printed[0].split_whitespace().count();
        let missing_rows = h.h().rows() - fx.printed.len();
        let missing_cols = h.h().cols() - printed_cols;
        ensure((missing_rows, missing_cols) == (0, 0) || !fx.skipped.is_empty(), || {
            format!("{}: unprinted entries without a recorded reason", fx.label)
        })?;
        if !fx.skipped.is_empty() {
            skips.push(format!("{}: {}", fx.label, fx.skipped));
        }
        within(Duration::from_secs(1), start, fx.label)?;
    }
    Ok(format!(
        "{} matrices, {compared} printed entries equal; skipped (truncated in the printed source): {}",
        FIXTURES.len(),
        skips.join("; ")
    ))
}

fn expected_count(h: &ParityCheckMatrix) -> u128 {
    let s = h.spec();
    binomial(s.n as u64, s.m as u64) * binomial(((s.n - s.m) * s.r) as u64, s.s as u64)
}

fn check_sd(label: &str, h: &ParityCheckMatrix, literal: Option<u64>, limit: Duration) -> Result<String, String> {
    let start = Instant::now();
    let report = is_sd(h);
    within(limit, start, label)?;
    ensure(report.sd, || format!("{label}: not SD, witness {:?}", report.witness))?;
    let formula = expected_count(h);
    ensure(report.patterns_checked as u128 == formula, || {
        format!("{label}: {} patterns, formula gives {formula}", report.patterns_checked)
    })?;
    if let Some(lit) = literal {
        ensure(report.patterns_checked == lit, || format!("{label}: expected {lit} patterns"))?;
    }
    Ok(format!("{label} SD ({} patterns, {:.2?})", report.patterns_checked, start.elapsed()))
}

fn criterion2() -> Check {
    let limit = Duration::from_secs(5);
    let parts = [
        check_sd("C(3,5,1) GF(16)", &build_h1(3, 5, &gf16()).unwrap(), Some(330), limit)?,
        check_sd("C(5,3,1) GF(16)", &build_h1(5, 3, &gf16()).unwrap(), Some(135), limit)?,
        check_sd("C(4,4,1) ring p=17", &build_h1(4, 4, &ring(17)).unwrap(), Some(4 * 66), limit)?,
    ];
    Ok(parts.join("; "))
}

fn criterion3() -> Check {
    let limit = Duration::from_secs(10);
    let c552 = (binomial(3, 2) * binomial(5, 2)) as u64;
    let parts = [
        check_sd("C(3,5,2) GF(16)", &build_h2(3, 5, &gf16()).unwrap(), Some(360), limit)?,
        check_sd("C(5,3,2) GF(16)", &build_h2(5, 3, &gf16()).unwrap(), Some(c552), limit)?,
    ];
    Ok(parts.join("; "))
}

fn criterion4() -> Check {
    let h = build_h2(51, 5, &gf256()).map_err(|e| e.to_string())?;
    ensure(h.h().rows() == 104, || "expected 104 parity checks".into())?;
    check_sd("C(51,5,2) GF(256)", &h, Some(116_280), Duration::from_secs(3600))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn criterion5() -> Check {
    let mut same_row = 0u64;
    let mut units = 0u64;
    let mut failures = Vec::new();
    for alg in [gf16(), ring(17)] {
        let order = alg.order_of_alpha() as usize;
        for n in 1..=order {
            for r in 1..=order / n {
                if n >= 3 && r + 2 <= r * n {
                    let h = build_h1(r, n, &alg).unwrap();
                    for i in 0..r {
                        for js in combinations(n, 3) {
                            let cols: Vec<usize> = js.iter().map(|j| i * n + j).collect();
                            let m = submatrix(h.h(), &[i, r, r + 1], &cols).unwrap();
                            if !alg.is_unit(determinant(&alg, &m).unwrap()) {
                                failures.push(format!("{} 3x3 r={r} n={n} i={i} {js:?}", alg.spec()));
                            }
                            same_row += 1;
                        }
                    }
                }
                if n >= 4 && 2 * r + 2 <= r * n {
                    let h = build_h2(r, n, &alg).unwrap();
                    for i in 0..r {
                        for ts in combinations(n, 4) {
                            let cols: Vec<usize> = ts.iter().map(|t| i * n + t).collect();
                            let m = submatrix(h.h(), &[2 * i, 2 * i + 1, 2 * r, 2 * r + 1], &cols).unwrap();
                            if !alg.is_unit(determinant(&alg, &m).unwrap()) {
                                failures.push(format!("{} 4x4 r={r} n={n} i={i} {ts:?}", alg.spec()));
                            }
                            same_row += 1;
                        }
                    }
                }
                let ni = n as i64;
                for l in 1..r as i64 {
                    for j in -(ni - 1)..=ni - 1 {
                        let e = alg.add(Element::ONE, alg.alpha_pow(l * ni + j));
                        if !alg.is_unit(e) {
                            failures.push(format!("{} 1+a^({l}*{n}+{j})", alg.spec()));
                        }
                        units += 1;
                    }
                }
            }
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    Ok(format!(
        "{same_row} same-row 3x3/4x4 determinants are units, {units} values 1+α^(ℓn+j) are units, 0 failures"
    ))
}

fn criterion6() -> Check {
    let mut checked = 0;
    for alg in [gf16(), gf256(), ring(5), ring(7), ring(17)] {
        let oracle = Oracle::for_algebra(&alg);
        for k in 1..alg.order_of_alpha() as i64 {
            let e = alg.add(Element::ONE, alg.alpha_pow(k));
            ensure(alg.is_unit(e) && oracle.is_unit(e), || format!("{}: 1+α^{k} not a unit", alg.spec()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} values over GF(16), GF(256), rings p=5,7,17; 0 failures"))
}

fn criterion7() -> Check {
    let cases: [(&str, Builder, usize, usize, Arc<Algebra>); 5] = [
        ("C(3,5,1) GF(16)", build_h1, 3, 5, gf16()),
        ("C(5,3,1) GF(16)", build_h1, 5, 3, gf16()),
        ("C(4,4,1) ring p=17", build_h1, 4, 4, ring(17)),
        ("C(3,5,2) GF(16)", build_h2, 3, 5, gf16()),
        ("C(5,3,2) GF(16)", build_h2, 5, 3, gf16()),
    ];
    let mut verified = 0;
    let mut skipped = Vec::new();
    for (label, build, r, n, alg) in cases {
        let h = build(r, n, &alg).unwrap();
        for r2 in 1..r {
            match shorten(&h, r2) {
                Ok(short) => {
                    let report = is_sd(&short);
                    ensure(report.sd, || format!("{label} shortened to r={r2} is not SD"))?;
                    let direct = build(r2, n, &alg).map_err(|e| format!("{label} r={r2}: {e}"))?;
                    ensure(short.h() == direct.h(), || format!("{label} r={r2}: differs from direct build"))?;
                    verified += 1;
                }
                Err(SdError::ShortenedTooFar { .. }) => {
                    ensure(build(r2, n, &alg).is_err(), || format!("{label} r={r2}: build succeeds"))?;
                    skipped.push(format!("{label} r'={r2} (m·r'+s > r'·n, no such code)"));
                }
                Err(e) => return Err(format!("{label} r={r2}: {e}")),
            }
        }
    }
    Ok(format!("{verified} shortenings SD and equal to the direct build; skipped {}", skipped.join(", ")))
}

fn criterion8() -> Check {
    let start = Instant::now();
    let alg = gf16();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut trials = 0;
    for h in [build_h1(3, 5, &alg).unwrap(), build_h2(3, 5, &alg).unwrap()] {
        for p in enumerate_patterns(h.spec()) {
            let data: Vec<Element> = (0..h.spec().dimension()).map(|_| Element(rng.gen_range(0..16))).collect();
            let stripe = encode(&h, &data).map_err(|e| e.to_string())?;
            let mut damaged = stripe.clone();
            damaged.erase_pattern(&p).map_err(|e| e.to_string())?;
            let back = decode(&h, &damaged).map_err(|e| format!("{p}: {e}"))?;
            ensure(back.symbols() == stripe.symbols(), || format!("{p}: wrong symbols"))?;
            trials += 1;
        }
    }
    ensure(trials >= 330 + 360, || format!("only {trials} trials"))?;
    within(Duration::from_secs(30), start, "codec round trip")?;
    Ok(format!("{trials} erasure patterns decoded bit-exactly"))
}

fn criterion9() -> Check {
    let ring5 = ring(5);
    let field = Algebra::field(4, 0x1f).unwrap();
    let oracle = Oracle::field(0x1f);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut solved, mut singular) = (0, 0);
    for _ in 0..200 {
        let dim = rng.gen_range(1..=6);
        let rows: Vec<Vec<Element>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| if rng.gen_bool(0.85) { Element(rng.gen_range(0..16)) } else { Element::ZERO })
                    .collect()
            })
            .collect();
        let b: Vec<Element> = (0..dim).map(|_| Element(rng.gen_range(0..16))).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        let in_ring = solve(&ring5, &m, &b).ok();
        let in_field = solve(&field, &m, &b).ok();
        let direct = oracle.solve(&rows, &b);
        ensure(in_ring == direct && in_field == direct, || {
            format!("dim {dim}: ring {in_ring:?}, field {in_field:?}, elimination {direct:?}")
        })?;
        if direct.is_some() {
            solved += 1;
        } else {
            singular += 1;
        }
    }
    ensure(solved >= 100, || format!("only {solved} nonsingular systems"))?;

    // The same agreement through the codec on a ring code.
    let h = build_h1(1, 5, &ring5).unwrap();
    let mut decoded = 0;
    for p in enumerate_patterns(h.spec()) {
        let data: Vec<Element> = (0..h.spec().dimension()).map(|_| Element(rng.gen_range(0..16))).collect();
        let stripe = encode(&h, &data).map_err(|e| e.to_string())?;
        let mut damaged = stripe.clone();
        damaged.erase_pattern(&p).unwrap();
        let cols = erased_columns(&p, h.spec()).unwrap();
        let all: Vec<usize> = (0..h.h().rows()).collect();
        let known: Vec<usize> = (0..h.spec().len()).filter(|c| !cols.contains(c)).collect();
        let rhs: Vec<Element> = all
            .iter()
            .map(|&row| {
                known.iter().fold(Element::ZERO, |acc, &c| {
                    oracle.add(acc, oracle.mul(h.get(row, c), stripe.symbols()[c]))
                })
            })
            .collect();
        let sub = rows_of(&submatrix(h.h(), &all, &cols).unwrap());
        let direct = oracle.solve(&sub, &rhs).ok_or_else(|| format!("{p}: singular by elimination"))?;
        let got = decode(&h, &damaged).map_err(|e| e.to_string())?;
        let got: Vec<Element> = cols.iter().map(|&c| got.symbols()[c]).collect();
        ensure(got == direct, || format!("{p}: ring decode {got:?}, elimination {direct:?}"))?;
        decoded += 1;
    }
    Ok(format!(
        "200 random systems agree exactly ({solved} solved, {singular} singular in both); {decoded} ring decodes agree"
    ))
}

fn search_config(source: CoefficientSource, trials: u64, seed: u64, jobs: Option<usize>) -> SearchConfig {
    SearchConfig {
        n: 5,
        m: 1,
        s: 2,
        r_max: 3,
        trials,
        seed,
        algebra: AlgebraSpec::Field { w: 4, modulus: 0x13 },
        source,
        jobs,
    }
}

fn criterion10() -> Check {
    let injected = run_search(&search_config(CoefficientSource::Construction1, 4, 7, None)).map_err(|e| e.to_string())?;
    ensure(injected.iter().all(|t| t.achieved_r == 3 && t.failed_at.is_none()), || {
        format!("injected coefficients: {injected:?}")
    })?;

    let probes = Mutex::new(Vec::new());
    let probe = |trial: u64, r: usize, evals: u64| probes.lock().unwrap().push((trial, r, evals));
    let cfg = search_config(CoefficientSource::Random, 40, 1, None);
    let records = run_search_with_probe(&cfg, &probe).map_err(|e| e.to_string())?;
    let probes = probes.into_inner().unwrap();
    let mut failing = 0;
    let mut past_failure = 0u64;
    for rec in &records {
        let Some((f, _)) = &rec.failed_at else { continue };
        failing += 1;
        past_failure += probes
            .iter()
            .filter(|(t, r, _)| *t == rec.trial && r > f)
            .map(|(_, _, e)| e.max(&1))
            .sum::<u64>();
        ensure(probes.iter().any(|(t, r, e)| *t == rec.trial && r == f && *e > 0), || {
            format!("trial {}: no evaluations recorded at failing r", rec.trial)
        })?;
    }
    ensure(failing > 0, || "no random trial failed; pruning untested".into())?;
    ensure(past_failure == 0, || format!("{past_failure} pattern checks past the first failing r"))?;

    let one = run_search(&search_config(CoefficientSource::Random, 12, 3, Some(1))).map_err(|e| e.to_string())?;
    let four = run_search(&search_config(CoefficientSource::Random, 12, 3, Some(4))).map_err(|e| e.to_string())?;
    ensure(one == four, || "library reports differ between 1 and 4 jobs".into())?;

    let cli = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_sdcode"))
            .args([
                "search", "--n", "5", "--m", "1", "--s", "2", "--rmax", "3", "--trials", "12", "--seed", "3",
                "--field", "w=4,poly=0x13", "--jobs", jobs,
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (cli("1")?, cli("4")?);
    ensure(a.status.success() && b.status.success(), || "search command failed".into())?;
    ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || "CLI reports differ between --jobs 1 and 4".into())?;
    let best = one.iter().map(|t| t.achieved_r).max().unwrap_or(0);
    Ok(format!(
        "injected achieved_r=3; {failing}/40 random trials failed with 0 checks past failure; \
         --jobs 1 and 4 reports identical (best random achieved_r={best})"
    ))
}

fn criterion11() -> Check {
    let alg = gf16();
    let clean = build_h1(3, 5, &alg).unwrap();
    ensure(is_sd(&clean).sd, || "uncorrupted matrix is not SD".into())?;
    let mut h = clean.clone();
    let v = h.get(3, 0);
    h.set(3, 1, v);
    let report = is_sd(&h);
    let witness = report.witness.clone().ok_or("corruption not detected")?;
    ensure(!report.sd, || "report says SD".into())?;

    let oracle = Oracle::for_algebra(&alg);
    let all: Vec<usize> = (0..h.h().rows()).collect();
    let det_of = |p: &sdcode::ErasurePattern| {
        let cols = erased_columns(p, h.spec()).unwrap();
        oracle.det(&rows_of(&submatrix(h.h(), &all, &cols).unwrap()))
    };
    ensure(det_of(&witness).is_zero(), || format!("witness {witness} submatrix is nonsingular"))?;
    let before = enumerate_patterns(h.spec()).take(report.patterns_checked as usize - 1);
    for p in before {
        ensure(!det_of(&p).is_zero(), || format!("{p} precedes the witness but is singular"))?;
    }
    Ok(format!(
        "entry (3,1) overwritten; witness `{witness}` (pattern #{}), brute-force determinant = 0",
        report.patterns_checked
    ))
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let extended = args.iter().any(|a| a == "--include-ignored" || a == "--ignored")
        || std::env::var("SDCODE_EXTENDED").is_ok_and(|v| v == "1");

    let mut runner = Runner { failed: Vec::new() };
    runner.run("1", "construction fidelity", criterion1);
    runner.run("2", "m=1 constructions are SD", criterion2);
    runner.run("3", "m=2 constructions are SD", criterion3);
    if extended {
        runner.run("4", "C(51,5,2) over GF(256) is SD", criterion4);
    } else {
        println!("SKIP  criterion  4  C(51,5,2) over GF(256) is SD: opt-in, pass --include-ignored or set SDCODE_EXTENDED=1");
    }
    runner.run("5", "determinant identities", criterion5);
    runner.run("6", "1+α^k is a unit", criterion6);
    runner.run("7", "shortening", criterion7);
    runner.run("8", "codec round trip", criterion8);
    runner.run("9", "ring/field cross-check", criterion9);
    runner.run("10", "search behaviour", criterion10);
    runner.run("11", "negative control", criterion11);

    if runner.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {}", runner.failed.join(", "));
        std::process::exit(1);
    }
}

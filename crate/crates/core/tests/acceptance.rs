//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};

use dimers::asymptotics::{entropy_integral, entropy_target, finite_size_entropy};
use dimers::codec::{decode, encode};
use dimers::gaussian::det_exact;
use dimers::kasteleyn::{
    adjacency_matrix, count_rectangle_det, torus_determinants, typed_sign_contribution, TorusMode,
};
use dimers::oracle::{
    collect_matchings, count_overtilings, count_with_boundary, enumerate_matchings, flip_connectivity,
    for_each_boundary_configuration, matching_signature, EnumerationLimits,
};
use dimers::spectral::{count_rectangle_spectral, default_precision};
use dimers::{GaussianInt, GridSpec, SignClass, TorusParityType};

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Every rectangle with an even number of at most `max` cells.
fn rectangles(max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=max {
        for n in 1..=max / m {
            if m * n % 2 == 0 {
                out.push((m, n));
            }
        }
    }
    out
}

fn fibonacci(m: usize) -> BigUint {
    // F_1 = 1, F_2 = 2
    let (mut a, mut b) = (BigUint::from(1u8), BigUint::from(2u8));
    for _ in 1..m {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

fn is_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

fn criterion_1() -> Check {
    let limits = EnumerationLimits::default();
    let three = BigUint::from(3u8);
    ensure!(ok(enumerate_matchings(GridSpec::rectangle(3, 2), &limits))? == three, "enumeration");
    ensure!(ok(count_rectangle_det(3, 2))? == three, "determinant");
    ensure!(ok(count_rectangle_spectral(3, 2, default_precision(3, 2)))? == three, "spectral");
    // Horizontal weight along the side of length 3, vertical along the side of length 2.
    let det = det_exact(&ok(adjacency_matrix(GridSpec::rectangle(2, 3), SignClass::B0))?);
    ensure!(det == GaussianInt::from(9), "det A = {det}, expected 9");
    let swapped = det_exact(&ok(adjacency_matrix(GridSpec::rectangle(3, 2), SignClass::B0))?);
    ensure!(swapped == GaussianInt::from(-9), "transposed grid: det A = {swapped}, expected (-1)^3 * 3^2");
    Ok("N(3,2) = 3 three ways, det A = 9".into())
}

fn criterion_2() -> Check {
    let expected = BigUint::from(12988816u32);
    ensure!(expected == BigUint::from(3604u32).pow(2), "3604^2");
    let det = ok(count_rectangle_det(8, 8))?;
    let spec = ok(count_rectangle_spectral(8, 8, default_precision(8, 8)))?;
    ensure!(det == expected && spec == expected, "det {det}, spectral {spec}");
    Ok("N(8,8) = 12988816 = 3604^2".into())
}

fn criterion_3() -> Check {
    let limits = EnumerationLimits::default();
    let shapes = rectangles(36);
    for &(m, n) in &shapes {
        let e = ok(enumerate_matchings(GridSpec::rectangle(m, n), &limits))?;
        let d = ok(count_rectangle_det(m, n))?;
        let s = ok(count_rectangle_spectral(m, n, default_precision(m, n)))?;
        ensure!(e == d && d == s, "{m}x{n}: enumerate {e}, determinant {d}, spectral {s}");
    }
    Ok(format!("{} rectangles agree", shapes.len()))
}

fn criterion_4() -> Check {
    for m in 1..=12 {
        let n = ok(count_rectangle_det(2, m))?;
        ensure!(n == fibonacci(m), "N(2,{m}) = {n}");
    }
    Ok("N(2,m) = F_m for m = 1..12".into())
}

fn criterion_5() -> Check {
    for n in [2usize, 4, 6, 8] {
        let count = ok(count_rectangle_det(n, n))?;
        if n % 4 == 0 {
            ensure!(is_square(&count), "N({n},{n}) = {count} is not a square");
        } else {
            ensure!(
                &count % 2u8 == BigUint::from(0u8) && is_square(&(&count / 2u8)),
                "N({n},{n}) = {count} is not twice a square"
            );
        }
    }
    Ok("squares at 4, 8; twice squares at 2, 6".into())
}

fn criterion_6() -> Check {
    let limits = EnumerationLimits::default();
    let mut total = 0usize;
    for (m, n) in rectangles(36) {
        let all = ok(collect_matchings(GridSpec::rectangle(m, n), &limits))?;
        let first = matching_signature(&all[0]);
        for mt in &all {
            ensure!(matching_signature(mt) == first, "{m}x{n}: signatures differ");
        }
        total += all.len();
    }
    Ok(format!("{total} matchings, one signature per rectangle"))
}

const SIGN_TABLE_MOD4: [[i8; 4]; 4] = [[1, 1, 1, 1], [-1, -1, 1, 1], [-1, 1, -1, 1], [-1, 1, 1, -1]];

fn criterion_7() -> Check {
    let limits = EnumerationLimits::default();
    let mut summary = Vec::new();
    for (m, n) in [(4usize, 4usize), (4, 8)] {
        let dets = ok(torus_determinants(m, n, TorusMode::Validated, &limits))?;
        ensure!(dets.normalized[0] == BigInt::from(0), "{m}x{n}: det B0 = {}", dets.normalized[0]);
        let mut sums = [0i64; 4];
        let mut count = 0u64;
        for mt in ok(collect_matchings(GridSpec::torus(m, n), &limits))? {
            let t = TorusParityType::of(&mt);
            for k in SignClass::ALL {
                let c = typed_sign_contribution(&mt, k);
                ensure!(c == SIGN_TABLE_MOD4[t.index()][k.index()], "{m}x{n}: type {t}, {k}: {c}");
                sums[k.index()] += c as i64;
            }
            count += 1;
        }
        for k in SignClass::ALL {
            ensure!(
                dets.normalized[k.index()] == BigInt::from(sums[k.index()]),
                "{m}x{n}: det {k} = {}, typed sum {}",
                dets.normalized[k.index()],
                sums[k.index()]
            );
        }
        ensure!(dets.count == BigUint::from(count), "{m}x{n}: combination {} vs oracle {count}", dets.count);
        summary.push(format!("N'({m},{n}) = {count}"));
    }
    Ok(summary.join(", "))
}

fn criterion_8() -> Check {
    let limits = EnumerationLimits::default();
    let star = ok(count_overtilings(4, 4, &limits))?;
    let torus = ok(enumerate_matchings(GridSpec::torus(4, 4), &limits))?;
    let plain = ok(enumerate_matchings(GridSpec::rectangle(4, 4), &limits))?;
    ensure!(star >= torus && torus >= plain, "{star} >= {torus} >= {plain} fails");
    Ok(format!("N* = {star} >= N' = {torus} >= N = {plain}"))
}

fn criterion_9() -> Check {
    let limits = EnumerationLimits::default();
    let star = |m: usize, n: usize| count_overtilings(m, n, &limits).map_err(|e| e.to_string());
    let mut splits = 0;
    for m in 1..=4 {
        for n in 1..=4 {
            let whole = star(m, n)?;
            for a in 1..n {
                ensure!(whole <= star(m, a)? * star(m, n - a)?, "N*({m},{n}) vs columns {a}+{}", n - a);
                splits += 1;
            }
            for a in 1..m {
                ensure!(whole <= star(a, n)? * star(m - a, n)?, "N*({m},{n}) vs rows {a}+{}", m - a);
                splits += 1;
            }
        }
    }
    let torus = ok(enumerate_matchings(GridSpec::torus(4, 4), &limits))?;
    let mut configs = 0;
    let mut failure = None;
    for_each_boundary_configuration(2, 2, |c| {
        configs += 1;
        match count_with_boundary(2, 2, c, &limits) {
            Ok(k) if k.pow(4) <= torus => {}
            Ok(k) => failure = Some(format!("N*_C(2,2) = {k} for {c:?}")),
            Err(e) => failure = Some(e.to_string()),
        }
    });
    if let Some(f) = failure {
        return Err(f);
    }
    Ok(format!("{splits} splits, {configs} boundary configurations"))
}

fn criterion_10() -> Check {
    let target = entropy_target(128).to_f64();
    let q = ok(entropy_integral(1e-8))?;
    ensure!((q.value - target).abs() <= 1e-8, "integral {} vs G/pi {target}", q.value);
    let rate = target.exp();
    ensure!((1.33..=1.34).contains(&rate), "exp(G/pi) = {rate}");
    Ok(format!("integral {:.10}, G/pi {target:.10}, exp(G/pi) {rate:.4}", q.value))
}

fn criterion_11() -> Check {
    let reports = ok(finite_size_entropy(64, 128))?;
    for w in reports.windows(2) {
        ensure!(w[0].per_site_log < w[1].per_site_log, "not increasing at n = {}", w[1].n);
    }
    let last = reports.last().expect("nonempty");
    let gap = last.gap.to_f64();
    ensure!(last.n == 64 && (0.0..=0.05).contains(&gap), "gap at 64 is {gap}");
    Ok(format!("gap at n = 64 is {gap:.5}"))
}

fn criterion_12() -> Check {
    let limits = EnumerationLimits::default();
    let mut total = 0usize;
    for (m, n) in rectangles(36) {
        for mt in ok(collect_matchings(GridSpec::rectangle(m, n), &limits))? {
            let code = ok(encode(&mt))?;
            ensure!(code.bits.len() == m * n / 2, "{m}x{n}: {} bits", code.bits.len());
            ensure!(ok(decode(&code))? == mt, "{m}x{n}: round trip");
            total += 1;
        }
    }
    Ok(format!("{total} tilings round-trip in mn/2 bits"))
}

fn criterion_13() -> Check {
    let limits = EnumerationLimits::default();
    for m in 1..=6 {
        for n in 1..=6 {
            if m * n % 2 == 0 {
                ensure!(ok(flip_connectivity(m, n, &limits))?, "{m}x{n} flip graph is disconnected");
            }
        }
    }
    Ok("connected up to 6x6".into())
}

type Criterion = (u32, &'static str, Option<u64>, fn() -> Check);

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "3x2 worked example", Some(1), criterion_1),
        (2, "8x8 count", Some(5), criterion_2),
        (3, "oracle equivalence, mn <= 36", Some(120), criterion_3),
        (4, "Fibonacci identity", None, criterion_4),
        (5, "squareness", None, criterion_5),
        (6, "signature coherence", None, criterion_6),
        (7, "torus determinants and sign table", Some(120), criterion_7),
        (8, "N* >= N' >= N at 4x4", None, criterion_8),
        (9, "submultiplicativity and reflection", None, criterion_9),
        (10, "entropy integral = G/pi", Some(30), criterion_10),
        (11, "finite-size entropy", Some(30), criterion_11),
        (12, "codec round trip", None, criterion_12),
        (13, "flip connectivity", Some(60), criterion_13),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs(secs) => {
                Err(format!("took {elapsed:.2?}, limit {secs} s"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 13 criteria failed");
        std::process::exit(1);
    }
    println!("all 13 criteria passed");
}

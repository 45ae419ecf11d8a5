//! The invariant suite behind `dimers verify`.

use dimers::asymptotics::{entropy_integral, entropy_target, finite_size_entropy};
use dimers::codec::{decode, encode};
use dimers::kasteleyn::{count_rectangle_det, sign_table, torus_determinants, typed_sign_contribution, TorusMode};
use dimers::oracle::{
    collect_matchings, count_overtilings, count_with_boundary, enumerate_matchings, flip_connectivity,
    for_each_boundary_configuration, for_each_matching, matching_signature, EnumerationLimits,
};
use dimers::spectral::{count_rectangle_spectral, default_precision};
use dimers::{BigCount, BigInt, GridSpec, SignClass, TorusParityType};

pub type Outcome = Result<String, String>;

pub struct Invariant {
    pub name: &'static str,
    pub run: Box<dyn Fn(&EnumerationLimits) -> Outcome + Sync>,
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rectangles(max_cells: usize) -> Vec<(usize, usize)> {
    (1..=max_cells)
        .flat_map(|m| (1..=max_cells / m).map(move |n| (m, n)))
        .filter(|(m, n)| m * n % 2 == 0)
        .collect()
}

fn oracle_equivalence(limits: &EnumerationLimits) -> Outcome {
    let shapes = rectangles(limits.rectangle_cells);
    for &(m, n) in &shapes {
        let e = enumerate_matchings(GridSpec::rectangle(m, n), limits).map_err(err)?;
        let d = count_rectangle_det(m, n).map_err(err)?;
        let s = count_rectangle_spectral(m, n, default_precision(m, n)).map_err(err)?;
        if e != d || d != s {
            return Err(format!("{m}x{n}: enumerate {e}, determinant {d}, spectral {s}"));
        }
    }
    Ok(format!("{} rectangles", shapes.len()))
}

fn signature_coherence(limits: &EnumerationLimits) -> Outcome {
    let mut total = 0usize;
    for (m, n) in rectangles(limits.rectangle_cells) {
        let mut first = None;
        let mut bad = false;
        for_each_matching(GridSpec::rectangle(m, n), limits, |mt| {
            let s = matching_signature(mt);
            bad |= *first.get_or_insert(s) != s;
            total += 1;
        })
        .map_err(err)?;
        if bad {
            return Err(format!("{m}x{n}: signatures differ"));
        }
    }
    Ok(format!("{total} matchings"))
}

fn fibonacci(_: &EnumerationLimits) -> Outcome {
    let (mut a, mut b) = (BigCount::from(1u8), BigCount::from(2u8));
    for m in 1..=12 {
        let n = count_rectangle_det(2, m).map_err(err)?;
        if n != a {
            return Err(format!("N(2,{m}) = {n}, F_{m} = {a}"));
        }
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    Ok("m = 1..12".into())
}

fn squareness(_: &EnumerationLimits) -> Outcome {
    for n in [2usize, 4, 6, 8] {
        let count = count_rectangle_det(n, n).map_err(err)?;
        let core = if n % 4 == 0 { count.clone() } else { &count / 2u8 };
        let root = core.sqrt();
        if &root * &root != core || (n % 4 == 2 && &core * 2u8 != count) {
            return Err(format!("N({n},{n}) = {count}"));
        }
    }
    Ok("n = 2, 4, 6, 8".into())
}

fn torus_sign_table(limits: &EnumerationLimits) -> Outcome {
    let mut sizes = vec![(4usize, 4usize)];
    if limits.torus_cells >= 32 {
        sizes.push((4, 8));
    }
    let mut done = Vec::new();
    for (m, n) in sizes {
        let dets = torus_determinants(m, n, TorusMode::Validated, limits).map_err(err)?;
        if dets.normalized[0] != BigInt::from(0) {
            return Err(format!("{m}x{n}: det B0 = {}", dets.normalized[0]));
        }
        let table = sign_table(m, n);
        let mut sums = [0i64; 4];
        let mut count = 0u64;
        let mut mismatch = None;
        for_each_matching(GridSpec::torus(m, n), limits, |mt| {
            let t = TorusParityType::of(mt);
            for k in SignClass::ALL {
                let c = typed_sign_contribution(mt, k);
                if c != table[t.index()][k.index()] {
                    mismatch = Some(format!("{m}x{n}: type {t} under {k} contributes {c}"));
                }
                sums[k.index()] += c as i64;
            }
            count += 1;
        })
        .map_err(err)?;
        if let Some(msg) = mismatch {
            return Err(msg);
        }
        for k in SignClass::ALL {
            if dets.normalized[k.index()] != BigInt::from(sums[k.index()]) {
                return Err(format!("{m}x{n}: det {k} = {}", dets.normalized[k.index()]));
            }
        }
        if dets.count != BigCount::from(count) {
            return Err(format!("{m}x{n}: combination {} vs enumeration {count}", dets.count));
        }
        done.push(format!("{m}x{n}"));
    }
    Ok(done.join(", "))
}

fn overtiling_chain(limits: &EnumerationLimits) -> Outcome {
    let star = count_overtilings(4, 4, limits).map_err(err)?;
    let torus = enumerate_matchings(GridSpec::torus(4, 4), limits).map_err(err)?;
    let plain = enumerate_matchings(GridSpec::rectangle(4, 4), limits).map_err(err)?;
    if star >= torus && torus >= plain {
        Ok(format!("{star} >= {torus} >= {plain}"))
    } else {
        Err(format!("{star} >= {torus} >= {plain} fails"))
    }
}

fn submultiplicativity(limits: &EnumerationLimits) -> Outcome {
    let star = |m, n| count_overtilings(m, n, limits).map_err(err);
    for m in 1..=4 {
        for n in 1..=4 {
            let whole = star(m, n)?;
            for a in 1..n {
                if whole > star(m, a)? * star(m, n - a)? {
                    return Err(format!("N*({m},{n}) split into columns {a}+{}", n - a));
                }
            }
            for a in 1..m {
                if whole > star(a, n)? * star(m - a, n)? {
                    return Err(format!("N*({m},{n}) split into rows {a}+{}", m - a));
                }
            }
        }
    }
    let torus = enumerate_matchings(GridSpec::torus(4, 4), limits).map_err(err)?;
    let mut worst = None;
    for_each_boundary_configuration(2, 2, |c| {
        if let Ok(k) = count_with_boundary(2, 2, c, limits) {
            if k.pow(4) > torus {
                worst = Some(k);
            }
        }
    });
    match worst {
        None => Ok("sizes up to 4x4, reflection at 2x2".into()),
        Some(k) => Err(format!("N*_C(2,2)^4 = {} exceeds N'(4,4)", k.pow(4))),
    }
}

fn boundary_decomposition(limits: &EnumerationLimits) -> Outcome {
    for (m, n) in [(2, 2), (2, 3), (3, 4), (4, 4)] {
        let mut total = BigCount::from(0u8);
        let mut failure = None;
        for_each_boundary_configuration(m, n, |c| match count_with_boundary(m, n, c, limits) {
            Ok(k) => total += k,
            Err(e) => failure = Some(e.to_string()),
        });
        if let Some(f) = failure {
            return Err(f);
        }
        let star = count_overtilings(m, n, limits).map_err(err)?;
        if total != star {
            return Err(format!("{m}x{n}: sum {total} vs N* {star}"));
        }
    }
    Ok("2x2, 2x3, 3x4, 4x4".into())
}

fn codec_round_trip(limits: &EnumerationLimits) -> Outcome {
    let mut total = 0usize;
    for (m, n) in rectangles(limits.rectangle_cells) {
        for mt in collect_matchings(GridSpec::rectangle(m, n), limits).map_err(err)? {
            let code = encode(&mt).map_err(err)?;
            if code.bits.len() != m * n / 2 || decode(&code).map_err(err)? != mt {
                return Err(format!("{m}x{n}: {}", code.to_bit_string()));
            }
            total += 1;
        }
    }
    Ok(format!("{total} tilings"))
}

fn flips(limits: &EnumerationLimits) -> Outcome {
    for (m, n) in rectangles(limits.rectangle_cells) {
        if !flip_connectivity(m, n, limits).map_err(err)? {
            return Err(format!("{m}x{n} is disconnected"));
        }
    }
    Ok(format!("all rectangles up to {} cells", limits.rectangle_cells))
}

fn integral(_: &EnumerationLimits) -> Outcome {
    let target = entropy_target(128).to_f64();
    let q = entropy_integral(1e-8).map_err(err)?;
    let rate = target.exp();
    if (q.value - target).abs() > 1e-8 || !(1.33..=1.34).contains(&rate) {
        return Err(format!("integral {}, G/pi {target}, exp(G/pi) {rate}", q.value));
    }
    Ok(format!("|integral - G/pi| = {:.1e}", (q.value - target).abs()))
}

fn finite_size(_: &EnumerationLimits) -> Outcome {
    let reports = finite_size_entropy(64, 128).map_err(err)?;
    if let Some(w) = reports.windows(2).find(|w| w[0].per_site_log >= w[1].per_site_log) {
        return Err(format!("not increasing at n = {}", w[1].n));
    }
    let gap = reports.last().expect("nonempty").gap.to_f64();
    if !(0.0..=0.05).contains(&gap) {
        return Err(format!("gap at 64 is {gap}"));
    }
    Ok(format!("gap at n = 64 is {gap:.5}"))
}

pub fn suite() -> Vec<Invariant> {
    fn inv(name: &'static str, run: fn(&EnumerationLimits) -> Outcome) -> Invariant {
        Invariant {
            name,
            run: Box::new(run),
        }
    }
    vec![
        inv("oracle-equivalence", oracle_equivalence),
        inv("signature-coherence", signature_coherence),
        inv("fibonacci", fibonacci),
        inv("squareness", squareness),
        inv("torus-sign-table", torus_sign_table),
        inv("overtiling-chain", overtiling_chain),
        inv("submultiplicativity", submultiplicativity),
        inv("boundary-decomposition", boundary_decomposition),
        inv("codec-round-trip", codec_round_trip),
        inv("flip-connectivity", flips),
        inv("entropy-integral", integral),
        inv("finite-size-entropy", finite_size),
    ]
}

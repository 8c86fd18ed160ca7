//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.
//!
//! Expected values are recomputed here from first principles where an
//! independent route exists (naive enumeration, textbook zeta values, the eta
//! product by direct multiplication) and then compared with the library.

use std::time::Instant;

use ekm::arith::{gcd_u64, primes_up_to, q, qpow, Q};
use ekm::charsum::{
    cal_d, characters, chi_from_counts, cube_root, d_n, gauss, gauss_conj_inverse, has_cube_root, jacobi,
    jacobi_j2, u0, value_histogram, CycNumber, DirichletCharacter, Guard,
};
use ekm::freudenthal::{
    gamma_element, is_lattice_preserving, level_pairs, quartic, random_integral_vector, symplectic,
    symplectic_gram, FreudenthalVector, W_DIM,
};
use ekm::jordan::{random_integral_jordan, random_integral_jordan2, JordanElement};
use ekm::kmseries::{constant_check, delta_coeffs, km1, km2_convolution, km2_local};
use ekm::linalg::QMatrix;
use ekm::octonion::{random_order_element, IntegralOrder};
use ekm::ratfun::Var;
use ekm::siegel::{ftilde, verify_hp, verify_kp, PrimeSpec, SiegelParams};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- oracles

/// Value histogram of `S[x] mod m` over `(Z/m)^8`, point by point, plus the
/// histogram restricted to `x != 0 mod p`.
fn naive_histogram(form: &[[i64; 8]; 8], m: u64, p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut all = vec![0u64; m as usize];
    let mut prim = vec![0u64; m as usize];
    let mi = m as i64;
    let mut x = [0i64; 8];
    loop {
        let mut v = 0i64;
        for i in 0..8 {
            if x[i] == 0 {
                continue;
            }
            v += form[i][i] / 2 * x[i] * x[i];
            for j in 0..i {
                v += form[i][j] * x[i] * x[j];
            }
        }
        let r = v.rem_euclid(mi) as usize;
        all[r] += 1;
        if x.iter().any(|&c| c % p as i64 != 0) {
            prim[r] += 1;
        }
        let mut k = 0;
        loop {
            if k == 8 {
                return (all, prim);
            }
            x[k] += 1;
            if x[k] < mi {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

fn order_gram() -> [[i64; 8]; 8] {
    IntegralOrder::get().gram2
}

fn hyperbolic4() -> [[i64; 8]; 8] {
    let mut f = [[0i64; 8]; 8];
    for k in 0..4 {
        f[2 * k][2 * k + 1] = 1;
        f[2 * k + 1][2 * k] = 1;
    }
    f
}

/// Primitive solutions mod `p` of an even unimodular rank-8 form with `chi(S) = 1`.
fn expected_prim(p: u64, c: u64) -> Q {
    let pq = q(p as i64);
    let base = qpow(&pq, 7) * (q(1) - qpow(&pq, -4));
    if c.is_multiple_of(p) {
        base * (q(1) + qpow(&pq, -3))
    } else {
        base
    }
}

fn naive_jacobi(chis: &[DirichletCharacter]) -> CycNumber {
    let n = chis[0].modulus() as i64;
    let mut acc = CycNumber::zero(1);
    match chis.len() {
        2 => {
            for a in 0..n {
                acc = &acc + &(&chis[0].value(a) * &chis[1].value(1 - a));
            }
        }
        3 => {
            for a in 0..n {
                for b in 0..n {
                    let t = &(&chis[0].value(a) * &chis[1].value(b)) * &chis[2].value(1 - a - b);
                    acc = &acc + &t;
                }
            }
        }
        _ => unreachable!("rank 2 or 3"),
    }
    acc
}

fn label(chi: &DirichletCharacter) -> String {
    format!("chi_{}[{}]", chi.modulus(), chi.index())
}

// ---------------------------------------------------------------- criteria

fn local_factor_identity() -> Verdict {
    let start = Instant::now();
    let r = verify_kp();
    let secs = start.elapsed().as_secs_f64();
    for c in &r.checks {
        ensure(c.holds, || format!("{} fails: {:?}", c.name, c.residual))?;
    }
    let pins = ["four_term_form_at_t=p9X", "four_term_form_at_t=p9/X", "four_term_form_at_t=p5X", "four_term_form_at_t=p5/X"];
    for pin in pins {
        ensure(r.checks.iter().any(|c| c.name == pin && c.holds), || format!("missing pin {pin}"))?;
    }
    ensure(r.holds && secs < 60.0, || format!("runtime {secs:.1}s"))?;
    Ok(format!("K = 1 with p, X, t formal; 4 evaluation pins; {secs:.2}s"))
}

fn generating_series() -> Verdict {
    let mut parts = Vec::new();
    for (p, m) in [
        (PrimeSpec::Formal, 8),
        (PrimeSpec::Numeric(2), 10),
        (PrimeSpec::Numeric(3), 10),
        (PrimeSpec::Numeric(5), 10),
    ] {
        let r = verify_hp(&p, m).map_err(err)?;
        ensure(r.holds && r.orders.len() == m + 1, || format!("p = {p}: first mismatch at t^{:?}", r.first_mismatch))?;
        parts.push(format!("{p}: t^{m}"));
    }
    Ok(parts.join(", "))
}

fn siegel_symmetry() -> Verdict {
    let mut count = 0;
    for m1 in 0..=4 {
        for m3 in 0..=4 {
            for m2 in 0..=m3 {
                let prm = SiegelParams::new(m1, m2, m3).map_err(err)?;
                let f = ftilde(&prm, &PrimeSpec::Formal).map_err(err)?;
                ensure(f.invert_var(Var::X) == f, || format!("({m1},{m2},{m3}) not symmetric: {}", f.render()))?;
                count += 1;
            }
        }
    }
    let unit = ftilde(&SiegelParams::new(0, 0, 0).map_err(err)?, &PrimeSpec::Formal).map_err(err)?;
    ensure(unit.is_one(), || format!("trivial orbit gives {}", unit.render()))?;
    Ok(format!("{count} orbits Laurent and X -> 1/X invariant; trivial orbit = 1"))
}

fn ord_classes_agree(all: &[u64], p: u64, m: u32) -> bool {
    let class = |mut c: u64| {
        let mut k = 0;
        while k < m && c.is_multiple_of(p) {
            c /= p;
            k += 1;
        }
        k
    };
    (0..all.len()).all(|a| (0..all.len()).all(|b| class(a as u64) != class(b as u64) || all[a] == all[b]))
}

fn counting_oracles() -> Verdict {
    let start = Instant::now();
    let forms = [("hyperbolic", hyperbolic4()), ("order", order_gram())];
    for (name, f) in &forms {
        let fv: Vec<Vec<i64>> = f.iter().map(|r| r.to_vec()).collect();
        for p in [3u64, 5] {
            let (all, prim) = naive_histogram(f, p, p);
            let lib = value_histogram(&fv, p, Some(p), Guard::Default).map_err(err)?;
            ensure(lib.all == all && lib.prim == prim, || format!("{name} mod {p}: library histogram differs"))?;
            for c in 0..p {
                let e = expected_prim(p, c);
                let e_all = &e + if c % p == 0 { q(1) } else { q(0) };
                ensure(q(prim[c as usize] as i64) == e && q(all[c as usize] as i64) == e_all, || {
                    format!("{name} mod {p}, c = {c}: ({}, {}) vs ({e}, {e_all})", prim[c as usize], all[c as usize])
                })?;
            }
            ensure(ord_classes_agree(&all, p, 1), || format!("{name} mod {p}: not order-only"))?;
        }
        let (all9, prim9) = naive_histogram(f, 9, 3);
        let lib9 = value_histogram(&fv, 9, Some(3), Guard::Default).map_err(err)?;
        ensure(lib9.all == all9 && lib9.prim == prim9, || format!("{name} mod 9: library histogram differs"))?;
        for c in 0..9u64 {
            let prim_expected = qpow(&q(3), 7) * expected_prim(3, c);
            let lower = if c % 9 == 0 { 1 } else { 0 };
            let all_expected = &prim_expected + q(3i64.pow(8) * lower);
            ensure(q(prim9[c as usize] as i64) == prim_expected && q(all9[c as usize] as i64) == all_expected, || {
                format!("{name} mod 9, c = {c}: ({}, {}) vs ({prim_expected}, {all_expected})", prim9[c as usize], all9[c as usize])
            })?;
        }
        ensure(ord_classes_agree(&all9, 3, 2), || format!("{name} mod 9: not order-only"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("runtime {secs:.1}s"))?;
    Ok(format!("2 forms at p = 3, 5 (m = 1) and p = 3 (m = 2), all residues; {secs:.1}s"))
}

fn eta_sums() -> Verdict {
    let start = Instant::now();
    let f = order_gram();
    let mut cases = 0;
    for (p, m) in [(3u64, 1u32), (5, 1), (3, 2)] {
        let modulus = p.pow(m);
        let (all, _) = naive_histogram(&f, modulus, p);
        let prims: Vec<DirichletCharacter> = characters(modulus).into_iter().filter(|c| c.is_primitive()).collect();
        let etas = if m == 2 { &prims[..1] } else { &prims[..] };
        for eta in etas {
            for c in 0..modulus as i64 {
                let mut sum = CycNumber::zero(1);
                for (r, &h) in all.iter().enumerate() {
                    if h != 0 {
                        sum = &sum + &eta.value(r as i64 + c).scale(&q(h as i64));
                    }
                }
                let expected = eta.value(c).scale(&qpow(&q(p as i64), (4 * m) as i64));
                ensure(sum == expected, || format!("p^m = {modulus}, {}, c = {c}", label(eta)))?;
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("runtime {secs:.1}s"))?;
    Ok(format!("{cases} (p^m, eta, c) cases incl. 9^8 points; {secs:.1}s"))
}

fn jordan_jacobi() -> Verdict {
    let mut pairs = 0;
    for n in [3u64, 5] {
        let ni = n as i64;
        let order = IntegralOrder::get();
        // N(x) mod n for every x in o / n o, from octonion arithmetic
        let mut norms = Vec::with_capacity(n.pow(8) as usize);
        let mut v = [0i64; 8];
        loop {
            let x = order.from_order_ints(&v);
            let nx = x.norm();
            norms.push(nx.to_integer().to_i64().expect("small") .rem_euclid(ni));
            let mut k = 0;
            loop {
                if k == 8 {
                    break;
                }
                v[k] += 1;
                if v[k] < ni {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
            if k == 8 {
                break;
            }
        }
        for chi in characters(n).into_iter().filter(|c| c.is_primitive()) {
            for eta in characters(n) {
                let l = chi.value_field();
                let mut counts = vec![0i64; l as usize];
                for &nx in &norms {
                    for a in 0..ni {
                        for d in 0..ni {
                            if let (Some(e1), Some(e2)) = (chi.value_exp(a * d - nx), eta.value_exp(1 - a - d)) {
                                counts[((e1 + e2) % l) as usize] += 1;
                            }
                        }
                    }
                }
                let full = CycNumber::from_counts(l, &counts);
                let expected = naive_jacobi(&[chi.clone(), chi.clone(), eta.clone()]).scale(&q(ni.pow(4)));
                ensure(full == expected, || format!("({}, {}) enumeration", label(&chi), label(&eta)))?;
                let lib = jacobi_j2(&chi, &eta, Guard::Default).map_err(err)?;
                ensure(lib == full, || format!("({}, {}) library", label(&chi), label(&eta)))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs mod 3 and 5 by full enumeration"))
}

fn gauss_jacobi() -> Verdict {
    let mut admissible = 0;
    for n in [5u64, 13] {
        for chi in characters(n) {
            if !chi.is_primitive() || chi.is_quadratic() || !has_cube_root(&chi) {
                continue;
            }
            let root = cube_root(&chi).map_err(err)?;
            ensure(root.pow(3) == chi, || format!("{} cube root", label(&chi)))?;
            for eta in cal_d(n) {
                let psi = root.mul(&eta).map_err(err)?.conj();
                let j = naive_jacobi(&[psi.clone(), psi.clone(), psi.clone()]);
                let lhs = &j * &gauss(&chi.conj());
                let rhs = gauss(&psi).pow(3);
                ensure(lhs == rhs, || format!("{} with eta {}", label(&chi), label(&eta)))?;
                admissible += 1;
            }
        }
    }
    ensure(admissible > 0, || "no admissible pairs".into())?;
    let mut factorizations = 0;
    for n in [5u64, 7, 13] {
        let chars = characters(n);
        for a in &chars {
            for b in &chars {
                let ab = a.mul(b).map_err(err)?;
                if !ab.is_primitive() {
                    continue;
                }
                let pair = naive_jacobi(&[a.clone(), b.clone()]);
                ensure(&pair * &gauss(&ab) == &gauss(a) * &gauss(b), || format!("pair ({}, {})", label(a), label(b)))?;
                for c in &chars {
                    let lhs = naive_jacobi(&[a.clone(), b.clone(), c.clone()]);
                    let rhs = &naive_jacobi(&[ab.clone(), c.clone()]) * &pair;
                    ensure(lhs == rhs, || format!("triple ({}, {}, {})", label(a), label(b), label(c)))?;
                    let lib = jacobi(&[a.clone(), b.clone(), c.clone()]).map_err(err)?;
                    ensure(lib == lhs, || "library Jacobi sum differs".into())?;
                    factorizations += 1;
                }
            }
        }
    }
    let mut norms = 0;
    for n in 1..=13u64 {
        for chi in characters(n).into_iter().filter(|c| c.is_primitive()) {
            let lhs = &gauss(&chi) * &gauss(&chi.conj());
            ensure(lhs == chi.value(-1).scale(&q(n as i64)), || format!("norm of W({})", label(&chi)))?;
            norms += 1;
        }
    }
    Ok(format!("{admissible} cube-scalar pairs, {factorizations} factorizations, {norms} Gauss norms"))
}

fn freudenthal_elements() -> Verdict {
    let j = symplectic_gram();
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let mut samples: Vec<FreudenthalVector> = (0..W_DIM).map(FreudenthalVector::basis).collect();
    samples.extend((0..100).map(|_| random_integral_vector(&mut rng, 3)));
    let mut count = 0;
    for n in 1..=12i64 {
        for (a, b) in level_pairs(n) {
            ensure(gcd_u64(a as u64, n as u64) == 1 && (a * b + 1) % n == 0, || format!("bad pair ({a},{b}) mod {n}"))?;
            let g = gamma_element(a, b, n).map_err(err)?;
            ensure(g.mu.is_one(), || format!("N = {n}, ({a},{b}): mu = {}", g.mu))?;
            ensure(is_lattice_preserving(&g).map_err(err)?, || format!("N = {n}, ({a},{b}): not integral"))?;
            ensure(g.matrix.transpose().mul(&j).mul(&g.matrix) == j, || format!("N = {n}, ({a},{b}): symplectic"))?;
            for (i, w) in samples.iter().enumerate() {
                let gw = g.apply(w);
                ensure(quartic(&gw) == quartic(w), || format!("N = {n}, ({a},{b}): quartic on sample {i}"))?;
                let w2 = &samples[(i + 1) % samples.len()];
                ensure(symplectic(&gw, &g.apply(w2)) == symplectic(w, w2), || format!("N = {n}, ({a},{b}): pairing {i}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} elements for N <= 12 on 56 basis + 100 random vectors"))
}

fn cubic_coefficients(x: &JordanElement, y: &JordanElement) -> [Q; 4] {
    // interpolate det(X + sY) at s = 0, 1, -1, 2
    let v = |s: i64| (x + &y.scale(&q(s))).det3();
    let (f0, f1, fm, f2) = (v(0), v(1), v(-1), v(2));
    let c2 = (&f1 + &fm) / q(2) - &f0;
    let odd = (&f1 - &fm) / q(2);
    let c3 = (&f2 - &f0 - q(4) * &c2 - q(2) * &odd) / q(6);
    let c1 = odd - &c3;
    [f0, c1, c2, c3]
}

fn algebra_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10_000 {
        let x = random_order_element(&mut rng, 6);
        let y = random_order_element(&mut rng, 6);
        ensure((&x * &y).norm() == x.norm() * y.norm(), || format!("composition fails on pair {i}"))?;
    }
    let g2 = order_gram();
    let m = QMatrix::from_rows(g2.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect());
    ensure((0..8).all(|i| g2[i][i] % 2 == 0), || "odd diagonal".into())?;
    ensure(m.det().is_one(), || format!("det 2S = {}", m.det()))?;
    ensure(m.leading_minors().iter().all(|d| d > &Q::zero()), || "not positive definite".into())?;
    let fv: Vec<Vec<i64>> = g2.iter().map(|r| r.to_vec()).collect();
    for p in [2u64, 3, 5] {
        let chi = chi_from_counts(&fv, p, Guard::Default).map_err(err)?;
        ensure(chi == 1, || format!("chi_{p} = {chi}"))?;
    }
    for i in 0..1000 {
        let x = random_integral_jordan(&mut rng, 3);
        let y = random_integral_jordan(&mut rng, 3);
        let c = cubic_coefficients(&x, &y);
        let expect = [x.det3(), x.sharp().pair(&y), x.pair(&y.sharp()), y.det3()];
        ensure(c == expect, || format!("polarization fails on pair {i}"))?;
    }
    for i in 0..1000 {
        let z = random_integral_jordan2(&mut rng, 4);
        let w1 = random_order_element(&mut rng, 3);
        let w2 = random_order_element(&mut rng, 3);
        let corner = q(1) - z.trace2();
        let lhs = z.border(&w1, &w2, corner.clone()).det3();
        let rhs = -z.adj2().bracket(&w1, &w2) + z.det2() * corner;
        ensure(lhs == rhs, || format!("bordered determinant fails on case {i}"))?;
    }
    Ok("10^4 compositions, even unimodular PD lattice, chi_p = +1 (p = 2, 3, 5), 10^3 polarizations and borders".into())
}

fn global_coefficients() -> Verdict {
    let max_n = 200;
    let f = delta_coeffs(max_n);
    for chi in characters(5) {
        let a = km2_local(&f, &chi, max_n, Guard::Default).map_err(err)?;
        let b = km2_convolution(&f, &chi, max_n, Guard::Default).map_err(err)?;
        for n in 1..=max_n {
            // b(n) = chi(n) sum_{n1 n2 n3 = n} a(n1) n1^8 a(n2) n2^4 a(n3)
            let mut direct = BigInt::zero();
            for n1 in (1..=n).filter(|d| n % d == 0) {
                for n2 in (1..=n / n1).filter(|d| (n / n1) % d == 0) {
                    let n3 = n / n1 / n2;
                    direct += &f.coeffs()[n1] * BigInt::from(n1).pow(8) * &f.coeffs()[n2] * BigInt::from(n2).pow(4) * &f.coeffs()[n3];
                }
            }
            let expected = chi.value(n as i64).scale(&Q::from_integer(direct));
            ensure(a.get(n) == &expected && b.get(n) == &expected, || format!("{}: b({n}) differs", label(&chi)))?;
        }
        for m in 2..=max_n {
            for n in (m + 1)..=(max_n / m) {
                if gcd_u64(m as u64, n as u64) == 1 {
                    ensure(a.get(m * n) == &(a.get(m) * a.get(n)), || format!("{}: b({m}{n}) not multiplicative", label(&chi)))?;
                }
            }
        }
    }
    let d5 = CycNumber::rational(1, d_n(5));
    let mut first_kind = 0;
    for chi in characters(5).into_iter().filter(|c| c.is_primitive() && !c.is_quadratic()) {
        let r = km1(&f, &chi, max_n, Guard::Default).map_err(err)?;
        let root = cube_root(&chi).map_err(err)?;
        ensure(cal_d(5).len() == 1, || "mod 5 has more than one cubic character".into())?;
        let scalar = &(&gauss(&root.conj()).pow(3) * &gauss_conj_inverse(&chi).map_err(err)?) * &d5;
        let second = km2_convolution(&f, &root, max_n, Guard::Default).map_err(err)?;
        for n in 1..=max_n {
            ensure(r.jacobi_form.get(n) == &(second.get(n) * &scalar), || format!("{}: first-kind b({n})", label(&chi)))?;
        }
        first_kind += 1;
    }
    let off_cube = characters(13)
        .into_iter()
        .find(|c| c.is_primitive() && !c.is_quadratic() && c.value_exp(u0(13) as i64) != Some(0))
        .ok_or("no mod-13 character with chi(u0) != 1")?;
    let r = km1(&f, &off_cube, max_n, Guard::Default).map_err(err)?;
    ensure(r.vanishes && r.jacobi_form.is_zero(), || format!("{} does not vanish", label(&off_cube)))?;
    Ok(format!(
        "4 characters mod 5 agree with the direct triple sum for n <= {max_n}; {first_kind} first-kind series mod 5; {} (order {}) vanishes",
        label(&off_cube),
        off_cube.order()
    ))
}

fn constant() -> Verdict {
    // zeta(2), zeta(6), zeta(8), zeta(12) divided by the matching power of pi
    let zetas = [Q::new(1.into(), 6.into()), Q::new(1.into(), 945.into()), Q::new(1.into(), 9450.into()), Q::new(691.into(), 638_512_875.into())];
    let fact = |k: u64| Q::from_integer((1..=k).map(BigInt::from).product());
    let mut value = fact(5) * fact(7) * fact(11) / qpow(&q(2), 28);
    for z in &zetas {
        value *= z;
    }
    let expected = Q::new(691.into(), BigInt::from(2).pow(15) * 729 * 25 * 49 * 13);
    ensure(value == expected, || format!("direct value {value}"))?;
    let r = constant_check();
    ensure(r.holds && r.pi_exponent == 0, || format!("library value {}", r.value))?;
    Ok(format!("{value} with pi exponent 0"))
}

fn eigenform_oracle() -> Verdict {
    let max_n = 100usize;
    // q prod (1 - q^n)^24 by repeated multiplication by (1 - q^n)
    let mut c = vec![BigInt::zero(); max_n + 1];
    c[1] = BigInt::one();
    for n in 1..=max_n {
        for _ in 0..24 {
            for i in (n..=max_n).rev() {
                let v = c[i - n].clone();
                c[i] -= v;
            }
        }
    }
    let f = delta_coeffs(max_n);
    ensure(f.coeffs() == c.as_slice(), || "eta product differs from library".into())?;
    for m in 2..=max_n {
        for n in (m + 1)..=(max_n / m) {
            if gcd_u64(m as u64, n as u64) == 1 {
                ensure(c[m * n] == &c[m] * &c[n], || format!("tau({}) not multiplicative", m * n))?;
            }
        }
    }
    for p in primes_up_to(7) {
        let p = p as usize;
        ensure(c[p * p] == &c[p] * &c[p] - BigInt::from(p).pow(11), || format!("tau({p}^2)"))?;
    }
    let mut worst = 0f64;
    for p in primes_up_to(97) {
        let ratio = c[p as usize].to_f64().unwrap().abs() / (2.0 * (p as f64).powf(5.5));
        ensure(ratio <= 1.0, || format!("|tau({p})| exceeds the bound"))?;
        worst = worst.max(ratio);
    }
    Ok(format!("multiplicative to 100, prime-square relation p <= 7, max |tau(p)|/2p^5.5 = {worst:.4} for p <= 97"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("local factor identity K = 1", local_factor_identity),
        ("generating series of local polynomials", generating_series),
        ("local polynomial symmetry", siegel_symmetry),
        ("solution count oracles", counting_oracles),
        ("quadratic character sums I_eta", eta_sums),
        ("rank-2 Jordan Jacobi sum", jordan_jacobi),
        ("Gauss and Jacobi sum identities", gauss_jacobi),
        ("Freudenthal level elements", freudenthal_elements),
        ("algebra invariants", algebra_invariants),
        ("global Dirichlet coefficients", global_coefficients),
        ("normalizing constant", constant),
        ("eigenform oracle", eigenform_oracle),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(w) => println!("criterion {:>2} PASS  {name}: {w} [{secs:.1}s]", i + 1),
            Err(w) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {w} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

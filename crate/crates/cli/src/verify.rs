//! Seeded verification suites. Every check is exact; a failing check carries
//! the first counterexample found.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use liexp::ce_cohomology::{CEComplex, CrossedHom, DerivationTruncation, FiniteLieData};
use liexp::derivations::{DerMode, DerSpace, Lambda3Element, MoritaMap};
use liexp::expansions::random::{
    perturbed_free_expansion, random_automorphism, random_filtered_automorphism, random_mapping_class,
    random_word,
};
use liexp::expansions::{
    catalogue, free_expansion, johnson_graded_oracle, johnson_map, omega, surface_relator, symplectic_expansion,
    symplectic_expansion_with, tau1_cocycle_check, tau1_coboundary, transport_expansion, FreeGroupAutomorphism,
};
use liexp::formal_connection::{
    check_transfer_equivariance, connection_ideal, flatness_check, massey_model, surface_model, transfer_connection,
    word_label, CDGAModel, FormalConnection, Series,
};
use liexp::free_lie::{is_lyndon, lyndon_basis, witt_dim, FreeLie, LieElement, QuotientLie};
use liexp::linalg::{Matrix, PivotOrder, Vector};
use liexp::rational::{binomial, rat, ratio, Rational};
use liexp::tensor::{bch, TruncatedTensor, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::error::CliError;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Props,
    Johnson,
    Flatness,
    Ce,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Props => "props",
            Suite::Johnson => "johnson",
            Suite::Flatness => "flatness",
            Suite::Ce => "ce",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub suite: Suite,
    pub seed: u64,
    pub truncation: usize,
}

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_TRUNCATION: usize = 4;

/// The outcome of one named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub outcome: Result<String, String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn line(&self) -> String {
        match &self.outcome {
            Ok(detail) if detail.is_empty() => format!("PASS {} cases={}", self.name, self.cases),
            Ok(detail) => format!("PASS {} cases={} {detail}", self.name, self.cases),
            Err(why) => format!("FAIL {} cases={} counterexample: {why}", self.name, self.cases),
        }
    }
}

type Outcome = Result<(usize, String), String>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn lib<T>(r: liexp::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Stable per-check stream: FNV-1a of the name mixed into the seed.
fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn run_check(name: &str, seed: u64, f: impl FnOnce(&mut ChaCha8Rng) -> Outcome) -> Check {
    let mut rng = stream(seed, name);
    let outcome = match catch_unwind(AssertUnwindSafe(|| f(&mut rng))) {
        Ok(r) => r,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        }
    };
    match outcome {
        Ok((cases, detail)) => Check {
            name: name.into(),
            cases,
            outcome: Ok(detail),
        },
        Err(why) => Check {
            name: name.into(),
            cases: 0,
            outcome: Err(why),
        },
    }
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn random_tensor(letters: usize, depth: usize, rng: &mut ChaCha8Rng) -> TruncatedTensor {
    let terms = rng.gen_range(0..=6);
    TruncatedTensor::from_terms(
        letters,
        depth,
        (0..terms).map(|_| {
            let len = rng.gen_range(0..=depth);
            let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..letters as u8)).collect();
            (Word(w), small(rng))
        }),
    )
}

fn random_augmented(letters: usize, depth: usize, rng: &mut ChaCha8Rng) -> TruncatedTensor {
    let t = random_tensor(letters, depth, rng);
    let c = t.constant_term();
    &t - &TruncatedTensor::constant(letters, depth, c)
}

fn random_lie(lie: &FreeLie, rng: &mut ChaCha8Rng) -> LieElement {
    let mut out = lie.zero();
    for k in 1..=lie.depth() {
        let v: Vector = (0..lie.dim(k)).map(|_| small(rng)).collect();
        out += &lie.from_component(k, &v);
    }
    out
}

/// `(letters, depth)` with depth capped by the truncation.
fn shape(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    (rng.gen_range(1..=3), rng.gen_range(1..=n))
}

// ---------------------------------------------------------------- props

fn props(seed: u64, n: usize) -> Vec<Check> {
    let hopf_depth = n.max(2);
    vec![
        run_check("props.witt", seed, |_| {
            let mut cases = 0;
            for letters in 1..=4usize {
                for k in 1..=8usize {
                    let basis = lyndon_basis(letters, k);
                    // brute force over all words as an independent count
                    let mut count = 0u64;
                    let total = letters.pow(k as u32);
                    for idx in 0..total {
                        let mut w = vec![0u8; k];
                        let mut r = idx;
                        for slot in w.iter_mut().rev() {
                            *slot = (r % letters) as u8;
                            r /= letters;
                        }
                        if is_lyndon(&w) {
                            count += 1;
                        }
                    }
                    ensure(basis.len() as u64 == witt_dim(letters, k) && count == witt_dim(letters, k), || {
                        format!("n={letters} k={k}: basis {} brute {count} witt {}", basis.len(), witt_dim(letters, k))
                    })?;
                    cases += 1;
                }
            }
            Ok((cases, "n<=4 k<=8".into()))
        }),
        run_check("props.hopf.associativity", seed, |rng| {
            for _ in 0..50 {
                let (l, d) = shape(rng, hopf_depth);
                let (a, b, c) = (random_tensor(l, d, rng), random_tensor(l, d, rng), random_tensor(l, d, rng));
                ensure(&(&a * &b) * &c == &a * &(&b * &c), || format!("a={a} b={b} c={c}"))?;
            }
            Ok((50, String::new()))
        }),
        run_check("props.hopf.coproduct", seed, |rng| {
            for _ in 0..50 {
                let (l, d) = shape(rng, hopf_depth);
                let (a, b) = (random_tensor(l, d, rng), random_tensor(l, d, rng));
                let lhs = (&a * &b).coproduct();
                let rhs = a.coproduct().mul(&b.coproduct()).total_truncate();
                ensure(lhs.sub(&rhs).is_zero(), || format!("a={a} b={b}"))?;
            }
            Ok((50, String::new()))
        }),
        run_check("props.hopf.exp_log", seed, |rng| {
            for _ in 0..50 {
                let (l, d) = shape(rng, hopf_depth);
                let a = random_augmented(l, d, rng);
                let one = TruncatedTensor::one(l, d);
                let back = lib(lib(a.exp())?.log())?;
                ensure(back == a, || format!("log(exp(a)) != a for a={a}"))?;
                let u = &one + &a;
                ensure(lib(lib(u.log())?.exp())? == u, || format!("exp(log(1+a)) != 1+a for a={a}"))?;
            }
            Ok((50, String::new()))
        }),
        run_check("props.hopf.grouplike_primitive", seed, |rng| {
            for _ in 0..50 {
                let (l, d) = shape(rng, hopf_depth);
                let lie = FreeLie::new(l, d);
                let x = lie.tensor_embed(&random_lie(&lie, rng));
                let y = lie.tensor_embed(&random_lie(&lie, rng));
                let g = lib(x.exp())?;
                ensure(x.is_primitive() && g.is_grouplike(), || format!("x={x}"))?;
                let gy = &g * &lib(y.exp())?;
                let log = lib(gy.log())?;
                ensure(gy.is_grouplike() && log.is_primitive(), || format!("x={x} y={y}"))?;
                ensure(log == lib(bch(&x, &y))?, || format!("log(e^x e^y) != bch for x={x} y={y}"))?;
                // a square of a letter is never primitive, so nothing with it is group-like after exp
                if d >= 2 {
                    let bump = TruncatedTensor::from_terms(l, d, [(Word(vec![0, 0]), rat(1))]);
                    let z = &x + &bump;
                    ensure(!z.is_primitive() && !lib(z.exp())?.is_grouplike(), || format!("x+X1X1 for x={x}"))?;
                }
            }
            Ok((50, String::new()))
        }),
        run_check("props.lie.bracket", seed, |rng| {
            for _ in 0..30 {
                let letters = rng.gen_range(1..=3);
                let depth = rng.gen_range(2..=hopf_depth);
                let lie = FreeLie::new(letters, depth);
                let (a, b, c) = (random_lie(&lie, rng), random_lie(&lie, rng), random_lie(&lie, rng));
                let ab = lie.bracket_truncated(&a, &b);
                let lhs = lie.tensor_embed(&ab);
                let rhs = lie.tensor_embed(&a).commutator(&lie.tensor_embed(&b));
                ensure(lhs == rhs, || format!("[a,b] is not the commutator for a={} b={}", lie.format(&a), lie.format(&b)))?;
                let jacobi = &(&lie.bracket_truncated(&a, &lie.bracket_truncated(&b, &c))
                    + &lie.bracket_truncated(&b, &lie.bracket_truncated(&c, &a)))
                    + &lie.bracket_truncated(&c, &ab);
                ensure(jacobi.is_zero(), || format!("Jacobi fails: {}", lie.format(&jacobi)))?;
            }
            Ok((30, String::new()))
        }),
        run_check("props.lie.genus_one_abelian", seed, |_| {
            let q = QuotientLie::surface(1, n + 2);
            for k in 2..=n + 2 {
                ensure(q.dim(k) == 0, || format!("dim L_{k} = {}", q.dim(k)))?;
            }
            Ok((n + 1, String::new()))
        }),
        run_check("props.derivations.free", seed, |_| {
            let mut cases = 0;
            for letters in 2..=3 {
                let q = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(letters, 5))));
                for k in 1..=3 {
                    let s = lib(DerSpace::new(q.clone(), DerMode::Quotient, k))?;
                    let (der, inner) = (letters as u64 * witt_dim(letters, k + 1), witt_dim(letters, k));
                    ensure(s.dim() as u64 == der && s.inner_dim() as u64 == inner, || {
                        format!("n={letters} k={k}: Der {} IDer {} expected {der} {inner}", s.dim(), s.inner_dim())
                    })?;
                    cases += 1;
                }
            }
            Ok((cases, String::new()))
        }),
        run_check("props.derivations.morita", seed, |rng| {
            for g in [2, 3] {
                let q = Arc::new(QuotientLie::surface(g, 3));
                let s = lib(DerSpace::new(q, DerMode::Quotient, 1))?;
                let c = binomial(2 * g, 3) as usize;
                let got = (s.dim(), s.inner_dim(), s.outer_dim());
                ensure(got == (c, 2 * g, c - 2 * g), || format!("g={g}: {got:?}"))?;
                let m = lib(MoritaMap::new(g))?;
                ensure(m.rank() == c, || format!("g={g}: rank {}", m.rank()))?;
                for _ in 0..5 {
                    let v: Vector = (0..Lambda3Element::dim(g)).map(|_| small(rng)).collect();
                    let xi = Lambda3Element::from_vector(g, &v);
                    ensure(lib(m.inverse(&m.apply(&xi)))? == xi, || format!("g={g}: round trip fails at {v:?}"))?;
                }
            }
            Ok((2, "g=2,3".into()))
        }),
    ]
}

// ---------------------------------------------------------------- johnson

fn johnson(seed: u64, n: usize) -> Vec<Check> {
    vec![
        run_check("johnson.oracle", seed, |rng| {
            let top = 3.min(n - 1);
            let mut cases = 0;
            for letters in [2, 3] {
                let theta = free_expansion(letters, n);
                let perturbed = perturbed_free_expansion(theta.lie().clone(), rng);
                for i in 0..25 {
                    let m = 1 + i % top;
                    let phi = random_filtered_automorphism(letters, m, rng);
                    let oracle = lib(johnson_graded_oracle(theta.lie(), &phi, m))?;
                    for th in [&theta, &perturbed] {
                        let tau = lib(johnson_map(th, &phi))?;
                        for p in 1..m {
                            ensure(tau.graded(p).iter().all(LieElement::is_zero), || format!("{phi}: tau_{p} != 0"))?;
                        }
                        ensure(tau.graded(m) == oracle, || format!("{phi}: tau_{m} differs from the oracle"))?;
                    }
                    cases += 1;
                }
            }
            Ok((cases, format!("m<={top}")))
        }),
        run_check("johnson.cocycle", seed, |rng| {
            let theta = free_expansion(2, n);
            let perturbed = perturbed_free_expansion(theta.lie().clone(), rng);
            let torus = lib(symplectic_expansion(1, n))?;
            for i in 0..100 {
                let (phi, psi, th) = match i % 3 {
                    0 => (random_automorphism(2, 3, rng), random_automorphism(2, 3, rng), &theta),
                    1 => (random_automorphism(2, 3, rng), random_automorphism(2, 3, rng), &perturbed),
                    _ => (random_mapping_class(1, 3, rng), random_mapping_class(1, 3, rng), &torus),
                };
                let check = lib(tau1_cocycle_check(th, &phi, &psi))?;
                ensure(check.holds, || format!("phi={phi} psi={psi}"))?;
            }
            Ok((100, String::new()))
        }),
        run_check("johnson.coboundary", seed, |rng| {
            for letters in [2, 3] {
                let theta = free_expansion(letters, n);
                let other = perturbed_free_expansion(theta.lie().clone(), rng);
                let autos: Vec<_> = (0..8).map(|_| random_automorphism(letters, 4, rng)).collect();
                let report = lib(tau1_coboundary(&theta, &other, &autos))?;
                ensure(report.holds(), || format!("F{letters}: tau1 difference is not dF"))?;
            }
            let a = lib(symplectic_expansion_with(1, n, PivotOrder::Forward))?;
            let b = lib(symplectic_expansion_with(1, n, PivotOrder::Reverse))?;
            let autos: Vec<_> = (0..8).map(|_| random_mapping_class(1, 4, rng)).collect();
            ensure(lib(tau1_coboundary(&a, &b, &autos))?.holds(), || "two symplectic expansions".into())?;
            Ok((3, String::new()))
        }),
        run_check("johnson.symplectic_certificate", seed, |_| {
            for g in [1, 2] {
                let theta = lib(symplectic_expansion(g, n))?;
                let lie = theta.lie().clone();
                ensure(theta.certificate().iter().all(LieElement::is_zero), || format!("g={g}: certificate"))?;
                let expected = lib(lie.tensor_embed(&omega(&lie, g)).exp())?;
                ensure(theta.evaluate(&surface_relator(g)) == expected, || format!("g={g}: theta(relator)"))?;
                let log = lib(lie.lie_coords_all(&lib(theta.evaluate(&surface_relator(g)).log())?))?;
                ensure(log == omega(&lie, g), || format!("g={g}: log theta(relator) = {}", lie.format(&log)))?;
            }
            Ok((2, "g=1,2".into()))
        }),
        run_check("johnson.transport", seed, |rng| {
            let torus = lib(symplectic_expansion(1, n))?;
            let genus_two = lib(symplectic_expansion(2, n.min(3)))?;
            let cases: Vec<(&_, FreeGroupAutomorphism)> = vec![
                (&torus, catalogue::genus_one_s()),
                (&torus, catalogue::genus_one_t()),
                (&genus_two, catalogue::handle_swap(2, 0)),
            ];
            for (theta, phi) in &cases {
                let moved = lib(transport_expansion(phi, theta))?;
                ensure(moved.ideal().same_spans(theta.ideal()), || format!("{}: ideal moved", phi.name()))?;
                ensure(moved.certificate().iter().all(LieElement::is_zero), || format!("{}: certificate", phi.name()))?;
                let m = phi.abelianization();
                for _ in 0..5 {
                    let w = random_word(theta.generators(), 5, rng);
                    let lhs = moved.evaluate(&phi.apply(&w));
                    let rhs = theta.evaluate(&w).linear_substitute(&m);
                    ensure(lhs == rhs, || format!("{}: theta'(phi(w)) != |phi| theta(w) at w={w}", phi.name()))?;
                }
            }
            Ok((cases.len(), "S, T, W1".into()))
        }),
    ]
}

// ---------------------------------------------------------------- flatness

fn perturbed(c: &FormalConnection, w: &[usize], a: usize) -> liexp::Result<FormalConnection> {
    let mut omega = c.omega().clone();
    let slot = omega.entry(w.to_vec()).or_insert_with(|| vec![rat(0); c.model_dim()]);
    slot[a] += rat(1);
    let delta = (0..c.letters()).map(|i| c.delta(i).clone()).collect();
    FormalConnection::new(c.letter_degrees().to_vec(), c.truncation(), c.model_dim(), omega, delta)
}

/// Counts from perturbing a transferred connection one coefficient at a time.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PerturbationScan {
    /// Nonzero entries of ω on words shorter than the truncation, and of δ.
    pub entries: usize,
    /// Of those, the ones whose perturbation stayed flat.
    pub entries_flat: usize,
    /// All single basis-element perturbations of ω with the right form degree.
    pub basis: usize,
    /// Of those, the ones that stayed flat.
    pub basis_flat: usize,
    /// Flat basis perturbations that also stayed in normal form.
    pub undetected: Vec<String>,
}

pub fn perturbation_scan(model: &CDGAModel, n: usize) -> liexp::Result<PerturbationScan> {
    let c = transfer_connection(model, n)?;
    let mut scan = PerturbationScan::default();
    for (w, x) in c.omega().iter().filter(|(w, _)| w.len() < n) {
        for a in (0..model.dim()).filter(|&a| x[a] != rat(0)) {
            scan.entries += 1;
            if flatness_check(&perturbed(&c, w, a)?, model, n)?.is_flat() {
                scan.entries_flat += 1;
            }
        }
    }
    for i in 0..c.letters() {
        for w in c.delta(i).keys() {
            let mut delta: Vec<Series> = (0..c.letters()).map(|j| c.delta(j).clone()).collect();
            *delta[i].get_mut(w).expect("key from the same map") += rat(1);
            let p = FormalConnection::new(c.letter_degrees().to_vec(), n, c.model_dim(), c.omega().clone(), delta)?;
            scan.entries += 1;
            if flatness_check(&p, model, n)?.is_flat() {
                scan.entries_flat += 1;
            }
        }
    }
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 1..n {
        words = words
            .iter()
            .flat_map(|w| {
                (0..c.letters()).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
        for w in &words {
            let deg = c.word_degree(w) + 1;
            for a in (0..model.dim()).filter(|&a| model.degrees()[a] == deg) {
                scan.basis += 1;
                let p = perturbed(&c, w, a)?;
                if flatness_check(&p, model, n)?.is_flat() {
                    scan.basis_flat += 1;
                    if p.check_normal_form(model).is_ok() {
                        scan.undetected.push(format!("{} e{a}", word_label(w)));
                    }
                }
            }
        }
    }
    Ok(scan)
}

fn permutation_matrix(n: usize, images: &[(usize, usize, i64)]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for &(r, c, v) in images {
        m.set(r, c, rat(v));
    }
    m
}

fn flatness(seed: u64, n: usize) -> Vec<Check> {
    vec![
        run_check("flatness.surface", seed, |_| {
            for g in 1..=3 {
                let model = lib(surface_model(g))?;
                let c = lib(transfer_connection(&model, n))?;
                let table = lib(flatness_check(&c, &model, n))?;
                ensure(table.is_flat(), || format!("g={g}: defect at lengths {:?}", table.defect_lengths()))?;
                let mut expected = Series::new();
                for i in 0..g {
                    expected.insert(vec![i, i + g], rat(1));
                    expected.insert(vec![i + g, i], rat(-1));
                }
                ensure(c.delta(2 * g) == &expected, || format!("g={g}: delta of the top letter"))?;
            }
            Ok((3, format!("g=1..3 N={n}")))
        }),
        run_check("flatness.massey", seed, |_| {
            for h in [0, 3] {
                let model = massey_model(&rat(h));
                let c = lib(transfer_connection(&model, n))?;
                let table = lib(flatness_check(&c, &model, n))?;
                ensure(table.is_flat(), || format!("h-shift {h}: defect at lengths {:?}", table.defect_lengths()))?;
                if n >= 3 {
                    let ideal = lib(connection_ideal(&c))?;
                    ensure(ideal.leading.iter().any(|l| l.min_degree() == Some(3)), || {
                        "no cubic leading term in delta".into()
                    })?;
                }
            }
            Ok((2, String::new()))
        }),
        run_check("flatness.perturbations", seed, |_| {
            let mut totals = PerturbationScan::default();
            for model in [lib(surface_model(1))?, lib(surface_model(2))?, massey_model(&rat(0)), massey_model(&rat(3))] {
                let scan = lib(perturbation_scan(&model, n))?;
                ensure(scan.entries_flat == 0, || format!("{} nonzero-entry perturbations stayed flat", scan.entries_flat))?;
                ensure(scan.undetected.is_empty(), || format!("flat and in normal form: {}", scan.undetected.join(", ")))?;
                totals.entries += scan.entries;
                totals.basis += scan.basis;
                totals.basis_flat += scan.basis_flat;
            }
            Ok((
                totals.entries + totals.basis,
                format!(
                    "entries={} basis={} flat-but-not-normal={}",
                    totals.entries, totals.basis, totals.basis_flat
                ),
            ))
        }),
        run_check("flatness.equivariance", seed, |_| {
            let swap = permutation_matrix(6, &[(0, 0, 1), (2, 1, 1), (1, 2, 1), (4, 3, 1), (3, 4, 1), (5, 5, 1)]);
            let s = permutation_matrix(4, &[(0, 0, 1), (2, 1, 1), (1, 2, -1), (3, 3, 1)]);
            let t = permutation_matrix(4, &[(0, 0, 1), (1, 1, 1), (1, 2, 1), (2, 2, 1), (3, 3, 1)]);
            let shear = permutation_matrix(6, &[(0, 0, 1), (1, 1, 1), (2, 1, 1), (2, 2, 1), (3, 3, 1), (4, 4, 1), (5, 5, 1)]);
            let torus = lib(surface_model(1))?;
            let cases = [
                ("genus-2 swap", lib(surface_model(2))?, swap),
                ("genus-1 S", torus.clone(), s),
                ("genus-1 T", torus, t),
                ("Massey shear", massey_model(&rat(3)), shear),
            ];
            for (name, model, f) in &cases {
                lib(check_transfer_equivariance(model, f, n)).map_err(|e| format!("{name}: {e}"))?;
            }
            Ok((cases.len(), String::new()))
        }),
        run_check("flatness.ideal", seed, |_| {
            for g in 1..=3 {
                let c = lib(transfer_connection(&lib(surface_model(g))?, n))?;
                let ideal = lib(connection_ideal(&c))?;
                let expected = liexp::expansions::surface_ideal(&ideal.lie, g);
                ensure(ideal.homogeneous && ideal.ideal.same_spans(&expected), || format!("g={g}: I_omega != (omega)"))?;
            }
            Ok((3, String::new()))
        }),
    ]
}

// ---------------------------------------------------------------- ce

fn squares_to_zero(c: &CEComplex) -> Result<(), String> {
    for m in 0..c.max_degree() {
        ensure(c.differential(m + 1).mul(c.differential(m)).is_zero(), || format!("d∘d != 0 at degree {m}"))?;
    }
    Ok(())
}

fn ce(seed: u64, _n: usize) -> Vec<Check> {
    vec![
        run_check("ce.d_squared", seed, |_| {
            let mut complexes = Vec::new();
            for d in 0..=6 {
                complexes.push(lib(CEComplex::new(Arc::new(FiniteLieData::abelian(d)), d.min(4), None))?);
            }
            complexes.push(lib(CEComplex::new(Arc::new(FiniteLieData::sl2()), 3, None))?);
            let free = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 5))));
            for (q, w) in [(free, 4), (Arc::new(QuotientLie::surface(1, 4)), 2), (Arc::new(QuotientLie::surface(2, 3)), 1)] {
                for outer in [false, true] {
                    let t = lib(DerivationTruncation::new(q.clone(), w, outer))?;
                    let top = if t.dim() <= 16 { 3 } else { 2 };
                    complexes.push(lib(CEComplex::new(Arc::new(t.into_data()), top, None))?);
                }
            }
            for c in &complexes {
                squares_to_zero(c)?;
            }
            Ok((complexes.len(), String::new()))
        }),
        run_check("ce.abelian_binomial", seed, |_| {
            for d in 0..=6 {
                let c = lib(CEComplex::new(Arc::new(FiniteLieData::abelian(d)), 6, None))?;
                let expected: Vec<usize> = (0..=6).map(|m| binomial(d, m) as usize).collect();
                ensure(c.cohomology_dims() == expected, || format!("d={d}: {:?}", c.cohomology_dims()))?;
            }
            Ok((7, "d<=6".into()))
        }),
        run_check("ce.sl2", seed, |_| {
            let c = lib(CEComplex::new(Arc::new(FiniteLieData::sl2()), 3, None))?;
            let h = c.cohomology_dims();
            ensure(h == vec![1, 0, 0, 1], || format!("{h:?}"))?;
            Ok((1, "H=(1,0,0,1)".into()))
        }),
        run_check("ce.invariant_subcomplex", seed, |_| {
            let free = Arc::new(QuotientLie::free(Arc::new(FreeLie::new(2, 5))));
            let t = lib(DerivationTruncation::new(free, 4, true))?;
            let swap = Matrix::from_i64(&[vec![0, 1], vec![1, 0]]);
            let flip = Matrix::from_i64(&[vec![-1, 0], vec![0, 1]]);
            let free_gens = vec![lib(t.action_matrix(&swap))?, lib(t.action_matrix(&flip))?];
            let (space, sp_gens) = lib(corpus::genus_three_outer())?;
            let cases = [
                (lib(CEComplex::new(Arc::new(t.into_data()), 3, None))?, free_gens),
                (lib(CEComplex::new(Arc::new(FiniteLieData::abelian(space.outer_dim())), 2, None))?, sp_gens),
            ];
            let mut checked = 0;
            for (c, gens) in &cases {
                let inv = lib(c.invariant_subcomplex(gens))?;
                squares_to_zero(&inv)?;
                for m in 0..c.max_degree() {
                    for v in inv.cochain_basis(m) {
                        let dv = lib(c.apply_d(m, &v))?;
                        ensure(lib(c.is_invariant(m + 1, &dv, gens))?, || format!("d leaves the invariants at degree {m}"))?;
                        checked += 1;
                    }
                }
            }
            Ok((checked, String::new()))
        }),
        run_check("ce.cup_power", seed, |_| {
            let theta = lib(symplectic_expansion(3, 3))?;
            let (space, sp_gens) = lib(corpus::genus_three_outer())?;
            let pairings = lib(corpus::symplectic_invariant_pairings(&sp_gens, space.outer_dim()))?;
            let mut cochains = 0;
            for case in lib(corpus::genus_three_tables())? {
                let tau = lib(lib(CrossedHom::from_johnson(&theta, &case.autos, &space, true))?.with_table(case.table))?;
                ensure(lib(tau.is_cocycle())?, || format!("{}: not a crossed homomorphism", case.name))?;
                let actions: Vec<Matrix> = tau.labels().iter().map(|l| tau.action(l).cloned()).collect::<liexp::Result<_>>().map_err(|e| e.to_string())?;
                let local = lib(lib(CEComplex::new(Arc::new(FiniteLieData::abelian(space.outer_dim())), 2, None))?
                    .invariant_subcomplex(&actions))?;
                let mut all: Vec<(usize, Vector)> = pairings.iter().map(|p| (2, p.clone())).collect();
                for m in 1..=2 {
                    all.extend(local.cochain_basis(m).into_iter().map(|c| (m, c)));
                }
                for (m, c) in all {
                    let failures = lib(tau.cup_power_coboundary(&c, m))?;
                    ensure(failures.is_empty(), || format!("{} m={m}: {}", case.name, failures[0]))?;
                    cochains += 1;
                }
            }
            Ok((cochains, "klein, cyclic".into()))
        }),
    ]
}

pub fn checks(req: &VerifyRequest) -> Vec<Check> {
    let (s, n) = (req.seed, req.truncation);
    match req.suite {
        Suite::Props => props(s, n),
        Suite::Johnson => johnson(s, n),
        Suite::Flatness => flatness(s, n),
        Suite::Ce => ce(s, n),
        Suite::All => [props(s, n), johnson(s, n), flatness(s, n), ce(s, n)].concat(),
    }
}

pub const MIN_TRUNCATION: usize = 2;
pub const MAX_TRUNCATION: usize = 5;

pub fn run(req: &VerifyRequest, command: String) -> Result<Report, CliError> {
    if !(MIN_TRUNCATION..=MAX_TRUNCATION).contains(&req.truncation) {
        return Err(CliError::Limit(format!(
            "truncation {} outside {MIN_TRUNCATION}..={MAX_TRUNCATION}",
            req.truncation
        )));
    }
    let mut report = Report::new(command, &[]);
    report.line(format!("suite: {}", req.suite.name()));
    report.line(format!("seed: {}", req.seed));
    report.line(format!("truncation: {}", req.truncation));
    let checks = checks(req);
    let passed = checks.iter().filter(|c| c.passed()).count();
    for c in &checks {
        if c.passed() {
            report.line(c.line());
        } else {
            report.fail(c.line());
        }
    }
    report.line(format!("summary: {passed}/{} checks passed", checks.len()));
    Ok(report)
}

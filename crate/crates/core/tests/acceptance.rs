//! Acceptance suite: one test per criterion, each printing a pass line.
//! Criteria that exercise the CLI surface live in the `sabar` binary crate's
//! acceptance tests.

use std::collections::BTreeSet;
use std::time::Instant;

use sabar_core::complex::SimplicialComplex;
use sabar_core::eps::{lemma_check, remove_infinitesimals, EpsPoly, MAIN_VAR};
use sabar_core::filtration::{Filtration, FiltrationValue};
use sabar_core::formula::{parse_formula, ClosedFormula};
use sabar_core::homology::{barcode, multiplicity, subquotient_oracle};
use sabar_core::multipoly::{parse_poly, MultiPoly};
use sabar_core::pipeline::{barcode_semialgebraic, PipelineOptions, SemialgebraicInput};
use sabar_core::rational::{parse_rational, q_int, q_ratio, Q};
use sabar_core::realize::{make_closed, realize_univariate, Endpoint};
use sabar_core::rips::rips_filtration;

/// Deterministic xorshift generator for the randomized corpora.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_filtration(rng: &mut Rng) -> Filtration {
    // Candidate simplices over up to 6 vertices, dimension at most 2.
    let steps = 2 + rng.below(4) as usize; // 2..=5
    let mut pool: Vec<Vec<usize>> = Vec::new();
    for v in 0..6usize {
        pool.push(vec![v]);
        for w in v + 1..6 {
            pool.push(vec![v, w]);
            for x in w + 1..6 {
                pool.push(vec![v, w, x]);
            }
        }
    }
    let mut chosen: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    let mut current: BTreeSet<Vec<usize>> = BTreeSet::new();
    for _ in 0..steps {
        let additions = 1 + rng.below(3);
        for _ in 0..additions {
            let pick = pool[rng.below(pool.len() as u64) as usize].clone();
            // Close under faces.
            for mask in 1u32..(1 << pick.len()) {
                let face: Vec<usize> = pick
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << *i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                current.insert(face);
            }
            if current.len() >= 20 {
                break;
            }
        }
        chosen.push(current.clone());
    }
    let complexes: Vec<SimplicialComplex> = chosen
        .into_iter()
        .map(|s| SimplicialComplex::from_simplices(s).unwrap())
        .collect();
    Filtration::new(complexes, None).unwrap()
}

#[test]
fn criterion_1_multiplicity_formula_matches_subquotient_oracle() {
    let start = Instant::now();
    let mut rng = Rng(0x5eed_0001);
    let mut checked = 0usize;
    for _ in 0..200 {
        let f = random_filtration(&mut rng);
        let n = f.last_index();
        for p in 0..=2usize {
            for i in 0..=n {
                for j in i..=n + 1 {
                    let mu = multiplicity(&f, p, i, j).unwrap();
                    let report = subquotient_oracle(&f, p, i, j).unwrap();
                    assert_eq!(
                        mu as usize, report.dim_p,
                        "formula/oracle mismatch at p={p} i={i} j={j}"
                    );
                    assert!(report.dim_n <= report.dim_m);
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "criterion 1 exceeded 60 s: {elapsed:?}"
    );
    println!(
        "[PASS] criterion 1: multiplicity formula = subquotient oracle on 200 random \
         filtrations ({checked} index triples, {elapsed:?})"
    );
}

#[test]
fn criterion_3_make_closed_reproduces_the_closed_realization() {
    let theta = parse_formula("(X^2*(X - 1) > 0) & ((X - 2 >= 0) | (X <= 0))").unwrap();
    let psi = make_closed(&theta, 4096).unwrap();
    let original = realize_univariate(&theta).unwrap();
    let closed = realize_univariate(&psi.to_formula()).unwrap();

    // The realization is exactly [2, inf): one piece, closed at 2.
    assert_eq!(original.pieces.len(), 1);
    let piece = &original.pieces[0];
    assert!(piece.lo_closed);
    assert!(matches!(piece.hi, Endpoint::PosInf));
    match &piece.lo {
        Endpoint::Root(t) => {
            let (lo, hi) = t.rational_approx(&q_ratio(1, 1_000_000));
            assert!(lo <= q_int(2) && q_int(2) <= hi);
        }
        _ => panic!("expected a finite closed lower endpoint"),
    }
    assert!(closed.same(&original), "make_closed changed the realization");

    // Naive weakening of the strict atom realizes {0} u [2, inf) instead.
    let naive = parse_formula("(X^2*(X - 1) >= 0) & ((X - 2 >= 0) | (X <= 0))").unwrap();
    let naive_real = realize_univariate(&naive).unwrap();
    assert!(!naive_real.same(&original));
    assert_eq!(naive_real.pieces.len(), 2);
    assert!(naive_real.pieces[0].is_point());
    println!(
        "[PASS] criterion 3: make_closed realizes [2, inf) exactly; naive weakening \
         demonstrably differs ({{0}} u [2, inf))"
    );
}

#[test]
fn criterion_4_lemma_check_on_random_corpus() {
    let start = Instant::now();
    let mut rng = Rng(0x5eed_0004);
    let etas = [q_ratio(1, 1_000), parse_rational("1/1000000").unwrap(), {
        parse_rational("1/1000000000").unwrap()
    }];
    let mut count = 0usize;
    while count < 100 {
        // Coefficient polynomials with distinct planted integer roots so
        // the value gaps stay comfortably wide.
        let mut roots: Vec<i64> = (-5..=5).collect();
        for i in (1..roots.len()).rev() {
            let j = rng.below((i + 1) as u64) as usize;
            roots.swap(i, j);
        }
        let n_parts = 1 + rng.below(3) as usize; // 1..=3 eps-monomials
        let mut body = MultiPoly::zero(&[MAIN_VAR, "e0", "e1"]);
        let mut used = 0usize;
        for part in 0..n_parts {
            let deg = 1 + rng.below(3) as usize; // degree 1..=3, total <= 4
            let mut coeff = MultiPoly::constant(&[], q_int(1 + rng.below(3) as i64));
            for _ in 0..deg {
                if used >= roots.len() {
                    break;
                }
                let r = roots[used];
                used += 1;
                let factor = MultiPoly::var(&[MAIN_VAR], MAIN_VAR)
                    .sub(&MultiPoly::constant(&[], q_int(r)));
                coeff = coeff.mul(&factor);
            }
            let monomial = match part {
                0 => MultiPoly::constant(&[], q_int(1)),
                1 => parse_poly("e0").unwrap(),
                _ => parse_poly(&["e1", "e0*e1", "e0^2"][rng.below(3) as usize]).unwrap(),
            };
            body = body.add(&monomial.mul(&coeff));
        }
        if body.is_zero() {
            continue;
        }
        let g = EpsPoly::new(body).unwrap();
        let values = remove_infinitesimals(std::slice::from_ref(&g)).unwrap();
        for eta in &etas {
            assert!(
                lemma_check(std::slice::from_ref(&g), &values, eta),
                "lemma_check failed for G = {} at eta = {}",
                g.body(),
                eta
            );
        }
        count += 1;
    }
    println!(
        "[PASS] criterion 4: lemma_check holds for eta in {{1e-3, 1e-6, 1e-9}} on 100 \
         random eps-polynomials ({:?})",
        start.elapsed()
    );
}

fn disk_input() -> SemialgebraicInput {
    SemialgebraicInput {
        formula: ClosedFormula::from_formula(
            &parse_formula("(x^2 + y^2 - 1 <= 0)").unwrap(),
        )
        .unwrap(),
        poly: parse_poly("x").unwrap(),
        radius: q_int(4),
        level: 1,
    }
}

fn torus_input() -> SemialgebraicInput {
    let g = "(x^2 + y^2 + z^2 + 3)^2 - 16*(x^2 + y^2)";
    SemialgebraicInput {
        formula: ClosedFormula::from_formula(
            &parse_formula(&format!("({g} <= 0) & ({g} >= 0)")).unwrap(),
        )
        .unwrap(),
        poly: parse_poly("x").unwrap(),
        radius: parse_rational("24/7").unwrap(),
        level: 2,
    }
}

fn same_barcodes(a: &[sabar_core::filtration::Barcode], b: &[sabar_core::filtration::Barcode]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.bars.len(), y.bars.len(), "bar count differs at p={}", x.p);
        for (u, v) in x.bars.iter().zip(&y.bars) {
            assert_eq!(
                u.birth.try_cmp(&v.birth),
                Some(std::cmp::Ordering::Equal),
                "birth differs at p={}",
                x.p
            );
            assert!(
                (u.death.is_infinite() && v.death.is_infinite())
                    || u.death.try_cmp(&v.death) == Some(std::cmp::Ordering::Equal),
                "death differs at p={}",
                x.p
            );
            assert_eq!(u.multiplicity, v.multiplicity);
        }
    }
}

#[test]
fn criterion_6_superset_of_levels_leaves_barcodes_unchanged() {
    let start = Instant::now();
    // Disk with three extra non-critical rational levels.
    let base = barcode_semialgebraic(
        &disk_input(),
        &PipelineOptions {
            grid_n: 32,
            ..Default::default()
        },
    )
    .unwrap();
    let with_extra = barcode_semialgebraic(
        &disk_input(),
        &PipelineOptions {
            grid_n: 32,
            extra_levels: vec![q_ratio(-5, 7), q_ratio(3, 11), q_ratio(23, 13)],
            ..Default::default()
        },
    )
    .unwrap();
    same_barcodes(&base, &with_extra);

    // Torus likewise at the acceptance resolution.
    let base = barcode_semialgebraic(
        &torus_input(),
        &PipelineOptions {
            grid_n: 48,
            ..Default::default()
        },
    )
    .unwrap();
    let with_extra = barcode_semialgebraic(
        &torus_input(),
        &PipelineOptions {
            grid_n: 48,
            extra_levels: vec![q_ratio(-13, 6), q_ratio(1, 3), q_ratio(12, 5)],
            ..Default::default()
        },
    )
    .unwrap();
    same_barcodes(&base, &with_extra);
    println!(
        "[PASS] criterion 6: three injected non-critical levels leave the disk and torus \
         barcodes unchanged ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_7_rips_square_matches_brute_force_oracle() {
    let points: Vec<Vec<Q>> = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(x, y)| vec![q_int(x), q_int(y)])
        .collect();
    let f = rips_filtration(&points, 2).unwrap();
    let b1 = barcode(&f, 1).unwrap();
    assert_eq!(b1.bars.len(), 1);
    let bar = &b1.bars[0];
    match (&bar.birth, &bar.death) {
        (FiltrationValue::Rational(b), FiltrationValue::Rational(d)) => {
            assert_eq!(b, &q_int(1));
            assert_eq!(d, &q_int(2));
        }
        _ => panic!("expected rational bar endpoints"),
    }
    assert_eq!(bar.multiplicity, 1);
    // Brute-force subquotient oracle over every threshold pair agrees.
    let n = f.last_index();
    for p in 0..=2usize {
        for i in 0..=n {
            for j in i..=n + 1 {
                assert_eq!(
                    multiplicity(&f, p, i, j).unwrap() as usize,
                    subquotient_oracle(&f, p, i, j).unwrap().dim_p,
                    "oracle mismatch at p={p} i={i} j={j}"
                );
            }
        }
    }
    println!(
        "[PASS] criterion 7: Rips on the unit square gives B_1 = {{(1, 2, 1)}} in squared \
         distances, matching the subquotient oracle at every threshold pair"
    );
}

#[test]
fn criterion_8_no_floating_point_and_deterministic_results() {
    // Source scan: no floating-point types anywhere in either crate.
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .to_path_buf();
    let mut scanned = 0usize;
    let mut stack = vec![root.join("core/src"), root.join("cli/src")];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
                continue;
            }
            if path.extension().and_then(|e| e.to_str()) != Some("rs") {
                continue;
            }
            let text = std::fs::read_to_string(&path).unwrap();
            for needle in ["f32", "f64"] {
                assert!(
                    !text.contains(needle),
                    "floating-point type `{needle}` found in {}",
                    path.display()
                );
            }
            scanned += 1;
        }
    }
    assert!(scanned >= 15, "source scan visited too few files");

    // Determinism: five repeated runs of an exact pipeline produce
    // identical barcodes and identical multiplicity tables.
    let mut fingerprints = BTreeSet::new();
    for _ in 0..5 {
        let bars = barcode_semialgebraic(
            &disk_input(),
            &PipelineOptions {
                grid_n: 16,
                ..Default::default()
            },
        )
        .unwrap();
        let mut fp = String::new();
        for code in &bars {
            fp.push_str(&format!("{code}"));
        }
        let mut rng = Rng(0x5eed_0008);
        let f = random_filtration(&mut rng);
        for p in 0..=2usize {
            for i in 0..=f.last_index() {
                fp.push_str(&format!(
                    "{};",
                    multiplicity(&f, p, i, f.last_index() + 1).unwrap()
                ));
            }
        }
        fingerprints.insert(fp);
    }
    assert_eq!(fingerprints.len(), 1, "runs disagreed");
    println!(
        "[PASS] criterion 8: {scanned} source files free of floating-point types; five \
         repeated runs byte-identical"
    );
}

//! End-to-end acceptance gate.  Each test drives one advertised capability
//! through the public API and prints a single PASS/FAIL line, so the whole
//! surface can be audited from the test output alone.

use pseudoalg::annih::{CoefAlgebra, CoefElt, CyclicModule};
use pseudoalg::classify::{
    classify, extract_base_algebra, is_small, model_match, rank1_classify, Classification,
    SliceAlgebra,
};
use pseudoalg::construct::{
    env_quotient_xcop, hop_sub_xcop, hop_xcop, poly_xy_ddx, OrdinaryAlgebra,
};
use pseudoalg::dual::{h_act_x, pair, truncate, x_coproduct, x_mul, x_ract_h, XElt};
use pseudoalg::hopf::{
    fourier_decompose, fourier_recompose, h_coproduct, h_mul, mono_antipode_of, HCtx, HElt,
    HTensor,
};
use pseudoalg::lie::{Cocycle, LieAlgebra};
use pseudoalg::linalg::Matrix;
use pseudoalg::multiindex::{indices_up_to, MultiIndex};
use pseudoalg::par::Parallelism;
use pseudoalg::pseudo::{
    find_good_generators, find_pseudoidentity, left_annihilator, verify_axioms, xprod, BasisLabel,
    PseudoAlgebra, PseudoElement,
};
use pseudoalg::reps::{
    curc_decompose, extract_a_module, module_lattice_probe, slice_generates, AModule,
    ConformalModule,
};
use pseudoalg::sample::{random_index, rng_for, small_scalar, SampleCfg};
use pseudoalg::scalar;
use rand_chacha::ChaCha8Rng;

fn gate(name: &str, body: impl FnOnce() -> Result<(), String>) {
    let outcome = body();
    match &outcome {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(e) => println!("acceptance {name}: FAIL ({e})"),
    }
    assert!(outcome.is_ok(), "acceptance {name}: {:?}", outcome);
}

fn zoo() -> Vec<(&'static str, LieAlgebra)> {
    vec![
        ("ab1", LieAlgebra::abelian(1)),
        ("ab2", LieAlgebra::abelian(2)),
        ("nonabelian2", LieAlgebra::nonabelian2()),
        ("heisenberg", LieAlgebra::heisenberg()),
    ]
}

fn random_helt(rng: &mut ChaCha8Rng, n: usize, deg: u32, terms: usize) -> HElt {
    let mut out = HElt::zero();
    for _ in 0..terms {
        out.add_term(random_index(rng, n, deg), small_scalar(rng));
    }
    out
}

fn check(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

#[test]
fn acceptance_enveloping_product() {
    gate("enveloping product", || {
        let mut rng = rng_for(101);
        for (name, lie) in zoo() {
            let ctx = HCtx::new(lie).map_err(|e| e.to_string())?;
            let n = ctx.dim();
            // fifty random associativity triples per algebra
            for _ in 0..50 {
                let a = random_helt(&mut rng, n, 5, 2);
                let b = random_helt(&mut rng, n, 5, 2);
                let c = random_helt(&mut rng, n, 5, 2);
                let lhs = h_mul(&ctx, &h_mul(&ctx, &a, &b), &c);
                let rhs = h_mul(&ctx, &a, &h_mul(&ctx, &b, &c));
                check(lhs == rhs, &format!("{name}: associativity defect"))?;
            }
            // antipode laws on every monomial up to degree four
            for i in indices_up_to(n, 4) {
                let mut left = HElt::zero();
                let mut right = HElt::zero();
                for ((j, k), c) in h_coproduct(&HElt::monomial(i.clone(), scalar::one())).terms() {
                    let sj = mono_antipode_of(&ctx, j);
                    let dk = HElt::monomial(k.clone(), scalar::one());
                    let mut t = h_mul(&ctx, &sj, &dk);
                    t = t.scaled(c);
                    left.add_assign(&t);
                    let dj = HElt::monomial(j.clone(), scalar::one());
                    let sk = mono_antipode_of(&ctx, k);
                    let mut u = h_mul(&ctx, &dj, &sk);
                    u = u.scaled(c);
                    right.add_assign(&u);
                }
                let want = if i.is_zero() { ctx.one() } else { HElt::zero() };
                check(left == want, &format!("{name}: S*id fails at {i:?}"))?;
                check(right == want, &format!("{name}: id*S fails at {i:?}"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_fourier_round_trip() {
    gate("fourier round trip", || {
        let mut rng = rng_for(202);
        for (name, lie) in zoo() {
            let ctx = HCtx::new(lie).map_err(|e| e.to_string())?;
            let n = ctx.dim();
            for _ in 0..125 {
                let mut w = HTensor::zero();
                for _ in 0..2 {
                    w.add_term(
                        random_index(&mut rng, n, 3),
                        random_index(&mut rng, n, 3),
                        small_scalar(&mut rng),
                    );
                }
                let parts = fourier_decompose(&ctx, &w);
                let mut back = fourier_recompose(&ctx, &parts);
                back.sub_assign(&w);
                check(back.is_zero(), &format!("{name}: tensor does not round-trip"))?;
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_coordinate_duality() {
    gate("coordinate duality", || {
        let mut rng = rng_for(303);
        for lie in [LieAlgebra::nonabelian2(), LieAlgebra::heisenberg()] {
            let ctx = HCtx::new(lie).map_err(|e| e.to_string())?;
            let n = ctx.dim();

            // coproduct of a divided monomial is the full binomial sum
            for i in indices_up_to(n, 4) {
                let cop = h_coproduct(&HElt::monomial(i.clone(), scalar::one()));
                let subs = i.sub_indices();
                let mut count = 0;
                for ((j, k), c) in cop.terms() {
                    check(j.add(k) == i, "coproduct term off the diagonal")?;
                    check(c == &scalar::one(), "coproduct coefficient is not one")?;
                    count += 1;
                }
                check(count == subs.len(), "coproduct misses a splitting")?;
            }

            // coordinate coproduct is dual to the enveloping product
            for _ in 0..25 {
                let mut x = XElt::zero();
                for _ in 0..2 {
                    x.add_term(random_index(&mut rng, n, 4), small_scalar(&mut rng));
                }
                let dx = x_coproduct(&ctx, &x, 4);
                for f in indices_up_to(n, 2) {
                    for g in indices_up_to(n, 2) {
                        let prod = h_mul(
                            &ctx,
                            &HElt::monomial(f.clone(), scalar::one()),
                            &HElt::monomial(g.clone(), scalar::one()),
                        );
                        let direct = pair(&x, &prod);
                        let mut split = scalar::zero();
                        for ((j, k), c) in dx.terms() {
                            if j == &f && k == &g {
                                split += c;
                            }
                        }
                        check(direct == split, "coordinate coproduct is not dual")?;
                    }
                }
            }

            // left action is a module-algebra action
            for _ in 0..20 {
                let i = random_index(&mut rng, n, 2);
                let h = HElt::monomial(i.clone(), scalar::one());
                let x = XElt::monomial(random_index(&mut rng, n, 2), scalar::one());
                let y = XElt::monomial(random_index(&mut rng, n, 2), scalar::one());
                let lhs = truncate(&h_act_x(&ctx, &h, &x_mul(&x, &y), 4), 4);
                let mut rhs = XElt::zero();
                for ((j, k), c) in h_coproduct(&h).terms() {
                    let hx = h_act_x(&ctx, &HElt::monomial(j.clone(), scalar::one()), &x, 4);
                    let hy = h_act_x(&ctx, &HElt::monomial(k.clone(), scalar::one()), &y, 4);
                    let mut term = x_mul(&hx, &hy);
                    term = term.scaled(c);
                    rhs.add_assign(&term);
                }
                check(lhs == truncate(&rhs, 4), "left action breaks on products")?;
            }

            // right action composes through the enveloping product
            for _ in 0..20 {
                let mut x = XElt::zero();
                for _ in 0..2 {
                    x.add_term(random_index(&mut rng, n, 4), small_scalar(&mut rng));
                }
                let f = HElt::monomial(random_index(&mut rng, n, 2), scalar::one());
                let g = HElt::monomial(random_index(&mut rng, n, 2), scalar::one());
                let joint = x_ract_h(&ctx, &x, &h_mul(&ctx, &f, &g)).map_err(|e| e.to_string())?;
                let staged = x_ract_h(
                    &ctx,
                    &x_ract_h(&ctx, &x, &f).map_err(|e| e.to_string())?,
                    &g,
                )
                .map_err(|e| e.to_string())?;
                check(joint == staged, "right action fails to compose")?;
            }

            // filtration: the right action by degree m moves degree d into
            // degree at most d + m
            for x_deg in 0..=4u32 {
                for j in indices_up_to(n, 4) {
                    for i in pseudoalg::multiindex::indices_of_degree(n, x_deg) {
                        let x = XElt::monomial(i, scalar::one());
                        let moved = x_ract_h(&ctx, &x, &HElt::monomial(j.clone(), scalar::one()))
                            .map_err(|e| e.to_string())?;
                        if !moved.is_zero() {
                            let d = moved.degree().map_err(|e| e.to_string())?;
                            check(d <= x_deg + j.degree(), "right action escapes the filtration")?;
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_axiom_suite() {
    gate("axiom suite", || {
        let cfg = SampleCfg {
            max_deg: 4,
            samples: 12,
            seed: 7,
        };
        let mut algebras: Vec<PseudoAlgebra> = Vec::new();

        let na2 = HCtx::new(LieAlgebra::nonabelian2()).map_err(|e| e.to_string())?;
        algebras.push(
            PseudoAlgebra::cur(na2, OrdinaryAlgebra::scalar_field(), "cur_c")
                .map_err(|e| e.to_string())?,
        );

        let heis = HCtx::new(LieAlgebra::heisenberg()).map_err(|e| e.to_string())?;
        algebras.push(
            PseudoAlgebra::cur(heis.clone(), OrdinaryAlgebra::matrix(2), "cur_end2")
                .map_err(|e| e.to_string())?,
        );

        let ab1 = HCtx::new(LieAlgebra::abelian(1)).map_err(|e| e.to_string())?;
        algebras.push(PseudoAlgebra::cend(ab1.clone(), 1));
        algebras.push(PseudoAlgebra::cend(ab1.clone(), 2));

        // operator backends over noncommutative coefficients: the coproduct
        // of a functional is no longer symmetric, so these rows pin the leg
        // order of the associativity law
        let na2_ctx = HCtx::new(LieAlgebra::nonabelian2()).map_err(|e| e.to_string())?;
        algebras.push(PseudoAlgebra::cend(na2_ctx, 1));
        algebras.push(
            PseudoAlgebra::dif(heis.clone(), hop_xcop(&heis), "dif_hop")
                .map_err(|e| e.to_string())?,
        );

        let ab2_lie = LieAlgebra::abelian(2);
        let mut phi = Cocycle::new();
        phi.set(0, 1, scalar::one());
        let weyl_x = env_quotient_xcop(1, &ab2_lie, &phi).map_err(|e| e.to_string())?;
        let ab2 = HCtx::new(ab2_lie).map_err(|e| e.to_string())?;
        algebras.push(PseudoAlgebra::dif(ab2, weyl_x, "weyl").map_err(|e| e.to_string())?);

        let inner = PseudoAlgebra::cend(ab1, 1);
        algebras.push(
            PseudoAlgebra::current_ext(heis.clone(), inner, vec![2])
                .map_err(|e| e.to_string())?,
        );
        let cend_heis = PseudoAlgebra::cend(heis, 1);

        // three coordinates blow up the coproduct windows quickly, so this
        // row runs one degree lower
        let small = SampleCfg {
            max_deg: 3,
            samples: 8,
            seed: 7,
        };
        let rows = algebras
            .iter()
            .map(|a| (a, &cfg))
            .chain(std::iter::once((&cend_heis, &small)));

        for (alg, cfg) in rows {
            let report =
                verify_axioms(alg, cfg, Parallelism::Rayon).map_err(|e| e.to_string())?;
            if !report.ok {
                let bad: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| c.failures > 0)
                    .map(|c| c.name.as_str())
                    .collect();
                return Err(format!("{}: failed checks {:?}", alg.name, bad));
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_rank_one() {
    gate("rank one", || {
        let ctx = HCtx::new(LieAlgebra::abelian(1)).map_err(|e| e.to_string())?;
        let report = rank1_classify(&ctx, 2).map_err(|e| e.to_string())?;
        check(report.kernel_dim == 1, "solution space is not a line")?;
        check(
            report.only_unit_family,
            "solutions besides the unit-supported family",
        )
    });
}

#[test]
fn acceptance_operator_goods() {
    gate("operator goods", || {
        let ab1 = HCtx::new(LieAlgebra::abelian(1)).map_err(|e| e.to_string())?;
        let alg = PseudoAlgebra::cend(ab1.clone(), 1);
        let e = find_pseudoidentity(&alg).map_err(|e| e.to_string())?;
        let one_x = XElt::one(1);

        // good projections are nonzero and stable
        let goods = find_good_generators(&alg, 3).map_err(|e| e.to_string())?;
        check(goods.len() == 4, "expected one good per generator degree")?;
        for (_, g) in &goods {
            check(!g.is_zero(), "a good projection vanished")?;
            let again = xprod(&alg, g, &one_x, &e).map_err(|e| e.to_string())?;
            check(&again == g, "good projection is not idempotent")?;
        }

        // the extracted base matches the opposite enveloping model exactly
        let (_, extracted) = extract_base_algebra(&alg, 3).map_err(|e| e.to_string())?;
        let model = SliceAlgebra::from_xcop(&hop_xcop(&ab1), 3).map_err(|e| e.to_string())?;
        check(model_match(&extracted, &model), "base tables differ from the model")?;

        // no left annihilators in the operator algebras
        for n in [1usize, 2] {
            let alg = PseudoAlgebra::cend(ab1.clone(), n);
            let ann = left_annihilator(&alg, 4).map_err(|e| e.to_string())?;
            check(ann.is_empty(), &format!("size {n}: nonzero left annihilator"))?;
        }
        Ok(())
    });
}

#[test]
fn acceptance_module_round_trip() {
    gate("module round trip", || {
        let mut rng = rng_for(505);
        let lies = [
            LieAlgebra::abelian(1),
            LieAlgebra::nonabelian2(),
            LieAlgebra::heisenberg(),
        ];
        for trial in 0..20 {
            let lie = lies[trial % lies.len()].clone();
            let ctx = HCtx::new(lie).map_err(|e| e.to_string())?;
            let n = 1 + trial % 2;
            let alg = PseudoAlgebra::cur(ctx.clone(), OrdinaryAlgebra::matrix(n), "cur")
                .map_err(|e| e.to_string())?;
            let cols = AModule::matrix_columns(n);
            let amod = if trial % 3 == 0 {
                cols.direct_sum(&cols)
            } else {
                cols
            };
            // a random change of basis on the fiber
            let dv = amod.dim_v;
            let p = loop {
                let mut m = Matrix::zeros(dv, dv);
                for r in 0..dv {
                    for c in 0..dv {
                        *m.at_mut(r, c) = small_scalar(&mut rng);
                    }
                }
                if m.inverse().is_some() {
                    break m;
                }
            };
            let twisted = amod.conjugate(&p).map_err(|e| e.to_string())?;
            let module = ConformalModule::tilde(twisted.clone(), ctx.dim());
            module.validate(&alg).map_err(|e| e.to_string())?;
            let recovered = extract_a_module(&alg, &module).map_err(|e| e.to_string())?;
            check(recovered == twisted.action, "fiber action does not round-trip")?;
        }
        Ok(())
    });
}

#[test]
fn acceptance_module_lattice() {
    gate("module lattice", || {
        // shifted tautological modules are irreducible
        let ab1 = HCtx::new(LieAlgebra::abelian(1)).map_err(|e| e.to_string())?;
        let alg = PseudoAlgebra::cend(ab1, 1);
        let mut rng = rng_for(606);
        let mut shifts = vec![scalar::zero()];
        for _ in 0..4 {
            shifts.push(small_scalar(&mut rng) / scalar::int(2));
        }
        for shift in shifts {
            let module = ConformalModule::taut(1, vec![shift.clone()]);
            let mut start = PseudoElement::zero();
            start.add_term(
                BasisLabel::Idx(0),
                HElt::monomial(MultiIndex(vec![2]), scalar::one()),
            );
            start.add_term(BasisLabel::Idx(0), HElt::gen(1, 0).scaled(&scalar::int(-3)));
            let generates =
                slice_generates(&alg, &module, &start, 2).map_err(|e| e.to_string())?;
            check(generates, &format!("shift {shift} is not irreducible"))?;
        }

        // a nilpotent fiber twist with one Jordan block has exactly one
        // proper invariant subspace
        let mut jordan = Matrix::zeros(2, 2);
        *jordan.at_mut(0, 1) = scalar::one();
        let module = ConformalModule::Free {
            amod: AModule {
                dim_v: 2,
                action: vec![Matrix::identity(2)],
            },
            nil: vec![jordan],
        };
        let lattice = module_lattice_probe(&module).map_err(|e| e.to_string())?;
        check(lattice.len() == 1, "Jordan twist lattice is not a single line")?;

        // direct sums split back apart
        let line = ConformalModule::tilde(AModule::trivial(), 1);
        let sum = line.direct_sum(&line).map_err(|e| e.to_string())?;
        let split = module_lattice_probe(&sum).map_err(|e| e.to_string())?;
        check(split.len() == 2, "direct sum does not split")?;
        check(
            split.iter().all(|b| b.len() == 1),
            "summands are not lines",
        )?;

        // a non-unital fiber action splits into image and kernel
        let ctx = HCtx::new(LieAlgebra::abelian(1)).map_err(|e| e.to_string())?;
        let alg = PseudoAlgebra::cur(ctx, OrdinaryAlgebra::scalar_field(), "cur_c")
            .map_err(|e| e.to_string())?;
        let mut proj = Matrix::zeros(2, 2);
        *proj.at_mut(0, 0) = scalar::one();
        let module = ConformalModule::tilde(
            AModule {
                dim_v: 2,
                action: vec![proj],
            },
            1,
        );
        let e = find_pseudoidentity(&alg).map_err(|e| e.to_string())?;
        let (image, kernel) = curc_decompose(&alg, &module, &e, 1).map_err(|e| e.to_string())?;
        check(image.len() == 2 && kernel.len() == 2, "projection split is off")
    });
}

#[test]
fn acceptance_classification() {
    gate("classification", || {
        // full matrix algebras
        for n in [1usize, 2, 3] {
            let ctx = HCtx::new(LieAlgebra::nonabelian2()).map_err(|e| e.to_string())?;
            let alg = PseudoAlgebra::cur(ctx, OrdinaryAlgebra::matrix(n), "cur")
                .map_err(|e| e.to_string())?;
            let got = classify(&alg, 1).map_err(|e| e.to_string())?;
            check(
                got == Classification::MatrixAlgebra { n },
                &format!("matrix algebra of size {n} misclassified as {got:?}"),
            )?;
        }

        // opposite enveloping algebras across the whole zoo
        for (name, lie) in zoo() {
            let dim = lie.dim;
            let ctx = HCtx::new(lie).map_err(|e| e.to_string())?;
            let alg = PseudoAlgebra::dif(ctx.clone(), hop_xcop(&ctx), "hop")
                .map_err(|e| e.to_string())?;
            let got = classify(&alg, 2).map_err(|e| e.to_string())?;
            check(
                got == Classification::CurrentOverSubalgebra { n: 1, sub_dim: dim },
                &format!("{name}: enveloping slice misclassified as {got:?}"),
            )?;
        }

        // a proper coordinate subalgebra is recognized with its dimension
        let heis = HCtx::new(LieAlgebra::heisenberg()).map_err(|e| e.to_string())?;
        let sub = hop_sub_xcop(&heis, &[2]).map_err(|e| e.to_string())?;
        let alg = PseudoAlgebra::dif(heis, sub, "hop_center").map_err(|e| e.to_string())?;
        let got = classify(&alg, 2).map_err(|e| e.to_string())?;
        check(
            got == Classification::CurrentOverSubalgebra { n: 1, sub_dim: 1 },
            &format!("central subalgebra misclassified as {got:?}"),
        )?;

        // the symplectic deformation is separated from the currents
        let ab2_lie = LieAlgebra::abelian(2);
        let mut phi = Cocycle::new();
        phi.set(0, 1, scalar::one());
        let weyl_x = env_quotient_xcop(1, &ab2_lie, &phi).map_err(|e| e.to_string())?;
        let ab2 = HCtx::new(ab2_lie).map_err(|e| e.to_string())?;
        let alg = PseudoAlgebra::dif(ab2, weyl_x, "weyl").map_err(|e| e.to_string())?;
        let got = classify(&alg, 2).map_err(|e| e.to_string())?;
        check(
            got == Classification::WeylLike { n: 1, sub_dim: 2 },
            &format!("deformation misclassified as {got:?}"),
        )?;

        // polynomial-style slices are rejected by the smallness probe
        let poly = poly_xy_ddx(2);
        let small = is_small(|l| SliceAlgebra::from_xcop(&poly, l), 2).map_err(|e| e.to_string())?;
        check(!small, "polynomial slice slipped past the smallness probe")
    });
}

#[test]
fn acceptance_coefficient_algebra() {
    gate("coefficient algebra", || {
        let ab1 = HCtx::new(LieAlgebra::abelian(1)).map_err(|e| e.to_string())?;
        let alg = PseudoAlgebra::cend(ab1.clone(), 1);
        let coef = CoefAlgebra::new(&alg);
        let e = find_pseudoidentity(&alg).map_err(|e| e.to_string())?;
        let unit = coef.unit(&e).map_err(|e| e.to_string())?;
        let labels = alg.generator_labels(2);

        let mut rng = rng_for(707);
        let random_coef = |rng: &mut ChaCha8Rng| -> CoefElt {
            let mut out = CoefElt::zero();
            for _ in 0..2 {
                let label = labels[rand::Rng::gen_range(rng, 0..labels.len())].clone();
                let mut x = XElt::zero();
                x.add_term(random_index(rng, 1, 2), small_scalar(rng));
                out.add_term(label, x);
            }
            out
        };

        for _ in 0..100 {
            let a = random_coef(&mut rng);
            let b = random_coef(&mut rng);
            let c = random_coef(&mut rng);
            let ab = coef.mul(&a, &b).map_err(|e| e.to_string())?;
            let bc = coef.mul(&b, &c).map_err(|e| e.to_string())?;
            let lhs = coef.mul(&ab, &c).map_err(|e| e.to_string())?;
            let rhs = coef.mul(&a, &bc).map_err(|e| e.to_string())?;
            check(lhs == rhs, "coefficient product is not associative")?;
        }
        for _ in 0..20 {
            let a = random_coef(&mut rng);
            let ea = coef.mul(&unit, &a).map_err(|e| e.to_string())?;
            check(ea == a, "unit is not a left identity")?;
        }

        // torsion detection over a cyclic coefficient module
        let free = CyclicModule::free(ab1.clone());
        let gen = HElt::gen(1, 0);
        check(
            !free.is_torsion(&gen, 4).map_err(|e| e.to_string())?,
            "free module flagged as torsion",
        )?;
        let mut relation = HElt::gen(1, 0);
        relation.add_term(MultiIndex::zero(1), -scalar::one());
        let quotient = CyclicModule::quotient(ab1, relation);
        check(
            quotient.is_torsion(&gen, 4).map_err(|e| e.to_string())?,
            "cyclic quotient not detected as torsion",
        )
    });
}

"""Acceptance criteria, one test per criterion.

Every test pins the tolerance stated for it and prints a single
``criterion N: PASS`` line (visible with ``pytest -s``).  Expected values
come from independent oracles computed here: the error-function normal
CDF, pair enumeration, truth tables, and brute-force weight sums.
"""

import json
import math
import random
import time

from monadlogic import (
    DISTRIBUTION,
    IDENTITY,
    NONEMPTY_SET,
    SAMPLER,
    LP3,
    WeightedFamily,
    aggregate,
    bind,
    evaluate_sentence,
    eval_formula,
    lift_algebra,
    load_interpretation,
    load_network,
    make_algebra,
    make_framework,
    parse_formula,
    parse_signature,
    unit,
    wmc_build,
    wmc_bruteforce,
)
from monadlogic.cli import main as cli_main
from monadlogic.selftest import (
    dist_close,
    empirical,
    propositional_setup,
    random_computation,
    random_kleisli,
    random_propositional,
    total_variation,
    truth_table_oracle,
)

from helpers import random_network_system


def _normal_cdf(x: float) -> float:
    """Independent normal CDF oracle via the library error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def report(number: int, detail: str):
    print(f"criterion {number}: PASS - {detail}")


class TestCriterion1Weather:
    def test_weather_closed_form_and_sampler(self, demo_dir):
        closed = 0.5 * _normal_cdf(0.0) + 0.5 * (1.0 - _normal_cdf(15.0))
        assert abs(closed - 0.25) <= 1e-12

        sig = parse_signature((demo_dir / "weather.sig.json").read_text())
        interp = load_interpretation(
            json.loads((demo_dir / "weather.interp.json").read_text()), sig, SAMPLER
        )
        formula = parse_formula((demo_dir / "weather.formula").read_text(), sig)
        framework = make_framework(SAMPLER, make_algebra("product"))
        started = time.perf_counter()
        out = evaluate_sentence(formula, framework, interp, budget=200000, seed=42)
        elapsed = time.perf_counter() - started
        assert abs(out.value - 0.25) <= 4 * out.stderr
        assert elapsed < 5.0, f"sampler run took {elapsed:.2f}s"
        report(1, f"estimate {out.value:.5f} +/- {out.stderr:.5f} vs 0.25 in {elapsed:.2f}s")


class TestCriterion2TrafficArgmax:
    def test_transform_then_three_valued_evaluation(self, demo_dir, tmp_path):
        started = time.perf_counter()
        out_path = tmp_path / "traffic.lp.json"
        code = cli_main([
            "transform",
            "--sig", str(demo_dir / "traffic.sig.json"),
            "--interp", str(demo_dir / "traffic.interp.json"),
            "--out", str(out_path),
        ])
        assert code == 0

        sig = parse_signature((demo_dir / "traffic.sig.json").read_text())
        interp = load_interpretation(json.loads(out_path.read_text()), sig, NONEMPTY_SET)
        lp_fw = make_framework(NONEMPTY_SET, make_algebra("priest"))
        body = parse_formula(
            "[l := light(x)][d := drive(x, l)] "
            "((eqa(d, go) & !eqc(l, red)) | (!eqa(d, go) & eqc(l, red)))",
            sig,
            free={"x": "Crossing"},
        )
        assert eval_formula(body, lp_fw, interp, {"x": "c1"}) is LP3.B

        base = json.loads((demo_dir / "traffic.interp.json").read_text())
        for light, drive, expected in (
            ("red", "stop", LP3.T),
            ("green", "stop", LP3.F),
        ):
            dirac = json.loads(json.dumps(base))
            dirac["mfuncs"]["light"]["rows"] = [["c1", [[light, 1.0]]]]
            dirac["mfuncs"]["drive"]["rows"] = [["c1", light, [[drive, 1.0]]]]
            dirac_path = tmp_path / f"dirac-{light}.json"
            dirac_path.write_text(json.dumps(dirac))
            out_dirac = tmp_path / f"dirac-{light}.lp.json"
            assert cli_main([
                "transform",
                "--sig", str(demo_dir / "traffic.sig.json"),
                "--interp", str(dirac_path),
                "--out", str(out_dirac),
            ]) == 0
            crisp = load_interpretation(json.loads(out_dirac.read_text()), sig, NONEMPTY_SET)
            assert eval_formula(body, lp_fw, crisp, {"x": "c1"}) is expected

        elapsed = time.perf_counter() - started
        assert elapsed < 1.0
        report(2, f"uniform lights give B, Dirac variants stay crisp ({elapsed:.2f}s)")


class TestCriterion3DigitSum:
    def test_nested_bind_value_is_half(self, demo_dir):
        started = time.perf_counter()
        sig = parse_signature((demo_dir / "mnist.sig.json").read_text())
        interp = load_interpretation(
            json.loads((demo_dir / "mnist.interp.json").read_text()), sig, DISTRIBUTION
        )
        framework = make_framework(DISTRIBUTION, make_algebra("product"))
        formula = parse_formula(
            "[n1 := classify(im1)][n2 := classify(im2)] eq(add(n1, n2), 1)", sig
        )
        value = evaluate_sentence(formula, framework, interp).value

        rows = interp.mfuncs["classify"].rows
        oracle = sum(
            p1 * p2
            for n1, p1 in rows[("img1",)].pairs
            for n2, p2 in rows[("img2",)].pairs
            if n1 + n2 == 1
        )
        assert value == 0.5
        assert abs(value - oracle) <= 1e-12
        elapsed = time.perf_counter() - started
        assert elapsed < 1.0
        report(3, f"nested binds give {value} == oracle {oracle}")


class TestCriterion4MonadLaws:
    def test_finite_kinds_exact_and_sampler_statistical(self):
        started = time.perf_counter()
        rng = random.Random(640)
        carriers = (0, 1, 2)
        for kind in (IDENTITY, NONEMPTY_SET, DISTRIBUTION):
            for _ in range(500):
                x = rng.choice(carriers)
                c = random_computation(rng, kind)
                k = random_kleisli(rng, kind)
                g = random_kleisli(rng, kind)

                def same(a, b):
                    return dist_close(a, b, 1e-12) if kind == DISTRIBUTION else a == b

                assert same(bind(unit(kind, x), k), k(x))
                assert same(bind(c, lambda a: unit(kind, a)), c)
                assert same(bind(bind(c, k), g), bind(c, lambda a: bind(k(a), g)))

        n = 100000
        for i in range(3):
            x = rng.choice(carriers)
            c = random_computation(rng, SAMPLER)
            k = random_kleisli(rng, SAMPLER)
            g = random_kleisli(rng, SAMPLER)
            sides = (
                (bind(unit(SAMPLER, x), k), k(x)),
                (bind(c, lambda a: unit(SAMPLER, a)), c),
                (bind(bind(c, k), g), bind(c, lambda a: bind(k(a), g))),
            )
            for j, (left, right) in enumerate(sides):
                tv = total_variation(
                    empirical(left, n, seed=9_000 + 10 * i + j),
                    empirical(right, n, seed=77_000 + 10 * i + j),
                )
                assert tv <= 0.02, (i, j, tv)
        elapsed = time.perf_counter() - started
        assert elapsed < 60.0
        report(4, f"500 exact instances per law per kind, sampler TV <= 0.02 ({elapsed:.1f}s)")


class TestCriterion5MonoidAndClassicalLimit:
    ZOO = (
        ("boolean", None),
        ("priest", None),
        ("product", None),
        ("sproduct", None),
        ("ltn_p", {"p": 2.0}),
        ("ltn_q", {"q": 0.75}),
        ("stl_r", {"r": 10.0}),
    )

    def _random_value(self, rng, alg):
        if alg.carrier == "bool":
            return rng.random() < 0.5
        if alg.carrier == "lp3":
            return rng.choice((LP3.F, LP3.B, LP3.T))
        if alg.carrier == "prob":
            return rng.random()
        return rng.uniform(-10.0, 10.0)

    def test_monoid_laws_and_boolean_restriction(self):
        started = time.perf_counter()
        rng = random.Random(650)
        boolean = make_algebra("boolean")
        skipped = []
        for name, params in self.ZOO:
            alg = make_algebra(name, params)
            if alg.approximate:
                skipped.append(name)  # smooth connectives by design
            else:
                for _ in range(1000):
                    x, y, z = (self._random_value(rng, alg) for _ in range(3))
                    exact = alg.carrier in ("bool", "lp3")

                    def close(a, b):
                        return a == b if exact else abs(a - b) <= 1e-12

                    assert close(alg.conj(alg.conj(x, y), z), alg.conj(x, alg.conj(y, z)))
                    assert close(alg.disj(alg.disj(x, y), z), alg.disj(x, alg.disj(y, z)))
                    assert close(alg.conj(alg.top, x), x) and close(alg.conj(x, alg.top), x)
                    assert close(alg.disj(alg.bot, x), x) and close(alg.disj(x, alg.bot), x)
            encode = {False: alg.bot, True: alg.top}
            decode = {alg.bot: False, alg.top: True}
            for a in (False, True):
                assert decode[alg.neg(encode[a])] == (not a)
                for b in (False, True):
                    for op in ("conj", "disj", "implies"):
                        got = getattr(alg, op)(encode[a], encode[b])
                        assert decode[got] == getattr(boolean, op)(a, b)
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0
        assert skipped == ["stl_r"]
        report(5, f"1000 triples per algebra, classical restriction exact ({elapsed:.1f}s)")


class TestCriterion6WmcEquivalence:
    def test_hundred_random_networks(self):
        started = time.perf_counter()
        rng = random.Random(660)
        framework = make_framework(DISTRIBUTION, make_algebra("product"))
        worst = 0.0
        for _ in range(100):
            sig_doc, doc, text = random_network_system(rng, max_vars=4, max_values=3)
            sig = parse_signature(json.dumps(sig_doc))
            interp = load_interpretation(doc, sig, DISTRIBUTION)
            network, sig2, interp2 = load_network(doc, sig, interp)
            formula = parse_formula(text, sig2, free=network.free)
            built = wmc_build(network, formula)
            value = evaluate_sentence(built, framework, interp2).value
            oracle = wmc_bruteforce(network, interp2, formula)
            worst = max(worst, abs(value - oracle))
            assert abs(value - oracle) <= 1e-9, text
        elapsed = time.perf_counter() - started
        assert elapsed < 30.0
        report(6, f"100 networks, worst |bind - bruteforce| = {worst:.2e} ({elapsed:.1f}s)")


class TestCriterion7QuantifierConsistency:
    def test_products_and_geometric_means(self):
        rng = random.Random(670)
        product = make_algebra("product")
        for _ in range(200):
            values = [rng.random() for _ in range(rng.randint(1, 10))]
            plain = 1.0
            for v in values:
                plain *= v
            unit_fam = WeightedFamily.exact([(1.0, v) for v in values])
            assert abs(aggregate(product, "forall", unit_fam) - plain) <= 1e-12
            mean_fam = WeightedFamily.exact([(1.0 / len(values), v) for v in values])
            geometric = plain ** (1.0 / len(values))
            assert abs(aggregate(product, "forall", mean_fam) - geometric) <= 1e-12
        report(7, "unit weights give plain products, mean weights geometric means")


class TestCriterion8LtnLimit:
    FAMILIES = (
        (0.15, 0.3, 0.5, 0.7, 0.9),
        (0.05, 0.2, 0.45, 0.6, 0.8),
        (0.3, 0.4, 0.55, 0.62, 0.71),
    )

    def test_exists_tends_to_max(self):
        for values in self.FAMILIES:
            fam = WeightedFamily.exact([(1.0, v) for v in values])
            top = max(values)
            err = {
                p: abs(aggregate(make_algebra("ltn_p", {"p": p}), "exists", fam) - top)
                for p in (8.0, 64.0)
            }
            assert err[64.0] < err[8.0]
            assert err[64.0] < 0.05

    def test_constant_families_are_fixed_points(self):
        for c in (0.2, 0.5, 0.9):
            fam = WeightedFamily.exact([(1.0, c)] * 5)
            for alg in (
                make_algebra("ltn_p", {"p": 8.0}),
                make_algebra("ltn_p", {"p": 64.0}),
                make_algebra("ltn_q", {"q": 0.75}),
            ):
                assert abs(aggregate(alg, "forall", fam) - c) <= 1e-12
                assert abs(aggregate(alg, "exists", fam) - c) <= 1e-12
        report(8, "p-mean existential tends to max; constants are fixed points")


class TestCriterion9LiftedClosedForms:
    def test_distribution_lift_matches_closed_forms(self):
        lifted = lift_algebra(make_algebra("boolean"), DISTRIBUTION)
        rng = random.Random(690)
        for _ in range(1000):
            p, q = rng.random(), rng.random()
            assert abs(lifted.conj(p, q) - p * q) <= 1e-12
            assert abs(lifted.disj(p, q) - (p + q - p * q)) <= 1e-12
            assert abs(lifted.neg(p) - (1.0 - p)) <= 1e-12
            assert abs(lifted.implies(p, q) - (1.0 - p + p * q)) <= 1e-12
        report(9, "lifted connectives equal pq, p+q-pq, 1-p, 1-p+pq")


class TestCriterion10PropositionalOracle:
    def test_truth_table_enumeration(self):
        rng = random.Random(700)
        names = ("p0", "p1", "p2", "p3")
        classical = make_framework(IDENTITY, make_algebra("boolean"))
        for _ in range(500):
            formula = random_propositional(rng, names)
            for bits in range(16):
                assignment = {n: bool(bits >> i & 1) for i, n in enumerate(names)}
                _, interp = propositional_setup(names, assignment)
                got = eval_formula(formula, classical, interp, {})
                assert got == truth_table_oracle(formula, assignment)
        report(10, "500 random formulas match truth tables on all assignments")

"""End-to-end acceptance checks, one per criterion, with wall-clock budgets.

Every numeric comparison is exact rational arithmetic; the time budgets are
deliberately generous upper bounds. Each check prints its own PASS/FAIL line
so a full run reads as a scoreboard.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction
from random import Random

from noarb.certcheck import check_hull_certificate, check_separation
from noarb.cli import main
from noarb.generators import GeneratorParams, generate_market, random_transform
from noarb.geometry import (
    HullCertificate,
    PointSet,
    caratheodory_reduce,
    hull_membership,
    is_disperse,
    is_zero_neutral_set,
    open_segment_member,
    relative_interior_membership,
)
from noarb.io_json import parse_market, serialize_market
from noarb.market import (
    ARBITRAGE_NODE,
    LOCALLY_ARBITRAGE_FREE,
    LOCALLY_ZERO_NEUTRAL,
    check_self_financing,
    classify_market,
    constant_portfolio,
    enumerate_nodes,
    epsilon_witness,
    find_arbitrage,
    portfolio_audit,
    restricted_portfolio,
    sum_portfolios,
    terminal_gain,
)
from noarb.parity import (
    boundary_shape_violations,
    build_parity_market,
    demo_spec,
    parity_swap_nas,
    transformed_parity_factor,
    verify_parity,
)
from noarb.symmetry import (
    SegmentSample,
    check_strict_icp,
    compose,
    identity_transform,
    induce_map,
    numeraire_swap,
    verify_symmetry_on_market,
)

F = Fraction


@contextmanager
def criterion(capsys, name: str, budget: float):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        dt = time.perf_counter() - t0
        with capsys.disabled():
            print(f"\n[{name}] FAIL after {dt:.2f}s (budget {budget:.0f}s)")
        raise
    dt = time.perf_counter() - t0
    ok = dt < budget
    with capsys.disabled():
        verdict = "PASS" if ok else "FAIL"
        print(f"\n[{name}] {verdict} in {dt:.2f}s (budget {budget:.0f}s)")
    assert ok, f"{name}: {dt:.2f}s exceeded the {budget:.0f}s budget"


def _coord(rng: Random) -> Fraction:
    return F(rng.randint(-100, 100), rng.randint(1, 100))


def _point_set(rng: Random, mode: int) -> PointSet:
    d = rng.randint(1, 4)
    n = rng.randint(1, 30)
    if mode == 0:
        pts = [tuple(_coord(rng) for _ in range(d)) for _ in range(n)]
    elif mode == 1:
        # symmetric pairs put the origin in the hull, often in its interior
        pts = []
        for _ in range((n + 1) // 2):
            y = tuple(_coord(rng) for _ in range(d))
            pts += [y, tuple(-c for c in y)]
    elif mode == 2:
        # first coordinate bounded away from zero: the origin is separated
        pts = [(F(rng.randint(1, 100), rng.randint(1, 100)),)
               + tuple(_coord(rng) for _ in range(d - 1)) for _ in range(n)]
    else:
        # the origin itself is a point: hull membership without interiority
        pts = [tuple(_coord(rng) for _ in range(d)) for _ in range(n)]
        pts[rng.randrange(n)] = (F(0),) * d
    return PointSet(d, tuple(pts))


def test_dispersion_and_hull_equivalences(capsys):
    rng = Random(10)
    tally = {"interior": 0, "hull_only": 0, "outside": 0}
    with criterion(capsys, "1 dispersion/0-neutrality equivalences", 60.0):
        for i in range(1000):
            ps = _point_set(rng, i % 4)
            origin = (F(0),) * ps.dim
            ri = relative_interior_membership(ps, origin)
            dv = is_disperse(ps)
            assert dv.disperse == (ri is not None)
            hull = hull_membership(ps, origin)
            zv = is_zero_neutral_set(ps)
            assert zv.zero_neutral == (hull is not None)
            if dv.disperse:
                assert zv.zero_neutral
                assert check_hull_certificate(ps, origin, ri,
                                              require_interior=True)
                tally["interior"] += 1
            else:
                assert dv.witness is not None
                assert check_separation(ps, dv.witness)
            if zv.zero_neutral:
                assert check_hull_certificate(ps, origin, zv.certificate)
                assert check_hull_certificate(ps, origin, hull)
                if not dv.disperse:
                    tally["hull_only"] += 1
            else:
                assert zv.separator is not None
                assert check_separation(ps, zv.separator)
                tally["outside"] += 1
        # all three regions must actually occur for the check to mean much
        assert min(tally.values()) >= 50, tally


def test_caratheodory_reduction(capsys):
    rng = Random(20)
    with criterion(capsys, "2 caratheodory reduction", 30.0):
        for _ in range(1000):
            d = rng.randint(1, 4)
            n = rng.randint(d + 2, 30)
            pts = tuple(tuple(_coord(rng) for _ in range(d)) for _ in range(n))
            ps = PointSet(d, pts)
            support = rng.sample(range(n), rng.randint(1, min(n, 12)))
            raw = [F(rng.randint(1, 9)) for _ in support]
            total = sum(raw)
            cert = HullCertificate(tuple(support),
                                   tuple(w / total for w in raw))
            x = cert.combination(ps)
            red = caratheodory_reduce(ps, cert)
            assert len(red.indices) <= d + 1
            assert red.combination(ps) == x
            assert check_hull_certificate(ps, x, red)


def _random_portfolios(rng: Random, ts, count: int):
    nodes = enumerate_nodes(ts)
    ports, labels = [], []
    third = count // 3
    for i in range(third):
        node = rng.choice(nodes)
        xi = tuple(F(rng.randint(-3, 3), rng.randint(1, 3))
                   for _ in range(ts.dim))
        ports.append(restricted_portfolio(ts, node, xi))
        labels.append(f"restricted-{i}")
    for i in range(third):
        h = tuple(F(rng.randint(-3, 3), rng.randint(1, 3))
                  for _ in range(ts.dim))
        ports.append(constant_portfolio(ts, h))
        labels.append(f"constant-{i}")
    for i in range(count - 2 * third):
        a, b = rng.sample(range(len(ports)), 2)
        ports.append(sum_portfolios(ts, ports[a], ports[b]))
        labels.append(f"sum-{i}")
    return ports, labels


_SMALL_SIZES = (
    (2, 2, 2), (3, 2, 1), (2, 3, 2), (3, 2, 3), (2, 2, 1), (4, 2, 2),
    (3, 3, 2), (2, 3, 3), (4, 2, 1), (3, 2, 2), (2, 2, 3), (4, 3, 1),
)


def test_no_false_arbitrage_flags_on_arbitrage_free_markets(capsys):
    rng = Random(30)
    with criterion(capsys, "3 audits clean on arbitrage-free markets", 300.0):
        for i in range(200):
            if i % 66 == 65:  # a few at the size cap
                depth, branching, dim = 5, 3, 3
            else:
                depth, branching, dim = _SMALL_SIZES[i % len(_SMALL_SIZES)]
            ts = generate_market(GeneratorParams(
                depth=depth, branching=branching, dim=dim, seed=3000 + i,
                regime="arbitrage-free"))
            assert classify_market(ts).status == LOCALLY_ARBITRAGE_FREE
            ports, labels = _random_portfolios(rng, ts, 50)
            report = portfolio_audit(ts, ports, labels)
            assert len(report.entries) >= 50
            flagged = [e.label for e in report.entries if e.is_arbitrage]
            assert not flagged, (i, flagged)
            assert report.sup_inf == 0


def test_planted_arbitrage_is_found_and_checks_out(capsys):
    with criterion(capsys, "4 planted arbitrage recovered", 60.0):
        for i in range(200):
            depth = 2 + i % 3
            branching = 1 + i % 3
            dim = 1 + (i // 2) % 3
            count = 1 + i % 2
            ts = generate_market(GeneratorParams(
                depth=depth, branching=branching, dim=dim, seed=4000 + i,
                regime="plant-arbitrage", plant_count=count))
            found = find_arbitrage(ts)
            assert found is not None, i
            portfolio, proof = found
            assert portfolio.v0 == 0
            assert check_self_financing(ts, portfolio)
            gains_by = {t.id: terminal_gain(ts, portfolio, t)
                        for t in ts.trajectories}
            assert all(g >= 0 for g in gains_by.values()), i
            assert gains_by[proof.strict_trajectory] > 0
            assert dict(proof.terminal_gains) == gains_by


_ZN_SIZES = (
    (2, 2, 1), (3, 2, 2), (2, 3, 3), (4, 2, 1), (3, 3, 2), (2, 2, 3),
    (3, 2, 1), (4, 2, 2), (2, 3, 1), (3, 3, 3), (2, 2, 2), (4, 2, 3),
)


def test_zero_neutral_markets_cap_every_portfolio(capsys):
    rng = Random(50)
    eps = F(1, 10 ** 9)
    with criterion(capsys, "5 0-neutral markets cap all portfolios", 120.0):
        for i in range(200):
            depth, branching, dim = _ZN_SIZES[i % len(_ZN_SIZES)]
            ts = generate_market(GeneratorParams(
                depth=depth, branching=branching, dim=dim, seed=5000 + i,
                regime="zero-neutral-only"))
            assert classify_market(ts).status == LOCALLY_ZERO_NEUTRAL
            ports, labels = _random_portfolios(rng, ts, 20)
            report = portfolio_audit(ts, ports, labels)
            assert all(e.min_gain <= 0 for e in report.entries), i
            for p in ports:
                tid = epsilon_witness(ts, p, eps)
                assert terminal_gain(ts, p, tid) < eps


def test_transforms_never_degrade_node_verdicts(capsys):
    rng = Random(60)
    regimes = ("arbitrage-free", "arbitrage-free", "zero-neutral-only",
               "plant-arbitrage")
    with criterion(capsys, "6 symmetry preservation on 1000 pairs", 300.0):
        for i in range(1000):
            ts = generate_market(GeneratorParams(
                depth=2 + i % 2, branching=2, dim=2 + i % 2,
                seed=100000 + i, regime=regimes[i % 4]))
            kind = i % 3
            if kind == 0:
                tr = random_transform(rng, ts.dim)
            elif kind == 1:
                tr = numeraire_swap(ts.dim, 0, 1 + i % ts.dim)
            else:
                first = random_transform(rng, ts.dim, nonneg=True,
                                         dst_numeraire=0)
                second = random_transform(rng, ts.dim, nonneg=True)
                tr = compose(first, second)
            report = verify_symmetry_on_market(tr, ts)
            assert report.ok, (i, [c for c in report.comparisons if not c.ok])
            if kind == 1:
                # a numeraire change is an equivalence: statuses match
                # exactly and the swap undoes itself
                assert all(c.before.status == c.after.status
                           for c in report.comparisons)
                back = verify_symmetry_on_market(tr, report.transformed)
                assert all(c.before.status == c.after.status
                           for c in back.comparisons)
                assert back.transformed == ts


def test_boundary_counterexamples(capsys):
    with criterion(capsys, "7 boundary counterexamples", 5.0):
        # a projective-style map that fixes (1,0,0) while pushing the
        # surrounding segment inward: images of the endpoints no longer
        # straddle the image of the midpoint
        def proj(x):
            den = x[0] * x[0] + x[1] * x[1]
            return tuple(c / den for c in x)

        a = (F(1), F(-1), F(0))
        b = (F(1), F(1), F(0))
        mid = (F(1), F(0), F(0))
        assert open_segment_member(mid, a, b)
        assert proj(a) == (F(1, 2), F(-1, 2), F(0))
        assert proj(b) == (F(1, 2), F(1, 2), F(0))
        assert proj(mid) == mid
        assert not open_segment_member(proj(mid), proj(a), proj(b))
        assert not check_strict_icp(
            proj, [SegmentSample(a, b, (F(1, 2),))])

        # closure escapes finite sampling: every finite subset of {2^-i}
        # keeps the origin outside its hull, yet the infimum is 0 and the
        # map below sends 0 outside the image interval [1, 2]
        def step(x):
            return x if x <= 0 else x + 1

        for k in range(1, 26):
            pts = tuple((F(1, 2 ** j),) for j in range(1, k + 1))
            sample = PointSet(1, pts)
            assert hull_membership(sample, (F(0),)) is None
            images = PointSet(1, tuple((step(p[0]),) for p in pts))
            assert hull_membership(images, (step(F(0)),)) is None
            assert min(p[0] for p in pts) == F(1, 2 ** k)
        assert step(F(0)) == 0
        assert not F(1) <= step(F(0)) <= F(2)


def test_parity_demo_end_to_end(capsys):
    with criterion(capsys, "8 call-put parity demo", 10.0):
        ts = build_parity_market(demo_spec())
        assert ts.s0 == (F(1, 2), F(1, 4), F(5, 4), F(1))
        report = verify_parity(ts)
        assert report.ok
        assert not report.pi_violations
        assert not report.boundary_violations
        assert all(v.status != ARBITRAGE_NODE
                   for _, v in report.node_verdicts)

        swap = parity_swap_nas()
        sym = verify_symmetry_on_market(swap, ts)
        assert sym.ok
        assert all(c.before.status == c.after.status for c in sym.comparisons)
        image = sym.transformed
        assert image.s0 == (F(1, 5), F(2, 5), F(4, 5), F(1))
        assert boundary_shape_violations(image) == ()
        image_report = verify_parity(image)
        assert image_report.ok
        assert not image_report.pi_violations

        assert transformed_parity_factor(
            induce_map(identity_transform(3, 3)), ts) == 1
        assert transformed_parity_factor(induce_map(swap), ts) == -1


def test_cli_round_trips_and_exit_codes(capsys, tmp_path):
    regimes = ("arbitrage-free", "zero-neutral-only", "plant-arbitrage")
    with criterion(capsys, "9 cli round-trips and exit codes", 60.0):
        for i in range(100):
            regime = regimes[i % 3]
            ts = generate_market(GeneratorParams(
                depth=2 + i % 2, branching=2, dim=1 + i % 3,
                seed=9000 + i, regime=regime))
            text = serialize_market(ts)
            path = tmp_path / f"m{i}.json"
            path.write_text(text)
            again = serialize_market(parse_market(path.read_text()))
            assert again == text, i

            if i % 5 == 0:
                status = classify_market(ts).status
                codes = {
                    LOCALLY_ARBITRAGE_FREE: (0, 0, 0),
                    LOCALLY_ZERO_NEUTRAL: (1, 0, 1),
                }.get(status, (1, 1, 1))
                arg = str(path)
                assert main(["check", arg, "--local-arbitrage-free"]) == codes[0]
                assert main(["check", arg, "--local-zero-neutral"]) == codes[1]
                assert main(["check", arg, "--find-arbitrage"]) == codes[2]

        assert main(["check", str(tmp_path / "missing.json"),
                     "--local-zero-neutral"]) == 2

        one = tmp_path / "gen-a.json"
        two = tmp_path / "gen-b.json"
        args = ["generate", "--depth", "3", "--branching", "2", "--dim", "2",
                "--seed", "42", "--regime", "plant-arbitrage",
                "--plant-count", "2"]
        assert main(args + ["--output", str(one)]) == 0
        assert main(args + ["--output", str(two)]) == 0
        assert one.read_bytes() == two.read_bytes()

"""End-to-end acceptance checks, one test per criterion. Each records a
pass/fail line that is printed in the terminal summary."""

import functools
import json
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE
from scalext.basechange import (
    BaseChangeCategory,
    BaseChangeHull,
    adjunction_check,
    descend,
    galois_act,
    hom_subcomplex,
    p_star,
    projection_formula_check,
    star_condition_check,
    structure_shift,
    structure_sum,
)
from scalext.catalog import dual_numbers, matrix_algebra, path_algebra_An, point
from scalext.complexes import cohomology_dims
from scalext.dg import inject_leibniz_violation, validate_dg_category
from scalext.dimension import (
    DimensionBound,
    dimension_upper_bound,
    galois_transport_witness,
    search_generation,
    verify_generation_witness,
)
from scalext.fields import GF, QQ, automorphism_group, make_extension, regular_representation, trivial_extension
from scalext.io import BaseChangeCodec, HullCodec, dumps, witness_to_json
from scalext.linalg import Matrix, rank
from scalext.pretr import PretriangulatedHull, TwistedComplex
from scalext.randgen import random_equivariant_object, random_morphism, random_twisted

QS2 = make_extension(QQ, [-2, 0, 1])
F4 = make_extension(GF(2), [1, 1, 1])
PAIRS = [(QQ, QS2), (GF(2), F4)]
ROOT = os.path.join(os.path.dirname(__file__), "..")


@contextmanager
def criterion(n, title, limit=None):
    info = {"detail": ""}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException:
        ACCEPTANCE[n] = (False, title, time.perf_counter() - t0, info["detail"])
        raise
    elapsed = time.perf_counter() - t0
    ok = limit is None or elapsed < limit
    ACCEPTANCE[n] = (ok, title, elapsed, info["detail"] + ("" if ok else f" over {limit}s limit"))
    assert ok, f"took {elapsed:.2f}s, limit {limit}s"


def test_criterion_01_dg_axioms():
    with criterion(1, "DG axioms on shipped examples; Leibniz injection caught") as info:
        slow = []
        count = 0
        for F in (QQ, GF(2), GF(3)):
            for A in (point(F), matrix_algebra(F, 2), dual_numbers(F), path_algebra_An(F, 3)):
                t0 = time.perf_counter()
                assert validate_dg_category(A).passed, (A.name, F)
                rep = validate_dg_category(inject_leibniz_violation(A))
                bad = [f for f in rep.failures() if f.name == "leibniz"]
                assert bad and bad[0].counterexample["indices"] is not None
                if time.perf_counter() - t0 >= 1.0:
                    slow.append((A.name, str(F)))
                count += 1
        assert not slow, f"over 1 s: {slow}"
        info["detail"] = f"{count} categories"


def test_criterion_02_hull_soundness():
    with criterion(2, "tw_hom d^2 = 0 and cone(id) H0-zero on 100 random dual-number complexes", limit=30) as info:
        A = dual_numbers(QQ)
        H = PretriangulatedHull(A)
        rng = random.Random(2024)
        sizes = []
        for _ in range(100):
            T = random_twisted(H, A.objects, rng, max_entries=4, shift_range=(-2, 2))
            assert len(T) <= 4 and all(-2 <= r <= 2 for r in T.shifts)
            assert H.validate_twisted(T).passed
            C = H.hom(T, T)
            for n in C.degrees:
                assert (C.differential(n + 1) @ C.differential(n)).is_zero()
            cone = H.cone(H.identity(T)).cone
            ok, w = H.is_h0_invertible(H.zero(cone, H.direct_sum(), 0))
            assert ok and w.verify(H)
            assert H.null_homotopy(H.identity(cone)) is not None
            sizes.append(len(T))
        info["detail"] = f"entries {min(sizes)}..{max(sizes)}"


def _commutant_dim(F, C):
    """dim {X : XC = CX} via the Kronecker form (I (x) C - C^T (x) I)."""
    n = C.nrows
    I = Matrix.identity(F, n)
    return n * n - rank(I.kron(C) - C.T.kron(I))


def test_criterion_03_base_change_of_point():
    with criterion(3, "End p*(pt) has K-dimension 2 over Q(sqrt2) and F4/F2") as info:
        dims = []
        for K, L in PAIRS:
            H = PretriangulatedHull(point(K))
            s = p_star(H, L, H.psi("pt"))
            got = hom_subcomplex(H, s, s).complex.dim(0)
            oracle = _commutant_dim(K, regular_representation(L.gen))
            assert got == oracle == 2
            dims.append(got)
        info["detail"] = f"dims {dims}"


def _random_structure(H, L, objs, rng):
    T = random_twisted(H, objs, rng, max_entries=2, shift_range=(-1, 1))
    s = p_star(H, L, T)
    if rng.random() < 0.5:
        G = automorphism_group(L)
        s = galois_act(H, rng.choice(list(G)), s)
    return s


def test_criterion_04_adjunction():
    with criterion(4, "adjunction bijection and naturality on 50 random pairs", limit=30) as info:
        rng = random.Random(4)
        cats = []
        for K, L in PAIRS:
            for A in (point(K), matrix_algebra(K, 2), dual_numbers(K), path_algebra_An(K, 3)):
                cats.append((A, L))
        nonzero = 0
        for trial in range(50):
            A, L = cats[trial % len(cats)]
            H = PretriangulatedHull(A)
            BL = BaseChangeCategory(H, L)
            C = random_twisted(H, A.objects, rng, max_entries=2, shift_range=(-1, 1))
            Cp = random_twisted(H, A.objects, rng, max_entries=2, shift_range=(-1, 1))
            t = _random_structure(H, L, A.objects, rng)
            tp = _random_structure(H, L, A.objects, rng)
            n = rng.randint(-1, 1)
            u = random_morphism(H, Cp, C, 0, rng)
            v = random_morphism(BL, t, tp, 0, rng)
            beta = random_morphism(BL, p_star(H, L, C), t, n, rng)
            rep = adjunction_check(BL, C, t, naturality=[(u, v, beta)])
            assert rep.passed, (A.name, rep.first_failure())
            nonzero += any(x[0] for x in rep.payload["dimensions"].values())
        info["detail"] = f"{nonzero}/50 with nonzero hom"


def test_criterion_05_projection_formula():
    with criterion(5, "projection formula with explicit invertible intertwiner") as info:
        cases = 0
        for K, L in PAIRS:
            H = PretriangulatedHull(point(K))
            BL = BaseChangeCategory(H, L)
            s = p_star(H, L, H.psi("pt"))
            for E in (s, structure_sum(H, [s, structure_shift(H, s, 1)])):
                rep = projection_formula_check(BL, E)
                assert rep.passed
                iso, inv = rep.payload["iso"], rep.payload["inverse"]
                assert BL.compose(inv, iso) == BL.identity(iso.source)
                assert BL.compose(iso, inv) == BL.identity(iso.target)
                cases += 1
        info["detail"] = f"{cases} cases"


def test_criterion_06_galois_descent():
    with criterion(6, "descent of 20 random equivariant objects, matrix algebra over F4/F2") as info:
        rng = random.Random(6)
        H = PretriangulatedHull(matrix_algebra(GF(2), 2))
        BL = BaseChangeCategory(H, F4)
        G = automorphism_group(F4)
        sizes = []
        for _ in range(20):
            k = rng.randint(1, 3)
            N = TwistedComplex(tuple(("M", rng.randint(-1, 1)) for _ in range(k)))
            s, lambdas = random_equivariant_object(BL, G, N, rng)
            res = descend(BL, s, lambdas, G)
            pN = p_star(H, F4, res.descended)
            assert res.iso.source == pN and res.iso.target == s
            assert BL.compose(res.inverse, res.iso) == BL.identity(pN)
            assert BL.compose(res.iso, res.inverse) == BL.identity(s)
            assert sorted(res.descended.shifts) == sorted(N.shifts)
            sizes.append(len(N))
        info["detail"] = f"20 objects, {sum(sizes)} entries"


def _star_oracle(K, C):
    """Premise and conclusion dimensions on End(pt^2) = Mat_2(K) with d = 0:
    the premise is all of Mat_2, the conclusion is the commutant of C."""
    return 4, _commutant_dim(K, C)


def test_criterion_07_star_condition():
    with criterion(7, "condition (*) fails for p*(pt) (4 vs 2), holds when L = K") as info:
        for K, L in PAIRS:
            H = PretriangulatedHull(point(K))
            s = p_star(H, L, H.psi("pt"))
            rep = star_condition_check(H, s, s)
            assert not rep.passed
            d = rep.payload["dimensions"]["0"]
            assert (d["premise"], d["conclusion"]) == _star_oracle(K, regular_representation(L.gen)) == (4, 2)
            KK = trivial_extension(K)
            for A in (point(K), dual_numbers(K), path_algebra_An(K, 2)):
                HK = PretriangulatedHull(A)
                objs = [p_star(HK, KK, HK.psi(X)) for X in A.objects]
                objs.append(p_star(HK, KK, HK.direct_sum(HK.psi(A.objects[0]), HK.shift(HK.psi(A.objects[-1]), 1))))
                for a in objs:
                    for b in objs:
                        assert star_condition_check(HK, a, b).passed
        info["detail"] = "premise 4, conclusion 2"


def _dimension_cases(K, L):
    out = []
    B = BaseChangeHull(point(K), L)
    H = B.H_A
    rng = random.Random(8)
    out.append((B, H.psi("pt"), [random_twisted(H, ["pt"], rng) for _ in range(10)]))
    A = path_algebra_An(K, 2)
    B = BaseChangeHull(A, L)
    H = B.H_A
    a = H.psi_morphism(A.basis("1", "2", 0)[0])
    E = H.direct_sum(H.psi("1"), H.psi("2"), H.cone(a).cone)
    objs = [H.psi("1"), H.shift(H.psi("2"), 1), H.cone(a).cone]
    objs += [random_twisted(H, A.objects, rng, max_entries=3) for _ in range(5)]
    out.append((B, E, objs))
    return out


@functools.lru_cache(maxsize=None)
def _dimension_run():
    """Bounds before and after base change plus transports; returns the
    number of transports and every emitted witness as JSON."""
    transported, emitted = 0, []
    for K, L in PAIRS:
        for B, E, objs in _dimension_cases(K, L):
            H = B.H_A
            before = dimension_upper_bound(H, E, objs)
            after = dimension_upper_bound(B.H_L, B.p_star(E), [B.p_star(M) for M in objs])
            assert isinstance(before, DimensionBound) and before.level == 1 and before.dimension_bound == 0
            assert isinstance(after, DimensionBound) and after.level == 1 and after.dimension_bound == 0
            codec_k = HullCodec(B.A, H)
            codec_l = BaseChangeCodec(B.A, L, B)
            for W in before.witnesses:
                emitted.append(witness_to_json(codec_k, W))
            for M, W in zip(objs, after.witnesses):
                emitted.append(witness_to_json(codec_l, W))
                Wk = galois_transport_witness(B, W, E, M)
                assert Wk.target == H.direct_sum(*([M] * L.degree))
                assert Wk.level == 1
                assert verify_generation_witness(H, Wk).passed
                emitted.append(witness_to_json(codec_k, Wk))
                transported += 1
    return transported, emitted


def test_criterion_08_dimension_invariance():
    with criterion(8, "dimension bound 0 before and after base change; transported witnesses verify", limit=120) as info:
        transported, _ = _dimension_run()
        info["detail"] = f"{transported} transports"


def _scalar_paths(node, path=()):
    """Paths to every scalar string inside morphism data of a witness body."""
    if isinstance(node, dict):
        for k in sorted(node):
            if k in ("target", "complement"):
                continue
            yield from _scalar_paths(node[k], path + (k,))
    elif isinstance(node, list):
        if node and all(isinstance(x, str) for x in node):
            for i in range(len(node)):
                yield path + (i,)
        else:
            for i, x in enumerate(node):
                yield from _scalar_paths(x, path + (i,))


def _mutate(d, rng):
    paths = list(_scalar_paths(d["witness"]))
    if not paths:
        return None
    p = rng.choice(paths)
    out = json.loads(json.dumps(d))
    node = out["witness"]
    for k in p[:-1]:
        node = node[k]
    node[p[-1]] = "1" if node[p[-1]] == "0" else "0"
    return out


def _verify_subprocess(files, *flags):
    r = subprocess.run(
        [sys.executable, "-m", "scalext.cli", "verify-witness", "--json", *flags, *files],
        capture_output=True, text=True, cwd=ROOT,
    )
    assert r.returncode in (0, 1), r.stderr
    return json.loads(r.stdout)["results"]


def test_criterion_09_witness_soundness(tmp_path):
    with criterion(9, "fresh-process re-verification; one-entry mutations rejected") as info:
        ws = list(_dimension_run()[1])
        A = dual_numbers(QQ)
        H = PretriangulatedHull(A)
        eps = H.psi_morphism(A.basis("pt", "pt", 0)[1])
        codec = HullCodec(A, H)
        ws.append(witness_to_json(codec, search_generation(H, H.psi("pt"), H.cone(eps).cone, 2)))
        B = BaseChangeHull(A, QS2)
        Hb = B.H_A
        M = Hb.cone(Hb.psi_morphism(A.basis("pt", "pt", 0)[1])).cone
        W = search_generation(B.H_L, B.p_star(Hb.psi("pt")), B.p_star(M), 2)
        ws.append(witness_to_json(BaseChangeCodec(A, QS2, B), W))
        ws.append(witness_to_json(HullCodec(A, Hb), galois_transport_witness(B, W, Hb.psi("pt"), M)))
        good = []
        for i, d in enumerate(ws):
            p = tmp_path / f"w{i}.json"
            p.write_text(dumps(d))
            good.append(str(p))
        res = _verify_subprocess(good)
        accepted = sum(r["pass"] for r in res)
        assert accepted == len(good), [r for r in res if not r["pass"]][:3]
        rng = random.Random(9)
        bad = []
        for i, d in enumerate(ws):
            m = _mutate(d, rng)
            if m is None:
                continue
            p = tmp_path / f"m{i}.json"
            p.write_text(dumps(m))
            bad.append(str(p))
        res = _verify_subprocess(bad)
        rejected = sum(not r["pass"] for r in res)
        math_only = sum(not r["pass"] for r in _verify_subprocess(bad, "--no-digest"))
        info["detail"] = (
            f"{accepted}/{len(good)} accepted; mutations rejected {rejected}/{len(bad)}, "
            f"by mathematics alone {math_only}/{len(bad)}"
        )
        assert rejected == len(bad)


def _cli_bytes(*argv):
    r = subprocess.run([sys.executable, "-m", "scalext.cli", *argv], capture_output=True, cwd=ROOT)
    return r.returncode, r.stdout


def test_criterion_10_determinism(tmp_path):
    with criterion(10, "identical workspace and budgets give byte-identical JSON") as info:
        runs = 0
        for name, extra in (
            ("a2.json", []),
            ("sqrt2.json", []),
            ("f4.json", ["--seed", "5"]),
            ("dual_numbers.json", ["--budget-nodes", "50"]),
            ("examples.json", []),
        ):
            argv = ["run", "--workspace", os.path.join("workspaces", name), "--json", *extra]
            c1, o1 = _cli_bytes(*argv, "--out", str(tmp_path / f"{name}.1"))
            c2, o2 = _cli_bytes(*argv, "--out", str(tmp_path / f"{name}.2"))
            assert c1 == c2 and o1 == o2 and o1
            d1, d2 = tmp_path / f"{name}.1", tmp_path / f"{name}.2"
            if d1.exists():
                f1 = sorted(p.name for p in d1.iterdir())
                assert f1 == sorted(p.name for p in d2.iterdir())
                for f in f1:
                    assert (d1 / f).read_bytes() == (d2 / f).read_bytes()
            runs += 1
        info["detail"] = f"{runs} workspaces"

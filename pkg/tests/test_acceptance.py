"""Acceptance criteria, one test per criterion, each printing a verdict
line. Tolerances (counts, time budgets, zero-failure demands) are pinned
here and nowhere else."""

import itertools
import random
import time

from eagerpi import lam as L
from eagerpi.eager import step_all, trace
from eagerpi.equivalence import (Prefix, bisim_eager,
                                 check_loose_completeness,
                                 check_loose_soundness,
                                 check_success_sensitivity, nd_precongruence,
                                 prefix_compatible)
from eagerpi.gen import generate_process, random_type
from eagerpi.lamtypes import check_wf, check_wt
from eagerpi.names import NameSupply
from eagerpi.process import (NDChoice, Par, Restrict, canonicalize, is_inert,
                             scope_normalize, scope_rewrites,
                             struct_congruent)
from eagerpi.sessiontypes import dual
from eagerpi.translate import Translator, check_translation_preservation
from eagerpi.typecheck import typecheck


def verdict(n, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {n}: {tag} {detail}")
    assert ok, f"criterion {n}: {detail}"


def _translate(term):
    tr = Translator(NameSupply(1))
    return scope_normalize(tr.term(term, tr.supply.fresh("u")))


def test_criterion_1_movie_server(movie):
    t0 = time.time()
    comp = movie.defs["Composition"][0]
    steps = step_all(comp)
    targets = [movie.defs[f"Target{i}"][0] for i in (1, 2, 3)]
    matched = all(any(struct_congruent(st.target, t) for st in steps)
                  for t in targets)
    elapsed = time.time() - t0
    verdict(1, len(steps) == 3 and matched and elapsed < 1.0,
            f"3 reducts matching the listed targets in {elapsed:.2f}s")


def test_criterion_2_lambda_example(ex32):
    t0 = time.time()
    m0 = ex32.defs["M0"][0]
    s1 = L.step_all(m0)
    ok = [tag for tag, _ in s1] == ["beta"]
    s2 = L.step_all(s1[0][1])
    ok = ok and [tag for tag, _ in s2] == ["ex-sub"]
    m = s2[0][1]
    ok = ok and L.lam_alpha_equal(m, ex32.defs["M"][0])
    reducts = L.step_all(m)
    expected = [ex32.defs[n][0] for n in ("N1", "N2", "N3")]
    ok = ok and len(reducts) == 3 and all(
        any(L.lam_alpha_equal(t, e) for _, t in reducts) for e in expected)
    elapsed = time.time() - t0
    verdict(2, ok and elapsed < 1.0,
            f"two-step prefix and exactly the three fetches in {elapsed:.2f}s")


def test_criterion_3_commitment_tree(ex32):
    t0 = time.time()
    m = ex32.defs["M"][0]
    assert isinstance(m, L.UnrSub)
    core = m.body  # the empty unrestricted wrapper is omitted, as displayed
    base = _translate(core)
    tree = trace(base, 2)
    paths = tree.maximal_paths()
    leaves = tree.at_depth(2)
    targets = [_translate(n) for _, n in L.step_all(core)]
    hits = []
    for node in leaves:
        match = [i for i, t in enumerate(targets)
                 if nd_precongruence(t, node.process)]
        hits.append(tuple(match))
    per_target = [sum(1 for h in hits if i in h) for i in range(3)]
    elapsed = time.time() - t0
    ok = (len(paths) == 6 and len(leaves) == 6
          and all(len(h) == 1 for h in hits)
          and per_target == [2, 2, 2]
          and elapsed < 60.0)
    verdict(3, ok,
            f"6 commitment paths, terminals matched 2-2-2 in {elapsed:.1f}s")


def test_criterion_4_vending_machines(vm):
    t0 = time.time()
    vm1, vm2 = vm.defs["VM1"][0], vm.defs["VM2"][0]
    typed = typecheck(vm1, {}) == {} and typecheck(vm2, {}) == {}
    res = bisim_eager(vm1, vm2, depth=12)
    elapsed = time.time() - t0
    ok = typed and res.verdict == "distinguished" and bool(res.witness) \
        and elapsed < 10.0
    verdict(4, ok,
            f"typecheck + distinguished with a witness in {elapsed:.2f}s")


def _closed_corpus(generated, movie, vm):
    procs = [generated.defs[n][0] for n in generated.order]
    procs += [movie.defs[n][0] for n in ("Composition", "Full", "Target1",
                                         "Target2", "Target3")]
    procs += [vm.defs[n][0] for n in ("VM1", "VM2")]
    return procs


def test_criterion_5_type_preservation(generated, movie, vm):
    procs = _closed_corpus(generated, movie, vm)
    failures = rewrites = steps = 0
    for p in procs:
        for q in scope_rewrites(canonicalize(p)):
            rewrites += 1
            try:
                typecheck(q, {})
            except Exception:
                failures += 1
        for st in step_all(p):
            steps += 1
            try:
                typecheck(st.target, {})
            except Exception:
                failures += 1
    verdict(5, len(procs) >= 100 and failures == 0,
            f"{len(procs)} processes, {rewrites} rewrites, {steps} steps, "
            f"{failures} retyping failures")


def test_criterion_6_progress(generated, movie, vm):
    procs = _closed_corpus(generated, movie, vm)
    failures = sum(1 for p in procs
                   if not is_inert(p) and not step_all(p))
    verdict(6, failures == 0,
            f"{len(procs)} processes, {failures} without a step")


def test_criterion_7_subject_reduction_expansion(ex32, corr):
    sr_failures = se_failures = 0
    for src in (ex32, corr):
        for kind, name, theta, gamma, tau in src.judgments:
            m = src.defs[name][0]
            reached, _ = L.reachable(m, 16)
            if kind == "wf":
                for m2 in reached:
                    try:
                        check_wf(theta, gamma, m2, tau)
                    except Exception:
                        sr_failures += 1
            else:
                for m2 in reached:
                    for pred in L.expansions(m2):
                        if not any(L.lam_alpha_equal(t, m2)
                                   for _, t in L.step_all(pred)):
                            se_failures += 1
                        try:
                            check_wt(theta, gamma, pred, tau)
                        except Exception:
                            se_failures += 1
    verdict(7, sr_failures == 0 and se_failures == 0,
            f"SR failures {sr_failures}, SE failures {se_failures}")


def test_criterion_8_translation_preservation(ex32, corr):
    failures = total = 0
    for src in (ex32, corr):
        for kind, name, theta, gamma, tau in src.judgments:
            if kind != "wf":
                continue
            total += 1
            try:
                check_translation_preservation(theta, gamma,
                                               src.defs[name][0], tau)
            except Exception:
                failures += 1
    verdict(8, total >= 10 and failures == 0,
            f"{total} judgments, {failures} failures")


def test_criterion_9_correspondence(ex32, corr):
    bound = 30
    harness = [("M", ex32.defs["M"][0])]
    closed = ["T01", "T02", "T03", "T04", "T06", "T08", "T10", "T11",
              "T12", "T15", "T16", "T17", "T18"]
    harness += [(n, corr.defs[n][0]) for n in closed]
    failures = []
    for name, term in harness:
        comp = check_loose_completeness(term, bound)
        snd = check_loose_soundness(term, bound)
        sens = check_success_sensitivity(term, bound)
        if not (comp["ok"] and snd["ok"] and sens["agrees"]):
            failures.append(name)
    verdict(9, len(closed) >= 10 and not failures,
            f"{len(harness)} terms at bound {bound}, failures: {failures}")


def test_criterion_10_randomized_rule_suites():
    rng = random.Random(2024)
    supply = NameSupply(1)
    dual_bad = compat_bad = prec_bad = 0
    for _ in range(1000):
        t = random_type(rng, 3)
        if dual(dual(t)) != t:
            dual_bad += 1
    names = [supply.fresh(c) for c in "abc"]
    kinds = ("out", "in", "sel", "bra", "close", "wait", "cli", "srv",
             "some", "none", "exp")
    for _ in range(1000):
        a = Prefix(rng.choice(kinds), rng.choice(names),
                   ("l",) if rng.random() < 0.3 else ())
        b = Prefix(rng.choice(kinds), rng.choice(names),
                   ("l",) if rng.random() < 0.3 else ())
        okref = prefix_compatible(a, a)
        oksym = prefix_compatible(a, b) == prefix_compatible(b, a)
        okdef = (not prefix_compatible(a, b)
                 or (a.kind == b.kind and a.subject == b.subject))
        if not (okref and oksym and okdef):
            compat_bad += 1
    for i in range(1000):
        p = generate_process(rng, supply)
        q = generate_process(rng, supply)
        w = supply.fresh("w")
        checks = [nd_precongruence(p, p),
                  nd_precongruence(NDChoice(p, q), p),
                  nd_precongruence(NDChoice(p, q), q),
                  nd_precongruence(Par(NDChoice(p, q), q), Par(p, q)),
                  nd_precongruence(Restrict(w, NDChoice(p, q), q),
                                   Restrict(w, p, q))]
        if not all(checks):
            prec_bad += 1
    verdict(10, dual_bad == 0 and compat_bad == 0 and prec_bad == 0,
            f"duality {dual_bad}, compatibility {compat_bad}, "
            f"precongruence {prec_bad} failures over 1000 cases each")

"""The resource lambda calculus: terms, bags, head forms, and reduction.

Bags have a linear part (a multiset of terms, each consumed exactly once)
and an unrestricted part (an ordered sequence of slots copied on use; a
slot is either a term or empty, and indexing past the end reads as empty).
Reduction is closed under evaluation contexts: the function position of an
application, the subject of both explicit substitutions, and the subject
of a sharing, but never under an abstraction, inside a bag, or under an
intermediate substitution.

Variables reuse the unique-id Name type; binders are freshened whenever a
rule copies a term, so fetching never captures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .names import Name, NameSupply, fresh_name


class Term:
    __slots__ = ()


@dataclass(eq=False)
class LinVar(Term):
    var: Name


@dataclass(eq=False)
class UnrVar(Term):
    var: Name
    index: int  # 1-based position in the unrestricted bag


@dataclass(eq=False)
class Abs(Term):
    var: Name
    body: Term  # well-formed terms share the parameter at the top


@dataclass(eq=False)
class Bag:
    linear: tuple       # terms
    unr: tuple          # slots: Term or None (empty)


@dataclass(eq=False)
class App(Term):
    fn: Term
    bag: Bag


@dataclass(eq=False)
class Fail(Term):
    vars: frozenset  # dangling resources


@dataclass(eq=False)
class Sharing(Term):
    body: Term
    aliases: tuple  # each occurs exactly once in body
    var: Name


@dataclass(eq=False)
class InterSub(Term):
    body: Term
    bag: Bag
    var: Name


@dataclass(eq=False)
class LinSub(Term):
    body: Term
    items: tuple  # linear bag contents
    vars: tuple


@dataclass(eq=False)
class UnrSub(Term):
    body: Term
    slots: tuple
    var: Name


@dataclass(eq=False)
class SuccessT(Term):
    pass


def empty_bag() -> Bag:
    return Bag((), (None,))


def bag(*linear, unr=(None,)) -> Bag:
    return Bag(tuple(linear), tuple(unr))


def slot_at(slots: tuple, i: int):
    """1-based unrestricted lookup; past-the-end positions are empty."""
    if 1 <= i <= len(slots):
        return slots[i - 1]
    return None


# ---------------------------------------------------------------------------
# Variables

def free_vars(m) -> set:
    out = set()
    _fv(m, out, frozenset())
    return out


def _fv(m, out, bound):
    match m:
        case LinVar(v) | UnrVar(v, _):
            if v not in bound:
                out.add(v)
        case SuccessT():
            pass
        case Fail(vs):
            out.update(v for v in vs if v not in bound)
        case Abs(v, b):
            _fv(b, out, bound | {v})
        case App(f, bg):
            _fv(f, out, bound)
            _fv_bag(bg, out, bound)
        case Sharing(b, als, v):
            _fv(b, out, bound | set(als))
            if v not in bound:
                out.add(v)
        case InterSub(b, bg, v):
            _fv(b, out, bound | {v})
            _fv_bag(bg, out, bound)
        case LinSub(b, items, vs):
            _fv(b, out, bound | set(vs))
            for it in items:
                _fv(it, out, bound)
        case UnrSub(b, slots, v):
            _fv(b, out, bound | {v})
            for s in slots:
                if s is not None:
                    _fv(s, out, bound)
        case Bag():
            _fv_bag(m, out, bound)
        case _:
            raise TypeError(f"not a term: {m!r}")


def _fv_bag(bg, out, bound):
    for it in bg.linear:
        _fv(it, out, bound)
    for s in bg.unr:
        if s is not None:
            _fv(s, out, bound)


def llfv(m) -> frozenset:
    """Free variables with linear occurrences (unrestricted occurrences
    x[i] do not count)."""
    out = set()
    _llfv(m, out, frozenset())
    return frozenset(out)


def _llfv(m, out, bound):
    match m:
        case LinVar(v):
            if v not in bound:
                out.add(v)
        case UnrVar(_, _) | SuccessT():
            pass
        case Fail(vs):
            out.update(v for v in vs if v not in bound)
        case Abs(v, b):
            _llfv(b, out, bound | {v})
        case App(f, bg):
            _llfv(f, out, bound)
            _llfv_bag(bg, out, bound)
        case Sharing(b, als, v):
            _llfv(b, out, bound | set(als))
            if v not in bound:
                out.add(v)
        case InterSub(b, bg, v):
            _llfv(b, out, bound | {v})
            _llfv_bag(bg, out, bound)
        case LinSub(b, items, vs):
            _llfv(b, out, bound | set(vs))
            for it in items:
                _llfv(it, out, bound)
        case UnrSub(b, slots, v):
            _llfv(b, out, bound | {v})
            for s in slots:
                if s is not None:
                    _llfv(s, out, bound)
        case Bag():
            _llfv_bag(m, out, bound)
        case _:
            raise TypeError(f"not a term: {m!r}")


def llfv_bag(bg) -> frozenset:
    out = set()
    _llfv_bag(bg, out, frozenset())
    return frozenset(out)


def _llfv_bag(bg, out, bound):
    for it in bg.linear:
        _llfv(it, out, bound)
    for s in bg.unr:
        if s is not None:
            _llfv(s, out, bound)


def llfv_items(items) -> frozenset:
    out = set()
    for it in items:
        _llfv(it, out, frozenset())
    return frozenset(out)


def freshen_term(m, supply: Optional[NameSupply] = None):
    """Rename every binder (abstraction parameters, aliases, substitution
    variables) to fresh names; used when an unrestricted fetch copies."""
    fresh = supply.variant if supply else (lambda n: fresh_name(n.display))

    def vn(v, env):
        return env.get(v, v)

    def go(m, env):
        match m:
            case LinVar(v):
                return LinVar(vn(v, env))
            case UnrVar(v, i):
                return UnrVar(vn(v, env), i)
            case SuccessT():
                return m
            case Fail(vs):
                return Fail(frozenset(vn(v, env) for v in vs))
            case Abs(v, b):
                v2 = fresh(v)
                return Abs(v2, go(b, {**env, v: v2}))
            case App(f, bg):
                return App(go(f, env), gobag(bg, env))
            case Sharing(b, als, v):
                als2 = tuple(fresh(a) for a in als)
                env2 = {**env, **dict(zip(als, als2))}
                return Sharing(go(b, env2), als2, vn(v, env))
            case InterSub(b, bg, v):
                v2 = fresh(v)
                return InterSub(go(b, {**env, v: v2}), gobag(bg, env), v2)
            case LinSub(b, items, vs):
                vs2 = tuple(fresh(v) for v in vs)
                env2 = {**env, **dict(zip(vs, vs2))}
                return LinSub(go(b, env2), tuple(go(i, env) for i in items), vs2)
            case UnrSub(b, slots, v):
                v2 = fresh(v)
                return UnrSub(go(b, {**env, v: v2}),
                              tuple(None if s is None else go(s, env) for s in slots),
                              v2)
        raise TypeError(f"not a term: {m!r}")

    def gobag(bg, env):
        return Bag(tuple(go(i, env) for i in bg.linear),
                   tuple(None if s is None else go(s, env) for s in bg.unr))

    return go(m, {})


def rename_var(m, new: Name, old: Name):
    """Rename free occurrences of a variable, including its unrestricted
    occurrences and its appearances as a sharing variable or in a failure
    set; shadowing binders stop the renaming."""
    if new == old:
        return m
    match m:
        case LinVar(v):
            return LinVar(new) if v == old else m
        case UnrVar(v, i):
            return UnrVar(new, i) if v == old else m
        case SuccessT():
            return m
        case Fail(vs):
            if old in vs:
                return Fail((vs - {old}) | {new})
            return m
        case Abs(v, b):
            if v == old:
                return m
            return Abs(v, rename_var(b, new, old))
        case App(f, bg):
            return App(rename_var(f, new, old), _rename_bag(bg, new, old))
        case Sharing(b, als, v):
            v2 = new if v == old else v
            b2 = b if old in als else rename_var(b, new, old)
            return Sharing(b2, als, v2)
        case InterSub(b, bg, v):
            b2 = b if v == old else rename_var(b, new, old)
            return InterSub(b2, _rename_bag(bg, new, old), v)
        case LinSub(b, items, vs):
            b2 = b if old in vs else rename_var(b, new, old)
            return LinSub(b2, tuple(rename_var(i, new, old) for i in items), vs)
        case UnrSub(b, slots, v):
            b2 = b if v == old else rename_var(b, new, old)
            return UnrSub(b2, tuple(None if s is None else rename_var(s, new, old)
                                    for s in slots), v)
    raise TypeError(f"not a term: {m!r}")


def _rename_bag(bg, new, old):
    return Bag(tuple(rename_var(i, new, old) for i in bg.linear),
               tuple(None if s is None else rename_var(s, new, old)
                     for s in bg.unr))


# ---------------------------------------------------------------------------
# Alpha-invariant keys

def lam_key(m, env=None, depth=0):
    if env is None:
        env = {}

    def nk(v):
        lvl = env.get(v)
        return ("b", lvl) if lvl is not None else ("f", v.display)

    match m:
        case LinVar(v):
            return ("lv", nk(v))
        case UnrVar(v, i):
            return ("uv", nk(v), i)
        case SuccessT():
            return ("ok",)
        case Fail(vs):
            return ("fail", tuple(sorted(nk(v) for v in vs)))
        case Abs(v, b):
            return ("abs", lam_key(b, {**env, v: (depth, 0)}, depth + 1))
        case App(f, bg):
            return ("app", lam_key(f, env, depth), _bag_key(bg, env, depth))
        case Sharing(b, als, v):
            env2 = {**env, **{a: (depth, i) for i, a in enumerate(als)}}
            return ("shar", nk(v), len(als), lam_key(b, env2, depth + 1))
        case InterSub(b, bg, v):
            return ("isub", lam_key(b, {**env, v: (depth, 0)}, depth + 1),
                    _bag_key(bg, env, depth))
        case LinSub(b, items, vs):
            env2 = {**env, **{x: (depth, i) for i, x in enumerate(vs)}}
            return ("lsub", len(vs), lam_key(b, env2, depth + 1),
                    tuple(lam_key(i, env, depth) for i in items))
        case UnrSub(b, slots, v):
            return ("usub", lam_key(b, {**env, v: (depth, 0)}, depth + 1),
                    tuple("e" if s is None else lam_key(s, env, depth)
                          for s in slots))
    raise TypeError(f"not a term: {m!r}")


def _bag_key(bg, env, depth):
    return ("bag", tuple(lam_key(i, env, depth) for i in bg.linear),
            tuple("e" if s is None else lam_key(s, env, depth) for s in bg.unr))


def lam_alpha_equal(m, n) -> bool:
    return lam_key(m) == lam_key(n)


# ---------------------------------------------------------------------------
# Head and head substitution

def head(m):
    """The head form: the spine end through applications, both explicit
    substitutions, and sharing (redirected to the sharing variable when the
    inner head is a shared alias). An intermediate substitution is its own
    head."""
    match m:
        case LinVar(_) | UnrVar(_, _) | Abs(_, _) | Fail(_) | SuccessT():
            return m
        case App(f, _):
            return head(f)
        case InterSub(_, _, _):
            return m
        case LinSub(b, _, _) | UnrSub(b, _, _):
            return head(b)
        case Sharing(b, als, v):
            h = head(b)
            if isinstance(h, LinVar) and h.var in als:
                return LinVar(v)
            return h
    raise TypeError(f"not a term: {m!r}")


class HeadMismatch(Exception):
    pass


def head_substitute(m, repl, occ):
    """Replace exactly the head occurrence `occ` (a LinVar or UnrVar node
    value) with `repl`."""
    match m:
        case LinVar(v):
            if isinstance(occ, LinVar) and v == occ.var:
                return repl
            raise HeadMismatch(m)
        case UnrVar(v, i):
            if isinstance(occ, UnrVar) and v == occ.var and i == occ.index:
                return repl
            raise HeadMismatch(m)
        case App(f, bg):
            return App(head_substitute(f, repl, occ), bg)
        case LinSub(b, items, vs):
            return LinSub(head_substitute(b, repl, occ), items, vs)
        case UnrSub(b, slots, v):
            return UnrSub(head_substitute(b, repl, occ), slots, v)
        case Sharing(b, als, v):
            return Sharing(head_substitute(b, repl, occ), als, v)
    raise HeadMismatch(m)


# ---------------------------------------------------------------------------
# Reduction

def _local_steps(m):
    out = []
    match m:
        case App(Abs(_, _) as f, bg):
            out.append(("beta", InterSub(f.body, bg, f.var)))
        case App(Fail(vs), bg):
            out.append(("cons1", Fail(vs | llfv_bag(bg))))
        case InterSub(Sharing(sb, als, sv), bg, v) if sv == v:
            size_ok = len(bg.linear) == len(als)
            if isinstance(sb, Fail):
                if size_ok:
                    newset = (sb.vars - set(als)) | llfv_items(bg.linear)
                    out.append(("cons2", Fail(frozenset(newset))))
                else:
                    newset = (llfv(sb) - set(als)) | llfv_items(bg.linear)
                    out.append(("fail-lin", Fail(frozenset(newset))))
            elif size_ok:
                out.append(("ex-sub",
                            UnrSub(LinSub(sb, bg.linear, als), bg.unr, v)))
            else:
                newset = (llfv(sb) - set(als)) | llfv_items(bg.linear)
                out.append(("fail-lin", Fail(frozenset(newset))))
        case LinSub(b, items, vs):
            if isinstance(b, Fail):
                if set(vs) <= b.vars:
                    newset = (b.vars - set(vs)) | llfv_items(items)
                    out.append(("cons3", Fail(frozenset(newset))))
            else:
                h = head(b)
                if isinstance(h, LinVar) and h.var in vs:
                    j = vs.index(h.var)
                    rest_vars = vs[:j] + vs[j + 1:]
                    for i, item in enumerate(items):
                        rest = items[:i] + items[i + 1:]
                        body2 = head_substitute(b, item, h)
                        out.append((f"fetch-lin:{i + 1}",
                                    LinSub(body2, rest, rest_vars)))
        case UnrSub(b, slots, v):
            if isinstance(b, Fail):
                out.append(("cons4", b))
            else:
                h = head(b)
                if isinstance(h, UnrVar) and h.var == v:
                    s = slot_at(slots, h.index)
                    if s is None:
                        body2 = head_substitute(b, Fail(frozenset()), h)
                        out.append(("fail-unr", UnrSub(body2, slots, v)))
                    else:
                        body2 = head_substitute(b, freshen_term(s), h)
                        out.append((f"fetch-unr:{h.index}",
                                    UnrSub(body2, slots, v)))
        case _:
            pass
    return out


def step_all(m) -> list:
    """All one-step reducts (rule tag, term), closed under the evaluation
    contexts, deduplicated up to alpha."""
    out = []
    seen = set()

    def emit(tag, t):
        key = (tag.split(":")[0], lam_key(t))
        if key not in seen:
            seen.add(key)
            out.append((tag, t))

    for tag, t in _local_steps(m):
        emit(tag, t)
    match m:
        case App(f, bg):
            for tag, t in step_all(f):
                emit(tag, App(t, bg))
        case LinSub(b, items, vs):
            for tag, t in step_all(b):
                emit(tag, LinSub(t, items, vs))
        case UnrSub(b, slots, v):
            for tag, t in step_all(b):
                emit(tag, UnrSub(t, slots, v))
        case Sharing(b, als, v):
            for tag, t in step_all(b):
                emit(tag, Sharing(t, als, v))
        case _:
            pass
    return out


def reachable(m, bound: int, max_states: int = 20000):
    """Terms reachable within `bound` steps, keyed by alpha class; returns
    (list of terms, truncated flag)."""
    seen = {lam_key(m): m}
    frontier = [m]
    truncated = False
    for _ in range(bound):
        if not frontier:
            break
        nxt = []
        for t in frontier:
            for _, u in step_all(t):
                k = lam_key(u)
                if k not in seen:
                    seen[k] = u
                    nxt.append(u)
            if len(seen) > max_states:
                truncated = True
                nxt = []
                break
        frontier = nxt
    if frontier:
        truncated = truncated or any(step_all(t) for t in frontier)
    return list(seen.values()), truncated


def succeeds(m, bound: int = 64):
    """True iff some reduction sequence within `bound` steps reaches a term
    whose head is the success constant; second component flags bound
    exhaustion while still undecided."""
    seen = {lam_key(m)}
    frontier = [m]
    for _ in range(bound + 1):
        for t in frontier:
            if isinstance(head(t), SuccessT):
                return True, False
        nxt = []
        for t in frontier:
            for _, u in step_all(t):
                k = lam_key(u)
                if k not in seen:
                    seen.add(k)
                    nxt.append(u)
        if not nxt:
            return False, False
        frontier = nxt
    return False, True


# ---------------------------------------------------------------------------
# Expansion oracle: invert the beta and substitution-splitting rules

def expansions(m, supply: Optional[NameSupply] = None):
    """Single-step predecessors of m obtained by inverting the beta rule
    (an intermediate substitution came from an application of an
    abstraction) and the substitution-splitting rule (a linear-over-
    unrestricted substitution pair came from an intermediate substitution
    over a sharing)."""
    preds = []

    def rebuild_here(t):
        out = []
        match t:
            case InterSub(b, bg, v):
                out.append(App(Abs(v, b), bg))
            case UnrSub(LinSub(b, items, vs), slots, v) \
                    if len(items) == len(vs) and not isinstance(b, Fail):
                sh = Sharing(b, vs, v)
                out.append(InterSub(sh, Bag(items, slots), v))
        return out

    def go(t, wrap):
        for cand in rebuild_here(t):
            preds.append(wrap(cand))
        match t:
            case App(f, bg):
                go(f, lambda r: wrap(App(r, bg)))
            case LinSub(b, items, vs):
                go(b, lambda r: wrap(LinSub(r, items, vs)))
            case UnrSub(b, slots, v):
                go(b, lambda r: wrap(UnrSub(r, slots, v)))
            case Sharing(b, als, v):
                go(b, lambda r: wrap(Sharing(r, als, v)))
            case _:
                pass

    go(m, lambda r: r)
    return preds

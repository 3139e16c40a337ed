"""Process syntax, free names, substitution, and structural congruence.

The grammar has one constructor per production: inaction, forwarder,
parallel, restriction-over-parallel (connect), non-deterministic choice,
output, input, select, branch, close, wait, client request, server,
availability (some/none), expectation, and the inert success constant OK.

Structural identity of processes is alpha-invariant: `term_key` serializes
a process with de Bruijn levels for bound names and display strings for
free names, and every set-like operation (canonical sorting, reduct
deduplication, state spaces) keys on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .names import Name, NameSupply, fresh_name


class Process:
    __slots__ = ()


@dataclass(eq=False)
class Inaction(Process):
    pass


@dataclass(eq=False)
class Success(Process):
    pass


@dataclass(eq=False)
class Forward(Process):
    x: Name
    y: Name


@dataclass(eq=False)
class Par(Process):
    left: Process
    right: Process


@dataclass(eq=False)
class Restrict(Process):
    x: Name
    left: Process
    right: Process


@dataclass(eq=False)
class NDChoice(Process):
    left: Process
    right: Process


@dataclass(eq=False)
class Output(Process):
    x: Name
    y: Name          # bound in both continuations
    payload: Process  # behavior on y
    cont: Process     # behavior on x


@dataclass(eq=False)
class Input(Process):
    x: Name
    y: Name
    cont: Process


@dataclass(eq=False)
class Select(Process):
    x: Name
    label: str
    cont: Process


@dataclass(eq=False)
class Branch(Process):
    x: Name
    branches: tuple  # ((label, Process), ...) labels distinct, non-empty


@dataclass(eq=False)
class Close(Process):
    x: Name


@dataclass(eq=False)
class Wait(Process):
    x: Name
    cont: Process


@dataclass(eq=False)
class Client(Process):
    x: Name
    y: Name
    cont: Process


@dataclass(eq=False)
class Server(Process):
    x: Name
    y: Name
    cont: Process


@dataclass(eq=False)
class SomeAvail(Process):
    x: Name
    cont: Process


@dataclass(eq=False)
class NoneAvail(Process):
    x: Name


@dataclass(eq=False)
class Expect(Process):
    x: Name
    deps: tuple  # names whose sessions are cancelled on failure
    cont: Process


PREFIXED = (Output, Input, Select, Branch, Close, Wait, Client, Server,
            SomeAvail, NoneAvail, Expect)


def branch_map(p: Branch) -> dict:
    return dict(p.branches)


def make_branch(x: Name, items) -> Branch:
    items = tuple(sorted(items, key=lambda kv: kv[0]))
    labels = [k for k, _ in items]
    if not labels or len(set(labels)) != len(labels):
        raise ValueError("branch labels must be non-empty and distinct")
    return Branch(x, items)


def par_all(parts) -> Process:
    """Right-fold a list of processes into a parallel composition."""
    parts = [p for p in parts]
    if not parts:
        return Inaction()
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = Par(p, acc)
    return acc


def sum_all(parts) -> Process:
    parts = [p for p in parts]
    if not parts:
        raise ValueError("empty non-deterministic sum")
    acc = parts[-1]
    for p in reversed(parts[:-1]):
        acc = NDChoice(p, acc)
    return acc


def par_parts(p: Process) -> list:
    if isinstance(p, Par):
        return par_parts(p.left) + par_parts(p.right)
    return [p]


def sum_parts(p: Process) -> list:
    if isinstance(p, NDChoice):
        return sum_parts(p.left) + sum_parts(p.right)
    return [p]


# ---------------------------------------------------------------------------
# Free names

def free_names(p: Process) -> set:
    """All free names of a process."""
    out = set()
    _fn(p, out, frozenset())
    return out


def _fn(p, out, bound):
    match p:
        case Inaction() | Success():
            pass
        case Forward(x, y):
            out.update(n for n in (x, y) if n not in bound)
        case Par(l, r) | NDChoice(l, r):
            _fn(l, out, bound)
            _fn(r, out, bound)
        case Restrict(x, l, r):
            b = bound | {x}
            _fn(l, out, b)
            _fn(r, out, b)
        case Output(x, y, pl, c):
            if x not in bound:
                out.add(x)
            b = bound | {y}
            _fn(pl, out, b)
            _fn(c, out, b)
        case Input(x, y, c) | Client(x, y, c) | Server(x, y, c):
            if x not in bound:
                out.add(x)
            _fn(c, out, bound | {y})
        case Select(x, _, c) | Wait(x, c) | SomeAvail(x, c):
            if x not in bound:
                out.add(x)
            _fn(c, out, bound)
        case Branch(x, brs):
            if x not in bound:
                out.add(x)
            for _, q in brs:
                _fn(q, out, bound)
        case Close(x) | NoneAvail(x):
            if x not in bound:
                out.add(x)
        case Expect(x, deps, c):
            if x not in bound:
                out.add(x)
            out.update(n for n in deps if n not in bound)
            _fn(c, out, bound)
        case _:
            raise TypeError(f"not a process: {p!r}")


def free_name_split(p: Process):
    """Free names partitioned as (all, linear, unrestricted).

    A free name is unrestricted when every occurrence is the subject of a
    server or client-request prefix; all other occurrences are linear.
    """
    linear: set = set()
    persistent: set = set()
    _fn_split(p, linear, persistent, frozenset())
    return linear | persistent, linear, persistent - linear


def _mark(n, bound, bucket):
    if n not in bound:
        bucket.add(n)


def _fn_split(p, lin, per, bound):
    match p:
        case Inaction() | Success():
            pass
        case Forward(x, y):
            _mark(x, bound, lin)
            _mark(y, bound, lin)
        case Par(l, r) | NDChoice(l, r):
            _fn_split(l, lin, per, bound)
            _fn_split(r, lin, per, bound)
        case Restrict(x, l, r):
            b = bound | {x}
            _fn_split(l, lin, per, b)
            _fn_split(r, lin, per, b)
        case Output(x, y, pl, c):
            _mark(x, bound, lin)
            b = bound | {y}
            _fn_split(pl, lin, per, b)
            _fn_split(c, lin, per, b)
        case Input(x, y, c):
            _mark(x, bound, lin)
            _fn_split(c, lin, per, bound | {y})
        case Client(x, y, c) | Server(x, y, c):
            _mark(x, bound, per)
            _fn_split(c, lin, per, bound | {y})
        case Select(x, _, c) | Wait(x, c) | SomeAvail(x, c):
            _mark(x, bound, lin)
            _fn_split(c, lin, per, bound)
        case Branch(x, brs):
            _mark(x, bound, lin)
            for _, q in brs:
                _fn_split(q, lin, per, bound)
        case Close(x) | NoneAvail(x):
            _mark(x, bound, lin)
        case Expect(x, deps, c):
            _mark(x, bound, lin)
            for n in deps:
                _mark(n, bound, lin)
            _fn_split(c, lin, per, bound)


# ---------------------------------------------------------------------------
# Substitution and binder freshening

def substitute(p: Process, new: Name, old: Name) -> Process:
    """Capture-avoiding substitution of `new` for free occurrences of `old`.

    Binder ids are globally unique, so capture cannot arise; shadowing is
    still respected defensively.
    """
    if new == old:
        return p
    return _subst(p, new, old)


def _sn(n, new, old):
    return new if n == old else n


def _subst(p, new, old):
    match p:
        case Inaction() | Success():
            return p
        case Forward(x, y):
            return Forward(_sn(x, new, old), _sn(y, new, old))
        case Par(l, r):
            return Par(_subst(l, new, old), _subst(r, new, old))
        case NDChoice(l, r):
            return NDChoice(_subst(l, new, old), _subst(r, new, old))
        case Restrict(x, l, r):
            if x == old:
                return p
            return Restrict(x, _subst(l, new, old), _subst(r, new, old))
        case Output(x, y, pl, c):
            x2 = _sn(x, new, old)
            if y == old:
                return Output(x2, y, pl, c)
            return Output(x2, y, _subst(pl, new, old), _subst(c, new, old))
        case Input(x, y, c):
            x2 = _sn(x, new, old)
            if y == old:
                return Input(x2, y, c)
            return Input(x2, y, _subst(c, new, old))
        case Client(x, y, c):
            x2 = _sn(x, new, old)
            if y == old:
                return Client(x2, y, c)
            return Client(x2, y, _subst(c, new, old))
        case Server(x, y, c):
            x2 = _sn(x, new, old)
            if y == old:
                return Server(x2, y, c)
            return Server(x2, y, _subst(c, new, old))
        case Select(x, lab, c):
            return Select(_sn(x, new, old), lab, _subst(c, new, old))
        case Branch(x, brs):
            return Branch(_sn(x, new, old),
                          tuple((k, _subst(q, new, old)) for k, q in brs))
        case Close(x):
            return Close(_sn(x, new, old))
        case Wait(x, c):
            return Wait(_sn(x, new, old), _subst(c, new, old))
        case SomeAvail(x, c):
            return SomeAvail(_sn(x, new, old), _subst(c, new, old))
        case NoneAvail(x):
            return NoneAvail(_sn(x, new, old))
        case Expect(x, deps, c):
            return Expect(_sn(x, new, old),
                          tuple(_sn(n, new, old) for n in deps),
                          _subst(c, new, old))
    raise TypeError(f"not a process: {p!r}")


def rename_free(p: Process, mapping: dict) -> Process:
    out = p
    for old, new in mapping.items():
        out = substitute(out, new, old)
    return out


def freshen_binders(p: Process, supply: Optional[NameSupply] = None) -> Process:
    """Rename every binder in `p` to a fresh name (used when a rule copies
    a subprocess, e.g. server replication)."""
    fresh = supply.variant if supply else (lambda n: fresh_name(n.display))

    def go(q, env):
        match q:
            case Inaction() | Success():
                return q
            case Forward(x, y):
                return Forward(env.get(x, x), env.get(y, y))
            case Par(l, r):
                return Par(go(l, env), go(r, env))
            case NDChoice(l, r):
                return NDChoice(go(l, env), go(r, env))
            case Restrict(x, l, r):
                x2 = fresh(x)
                env2 = {**env, x: x2}
                return Restrict(x2, go(l, env2), go(r, env2))
            case Output(x, y, pl, c):
                y2 = fresh(y)
                env2 = {**env, y: y2}
                return Output(env.get(x, x), y2, go(pl, env2), go(c, env2))
            case Input(x, y, c):
                y2 = fresh(y)
                return Input(env.get(x, x), y2, go(c, {**env, y: y2}))
            case Client(x, y, c):
                y2 = fresh(y)
                return Client(env.get(x, x), y2, go(c, {**env, y: y2}))
            case Server(x, y, c):
                y2 = fresh(y)
                return Server(env.get(x, x), y2, go(c, {**env, y: y2}))
            case Select(x, lab, c):
                return Select(env.get(x, x), lab, go(c, env))
            case Branch(x, brs):
                return Branch(env.get(x, x),
                              tuple((k, go(b, env)) for k, b in brs))
            case Close(x):
                return Close(env.get(x, x))
            case Wait(x, c):
                return Wait(env.get(x, x), go(c, env))
            case SomeAvail(x, c):
                return SomeAvail(env.get(x, x), go(c, env))
            case NoneAvail(x):
                return NoneAvail(env.get(x, x))
            case Expect(x, deps, c):
                return Expect(env.get(x, x),
                              tuple(env.get(n, n) for n in deps),
                              go(c, env))
        raise TypeError(f"not a process: {q!r}")

    return go(p, {})


# ---------------------------------------------------------------------------
# Alpha-invariant structural keys

def name_key(n: Name, env: dict):
    lvl = env.get(n)
    return ("b", lvl) if lvl is not None else ("f", n.display)


def term_key(p: Process, env: Optional[dict] = None, depth: int = 0):
    """Serialization of a process, invariant under alpha-renaming.

    Bound names appear as their binder's de Bruijn level, free names as
    their display string. Two processes are structurally equal (up to
    alpha) iff their keys are equal.
    """
    if env is None:
        env = {}
    match p:
        case Inaction():
            return ("0",)
        case Success():
            return ("ok",)
        case Forward(x, y):
            ks = sorted([name_key(x, env), name_key(y, env)])
            return ("fwd", ks[0], ks[1])
        case Par(_, _):
            return ("par", tuple(sorted(term_key(q, env, depth)
                                        for q in par_parts(p))))
        case NDChoice(_, _):
            return ("sum", tuple(sorted(set(term_key(q, env, depth)
                                            for q in sum_parts(p)))))
        case Restrict(x, l, r):
            env2 = {**env, x: depth}
            ks = sorted([term_key(l, env2, depth + 1),
                         term_key(r, env2, depth + 1)])
            return ("res", ks[0], ks[1])
        case Output(x, y, pl, c):
            env2 = {**env, y: depth}
            return ("out", name_key(x, env), term_key(pl, env2, depth + 1),
                    term_key(c, env2, depth + 1))
        case Input(x, y, c):
            env2 = {**env, y: depth}
            return ("in", name_key(x, env), term_key(c, env2, depth + 1))
        case Client(x, y, c):
            env2 = {**env, y: depth}
            return ("cli", name_key(x, env), term_key(c, env2, depth + 1))
        case Server(x, y, c):
            env2 = {**env, y: depth}
            return ("srv", name_key(x, env), term_key(c, env2, depth + 1))
        case Select(x, lab, c):
            return ("sel", name_key(x, env), lab, term_key(c, env, depth))
        case Branch(x, brs):
            return ("bra", name_key(x, env),
                    tuple((k, term_key(q, env, depth)) for k, q in brs))
        case Close(x):
            return ("close", name_key(x, env))
        case Wait(x, c):
            return ("wait", name_key(x, env), term_key(c, env, depth))
        case SomeAvail(x, c):
            return ("psome", name_key(x, env), term_key(c, env, depth))
        case NoneAvail(x):
            return ("pnone", name_key(x, env))
        case Expect(x, deps, c):
            return ("exp", name_key(x, env),
                    tuple(sorted(name_key(n, env) for n in deps)),
                    term_key(c, env, depth))
    raise TypeError(f"not a process: {p!r}")


def alpha_equal(p: Process, q: Process) -> bool:
    return term_key(p) == term_key(q)


# ---------------------------------------------------------------------------
# Canonical forms

def canonicalize(p: Process) -> Process:
    """Canonical representative of the AC/unit fragment of structural
    congruence: parallel and sums flattened, sorted and (for sums)
    deduplicated; `P | 0` units dropped; forwarders oriented; restriction
    argument order normalized; unused servers garbage-collected.

    The two scope-rearrangement axioms are *not* applied here; they are
    explored by the bounded search in `struct_congruent`. Sorting keys are
    computed relative to the enclosing binders, so same-display bound
    names keep their identity.
    """
    return _canon(p, {}, 0)


def _canon(p: Process, env: dict, depth: int) -> Process:
    match p:
        case Inaction() | Success() | Close(_) | NoneAvail(_):
            return p
        case Forward(x, y):
            if name_key(y, env) < name_key(x, env):
                return Forward(y, x)
            return p
        case Par(_, _):
            parts = []
            for q in par_parts(p):
                cq = _canon(q, env, depth)
                if not isinstance(cq, Inaction):
                    parts.append(cq)
            parts.sort(key=lambda q: term_key(q, env, depth))
            return par_all(parts)
        case NDChoice(_, _):
            seen = {}
            for q in sum_parts(p):
                cq = _canon(q, env, depth)
                seen.setdefault(term_key(cq, env, depth), cq)
            parts = [seen[k] for k in sorted(seen)]
            return sum_all(parts)
        case Restrict(x, l, r):
            env2 = {**env, x: depth}
            cl, cr = _canon(l, env2, depth + 1), _canon(r, env2, depth + 1)
            if isinstance(cl, Server) and cl.x == x and x not in free_names(cr):
                return cr
            if isinstance(cr, Server) and cr.x == x and x not in free_names(cl):
                return cl
            if term_key(cr, env2, depth + 1) < term_key(cl, env2, depth + 1):
                cl, cr = cr, cl
            return Restrict(x, cl, cr)
        case Output(x, y, pl, c):
            env2 = {**env, y: depth}
            return Output(x, y, _canon(pl, env2, depth + 1),
                          _canon(c, env2, depth + 1))
        case Input(x, y, c):
            return Input(x, y, _canon(c, {**env, y: depth}, depth + 1))
        case Client(x, y, c):
            return Client(x, y, _canon(c, {**env, y: depth}, depth + 1))
        case Server(x, y, c):
            return Server(x, y, _canon(c, {**env, y: depth}, depth + 1))
        case Select(x, lab, c):
            return Select(x, lab, _canon(c, env, depth))
        case Branch(x, brs):
            return Branch(x, tuple(sorted(
                ((k, _canon(q, env, depth)) for k, q in brs),
                key=lambda kv: kv[0])))
        case Wait(x, c):
            return Wait(x, _canon(c, env, depth))
        case SomeAvail(x, c):
            return SomeAvail(x, _canon(c, env, depth))
        case Expect(x, deps, c):
            deps2 = tuple(sorted(set(deps),
                                 key=lambda n: name_key(n, env)))
            return Expect(x, deps2, _canon(c, env, depth))
    raise TypeError(f"not a process: {p!r}")


def is_inert(p: Process) -> bool:
    """The `P == 0` test of the deadlock-freedom statement: canonical form
    is syntactically inaction."""
    return isinstance(canonicalize(p), Inaction)


# ---------------------------------------------------------------------------
# Scope normalization for state identity

def _extrude(p: Process, env: dict, depth: int) -> Process:
    """One bottom-up pass of maximal scope extrusion: every parallel
    component of a restriction's sides that does not mention the bound
    name moves out (instances of the first scope axiom plus units)."""
    match p:
        case Restrict(x, l, r):
            env2 = {**env, x: depth}
            l = _extrude(l, env2, depth + 1)
            r = _extrude(r, env2, depth + 1)
            outer = []
            sides = []
            for side in (l, r):
                keep = []
                for c in par_parts(side):
                    if x in free_names(c):
                        keep.append(c)
                    else:
                        outer.append(c)
                sides.append(par_all(keep))
            core: Process = Restrict(x, sides[0], sides[1])
            if not outer:
                return core
            return par_all([core] + outer)
        case Par(_, _):
            return par_all([_extrude(q, env, depth) for q in par_parts(p)])
        case NDChoice(l, r):
            return NDChoice(_extrude(l, env, depth), _extrude(r, env, depth))
        case Output(x, y, pl, c):
            env2 = {**env, y: depth}
            return Output(x, y, _extrude(pl, env2, depth + 1),
                          _extrude(c, env2, depth + 1))
        case Input(x, y, c):
            return Input(x, y, _extrude(c, {**env, y: depth}, depth + 1))
        case Client(x, y, c):
            return Client(x, y, _extrude(c, {**env, y: depth}, depth + 1))
        case Server(x, y, c):
            return Server(x, y, _extrude(c, {**env, y: depth}, depth + 1))
        case Select(x, lab, c):
            return Select(x, lab, _extrude(c, env, depth))
        case Branch(x, brs):
            return Branch(x, tuple((k, _extrude(q, env, depth)) for k, q in brs))
        case Wait(x, c):
            return Wait(x, _extrude(c, env, depth))
        case SomeAvail(x, c):
            return SomeAvail(x, _extrude(c, env, depth))
        case Expect(x, deps, c):
            return Expect(x, deps, _extrude(c, env, depth))
        case _:
            return p


def _swap_candidates(p: Restrict):
    """Applications of the nested-restriction swap axiom at this node."""
    x = p.x
    for a, b in ((p.left, p.right), (p.right, p.left)):
        if not isinstance(a, Restrict):
            continue
        y = a.x
        for inner_keep, inner_move in ((a.left, a.right), (a.right, a.left)):
            if x not in free_names(inner_move) and y not in free_names(b):
                yield Restrict(y, Restrict(x, inner_keep, b), inner_move)


def _swap_pass(p: Process, env: dict, depth: int) -> Process:
    match p:
        case Restrict(x, l, r):
            env2 = {**env, x: depth}
            l = _swap_pass(l, env2, depth + 1)
            r = _swap_pass(r, env2, depth + 1)
            node = _canon(Restrict(x, l, r), env, depth)
            if isinstance(node, Restrict):
                best = node
                best_key = term_key(node, env, depth)
                for cand in _swap_candidates(node):
                    c = _canon(cand, env, depth)
                    k = term_key(c, env, depth)
                    if k < best_key:
                        best, best_key = c, k
                return best
            return node
        case Par(_, _):
            return par_all([_swap_pass(q, env, depth) for q in par_parts(p)])
        case NDChoice(l, r):
            return NDChoice(_swap_pass(l, env, depth), _swap_pass(r, env, depth))
        case Output(x, y, pl, c):
            env2 = {**env, y: depth}
            return Output(x, y, _swap_pass(pl, env2, depth + 1),
                          _swap_pass(c, env2, depth + 1))
        case Input(x, y, c):
            return Input(x, y, _swap_pass(c, {**env, y: depth}, depth + 1))
        case Client(x, y, c):
            return Client(x, y, _swap_pass(c, {**env, y: depth}, depth + 1))
        case Server(x, y, c):
            return Server(x, y, _swap_pass(c, {**env, y: depth}, depth + 1))
        case Select(x, lab, c):
            return Select(x, lab, _swap_pass(c, env, depth))
        case Branch(x, brs):
            return Branch(x, tuple((k, _swap_pass(q, env, depth)) for k, q in brs))
        case Wait(x, c):
            return Wait(x, _swap_pass(c, env, depth))
        case SomeAvail(x, c):
            return SomeAvail(x, _swap_pass(c, env, depth))
        case Expect(x, deps, c):
            return Expect(x, deps, _swap_pass(c, env, depth))
        case _:
            return p


def scope_normalize(p: Process, limit: int = 50) -> Process:
    """Deterministic representative of a process modulo the scope axioms,
    used as state identity in reduction graphs: extrude maximally, then
    reorder permutable nested restrictions towards the least key. Every
    pass applies only structural-congruence axiom instances, so equal
    normal forms imply congruent processes."""
    p = canonicalize(p)
    prev = None
    for _ in range(limit):
        k = term_key(p)
        if k == prev:
            return p
        prev = k
        p = canonicalize(_extrude(p, {}, 0))
        p = _swap_pass(p, {}, 0)
    return p


def state_key(p: Process):
    return term_key(scope_normalize(p))


# ---------------------------------------------------------------------------
# Scope-rearrangement rewrites and bounded structural congruence

def _scope_rewrites_top(p: Process) -> Iterator[Process]:
    # extrusion: new x ((P|Q) | R) == new x (P|R) | Q  with x not in fn(Q)
    if isinstance(p, Restrict):
        x = p.x
        for l, r in ((p.left, p.right), (p.right, p.left)):
            parts = par_parts(l)
            for i, c in enumerate(parts):
                if x in free_names(c):
                    continue
                rest = parts[:i] + parts[i + 1:]
                inner = par_all(rest) if rest else Inaction()
                yield Par(Restrict(x, inner, r), c)
        # swap: new x (new y (P|Q) | R) == new y (new x (P|R) | Q)
        for l, r in ((p.left, p.right), (p.right, p.left)):
            if isinstance(l, Restrict):
                y = l.x
                for il, ir in ((l.left, l.right), (l.right, l.left)):
                    if x not in free_names(ir) and y not in free_names(r):
                        yield Restrict(y, Restrict(x, il, r), ir)
    # intrusion: new x (P|R) | Q == new x ((P|Q) | R)
    if isinstance(p, Par):
        parts = par_parts(p)
        for i, c in enumerate(parts):
            if not isinstance(c, Restrict):
                continue
            for j, q in enumerate(parts):
                if i == j:
                    continue
                rest = [parts[k] for k in range(len(parts)) if k not in (i, j)]
                for a, b in ((c.left, c.right), (c.right, c.left)):
                    moved = Restrict(c.x, Par(a, q), b)
                    yield par_all(rest + [moved]) if rest else moved


def scope_rewrites(p: Process) -> Iterator[Process]:
    """All single applications of the scope axioms at any position."""
    for q in _scope_rewrites_top(p):
        yield q
    match p:
        case Par(l, r):
            for l2 in scope_rewrites(l):
                yield Par(l2, r)
            for r2 in scope_rewrites(r):
                yield Par(l, r2)
        case NDChoice(l, r):
            for l2 in scope_rewrites(l):
                yield NDChoice(l2, r)
            for r2 in scope_rewrites(r):
                yield NDChoice(l, r2)
        case Restrict(x, l, r):
            for l2 in scope_rewrites(l):
                yield Restrict(x, l2, r)
            for r2 in scope_rewrites(r):
                yield Restrict(x, l, r2)
        case Output(x, y, pl, c):
            for pl2 in scope_rewrites(pl):
                yield Output(x, y, pl2, c)
            for c2 in scope_rewrites(c):
                yield Output(x, y, pl, c2)
        case Input(x, y, c):
            for c2 in scope_rewrites(c):
                yield Input(x, y, c2)
        case Client(x, y, c):
            for c2 in scope_rewrites(c):
                yield Client(x, y, c2)
        case Server(x, y, c):
            for c2 in scope_rewrites(c):
                yield Server(x, y, c2)
        case Select(x, lab, c):
            for c2 in scope_rewrites(c):
                yield Select(x, lab, c2)
        case Branch(x, brs):
            for i, (k, b) in enumerate(brs):
                for b2 in scope_rewrites(b):
                    yield Branch(x, brs[:i] + ((k, b2),) + brs[i + 1:])
        case Wait(x, c):
            for c2 in scope_rewrites(c):
                yield Wait(x, c2)
        case SomeAvail(x, c):
            for c2 in scope_rewrites(c):
                yield SomeAvail(x, c2)
        case Expect(x, deps, c):
            for c2 in scope_rewrites(c):
                yield Expect(x, deps, c2)
        case _:
            pass


def struct_congruent(p: Process, q: Process, bound: int = 4) -> bool:
    """Decide P == Q by canonicalization plus a bounded bidirectional
    search over the two scope-rearrangement axioms.

    Sound always; complete on terms whose scope-rewrite distance is
    within `bound`.
    """
    cp, cq = scope_normalize(p), scope_normalize(q)
    kp, kq = term_key(cp), term_key(cq)
    if kp == kq:
        return True
    seen_p = {kp: cp}
    seen_q = {kq: cq}
    frontier_p, frontier_q = [cp], [cq]
    for _ in range(bound):
        if not frontier_p and not frontier_q:
            break
        # expand the smaller frontier first
        for seen, other, frontier in ((seen_p, seen_q, frontier_p),
                                      (seen_q, seen_p, frontier_q)):
            new = []
            for t in frontier:
                for r in scope_rewrites(t):
                    cr = canonicalize(r)
                    k = term_key(cr)
                    if k in other:
                        return True
                    if k not in seen:
                        seen[k] = cr
                        new.append(cr)
            frontier[:] = new
    return False

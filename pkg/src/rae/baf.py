"""Bipolar argumentation frameworks with attack/support semantics.

A framework holds ``n_args`` arguments (dense ids ``0..n_args-1``), a set of
directed attack edges and a set of directed support edges.  On top of the two
edge relations three notions of attack are derived:

* direct attack: a single attack edge,
* indirect attack: one attack edge followed by one or more support edges,
* supported attack: one or more support edges followed by one attack edge.

Mixed sequences (support, attack, support, ...) are not attacks.  A set of
arguments set-attacks ``a`` when some member reaches ``a`` through any of the
three; it set-supports ``a`` only through a single direct support edge.

From these the usual acceptability notions follow: conflict-free, safe,
defended, d-/s-/c-admissible and the three preferred semantics (subset-maximal
admissible sets of each kind).

All extension-level state is kept as integer bitmasks internally; the public
API speaks ``frozenset[int]``.  Frameworks are immutable after construction and
every query is read-only, so instances can be shared freely across threads.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

from .errors import CapacityError, InputError, UsageError

MAX_ARGS = 64          # hard cap of the generic engine
BRUTE_FORCE_MAX = 20   # hard cap of the exhaustive oracle


class Semantics(enum.Enum):
    CONFLICT_FREE = "conflict-free"
    SAFE = "safe"
    D_ADMISSIBLE = "d-admissible"
    S_ADMISSIBLE = "s-admissible"
    C_ADMISSIBLE = "c-admissible"
    D_PREFERRED = "d-preferred"
    S_PREFERRED = "s-preferred"
    C_PREFERRED = "c-preferred"


_ADMISSIBLE_KINDS = {
    Semantics.D_ADMISSIBLE,
    Semantics.S_ADMISSIBLE,
    Semantics.C_ADMISSIBLE,
}
_PREFERRED_KINDS = {
    Semantics.D_PREFERRED,
    Semantics.S_PREFERRED,
    Semantics.C_PREFERRED,
}
_PREFERRED_TO_ADMISSIBLE = {
    Semantics.D_PREFERRED: Semantics.D_ADMISSIBLE,
    Semantics.S_PREFERRED: Semantics.S_ADMISSIBLE,
    Semantics.C_PREFERRED: Semantics.C_ADMISSIBLE,
}


def _bits(mask: int):
    """Yield the indices of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BAF:
    """Immutable bipolar argumentation framework.

    The constructor validates the edge sets (endpoints in range, no pair both
    attack and support) and precomputes, per argument ``b``:

    * ``atk[b]``  - bitmask of arguments ``b`` set-attacks as a singleton,
    * ``attackers[a]`` - the transpose of ``atk``,
    * ``sup_out[b]`` / ``sup_in[b]`` - direct support adjacency.

    Self-attacks and self-supports are accepted; a self-attacking argument can
    never sit in a conflict-free set, which neutralises it everywhere above.
    """

    __slots__ = (
        "n_args",
        "attacks",
        "supports",
        "_atk_out",
        "_sup_out",
        "_sup_in",
        "_atk",
        "_attackers",
        "_support_components",
    )

    def __init__(
        self,
        n_args: int,
        attacks: Iterable[tuple[int, int]] = (),
        supports: Iterable[tuple[int, int]] = (),
    ):
        if n_args < 0:
            raise InputError("argument count must be non-negative", code="args")
        attacks = frozenset((int(a), int(b)) for a, b in attacks)
        supports = frozenset((int(a), int(b)) for a, b in supports)
        for name, edges in (("attack", attacks), ("support", supports)):
            for a, b in edges:
                if not (0 <= a < n_args and 0 <= b < n_args):
                    raise InputError(
                        f"{name} edge ({a}, {b}) references an argument outside 0..{n_args - 1}",
                        code="range",
                    )
        both = attacks & supports
        if both:
            a, b = min(both)
            raise InputError(
                f"edge ({a}, {b}) appears as both attack and support", code="overlap"
            )
        self.n_args = n_args
        self.attacks = attacks
        self.supports = supports

        atk_out = [0] * n_args
        sup_out = [0] * n_args
        sup_in = [0] * n_args
        for a, b in attacks:
            atk_out[a] |= 1 << b
        for a, b in supports:
            sup_out[a] |= 1 << b
            sup_in[b] |= 1 << a
        self._atk_out = atk_out
        self._sup_out = sup_out
        self._sup_in = sup_in

        reach = self._support_reachability()
        # Singleton set-attack closure: direct edges, plus supports appended
        # after one attack (indirect), plus supports prefixed before one
        # attack (supported).
        atk = list(atk_out)
        for b in range(n_args):
            for z in _bits(atk_out[b]):
                atk[b] |= reach[z]
            for w in _bits(reach[b]):
                atk[b] |= atk_out[w]
        self._atk = atk

        attackers = [0] * n_args
        for b in range(n_args):
            for a in _bits(atk[b]):
                attackers[a] |= 1 << b
        self._attackers = attackers
        self._support_components = self._compute_support_components()

    def _support_reachability(self) -> list[int]:
        """reach[z] = arguments reachable from z via one or more support edges."""
        n = self.n_args
        reach = [0] * n
        for start in range(n):
            seen = 0
            frontier = self._sup_out[start]
            while frontier:
                seen |= frontier
                nxt = 0
                for w in _bits(frontier):
                    nxt |= self._sup_out[w]
                frontier = nxt & ~seen
            reach[start] = seen
        return reach

    def _compute_support_components(self) -> list[int]:
        """Connected components of the undirected support graph, as bitmasks."""
        n = self.n_args
        unvisited = (1 << n) - 1
        comps = []
        adj = [self._sup_out[i] | self._sup_in[i] for i in range(n)]
        while unvisited:
            start = (unvisited & -unvisited).bit_length() - 1
            comp = 1 << start
            frontier = adj[start] & ~comp
            while frontier:
                comp |= frontier
                nxt = 0
                for w in _bits(frontier):
                    nxt |= adj[w]
                frontier = nxt & ~comp
            comps.append(comp)
            unvisited &= ~comp
        return comps

    # -- basic queries -----------------------------------------------------

    def _check_arg(self, a: int) -> None:
        if not (0 <= a < self.n_args):
            raise UsageError(f"argument id {a} outside 0..{self.n_args - 1}")

    def _mask(self, members: Iterable[int]) -> int:
        mask = 0
        for a in members:
            self._check_arg(a)
            mask |= 1 << a
        return mask

    def direct_attackers(self, a: int) -> frozenset[int]:
        self._check_arg(a)
        return frozenset(b for b, t in self.attacks if t == a)

    def direct_supporters(self, a: int) -> frozenset[int]:
        self._check_arg(a)
        return frozenset(b for b, t in self.supports if t == a)

    def indirect_attack_exists(self, x: int, y: int) -> bool:
        """Attack edge out of ``x`` followed by >= 1 support edges into ``y``."""
        self._check_arg(x)
        self._check_arg(y)
        reach = self._support_reachability()
        return any((reach[z] >> y) & 1 for z in _bits(self._atk_out[x]))

    def supported_attack_exists(self, x: int, y: int) -> bool:
        """>= 1 support edges out of ``x`` followed by an attack edge into ``y``."""
        self._check_arg(x)
        self._check_arg(y)
        reach = self._support_reachability()
        return any((self._atk_out[w] >> y) & 1 for w in _bits(reach[x]))

    def set_attacks(self, members: Iterable[int], a: int) -> bool:
        self._check_arg(a)
        mask = self._mask(members)
        return any((self._atk[b] >> a) & 1 for b in _bits(mask))

    def set_supports(self, members: Iterable[int], a: int) -> bool:
        self._check_arg(a)
        mask = self._mask(members)
        return any((self._sup_out[b] >> a) & 1 for b in _bits(mask))

    # -- mask-level predicates (internal fast path) ------------------------

    def _attacked_union(self, mask: int) -> int:
        out = 0
        for b in _bits(mask):
            out |= self._atk[b]
        return out

    def _supported_union(self, mask: int) -> int:
        out = 0
        for b in _bits(mask):
            out |= self._sup_out[b]
        return out

    def _attackers_union(self, mask: int) -> int:
        out = 0
        for a in _bits(mask):
            out |= self._attackers[a]
        return out

    def _conflict_free_mask(self, mask: int) -> bool:
        return self._attacked_union(mask) & mask == 0

    def _safe_mask(self, mask: int) -> bool:
        attacked = self._attacked_union(mask)
        return attacked & (self._supported_union(mask) | mask) == 0

    def _closed_mask(self, mask: int) -> bool:
        # Both endpoints of every support edge in, or both out.
        for a, b in self.supports:
            if ((mask >> a) & 1) != ((mask >> b) & 1):
                return False
        return True

    def _defends_all_mask(self, mask: int) -> bool:
        return self._attackers_union(mask) & ~self._attacked_union(mask) == 0

    def _admissible_mask(self, mask: int, kind: Semantics) -> bool:
        if kind is Semantics.S_ADMISSIBLE:
            if not self._safe_mask(mask):
                return False
        else:
            if not self._conflict_free_mask(mask):
                return False
            if kind is Semantics.C_ADMISSIBLE and not self._closed_mask(mask):
                return False
        return self._defends_all_mask(mask)

    # -- extension-level predicates ----------------------------------------

    def defends(self, members: Iterable[int], a: int) -> bool:
        """Every singleton set-attacker of ``a`` is set-attacked from ``members``."""
        self._check_arg(a)
        mask = self._mask(members)
        return self._attackers[a] & ~self._attacked_union(mask) == 0

    def is_conflict_free(self, members: Iterable[int]) -> bool:
        return self._conflict_free_mask(self._mask(members))

    def is_safe(self, members: Iterable[int]) -> bool:
        return self._safe_mask(self._mask(members))

    def is_closed_for_supports(self, members: Iterable[int]) -> bool:
        """Adopted reading of support closure: for every support edge, both
        endpoints are in or both are out, i.e. members keep their direct
        supporters and supportees with them."""
        return self._closed_mask(self._mask(members))

    def is_admissible(self, members: Iterable[int], kind: Semantics) -> bool:
        if kind not in _ADMISSIBLE_KINDS:
            raise UsageError(f"{kind.value} is not an admissibility kind")
        return self._admissible_mask(self._mask(members), kind)

    # -- preferred-extension enumeration ------------------------------------

    def enumerate_preferred(
        self, kind: Semantics, max_args: int = MAX_ARGS
    ) -> list[frozenset[int]]:
        """All subset-maximal admissible sets of the matching kind.

        Deterministic: the result is ordered lexicographically by sorted
        member list.  Frameworks above ``max_args`` raise ``CapacityError``.
        """
        if kind not in _PREFERRED_KINDS:
            raise UsageError(f"{kind.value} is not a preferred semantics")
        if self.n_args > max_args:
            raise CapacityError(
                f"framework has {self.n_args} arguments; the enumeration cap is {max_args}"
            )
        adm = _PREFERRED_TO_ADMISSIBLE[kind]
        if adm is Semantics.C_ADMISSIBLE:
            units = list(self._support_components)
        else:
            units = [1 << a for a in range(self.n_args)]
        masks = self.maximal_admissible_unions(adm, units)
        return _sorted_extensions(masks)

    def maximal_admissible_unions(
        self, kind: Semantics, units: Sequence[int]
    ) -> list[int]:
        """Subset-maximal ``kind``-admissible unions of the given unit masks.

        Branch-and-bound over include/exclude decisions per unit, in the
        style of maximal-clique search.  Conflict-freeness and (for the safe
        kind) safety decompose over unit pairs, so incompatibilities live in
        one precomputed bitmask per unit.  On top of that:

        * a defense fixpoint runs at every node: candidate units whose
          attackers can never be counter-attacked by the surviving pool drop
          out, and a branch whose committed units lose their defense dies;
        * when the committed set plus the whole surviving pool is admissible,
          that union dominates the subtree;
        * a subtree whose reachable arguments are covered by an already
          recorded admissible set cannot contribute a new maximal set.
        """
        if kind not in _ADMISSIBLE_KINDS:
            raise UsageError(f"{kind.value} is not an admissibility kind")
        safe_kind = kind is Semantics.S_ADMISSIBLE
        check_closure = kind is Semantics.C_ADMISSIBLE

        members = []
        for u in units:
            atk = self._attacked_union(u)
            # Internal conflict (or, for the safe kind, attacking something
            # the unit itself supports) rules a unit out entirely.
            if atk & u:
                continue
            if safe_kind and atk & self._supported_union(u):
                continue
            members.append(u)
        # High-conflict units first: failing early keeps the tree small.
        members.sort(
            key=lambda u: (bin(self._attacked_union(u)).count("1"), -u), reverse=True
        )
        k = len(members)
        unit_atk = [self._attacked_union(u) for u in members]
        unit_sup = [self._supported_union(u) for u in members]
        unit_attackers = [self._attackers_union(u) for u in members]

        # compat[i]: bitmask over unit indices that can coexist with unit i.
        compat = [0] * k
        for i in range(k):
            for j in range(i + 1, k):
                if unit_atk[i] & members[j] or unit_atk[j] & members[i]:
                    continue
                if safe_kind and (
                    unit_atk[i] & unit_sup[j] or unit_atk[j] & unit_sup[i]
                ):
                    continue
                compat[i] |= 1 << j
                compat[j] |= 1 << i

        found: list[int] = []

        def record(mask: int) -> None:
            for other in found:
                if mask | other == other:
                    return
            found[:] = [o for o in found if o | mask != mask]
            found.append(mask)

        def aggregate(pool: int) -> tuple[int, int, int, int]:
            mem = atk = sup = attackers = 0
            p = pool
            while p:
                low = p & -p
                i = low.bit_length() - 1
                mem |= members[i]
                atk |= unit_atk[i]
                sup |= unit_sup[i]
                attackers |= unit_attackers[i]
                p ^= low
            return mem, atk, sup, attackers

        def admissible(mask: int, atk: int, sup: int, attackers: int) -> bool:
            if attackers & ~atk:
                return False
            if safe_kind:
                if atk & (sup | mask):
                    return False
            else:
                if atk & mask:
                    return False
                if check_closure and not self._closed_mask(mask):
                    return False
            return True

        def dfs(inc: int, inc_atk: int, inc_sup: int, inc_attackers: int, pool: int) -> None:
            # Defense fixpoint: shrink the pool to units that can still be
            # defended; give up when the committed set itself cannot be.
            while True:
                pool_atk = inc_atk
                p = pool
                while p:
                    low = p & -p
                    pool_atk |= unit_atk[low.bit_length() - 1]
                    p ^= low
                if inc_attackers & ~pool_atk:
                    return
                shrunk = pool
                p = pool
                while p:
                    low = p & -p
                    if unit_attackers[low.bit_length() - 1] & ~pool_atk:
                        shrunk ^= low
                    p ^= low
                if shrunk == pool:
                    break
                pool = shrunk

            pool_mem, pool_atk, pool_sup, pool_attackers = aggregate(pool)
            total = inc | pool_mem
            for other in found:
                if total | other == other:
                    return
            # Greedy jump: if the whole surviving pool fits, nothing below
            # this node can beat it.
            if admissible(
                total, inc_atk | pool_atk, inc_sup | pool_sup, inc_attackers | pool_attackers
            ):
                record(total)
                return
            if not pool:
                if admissible(inc, inc_atk, inc_sup, inc_attackers):
                    record(inc)
                return
            # Branch on the most conflicted unit left.
            best, best_score = -1, -1
            p = pool
            while p:
                low = p & -p
                i = low.bit_length() - 1
                score = bin(pool & ~compat[i]).count("1")
                if score > best_score:
                    best, best_score = i, score
                p ^= low
            u = 1 << best
            dfs(
                inc | members[best],
                inc_atk | unit_atk[best],
                inc_sup | unit_sup[best],
                inc_attackers | unit_attackers[best],
                (pool ^ u) & compat[best],
            )
            dfs(inc, inc_atk, inc_sup, inc_attackers, pool ^ u)

        dfs(0, 0, 0, 0, (1 << k) - 1)
        if not found:
            found.append(0)
        return found

    def brute_force_preferred(self, kind: Semantics) -> list[frozenset[int]]:
        """Oracle: full subset enumeration, then maximal filter.

        Capped at ``BRUTE_FORCE_MAX`` arguments.
        """
        if kind not in _PREFERRED_KINDS:
            raise UsageError(f"{kind.value} is not a preferred semantics")
        n = self.n_args
        if n > BRUTE_FORCE_MAX:
            raise CapacityError(
                f"framework has {n} arguments; the brute-force cap is {BRUTE_FORCE_MAX}"
            )
        adm = _PREFERRED_TO_ADMISSIBLE[kind]
        # Subset DP over the lattice: aggregate masks of X extend X \ {low bit}.
        size = 1 << n
        attacked = [0] * size
        supported = [0] * size
        attackers = [0] * size
        for mask in range(1, size):
            low = (mask & -mask).bit_length() - 1
            rest = mask & (mask - 1)
            attacked[mask] = attacked[rest] | self._atk[low]
            supported[mask] = supported[rest] | self._sup_out[low]
            attackers[mask] = attackers[rest] | self._attackers[low]
        admissible: list[int] = []
        for mask in range(size):
            if attackers[mask] & ~attacked[mask]:
                continue
            if adm is Semantics.S_ADMISSIBLE:
                if attacked[mask] & (supported[mask] | mask):
                    continue
            else:
                if attacked[mask] & mask:
                    continue
                if adm is Semantics.C_ADMISSIBLE and not self._closed_mask(mask):
                    continue
            admissible.append(mask)
        admissible.sort(key=lambda m: bin(m).count("1"), reverse=True)
        maximal: list[int] = []
        for mask in admissible:
            if not any(mask | kept == kept for kept in maximal):
                maximal.append(mask)
        return _sorted_extensions(maximal)


def _sorted_extensions(masks: Iterable[int]) -> list[frozenset[int]]:
    exts = {frozenset(_bits(m)) for m in masks}
    return sorted(exts, key=lambda e: tuple(sorted(e)))


# -- text format -----------------------------------------------------------
#
#   # comment
#   args 10
#   att 1 3
#   sup 0 5
#
# Whitespace-separated 0-based indices, one directive per line.


def parse_baf_text(text: str) -> BAF:
    n_args: int | None = None
    attacks: set[tuple[int, int]] = set()
    supports: set[tuple[int, int]] = set()

    def fail(lineno: int, message: str, code: str) -> InputError:
        return InputError(f"line {lineno}: {message}", code=code)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "args":
            if n_args is not None:
                raise fail(lineno, "duplicate args directive", "args")
            if len(parts) != 2 or not parts[1].isdigit():
                raise fail(lineno, "expected: args <count>", "args")
            n_args = int(parts[1])
            continue
        if parts[0] not in ("att", "sup"):
            raise fail(lineno, f"unknown directive {parts[0]!r}", "directive")
        if n_args is None:
            raise fail(lineno, "edge before args directive", "order")
        if len(parts) != 3:
            raise fail(lineno, f"expected: {parts[0]} <from> <to>", "edge")
        try:
            a, b = int(parts[1]), int(parts[2])
        except ValueError:
            raise fail(lineno, "edge endpoints must be integers", "edge") from None
        if not (0 <= a < n_args and 0 <= b < n_args):
            raise fail(lineno, f"argument id outside 0..{n_args - 1}", "range")
        target = attacks if parts[0] == "att" else supports
        if (a, b) in target:
            raise fail(lineno, f"duplicate edge ({a}, {b})", "duplicate")
        other = supports if parts[0] == "att" else attacks
        if (a, b) in other:
            raise fail(lineno, f"edge ({a}, {b}) already declared with opposite polarity", "overlap")
        target.add((a, b))
    if n_args is None:
        raise InputError("missing args directive", code="args")
    return BAF(n_args, attacks, supports)

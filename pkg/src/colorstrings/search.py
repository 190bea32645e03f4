"""Bounded breadth-first reachability over l-sets.

States are identified by the canonical form of their member set under a
symmetry group (letter swaps and reversal commute with every transition and
fix the empty set, so identifying a state with its images never changes
whether, or at which depth, the empty set is reached).
"""

from __future__ import annotations

import hashlib
import logging
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .core import (
    GROUPS,
    DerivationScript,
    LSet,
    ReplayError,
    TransitionLabel,
    apply_set,
    canonical_codes,
    find_symmetry,
    group_elements,
    replay,
    successors,
)

logger = logging.getLogger(__name__)


def check_probe_missing_letter(L: LSet) -> bool:
    """True iff some member of ``L`` avoids letter c or avoids letter d."""
    return any("c" not in s or "d" not in s for s in L.strings)


@dataclass(frozen=True)
class Probe:
    name: str
    predicate: Callable[[LSet], bool]
    # groups under which the predicate is invariant; others are refused
    groups: frozenset[str] = frozenset(GROUPS)


PROBES = {
    "missing-letter": Probe(
        "missing-letter", check_probe_missing_letter, frozenset({"none", "cd", "cd-rev"})
    ),
}


@dataclass
class SearchConfig:
    max_depth: int = 6
    max_length: int = 7
    max_states: int = 1_000_000
    group: str = "cd"
    probes: tuple[Probe, ...] = ()
    k: int = 4
    # keep full member tuples next to the digests while the store is small
    exact_threshold: int = 200_000
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.max_length < 3:
            raise ValueError(f"max_length must be >= 3, got {self.max_length}")
        if self.max_states < 1:
            raise ValueError(f"max_states must be >= 1, got {self.max_states}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}; expected one of {GROUPS}")
        group_elements(self.group, self.k)
        self.probes = tuple(PROBES[p] if isinstance(p, str) else p for p in self.probes)
        for probe in self.probes:
            if self.group not in probe.groups:
                raise ValueError(
                    f"probe {probe.name!r} is not invariant under group {self.group!r}; "
                    f"use one of {sorted(probe.groups)}"
                )


@dataclass
class ProbeResult:
    checked: int = 0
    satisfied: int = 0
    first_violation: tuple[int, LSet] | None = None

    @property
    def violations(self) -> int:
        return self.checked - self.satisfied


@dataclass
class SearchReport:
    depth_counts: list[int] = field(default_factory=list)
    transitions: int = 0
    pruned_length: int = 0
    goal_found: bool = False
    goal_depth: int | None = None
    witness: DerivationScript | None = None
    probes: dict[str, ProbeResult] = field(default_factory=dict)
    truncated_depth: bool = False
    truncated_length: bool = False
    truncated_memory: bool = False

    @property
    def total_states(self) -> int:
        return sum(self.depth_counts)

    def summary(self) -> dict[str, str]:
        """Flat key/value view used by the machine-readable report block."""
        out = {
            "depth_counts": ",".join(map(str, self.depth_counts)),
            "goal_found": str(self.goal_found).lower(),
            "goal_depth": "" if self.goal_depth is None else str(self.goal_depth),
            "pruned_length": str(self.pruned_length),
            "total_states": str(self.total_states),
            "transitions": str(self.transitions),
            "truncated_depth": str(self.truncated_depth).lower(),
            "truncated_length": str(self.truncated_length).lower(),
            "truncated_memory": str(self.truncated_memory).lower(),
            "witness": "" if self.witness is None else ";".join(map(str, self.witness.steps)),
        }
        for name, res in self.probes.items():
            out[f"probe.{name}.checked"] = str(res.checked)
            out[f"probe.{name}.violations"] = str(res.violations)
        return out


def state_key(length: int, codes: tuple[int, ...]) -> bytes:
    if not codes:
        return b"empty"
    h = hashlib.blake2b(digest_size=16)
    h.update(length.to_bytes(2, "little"))
    h.update(array("Q", codes).tobytes())
    return h.digest()


class HashCollision(RuntimeError):
    pass


def _expand(payload: tuple[LSet, str]) -> list[tuple[TransitionLabel, int, tuple[int, ...]]]:
    """Successors of one state as (label, length, canonical codes)."""
    L, group = payload
    return [(label, succ.length, canonical_codes(succ, group)) for label, succ in successors(L)]


class _Explorer:
    def __init__(self, start: LSet, config: SearchConfig) -> None:
        if start.k != config.k:
            raise ValueError(f"start state uses k={start.k}, config uses k={config.k}")
        if start and start.length < 3:
            raise ValueError(f"start state must have length >= 3, got {start.length}")
        self.start = start
        self.config = config
        self.report = SearchReport(probes={p.name: ProbeResult() for p in config.probes})
        self.parents: dict[bytes, tuple[bytes, TransitionLabel] | None] = {}
        self.exact: dict[bytes, tuple[int, tuple[int, ...]]] = {}

    def _insert(self, key: bytes, length: int, codes: tuple[int, ...], parent) -> bool:
        if key in self.parents:
            stored = self.exact.get(key)
            if stored is not None and stored != (length, codes) and codes:
                raise HashCollision(f"digest collision between two distinct states at length {length}")
            return False
        self.parents[key] = parent
        if len(self.exact) < self.config.exact_threshold:
            self.exact[key] = (length, codes)
        return True

    def _probe(self, depth: int, state: LSet) -> None:
        for probe in self.config.probes:
            res = self.report.probes[probe.name]
            res.checked += 1
            if probe.predicate(state):
                res.satisfied += 1
            elif res.first_violation is None:
                res.first_violation = (depth, state)
                logger.warning("probe %s violated at depth %d by %r", probe.name, depth, state)

    def run(self) -> Iterator[tuple[int, LSet]]:
        cfg = self.config
        rep = self.report
        k = cfg.k
        root = LSet._trusted(self.start.length, canonical_codes(self.start, cfg.group), k)
        root_key = state_key(root.length, root.codes)
        self._insert(root_key, root.length, root.codes, None)
        rep.depth_counts.append(1)
        self._probe(0, root)
        yield 0, root
        if not root:
            self._finish_goal(0, root_key)
            return

        frontier: list[tuple[bytes, LSet]] = [(root_key, root)]
        pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
        try:
            for depth in range(1, cfg.max_depth + 1):
                if not frontier:
                    break
                rep.depth_counts.append(0)
                next_frontier: list[tuple[bytes, LSet]] = []
                payloads = [(state, cfg.group) for _, state in frontier]
                if pool is None:
                    expanded = map(_expand, payloads)
                else:
                    expanded = pool.map(_expand, payloads, chunksize=max(1, len(payloads) // (4 * cfg.workers)))
                # merge strictly in frontier order so reports do not depend on workers
                for (parent_key, _), succs in zip(frontier, expanded):
                    for label, length, codes in succs:
                        rep.transitions += 1
                        if codes and length > cfg.max_length:
                            rep.pruned_length += 1
                            rep.truncated_length = True
                            continue
                        key = state_key(length, codes)
                        if key not in self.parents and len(self.parents) >= cfg.max_states:
                            rep.truncated_memory = True
                            logger.warning("state budget of %d exhausted at depth %d", cfg.max_states, depth)
                            return
                        if not self._insert(key, length, codes, (parent_key, label)):
                            continue
                        state = LSet._trusted(length, codes, k)
                        rep.depth_counts[depth] += 1
                        self._probe(depth, state)
                        yield depth, state
                        if not codes:
                            self._finish_goal(depth, key)
                            return
                        next_frontier.append((key, state))
                frontier = next_frontier
            rep.truncated_depth = bool(frontier)
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)

    def _finish_goal(self, depth: int, key: bytes) -> None:
        rep = self.report
        rep.goal_found = True
        rep.goal_depth = depth
        labels: list[TransitionLabel] = []
        while (entry := self.parents[key]) is not None:
            key, label = entry
            labels.append(label)
        labels.reverse()
        rep.witness = DerivationScript(self.start, tuple(self._lift(labels)))

    def _lift(self, canonical_labels: list[TransitionLabel]) -> list[TransitionLabel]:
        """Translate labels taken on canonical representatives back to the start state."""
        group = self.config.group
        actual = self.start
        sym = find_symmetry(actual, LSet._trusted(actual.length, canonical_codes(actual, group), actual.k), group)
        out = []
        for label in canonical_labels:
            real = sym.map_label(label, actual.length)
            out.append(real)
            actual = apply_set(actual, *real)
            if not actual:
                break
            canon = LSet._trusted(actual.length, canonical_codes(actual, group), actual.k)
            sym = find_symmetry(actual, canon, group)
        return out


def reachable_states(start: LSet, config: SearchConfig) -> Iterator[tuple[int, LSet]]:
    """Yield each distinct canonical state once, by nondecreasing depth."""
    yield from _Explorer(start, config).run()


def bfs(start: LSet, config: SearchConfig,
        on_state: Callable[[int, LSet], None] | None = None) -> SearchReport:
    """Run the bounded search; ``on_state`` sees every new canonical state."""
    explorer = _Explorer(start, config)
    for depth, state in explorer.run():
        if on_state is not None:
            on_state(depth, state)
    return explorer.report


def witness_problem(start: LSet, steps) -> str | None:
    """Why ``steps`` fails to derive the empty set from ``start``; None if it succeeds."""
    script = steps if isinstance(steps, DerivationScript) else DerivationScript(start, tuple(steps))
    try:
        states = replay(script)
    except ReplayError as exc:
        return str(exc)
    if states[-1]:
        return f"script ends at a nonempty {states[-1].length}-set with {len(states[-1])} members"
    return None


def verify_witness(start: LSet, steps) -> bool:
    return witness_problem(start, steps) is None

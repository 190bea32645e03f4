"""Strings over a small alphabet, l-sets, and the substring-collapse transition.

A string ``s_1 ... s_l`` is stored as a base-``k`` integer code with ``s_1``
as the most significant digit, so numeric order on codes of one length is
lexicographic order on the strings. An :class:`LSet` keeps its members as a
sorted tuple of codes. A dense view (one boolean slot per string of the
``k**l`` universe) is available for large sets.

Positions are 1-indexed everywhere in the public API.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

LETTERS = "abcdefgh"

#: Universe size above which the dense path is never used.
DENSE_UNIVERSE_LIMIT = 1 << 20

GROUPS = ("none", "cd", "cd-rev", "full")


class TransitionError(ValueError):
    """Raised when a transition label does not fit the length of a set."""


class ReplayError(ValueError):
    """Raised when a step of a derivation script cannot be applied."""

    def __init__(self, step: int, message: str) -> None:
        super().__init__(f"step {step}: {message}")
        self.step = step


@dataclass(frozen=True)
class Alphabet:
    size: int = 4

    def __post_init__(self) -> None:
        if not 2 <= self.size <= len(LETTERS):
            raise ValueError(f"alphabet size must be in [2, {len(LETTERS)}], got {self.size}")

    @property
    def letters(self) -> str:
        return LETTERS[: self.size]

    def index(self, letter: str) -> int:
        idx = LETTERS.find(letter)
        if idx < 0 or idx >= self.size:
            raise ValueError(f"letter {letter!r} is not in alphabet {self.letters!r}")
        return idx


def encode(s: str | Sequence[int], k: int = 4) -> int:
    """Return the base-``k`` code of a string (or a sequence of letter indices)."""
    code = 0
    for ch in s:
        d = LETTERS.find(ch) if isinstance(ch, str) else int(ch)
        if d < 0 or d >= k:
            raise ValueError(f"letter {ch!r} is outside an alphabet of size {k}")
        code = code * k + d
    return code


def decode_digits(code: int, length: int, k: int = 4) -> tuple[int, ...]:
    digits = [0] * length
    for t in range(length - 1, -1, -1):
        code, digits[t] = divmod(code, k)
    return tuple(digits)


def decode(code: int, length: int, k: int = 4) -> str:
    return "".join(LETTERS[d] for d in decode_digits(code, length, k))


class TransitionLabel(NamedTuple):
    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.i} {self.j}"


class LSet:
    """An immutable set of equal-length strings over a ``k``-letter alphabet.

    The empty set keeps a nominal ``length`` but compares equal to every other
    empty set over the same alphabet.
    """

    __slots__ = ("length", "k", "codes", "_hash")

    def __init__(self, length: int, codes: Iterable[int] = (), k: int = 4) -> None:
        if length < 0:
            raise ValueError(f"length must be non-negative, got {length}")
        Alphabet(k)
        members = tuple(sorted(set(codes)))
        universe = k**length
        if members and (members[0] < 0 or members[-1] >= universe):
            raise ValueError(f"member code outside the universe of {k}^{length} strings")
        self.length = length
        self.k = k
        self.codes = members
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, length: int, codes: tuple[int, ...], k: int) -> LSet:
        # codes must already be sorted and unique
        obj = cls.__new__(cls)
        obj.length = length
        obj.k = k
        obj.codes = codes
        obj._hash = None
        return obj

    @classmethod
    def from_strings(cls, strings: Iterable[str], k: int = 4, length: int | None = None) -> LSet:
        strings = list(strings)
        if length is None:
            if not strings:
                raise ValueError("length is required for an empty set")
            length = len(strings[0])
        for s in strings:
            if len(s) != length:
                raise ValueError(f"string {s!r} does not have length {length}")
        return cls(length, (encode(s, k) for s in strings), k)

    @classmethod
    def empty(cls, length: int = 0, k: int = 4) -> LSet:
        return cls._trusted(length, (), k)

    @classmethod
    def from_dense(cls, mask: np.ndarray, length: int, k: int = 4) -> LSet:
        mask = np.asarray(mask, dtype=bool).reshape(-1)
        if mask.size != k**length:
            raise ValueError(f"dense mask has {mask.size} slots, expected {k**length}")
        return cls._trusted(length, tuple(int(c) for c in np.flatnonzero(mask)), k)

    def to_dense(self) -> np.ndarray:
        mask = np.zeros(self.k**self.length, dtype=bool)
        if self.codes:
            mask[np.fromiter(self.codes, dtype=np.int64, count=len(self.codes))] = True
        return mask

    @property
    def bits(self) -> int:
        """The set packed into one integer: bit ``c`` is set iff code ``c`` is a member."""
        out = 0
        for c in self.codes:
            out |= 1 << c
        return out

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.k)

    @property
    def strings(self) -> list[str]:
        return [decode(c, self.length, self.k) for c in self.codes]

    def __len__(self) -> int:
        return len(self.codes)

    def __bool__(self) -> bool:
        return bool(self.codes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.strings)

    def __contains__(self, item: object) -> bool:
        if not isinstance(item, str) or len(item) != self.length:
            return False
        try:
            code = encode(item, self.k)
        except ValueError:
            return False
        return _contains_sorted(self.codes, code)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LSet):
            return NotImplemented
        if self.k != other.k:
            return False
        if not self.codes and not other.codes:
            return True
        return self.length == other.length and self.codes == other.codes

    def __hash__(self) -> int:
        if self._hash is None:
            if self.codes:
                self._hash = hash((self.k, self.length, self.codes))
            else:
                self._hash = hash((self.k, "empty"))
        return self._hash

    def __lt__(self, other: LSet) -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (self.length, self.codes)

    def __or__(self, other: LSet) -> LSet:
        if not other.codes:
            return self
        if not self.codes:
            return other
        if other.length != self.length or other.k != self.k:
            raise ValueError("union of sets with different lengths or alphabets")
        return LSet(self.length, self.codes + other.codes, self.k)

    def issubset(self, other: LSet) -> bool:
        if not self.codes:
            return True
        return self.length == other.length and set(self.codes) <= set(other.codes)

    def __repr__(self) -> str:
        if not self.codes:
            return f"LSet.empty({self.length}, k={self.k})"
        shown = ", ".join(repr(s) for s in self.strings[:8])
        more = ", ..." if len(self.codes) > 8 else ""
        return f"LSet({{{shown}{more}}}, l={self.length}, k={self.k})"


def _contains_sorted(codes: tuple[int, ...], code: int) -> bool:
    import bisect

    pos = bisect.bisect_left(codes, code)
    return pos < len(codes) and codes[pos] == code


def start_state(k: int = 4) -> LSet:
    """The 3-set ``{"acb"}``."""
    return LSet.from_strings(["acb"], k=k)


def _check_label(length: int, i: int, j: int) -> None:
    if length < 3:
        raise TransitionError(f"transitions need length >= 3, got length {length}")
    if not 1 <= i <= length:
        raise TransitionError(f"i={i} is outside 1..{length}")
    if not 1 <= j <= length:
        raise TransitionError(f"j={j} is outside 1..{length}")
    if i >= j:
        raise TransitionError(f"i={i} must be smaller than j={j}")


class _Table:
    """Memoized per-code successors for one (k, l, i, j)."""

    __slots__ = ("k", "length", "i", "j", "cache", "head_div", "tail_mod", "mid_len")

    def __init__(self, k: int, length: int, i: int, j: int) -> None:
        self.k = k
        self.length = length
        self.i = i
        self.j = j
        self.cache: dict[int, tuple[int, ...]] = {}
        self.head_div = k ** (length - i)  # code // head_div == s_1..s_i
        self.tail_mod = k ** (length - j + 1)  # code % tail_mod == s_j..s_l
        self.mid_len = j - i + 1

    def __call__(self, code: int) -> tuple[int, ...]:
        hit = self.cache.get(code)
        if hit is not None:
            return hit
        k = self.k
        head = code // self.head_div
        tail = code % self.tail_mod
        window = (code // (self.tail_mod // k)) % (k**self.mid_len)
        used = 0
        for _ in range(self.mid_len):
            window, d = divmod(window, k)
            used |= 1 << d
        base = head * k
        out = tuple((base + c) * self.tail_mod + tail for c in range(k) if not used >> c & 1)
        self.cache[code] = out
        return out


@lru_cache(maxsize=None)
def _table(k: int, length: int, i: int, j: int) -> _Table:
    return _Table(k, length, i, j)


def result_length(length: int, i: int, j: int) -> int:
    return length + i + 2 - j


def apply_string(s: str, i: int, j: int, k: int = 4) -> LSet:
    """Collapse ``s_i..s_j`` to ``s_i c s_j`` for each letter ``c`` missing from it."""
    _check_label(len(s), i, j)
    return LSet._trusted(result_length(len(s), i, j), _table(k, len(s), i, j)(encode(s, k)), k)


def apply_set(L: LSet, i: int, j: int, method: str = "auto") -> LSet:
    """Union of :func:`apply_string` over the members of ``L``.

    ``method`` selects the sparse (per-member table) path, the dense
    (whole-universe array) path, or ``"auto"``.
    """
    _check_label(L.length, i, j)
    new_len = result_length(L.length, i, j)
    if not L.codes:
        return LSet.empty(new_len, L.k)
    if method == "auto":
        universe = L.k**L.length
        method = "dense" if universe <= DENSE_UNIVERSE_LIMIT and len(L.codes) * 32 > universe else "sparse"
    if method == "sparse":
        return _apply_sparse(L, i, j, new_len)
    if method == "dense":
        return _apply_dense(L, i, j, new_len)
    raise ValueError(f"unknown method {method!r}")


def _apply_sparse(L: LSet, i: int, j: int, new_len: int) -> LSet:
    table = _table(L.k, L.length, i, j)
    out: set[int] = set()
    for code in L.codes:
        out.update(table(code))
    return LSet._trusted(new_len, tuple(sorted(out)), L.k)


@lru_cache(maxsize=None)
def _avoid_masks(k: int, mid: int) -> np.ndarray:
    """``masks[c, a, m, b]``: letter ``c`` is absent from ``a``, the middle ``m`` and ``b``."""
    words = np.arange(k ** (mid + 2))
    used = np.zeros((words.size, k), dtype=bool)
    rest = words.copy()
    for _ in range(mid + 2):
        rest, d = np.divmod(rest, k)
        used[np.arange(words.size), d] = True
    return (~used.T).reshape(k, k, k**mid, k)


def _apply_dense(L: LSet, i: int, j: int, new_len: int) -> LSet:
    k, length = L.k, L.length
    mid = j - i - 1
    grid = L.to_dense().reshape(k ** (i - 1), k, k**mid, k, k ** (length - j))
    masks = _avoid_masks(k, mid)
    # out[p, a, c, b, q] = any_m grid[p, a, m, b, q] & masks[c, a, m, b]
    out = np.einsum("pamby,camb->pacby", grid.astype(np.int32), masks.astype(np.int32)) > 0
    return LSet.from_dense(out, new_len, k)


def successors(L: LSet) -> list[tuple[TransitionLabel, LSet]]:
    """All ``C(l, 2)`` transitions of ``L`` in lexicographic label order."""
    if L.length < 3:
        raise TransitionError(f"transitions need length >= 3, got length {L.length}")
    return [
        (TransitionLabel(i, j), apply_set(L, i, j))
        for i, j in itertools.combinations(range(1, L.length + 1), 2)
    ]


@dataclass(frozen=True)
class DerivationScript:
    start: LSet
    steps: tuple[TransitionLabel, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(TransitionLabel(int(i), int(j)) for i, j in self.steps))

    def __len__(self) -> int:
        return len(self.steps)


def replay(script: DerivationScript) -> list[LSet]:
    """Return the state sequence ``L_1, ..., L_n`` of a script, start included.

    Once the empty set is reached it is carried through the remaining steps;
    their labels are still checked against the nominal length.
    """
    states = [script.start]
    current = script.start
    for idx, (i, j) in enumerate(script.steps, start=1):
        try:
            current = apply_set(current, i, j)
        except TransitionError as exc:
            raise ReplayError(idx, str(exc)) from exc
        states.append(current)
    return states


# -- symmetries --------------------------------------------------------------


def _perm_tuple(perm: Sequence[int] | dict | str, k: int) -> tuple[int, ...]:
    if isinstance(perm, str):
        perm = [LETTERS.index(ch) for ch in perm]
    elif isinstance(perm, dict):
        mapping = {
            (LETTERS.index(a) if isinstance(a, str) else a): (LETTERS.index(b) if isinstance(b, str) else b)
            for a, b in perm.items()
        }
        perm = [mapping.get(x, x) for x in range(k)]
    perm = tuple(int(x) for x in perm)
    if len(perm) != k or sorted(perm) != list(range(k)):
        raise ValueError(f"{perm} is not a permutation of {k} letters")
    return perm


def permute(L: LSet, perm: Sequence[int] | dict | str) -> LSet:
    """Relabel letters of every member; ``perm[x]`` is the image of letter ``x``.

    ``perm`` may be a sequence of indices, a string such as ``"abdc"``, or a
    dict of swapped letters such as ``{"c": "d", "d": "c"}``.
    """
    p = _perm_tuple(perm, L.k)
    return LSet._trusted(L.length, _map_codes(L, p, False), L.k)


def reverse(L: LSet) -> LSet:
    return LSet._trusted(L.length, _map_codes(L, tuple(range(L.k)), True), L.k)


def _map_codes(L: LSet, perm: tuple[int, ...], flip: bool) -> tuple[int, ...]:
    k, length = L.k, L.length
    out = []
    for code in L.codes:
        digits = decode_digits(code, length, k)
        if flip:
            digits = digits[::-1]
        out.append(encode([perm[d] for d in digits], k))
    out.sort()
    return tuple(out)


class Symmetry(NamedTuple):
    """A letter permutation, optionally followed by reversal of the strings."""

    perm: tuple[int, ...]
    flip: bool

    def apply(self, L: LSet) -> LSet:
        return LSet._trusted(L.length, _map_codes(L, self.perm, self.flip), L.k)

    def map_label(self, label: TransitionLabel, length: int) -> TransitionLabel:
        if not self.flip:
            return label
        return TransitionLabel(length + 1 - label.j, length + 1 - label.i)

    def is_identity(self) -> bool:
        return not self.flip and self.perm == tuple(range(len(self.perm)))


@lru_cache(maxsize=None)
def group_elements(group: str, k: int = 4) -> tuple[Symmetry, ...]:
    """Elements of a named symmetry group, identity first.

    ``cd`` swaps letters c and d; ``cd-rev`` adds reversal combined with the
    a/b swap; ``full`` is every letter permutation.
    """
    ident = tuple(range(k))
    if group == "none":
        return (Symmetry(ident, False),)
    if group in ("cd", "cd-rev"):
        if k < 4:
            raise ValueError(f"group {group!r} needs letters c and d (k >= 4)")
        cd = list(ident)
        cd[2], cd[3] = 3, 2
        elems = [Symmetry(ident, False), Symmetry(tuple(cd), False)]
        if group == "cd-rev":
            ab = list(ident)
            ab[0], ab[1] = 1, 0
            abcd = list(cd)
            abcd[0], abcd[1] = 1, 0
            elems += [Symmetry(tuple(ab), True), Symmetry(tuple(abcd), True)]
        return tuple(elems)
    if group == "full":
        return tuple(Symmetry(p, False) for p in itertools.permutations(ident))
    raise ValueError(f"unknown symmetry group {group!r}; expected one of {GROUPS}")


@lru_cache(maxsize=256)
def _code_maps(group: str, k: int, length: int) -> tuple[np.ndarray, ...] | None:
    universe = k**length
    if universe > DENSE_UNIVERSE_LIMIT:
        return None
    codes = np.arange(universe, dtype=np.int64)
    digits = np.empty((length, universe), dtype=np.int64)
    rest = codes.copy()
    for t in range(length - 1, -1, -1):
        rest, digits[t] = np.divmod(rest, k)
    maps = []
    for sym in group_elements(group, k)[1:]:
        d = digits[::-1] if sym.flip else digits
        perm = np.asarray(sym.perm, dtype=np.int64)[d]
        img = np.zeros(universe, dtype=np.int64)
        for t in range(length):
            img = img * k + perm[t]
        maps.append(img)
    return tuple(maps)


def canonical_codes(L: LSet, group: str = "cd") -> tuple[int, ...]:
    """Sorted member codes of the least image of ``L`` under ``group``."""
    best = L.codes
    if not best or group == "none":
        return best
    maps = _code_maps(group, L.k, L.length)
    if maps is None:
        for sym in group_elements(group, L.k)[1:]:
            img = _map_codes(L, sym.perm, sym.flip)
            if img < best:
                best = img
        return best
    arr = np.fromiter(best, dtype=np.int64, count=len(best))
    for table in maps:
        img = np.sort(table[arr])
        # cheap reject on the first member before building a tuple
        if img[0] > best[0]:
            continue
        cand = tuple(img.tolist())
        if cand < best:
            best = cand
    return best


def canonicalize(L: LSet, group: str = "cd") -> LSet:
    """Lexicographically least image of ``L`` under the selected symmetry group."""
    if group not in GROUPS:
        raise ValueError(f"unknown symmetry group {group!r}; expected one of {GROUPS}")
    return LSet._trusted(L.length, canonical_codes(L, group), L.k)


def find_symmetry(source: LSet, target: LSet, group: str) -> Symmetry:
    """Return the first group element mapping ``source`` onto ``target``."""
    for sym in group_elements(group, source.k):
        if sym.apply(source) == target:
            return sym
    raise ValueError("target is not in the orbit of source")

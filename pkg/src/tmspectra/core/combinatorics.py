"""Word combinatorics around the singularity coding.

Covers the neighbourhoods G_n of the singularity, hitting partitions of a
word, the language of words avoiding the forbidden (m+1)-prefixes, its
transfer matrix, and breadth-first search for closing extensions.
"""

from __future__ import annotations

import functools
import logging
import math
from collections import deque
from collections.abc import Callable, Iterable

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from tmspectra.core.potential import ExclusionZone
from tmspectra.core.resources import ensure_capacity
from tmspectra.errors import InvariantViolation
from tmspectra.models.bracket import Bracket, down, up
from tmspectra.models.domain import HALF, CircleParameter, DyadicWord
from tmspectra.models.results import (
    ExtensionResult,
    ForbiddenAutomaton,
    HittingPartition,
    MarkovReport,
    SingularityCoding,
)

logger = logging.getLogger("tmspectra.combinatorics")

EXHAUSTIVE_KAPPA_DEPTH = 16
SEARCH_SLACK = 8
MAX_COUNT_LENGTH = 62
POWER_ITERATIONS = 10_000


def singularity_coding(param: CircleParameter, exact: bool | None = None) -> SingularityCoding:
    """Coding of the singularity c + 1/2.

    ``exact`` defaults to whether c was given as a rational; forcing it off
    makes prefixes come from the float, guarded against boundary ambiguity.
    """
    use_exact = param.is_exact if exact is None else exact and param.is_exact
    if exact and not param.is_exact:
        logger.warning("Exact coding requested for float c = %r; using the float", param.c)
    dyadic = False
    if use_exact:
        den = param.singularity_exact.denominator
        dyadic = den & (den - 1) == 0
    return SingularityCoding(parameter=param, is_dyadic=dyadic, exact=use_exact)


@functools.lru_cache(maxsize=1024)
def _g_values(coding: SingularityCoding, n: int) -> frozenset[int]:
    size = 1 << n
    if coding.splits_at(n):
        return frozenset({coding.prefix(n).value, coding.dual_prefix(n).value})
    centre = coding.prefix(n).value
    return frozenset({centre, (centre + 1) % size, (centre - 1) % size})


def _in_g(coding: SingularityCoding, value: int, length: int) -> bool:
    if length == 0:
        return True
    return value in _g_values(coding, length)


def g_n(coding: SingularityCoding, n: int) -> frozenset[DyadicWord]:
    """Words of length n whose cylinder contains or neighbours the singularity.

    Where the two dyadic expansions of the singularity differ, G_n holds
    exactly those two prefixes.
    """
    if n < 1:
        raise ValueError(f"G_n needs n >= 1, got {n}")
    return frozenset(DyadicWord(v, n) for v in _g_values(coding, n))


def in_g(coding: SingularityCoding, word: DyadicWord) -> bool:
    return _in_g(coding, word.value, word.length)


def hitting_partition(coding: SingularityCoding, word: DyadicWord) -> HittingPartition:
    """Hitting depth of each position k of w.

    Position k has depth j when w[k..j] is in G but w[k..j+1] is not; it is
    a full hitting time (None) when w[k..n] is in G.
    """
    n = word.length
    depths: list[int | None] = []
    for k in range(1, n + 1):
        if not in_g(coding, word.factor(k, k)):
            raise InvariantViolation(
                f"G_1 must contain both letters (c = {coding.parameter.label()})"
            )
        end = k
        while end < n and in_g(coding, word.factor(k, end + 1)):
            end += 1
        depths.append(None if end == n else end)
    partition = HittingPartition(word=word, depths=tuple(depths))
    if sum(len(ks) for ks in partition.classes().values()) != n:
        raise InvariantViolation(f"hitting classes of {word} do not partition its positions")
    return partition


def _suffix_hits(coding: SingularityCoding, values: np.ndarray, n: int) -> np.ndarray:
    """Number of suffixes of each length-n word that lie in G."""
    counts = np.zeros(values.shape[0], dtype=np.int64)
    for length in range(1, n + 1):
        members = np.fromiter(_g_values(coding, length), dtype=np.int64)
        counts += np.isin(values & ((1 << length) - 1), members)
    return counts


def kappa(coding: SingularityCoding, word: DyadicWord) -> int:
    """Number of full hitting times of w."""
    return int(_suffix_hits(coding, np.array([word.value], dtype=np.int64), word.length)[0])


def kappa_max(
    coding: SingularityCoding, n: int, samples: int | None = None, seed: int = 0
) -> int:
    """max of kappa over words of length n; sampled when ``samples`` is given or n > 16."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if samples is None and n <= EXHAUSTIVE_KAPPA_DEPTH:
        values = np.arange(1 << n, dtype=np.int64)
    else:
        if n > MAX_COUNT_LENGTH:
            raise ValueError(f"sampled kappa supports n <= {MAX_COUNT_LENGTH}, got {n}")
        rng = np.random.default_rng(seed)
        count = samples or 1 << EXHAUSTIVE_KAPPA_DEPTH
        values = rng.integers(0, 1 << n, size=count, dtype=np.int64)
    return int(_suffix_hits(coding, values, n).max())


def kappa_ratios(
    coding: SingularityCoding, lengths: Iterable[int], samples: int | None = None, seed: int = 0
) -> list[tuple[int, int, float]]:
    """(n, kappa_n, kappa_n / sqrt(n)) rows for the boundedness diagnostic."""
    rows = []
    for n in lengths:
        k = kappa_max(coding, n, samples=samples, seed=seed)
        rows.append((n, k, k / math.sqrt(n)))
    return rows


def forbidden_words(coding: SingularityCoding, m: int) -> tuple[DyadicWord, ...]:
    """The (m+1)-prefixes of the singularity expansions (one or two words)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    words = {coding.prefix(m + 1), coding.dual_prefix(m + 1)}
    return tuple(sorted(words, key=lambda w: w.value))


def exclusion_zone(coding: SingularityCoding, m: int) -> ExclusionZone:
    """Open arcs whose points are removed from X_m."""
    return ExclusionZone.from_closed_intervals(
        [(w.left, w.right) for w in forbidden_words(coding, m)]
    )


def forbidden_automaton(coding: SingularityCoding, m: int) -> ForbiddenAutomaton:
    """Transfer graph on admissible (m+1)-words; s -> ((s << 1) | a) mod 2^(m+1)."""
    forbidden = tuple(w.value for w in forbidden_words(coding, m))
    size = 1 << (m + 1)
    ensure_capacity(48 * size, f"forbidden-word automaton for m = {m}")
    admissible = np.ones(size, dtype=bool)
    admissible[list(forbidden)] = False
    states = np.flatnonzero(admissible)
    index = np.full(size, -1, dtype=np.int64)
    index[states] = np.arange(states.shape[0])

    rows, cols = [], []
    for letter in (0, 1):
        targets = ((states << 1) | letter) & (size - 1)
        keep = admissible[targets]
        rows.append(np.flatnonzero(keep))
        cols.append(index[targets[keep]])
    row = np.concatenate(rows)
    col = np.concatenate(cols)
    matrix = sparse.csr_matrix(
        (np.ones(row.shape[0], dtype=np.int64), (row, col)),
        shape=(states.shape[0], states.shape[0]),
    )
    logger.debug("automaton m=%d: %d states, forbidden %s", m, states.shape[0], forbidden)
    return ForbiddenAutomaton(
        m=m,
        states=tuple(int(s) for s in states),
        forbidden=forbidden,
        matrix=matrix,
    )


def word_count(aut: ForbiddenAutomaton, n: int) -> int:
    """|Sigma_m^n|: 1^T A^(n-m-1) 1 for n >= m+1, and 2^n below that."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n <= aut.m:
        return 1 << n
    if n > MAX_COUNT_LENGTH:
        raise ValueError(f"word counts are kept in int64; n <= {MAX_COUNT_LENGTH} required")
    vec = np.ones(aut.state_count, dtype=np.int64)
    for _ in range(n - aut.m - 1):
        vec = aut.matrix @ vec
    return int(vec.sum())


def enumerate_admissible(coding: SingularityCoding, m: int, n: int) -> np.ndarray:
    """Values of the n-words with no forbidden (m+1)-factor (all words when m >= n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ensure_capacity(24 * (1 << n), f"admissible words of length {n}")
    values = np.arange(1 << n, dtype=np.int64)
    if m >= n:
        return values
    forbidden = np.array([w.value for w in forbidden_words(coding, m)], dtype=np.int64)
    mask = (1 << (m + 1)) - 1
    ok = np.ones(values.shape[0], dtype=bool)
    for shift in range(n - m):
        ok &= ~np.isin((values >> shift) & mask, forbidden)
    return values[ok]


def _essential(matrix: sparse.csr_matrix) -> np.ndarray:
    """States that lie on a bi-infinite path: trim sources and sinks until stable."""
    alive = np.ones(matrix.shape[0], dtype=bool)
    while True:
        sub = matrix[alive][:, alive]
        out_deg = np.asarray(sub.sum(axis=1)).ravel()
        in_deg = np.asarray(sub.sum(axis=0)).ravel()
        keep = (out_deg > 0) & (in_deg > 0)
        if keep.all():
            return np.flatnonzero(alive)
        idx = np.flatnonzero(alive)
        alive[idx[~keep]] = False


def _period(matrix: sparse.csr_matrix) -> int:
    """gcd of level[u] + 1 - level[v] over edges, from a BFS of a strongly connected graph."""
    level = np.full(matrix.shape[0], -1, dtype=np.int64)
    level[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in matrix.indices[matrix.indptr[u]:matrix.indptr[u + 1]]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(int(v))
    coo = matrix.tocoo()
    return int(np.gcd.reduce(np.abs(level[coo.row] + 1 - level[coo.col])))


def _spectral_bracket(matrix: sparse.csr_matrix) -> Bracket:
    """Collatz-Wielandt bounds from power iteration on A + I."""
    if matrix.shape[0] == 0:
        return Bracket(0.0, 0.0)
    shifted = (matrix + sparse.identity(matrix.shape[0], format="csr")).astype(np.float64)
    x = np.ones(matrix.shape[0])
    lo, hi = 0.0, math.inf
    for _ in range(POWER_ITERATIONS):
        y = shifted @ x
        ratios = y / x
        lo, hi = max(lo, float(ratios.min())), min(hi, float(ratios.max()))
        if hi - lo <= 1e-13 * hi:
            break
        x = y / np.linalg.norm(y)
    return Bracket(max(0.0, down(lo - 1.0)), up(hi - 1.0))


def markov_check(aut: ForbiddenAutomaton) -> MarkovReport:
    """Irreducibility, period and spectral radius of the automaton's essential part."""
    full_components, _ = csgraph.connected_components(
        aut.matrix, directed=True, connection="strong"
    )
    essential = _essential(aut.matrix)
    sub = aut.matrix[essential][:, essential]
    if essential.shape[0] == 0:
        return MarkovReport(
            irreducible=False,
            aperiodic=False,
            period=0,
            spectral_radius=Bracket(0.0, 0.0),
            essential_count=0,
            state_count=aut.state_count,
        )
    n_components, labels = csgraph.connected_components(sub, directed=True, connection="strong")
    irreducible = n_components == 1
    if irreducible:
        period = _period(sub)
    else:
        largest = int(np.bincount(labels).argmax())
        members = np.flatnonzero(labels == largest)
        period = _period(sub[members][:, members])
    radius = _spectral_bracket(sub)
    report = MarkovReport(
        irreducible=irreducible,
        aperiodic=irreducible and period == 1,
        period=period,
        spectral_radius=radius,
        essential_count=int(essential.shape[0]),
        state_count=aut.state_count,
        full_irreducible=full_components == 1,
    )
    logger.info(
        "markov check m=%d: irreducible=%s period=%d radius=%s",
        aut.m, report.irreducible, report.period, report.spectral_radius,
    )
    return report


def extension_envelope(n: int, factor: float = 2.0) -> float:
    """factor * log2(log_{3/2} n), floored at 4."""
    inner = max(math.log(max(n, 1)) / math.log(1.5), 1.0)
    return max(4.0, factor * math.log2(inner))


Alive = frozenset[int]
Step = Callable[[Alive, int, int, int], Alive]


def _bfs(
    start: Alive,
    step: Step,
    max_length: int,
) -> tuple[int, int] | None:
    """Shortest (value, length) extension driving the alive set empty."""
    if not start:
        return 0, 0
    queue: deque[tuple[int, int, Alive]] = deque([(0, 0, start)])
    while queue:
        value, length, alive = queue.popleft()
        if length == max_length:
            continue
        for letter in (0, 1):
            nxt = step(alive, value, length, letter)
            v = (value << 1) | letter
            if not nxt:
                return v, length + 1
            queue.append((v, length + 1, nxt))
    return None


def _closing_step(coding: SingularityCoding, word: DyadicWord) -> Step:
    n = word.length

    def step(alive: Alive, value: int, length: int, letter: int) -> Alive:
        v = (value << 1) | letter
        kept = set()
        for k in alive:
            suffix_len = n - k + 1
            suffix = word.value & ((1 << suffix_len) - 1)
            if _in_g(coding, (suffix << (length + 1)) | v, suffix_len + length + 1):
                kept.add(k)
        return frozenset(kept)

    return step


def _is_prefix(coding: SingularityCoding, value: int, length: int) -> bool:
    return value in (coding.prefix(length).value, coding.dual_prefix(length).value)


def _no_prefix_step(coding: SingularityCoding, word: DyadicWord) -> Step:
    n = word.length

    def step(alive: Alive, value: int, length: int, letter: int) -> Alive:
        v = (value << 1) | letter
        total = n + length + 1
        full = (word.value << (length + 1)) | v
        kept = {total} if _is_prefix(coding, letter, 1) else set()
        for k in alive:
            tail = total - k + 1
            if _is_prefix(coding, full & ((1 << tail) - 1), tail):
                kept.add(k)
        return frozenset(kept)

    return step


def extension_search(
    coding: SingularityCoding,
    word: DyadicWord,
    no_prefix: bool = False,
    max_length: int | None = None,
) -> ExtensionResult:
    """Shortest v such that the extended word closes every singular excursion.

    By default every w[k..n] v must leave G. With ``no_prefix`` no suffix of
    w v may be a prefix of the singularity expansion, which requires
    c not in {0, 1/2}.
    """
    n = word.length
    if no_prefix:
        c = coding.parameter.c_exact
        if c in (0, HALF):
            raise ValueError("the no-prefix extension needs c not in {0, 1/2}")
        envelope = extension_envelope(n, factor=5.0)
        start = frozenset(
            k for k in range(1, n + 1)
            if _is_prefix(coding, word.value & ((1 << (n - k + 1)) - 1), n - k + 1)
        )
        step = _no_prefix_step(coding, word)
    else:
        envelope = extension_envelope(n)
        start = frozenset(
            k for k in range(1, n + 1)
            if _in_g(coding, word.value & ((1 << (n - k + 1)) - 1), n - k + 1)
        )
        step = _closing_step(coding, word)
    cap = max_length if max_length is not None else int(envelope) + SEARCH_SLACK
    found = _bfs(start, step, cap)
    if found is None:
        raise InvariantViolation(
            f"no extension of {word} within length {cap} (c = {coding.parameter.label()})"
        )
    value, length = found
    if length > envelope:
        logger.info("extension of length %d exceeds envelope %.2f for n = %d", length, envelope, n)
    return ExtensionResult(
        word=word,
        extension=DyadicWord(value, length),
        envelope=envelope,
        no_prefix=no_prefix,
    )


def no_prefix_extension(coding: SingularityCoding, word: DyadicWord) -> ExtensionResult:
    return extension_search(coding, word, no_prefix=True)

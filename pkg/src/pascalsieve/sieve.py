"""The coset sieve over many primes.

For one prime p the generator images Q_1..Q_r turn a coefficient vector
n in Z^r into alpha_p(n) = sum n_j * Q_j in J(F_p), and a vector can only
belong to a curve point if alpha_p(n) lands in the target set
T_p = iota_p(C(F_p)).  That condition only depends on n mod m, where m is
the exponent of the subgroup the Q_j generate, so it carves (Z/m)^r into
allowed and forbidden cosets.  Intersecting the conditions of many primes
inside the coefficient box |n_j| < N_max shrinks the haystack.

The survivor set W is kept as an explicit, deterministically ordered list
of residue vectors mod B (B = lcm of consumed exponents), with one twist:
classes that contain no integer vector inside the box are dropped at each
step.  W therefore tracks the intersection with the box, which is what the
search wants and what keeps the list desk-scale small; without the box cut
the class count grows multiplicatively with every prime.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize
from .curve import HyperellipticModel, PASCAL_CURVE, elliptic_model
from .errors import BadReductionError, ConfigError, GrowthError, SkipPrime
from .jacobian import (
    Jacobian,
    MumfordDivisor,
    RationalJacobianPoint,
    element_order,
    group_order,
    reduce_rational_point,
)

# ---------------------------------------------------------------------------
# the haystack


@dataclass(frozen=True)
class CoefficientBox:
    """H = { n in Z^r : |n_j| < nmax } -- the coefficient haystack."""

    rank: int
    nmax: int

    def __post_init__(self):
        if self.rank < 1 or self.nmax < 1:
            raise ValueError("rank and nmax must be >= 1")

    def contains(self, vec) -> bool:
        return all(abs(n) < self.nmax for n in vec)


def haystack_size(box: CoefficientBox) -> int:
    """Exact |H| = (2*nmax - 1)^rank."""
    return (2 * box.nmax - 1) ** box.rank


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class SieveInstance:
    name: str
    model: HyperellipticModel
    rank: int
    generators: tuple[RationalJacobianPoint, ...]
    nmax: int
    prime_ceiling: int = 200
    survivor_ceiling: int = 500_000
    include_identity_target: bool = True  # iota(infinity) in T_p?
    schedule: str = "auto"  # auto | given
    primes: tuple[int, ...] = ()
    max_primes: int = 25
    ext_ceiling: int = 3000
    stall_limit: int = 3
    elliptic_ab: tuple[int, int] | None = None

    def __post_init__(self):
        if self.rank != len(self.generators):
            raise ConfigError(
                f"rank {self.rank} != number of generators {len(self.generators)}"
            )
        if self.schedule not in ("auto", "given"):
            raise ConfigError(f"unknown schedule {self.schedule!r}")
        if self.schedule == "given" and not self.primes:
            raise ConfigError("schedule=given requires a primes list")

    @property
    def box(self) -> CoefficientBox:
        return CoefficientBox(self.rank, self.nmax)


# ---------------------------------------------------------------------------
# per-prime local data


class LocalData:
    """Everything mod p: generator images, group order, subgroup exponent,
    and the target set T_p."""

    def __init__(self, inst: SieveInstance, p: int):
        model = inst.model
        if not model.is_good(p):
            raise SkipPrime(p, "bad prime for the curve model")
        self.p = p
        self.rank = inst.rank
        self.jac = Jacobian(model, p)
        try:
            self.gens = tuple(
                reduce_rational_point(self.jac, P) for P in inst.generators
            )
        except BadReductionError as e:
            raise SkipPrime(p, str(e)) from e
        local = group_order(model, p, inst.ext_ceiling)
        self.order = local.order
        self.n1 = local.counts.n1
        factors = factorize(self.order)
        self.exponent = 1
        for Q in self.gens:
            self.exponent = math.lcm(
                self.exponent, element_order(self.jac, Q, self.order, factors)
            )
        pts = model.enumerate_points(p)
        if not inst.include_identity_target:
            pts = [q for q in pts if not q.is_infinity]
        self.targets = frozenset(self.jac.embed(q) for q in pts)
        self._tables: list[list[MumfordDivisor]] | None = None
        self._mask: bytearray | None = None

    def _build_tables(self):
        tables = []
        for Q in self.gens:
            row = [self.jac.identity]
            for _ in range(self.exponent - 1):
                row.append(self.jac.add(row[-1], Q))
            tables.append(row)
        self._tables = tables
        if self.rank == 1:
            self._mask = bytearray(
                1 if D in self.targets else 0 for D in tables[0]
            )

    def alpha(self, nvec) -> MumfordDivisor:
        """alpha_p(n) = sum n_j Q_j; factors through (Z/m)^r."""
        if len(nvec) != self.rank:
            raise ValueError(f"expected {self.rank} coefficients, got {len(nvec)}")
        if self._tables is None:
            self._build_tables()
        D = self._tables[0][nvec[0] % self.exponent]
        for j in range(1, self.rank):
            D = self.jac.add(D, self._tables[j][nvec[j] % self.exponent])
        return D

    def passes(self, nvec) -> bool:
        """Membership of alpha_p(n) in T_p."""
        if self._tables is None:
            self._build_tables()
        if self._mask is not None:
            return bool(self._mask[nvec[0] % self.exponent])
        return self.alpha(nvec) in self.targets

    def pass_count(self) -> int:
        """Exact number of passing classes in Z/m (rank-1 only)."""
        if self.rank != 1:
            raise ValueError("pass_count is exact only for rank 1")
        if self._tables is None:
            self._build_tables()
        return sum(self._mask)


def compute_local_data(inst: SieveInstance, p: int) -> LocalData:
    return LocalData(inst, p)


def alpha_p(local: LocalData, nvec) -> MumfordDivisor:
    return local.alpha(tuple(nvec))


def lambda_p_test(local: LocalData, nvec) -> bool:
    return local.passes(tuple(nvec))


def measure_pass_rate(local: LocalData, samples: int, rng) -> Fraction:
    """Monte Carlo estimate of the passing fraction of (Z/m)^r."""
    m = local.exponent
    hits = sum(
        1
        for _ in range(samples)
        if local.passes(tuple(rng.randrange(m) for _ in range(local.rank)))
    )
    return Fraction(hits, samples)


# ---------------------------------------------------------------------------
# survivor state and refinement


@dataclass(frozen=True)
class SieveState:
    modulus: int
    survivors: tuple[tuple[int, ...], ...]
    primes: tuple[int, ...]

    @classmethod
    def initial(cls, rank: int) -> "SieveState":
        return cls(modulus=1, survivors=((0,) * rank,), primes=())


def _rep_range(w: int, B: int, nmax: int) -> range:
    """k-range such that w + k*B runs over the in-box integers of the class."""
    lo, hi = -(nmax - 1), nmax - 1
    klo = -((w - lo) // B)
    khi = (hi - w) // B
    return range(klo, khi + 1)


def _lifted_residues(w: int, B: int, B2: int, nmax: int) -> list[int]:
    """Residues mod B2 of the in-box integers congruent to w mod B."""
    return sorted({(w + k * B) % B2 for k in _rep_range(w, B, nmax)})


def box_count(state: SieveState, box: CoefficientBox) -> int:
    """Exact number of integer vectors in the box covered by the survivors."""
    total = 0
    for w in state.survivors:
        prod = 1
        for wj in w:
            prod *= len(_rep_range(wj, state.modulus, box.nmax))
        total += prod
    return total


def vectors_in_box(state: SieveState, box: CoefficientBox) -> list[tuple[int, ...]]:
    """All integer vectors in the box congruent to a survivor class."""
    out = []
    for w in state.survivors:
        axes = [
            [wj + k * state.modulus for k in _rep_range(wj, state.modulus, box.nmax)]
            for wj in w
        ]
        out.extend(itertools.product(*axes))
    out.sort()
    return out


def sieve_refine(
    state: SieveState, local: LocalData, box: CoefficientBox, ceiling: int
) -> SieveState:
    """Consume one prime: lift W to lcm(B, m), test each in-box lift, keep
    the passers.  Lifts of distinct classes are distinct, conditions from
    earlier primes persist because every lift agrees with its parent mod B.
    """
    B = state.modulus
    m = local.exponent
    B2 = math.lcm(B, m)
    # pre-count the candidate lifts: this bounds both work and result size
    axes_per_w = []
    total = 0
    for w in state.survivors:
        axes = [_lifted_residues(wj, B, B2, box.nmax) for wj in w]
        n = 1
        for a in axes:
            n *= len(a)
        total += n
        axes_per_w.append(axes)
    if total > ceiling:
        raise GrowthError(local.p, total, ceiling)
    survivors = []
    for axes in axes_per_w:
        for cand in itertools.product(*axes):
            if local.passes(cand):
                survivors.append(cand)
    survivors.sort()
    return SieveState(
        modulus=B2, survivors=tuple(survivors), primes=state.primes + (local.p,)
    )


# ---------------------------------------------------------------------------
# prime selection


def retained_estimate(local: LocalData) -> Fraction:
    """|T_p| / m^r: the coset-counting estimate of the surviving fraction."""
    return Fraction(len(local.targets), local.exponent**local.rank)


def candidate_score(state: SieveState, local: LocalData) -> Fraction:
    """Expected shrink per lift cost, as an exact rational.

    shrink is the reciprocal of the retained-fraction estimate |T_p|/m^r;
    cost is the modulus jump (lcm(B, m)/B)^r.  Larger is better.
    """
    r = local.rank
    cost = Fraction(math.lcm(state.modulus, local.exponent), state.modulus) ** r
    return 1 / (retained_estimate(local) * cost)


def select_next_prime(state: SieveState, candidates: list[LocalData]) -> LocalData:
    """Deterministic greedy choice: maximal score, ties to the smaller p.
    Exponent-1 candidates carry no condition and are picked only if nothing
    else is left."""
    if not candidates:
        raise ValueError("no candidate primes")
    informative = [c for c in candidates if c.exponent > 1]
    pool = informative or candidates
    return max(pool, key=lambda c: (candidate_score(state, c), -c.p))


# ---------------------------------------------------------------------------
# the full run


@dataclass(frozen=True)
class PrimeRow:
    p: int
    exponent: int
    target_count: int
    group_order: int
    classes: int
    in_box: int


@dataclass(frozen=True)
class SieveResult:
    instance: str
    rank: int
    nmax: int
    initial_box: int
    state: SieveState
    rows: tuple[PrimeRow, ...]
    skipped: tuple[tuple[int, str], ...]
    stalled: bool

    @property
    def unique_lift(self) -> bool:
        return self.state.modulus >= 2 * self.nmax

    def survivor_vectors(self) -> list[tuple[int, ...]] | None:
        if not self.unique_lift:
            return None
        return vectors_in_box(self.state, CoefficientBox(self.rank, self.nmax))

    def report(self) -> str:
        """Deterministic CSV: per-prime rows, survivors, summary block."""
        lines = [
            "section,field1,field2,field3,field4,field5,field6",
            f"meta,instance,{self.instance},,,,",
            f"meta,rank,{self.rank},,,,",
            f"meta,nmax,{self.nmax},,,,",
        ]
        for row in self.rows:
            lines.append(
                f"prime,{row.p},{row.exponent},{row.target_count},"
                f"{row.group_order},{row.classes},{row.in_box}"
            )
        for p, reason in self.skipped:
            lines.append(f"skipped,{p},{reason},,,,")
        vectors = self.survivor_vectors()
        if vectors is None:
            for w in self.state.survivors:
                coords = ";".join(str(x) for x in w)
                lines.append(f"class,{self.state.modulus},{coords},,,,")
        else:
            for vec in vectors:
                coords = ";".join(str(x) for x in vec)
                lines.append(f"vector,{coords},,,,,")
        box = CoefficientBox(self.rank, self.nmax)
        lines += [
            f"summary,initial_box,{self.initial_box},,,,",
            f"summary,primes_used,{len(self.state.primes)},,,,",
            f"summary,modulus,{self.state.modulus},,,,",
            f"summary,classes,{len(self.state.survivors)},,,,",
            f"summary,in_box,{box_count(self.state, box)},,,,",
            f"summary,stalled,{int(self.stalled)},,,,",
        ]
        return "\n".join(lines) + "\n"


def run_sieve(inst: SieveInstance) -> SieveResult:
    """Iterate local data + prime selection + refinement until the prime
    budget is spent or the in-box survivor count stops decreasing."""
    box = inst.box
    state = SieveState.initial(inst.rank)
    rows: list[PrimeRow] = []
    skipped: list[tuple[int, str]] = []
    stalled = False

    if inst.schedule == "given":
        plan = list(inst.primes)
    else:
        plan = inst.model.good_primes(2, inst.prime_ceiling)

    pool: list[LocalData] = []
    for p in plan:
        try:
            pool.append(compute_local_data(inst, p))
        except SkipPrime as e:
            skipped.append((e.p, e.reason))

    last_count = box_count(state, box)
    stall = 0
    used = 0
    while used < inst.max_primes:
        if inst.schedule == "given":
            if used >= len(pool):
                break
            local = pool[used]
        else:
            remaining = [c for c in pool if c.p not in state.primes]
            if not remaining:
                break
            local = select_next_prime(state, remaining)
        state = sieve_refine(state, local, box, inst.survivor_ceiling)
        used += 1
        count = box_count(state, box)
        rows.append(
            PrimeRow(
                p=local.p,
                exponent=local.exponent,
                target_count=len(local.targets),
                group_order=local.order,
                classes=len(state.survivors),
                in_box=count,
            )
        )
        if count == 0:
            break
        if inst.schedule == "auto":
            if count >= last_count:
                stall += 1
                if stall >= inst.stall_limit:
                    stalled = True
                    break
            else:
                stall = 0
        last_count = count

    return SieveResult(
        instance=inst.name,
        rank=inst.rank,
        nmax=inst.nmax,
        initial_box=haystack_size(box),
        state=state,
        rows=tuple(rows),
        skipped=tuple(skipped),
        stalled=stalled,
    )


# ---------------------------------------------------------------------------
# the rational side of the demonstration curve (genus 1, chord-tangent)
#
# Exact Fraction arithmetic; used to find a generator by bounded search, to
# express known integral points as multiples of it, and to verify survivors.

QPoint = tuple[Fraction, Fraction]  # None stands for the point at infinity


def rational_on_curve(ab: tuple[int, int], P: QPoint | None) -> bool:
    if P is None:
        return True
    a, b = ab
    x, y = P
    return y * y == x * x * x + a * x + b


def rational_point_add(ab, P: QPoint | None, Q: QPoint | None) -> QPoint | None:
    a, _ = ab
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2 and y1 + y2 == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + a) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def rational_negate(P: QPoint | None) -> QPoint | None:
    if P is None:
        return None
    return (P[0], -P[1])


def rational_scalar_mul(ab, n: int, P: QPoint | None) -> QPoint | None:
    if n < 0:
        n, P = -n, rational_negate(P)
    acc = None
    sq = P
    while n:
        if n & 1:
            acc = rational_point_add(ab, acc, sq)
        n >>= 1
        if n:
            sq = rational_point_add(ab, sq, sq)
    return acc


def integral_points_search(ab: tuple[int, int], bound: int) -> list[tuple[int, int]]:
    """All integral points (x, y) with |x| <= bound, by direct search."""
    a, b = ab
    out = []
    for x in range(-bound, bound + 1):
        w = x * x * x + a * x + b
        if w < 0:
            continue
        r = math.isqrt(w)
        if r * r != w:
            continue
        if r == 0:
            out.append((x, 0))
        else:
            out.append((x, -r))
            out.append((x, r))
    out.sort()
    return out


def find_generator(ab: tuple[int, int], bound: int) -> QPoint:
    """The integral point with smallest |x| (positive y preferred); serves
    as the declared rank-1 generator of the demonstration instance."""
    pts = integral_points_search(ab, bound)
    pts = [q for q in pts if q[1] != 0]  # 2-torsion cannot generate rank
    if not pts:
        raise ConfigError(f"no integral generator with |x| <= {bound}")
    x, y = min(pts, key=lambda q: (abs(q[0]), -q[1]))
    return (Fraction(x), Fraction(y))


def coefficient_vector(ab, gen: QPoint, point: tuple[int, int], nbound: int) -> int:
    """The n with n * gen = point, |n| <= nbound, by exact rational stepping."""
    target = (Fraction(point[0]), Fraction(point[1]))
    acc = None
    for n in range(nbound + 1):
        if acc == target:
            return n
        if acc is not None and acc == rational_negate(target):
            return -n
        acc = rational_point_add(ab, acc, gen)
    raise ValueError(f"{point} is not an |n| <= {nbound} multiple of the generator")


# ---------------------------------------------------------------------------
# instance configuration files
#
# Line-oriented key = value grammar; '#' starts a comment.  Rational
# coefficients are written num/den.  Example:
#
#     kind = elliptic
#     curve = 0 -2
#     rank = 1
#     generator = search 100        # or: point 3 5 / mumford -3 1 ; 5
#     nmax = 30
#     targets = affine
#     schedule = given
#     primes = 5 7 13 19 29 101 173 229 263 1103


def _parse_fraction(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad rational literal {tok!r}") from e


def _parse_int(tok: str, key: str) -> int:
    try:
        return int(tok)
    except ValueError as e:
        raise ConfigError(f"{key}: expected an integer, got {tok!r}") from e


def parse_instance_config(text: str, name: str = "instance") -> SieveInstance:
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        pairs.append((key.lower(), val))

    opts = {}
    gen_specs = []
    for key, val in pairs:
        if key == "generator":
            gen_specs.append(val)
        elif key in opts:
            raise ConfigError(f"duplicate key {key!r}")
        else:
            opts[key] = val

    kind = opts.pop("kind", None)
    if kind not in ("genus2", "elliptic"):
        raise ConfigError(f"kind must be genus2 or elliptic, got {kind!r}")

    elliptic_ab = None
    if kind == "genus2":
        if "curve" in opts:
            raise ConfigError("kind=genus2 uses the built-in quintic; drop 'curve'")
        model = PASCAL_CURVE
    else:
        toks = opts.pop("curve", "").split()
        if len(toks) != 2:
            raise ConfigError("kind=elliptic needs 'curve = a b'")
        a, b = (_parse_int(t, "curve") for t in toks)
        try:
            model = elliptic_model(a, b)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        elliptic_ab = (a, b)

    generators = []
    for spec in gen_specs:
        toks = spec.split()
        if not toks:
            raise ConfigError("empty generator spec")
        form, rest = toks[0], toks[1:]
        if form == "point":
            if len(rest) != 2:
                raise ConfigError("generator point needs: point x y")
            x, y = (_parse_fraction(t) for t in rest)
            try:
                generators.append(RationalJacobianPoint.from_curve_point(x, y, model))
            except ValueError as e:
                raise ConfigError(f"generator {spec!r}: {e}") from e
        elif form == "mumford":
            joined = " ".join(rest)
            if ";" not in joined:
                raise ConfigError("generator mumford needs: mumford u... ; v...")
            upart, vpart = joined.split(";", 1)
            u = [_parse_fraction(t) for t in upart.split()]
            v = [_parse_fraction(t) for t in vpart.split()]
            try:
                generators.append(RationalJacobianPoint.from_pair(u, v, model))
            except ValueError as e:
                raise ConfigError(f"generator {spec!r}: {e}") from e
        elif form == "search":
            if kind != "elliptic" or len(rest) != 1:
                raise ConfigError("generator search is 'search <bound>' on elliptic instances")
            gen = find_generator(elliptic_ab, _parse_int(rest[0], "search bound"))
            generators.append(
                RationalJacobianPoint.from_curve_point(gen[0], gen[1], model)
            )
        else:
            raise ConfigError(f"unknown generator form {form!r}")

    targets = opts.pop("targets", "curve")
    if targets not in ("curve", "affine"):
        raise ConfigError("targets must be 'curve' or 'affine'")

    primes = tuple(
        _parse_int(t, "primes") for t in opts.pop("primes", "").split()
    )

    inst = SieveInstance(
        name=opts.pop("name", name),
        model=model,
        rank=_parse_int(opts.pop("rank", str(len(generators))), "rank"),
        generators=tuple(generators),
        nmax=_parse_int(opts.pop("nmax", "1"), "nmax"),
        prime_ceiling=_parse_int(opts.pop("prime_ceiling", "200"), "prime_ceiling"),
        survivor_ceiling=_parse_int(
            opts.pop("survivor_ceiling", "500000"), "survivor_ceiling"
        ),
        include_identity_target=(targets == "curve"),
        schedule=opts.pop("schedule", "auto"),
        primes=primes,
        max_primes=_parse_int(opts.pop("max_primes", "25"), "max_primes"),
        ext_ceiling=_parse_int(opts.pop("ext_ceiling", "3000"), "ext_ceiling"),
        elliptic_ab=elliptic_ab,
    )
    if opts:
        raise ConfigError(f"unknown keys: {', '.join(sorted(opts))}")
    return inst


def load_instance(path) -> SieveInstance:
    from pathlib import Path

    p = Path(path)
    return parse_instance_config(p.read_text(), name=p.stem)

"""Brute-force ground truth on explicit matrix groups over small finite fields.

Groups are realised as sets of matrices. Small groups are found by filtering
the whole ambient matrix space; larger ones by sampling random isometries of
a pinned form (column by column) and closing under multiplication until the
order matches the classical order formula, which certifies the result.
Omega is produced as the closure of commutators of SO elements, certified by
index 2 in SO.

Field elements of GF(p^e) are integers ``0 <= x < p^e`` whose base-p digits
are the coefficients of a polynomial in a root of the pinned irreducible
polynomial. Matrices are integer numpy arrays holding such codes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .arith import is_prime_power, r_part
from .engine import center_order
from .errors import BudgetExceeded, CapExceeded, ClosureStalled, OutOfRange
from .tori import Family, GroupSpec

__all__ = [
    "IRREDUCIBLES",
    "FiniteField",
    "field_of",
    "FormData",
    "form_for",
    "MatrixGroupInstance",
    "group_order_formula",
    "build_group",
    "element_order",
    "element_orders",
    "brute_proportion",
    "torus_regular_check",
    "BUDGETS",
    "FIXTURE_SCHEMA",
    "FIXTURE_CASES",
    "fixtures_path",
    "load_fixtures",
    "dump_fixtures",
    "fixture_record",
    "fixture_spec",
    "regenerate_fixtures",
    "verify_instance",
]

# Conway polynomials, coefficients from the constant term up (monic).
IRREDUCIBLES = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}

BUDGETS = {"tiny": 1_000, "small": 20_000, "default": 1_000_000}
AMBIENT_MAX = 200_000
ORDER_CAP = 10_000


class FiniteField:
    """GF(p^e) with full addition and multiplication tables."""

    def __init__(self, p: int, e: int = 1):
        if e > 1 and (p, e) not in IRREDUCIBLES:
            raise OutOfRange(f"no pinned polynomial for GF({p}^{e})")
        self.p, self.e, self.order = p, e, p**e
        size = self.order
        digits = np.array([[(x // p**i) % p for i in range(e)] for x in range(size)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        add = (digits[:, None, :] + digits[None, :, :]) % p
        self.add = (add @ weights).astype(np.int64)
        self.neg = ((-digits) % p) @ weights
        self.mul = np.array([[self._poly_mul(a, b) for b in range(size)] for a in range(size)], dtype=np.int64)
        inv = np.zeros(size, dtype=np.int64)
        for a in range(1, size):
            inv[a] = int(np.nonzero(self.mul[a] == 1)[0][0])
        self.inv = inv

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.e)]

    def _poly_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        if e > 1:
            poly = IRREDUCIBLES[(p, e)]
            for k in range(2 * e - 2, e - 1, -1):
                c = prod[k]
                if c:
                    for i in range(e + 1):
                        prod[k - e + i] = (prod[k - e + i] - c * poly[i]) % p
        return sum(prod[i] * p**i for i in range(e))

    def power(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = int(self.mul[out, a])
        return out

    @cached_property
    def frobenius_table(self) -> np.ndarray:
        """``x -> x^(p^(e/2))``, the involution of GF(q^2) over GF(q)."""
        if self.e % 2:
            raise OutOfRange("field has no quadratic subfield")
        k = self.p ** (self.e // 2)
        return np.array([self.power(x, k) for x in range(self.order)], dtype=np.int64)

    def is_square(self, a: int) -> bool:
        return bool(np.any(self.mul.diagonal() == a))

    # batched linear algebra -------------------------------------------------

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (A @ B) % self.p
        out = self.mul[A[..., :, 0, None], B[..., None, 0, :]]
        for k in range(1, A.shape[-1]):
            out = self.add[out, self.mul[A[..., :, k, None], B[..., None, k, :]]]
        return out

    def dot(self, w: np.ndarray, V: np.ndarray) -> np.ndarray:
        """``sum_k w[k] V[..., k]`` for a single row vector ``w``."""
        if self.e == 1:
            return (V @ w) % self.p
        out = self.mul[w[0], V[..., 0]]
        for k in range(1, V.shape[-1]):
            out = self.add[out, self.mul[w[k], V[..., k]]]
        return out

    def det(self, M: np.ndarray) -> np.ndarray:
        """Batched determinant by the Leibniz expansion (small dimensions only)."""
        d = M.shape[-1]
        total = np.zeros(M.shape[:-2], dtype=np.int64)
        for perm in itertools.permutations(range(d)):
            term = M[..., 0, perm[0]]
            for i in range(1, d):
                term = self.mul[term, M[..., i, perm[i]]]
            inversions = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
            if inversions % 2:
                term = self.neg[term]
            total = self.add[total, term]
        return total


_FIELDS: dict[tuple[int, int], FiniteField] = {}


def field_of(order: int) -> FiniteField:
    pp = is_prime_power(order)
    key = (pp.p, pp.e)
    if key not in _FIELDS:
        _FIELDS[key] = FiniteField(pp.p, pp.e)
    return _FIELDS[key]


@dataclass(frozen=True)
class FormData:
    kind: str  # "none", "symplectic", "symmetric", "hermitian"
    gram: np.ndarray | None
    epsilon: int = 0  # +1 / -1 for even-dimensional orthogonal groups

    def __hash__(self) -> int:
        return hash((self.kind, self.epsilon, None if self.gram is None else self.gram.tobytes()))


def _antidiag(d: int) -> np.ndarray:
    return np.fliplr(np.eye(d, dtype=np.int64))


def form_for(spec: GroupSpec, F: FiniteField) -> FormData:
    fam, d, p = spec.family.so_twin, spec.d, F.p
    if fam is Family.SL:
        return FormData("none", None)
    if fam is Family.SU:
        return FormData("hermitian", np.eye(d, dtype=np.int64))
    if fam is Family.Sp:
        J = _antidiag(d)
        J[d // 2:, :] = (-J[d // 2:, :]) % p
        return FormData("symplectic", J)
    if fam is Family.SOodd:
        return FormData("symmetric", np.eye(d, dtype=np.int64))
    if fam is Family.SOplus:
        return FormData("symmetric", _antidiag(d), 1)
    # hyperbolic planes plus the anisotropic plane x^2 - nu y^2, nu a non-square
    nu = next(a for a in range(1, F.order) if not F.is_square(a))
    J = np.zeros((d, d), dtype=np.int64)
    J[: d - 2, : d - 2] = _antidiag(d - 2)
    J[d - 2, d - 2] = 1
    J[d - 1, d - 1] = int(F.neg[nu])
    return FormData("symmetric", J, -1)


def group_order_formula(spec: GroupSpec) -> int:
    """Order of the matrix group (divided by the centre when ``spec.projective``)."""
    fam, n, q, d = spec.family, spec.n, spec.q, spec.d
    base = fam.so_twin
    if base is Family.SL:
        order = q ** (d * (d - 1) // 2) * math.prod(q**i - 1 for i in range(2, d + 1))
    elif base is Family.SU:
        order = q ** (d * (d - 1) // 2) * math.prod(q**i - (-1) ** i for i in range(2, d + 1))
    elif base in (Family.Sp, Family.SOodd):
        order = q ** (n * n) * math.prod(q ** (2 * i) - 1 for i in range(1, n + 1))
    else:
        eps = 1 if base is Family.SOplus else -1
        order = q ** (n * (n - 1)) * (q**n - eps) * math.prod(q ** (2 * i) - 1 for i in range(1, n))
    if fam.is_omega:
        order //= 2
    if spec.projective:
        order //= center_order(spec.matrix_group())
    return order


@dataclass
class MatrixGroupInstance:
    spec: GroupSpec  # the matrix group (projective flag cleared)
    field: FiniteField
    form: FormData
    elements: np.ndarray  # shape (order, d, d)
    strategy: str
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def d(self) -> int:
        return self.elements.shape[-1]

    def key(self, M: np.ndarray) -> bytes:
        return np.ascontiguousarray(M, dtype=np.uint8).tobytes()

    def contains(self, M: np.ndarray) -> bool:
        if not self._index:
            self._index.update((self.key(E), i) for i, E in enumerate(self.elements))
        return self.key(M) in self._index

    def center(self) -> list[np.ndarray]:
        """Scalar matrices in the group (these make up the centre for these groups)."""
        out = []
        for lam in range(1, self.field.order):
            S = np.eye(self.d, dtype=np.int64) * lam
            if self.contains(S):
                out.append(S)
        return out


def _preserves(F: FiniteField, form: FormData, M: np.ndarray) -> bool:
    if form.kind == "none":
        return True
    left = F.frobenius_table[M] if form.kind == "hermitian" else M
    lhs = F.matmul(F.matmul(np.swapaxes(left, -1, -2), form.gram), M)
    return bool(np.array_equal(lhs, form.gram))


def _isometry_sampler(F: FiniteField, form: FormData, rng: np.random.Generator):
    """Uniform random isometries of ``form``, built one column at a time.

    Column ``j`` is drawn uniformly among vectors with the prescribed inner
    products against the earlier columns and itself; by Witt's theorem every
    partial choice extends, so the resulting matrix is uniform.
    """
    J = form.gram
    d = J.shape[0]
    V = np.array(list(itertools.product(range(F.order), repeat=d)), dtype=np.int64)
    conj = F.frobenius_table if form.kind == "hermitian" else np.arange(F.order)
    # conj(v)^T J v for every vector v
    cJV = F.matmul(conj[V][:, None, :], np.broadcast_to(J, (1, d, d)))[:, 0, :]
    self_pair = np.zeros(len(V), dtype=np.int64)
    for k in range(d):
        self_pair = F.add[self_pair, F.mul[cJV[:, k], V[:, k]]]

    while True:
        cols = []
        ok = True
        for j in range(d):
            mask = self_pair == J[j, j]
            for i, c in enumerate(cols):
                w = F.matmul(conj[c][None, None, :], J[None])[0, 0]
                mask &= F.dot(w, V) == J[i, j]
            candidates = np.nonzero(mask)[0]
            if len(candidates) == 0:
                ok = False
                break
            cols.append(V[rng.choice(candidates)])
        if ok:
            yield np.stack(cols, axis=1)


def _random_matrices(F: FiniteField, d: int, rng: np.random.Generator):
    while True:
        yield rng.integers(0, F.order, size=(d, d), dtype=np.int64)


def _closure(F: FiniteField, gens: list[np.ndarray], budget: int, target: int) -> np.ndarray:
    d = gens[0].shape[0]
    identity = np.eye(d, dtype=np.int64)
    seen = {np.ascontiguousarray(identity, dtype=np.uint8).tobytes()}
    elements = [identity[None]]
    frontier = identity[None]
    while len(frontier):
        fresh = []
        for g in gens:
            prods = F.matmul(frontier, np.broadcast_to(g, frontier.shape))
            keys = [np.ascontiguousarray(P, dtype=np.uint8).tobytes() for P in prods]
            for P, k in zip(prods, keys):
                if k not in seen:
                    seen.add(k)
                    fresh.append(P)
            if len(seen) > budget:
                raise BudgetExceeded(f"closure passed the budget of {budget} elements")
            if len(seen) > target:
                raise ClosureStalled(f"closure exceeded the expected order {target}")
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, d, d)
        elements.append(frontier)
    return np.concatenate(elements)


def build_group(spec: GroupSpec, budget: int | str = "default", seed: int = 0, max_gens: int = 8) -> MatrixGroupInstance:
    """Realise the matrix group of ``spec`` as an explicit element set."""
    if isinstance(budget, str):
        budget = BUDGETS[budget]
    matrix = spec.matrix_group()
    fam = matrix.family
    target = group_order_formula(matrix)
    if target > budget:
        raise BudgetExceeded(f"|{matrix.label}| = {target} exceeds the budget of {budget} elements")
    F = field_of(matrix.q**2 if fam is Family.SU else matrix.q)
    form = form_for(matrix, F)
    d = matrix.d
    need_det = fam not in (Family.Sp,)
    rng = np.random.default_rng(seed)

    ambient = F.order ** (d * d)
    if form.kind == "none" and ambient <= AMBIENT_MAX:
        every = np.array(list(itertools.product(range(F.order), repeat=d * d)), dtype=np.int64).reshape(-1, d, d)
        elements = every[F.det(every) == 1]
        if len(elements) != target:
            raise ClosureStalled(f"filtered {len(elements)} matrices, expected {target}")
        return MatrixGroupInstance(matrix, F, form, elements, "ambient")

    source = _random_matrices(F, d, rng) if form.kind == "none" else _isometry_sampler(F, form, rng)

    def draw():
        for _ in range(100_000):
            M = next(source)
            if need_det and int(F.det(M)) != 1:
                continue
            assert _preserves(F, form, M)
            return M
        raise ClosureStalled("sampler found no element with determinant 1")

    def commutator(g, h):
        gi, hi = _inverse(F, g), _inverse(F, h)
        return F.matmul(F.matmul(gi, hi), F.matmul(g, h))

    gens: list[np.ndarray] = []
    for _ in range(max_gens):
        gens.append(commutator(draw(), draw()) if fam.is_omega else draw())
        if len(gens) < 2:
            continue
        elements = _closure(F, gens, budget, target)
        if len(elements) == target:
            return MatrixGroupInstance(matrix, F, form, elements, "sampled-closure")
    raise ClosureStalled(f"{len(gens)} random generators gave only a proper subgroup of {matrix.label}")


def _inverse(F: FiniteField, M: np.ndarray) -> np.ndarray:
    """Matrix inverse by Gauss-Jordan elimination over the field."""
    d = M.shape[0]
    A = np.concatenate([M.copy(), np.eye(d, dtype=np.int64)], axis=1)
    for col in range(d):
        pivot = next(i for i in range(col, d) if A[i, col])
        A[[col, pivot]] = A[[pivot, col]]
        A[col] = F.mul[F.inv[A[col, col]], A[col]]
        for i in range(d):
            if i != col and A[i, col]:
                A[i] = F.add[A[i], F.neg[F.mul[A[i, col], A[col]]]]
    return A[:, d:]


def _is_scalar(P: np.ndarray) -> np.ndarray:
    d = P.shape[-1]
    diag = np.diagonal(P, axis1=-2, axis2=-1)
    off = P * (1 - np.eye(d, dtype=np.int64))
    return (off == 0).all(axis=(-2, -1)) & (diag == diag[..., :1]).all(axis=-1)


def element_orders(F: FiniteField, elements: np.ndarray, cap: int = ORDER_CAP, modulo_scalars: bool = False) -> np.ndarray:
    """Orders of a batch of matrices (of their images modulo scalars if asked)."""
    d = elements.shape[-1]
    identity = np.eye(d, dtype=np.int64)
    orders = np.zeros(len(elements), dtype=np.int64)
    P = elements.copy()
    for k in range(1, cap + 1):
        hit = _is_scalar(P) if modulo_scalars else (P == identity).all(axis=(-2, -1))
        orders[(orders == 0) & hit] = k
        if (orders > 0).all():
            return orders
        P = F.matmul(P, elements)
    raise CapExceeded(f"some element has order above {cap}")


def element_order(M: np.ndarray, F: FiniteField, cap: int = ORDER_CAP) -> int:
    return int(element_orders(F, np.asarray(M, dtype=np.int64)[None], cap)[0])


def brute_proportion(spec: GroupSpec, r: int, group: MatrixGroupInstance | None = None,
                     budget: int | str = "default") -> Fraction:
    """Count r-regular elements directly (cosets of the centre for projective specs)."""
    if group is None:
        group = build_group(spec, budget)
    orders = element_orders(group.field, group.elements, modulo_scalars=spec.projective)
    regular = int(np.count_nonzero(orders % r))
    if spec.projective:
        # each coset gZ holds |Z| elements with the same coset order
        z = len(group.center())
        assert z == center_order(spec.matrix_group())
        return Fraction(regular // z, group.order // z)
    return Fraction(regular, group.order)


def torus_regular_check(m: int, r: int) -> Fraction:
    """Proportion of residues in Z/m whose additive order is prime to ``r``."""
    if not 1 <= m <= 10**6:
        raise OutOfRange("m must lie in 1..10^6")
    k = np.arange(m, dtype=np.int64)
    additive_orders = m // np.gcd(k, m)
    return Fraction(int(np.count_nonzero(additive_orders % r)), m)


def expected_torus_ratio(m: int, r: int) -> Fraction:
    return Fraction(1, r_part(m, r))


# ---------------------------------------------------------------- fixtures

FIXTURE_SCHEMA = "regprop.oracle-fixtures/1"

# (family, rank, q, projective, r)
FIXTURE_CASES = [
    ("SL", 1, 3, False, 2),
    ("SL", 1, 2, False, 3),
    ("SL", 1, 3, True, 2),
    ("SU", 2, 3, False, 2),
    ("Sp", 2, 3, False, 2),
    ("SOodd", 2, 3, False, 2),
    ("OmegaOdd", 2, 3, False, 2),
    ("SOplus", 2, 3, False, 2),
    ("SL", 1, 5, True, 2),
    ("Sp", 2, 3, True, 2),
]


def fixtures_path():
    from importlib import resources

    return resources.files("regprop") / "data" / "oracle_fixtures.json"


def fixture_record(spec: GroupSpec, r: int, value: Fraction, order: int) -> dict:
    return {
        "family": spec.family.value,
        "n": spec.n,
        "q": spec.q,
        "projective": spec.projective,
        "r": r,
        "group": spec.label,
        "order": order,
        "num": str(value.numerator),
        "den": str(value.denominator),
    }


def fixture_spec(record: dict) -> tuple[GroupSpec, int, Fraction]:
    spec = GroupSpec(record["family"], record["n"], record["q"], record["projective"])
    return spec, record["r"], Fraction(int(record["num"]), int(record["den"]))


def regenerate_fixtures(budget: int | str = "default", seed: int = 0,
                        failures: list | None = None) -> list[dict]:
    """Recompute every fixture by brute force, sharing built groups between cases.

    With ``failures`` given, groups over budget are recorded there as
    ``(label, error)`` and skipped instead of raising.
    """
    built: dict[GroupSpec, MatrixGroupInstance] = {}
    failed: dict[GroupSpec, BudgetExceeded] = {}
    out = []
    for fam, n, q, projective, r in FIXTURE_CASES:
        spec = GroupSpec(fam, n, q, projective)
        matrix = spec.matrix_group()
        if matrix in failed:
            failures.append((spec.label, failed[matrix]))
            continue
        if matrix not in built:
            try:
                built[matrix] = build_group(matrix, budget, seed)
            except BudgetExceeded as exc:
                if failures is None:
                    raise
                failures.append((spec.label, exc))
                failed[matrix] = exc
                continue
        value = brute_proportion(spec, r, built[matrix])
        out.append(fixture_record(spec, r, value, group_order_formula(spec)))
    return out


def load_fixtures(path=None) -> list[dict]:
    import json

    text = (fixtures_path() if path is None else path).read_text()
    data = json.loads(text)
    if data.get("schema") != FIXTURE_SCHEMA:
        raise ValueError(f"unexpected fixture schema {data.get('schema')!r}")
    return data["fixtures"]


def dump_fixtures(records: list[dict], path) -> None:
    import json

    payload = {"schema": FIXTURE_SCHEMA, "fixtures": records}
    path.write_text(json.dumps(payload, indent=2) + "\n")


def verify_instance(group: MatrixGroupInstance, samples: int = 10_000, seed: int = 1) -> None:
    """Spot-check closure under products and inverses, and the identity."""
    rng = np.random.default_rng(seed)
    F, E = group.field, group.elements
    assert group.contains(np.eye(group.d, dtype=np.int64))
    assert group.order == group_order_formula(group.spec)
    i = rng.integers(0, len(E), samples)
    j = rng.integers(0, len(E), samples)
    prods = F.matmul(E[i], E[j])
    assert all(group.contains(P) for P in prods)
    for k in i[: min(samples, 200)]:
        assert group.contains(_inverse(F, E[k]))
    assert all(_preserves(F, group.form, E[k]) for k in i[:200])

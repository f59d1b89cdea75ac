"""Finite-dimensional matrix model of the cylinder ``Ê = (E × E'' × E'')_2``.

``E`` is real ``n``-space and the canonical map into the bidual is an
explicit matrix ``phi`` (``n2 × n``; the identity in the standard model,
where ``E''`` is identified with ``E`` and ``u''`` with ``u``).  Keeping
``phi`` explicit lets singular or rectangular maps exercise the branches
where no factorization or projector exists.

Operators act on column vectors: an operator ``E -> F`` is a
``dim F × dim E`` matrix and composition is the matrix product.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, ContractError
from .fincat import FinCategory, Morphism
from .hstruct import HomotopicalStructure
from .instances import InstanceBundle

DEFAULT_TOL = 1e-9
PIVOT_RTOL = 1e-10


@dataclass(frozen=True)
class Space:
    dim: int
    phi: np.ndarray | None = None

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        phi = np.eye(self.dim) if self.phi is None else np.asarray(self.phi, dtype=float)
        if phi.ndim != 2 or phi.shape[1] != self.dim:
            raise ValueError(f"phi must have {self.dim} columns, got shape {phi.shape}")
        object.__setattr__(self, "phi", phi)

    @property
    def bidual_dim(self) -> int:
        return self.phi.shape[0]


@dataclass(frozen=True)
class BlockOperator:
    matrix: np.ndarray
    row_blocks: tuple[int, ...]
    col_blocks: tuple[int, ...]

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if m.shape != (sum(self.row_blocks), sum(self.col_blocks)):
            raise ValueError(f"matrix shape {m.shape} does not match blocks {self.row_blocks} x {self.col_blocks}")
        object.__setattr__(self, "matrix", m)

    def block(self, r: int, c: int) -> np.ndarray:
        ro = np.cumsum((0,) + self.row_blocks)
        co = np.cumsum((0,) + self.col_blocks)
        return self.matrix[ro[r]:ro[r + 1], co[c]:co[c + 1]]


@dataclass(frozen=True)
class StructureKit:
    """``i = [I; phi; 0]``, ``j = [I; 0; phi]``, ``p = [I 0 0]``, ``k`` swaps the
    two bidual blocks and ``j_of_p`` is ``(x, x'', y'') -> (x, 0, phi x)``."""

    n: int
    phi: np.ndarray
    i: np.ndarray
    j: np.ndarray
    p: np.ndarray
    k: np.ndarray
    j_of_p: np.ndarray

    @property
    def blocks(self) -> tuple[int, int, int]:
        n2 = self.phi.shape[0]
        return (self.n, n2, n2)

    @property
    def hat_dim(self) -> int:
        return sum(self.blocks)


def build_structure(n: int, phi: np.ndarray | None = None) -> StructureKit:
    space = Space(n, phi)
    phi, n2 = space.phi, space.bidual_dim
    eye = np.eye(n)
    z_n2n = np.zeros((n2, n))
    i = np.vstack([eye, phi, z_n2n])
    j = np.vstack([eye, z_n2n, phi])
    p = np.hstack([eye, np.zeros((n, 2 * n2))])
    k = np.zeros((n + 2 * n2, n + 2 * n2))
    k[:n, :n] = eye
    k[n:n + n2, n + n2:] = np.eye(n2)
    k[n + n2:, n:n + n2] = np.eye(n2)
    return StructureKit(n, phi, i, j, p, k, j @ p)


def hat_norm(x: np.ndarray, blocks: Sequence[int]) -> float:
    """ℓ² direct-sum norm of ``(x, x'', y'')``."""
    x = np.asarray(x, dtype=float)
    edges = np.cumsum((0,) + tuple(blocks))
    return float(np.sqrt(sum(np.linalg.norm(x[a:b]) ** 2 for a, b in zip(edges, edges[1:]))))


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a)) if a.size else 0.0


# rank-revealing elimination

def rank_revealing(a: np.ndarray, rtol: float = PIVOT_RTOL) -> tuple[int, list[int]]:
    """Numerical rank and pivot columns by Gaussian elimination with complete pivoting.

    Elimination stops once the largest remaining entry is at most
    ``rtol`` times the first (largest) pivot.
    """
    a = np.array(a, dtype=float)
    m, n = a.shape
    cols = list(range(n))
    first = None
    r = 0
    while r < min(m, n):
        sub = np.abs(a[r:, r:])
        bi, bj = np.unravel_index(np.argmax(sub), sub.shape)
        piv = sub[bi, bj]
        if first is None:
            first = piv
        if piv == 0.0 or piv <= rtol * first:
            break
        a[[r, r + bi]] = a[[r + bi, r]]
        a[:, [r, r + bj]] = a[:, [r + bj, r]]
        cols[r], cols[r + bj] = cols[r + bj], cols[r]
        a[r + 1:, r:] -= np.outer(a[r + 1:, r] / a[r, r], a[r, r:])
        r += 1
    return r, sorted(cols[:r])


def pseudo_inverse(a: np.ndarray, rtol: float = PIVOT_RTOL) -> np.ndarray:
    """Moore-Penrose inverse from the full-rank factorization ``A = C R``.

    ``C`` holds the pivot columns found by :func:`rank_revealing` and
    ``A⁺ = R⁺ C⁺``.  Both factors are inverted through QR (``C = Q₁R₁``,
    ``Rᵀ = Q₂R₂``) rather than normal equations, so the conditioning of
    ``A`` is not squared.
    """
    a = np.asarray(a, dtype=float)
    r, piv = rank_revealing(a, rtol)
    if r == 0:
        return np.zeros(a.shape[::-1])
    # (sA)⁺ = A⁺/s; normalizing keeps the factors clear of under/overflow
    s = float(np.abs(a).max())
    a = a / s
    q1, r1 = np.linalg.qr(a[:, piv])
    c_pinv = np.linalg.solve(r1, q1.T)
    q2, r2 = np.linalg.qr((c_pinv @ a).T)
    return q2 @ np.linalg.solve(r2.T, c_pinv) / s


# axiom witnesses

def axiom3_witness(H: np.ndarray, Hstar: np.ndarray, kit: StructureKit, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``H** = H + H* - H∘(j∘p)`` for a pair with ``H*∘i = H∘j``."""
    H = np.asarray(H, dtype=float)
    Hstar = np.asarray(Hstar, dtype=float)
    if H.shape != Hstar.shape or H.shape[1] != kit.hat_dim:
        raise ContractError(f"H {H.shape} and H* {Hstar.shape} must both have {kit.hat_dim} columns")
    gap = _norm(Hstar @ kit.i - H @ kit.j)
    if gap > tol * (1.0 + _norm(H) + _norm(Hstar)):
        raise ContractError(f"precondition H*∘i = H∘j violated (residual {gap:.3e})")
    return H + Hstar - H @ kit.j_of_p


def lift_operator(
    U: np.ndarray, kit_e: StructureKit, kit_f: StructureKit, U_bidual: np.ndarray | None = None
) -> np.ndarray:
    """``û = diag(u, u'', u'')``.

    ``u''`` defaults to ``phi_F u phi_E⁻¹`` (just ``u`` when both canonical
    maps are identities); pass ``U_bidual`` when ``phi_E`` is not invertible.
    """
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape != (kit_f.n, kit_e.n):
        raise ContractError(f"operator shape {U.shape} does not match {kit_f.n}x{kit_e.n}")
    if U_bidual is None:
        if kit_e.phi.shape[0] != kit_e.n or rank_revealing(kit_e.phi)[0] < kit_e.n:
            raise ContractError("phi_E is not invertible; pass U_bidual explicitly")
        U_bidual = kit_f.phi @ U @ np.linalg.inv(kit_e.phi) if kit_e.n else np.zeros((kit_f.phi.shape[0], 0))
    U_bidual = np.asarray(U_bidual, dtype=float).reshape(kit_f.phi.shape[0], kit_e.phi.shape[0])
    out = np.zeros((kit_f.hat_dim, kit_e.hat_dim))
    ro = np.cumsum((0,) + kit_f.blocks)
    co = np.cumsum((0,) + kit_e.blocks)
    for b, blk in enumerate((U, U_bidual, U_bidual)):
        out[ro[b]:ro[b + 1], co[b]:co[b + 1]] = blk
    return out


# factorization through the bidual

def factor_through_bidual(
    U: np.ndarray, V: np.ndarray, phi: np.ndarray, tol: float = DEFAULT_TOL
) -> np.ndarray | None:
    """Minimum-norm ``W`` with ``W∘phi = U - V``, or None if no such ``W`` exists.

    Solvable iff ``(U - V)(I - phi⁺ phi)`` vanishes, tested against
    ``tol * (1 + ‖U - V‖)``.
    """
    D = np.asarray(U, dtype=float) - np.asarray(V, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if D.ndim != 2 or D.shape[1] != phi.shape[1]:
        raise ContractError(f"U - V has shape {D.shape}, phi has shape {phi.shape}")
    pinv = pseudo_inverse(phi)
    resid = _norm(D @ (np.eye(phi.shape[1]) - pinv @ phi))
    if resid > tol * (1.0 + _norm(D)):
        return None
    return D @ pinv


def homotopy_from_factor(V: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``h(x, x'', y'') = v x + w x''``, i.e. ``H = [V, W, 0]``."""
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    if V.ndim != 2 or W.ndim != 2 or V.shape[0] != W.shape[0]:
        raise ContractError(f"V {V.shape} and W {W.shape} must have the same number of rows")
    return np.hstack([V, W, np.zeros_like(W)])


def factor_from_homotopy(H: np.ndarray | BlockOperator, blocks: Sequence[int] | None = None) -> np.ndarray:
    """``w(x'') = h(0, x'', -x'')``."""
    if isinstance(H, BlockOperator):
        blocks = H.col_blocks
        H = H.matrix
    H = np.asarray(H, dtype=float)
    if blocks is None:
        if H.shape[1] % 3:
            raise ContractError(f"cannot infer (n, n, n) blocks from {H.shape[1]} columns")
        blocks = (H.shape[1] // 3,) * 3
    n, n2, n3 = blocks
    if n2 != n3 or H.shape[1] != n + 2 * n2:
        raise ContractError(f"blocks {tuple(blocks)} do not fit H with {H.shape[1]} columns")
    return H[:, n:n + n2] - H[:, n + n2:]


def contractibility_projector(phi: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Left inverse ``W`` of ``phi`` and the projector ``P = phi W`` onto its range.

    None when ``phi`` lacks full column rank.
    """
    phi = np.atleast_2d(np.asarray(phi, dtype=float))
    n = phi.shape[1]
    if rank_revealing(phi)[0] < n:
        return None
    # W = (phiᵀphi)⁻¹phiᵀ, evaluated as R⁻¹Qᵀ from phi = QR to avoid squaring cond(phi)
    q, r = np.linalg.qr(phi)
    W = np.linalg.solve(r, q.T)
    return W, phi @ W


# numeric axiom check

@dataclass
class NumericAxiomReport:
    tol: float
    status: dict[str, bool] = field(default_factory=dict)
    residuals: dict[str, dict[int, float]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.status.values())

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "status": {a: ("pass" if ok else "fail") for a, ok in self.status.items()},
            "residuals": {a: {str(n): r for n, r in res.items()} for a, res in self.residuals.items()},
        }


def valid_axiom3_pair(H: np.ndarray, R: np.ndarray, kit: StructureKit) -> np.ndarray:
    """An ``H*`` with ``H*∘i = H∘j``: ``H j p + R (I - i p)``."""
    return H @ kit.j @ kit.p + R @ (np.eye(kit.hat_dim) - kit.i @ kit.p)


def check_axioms_numeric(
    dims: Iterable[int],
    tol: float = DEFAULT_TOL,
    *,
    seed: int = 0,
    samples: int = 4,
    kits: Mapping[int, StructureKit] | None = None,
) -> NumericAxiomReport:
    """Replay the four axioms in the matrix model for each dimension.

    III uses random valid pairs and the closed-form witness, IV random
    operators between every pair of listed dimensions; residuals for III
    and IV are relative to ``1 + ‖inputs‖``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dims = list(dims)
    rng = np.random.default_rng(seed)
    kits = {n: (kits or {}).get(n) or build_structure(n) for n in dims}
    res: dict[str, dict[int, float]] = {a: {} for a in ("I", "II", "III", "IV")}
    for n in dims:
        kit = kits[n]
        eye = np.eye(n)
        res["I"][n] = max(_norm(kit.p @ kit.i - eye), _norm(kit.p @ kit.j - eye))
        res["II"][n] = max(_norm(kit.k @ kit.i - kit.j), _norm(kit.k @ kit.j - kit.i))
        worst = 0.0
        for _ in range(samples):
            m = int(rng.integers(1, 4))
            H = rng.standard_normal((m, kit.hat_dim))
            Hs = valid_axiom3_pair(H, rng.standard_normal((m, kit.hat_dim)), kit)
            try:
                H2 = axiom3_witness(H, Hs, kit, tol)
            except ContractError:
                worst = float("inf")
                continue
            scale = 1.0 + _norm(H) + _norm(Hs)
            worst = max(worst, _norm(H2 @ kit.i - H @ kit.i) / scale, _norm(H2 @ kit.j - Hs @ kit.j) / scale)
        res["III"][n] = worst
        worst = 0.0
        for m in dims:
            U = rng.standard_normal((m, n))
            Uh = lift_operator(U, kit, kits[m])
            scale = 1.0 + _norm(U)
            worst = max(
                worst,
                _norm(Uh @ kit.i - kits[m].i @ U) / scale,
                _norm(Uh @ kit.j - kits[m].j @ U) / scale,
            )
        res["IV"][n] = worst
    status = {a: all(r <= tol for r in vals.values()) for a, vals in res.items()}
    return NumericAxiomReport(tol, status, res)


# bridge into the finite-category engine

def _key(m: np.ndarray) -> bytes:
    return (np.round(m, 9) + 0.0).tobytes()


def sampled_category(
    dims: Sequence[int],
    generators: Sequence[tuple[str, str, np.ndarray]] = (),
    *,
    cap: int = 5000,
) -> InstanceBundle:
    """Finite subcategory of the matrix model closed under composition.

    Objects ``E{n}`` and ``E{n}^`` for each ``n`` in ``dims`` (base: the
    ``E{n}``).  Generated by identities, zero maps, ``i``, ``j``, ``p``,
    ``k``, the homotopy ``[0, I, 0]`` witnessing ``1 ~ 0``, the caller's
    ``(src, dst, matrix)`` generators and their lifts.  Raises
    :class:`BudgetExceeded` if the closure passes ``cap`` morphisms.
    """
    kits = {n: build_structure(n) for n in dims}
    dim_of: dict[str, int] = {}
    objects: list[str] = []
    for n in dims:
        objects += [f"E{n}", f"E{n}^"]
        dim_of[f"E{n}"] = n
        dim_of[f"E{n}^"] = kits[n].hat_dim

    base = tuple(f"E{n}" for n in dims)
    named: list[tuple[str, str, str, np.ndarray]] = []
    for n in dims:
        e, eh, kit = f"E{n}", f"E{n}^", kits[n]
        named += [
            (f"id[{e}]", e, e, np.eye(n)),
            (f"id[{eh}]", eh, eh, np.eye(kit.hat_dim)),
            (f"i[{e}]", e, eh, kit.i),
            (f"j[{e}]", e, eh, kit.j),
            (f"p[{e}]", eh, e, kit.p),
            (f"k[{e}]", eh, eh, kit.k),
            (f"c[{e}]", eh, e, homotopy_from_factor(np.zeros((n, n)), np.eye(n))),
        ]
    for a, b in itertools.product(objects, objects):
        named.append((f"0[{a},{b}]", a, b, np.zeros((dim_of[b], dim_of[a]))))
    for g, (a, b, m) in enumerate(generators):
        m = np.asarray(m, dtype=float).reshape(dim_of[b], dim_of[a])
        named.append((f"g{g}[{a},{b}]", a, b, m))
        if a in base and b in base:
            lifted = lift_operator(m, kits[dim_of[a]], kits[dim_of[b]])
            named.append((f"g{g}^[{a},{b}]", f"{a}^", f"{b}^", lifted))

    mats: dict[str, tuple[str, str, np.ndarray]] = {}
    seen: dict[tuple[str, str, bytes], str] = {}
    order: list[str] = []

    def add(mid: str, a: str, b: str, m: np.ndarray) -> str:
        key = (a, b, _key(m))
        if key in seen:
            return seen[key]
        if len(order) >= cap:
            raise BudgetExceeded(f"matrix-model closure exceeds {cap} morphisms")
        seen[key] = mid
        mats[mid] = (a, b, m)
        order.append(mid)
        return mid

    for mid, a, b, m in named:
        add(mid, a, b, m)
    counter = itertools.count()
    frontier = list(order)
    while frontier:
        new = []
        for f in frontier:
            for g in list(order):
                for first, second in ((f, g), (g, f)):
                    a, b, mf = mats[first]
                    b2, c, mg = mats[second]
                    if b != b2:
                        continue
                    before = len(order)
                    add(f"m{next(counter)}[{a},{c}]", a, c, mg @ mf)
                    if len(order) > before:
                        new.append(order[-1])
        frontier = new

    morphisms = [Morphism(mid, mats[mid][0], mats[mid][1]) for mid in order]
    comp = {}
    for f in order:
        a, b, mf = mats[f]
        for g in order:
            b2, c, mg = mats[g]
            if b == b2:
                comp[(g, f)] = seen[(a, c, _key(mg @ mf))]
    identities = {}
    for o in objects:
        identities[o] = seen[(o, o, _key(np.eye(dim_of[o])))]
    cat = FinCategory(objects, morphisms, identities, comp)
    hs = HomotopicalStructure(
        base,
        {e: f"{e}^" for e in base},
        {e: seen[(e, f"{e}^", _key(kits[dim_of[e]].i))] for e in base},
        {e: seen[(e, f"{e}^", _key(kits[dim_of[e]].j))] for e in base},
    )
    prov = {"generator": "banach-sample", "dims": list(dims), "generators": len(generators)}
    return InstanceBundle(cat, hs, prov, matrices={mid: m for mid, (_, _, m) in mats.items()})

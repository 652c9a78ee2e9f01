"""Quasi-ordinary branches as analytically pretoric data.

An irreducible quasi-ordinary branch over (C^n, 0) with characteristic
exponents lambda_1, ..., lambda_g in Q^n_{>=0} gives the lattice pair
M' = Z^n inside M = Z^n + sum Z lambda_i.  The normalization is the toric
germ of the nonnegative orthant in M, so sigma is the dual of that orthant
in N = Hom(M, Z), and essential divisors over the branch correspond to the
minimal interior elements of sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .cone import Cone
from .errors import ToricNashError, ValidationError
from .lattice import (
    IntMatrix,
    IntVector,
    Sublattice,
    determinant,
    hermite_normal_form,
    lattice_index,
    rational_inverse,
)
from .nash import EssentialSet, minimal_interior_elements
from .serialize import cone_to_dict

RationalVector = tuple[Fraction, ...]


def parse_rational(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise ValidationError(f"not a rational number: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f'not a rational number: {x!r} (use an integer or a "p/q" string)')


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class QOBranch:
    """Characteristic exponents of an analytically irreducible quasi-ordinary branch.

    With ``checked`` (the default) the exponents must be nonnegative,
    lexicographically nondecreasing, and each must enlarge the lattice
    generated by Z^n and the earlier ones.
    """

    n: int
    exponents: tuple[RationalVector, ...]
    checked: bool = True

    def __post_init__(self) -> None:
        exps = tuple(tuple(parse_rational(x) for x in lam) for lam in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if self.n < 2:
            raise ValidationError(
                "n must be at least 2: a plane branch (n = 1) gives a one-dimensional cone, "
                "which this toolkit does not treat")
        if self.n > 8:
            raise ValidationError("n above 8 is not supported")
        for lam in exps:
            if len(lam) != self.n:
                raise ValidationError(f"exponent {[_fmt(q) for q in lam]} has length {len(lam)}, expected {self.n}")
        if self.checked:
            for problem in self.problems():
                raise ValidationError(problem)

    def problems(self) -> list[str]:
        out = []
        for i, lam in enumerate(self.exponents):
            if any(q < 0 for q in lam):
                out.append(f"exponent {i + 1} has a negative coordinate")
        for i in range(1, len(self.exponents)):
            if self.exponents[i] < self.exponents[i - 1]:
                out.append(f"exponents {i} and {i + 1} are not in lexicographic order")
        steps = step_indices(self)
        for i, k in enumerate(steps):
            if k == 1:
                out.append(f"exponent {i + 1} already lies in the lattice of Z^n and earlier exponents")
        return out

    def to_dict(self) -> dict:
        return {"exponents": [[_fmt(q) for q in lam] for lam in self.exponents]}


def _scaled_lattice(n: int, exps: Sequence[RationalVector], den: int) -> IntMatrix:
    gens = [tuple(den * int(i == j) for j in range(n)) for i in range(n)]
    gens += [tuple(int(q * den) for q in lam) for lam in exps]
    h, _ = hermite_normal_form(gens)
    return tuple(r for r in h if any(r))


def _common_denominator(exps: Iterable[RationalVector]) -> int:
    return math.lcm(1, *(q.denominator for lam in exps for q in lam))


def step_indices(b: QOBranch) -> list[int]:
    """The indices [M_i : M_{i-1}] of the successive lattices."""
    den = _common_denominator(b.exponents)
    dets = [abs(determinant(_scaled_lattice(b.n, b.exponents[:i], den))) for i in range(len(b.exponents) + 1)]
    return [dets[i - 1] // dets[i] for i in range(1, len(dets))]


@dataclass(frozen=True)
class LatticePair:
    """M' = Z^n inside M, written in the coordinates of a Z-basis of M.

    ``m_basis`` holds that basis as rational vectors of Q^n; ``m_prime`` is
    the sublattice generated by e_1..e_n in M-coordinates.  ``n_basis``
    gives the dual basis of N = Hom(M, Z) in the original coordinates of
    Hom(M', Z) = Z^n, so a point v of N maps to ``to_original(v)``.
    """

    n: int
    m_basis: tuple[RationalVector, ...]
    m_prime: Sublattice
    m: Sublattice
    index: int
    n_basis: IntMatrix
    sigma_dual: Cone
    sigma: Cone

    def to_original(self, v: Sequence[int]) -> IntVector:
        return tuple(sum(v[k] * self.n_basis[k][j] for k in range(self.n)) for j in range(self.n))

    def to_dict(self) -> dict:
        return {
            "m_basis": [[_fmt(q) for q in row] for row in self.m_basis],
            "m_prime_basis": [list(r) for r in self.m_prime.basis],
            "index": self.index,
            "n_basis": [list(r) for r in self.n_basis],
            "sigma_dual": cone_to_dict(self.sigma_dual),
            "sigma": cone_to_dict(self.sigma),
        }


def lattice_from_exponents(b: QOBranch) -> LatticePair:
    n = b.n
    den = _common_denominator(b.exponents)
    h = _scaled_lattice(n, b.exponents, den)
    m_basis = tuple(tuple(Fraction(x, den) for x in row) for row in h)
    # e_j = c_j . (h / den), so c_j is row j of den * h^{-1}
    hinv = rational_inverse(h)
    coords = tuple(tuple(den * x for x in row) for row in hinv)
    if any(x.denominator != 1 for row in coords for x in row):
        raise ToricNashError("Z^n is not contained in the constructed lattice M")
    m_prime_rows = tuple(tuple(int(x) for x in row) for row in coords)
    m_prime = Sublattice.from_generators(m_prime_rows, n)
    m = Sublattice.full(n)
    index = lattice_index(m_prime, m)
    # dual basis n_k of N has <m_basis_i, n_k> = delta_ik: column k of den * h^{-1}
    n_basis = tuple(tuple(m_prime_rows[j][k] for j in range(n)) for k in range(n))
    sigma_dual = Cone(m_prime_rows, n)
    return LatticePair(n, m_basis, m_prime, m, index, n_basis, sigma_dual, sigma_dual.dual())


@dataclass(frozen=True)
class QOEssential:
    branch: QOBranch
    lattice: LatticePair
    essential: EssentialSet

    def __len__(self) -> int:
        return len(self.essential)

    @property
    def original_divisors(self) -> tuple[IntVector, ...]:
        """Divisor labels as weight vectors on the base coordinates x_1..x_n."""
        return tuple(self.lattice.to_original(v) for v in self.essential.divisors)

    def to_dict(self) -> dict:
        return {
            "branch": self.branch.to_dict(),
            "lattice": self.lattice.to_dict(),
            "index": self.lattice.index,
            "essential": self.essential.to_dict(),
            "count": len(self.essential),
            "divisors_original_coordinates": [list(v) for v in self.original_divisors],
        }


def qo_essential(b: QOBranch) -> QOEssential:
    """Essential divisors over an irreducible quasi-ordinary branch."""
    lp = lattice_from_exponents(b)
    return QOEssential(b, lp, minimal_interior_elements(lp.sigma))


@dataclass(frozen=True)
class MultiBranchReport:
    """Per-branch results and their disjoint union, tagged by branch index."""

    results: tuple[QOEssential | None, ...]
    errors: tuple[str | None, ...]

    @property
    def total(self) -> int:
        return sum(len(r) for r in self.results if r is not None)

    @property
    def tagged(self) -> tuple[tuple[int, IntVector], ...]:
        return tuple((i, v) for i, r in enumerate(self.results) if r is not None for v in r.essential.divisors)

    @property
    def ok(self) -> bool:
        return all(e is None for e in self.errors)

    def to_dict(self) -> dict:
        branches = []
        for i, (r, e) in enumerate(zip(self.results, self.errors)):
            entry: dict[str, Any] = {"branch": i}
            if r is not None:
                entry.update(r.to_dict())
            else:
                entry["error"] = e
            branches.append(entry)
        return {
            "branches": branches,
            "union": {
                "total": self.total,
                "divisors": [{"branch": i, "v": list(v)} for i, v in self.tagged],
            },
        }


def multi_branch(branches: Sequence[QOBranch | Exception]) -> MultiBranchReport:
    """Essential divisors of each branch and the disjoint union of their labels.

    Items may be exceptions from parsing; they are reported and the remaining
    branches are still computed.  No identification across branches is made.
    """
    results: list[QOEssential | None] = []
    errors: list[str | None] = []
    for b in branches:
        if isinstance(b, Exception):
            results.append(None)
            errors.append(str(b))
            continue
        try:
            results.append(qo_essential(b))
            errors.append(None)
        except ToricNashError as exc:
            results.append(None)
            errors.append(str(exc))
    return MultiBranchReport(tuple(results), tuple(errors))


def branches_from_json(data: Any, checked: bool = True) -> list[QOBranch | ValidationError]:
    if not isinstance(data, dict) or "n" not in data or "branches" not in data:
        raise ValidationError('QO JSON must be an object with "n" and "branches"')
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValidationError('"n" must be an integer')
    out: list[QOBranch | ValidationError] = []
    for item in data["branches"]:
        try:
            if not isinstance(item, dict) or "exponents" not in item:
                raise ValidationError('each branch needs an "exponents" list')
            out.append(QOBranch(n, tuple(tuple(lam) for lam in item["exponents"]), checked=checked))
        except ValidationError as exc:
            out.append(exc)
    return out

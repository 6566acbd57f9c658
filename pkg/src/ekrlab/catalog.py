"""Finite fields and the concrete 2-transitive groups used throughout.

Point numbering
---------------
* affine groups act on field-element codes (``agl1``, ``agammal1``) or on
  vectors numbered row-major, ``index = sum(code(v_k) * q**(m-1-k))``;
* projective-line groups number ``[1:0]`` as point 0 and ``[x:1]`` as
  point ``1 + code(x)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .perm_core import DEFAULT_CAP, GroupTable, Permutation, generate


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """``(p, e)`` with ``q == p**e``; ValueError otherwise."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1 or not is_prime(p):
                break
            return p, e
    raise ValueError(f"{q} is not a prime power")


# --------------------------------------------------------------------------
# GF(p^e)
# --------------------------------------------------------------------------

def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Product of coefficient lists (constant first) reduced by a monic modulus."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            for k in range(e + 1):
                prod[d - e + k] = (prod[d - e + k] - c * modulus[k]) % p
    return (prod + [0] * e)[:e]


def _has_factor(coeffs: list[int], p: int) -> bool:
    """Exhaustive search for a monic factor of degree 1..deg/2."""
    e = len(coeffs) - 1
    for d in range(1, e // 2 + 1):
        for low in product(range(p), repeat=d):
            div = list(low) + [1]
            # long division by a monic divisor
            rem = list(coeffs)
            for k in range(e - d, -1, -1):
                c = rem[k + d]
                if c:
                    for t in range(d + 1):
                        rem[k + t] = (rem[k + t] - c * div[t]) % p
            if not any(rem[:d]):
                return True
    return False


@dataclass(frozen=True)
class FiniteField:
    """GF(p^e); element codes are base-p digit strings, constant term lowest."""

    p: int
    e: int
    modulus: tuple[int, ...]
    add: np.ndarray = field(repr=False, compare=False)
    mul: np.ndarray = field(repr=False, compare=False)
    inv: np.ndarray = field(repr=False, compare=False)
    neg: np.ndarray = field(repr=False, compare=False)
    generator: int = 0

    @property
    def q(self) -> int:
        return self.p ** self.e

    def digits(self, c: int) -> list[int]:
        return [(c // self.p ** k) % self.p for k in range(self.e)]

    def code(self, digits: Sequence[int]) -> int:
        return sum((d % self.p) * self.p ** k for k, d in enumerate(digits))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        out = 1
        for _ in range(k):
            out = int(self.mul[out, a])
        return out

    def frobenius(self, x: int, i: int = 1) -> int:
        return self.power(x, self.p ** i)

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = int(self.mul[x, a])
            k += 1
        return k


def gf(p: int, e: int = 1) -> FiniteField:
    """GF(p^e) with the least monic irreducible modulus.

    Moduli are ordered by the code of their lower coefficients, so GF(4)
    gets ``x^2 + x + 1`` and every prime field gets ``x``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= e <= 8 or p ** e > 1024:
        raise ValueError(f"GF({p}^{e}) out of range")
    q = p ** e
    modulus = None
    for c in range(q):
        low = [(c // p ** k) % p for k in range(e)]
        coeffs = low + [1]
        if e == 1 or (low[0] != 0 and not _has_factor(coeffs, p)):
            modulus = coeffs
            break
    assert modulus is not None
    digits = [[(c // p ** k) % p for k in range(e)] for c in range(q)]
    weights = np.array([p ** k for k in range(e)])
    D = np.array(digits)
    add = ((D[:, None, :] + D[None, :, :]) % p) @ weights
    neg = ((-D) % p) @ weights
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(a, q):
            r = _poly_mulmod(digits[a], digits[b], modulus, p)
            mul[a, b] = mul[b, a] = sum(x * w for x, w in zip(r, weights))
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    gen = 1 if q == 2 else 0
    for a in range(2, q):
        x, k = a, 1
        while x != 1:
            x = mul[x, a]
            k += 1
        if k == q - 1:
            gen = a
            break
    if gen == 0:
        raise AssertionError(f"no multiplicative generator found in GF({q})")
    for arr in (add, mul, inv, neg):
        arr.setflags(write=False)
    return FiniteField(p, e, tuple(modulus), add.astype(np.int64), mul, inv,
                       neg.astype(np.int64), gen)


# --------------------------------------------------------------------------
# matrices over GF(q) acting on vectors
# --------------------------------------------------------------------------

def vector_index(F: FiniteField, v: Sequence[int]) -> int:
    out = 0
    for c in v:
        out = out * F.q + int(c)
    return out


def all_vectors(F: FiniteField, m: int) -> list[tuple[int, ...]]:
    return list(product(range(F.q), repeat=m))


def mat_vec(F: FiniteField, A: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            s = int(F.add[s, F.mul[a, x]])
        out.append(s)
    return tuple(out)


def mat_mul(F: FiniteField, A, B) -> list[list[int]]:
    cols = list(zip(*B))
    return [[_dot(F, row, col) for col in cols] for row in A]


def _dot(F: FiniteField, row, col) -> int:
    s = 0
    for a, b in zip(row, col):
        s = int(F.add[s, F.mul[a, b]])
    return s


def affine_perm(F: FiniteField, A, v) -> Permutation:
    """Permutation of F^m induced by ``x -> A x + v``."""
    m = len(A)
    imgs = []
    for x in all_vectors(F, m):
        y = mat_vec(F, A, x)
        imgs.append(vector_index(F, [F.add[a, b] for a, b in zip(y, v)]))
    return Permutation(tuple(imgs))


def block_matrix_perm(F: FiniteField, M) -> Permutation:
    """Permutation of F^m from an (m+1)x(m+1) block matrix ``[[A, v], [0, 1]]``."""
    m = len(M) - 1
    if list(M[m]) != [0] * m + [1]:
        raise ValueError("last row must be (0, ..., 0, 1)")
    A = [list(r[:m]) for r in M[:m]]
    v = [r[m] for r in M[:m]]
    return affine_perm(F, A, v)


def _identity_matrix(m: int) -> list[list[int]]:
    return [[int(i == j) for j in range(m)] for i in range(m)]


def _translations(F: FiniteField, m: int) -> list[Permutation]:
    """Translations by ``p^k * e_j``: an additive basis of F^m over GF(p)."""
    out = []
    for j in range(m):
        for k in range(F.e):
            v = [0] * m
            v[j] = F.p ** k
            out.append(affine_perm(F, _identity_matrix(m), v))
    return out


# --------------------------------------------------------------------------
# group families
# --------------------------------------------------------------------------

def _cycle(n: int, pts: Sequence[int]) -> Permutation:
    return Permutation.from_cycles(n, list(pts))


def sym(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("sym needs n >= 1")
    gens = [] if n == 1 else [_cycle(n, [0, 1])] + ([_cycle(n, range(n))] if n > 2 else [])
    return generate(n, gens, name=f"sym:{n}")


def alt(n: int) -> GroupTable:
    if n < 3:
        raise ValueError("alt needs n >= 3")
    if n == 3:
        gens = [_cycle(3, [0, 1, 2])]
    elif n % 2:
        gens = [_cycle(n, range(n)), _cycle(n, [0, 1, 2])]
    else:
        gens = [_cycle(n, range(1, n)), _cycle(n, [0, 1, 2])]
    return generate(n, gens, name=f"alt:{n}")


def _projective_perm(F: FiniteField, a: int, b: int, c: int, d: int) -> Permutation:
    """Action of ``x -> (a x + b)/(c x + d)`` on the projective line."""
    q = F.q
    imgs = []
    points = [(1, 0)] + [(x, 1) for x in range(q)]
    for x, y in points:
        u = int(F.add[F.mul[a, x], F.mul[b, y]])
        w = int(F.add[F.mul[c, x], F.mul[d, y]])
        if w == 0:
            imgs.append(0)
        else:
            imgs.append(1 + int(F.mul[u, F.inv[w]]))
    return Permutation(tuple(imgs))


def psl2(q: int) -> GroupTable:
    p, e = prime_power(q)
    F = gf(p, e)
    alpha = F.generator
    a2 = int(F.mul[alpha, alpha])
    one, minus_one = 1, int(F.neg[1])
    gens = [
        _projective_perm(F, one, one, 0, one),            # x -> x + 1
        _projective_perm(F, a2, 0, 0, one),               # x -> alpha^2 x
        _projective_perm(F, 0, minus_one, one, 0),        # x -> -1/x
    ]
    G = generate(q + 1, gens, name=f"psl2:{q}")
    expected = q * (q * q - 1) // (2 if q % 2 else 1)
    if G.order != expected:
        raise AssertionError(f"PSL2({q}) built with order {G.order}, expected {expected}")
    return G


def pgl2(q: int) -> GroupTable:
    p, e = prime_power(q)
    F = gf(p, e)
    gens = [
        _projective_perm(F, 1, 1, 0, 1),
        _projective_perm(F, F.generator, 0, 0, 1),
        _projective_perm(F, 0, 1, 1, 0),
    ]
    G = generate(q + 1, gens, name=f"pgl2:{q}")
    if G.order != q * (q * q - 1):
        raise AssertionError(f"PGL2({q}) built with order {G.order}")
    return G


def _semilinear_perm(F: FiniteField, a: int, i: int, b: int) -> Permutation:
    """``x -> a * x^(p^i) + b`` on field codes."""
    return Permutation(tuple(int(F.add[F.mul[a, F.frobenius(x, i)], b]) for x in range(F.q)))


def agl1(q: int) -> GroupTable:
    p, e = prime_power(q)
    F = gf(p, e)
    gens = [_semilinear_perm(F, 1, 0, p ** k) for k in range(e)]
    if q > 2:
        gens.append(_semilinear_perm(F, F.generator, 0, 0))
    G = generate(q, gens, name=f"agl1:{q}")
    assert G.order == q * (q - 1)
    return G


def agammal1(p: int, e: int) -> GroupTable:
    F = gf(p, e)
    q = F.q
    gens = [_semilinear_perm(F, 1, 0, p ** k) for k in range(e)]
    if q > 2:
        gens.append(_semilinear_perm(F, F.generator, 0, 0))
    if e > 1:
        gens.append(_semilinear_perm(F, 1, 1, 0))
    G = generate(q, gens, name=f"agammal1:{p},{e}")
    assert G.order == q * (q - 1) * e
    return G


def asl2(q: int) -> GroupTable:
    p, e = prime_power(q)
    if p != 2:
        raise ValueError("asl2 is provided for even q only")
    F = gf(p, e)
    alpha = F.generator
    lin = [
        [[1, 1], [0, 1]],
        [[1, 0], [1, 1]],
        [[alpha, 0], [0, int(F.inv[alpha])]],
    ]
    gens = _translations(F, 2) + [affine_perm(F, A, [0, 0]) for A in lin]
    G = generate(q * q, gens, name=f"asl2:{q}")
    if G.order != q * q * q * (q * q - 1):
        raise AssertionError(f"ASL2({q}) built with order {G.order}")
    return G


def agl3_2() -> GroupTable:
    F = gf(2, 1)
    lin = [
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    ]
    gens = _translations(F, 3) + [affine_perm(F, A, [0, 0, 0]) for A in lin]
    G = generate(8, gens, name="agl3_2")
    if G.order != 1344:
        raise AssertionError(f"AGL3(2) built with order {G.order}")
    return G


# GAP's MathieuGroup(11) generators, shifted to 0-based points.
M11_GENERATORS = (
    ((0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10),),
    ((2, 6, 10, 7), (3, 9, 4, 5)),
)


def m11() -> GroupTable:
    gens = [Permutation.from_cycles(11, *cycles) for cycles in M11_GENERATORS]
    G = generate(11, gens, name="m11")
    if G.order != 7920:
        raise AssertionError(f"M11 built with order {G.order}")
    return G


FAMILIES = {
    "sym": (sym, 1),
    "alt": (alt, 1),
    "psl2": (psl2, 1),
    "pgl2": (pgl2, 1),
    "agl1": (agl1, 1),
    "agammal1": (agammal1, 2),
    "asl2": (asl2, 1),
    "agl3_2": (agl3_2, 0),
    "m11": (m11, 0),
}

# rough order formulas, used to refuse oversized requests before building
_ORDER = {
    "sym": lambda n: _fact(n),
    "alt": lambda n: _fact(n) // 2,
    "psl2": lambda q: q * (q * q - 1) // (2 if q % 2 else 1),
    "pgl2": lambda q: q * (q * q - 1),
    "agl1": lambda q: q * (q - 1),
    "agammal1": lambda p, e: p ** e * (p ** e - 1) * e,
    "asl2": lambda q: q ** 3 * (q * q - 1),
    "agl3_2": lambda: 1344,
    "m11": lambda: 7920,
}


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


_CACHE: dict[tuple, GroupTable] = {}


def family(name: str, params: Sequence[int] = (), cap: int = DEFAULT_CAP) -> GroupTable:
    """Build a named group family; results are memoised per parameters."""
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
    ctor, arity = FAMILIES[name]
    params = tuple(int(x) for x in params)
    if len(params) != arity:
        raise ValueError(f"{name} takes {arity} parameter(s), got {len(params)}")
    if name in ("psl2", "pgl2", "agl1", "asl2"):
        prime_power(params[0])
    if name == "agammal1" and not is_prime(params[0]):
        raise ValueError(f"{params[0]} is not prime")
    if any(x < 1 for x in params):
        raise ValueError("parameters must be positive")
    if _ORDER[name](*params) > cap:
        raise ValueError(f"{name}{list(params)} has order above the cap {cap}")
    key = (name, params)
    if key not in _CACHE:
        _CACHE[key] = ctor(*params)
    return _CACHE[key]


def parse_family(text: str, cap: int = DEFAULT_CAP) -> GroupTable:
    """``'agammal1:3,2'`` -> family('agammal1', [3, 2])."""
    name, _, rest = text.strip().partition(":")
    params = [int(x) for x in rest.split(",")] if rest else []
    return family(name, params, cap=cap)


# --------------------------------------------------------------------------
# group spec files
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpecFile:
    degree: int
    generators: tuple[tuple[int, ...], ...]
    name: str | None = None

    def build(self, cap: int = DEFAULT_CAP) -> GroupTable:
        return generate(self.degree, self.generators, cap=cap, name=self.name)


class SpecError(ValueError):
    pass


def parse_group_spec(text: str) -> GroupSpecFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecError("top level must be an object")
    unknown = set(doc) - {"name", "degree", "one_based", "generators"}
    if unknown:
        raise SpecError(f"unknown keys: {sorted(unknown)}")
    degree = doc.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise SpecError("degree must be an integer >= 1")
    one_based = doc.get("one_based", False)
    if not isinstance(one_based, bool):
        raise SpecError("one_based must be a boolean")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecError("name must be a string")
    gens = doc.get("generators")
    if not isinstance(gens, list):
        raise SpecError("generators must be a list")
    out = []
    for k, g in enumerate(gens):
        if not isinstance(g, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in g):
            raise SpecError(f"generator {k} must be a list of integers")
        if len(g) != degree:
            raise SpecError(f"generator {k} has length {len(g)}, degree is {degree}")
        imgs = tuple(x - 1 for x in g) if one_based else tuple(g)
        if sorted(imgs) != list(range(degree)):
            raise SpecError(f"generator {k} is not a bijection")
        out.append(imgs)
    return GroupSpecFile(degree, tuple(out), name)


def emit_group_spec(spec: GroupSpecFile) -> str:
    doc = {"degree": spec.degree, "generators": [list(g) for g in spec.generators]}
    if spec.name is not None:
        doc["name"] = spec.name
    return json.dumps(doc, sort_keys=True)


def spec_of(G: GroupTable) -> GroupSpecFile:
    gens = tuple(tuple(int(x) for x in G.elements[g]) for g in G.generators)
    return GroupSpecFile(G.degree, gens, G.name)

"""Three-way arrays, shape taxonomy and the closed-form degree formulas."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence, Tuple

Matrix = Tuple[Tuple[Fraction, ...], ...]


class TensorFormatError(ValueError):
    """Malformed tensor input; the message names the offending location."""


@dataclass(frozen=True)
class Shape:
    I: int
    J: int
    K: int

    def __post_init__(self):
        for name in ("I", "J", "K"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "Shape":
        """``"9x5x3"`` -> Shape(9, 5, 3)."""
        parts = text.lower().replace("×", "x").split("x")
        if len(parts) != 3:
            raise ValueError(f"shape literal must look like IxJxK, got {text!r}")
        return cls(*(int(p) for p in parts))

    def as_tuple(self):
        return (self.I, self.J, self.K)

    def __str__(self):
        return f"{self.I}x{self.J}x{self.K}"


def _as_fraction(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise TensorFormatError(f"non-numeric entry {x!r} at {where}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise TensorFormatError(f"non-finite entry {x!r} at {where}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise TensorFormatError(f"non-numeric entry {x!r} at {where}") from None
    raise TensorFormatError(f"non-numeric entry {x!r} at {where}")


class Tensor3:
    """An I x J x K array of exact rationals stored as K frontal slices X_k (I x J).

    ``mode="indscal"`` requires J == K and ``X[i][j][k] == X[i][k][j]``.
    """

    __slots__ = ("slices", "mode")

    def __init__(self, slices: Sequence[Sequence[Sequence]], mode: str = "general"):
        if mode not in ("general", "indscal"):
            raise TensorFormatError(f"unknown mode {mode!r}")
        if not slices:
            raise TensorFormatError("tensor has no slices")
        out = []
        I = J = None
        for k, m in enumerate(slices):
            if not m or not m[0]:
                raise TensorFormatError(f"slice {k} is empty")
            if I is None:
                I, J = len(m), len(m[0])
            if len(m) != I:
                raise TensorFormatError(f"slice {k} has {len(m)} rows, expected {I}")
            rows = []
            for i, r in enumerate(m):
                if len(r) != J:
                    raise TensorFormatError(
                        f"slice {k} row {i} has {len(r)} entries, expected {J}")
                rows.append(tuple(_as_fraction(x, f"slice {k} row {i} col {j}")
                                  for j, x in enumerate(r)))
            out.append(tuple(rows))
        self.slices: Tuple[Matrix, ...] = tuple(out)
        self.mode = mode
        if mode == "indscal":
            bad = indscal_asymmetry(self)
            if bad is not None:
                i, j, k = bad
                raise TensorFormatError(
                    f"INDSCAL slice symmetry violated at (i={i}, j={j}, k={k}): "
                    f"X[i][j][k]={self[i, j, k]} != X[i][k][j]={self[i, k, j]}")

    @classmethod
    def from_function(cls, shape: Shape, f, mode="general") -> "Tensor3":
        return cls([[[f(i, j, k) for j in range(shape.J)] for i in range(shape.I)]
                    for k in range(shape.K)], mode)

    @classmethod
    def from_symmetric_slices(cls, mats: Sequence[Sequence[Sequence]]) -> "Tensor3":
        """Build an INDSCAL array from I symmetric J x J matrices (slice i is X[i])."""
        I = len(mats)
        J = len(mats[0])
        return cls([[[mats[i][j][k] for j in range(J)] for i in range(I)]
                    for k in range(J)], mode="indscal")

    @property
    def shape(self) -> Shape:
        return Shape(len(self.slices[0]), len(self.slices[0][0]), len(self.slices))

    @property
    def I(self):
        return len(self.slices[0])

    @property
    def J(self):
        return len(self.slices[0][0])

    @property
    def K(self):
        return len(self.slices)

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.slices[k][i][j]

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self.mode == other.mode and \
            self.slices == other.slices

    def __hash__(self):
        return hash((self.slices, self.mode))

    def __repr__(self):
        return f"Tensor3({self.shape}, mode={self.mode!r})"

    def scaled(self, c) -> "Tensor3":
        c = Fraction(c)
        return Tensor3([[[x * c for x in r] for r in m] for m in self.slices], self.mode)

    def is_zero(self) -> bool:
        return all(x == 0 for m in self.slices for r in m for x in r)

    def to_numpy(self):
        import numpy as np
        return np.array([[[float(self[i, j, k]) for k in range(self.K)]
                          for j in range(self.J)] for i in range(self.I)])

    def permute_modes(self, perm: Sequence[int]) -> "Tensor3":
        """Reorder modes: axis ``a`` of the result is axis ``perm[a]`` of self."""
        perm = tuple(perm)
        if sorted(perm) != [0, 1, 2]:
            raise ValueError(f"invalid mode permutation {perm}")
        dims = self.shape.as_tuple()
        nd = [dims[p] for p in perm]
        def get(i, j, k):
            idx = [0, 0, 0]
            for a, v in zip(perm, (i, j, k)):
                idx[a] = v
            return self[idx[0], idx[1], idx[2]]
        mode = self.mode if perm in ((0, 1, 2), (0, 2, 1)) else "general"
        return Tensor3([[[get(i, j, k) for j in range(nd[1])] for i in range(nd[0])]
                        for k in range(nd[2])], mode)


def indscal_asymmetry(X: Tensor3) -> Optional[Tuple[int, int, int]]:
    """First (i, j, k) with X[i][j][k] != X[i][k][j], or None when symmetric."""
    if X.J != X.K:
        return (0, X.J, X.K)
    for i in range(X.I):
        for j in range(X.J):
            for k in range(j + 1, X.K):
                if X[i, j, k] != X[i, k, j]:
                    return (i, j, k)
    return None


def tensor_slice(X: Tensor3, mode: int, index: int) -> List[List[Fraction]]:
    """Copy of a slice; ``mode`` is 1, 2 or 3 and ``index`` is 0-based.

    Mode 3 gives the frontal slice X_k (I x J); mode 1 gives X[i] (J x K);
    mode 2 gives an I x K matrix.
    """
    dims = X.shape.as_tuple()
    if mode not in (1, 2, 3):
        raise IndexError(f"mode must be 1, 2 or 3, got {mode}")
    if not 0 <= index < dims[mode - 1]:
        raise IndexError(f"slice index {index} out of range for mode {mode} (size {dims[mode - 1]})")
    if mode == 3:
        return [list(r) for r in X.slices[index]]
    if mode == 1:
        return [[X[index, j, k] for k in range(X.K)] for j in range(X.J)]
    return [[X[i, index, k] for k in range(X.K)] for i in range(X.I)]


def embed(X: Tensor3, extra_rows: Optional[Sequence[Sequence]] = None) -> Tensor3:
    """Append one row (length J) to each frontal slice, giving an (I+1) x J x K array.

    The default is the first standard basis vector on slice 1 and zero
    rows elsewhere.
    """
    if extra_rows is None:
        extra_rows = [[1 if (k == 0 and j == 0) else 0 for j in range(X.J)]
                      for k in range(X.K)]
    if len(extra_rows) != X.K:
        raise ValueError(f"need one row per slice ({X.K}), got {len(extra_rows)}")
    for k, v in enumerate(extra_rows):
        if len(v) != X.J:
            raise ValueError(f"row for slice {k} has length {len(v)}, expected {X.J}")
    return Tensor3([list(m) + [list(v)] for m, v in zip(X.slices, extra_rows)], "general")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    tallness: str          # very_tall | tall | compact
    regime: str            # minimal | underdetermined | overdetermined
    special: str           # square_two_slice | tallest_compact | none
    neq: int
    df: int
    nbil: int

    def to_dict(self):
        return {"tallness": self.tallness, "regime": self.regime, "special": self.special,
                "neq": self.neq, "df": self.df, "nbil": self.nbil}


def ordering_permutation(shape: Shape) -> Tuple[int, ...]:
    """Mode permutation sorting the dimensions into I >= J >= K (stable)."""
    dims = shape.as_tuple()
    return tuple(sorted(range(3), key=lambda a: -dims[a]))


def classify(s: Shape) -> Classification:
    """Tallness class, system regime and special family of an ordered shape."""
    I, J, K = s.I, s.J, s.K
    if not (2 <= K <= J <= I):
        if min(I, J, K) < 2:
            raise ValueError(f"shape {s} needs every dimension >= 2")
        perm = ordering_permutation(s)
        raise ValueError(f"shape {s} is not ordered (2 <= K <= J <= I); "
                         f"permute modes by {list(perm)}")
    neq = (K - 1) * J
    df = (I - 1) + (K - 1)
    if I >= K * J:
        tallness = "very_tall"
    elif I > K * J - J:
        tallness = "tall"
    else:
        tallness = "compact"
    if neq == df:
        regime = "minimal"
    elif df > neq:
        regime = "underdetermined"
    else:
        regime = "overdetermined"
    if I == J and K == 2:
        special = "square_two_slice"
    elif I == J * (K - 1) and K >= 3:
        special = "tallest_compact"
    else:
        special = "none"
    return Classification(tallness, regime, special, neq, df, K - 1)


def indscal_regime(I: int, J: int) -> str:
    m = 1 + J * (J - 1) // 2
    if I == m:
        return "minimal"
    return "overdetermined" if I > m else "underdetermined"


def expected_degree(s: Shape) -> int:
    """Number of complex solutions of the minimal system: C(K-1+J-1, K-1)."""
    if s.I != (s.K - 1) * (s.J - 1) + 1:
        raise ValueError(f"shape {s} is not minimal (need I = (K-1)(J-1)+1)")
    return comb(s.K - 1 + s.J - 1, s.K - 1)


def indscal_expected_degree(J: int) -> int:
    """Number of complex solutions of the minimal INDSCAL system: 2^(J-1)."""
    if J < 2:
        raise ValueError("J must be at least 2")
    return 2 ** (J - 1)


def khovanskii_bound(s: Shape) -> int:
    """Fewnomial bound 2^C(m,2) * (n+1)^m with n = (K-1)J and m = K(I-1)."""
    if s.I != (s.K - 1) * (s.J - 1) + 1:
        raise ValueError(f"shape {s} is not minimal")
    n = (s.K - 1) * s.J
    m = s.K * (s.I - 1)
    return 2 ** comb(m, 2) * (n + 1) ** m


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _encode(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def tensor_to_dict(X: Tensor3) -> dict:
    integral = all(x.denominator == 1 for m in X.slices for r in m for x in r)
    return {
        "shape": list(X.shape.as_tuple()),
        "mode": X.mode,
        "entries": "integer" if integral else "rational-string",
        "slices": [[[_encode(x) for x in r] for r in m] for m in X.slices],
    }


def print_tensor(X: Tensor3) -> str:
    """Canonical JSON text; rationals are ``"p/q"`` strings."""
    d = tensor_to_dict(X)
    rows = []
    for m in d["slices"]:
        rows.append("    [\n" + ",\n".join("      " + json.dumps(r) for r in m) + "\n    ]")
    return ("{\n"
            f'  "shape": {json.dumps(d["shape"])},\n'
            f'  "mode": {json.dumps(d["mode"])},\n'
            f'  "entries": {json.dumps(d["entries"])},\n'
            '  "slices": [\n' + ",\n".join(rows) + "\n  ]\n}\n")


def tensor_from_dict(d: dict) -> Tensor3:
    if not isinstance(d, dict):
        raise TensorFormatError("top level must be a JSON object")
    if "slices" not in d:
        raise TensorFormatError("missing 'slices'")
    slices = d["slices"]
    if not isinstance(slices, list) or not slices:
        raise TensorFormatError("'slices' must be a non-empty list")
    for k, m in enumerate(slices):
        if not isinstance(m, list) or not m:
            raise TensorFormatError(f"slice {k} is empty")
        for i, r in enumerate(m):
            if not isinstance(r, list) or not r:
                raise TensorFormatError(f"slice {k} row {i} is empty or not a list")
    X = Tensor3(slices, d.get("mode", "general"))
    if "shape" in d:
        shape = d["shape"]
        if list(shape) != list(X.shape.as_tuple()):
            raise TensorFormatError(
                f"declared shape {shape} does not match slices {list(X.shape.as_tuple())}")
    return X


def parse_tensor(text: str) -> Tensor3:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise TensorFormatError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return tensor_from_dict(d)


def load_tensor(path) -> Tensor3:
    with open(path) as fh:
        return parse_tensor(fh.read())

"""Rank-I certificates: build S from left null vectors of Gamma, then A, B, C.

For every column alpha, ``s_alpha'(X_k - c_k,alpha X_1) = 0`` for all k,
so with ``B' = S'X_1`` and ``A = S'^{-1}`` the slices satisfy
``X_k = A D(c_k) B'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .tensor import Tensor3

CONDITION_THRESHOLD = mpmath.mpf("1e-10")


class DecompositionError(ArithmeticError):
    pass


@dataclass
class FactorTriple:
    """X_k = A diag(C[k, :]) B' with A: I x I, B: J x I, C: K x I (row 0 all ones)."""

    A: mpmath.matrix
    B: mpmath.matrix
    C: mpmath.matrix
    S: mpmath.matrix
    precision_bits: int
    residual: Optional[float] = None

    def to_json(self, digits: int = 15) -> dict:
        def rows(M):
            return [[mpmath.nstr(M[i, j], digits) for j in range(M.cols)] for i in range(M.rows)]
        return {"A": rows(self.A), "B": rows(self.B), "C": rows(self.C), "S": rows(self.S),
                "precision_bits": self.precision_bits,
                "residual": self.residual}


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def gamma_numeric(X: Tensor3, cvals: Sequence) -> mpmath.matrix:
    """Gamma evaluated at (c2, ..., cK) as an I x (K-1)J mpmath matrix."""
    I, J, K = X.I, X.J, X.K
    G = mpmath.matrix(I, (K - 1) * J)
    for k in range(1, K):
        ck = _mp(cvals[k - 1])
        for i in range(I):
            for j in range(J):
                G[i, (k - 1) * J + j] = _mp(X.slices[k][i][j]) - ck * _mp(X.slices[0][i][j])
    return G


def left_null_vector(G: mpmath.matrix) -> mpmath.matrix:
    """Unit vector s minimizing |s'G| (the left singular vector of the smallest singular value)."""
    # s'G = 0  <=>  G' s = 0; pad so the SVD sees a square-or-tall matrix
    Gt = G.T
    if Gt.rows < Gt.cols:
        pad = mpmath.matrix(Gt.cols, Gt.cols)
        for i in range(Gt.rows):
            for j in range(Gt.cols):
                pad[i, j] = Gt[i, j]
        Gt = pad
    _, _, V = mpmath.svd_r(Gt)
    return V[V.rows - 1, :].T


def _normalize_last(s: mpmath.matrix) -> mpmath.matrix:
    # scale so s_I = 1 when that entry is usable, else unit norm
    last = s[s.rows - 1]
    if abs(last) > mpmath.mpf(10) ** (-mpmath.mp.dps // 2):
        return s / last
    return s / mpmath.norm(s)


def condition_ratio(S: mpmath.matrix) -> mpmath.mpf:
    """smallest / largest singular value (0 for singular or empty)."""
    sv = mpmath.svd_r(S, compute_uv=False)
    vals = [abs(sv[i]) for i in range(len(sv))]
    if not vals or max(vals) == 0:
        return mpmath.mpf(0)
    return min(vals) / max(vals)


def assemble(X: Tensor3, svecs: Sequence[mpmath.matrix], cvecs: Sequence[Sequence],
             precision_bits: int) -> FactorTriple:
    """A, B, C from I null vectors and their c-tuples (c2..cK)."""
    I, K = X.I, X.K
    if len(svecs) != I:
        raise DecompositionError(f"need {I} null vectors, got {len(svecs)}")
    with mpmath.workprec(precision_bits):
        S = mpmath.matrix(I, I)
        for a, s in enumerate(svecs):
            for i in range(I):
                S[i, a] = s[i]
        if condition_ratio(S) <= CONDITION_THRESHOLD:
            raise DecompositionError("recovered s-vectors are not a basis (S is singular)")
        C = mpmath.matrix(K, I)
        for a, cv in enumerate(cvecs):
            C[0, a] = 1
            for k in range(1, K):
                C[k, a] = _mp(cv[k - 1])
        X1 = mpmath.matrix([[_mp(x) for x in r] for r in X.slices[0]])
        B = (S.T * X1).T
        A = mpmath.inverse(S).T
        return FactorTriple(A, B, C, S, precision_bits)


def extract_decomposition(X: Tensor3, specializations: Sequence[Sequence],
                          precision_bits: int = 128,
                          svecs: Optional[Sequence] = None) -> FactorTriple:
    """Certificate from I specializations (c2..cK) with one-dimensional left null spaces.

    ``svecs`` may supply the null vectors directly (e.g. exact ones from
    the tall path); otherwise each is computed by SVD of Gamma(c).
    """
    with mpmath.workprec(precision_bits):
        if svecs is None:
            svecs = [_normalize_last(left_null_vector(gamma_numeric(X, c)))
                     for c in specializations]
        else:
            svecs = [mpmath.matrix([_mp(x) for x in s]) for s in svecs]
        F = assemble(X, svecs, specializations, precision_bits)
        F.residual = reconstruction_residual(X, F)
        return F


def reconstruction_residual(X: Tensor3, F: FactorTriple) -> float:
    I, J, K = X.I, X.J, X.K
    if F.A.rows != I or F.B.rows != J or F.C.rows != K or \
            F.A.cols != F.B.cols or F.A.cols != F.C.cols:
        raise ValueError(
            f"factor dimensions A{F.A.rows}x{F.A.cols}, B{F.B.rows}x{F.B.cols}, "
            f"C{F.C.rows}x{F.C.cols} do not fit a {X.shape} array")
    R = F.A.cols
    worst = mpmath.mpf(0)
    with mpmath.workprec(F.precision_bits):
        for k in range(K):
            for i in range(I):
                for j in range(J):
                    v = mpmath.fsum(F.A[i, a] * F.C[k, a] * F.B[j, a] for a in range(R))
                    x = _mp(X.slices[k][i][j])
                    worst = max(worst, abs(v - x) / (1 + abs(x)))
    return float(worst)


def verify_decomposition(X: Tensor3, F: FactorTriple, tol: float = 1e-6):
    """``(passed, residual)`` with residual the worst entrywise |AD(c_k)B' - X_k| / (1 + |X_k|)."""
    r = reconstruction_residual(X, F)
    return r <= tol, r

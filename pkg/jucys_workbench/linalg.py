"""
Exact sparse linear algebra over the rationals
Vectors are dicts index -> Fraction with no stored zeros
"""

from fractions import Fraction
from typing import Dict, Hashable, List, Sequence, Tuple

SparseVec = Dict[int, Fraction]


class NoSolution(ArithmeticError):
    """Inconsistent linear system"""


def vec_clean(v: Dict[int, Fraction]) -> SparseVec:
    return {k: c for k, c in v.items() if c}


def vec_axpy(target: Dict[int, Fraction], a: Fraction, x: SparseVec) -> None:
    """target += a*x, in place"""
    if not a:
        return
    for k, c in x.items():
        value = target.get(k, 0) + a * c
        if value:
            target[k] = value
        else:
            target.pop(k, None)


def vec_scale(x: SparseVec, a: Fraction) -> SparseVec:
    if not a:
        return {}
    return {k: a * c for k, c in x.items()}


class EchelonBasis:
    """
    Incremental reduced row echelon form that remembers how each row was
    built from the inserted vectors
    """

    def __init__(self):
        self._rows: Dict[int, Tuple[SparseVec, Dict[Hashable, Fraction]]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    def reduce(self, v: SparseVec) -> Tuple[SparseVec, Dict[Hashable, Fraction]]:
        """
        Returns:
            (residual, combination) with v = residual + sum combination[id]*inserted[id]
        """
        residual = dict(v)
        combo: Dict[Hashable, Fraction] = {}
        for p, coeff in [(p, c) for p, c in v.items() if p in self._rows]:
            row, row_combo = self._rows[p]
            vec_axpy(residual, -coeff, row)
            for key, c in row_combo.items():
                value = combo.get(key, 0) + coeff * c
                if value:
                    combo[key] = value
                else:
                    combo.pop(key, None)
        return residual, combo

    def add(self, v: SparseVec, key: Hashable = None) -> bool:
        """Insert v; returns False when v is already in the span"""
        residual, combo = self.reduce(v)
        if not residual:
            return False
        # residual = v - combo
        row_combo = {k: -c for k, c in combo.items()}
        if key is not None:
            row_combo[key] = row_combo.get(key, 0) + 1
        pivot = min(residual)
        scale = 1 / residual[pivot]
        row = vec_scale(residual, scale)
        row_combo = {k: c * scale for k, c in row_combo.items() if c}
        for p, (other, other_combo) in list(self._rows.items()):
            coeff = other.get(pivot)
            if coeff:
                vec_axpy(other, -coeff, row)
                for k, c in row_combo.items():
                    value = other_combo.get(k, 0) - coeff * c
                    if value:
                        other_combo[k] = value
                    else:
                        other_combo.pop(k, None)
        self._rows[pivot] = (row, row_combo)
        return True

    def express(self, v: SparseVec) -> Dict[Hashable, Fraction]:
        """Coefficients over inserted vectors reproducing v, or NoSolution"""
        residual, combo = self.reduce(v)
        if residual:
            raise NoSolution(f"Vector is outside the span (residual support {sorted(residual)[:5]})")
        return combo


def solve_combination(columns: Sequence[SparseVec], target: SparseVec) -> List[Fraction]:
    """
    Find x with sum_j x[j]*columns[j] = target

    Raises:
        NoSolution: if target is outside the span of the columns
    """
    basis = EchelonBasis()
    for j, col in enumerate(columns):
        basis.add(col, j)
    combo = basis.express(target)
    return [combo.get(j, Fraction(0)) for j in range(len(columns))]


def dense_to_sparse(row: Sequence[Fraction]) -> SparseVec:
    return {i: Fraction(c) for i, c in enumerate(row) if c}


def solve_dense(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> List[Fraction]:
    """Solve a square or overdetermined system M x = rhs exactly"""
    ncols = len(matrix[0]) if matrix else 0
    columns = [{i: Fraction(row[j]) for i, row in enumerate(matrix) if row[j]} for j in range(ncols)]
    return solve_combination(columns, dense_to_sparse(rhs))

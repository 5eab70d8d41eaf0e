"""Reduced-echelon spans and quotients of sparse Scalar vectors.

Vectors are MixedTensors (or raw key->Scalar dicts); pivoting is by the
sorted term key, so bases and canonical representatives are
deterministic.
"""

from __future__ import annotations

from .errors import Inconsistent
from .scalars import ONE, ZERO
from .tensors import MixedTensor


def _as_dict(v):
    return v.terms if isinstance(v, MixedTensor) else v


class RowSpan:
    """Row space in reduced echelon form, one pivot key per row."""

    def __init__(self, vectors=()):
        self.pivots = {}           # pivot key -> row dict (pivot coeff 1)
        self.added_indices = []    # indices of the input vectors that were independent
        for i, v in enumerate(vectors):
            if self.add(v):
                self.added_indices.append(i)

    def reduce(self, v):
        # pivot rows are fully back-substituted, so reduction never
        # introduces new pivot keys and a single pass suffices
        out = dict(_as_dict(v))
        for k in sorted(set(out) & set(self.pivots), key=repr):
            f = out.get(k)
            if f is None or f.is_zero():
                continue
            for rk, rc in self.pivots[k].items():
                s = out.get(rk, ZERO) - f * rc
                if s.is_zero():
                    out.pop(rk, None)
                else:
                    out[rk] = s
        return out

    def add(self, v):
        r = self.reduce(v)
        if not r:
            return False
        pk = sorted(r, key=repr)[0]
        inv = ONE / r[pk]
        row = {k: c * inv for k, c in r.items()}
        # back-substitute into existing rows to keep reduced form
        for key, old in list(self.pivots.items()):
            f = old.get(pk)
            if f is not None and not f.is_zero():
                new = dict(old)
                for rk, rc in row.items():
                    s = new.get(rk, ZERO) - f * rc
                    if s.is_zero():
                        new.pop(rk, None)
                    else:
                        new[rk] = s
                self.pivots[key] = new
        self.pivots[pk] = row
        return True

    def contains(self, v):
        return not self.reduce(v)

    @property
    def dim(self):
        return len(self.pivots)


def express_in(vectors, target, shape=None):
    """Coefficients writing target as a combination of the vectors.

    Raises Inconsistent when the target lies outside the span.
    """
    from .presalg import solve_linear

    vds = [_as_dict(v) for v in vectors]
    td = _as_dict(target)
    keys = sorted({k for v in vds for k in v} | set(td), key=repr)
    rows = [[v.get(k, ZERO) for v in vds] for k in keys]
    rhs = [td.get(k, ZERO) for k in keys]
    return solve_linear(rows, rhs).solution


class QuotientSpace:
    """Ambient space modulo a relation span, with canonical representatives."""

    def __init__(self, relations):
        self.rel = RowSpan(relations)

    def project(self, v):
        return self.rel.reduce(v)

    def basis_from(self, ambient_basis):
        """Independent canonical representatives of the ambient basis classes."""
        out = []
        span = RowSpan()
        for v in ambient_basis:
            r = self.project(v)
            if r and span.add(r):
                out.append(r)
        return out

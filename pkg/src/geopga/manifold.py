"""Product manifolds of spheres, rotations and Euclidean 3-space.

A snapshot of the product manifold is stored as one flat row of floats:
S2 components take 3 entries, SO3 components 9 (row-major) and R3
components 3, in layout order. A trajectory is a 2-d array with one snapshot
per row.
"""

from dataclasses import dataclass
import re

import numpy as np

from .exceptions import ValidationError

S2 = "S2"
SO3 = "SO3"
R3 = "R3"
TAGS = (S2, SO3, R3)

NORTH2 = "north2"
AMBIENT3 = "ambient3"
SCHEMES = (NORTH2, AMBIENT3)

_POINT_DIM = {S2: 3, SO3: 9, R3: 3}
_TOKEN = re.compile(r"^(S2|SO3|R3)(?:\*([1-9][0-9]*))?$")


@dataclass(frozen=True)
class Layout:
    """Ordered component tags plus the tangent coordinate scheme for S2.

    ``scheme='north2'`` stores S2 tangents as 2 coordinates after rotating the
    base director to the north pole; ``'ambient3'`` keeps the ambient 3-vector
    and is the fallback when a base director sits at the south pole.
    """

    components: tuple
    scheme: str = NORTH2

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValidationError("layout needs at least one component")
        bad = [c for c in comps if c not in TAGS]
        if bad:
            raise ValidationError(f"unknown component tag(s) {bad}; expected {TAGS}")
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown S2 scheme {self.scheme!r}; expected {SCHEMES}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text, scheme=NORTH2):
        """Parse ``'R3*160 SO3*160'`` style layout strings."""
        comps = []
        for token in text.split():
            m = _TOKEN.match(token)
            if m is None:
                raise ValidationError(f"bad layout token {token!r}")
            comps.extend([m.group(1)] * int(m.group(2) or 1))
        return cls(tuple(comps), scheme)

    def __str__(self):
        parts = []
        i = 0
        comps = self.components
        while i < len(comps):
            j = i
            while j < len(comps) and comps[j] == comps[i]:
                j += 1
            count = j - i
            parts.append(comps[i] if count == 1 else f"{comps[i]}*{count}")
            i = j
        return " ".join(parts)

    def tangent_width(self, tag):
        if tag == S2:
            return 2 if self.scheme == NORTH2 else 3
        return 3

    @property
    def point_dim(self):
        """Number of floats per snapshot row."""
        return sum(_POINT_DIM[c] for c in self.components)

    @property
    def tangent_dim(self):
        """Dimension ``m`` of the tangent coordinate vectors."""
        return sum(self.tangent_width(c) for c in self.components)

    @property
    def curved(self):
        """Indices of the S2 and SO3 components."""
        return tuple(i for i, c in enumerate(self.components) if c != R3)

    def point_slices(self):
        """Slices into a snapshot row, one per component."""
        out, start = [], 0
        for c in self.components:
            out.append(slice(start, start + _POINT_DIM[c]))
            start += _POINT_DIM[c]
        return out

    def tangent_slices(self):
        """Slices into a tangent coordinate vector, one per component."""
        out, start = [], 0
        for c in self.components:
            w = self.tangent_width(c)
            out.append(slice(start, start + w))
            start += w
        return out

    def split(self, X):
        """Component arrays of a snapshot row or trajectory.

        SO3 components come back as ``(..., 3, 3)`` matrices, the others as
        ``(..., 3)`` vectors.
        """
        X = np.asarray(X, dtype=float)
        parts = []
        for c, sl in zip(self.components, self.point_slices()):
            block = X[..., sl]
            if c == SO3:
                block = block.reshape(block.shape[:-1] + (3, 3))
            parts.append(block)
        return parts

    def join(self, parts):
        """Inverse of :meth:`split`."""
        flat = []
        for c, p in zip(self.components, parts):
            p = np.asarray(p, dtype=float)
            if c == SO3:
                p = p.reshape(p.shape[:-2] + (9,))
            flat.append(p)
        return np.concatenate(flat, axis=-1)


def as_layout(layout, scheme=None):
    """Coerce a :class:`Layout`, a layout string or a tag sequence to a Layout."""
    if isinstance(layout, Layout):
        if scheme is not None and scheme != layout.scheme:
            return Layout(layout.components, scheme)
        return layout
    if isinstance(layout, str):
        return Layout.parse(layout, scheme or NORTH2)
    return Layout(tuple(layout), scheme or NORTH2)

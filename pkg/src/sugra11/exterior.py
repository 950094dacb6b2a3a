"""Differential forms on coordinate charts.

Forms are stored sparsely: a degree-p form maps strictly increasing
p-tuples of coordinate indices to polynomial coefficients.  An
11-dimensional 4-form has at most C(11,4) = 330 components and the ones
appearing here are mostly monomial, so sparse maps keep everything tiny.

Every form lives on exactly one chart.  Forms on a factor chart of a
product are moved onto the product chart explicitly with
``lift_to_product`` (coefficients unchanged, indices renamed), which
keeps the bookkeeping of mixed base/fiber wedges auditable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .polyring import Polynomial

Index = Tuple[int, ...]


class ChartError(ValueError):
    """Chart mismatch or ill-formed chart data."""


class DegreeError(ValueError):
    """Degree out of range for the requested operation."""


@dataclass(frozen=True)
class Chart:
    """Named coordinate chart; the listed order fixes the orientation."""

    name: str
    coordinates: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.coordinates)) != len(self.coordinates):
            raise ChartError(f"duplicate coordinates in chart {self.name!r}")
        object.__setattr__(self, "coordinates", tuple(self.coordinates))

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def index_of(self, coordinate: str) -> int:
        try:
            return self.coordinates.index(coordinate)
        except ValueError:
            raise ChartError(f"{coordinate!r} is not a coordinate of chart {self.name!r}") from None


def _sort_with_sign(indices: Iterable[int]) -> Tuple[Index, int]:
    """Sort an index tuple, returning (sorted tuple, permutation sign).

    Returns sign 0 when an index repeats.
    """
    seq = list(indices)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and seq[j - 1] == seq[j]:
            return tuple(seq), 0
    return tuple(seq), sign


class DifferentialForm:
    """Degree-p form: strictly increasing index tuples -> polynomials."""

    __slots__ = ("chart", "degree", "components")

    def __init__(self, chart: Chart, degree: int, components: Mapping[Index, Polynomial] | None = None):
        if degree < 0:
            raise DegreeError("negative form degree")
        if degree > chart.dim and components:
            raise DegreeError(f"degree {degree} exceeds dim {chart.dim}")
        clean: Dict[Index, Polynomial] = {}
        if components:
            for idx, poly in components.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise DegreeError(f"index tuple {idx} has wrong length for degree {degree}")
                if any(i < 0 or i >= chart.dim for i in idx):
                    raise ChartError(f"index out of range in {idx}")
                if list(idx) != sorted(set(idx)):
                    raise ValueError(f"index tuple {idx} is not strictly increasing")
                if not poly.is_zero():
                    clean[idx] = poly
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "components", clean)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("DifferentialForm is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(chart: Chart, degree: int) -> "DifferentialForm":
        return DifferentialForm(chart, degree, {})

    @staticmethod
    def function(chart: Chart, value: Polynomial) -> "DifferentialForm":
        return DifferentialForm(chart, 0, {(): value})

    @staticmethod
    def coordinate_differential(chart: Chart, coordinate: str) -> "DifferentialForm":
        """The 1-form dx for a chart coordinate x."""
        return DifferentialForm(chart, 1, {(chart.index_of(coordinate),): Polynomial.constant(1)})

    @staticmethod
    def monomial(chart: Chart, coordinates: Iterable[str], coeff: Polynomial) -> "DifferentialForm":
        """coeff * dx^{i1} ^ ... ^ dx^{ip} given by coordinate names."""
        raw = tuple(chart.index_of(c) for c in coordinates)
        idx, sign = _sort_with_sign(raw)
        if sign == 0:
            return DifferentialForm.zero(chart, len(raw))
        return DifferentialForm(chart, len(raw), {idx: coeff * sign})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.degree == other.degree
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.chart, self.degree, frozenset(self.components.items())))

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check_compatible(other)
        out = dict(self.components)
        for idx, poly in other.components.items():
            s = out.get(idx)
            out[idx] = poly if s is None else s + poly
        return DifferentialForm(self.chart, self.degree, out)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.chart, self.degree, {i: -p for i, p in self.components.items()})

    def __mul__(self, scalar) -> "DifferentialForm":
        if isinstance(scalar, (int, Fraction, Polynomial)):
            return DifferentialForm(
                self.chart, self.degree, {i: p * scalar for i, p in self.components.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def _check_compatible(self, other: "DifferentialForm"):
        if self.chart != other.chart:
            raise ChartError(f"chart mismatch: {self.chart.name} vs {other.chart.name}")
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def component(self, *coordinates: str) -> Polynomial:
        idx, sign = _sort_with_sign(tuple(self.chart.index_of(c) for c in coordinates))
        if sign == 0:
            return Polynomial.zero()
        return self.components.get(idx, Polynomial.zero()) * sign

    def __str__(self) -> str:
        if not self.components:
            return "0"
        names = self.chart.coordinates
        parts = []
        for idx in sorted(self.components):
            basis = "^".join(f"d{names[i]}" for i in idx) if idx else "1"
            parts.append(f"({self.components[idx]}) {basis}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DifferentialForm<{self.chart.name}, deg {self.degree}: {self}>"


@dataclass(frozen=True)
class VectorField:
    """Polynomial vector field on a chart, sparse over coordinate indices."""

    chart: Chart
    components: Mapping[int, Polynomial]

    def __post_init__(self):
        clean = {
            int(i): p
            for i, p in dict(self.components).items()
            if not p.is_zero()
        }
        for i in clean:
            if i < 0 or i >= self.chart.dim:
                raise ChartError(f"vector component index {i} out of range")
        object.__setattr__(self, "components", clean)

    @staticmethod
    def coordinate(chart: Chart, coordinate: str) -> "VectorField":
        return VectorField(chart, {chart.index_of(coordinate): Polynomial.constant(1)})

    def component(self, i: int) -> Polynomial:
        return self.components.get(i, Polynomial.zero())

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.chart != other.chart:
            raise ChartError("chart mismatch")
        out = dict(self.components)
        for i, p in other.components.items():
            out[i] = out.get(i, Polynomial.zero()) + p
        return VectorField(self.chart, out)

    def __mul__(self, scalar) -> "VectorField":
        return VectorField(self.chart, {i: p * scalar for i, p in self.components.items()})

    __rmul__ = __mul__


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Exact wedge product; degree overflow is an error, not a silent zero."""
    if a.chart != b.chart:
        raise ChartError(f"chart mismatch: {a.chart.name} vs {b.chart.name}")
    degree = a.degree + b.degree
    if degree > a.chart.dim:
        raise DegreeError(
            f"wedge degree {a.degree}+{b.degree} exceeds dim {a.chart.dim} of chart {a.chart.name}"
        )
    out: Dict[Index, Polynomial] = {}
    for ia, pa in a.components.items():
        sa = set(ia)
        for ib, pb in b.components.items():
            if sa & set(ib):
                continue
            idx, sign = _sort_with_sign(ia + ib)
            term = pa * pb
            if sign < 0:
                term = -term
            prev = out.get(idx)
            out[idx] = term if prev is None else prev + term
    return DifferentialForm(a.chart, degree, out)


def wedge_all(*forms: DifferentialForm) -> DifferentialForm:
    result = forms[0]
    for f in forms[1:]:
        result = wedge(result, f)
    return result


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    """d, computed component-wise with sorted-insertion signs.

    For top-degree input the result is the empty form one degree up,
    which is identically zero by dimension count.
    """
    chart = a.chart
    if a.degree >= chart.dim:
        # trivially zero by dimension count; empty component map, degree p+1
        return DifferentialForm.zero(chart, a.degree + 1)
    out: Dict[Index, Polynomial] = {}
    for idx, poly in a.components.items():
        occupied = set(idx)
        for k, name in enumerate(chart.coordinates):
            if k in occupied:
                continue
            dp = poly.partial(name)
            if dp.is_zero():
                continue
            new_idx, sign = _sort_with_sign((k,) + idx)
            term = dp if sign > 0 else -dp
            prev = out.get(new_idx)
            out[new_idx] = term if prev is None else prev + term
    return DifferentialForm(chart, a.degree + 1, out)


def interior_product(v: VectorField, a: DifferentialForm) -> DifferentialForm:
    """Contraction on the first slot with alternating signs."""
    if v.chart != a.chart:
        raise ChartError(f"chart mismatch: {v.chart.name} vs {a.chart.name}")
    if a.degree == 0:
        raise DegreeError("interior product of a 0-form")
    out: Dict[Index, Polynomial] = {}
    for idx, poly in a.components.items():
        for pos, i in enumerate(idx):
            vi = v.components.get(i)
            if vi is None:
                continue
            term = poly * vi
            if pos % 2:
                term = -term
            rest = idx[:pos] + idx[pos + 1:]
            prev = out.get(rest)
            out[rest] = term if prev is None else prev + term
    return DifferentialForm(a.chart, a.degree - 1, out)


def lift_to_product(a: DifferentialForm, target: Chart) -> DifferentialForm:
    """Reindex a factor-chart form into a product chart containing its coordinates."""
    source = a.chart
    missing = [c for c in source.coordinates if c not in target.coordinates]
    if missing:
        raise ChartError(
            f"chart {source.name!r} is not a factor of {target.name!r}: missing {missing}"
        )
    mapping = [target.index_of(c) for c in source.coordinates]
    out: Dict[Index, Polynomial] = {}
    for idx, poly in a.components.items():
        new_idx, sign = _sort_with_sign(tuple(mapping[i] for i in idx))
        out[new_idx] = poly if sign > 0 else -poly
    return DifferentialForm(target, a.degree, out)


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    """[a, b]^k = a^i d_i b^k - b^i d_i a^k."""
    if a.chart != b.chart:
        raise ChartError("chart mismatch")
    names = a.chart.coordinates
    out: Dict[int, Polynomial] = {}
    for k in range(a.chart.dim):
        total = Polynomial.zero()
        for i, ai in a.components.items():
            bk = b.components.get(k)
            if bk is not None:
                total = total + ai * bk.partial(names[i])
        for i, bi in b.components.items():
            ak = a.components.get(k)
            if ak is not None:
                total = total - bi * ak.partial(names[i])
        if not total.is_zero():
            out[k] = total
    return VectorField(a.chart, out)

"""Deterministic builders for the concrete structures used in verification.

Every builder is a pure function of its parameters: the same (name, params)
always produces identical component functions, so residual reports are
bitwise reproducible under a fixed seed.

Built-in examples
-----------------

``flat_pack(n, s, scales)``
    R^(2n+s) with a constant skew block tensor of rank 2n; Q = -f^2 plus
    the Reeb correction. Constant and flat, hence a weak C-structure.

``rotated_pack(n, s, t, rotation)``
    Two constant classical structures f_1 (standard blocks) and
    f_2 = R f_1 R^T sharing the Reeb frame and metric, blended into
    f = cos(t) f_1 + sin(t) f_2 with Q = id - sin(t)cos(t) psi,
    psi = f_1 f_2 + f_2 f_1. The default conjugation is the coordinate
    reflection diag(1,-1,1,..,1) on the rotation block, for which psi has
    eigenvalues +-2 and Q degenerates exactly at |sin 2t| = 1; a Givens
    conjugation can be selected instead (its psi is a negative multiple of
    the identity on the block, so every t is admissible).

``product_pack(n, s, scales)``
    The product of a flat weak Kahler factor (R^2n, constant skew) with
    R^s: xi_i are the unit translations of the flat factor, f acts by the
    ambient skew tensor on the first factor, Q = -fbar^2 on it and the
    identity on the Reeb directions. A weak nearly C-structure.

``sasakian_s3()``
    The round unit 3-sphere in Hopf-style coordinates (al, be, ga) with
    metric diag(1, cos^2 al, sin^2 al), Reeb field d_be + d_ga and the
    compatible f with Q = id. Satisfies the full S-structure equation and
    has Killing Reeb flow; the one curved, non-product catalog member.

``hypersphere(n, ambient_skew, normal)``
    Unit S^(2n+1) in R^(2n+2) with the analytic position normal (inward by
    default) and a constant ambient skew tensor: the standard one (blocks
    of weight 1, induced Q = id) or a "weak" one (blocks of weight k,
    induced Q != id). Returns an embedded submanifold.

``linear_subspace(n, s, scales)``
    R^(2n+s) embedded as a linear subspace of flat R^(2n+2s) with constant
    normals and a constant ambient skew exchanging the last s tangent and
    normal directions; totally geodesic, its induced pack is the product
    pack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .charts import Chart, SmoothField, constant_field, euclidean_metric
from .errors import InvalidExample
from .fstructure import StructurePack
from .jets import cos, sin, tan
from .submanifold import EmbeddedSubmanifold

_Q_EIGEN_REJECT = 1e-10
_PSI_ZERO = 1e-10

_CONSTANT_PACK_CLASSES = (
    "weak_metric_f",
    "weak_almost_C",
    "weak_almost_K",
    "normal",
    "weak_C",
    "weak_K",
    "weak_nearly_C",
)

_SASAKIAN_CLASSES = (
    "weak_metric_f",
    "weak_almost_S",
    "weak_almost_K",
    "normal",
    "weak_S",
    "weak_K",
    "weak_nearly_S",
    "S_structure",
    "f_K_contact",
)


@dataclass(frozen=True)
class ExampleSpec:
    """Declarative description of a catalog object."""

    name: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogObject:
    """A built example plus its pinned verdict table."""

    name: str
    params: dict
    obj: object                    # StructurePack or EmbeddedSubmanifold
    declared_classes: tuple = ()
    declared_cases: tuple = ()     # submanifold criterion cases expected to hold

    @property
    def is_pack(self):
        return isinstance(self.obj, StructurePack)

    @property
    def chart(self):
        return self.obj.chart if self.is_pack else self.obj.domain


# -- constant-tensor helpers ------------------------------------------------------


def _block_skew(n, scales):
    """Block-diagonal skew matrix with 2x2 blocks of the given weights."""
    a = np.zeros((2 * n, 2 * n))
    for k, c in enumerate(scales):
        a[2 * k, 2 * k + 1] = -float(c)
        a[2 * k + 1, 2 * k] = float(c)
    return a


def _default_scales(n):
    return tuple(float(k + 1) for k in range(n))


def _constant_pack(chart, f_mat, q_mat, n, s):
    m = 2 * n + s
    xi = tuple(
        constant_field(chart, "vector", np.eye(m)[2 * n + i], name=f"xi_{i + 1}")
        for i in range(s)
    )
    eta = tuple(
        constant_field(chart, "oneform", np.eye(m)[2 * n + i], name=f"eta_{i + 1}")
        for i in range(s)
    )
    return StructurePack(
        chart=chart,
        f=constant_field(chart, "tensor11", f_mat, name="f"),
        Q=constant_field(chart, "tensor11", q_mat, name="Q"),
        xi=xi,
        eta=eta,
        g=euclidean_metric(chart),
        n=n,
        s=s,
    )


def _flat_chart(m, label):
    return Chart(name=f"{label}_r{m}", dim=m, box=tuple((-1.5, 1.5) for _ in range(m)))


# -- pack builders -----------------------------------------------------------------


def flat_pack(n=2, s=1, scales=None):
    """Constant weak C-structure on R^(2n+s)."""
    n, s = int(n), int(s)
    if n < 1 or s < 1:
        raise InvalidExample("flat_pack needs n >= 1 and s >= 1")
    scales = _default_scales(n) if scales is None else tuple(map(float, scales))
    if len(scales) != n:
        raise InvalidExample("flat_pack needs one block weight per complex block")
    m = 2 * n + s
    chart = _flat_chart(m, "flat")
    f = np.zeros((m, m))
    f[: 2 * n, : 2 * n] = _block_skew(n, scales)
    q = -f @ f
    q[2 * n :, 2 * n :] = np.eye(s)
    return CatalogObject(
        name="flat_pack",
        params={"n": n, "s": s, "scales": scales},
        obj=_constant_pack(chart, f, q, n, s),
        declared_classes=_CONSTANT_PACK_CLASSES,
    )


def _rotation_matrix(n, rotation):
    """Orthogonal conjugation on the rank-2n block from a descriptor."""
    if rotation is None or (isinstance(rotation, str) and rotation == "reflection"):
        r = np.eye(2 * n)
        r[1, 1] = -1.0
        return r
    if isinstance(rotation, str):
        parts = rotation.split(":")
        if parts[0] == "givens" and len(parts) == 4:
            i, j, theta = int(parts[1]), int(parts[2]), float(parts[3])
            return _givens(2 * n, i, j, theta)
        raise InvalidExample(f"unknown rotation descriptor {rotation!r}")
    if isinstance(rotation, (tuple, list)) and rotation and rotation[0] == "givens":
        _, i, j, theta = rotation
        return _givens(2 * n, int(i), int(j), float(theta))
    r = np.asarray(rotation, dtype=float)
    if r.shape != (2 * n, 2 * n):
        raise InvalidExample("rotation matrix must act on the rank-2n block")
    if np.abs(r @ r.T - np.eye(2 * n)).max() > 1e-10:
        raise InvalidExample("rotation matrix must be orthogonal")
    return r


def _givens(m, i, j, theta):
    if not (0 <= i < m and 0 <= j < m and i != j):
        raise InvalidExample("givens indices out of range")
    r = np.eye(m)
    c, sn = np.cos(theta), np.sin(theta)
    r[i, i] = c
    r[j, j] = c
    r[i, j] = -sn
    r[j, i] = sn
    return r


def rotated_pack(n=2, s=1, t=0.1, rotation=None):
    """Blend of two conjugate constant structures; weak nearly C."""
    n, s, t = int(n), int(s), float(t)
    if n < 1 or s < 1:
        raise InvalidExample("rotated_pack needs n >= 1 and s >= 1")
    m = 2 * n + s
    f1x = _block_skew(n, (1.0,) * n)
    r = _rotation_matrix(n, rotation)
    f2x = r @ f1x @ r.T
    psi_x = f1x @ f2x + f2x @ f1x
    if np.abs(psi_x).max() < _PSI_ZERO:
        raise InvalidExample(
            "psi = 0: degenerate rotation choice, the blend has Q = id"
        )
    sc = np.sin(t) * np.cos(t)
    q_x = np.eye(2 * n) - sc * psi_x
    eigmin = float(np.linalg.eigvalsh(0.5 * (q_x + q_x.T)).min())
    if eigmin <= _Q_EIGEN_REJECT:
        raise InvalidExample(
            f"Q not positive-definite for t={t}: smallest eigenvalue "
            f"{eigmin:.3e}"
        )
    f = np.zeros((m, m))
    f[: 2 * n, : 2 * n] = np.cos(t) * f1x + np.sin(t) * f2x
    q = np.eye(m)
    q[: 2 * n, : 2 * n] = q_x
    chart = _flat_chart(m, "rotated")
    return CatalogObject(
        name="rotated_pack",
        params={"n": n, "s": s, "t": t,
                "rotation": "reflection" if rotation is None else str(rotation)},
        obj=_constant_pack(chart, f, q, n, s),
        declared_classes=_CONSTANT_PACK_CLASSES,
    )


def product_pack(n=1, s=2, scales=None):
    """Flat weak Kahler factor times R^s; weak nearly C."""
    n, s = int(n), int(s)
    if n < 1 or s < 1:
        raise InvalidExample("product_pack needs n >= 1 and s >= 1")
    scales = (1.0,) * n if scales is None else tuple(map(float, scales))
    if len(scales) != n:
        raise InvalidExample("product_pack needs one block weight per complex block")
    m = 2 * n + s
    chart = _flat_chart(m, "product")
    abar = _block_skew(n, scales)
    f = np.zeros((m, m))
    f[: 2 * n, : 2 * n] = abar
    q = np.eye(m)
    q[: 2 * n, : 2 * n] = -abar @ abar
    return CatalogObject(
        name="product_pack",
        params={"n": n, "s": s, "scales": scales},
        obj=_constant_pack(chart, f, q, n, s),
        declared_classes=_CONSTANT_PACK_CLASSES,
    )


def sasakian_s3():
    """Round unit 3-sphere with its standard Sasakian structure, Q = id."""
    chart = Chart(
        name="hopf_s3",
        dim=3,
        box=((0.2, np.pi / 2 - 0.2), (0.3, 5.9), (0.3, 5.9)),
    )

    def metric_fn(u):
        al = u[0]
        c2 = cos(al) ** 2
        s2 = sin(al) ** 2
        return [[1.0, 0.0, 0.0], [0.0, c2, 0.0], [0.0, 0.0, s2]]

    def f_fn(u):
        al = u[0]
        sc = sin(al) * cos(al)
        ta = tan(al)
        return [
            [0.0, -sc, sc],
            [ta, 0.0, 0.0],
            [-1.0 / ta, 0.0, 0.0],
        ]

    def eta_fn(u):
        al = u[0]
        return [0.0, cos(al) ** 2, sin(al) ** 2]

    pack = StructurePack(
        chart=chart,
        f=SmoothField(chart, "tensor11", f_fn, name="f"),
        Q=constant_field(chart, "tensor11", np.eye(3), name="Q"),
        xi=(constant_field(chart, "vector", [0.0, 1.0, 1.0], name="xi_1"),),
        eta=(SmoothField(chart, "oneform", eta_fn, name="eta_1"),),
        g=SmoothField(chart, "metric", metric_fn, name="round_metric"),
        n=1,
        s=1,
    )
    return CatalogObject(
        name="sasakian_s3",
        params={},
        obj=pack,
        declared_classes=_SASAKIAN_CLASSES,
    )


# -- embedded submanifolds ----------------------------------------------------------


def _sphere_embedding(n):
    """Iterated polar chart of unit S^(2n+1) in R^(2n+2)."""

    def emb(u):
        als = u[:n]
        phis = u[n:]
        radii = []
        prefix = 1.0
        for k in range(n):
            radii.append(prefix * cos(als[k]))
            prefix = prefix * sin(als[k])
        radii.append(prefix)
        out = []
        for r, ph in zip(radii, phis):
            out.append(r * cos(ph))
            out.append(r * sin(ph))
        return out

    return emb


def hypersphere(n=1, ambient_skew="standard", normal="inward"):
    """Unit S^(2n+1) in flat R^(2n+2) with the position normal, s = 1."""
    n = int(n)
    if n < 1:
        raise InvalidExample("hypersphere needs n >= 1")
    if ambient_skew not in ("standard", "weak"):
        raise InvalidExample("ambient_skew must be 'standard' or 'weak'")
    if normal not in ("inward", "outward"):
        raise InvalidExample("normal must be 'inward' or 'outward'")
    m = 2 * n + 1
    d = 2 * n + 2
    domain = Chart(
        name=f"hopf_s{m}",
        dim=m,
        box=tuple((0.25, np.pi / 2 - 0.25) for _ in range(n))
        + tuple((0.3, 5.9) for _ in range(n + 1)),
    )
    ambient = Chart(
        name=f"flat_r{d}", dim=d, box=tuple((-1.2, 1.2) for _ in range(d))
    )
    weights = (
        (1.0,) * (n + 1)
        if ambient_skew == "standard"
        else tuple(float(k + 1) for k in range(n + 1))
    )
    skew = _block_skew(n + 1, weights)
    emb = _sphere_embedding(n)
    sign = -1.0 if normal == "inward" else 1.0

    def normals_fn(u, emb=emb, sign=sign):
        return [[sign * c for c in emb(u)]]

    sub = EmbeddedSubmanifold(
        domain=domain,
        ambient=ambient,
        ambient_metric=euclidean_metric(ambient),
        ambient_skew=constant_field(ambient, "tensor11", skew, name="fbar"),
        embedding=emb,
        normals=normals_fn,
        n=n,
        s=1,
    )
    # A constant non-standard skew cannot normalize the Reeb data on a full
    # sphere (that needs fbar^2 N = -N pointwise), so the "weak" variant is
    # a diagnostics example: the f^2 and compatibility identities hold with
    # a positive-definite Q != id, while the Reeb axioms fail by design.
    declared = _SASAKIAN_CLASSES if ambient_skew == "standard" else ()
    cases = ("i",) if ambient_skew == "standard" else ()
    return CatalogObject(
        name="hypersphere",
        params={"n": n, "ambient_skew": ambient_skew, "normal": normal},
        obj=sub,
        declared_classes=declared,
        declared_cases=cases,
    )


def linear_subspace(n=1, s=1, scales=None):
    """R^(2n+s) as a totally geodesic linear subspace of flat R^(2n+2s)."""
    n, s = int(n), int(s)
    if n < 1 or s < 1:
        raise InvalidExample("linear_subspace needs n >= 1 and s >= 1")
    scales = (1.0,) * n if scales is None else tuple(map(float, scales))
    if len(scales) != n:
        raise InvalidExample("linear_subspace needs one block weight per complex block")
    m = 2 * n + s
    d = 2 * n + 2 * s
    domain = _flat_chart(m, "subspace")
    ambient = Chart(
        name=f"flat_r{d}", dim=d, box=tuple((-2.0, 2.0) for _ in range(d))
    )
    skew = np.zeros((d, d))
    skew[: 2 * n, : 2 * n] = _block_skew(n, scales)
    for i in range(s):
        # fbar z_i = y_i, fbar y_i = -z_i
        skew[2 * n + i, 2 * n + s + i] = 1.0
        skew[2 * n + s + i, 2 * n + i] = -1.0

    def emb(u):
        return list(u) + [0.0] * s

    basis = np.eye(d)

    def normals_fn(u):
        return [list(basis[2 * n + s + i]) for i in range(s)]

    sub = EmbeddedSubmanifold(
        domain=domain,
        ambient=ambient,
        ambient_metric=euclidean_metric(ambient),
        ambient_skew=constant_field(ambient, "tensor11", skew, name="fbar"),
        embedding=emb,
        normals=normals_fn,
        n=n,
        s=s,
    )
    return CatalogObject(
        name="linear_subspace",
        params={"n": n, "s": s, "scales": scales},
        obj=sub,
        declared_classes=_CONSTANT_PACK_CLASSES,
        declared_cases=("ii",),
    )


# -- registry ------------------------------------------------------------------------


BUILDERS = {
    "flat_pack": flat_pack,
    "rotated_pack": rotated_pack,
    "product_pack": product_pack,
    "sasakian_s3": sasakian_s3,
    "hypersphere": hypersphere,
    "linear_subspace": linear_subspace,
}


def make_example(spec, **params):
    """Build a catalog object from an :class:`ExampleSpec` or a name."""
    if isinstance(spec, ExampleSpec):
        name, params = spec.name, dict(spec.params)
    else:
        name = str(spec)
    builder = BUILDERS.get(name)
    if builder is None:
        known = ", ".join(sorted(BUILDERS))
        raise InvalidExample(f"unknown example {name!r} (known: {known})")
    try:
        return builder(**params)
    except TypeError as exc:
        raise InvalidExample(f"bad parameters for {name!r}: {exc}") from exc

import numpy as np
import pytest

from weakf.catalog import (
    flat_pack,
    hypersphere,
    linear_subspace,
    product_pack,
    rotated_pack,
    sasakian_s3,
)
from weakf.charts import Chart, SmoothField
from weakf.jets import cos, sin
from weakf.submanifold import induce_structure


@pytest.fixture(scope="session")
def cat_flat():
    return flat_pack(n=2, s=1)


@pytest.fixture(scope="session")
def cat_rotated():
    return rotated_pack(n=2, s=1, t=0.1)


@pytest.fixture(scope="session")
def cat_product():
    return product_pack(n=1, s=2)


@pytest.fixture(scope="session")
def cat_sasakian():
    return sasakian_s3()


@pytest.fixture(scope="session")
def cat_sphere():
    return hypersphere(n=1)


@pytest.fixture(scope="session")
def cat_sphere_weak():
    return hypersphere(n=1, ambient_skew="weak")


@pytest.fixture(scope="session")
def cat_subspace():
    return linear_subspace(n=1, s=2)


@pytest.fixture(scope="session")
def sphere_induced(cat_sphere):
    return induce_structure(cat_sphere.obj)


@pytest.fixture(scope="session")
def subspace_induced(cat_subspace):
    return induce_structure(cat_subspace.obj)


@pytest.fixture(scope="session")
def all_packs(cat_flat, cat_rotated, cat_product, cat_sasakian):
    return [cat_flat, cat_rotated, cat_product, cat_sasakian]


@pytest.fixture(scope="session")
def r3():
    return Chart("r3", 3, ((-1.5, 1.5),) * 3)


@pytest.fixture(scope="session")
def varying_q_pack(r3):
    """Valid weak pack on flat R^3 whose Q varies along the chart.

    f = sqrt(1 + phi) J0 on the contact plane with phi = 0.4 sin(x1), so
    Q = (1 + phi) there; every axiom holds pointwise, but Q is not parallel
    and neither nearly-S nor nearly-C is satisfied.
    """
    from weakf.charts import constant_field, euclidean_metric
    from weakf.fstructure import StructurePack
    from weakf.jets import sqrt

    def f_fn(u):
        a = sqrt(1.0 + 0.4 * sin(u[0]))
        return [[0.0, -a, 0.0], [a, 0.0, 0.0], [0.0, 0.0, 0.0]]

    def q_fn(u):
        q = 1.0 + 0.4 * sin(u[0])
        return [[q, 0.0, 0.0], [0.0, q, 0.0], [0.0, 0.0, 1.0]]

    return StructurePack(
        chart=r3,
        f=SmoothField(r3, "tensor11", f_fn),
        Q=SmoothField(r3, "tensor11", q_fn),
        xi=(constant_field(r3, "vector", [0.0, 0.0, 1.0]),),
        eta=(constant_field(r3, "oneform", [0.0, 0.0, 1.0]),),
        g=euclidean_metric(r3),
        n=1,
        s=1,
    )


def random_scalar_fn(rng, dim=3):
    """Seeded smooth scalar function with O(1) derivatives."""
    a = rng.uniform(-1, 1, size=dim + 1)
    b = rng.uniform(-1, 1, size=dim)
    c = rng.uniform(-1, 1, size=(dim, dim))

    def fn(u, a=a, b=b, c=c, dim=dim):
        out = a[0]
        for i in range(dim):
            out = out + a[i + 1] * sin(u[i]) + b[i] * cos(u[i])
        for i in range(dim):
            for j in range(dim):
                out = out + 0.1 * c[i, j] * u[i] * u[j]
        return out

    return fn


def random_vector_field(chart, rng, name=""):
    fns = [random_scalar_fn(rng, chart.dim) for _ in range(chart.dim)]
    return SmoothField(
        chart, "vector", lambda u, fns=fns: [f(u) for f in fns], name=name
    )


def random_oneform_field(chart, rng, name=""):
    fns = [random_scalar_fn(rng, chart.dim) for _ in range(chart.dim)]
    return SmoothField(
        chart, "oneform", lambda u, fns=fns: [f(u) for f in fns], name=name
    )


def random_tensor_field(chart, rng, name=""):
    fns = [
        [random_scalar_fn(rng, chart.dim) for _ in range(chart.dim)]
        for _ in range(chart.dim)
    ]
    return SmoothField(
        chart,
        "tensor11",
        lambda u, fns=fns: [[f(u) for f in row] for row in fns],
        name=name,
    )


def interior_point(chart, rng):
    lo = np.array([b[0] for b in chart.box])
    hi = np.array([b[1] for b in chart.box])
    return lo + (hi - lo) * rng.uniform(0.15, 0.85, size=chart.dim)

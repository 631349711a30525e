"""weakf: chart-based verification engine for weak metric f-structures.

Builds concrete coordinate realizations of weak metric f-structures (and
their nearly-S / nearly-C / S / f-K-contact refinements), measures the
residual of every defining identity and theorem-level consequence at seeded
sample points, and reports the results deterministically.
"""

__version__ = "0.1.0"

from .charts import Chart, SmoothField, constant_field, euclidean_metric
from .fstructure import PackFrame, StructurePack, axioms_residual
from .catalog import CatalogObject, ExampleSpec, make_example
from .report import SuiteConfig, run_suite

__all__ = [
    "__version__",
    "Chart",
    "SmoothField",
    "constant_field",
    "euclidean_metric",
    "StructurePack",
    "PackFrame",
    "axioms_residual",
    "CatalogObject",
    "ExampleSpec",
    "make_example",
    "SuiteConfig",
    "run_suite",
]

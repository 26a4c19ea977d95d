import numpy as np
import pytest

from tcmnn import _backend
from tcmnn.datamodel import DataSet, LabeledExample, default_class_names


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    """Run a test under each compute backend, restoring the default after."""
    _backend.use(request.param)
    yield request.param
    _backend._active = None


def make_dataset(X, y=None, name="test", class_names=None, C=None,
                 attribute_names=None) -> DataSet:
    X = np.asarray(X, dtype=float)
    if y is None:
        examples = tuple(LabeledExample(tuple(row)) for row in X)
        return DataSet(name=name, n=X.shape[1], C=C or 1,
                       class_names=class_names or default_class_names(C or 1),
                       classes_known=False, examples=examples,
                       attribute_names=attribute_names)
    y = [int(v) for v in y]
    C = C or (max(y) + 1)
    examples = tuple(LabeledExample(tuple(row), lab) for row, lab in zip(X, y))
    return DataSet(name=name, n=X.shape[1], C=C,
                   class_names=class_names or default_class_names(C),
                   classes_known=True, examples=examples,
                   attribute_names=attribute_names)


def random_labeled_problem(rng, l_max=30, n_max=4, C_max=3, k_max=3,
                           ensure_k_fits=True):
    """A random classification problem where every class has enough members."""
    while True:
        l = rng.integers(4, l_max + 1)
        n = rng.integers(1, n_max + 1)
        C = rng.integers(2, C_max + 1)
        y = rng.integers(0, C, size=l)
        counts = np.bincount(y, minlength=C)
        if counts.min() == 0:
            continue
        k = int(rng.integers(1, k_max + 1))
        if ensure_k_fits and k > counts.min():
            continue
        X = np.round(rng.uniform(-2, 2, size=(l, n)), 3)
        return X, y, int(C), k

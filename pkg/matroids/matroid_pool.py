import re
from typing import Any, Callable, Dict, Optional

import numpy as np

from oracle.galois import FieldMatrix
from .matroid import Matroid, direct_sum, from_matrix, graphic, uniform, vamos

_matroid_entrypoints: Dict[str, Callable[..., Matroid]] = {}
_representation_entrypoints: Dict[str, Callable[..., FieldMatrix]] = {}

K4_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def register_matroid(fn: Callable[..., Any]) -> Callable[..., Any]:
    name = fn.__name__  # e.g., 'u23_vamos'
    _matroid_entrypoints[name] = fn
    return fn


def register_representation(fn: Callable[..., Any]) -> Callable[..., Any]:
    name = fn.__name__.replace('_matrix', '')
    _representation_entrypoints[name] = fn
    return fn


def _normalize(name: str) -> str:
    return name.strip().lower().replace('+', '_').replace(',', '').replace(' ', '')


_UNIFORM = re.compile(r'^u(\d+),(\d+)$')


def matroid_select(name: str) -> Matroid:
    uniform_match = _UNIFORM.match(name.strip().lower())
    if uniform_match:
        return uniform(int(uniform_match.group(1)), int(uniform_match.group(2)))
    key = _normalize(name)
    try:
        fn = _matroid_entrypoints[key]
    except KeyError:
        raise ValueError("Cannot find the matroid [{}] in the registration list, please add it to matroids/matroid_pool.py".format(name))
    return fn()


def representation_select(name: str, q: Optional[int] = None) -> Optional[FieldMatrix]:
    """Registered GF(q) representation of a named matroid, or None if there is none."""
    key = _normalize(name)
    fn = _representation_entrypoints.get(key)
    if fn is None:
        return None
    fm = fn()
    if q is not None and fm.q != q:
        return None
    return fm


def registered_names():
    return sorted(_matroid_entrypoints)


@register_matroid
def u11():
    return uniform(1, 1)


@register_matroid
def u12():
    return uniform(1, 2)


@register_matroid
def u13():
    return uniform(1, 3)


@register_matroid
def u23():
    return uniform(2, 3)


@register_matroid
def u24():
    return uniform(2, 4)


@register_matroid
def u45():
    return uniform(4, 5)


@register_matroid
def vamos_matroid():
    return vamos()


_matroid_entrypoints['vamos'] = vamos_matroid


@register_matroid
def k4():
    return graphic(4, K4_EDGES, name='K4')


@register_matroid
def u23_vamos():
    return direct_sum(uniform(2, 3), vamos())


@register_matroid
def u23_u23():
    return direct_sum(uniform(2, 3), uniform(2, 3))


@register_matroid
def u23_u45():
    return direct_sum(uniform(2, 3), uniform(4, 5))


@register_representation
def u12_matrix():
    return FieldMatrix(2, np.array([[1, 1]]))


@register_representation
def u13_matrix():
    return FieldMatrix(2, np.array([[1, 1, 1]]))


@register_representation
def u23_matrix():
    return FieldMatrix(2, np.array([[1, 0, 1], [0, 1, 1]]))


@register_representation
def u24_matrix():
    return FieldMatrix(5, np.array([[1, 0, 1, 1], [0, 1, 1, 2]]))


@register_representation
def u45_matrix():
    return FieldMatrix(5, np.array([[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1]]))


@register_representation
def k4_matrix():
    mat = np.zeros((4, len(K4_EDGES)), dtype=np.int64)
    for k, (a, b) in enumerate(K4_EDGES):
        mat[a, k] = 1
        mat[b, k] = 1
    return FieldMatrix(2, mat)


def representation_over(name: str, q: int) -> Optional[FieldMatrix]:
    """A representation over GF(q); U(2,3) is carried to GF(5) by reading its 0/1 matrix there."""
    fm = representation_select(name)
    if fm is None:
        return None
    if fm.q == q:
        return fm
    if fm.q == 2 and q in (3, 5):
        candidate = FieldMatrix(q, fm.entries)
        if from_matrix(q, candidate).bases == from_matrix(2, fm).bases:
            return candidate
    return None

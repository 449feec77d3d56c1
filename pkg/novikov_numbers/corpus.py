"""
Bundled example documents.

Cellular complexes use one vertex and the standard CW structure; a 2-cell
attached along a relator r meets edge g with the Fox derivative dr/dg.
"""

import copy
from typing import Dict, List, Tuple

from .algebra import companion_matrix
from .documents import Document, parse_document
from .errors import MalformedInputError


def _term(sign: int, *word: str) -> Dict:
    return {"sign": sign, "word": list(word)}


def _edge(cell: int, generator: str) -> Dict:
    """Edge labeled g from the vertex to itself: g - 1."""
    return {"degree": 1, "cell": cell, "face": 0, "terms": [_term(1, generator), _term(-1)]}


def _torus(name: str, exponents_a: List[int], exponents_b: List[int], periods: List[float]) -> Dict:
    # r = a b a^-1 b^-1
    return {
        "kind": "complex",
        "name": name,
        "description": "torus, one vertex, edges a and b, face attached along a b a^-1 b^-1",
        "top_degree": 2,
        "fiber_dim": 1,
        "num_vars": len(exponents_a),
        "period_basis": periods,
        "cells": [1, 2, 1],
        "generators": [
            {"name": "a", "representation": [["1"]], "exponents": exponents_a},
            {"name": "b", "representation": [["1"]], "exponents": exponents_b},
        ],
        "boundaries": [
            _edge(0, "a"),
            _edge(1, "b"),
            {"degree": 2, "cell": 0, "face": 0, "terms": [_term(1), _term(-1, "a", "b", "a^-1")]},
            {"degree": 2, "cell": 0, "face": 1,
             "terms": [_term(1, "a"), _term(-1, "a", "b", "a^-1", "b^-1")]},
        ],
        "probes": [["1"] * len(exponents_a), ["2"] * len(exponents_a)] if exponents_a else [],
    }


def _circle(name: str, exponents: List[int], periods: List[float], description: str) -> Dict:
    return {
        "kind": "complex",
        "name": name,
        "description": description,
        "top_degree": 1,
        "fiber_dim": 1,
        "num_vars": len(exponents),
        "period_basis": periods,
        "cells": [1, 1],
        "generators": [{"name": "g", "representation": [["1"]], "exponents": exponents}],
        "boundaries": [_edge(0, "g")],
        "probes": [["1"], ["2"], ["3"], ["-1"]] if exponents else [],
    }


GRANNY_EDGES = ["a", "b", "c", "d"]


def _trefoil_relator(cell: int, a: str, b: str) -> List[Dict]:
    """Fox derivatives of a b a b^-1 a^-1 b^-1 with respect to a and b."""
    return [
        {"degree": 2, "cell": cell, "face": GRANNY_EDGES.index(a),
         "terms": [_term(1), _term(1, a, b), _term(-1, a, b, a, f"{b}^-1", f"{a}^-1")]},
        {"degree": 2, "cell": cell, "face": GRANNY_EDGES.index(b),
         "terms": [_term(1, a), _term(-1, a, b, a, f"{b}^-1"),
                   _term(-1, a, b, a, f"{b}^-1", f"{a}^-1", f"{b}^-1")]},
    ]


def _granny_sum(name: str, meridian: List[List[str]], field_degree: int, description: str) -> Dict:
    """
    Complement of the granny knot <a, b, c | trefoil(a, b), trefoil(a, c)> wedged
    with S^1 x S^2 (edge d, sphere e, 3-cell d x e). xi is the S^1 factor; every
    knot meridian acts on the fiber by `meridian`.
    """
    fiber_dim = len(meridian)
    identity = [["1" if i == j else "0" for j in range(fiber_dim)] for i in range(fiber_dim)]
    return {
        "kind": "complex",
        "name": name,
        "description": description,
        "top_degree": 3,
        "fiber_dim": fiber_dim,
        "num_vars": 1,
        "field_degree": field_degree,
        "period_basis": [1.0],
        "cells": [1, 4, 3, 1],
        "generators": [
            {"name": "a", "representation": meridian, "exponents": [0]},
            {"name": "b", "representation": meridian, "exponents": [0]},
            {"name": "c", "representation": meridian, "exponents": [0]},
            {"name": "d", "representation": identity, "exponents": [1]},
        ],
        "boundaries": [
            *[_edge(i, g) for i, g in enumerate(GRANNY_EDGES)],
            *_trefoil_relator(0, "a", "b"),
            *_trefoil_relator(1, "a", "c"),
            {"degree": 3, "cell": 0, "face": 2, "terms": [_term(1, "d"), _term(-1)]},
        ],
        "probes": [["1"], ["2"], ["-1"]],
    }


# a root of y^2 - y + 1, the trefoil Alexander polynomial, realized over Q
ETA = [[str(v) for v in row] for row in companion_matrix([1, -1, 1])]


CORPUS: Dict[str, Dict] = {
    "circle_xi0": _circle("circle_xi0", [], [], "circle, untwisted (xi = 0)"),
    "circle_xi1": _circle("circle_xi1", [1], [1.0], "circle, xi the generator of H^1"),
    "torus_xi0": _torus("torus_xi0", [], [], []),
    "torus_xi10": _torus("torus_xi10", [1], [0], [1.0]),
    "sphere_complex": {
        "kind": "complex",
        "name": "sphere_complex",
        "description": "2-sphere, one 0-cell and one 2-cell",
        "top_degree": 2,
        "fiber_dim": 1,
        "num_vars": 0,
        "cells": [1, 0, 1],
    },
    "klein_like": {
        "kind": "complex",
        "name": "klein_like",
        "description": "Klein bottle a b a^-1 b = 1, xi(a) = 1, sign local system b -> -1",
        "top_degree": 2,
        "fiber_dim": 1,
        "num_vars": 1,
        "period_basis": [1.0],
        "cells": [1, 2, 1],
        "generators": [
            {"name": "a", "representation": [["1"]], "exponents": [1]},
            {"name": "b", "representation": [["-1"]], "exponents": [0]},
        ],
        "boundaries": [
            _edge(0, "a"),
            _edge(1, "b"),
            {"degree": 2, "cell": 0, "face": 0, "terms": [_term(1), _term(-1, "a", "b", "a^-1")]},
            {"degree": 2, "cell": 0, "face": 1, "terms": [_term(1, "a"), _term(1, "a", "b", "a^-1")]},
        ],
        "probes": [["1"], ["-1"]],
    },
    "alexander_trefoil": {
        "kind": "complex",
        "name": "alexander_trefoil",
        "description": "trefoil Alexander module: one block x^2 - x + 1 between rank-1 groups",
        "top_degree": 1,
        "fiber_dim": 1,
        "num_vars": 1,
        "period_basis": [1.0],
        "mode": "raw",
        "cells": [1, 1],
        "coboundaries": [
            {
                "degree": 0,
                "entries": [
                    {
                        "row": 0,
                        "col": 0,
                        "terms": [
                            {"coeff": "1", "exponents": [2]},
                            {"coeff": "-1", "exponents": [1]},
                            {"coeff": "1", "exponents": [0]},
                        ],
                    }
                ],
            }
        ],
        "probes": [["2"], ["3"], ["-1"]],
    },
    "alexander_trefoil_companion": {
        "kind": "complex",
        "name": "alexander_trefoil_companion",
        "description": (
            "trefoil block with the fiber realizing a root eta of y^2 - y + 1 by its "
            "companion matrix; x = 1 substitutes eta"
        ),
        "top_degree": 1,
        "fiber_dim": 2,
        "num_vars": 1,
        "field_degree": 2,
        "period_basis": [1.0],
        "cells": [1, 1],
        "generators": [{"name": "g", "representation": ETA, "exponents": [1]}],
        "boundaries": [
            {"degree": 1, "cell": 0, "face": 0, "terms": [_term(1, "g", "g"), _term(-1, "g"), _term(1)]},
        ],
        "probes": [["1"], ["2"], ["-1"]],
    },
    "granny_sum": _granny_sum(
        "granny_sum", [["1"]], 1,
        "granny knot complement wedged with S^1 x S^2, xi on the S^1 factor, trivial fiber",
    ),
    "granny_sum_eta": _granny_sum(
        "granny_sum_eta", ETA, 2,
        "granny knot complement wedged with S^1 x S^2, xi on the S^1 factor, meridians "
        "acting by a root eta of the trefoil Alexander polynomial (a double root of the granny's)",
    ),
    "sphere_morse": {
        "kind": "morse",
        "name": "sphere_morse",
        "description": "height function on the 2-sphere",
        "fiber_dim": 1,
        "components": [
            {"name": "minimum", "index": 0, "poincare": [1]},
            {"name": "maximum", "index": 2, "poincare": [1]},
        ],
    },
    "torus_bott": {
        "kind": "morse",
        "name": "torus_bott",
        "description": "Morse-Bott height on the torus, two critical circles",
        "fiber_dim": 1,
        "components": [
            {"name": "bottom circle", "index": 0, "poincare": [1, 1]},
            {"name": "top circle", "index": 1, "poincare": [1, 1]},
        ],
    },
    "circle_linear_family": {
        "kind": "family",
        "name": "circle_linear_family",
        "description": "D(t) = t on the circle cochains, the untwisted point at t = 0",
        "base_point": "0",
        "order": 1,
        "exact": True,
        "cochain_ranks": [1, 1],
        "coefficients": [
            {"degree": 0, "k": 0, "matrix": [["0"]]},
            {"degree": 0, "k": 1, "matrix": [["1"]]},
        ],
    },
    "torus_linear_family": {
        "kind": "family",
        "name": "torus_linear_family",
        "description": "torus coboundaries deformed linearly along xi = (1, 0)",
        "base_point": "0",
        "order": 1,
        "exact": True,
        "cochain_ranks": [1, 2, 1],
        "coefficients": [
            {"degree": 0, "k": 1, "matrix": [["1"], ["0"]]},
            {"degree": 1, "k": 1, "matrix": [["0", "1"]]},
        ],
    },
    "zero_family": {
        "kind": "family",
        "name": "zero_family",
        "description": "all differentials zero",
        "base_point": "0",
        "order": 1,
        "exact": True,
        "cochain_ranks": [1, 2, 1],
    },
}

MORSE_PAIRS: Tuple[Tuple[str, str], ...] = (
    ("sphere_morse", "sphere_complex"),
    ("torus_bott", "torus_xi0"),
    ("torus_bott", "torus_xi10"),
)

# complexes whose xi is nonzero on a generator appearing in D^0
TWISTED_NAMES: Tuple[str, ...] = (
    "circle_xi1", "torus_xi10", "klein_like", "alexander_trefoil", "alexander_trefoil_companion",
    "granny_sum", "granny_sum_eta",
)


def names() -> List[str]:
    return sorted(CORPUS)


def raw(name: str) -> Dict:
    if name not in CORPUS:
        raise MalformedInputError(f"unknown example '{name}'; valid names: {', '.join(names())}")
    return copy.deepcopy(CORPUS[name])


def load(name: str) -> Document:
    return parse_document(raw(name))

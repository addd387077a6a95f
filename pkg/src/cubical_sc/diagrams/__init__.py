"""Disc diagrams over square or classical presentations."""
from .core import (CONECELL, FORMAT, HOLE, OUTER, SQUARE, DiscDiagram, FaceInfo, from_embedding,
                   point_diagram, relator_ypath, single_cell, single_square, validate_diagram)
from .dual import Cornsquare, DualCurve, DualData, find_cornsquares, trace_dual_curves
from .generators import (diagonal_staircase, grid_diagram, random_classical_diagram, random_staircase,
                         rectangle, staircase)
from .greendlinger import (EXPOSED, LADDER, NOT_APPLICABLE, GreendlingerVerdict, LadderDecomposition,
                           ShellReport, classify_greendlinger, exposed_cells, recognize_ladder,
                           shell_degree, validate_ladder)
from .grid import (HYPOTHESES_FAIL, INEQUALITY_HOLDS, INEQUALITY_VIOLATED, GridVerdict,
                   check_grid_inequality)
from .reduction import FULL, PARTIALLY_REDUCED, WEAK, apply_reduction, find_sites, is_reduced, reduce
from .sandwich import SandwichDecomposition, sandwich_decompose

from . import (branching, er_graph, geometric_sums, head_runs, occupancy,
               permutations, spin_systems, uniform_attachment)

__all__ = ["branching", "er_graph", "geometric_sums", "head_runs",
           "occupancy", "permutations", "spin_systems", "uniform_attachment"]

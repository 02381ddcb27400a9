"""Walkthrough on the smallest instance: one edge of weight 1.

The relaxation bound, the exact maximum eigenvalue, and both rounding
pipelines all meet at 2 here: the EPR pipeline rotates |00> exactly onto the
EPR pair, and the Quantum Max-Cut pipeline rounds to antipodal Bloch vectors
and rotates part of the way toward the singlet.
"""

import numpy as np

from qmcut import graphs, oracle, sdp
from qmcut.circuits import run_epr, run_qmc

g = graphs.normalize_weights(graphs.parse_graph("n 2\n0 1 1.0"))
print(f"graph: {g.n} vertices, edges {g.edges}")

for kind in ("qmc", "epr"):
    problem = sdp.build_sdp(g, kind)
    solution = sdp.solve_sdp(problem)
    norm = oracle.max_eigenvalue(oracle.build_hamiltonian(g, kind))
    print(f"\n[{kind}] moment matrix side {problem.dim}")
    print(f"  relaxation bound = {solution.objective_value:.8f} (duality gap {solution.solver_gap:.1e})")
    print(f"  exact |H|        = {norm:.8f}")
    print(f"  edge value       = {solution.edge_values[(0, 1)]:.8f}")

solution = sdp.solve_sdp(sdp.build_sdp(g, "epr"))
report, plan = run_epr(g, solution)
state = oracle.apply_circuit(oracle.zero_state(2), plan)
print(f"\nEPR pipeline: branch={report.branch}, analytic energy {report.total_energy:.8f}, "
      f"ratio {report.ratio:.6f}")
print(f"  rotated state vs EPR pair overlap: "
      f"{abs(np.vdot(state, oracle.EPR_PAIR))**2:.8f}")

solution = sdp.solve_sdp(sdp.build_sdp(g, "qmc"))
report, plan = run_qmc(g, solution, seed=42, trials=64)
print(f"\nQMC pipeline: expected energy {report.total_energy:.6f}, "
      f"ratio {report.ratio:.6f} (guarantee 0.58281)")
print(f"  Bloch vectors are antipodal: v0 . v1 = {plan.bloch[0] @ plan.bloch[1]:+.6f}")
state = oracle.apply_circuit(oracle.product_state(plan.bloch), plan)
h = oracle.build_hamiltonian(g, "qmc")
print(f"  one sampled realization simulates to {oracle.energy(state, h):.6f} "
      f"(expectation over axes/signs is {report.total_energy:.6f})")

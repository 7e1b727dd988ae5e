"""
Success-rate tables from the simulation harness
================================================

Each harness entry point repeats sampling + selection over seeded
replicates and tabulates how often the right answer comes back.  This
demo runs small versions of two designs; bigger grids go through the
same calls (or ``netcv bench`` on the command line).
"""

from netcv import ExperimentSpec, run_sim1, run_sim3

# planted balanced blocks, selection of K only, two sparsity levels
spec1 = ExperimentSpec(which="sim1", n=300, K=(2, 3), n1=(150, 100),
                       r=(0.05, 0.2), reps=5, seed=3)
table1 = run_sim1(spec1)
print(table1.csv_text())

# joint (model type, K) selection with SBM truth
spec3 = ExperimentSpec(which="sim3", n=300, K=(2,), model=("sbm",),
                       reps=5, seed=3)
table3 = run_sim3(spec3)
print(table3.csv_text())

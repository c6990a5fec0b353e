# Correspondences: matching two chains by solving for free parameters
#
# The two-parameter family [[a, b], [1/b, 0]] has a one-dimensional solution
# set per braid move, so each R move introduces a fresh free variable.  The
# two chains then agree only after the frees are related.

from tetra.criteria import smaller2_report

r = smaller2_report(trials=20, seed=7)
rep = r["report"]

# ## What the solver found
for name, value in sorted(rep.named_assignments().items()):
    print(f"{name} = {value.render()}")
print("unconstrained:", [rep.display_names[f] for f in rep.unconstrained])
print("verdicts:", rep.verdicts)

# ## Random exact certification
# Positive rationals for the inputs, frees solved at each point, exact compare.
print(r["certify"])

# ## Reference values
# The reference point lies on the solved family but is not what the
# triangular solver produces from generic inputs.
print("reference point on the family:", r["printed_point_ok"])
print("solver reproduces it literally:", r["literal"])

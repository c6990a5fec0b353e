# Wronskian evolution of a polynomial collection
#
# Start from u = (1, x, x^2/2, x^3/6).  The operator A_i(a) mixes u_i and
# u_(i+1) by a determinant-one matrix.  Wronskians of the leading subsets
# turn that action into an ODE step on the tuple f = (Wr(u_1), Wr(u_1, u_2), ...).

from tetra.exactalg import var
from tetra.wronskian import a_on_collection, commutation_report, standard_collection, wr_map

a, b = var("a"), var("b")
u = standard_collection(4)
u2 = a_on_collection(u, 2, a)
u12 = a_on_collection(u2, 1, b)
print("A_2(a)u      :", u2.render())
print("A_1(b)A_2(a)u:", u12.render())
print("Wr           :", wr_map(u12).render())

# ## Commutation
# With f_(i+1) left alone the Wronskian map commutes with the evolution.
# Scaling f_(i+1) by a breaks exactly that one component.
for convention in ("wronskian", "printed"):
    rep = commutation_report(u2, 1, b, convention=convention)
    print(convention, "equal:", rep["equal"], "mismatches:", rep["mismatches"])

"""The pencil-family hypersurfaces with (n-1)^2 nodes on a plane.

Every node imposes a condition on forms of degree 2n-5 except one, so the
rank of H_4 is 2 and the hypersurface is not factorial.  Dropping any
single node restores full rank.
"""

import numpy as np

from nodalfact import example11, h4_rank, independent_conditions, separator_pipeline, verify_instance

rng = np.random.default_rng(7)

for n in (5, 6, 7):
    inst = example11(n, rng)
    d = 2 * n - 5
    check = verify_instance(inst)
    v = h4_rank(inst)
    print(f"n={n}: {inst.s} nodes, all nodes verified={check['verified']}, "
          f"rank at degree {d} = {v.I}, h4_rank = {v.h4_rank}, factorial = {v.factorial}")

    rep = independent_conditions(inst.nodes, d)
    print(f"  separable nodes: {sum(rep.separable)} of {rep.s}; "
          f"dependent witness size {len(rep.dependent_witness)}")

    smaller = inst.without(inst.nodes.labels[0])
    v2 = h4_rank(smaller, shortcuts=False)
    cert = separator_pipeline(smaller, smaller.nodes.labels[-1], rng)
    print(f"  without {inst.nodes.labels[0]}: defect {v2.defect}; "
          f"separator of {cert.target} has degree {cert.degree} with {len(cert.form.coeffs)} terms")

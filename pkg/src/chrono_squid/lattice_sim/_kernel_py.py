"""Pure-NumPy leapfrog kernel, used when the compiled extension is absent.

Performs the same floating-point operations in the same order as
``_kernel.pyx`` so both backends produce bit-identical records.
"""

import numpy as np


def leapfrog(V, I, k_current, k_voltage, end_coeffs, source, source_node, probe_nodes, record, limit):
    """Advance ``V`` and ``I`` in place by ``len(source)`` leapfrog steps.

    ``record[k, j]`` receives ``V[probe_nodes[j]]`` after step ``k``.
    Returns the index of the first step whose voltages exceed ``limit`` in
    magnitude (or are not finite), else -1.
    """
    a_left, b_left, a_right, b_right = end_coeffs
    n_probes = len(probe_nodes)
    for k in range(len(source)):
        I += k_current * (V[:-1] - V[1:])
        v_first = a_left * V[0] - b_left * I[0]
        V[1:-1] += k_voltage[1:-1] * (I[:-1] - I[1:])
        V[0] = v_first
        V[-1] = a_right * V[-1] + b_right * I[-1]
        if source_node >= 0:
            V[source_node] = V[source_node] + k_voltage[source_node] * source[k]
        if n_probes:
            record[k] = V[probe_nodes]
        if not np.max(np.abs(V)) <= limit:
            return k
    return -1

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled leapfrog kernel for the series-L / shunt-C ladder."""

from libc.math cimport fabs


def leapfrog(double[::1] V, double[::1] I, const double[::1] k_current,
             const double[::1] k_voltage, const double[::1] end_coeffs,
             const double[::1] source, Py_ssize_t source_node,
             const Py_ssize_t[::1] probe_nodes, double[:, ::1] record, double limit):
    cdef Py_ssize_t n_cells = I.shape[0]
    cdef Py_ssize_t n_probes = probe_nodes.shape[0]
    cdef Py_ssize_t n_steps = source.shape[0]
    cdef double a_left = end_coeffs[0], b_left = end_coeffs[1]
    cdef double a_right = end_coeffs[2], b_right = end_coeffs[3]
    cdef Py_ssize_t k, n
    cdef double v_first
    cdef bint blown
    cdef Py_ssize_t failed = -1
    with nogil:
        for k in range(n_steps):
            for n in range(n_cells):
                I[n] = I[n] + k_current[n] * (V[n] - V[n + 1])
            v_first = a_left * V[0] - b_left * I[0]
            for n in range(1, n_cells):
                V[n] = V[n] + k_voltage[n] * (I[n - 1] - I[n])
            V[0] = v_first
            V[n_cells] = a_right * V[n_cells] + b_right * I[n_cells - 1]
            if source_node >= 0:
                V[source_node] = V[source_node] + k_voltage[source_node] * source[k]
            for n in range(n_probes):
                record[k, n] = V[probe_nodes[n]]
            blown = False
            for n in range(n_cells + 1):
                if not fabs(V[n]) <= limit:
                    blown = True
                    break
            if blown:
                failed = k
                break
    return failed

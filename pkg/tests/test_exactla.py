from fractions import Fraction

import pytest
import sympy

from qtetra.exactla import (
    Decomposition,
    ExactMatrix,
    LinAlgError,
    algebra_closure_dim,
    eigenspace,
    intertwiner_space,
    invertible_witness,
    kernel,
    matrix_from_flat,
    spectrum_decompose,
    specialize_matrix,
    subspace_intersect,
    subspace_sum,
    Subspace,
)
from qtetra.scalars import SYMBOLIC, specialized

CTX = SYMBOLIC
Q = CTX.q
QINV = CTX.q_power(-1)


def span(*vectors, ambient=None):
    ambient = ambient if ambient is not None else len(vectors[0])
    return Subspace.from_vectors(CTX, ambient, [list(v) for v in vectors])


def lower() -> ExactMatrix:
    # the d=1 equitable y-matrix
    return ExactMatrix(CTX, [[QINV, CTX.zero], [CTX.one, Q]])


def upper() -> ExactMatrix:
    return ExactMatrix(CTX, [[Q, CTX.one], [CTX.zero, QINV]])


def test_matrix_basics():
    a = lower()
    ident = ExactMatrix.identity(CTX, 2)
    assert a * ident == a
    assert (a - a).is_zero()
    assert a.transpose().transpose() == a
    assert (a * a.inverse()) == ident
    assert a.apply([CTX.zero, CTX.one]) == [CTX.zero, Q]


def test_inverse_of_singular_matrix():
    m = ExactMatrix.from_rows(CTX, [[1, 1], [1, 1]])
    with pytest.raises(LinAlgError):
        m.inverse()


def test_eigenspace_examples():
    a = lower()
    assert eigenspace(a, Q) == span((0, 1))
    assert eigenspace(a, QINV) == span((QINV - Q, CTX.one))
    assert eigenspace(ExactMatrix.identity(CTX, 3), CTX.one).dim == 3
    # exactness: M v = theta v for every basis vector
    for theta in (Q, QINV):
        space = eigenspace(a, theta)
        for v in space.vectors():
            assert a.apply(v) == [theta * x for x in v]


def test_eigenspace_requires_square():
    with pytest.raises(LinAlgError):
        eigenspace(ExactMatrix.zeros(CTX, 2, 3), CTX.one)


def test_subspace_sum_examples():
    total, direct = subspace_sum([span((1, 0)), span((0, 1))])
    assert total.is_full() and direct
    total, direct = subspace_sum([span((1, 0)), span((1, 0))])
    assert total == span((1, 0)) and not direct
    a = lower()
    total, direct = subspace_sum([eigenspace(a, Q), eigenspace(a, QINV)])
    assert total.is_full() and direct


def test_subspace_intersect_examples():
    full = Subspace.full(CTX, 2)
    assert subspace_intersect(full, span((1, 1))) == span((1, 1))
    assert subspace_intersect(span((1, 0)), span((0, 1))).is_zero()
    w = span((QINV - Q, CTX.one))
    assert subspace_intersect(span((0, 1), (1, 0)), w) == w


def test_subspace_mismatched_ambient():
    with pytest.raises(LinAlgError):
        subspace_sum([span((1, 0)), span((1, 0, 0))])
    with pytest.raises(LinAlgError):
        subspace_intersect(span((1, 0)), span((1, 0, 0)))


def test_modular_dimension_law():
    vectors = [
        (CTX.one, Q, CTX.zero),
        (CTX.zero, CTX.one, QINV),
        (Q, CTX.zero, CTX.one),
        (CTX.one, CTX.one, CTX.one),
    ]
    samples = [span(v, ambient=3) for v in vectors]
    samples.append(span(vectors[0], vectors[1], ambient=3))
    samples.append(span(vectors[2], vectors[3], ambient=3))
    samples.append(Subspace.zero(CTX, 3))
    samples.append(Subspace.full(CTX, 3))
    for a in samples:
        for b in samples:
            total, _ = subspace_sum([a, b])
            inter = subspace_intersect(a, b)
            assert a.dim + b.dim == total.dim + inter.dim


def test_spectrum_decompose_examples():
    m = ExactMatrix.diagonal(CTX, [Q, QINV])
    dec = spectrum_decompose(m, [Q, QINV])
    assert dec is not None
    assert dec.components[0] == span((1, 0))
    assert dec.components[1] == span((0, 1))

    nil = ExactMatrix.from_rows(CTX, [[0, 1], [0, 0]])
    assert spectrum_decompose(nil, [CTX.zero]) is None

    t = CTX.one
    tri = ExactMatrix(CTX, [[Q, CTX.one / t], [CTX.zero, QINV]])
    dec = spectrum_decompose(tri, [Q, QINV])
    assert dec is not None and dec.dims == (1, 1)


def test_spectrum_decompose_rejects_duplicates():
    m = ExactMatrix.identity(CTX, 2)
    with pytest.raises(LinAlgError):
        spectrum_decompose(m, [Q, Q])


def test_spectrum_decompose_zero_components():
    m = ExactMatrix.diagonal(CTX, [Q, QINV])
    assert spectrum_decompose(m, [Q, QINV, CTX.q_power(5)]) is None
    dec = spectrum_decompose(m, [Q, QINV, CTX.q_power(5)], allow_zero=True)
    assert dec is not None and dec.dims == (1, 1, 0)


def test_projection_reassembly():
    # success of spectrum_decompose means sum(theta_n P_n) rebuilds M
    t = CTX.q + 1
    m = ExactMatrix(CTX, [[Q, CTX.one / t], [CTX.zero, QINV]])
    dec = spectrum_decompose(m, [Q, QINV])
    cols = [v for comp in dec.components for v in comp.vectors()]
    basis = ExactMatrix.from_columns(CTX, cols)
    basis_inv = basis.inverse()
    acc = ExactMatrix.zeros(CTX, 2)
    offset = 0
    for theta, comp in zip((Q, QINV), dec.components):
        sel = ExactMatrix.zeros(CTX, 2)
        for k in range(comp.dim):
            sel.data[offset + k][offset + k] = CTX.one
        offset += comp.dim
        acc = acc + theta * (basis * sel * basis_inv)
    assert acc == m


def test_decomposition_conventions():
    m = ExactMatrix.diagonal(CTX, [Q, QINV])
    dec = spectrum_decompose(m, [Q, QINV])
    assert dec.component(-1).is_zero()
    assert dec.component(2).is_zero()
    assert dec.inversion().components == tuple(reversed(dec.components))
    sums = dec.partial_sums()
    assert sums[0] == dec.components[0]
    assert sums[1].is_full()


def _closure_rank_oracle(mats, max_len):
    """Independent rank via sympy's symbolic Matrix over Q(q)."""
    q = sympy.Symbol('q')
    sym = [sympy.Matrix([[sympy.nsimplify(str(CTX.to_text(e)).replace('^', '**'))
                          for e in row] for row in m.data]) for m in mats]
    words = [sympy.eye(mats[0].rows)]
    frontier = [words[0]]
    for _ in range(max_len):
        frontier = [w * g for w in frontier for g in sym]
        words.extend(frontier)
    flat = sympy.Matrix([[sympy.simplify(w[i, j]) for i in range(w.rows)
                          for j in range(w.cols)] for w in words])
    return flat.rank(simplify=True)


def test_algebra_closure_examples():
    assert algebra_closure_dim([ExactMatrix.identity(CTX, 2)]) == (1, True)
    assert algebra_closure_dim([ExactMatrix.diagonal(CTX, [Q, QINV])]) \
        == (2, True)
    pair = [lower(), upper()]
    assert algebra_closure_dim(pair) == (4, True)
    assert _closure_rank_oracle(pair, 3) == 4


def test_algebra_closure_cap_monotone_and_order_free():
    pair = [lower(), upper()]
    dims = [algebra_closure_dim(pair, cap=c)[0] for c in (1, 2, 3, 4)]
    assert dims == sorted(dims)
    assert algebra_closure_dim(list(reversed(pair)))[0] == 4


def test_algebra_closure_specialized_mode():
    ctx2 = specialized(2)
    pair = [specialize_matrix(lower(), ctx2), specialize_matrix(upper(), ctx2)]
    assert algebra_closure_dim(pair) == (4, True)


def test_algebra_closure_word_cap_env(monkeypatch):
    monkeypatch.setenv('QTETRA_WORD_CAP', '1')
    pair = [lower(), upper()]
    dim, stabilized = algebra_closure_dim(pair)
    # words of length <= 1 are I, A, B; the span cannot yet have stabilized
    assert dim == 3 and not stabilized
    monkeypatch.setenv('QTETRA_WORD_CAP', 'junk')
    with pytest.raises(LinAlgError):
        algebra_closure_dim(pair)


def test_kernel_matches_rank():
    m = ExactMatrix.from_rows(CTX, [[1, 1, 0], [0, 0, 1]])
    null = kernel(m)
    assert null.dim == 1
    assert m.apply(null.vectors()[0]) == [CTX.zero, CTX.zero]
    assert m.rank() + null.dim == m.cols


def test_intertwiner_schur_case():
    gens = {'a': lower(), 'b': upper()}
    space = intertwiner_space(gens, gens)
    assert space.dim == 1
    witness = invertible_witness(space, 2)
    assert witness is not None
    # Schur: the only self-intertwiners are scalar multiples of the identity
    flat = space.basis[0]
    m = matrix_from_flat(CTX, list(flat), 2)
    assert m.data[0][1] == CTX.zero and m.data[1][0] == CTX.zero
    assert m.data[0][0] == m.data[1][1]


def test_intertwiner_recovers_conjugator():
    p = ExactMatrix.from_rows(CTX, [[1, 1], [0, 1]])
    p_inv = p.inverse()
    gens_a = {'a': lower(), 'b': upper()}
    gens_b = {k: p_inv * m * p for k, m in gens_a.items()}
    space = intertwiner_space(gens_a, gens_b)
    assert space.dim == 1
    witness = invertible_witness(space, 2)
    # witness must be a scalar multiple of p
    ratio = witness * p.inverse()
    assert ratio.data[0][1] == CTX.zero and ratio.data[1][0] == CTX.zero
    assert ratio.data[0][0] == ratio.data[1][1]


def test_intertwiner_rejects_mismatch():
    with pytest.raises(LinAlgError):
        intertwiner_space({'a': lower()}, {'b': lower()})
    with pytest.raises(LinAlgError):
        intertwiner_space({'a': lower()},
                          {'a': ExactMatrix.identity(CTX, 3)})


def test_specialize_matrix():
    ctx2 = specialized(2)
    m = specialize_matrix(lower(), ctx2)
    assert m.data[0][0] == Fraction(1, 2)
    assert m.ctx == ctx2

"""
Spectra Module
A_alpha and related matrices of a digraph, singular values and the alpha trace norm.
Singular values come from a cyclic Jacobi eigensolver applied to the Gram matrix M M^T.
The solver works on stacks of matrices so exhaustive sweeps can evaluate thousands of
digraphs per numpy call; a per-matrix convergence mask keeps every result independent
of the other matrices in the stack.
"""
from dataclasses import dataclass

import numpy as np

import config
from src.errors import DomainError, InputError, NumericalError
from spectral_utils.helpers import group_multiplicities, validate_alpha

MATRIX_KINDS = ('alpha', 'adjacency', 'out_degree', 'laplacian', 'signless_laplacian')


@dataclass(frozen=True, eq=False)
class AlphaMatrix:
    """
    Dense square real matrix built from a digraph
    Args:
        order: Matrix order n
        entries: n x n float array (stored read-only)
        label: Which matrix this is (A_alpha, A, Delta+, L, Q)
    """
    order: int
    entries: np.ndarray
    label: str = "A_alpha"

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.shape != (self.order, self.order):
            raise InputError(f"expected a {self.order}x{self.order} matrix, got shape {entries.shape}")
        entries.flags.writeable = False
        object.__setattr__(self, 'entries', entries)

    def __eq__(self, other):
        if not isinstance(other, AlphaMatrix):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values sorted descending, with their sum (the trace norm)"""
    values: tuple
    trace_norm: float

    @property
    def frobenius_squared(self):
        return float(sum(s * s for s in self.values))

    def multiplicities(self, tol=None):
        """[(value, multiplicity)] with values grouped within tol (config.MULTIPLICITY_TOL)"""
        return group_multiplicities(self.values, tol)


def _as_array(M):
    entries = M.entries if isinstance(M, AlphaMatrix) else np.asarray(M, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise InputError(f"expected a square matrix, got shape {entries.shape}")
    return entries


def _arc_index(D):
    arcs = D.arcs_sorted()
    if not arcs:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    tails, heads = np.array(arcs, dtype=int).T
    return tails, heads


def alpha_matrix(D, alpha):
    """
    A_alpha(D) = alpha * Delta+(D) + (1 - alpha) * A(D)
    Args:
        D: Digraph
        alpha: Number in [0, 1)
    Returns:
        AlphaMatrix
    """
    alpha = validate_alpha(alpha)
    entries = np.zeros((D.n, D.n))
    tails, heads = _arc_index(D)
    entries[tails, heads] = 1.0 - alpha
    entries[np.arange(D.n), np.arange(D.n)] = alpha * np.array(D._out, dtype=float)
    _check_alpha_entries(D, alpha, entries)
    return AlphaMatrix(D.n, entries, label=f"A_{alpha:g}")


def _check_alpha_entries(D, alpha, entries):
    """Off-diagonal entries are 0 or 1-alpha, diagonal entries alpha*d+"""
    expected_diag = alpha * np.array(D._out, dtype=float)
    if not np.array_equal(np.diag(entries), expected_diag):
        raise DomainError("A_alpha diagonal does not match alpha * out-degree")
    off = entries[~np.eye(D.n, dtype=bool)]
    if not np.all((off == 0.0) | (off == 1.0 - alpha)):
        raise DomainError("A_alpha off-diagonal entries must be 0 or 1 - alpha")


def adjacency_matrix(D):
    """A(D)"""
    entries = np.zeros((D.n, D.n))
    tails, heads = _arc_index(D)
    entries[tails, heads] = 1.0
    return AlphaMatrix(D.n, entries, label="A")


def out_degree_matrix(D):
    """Delta+(D) = diag(d+_1, ..., d+_n)"""
    return AlphaMatrix(D.n, np.diag(np.array(D._out, dtype=float)), label="Delta+")


def laplacian(D):
    """L(D) = Delta+(D) - A(D)"""
    return AlphaMatrix(D.n, out_degree_matrix(D).entries - adjacency_matrix(D).entries, label="L")


def signless_laplacian(D):
    """Q(D) = Delta+(D) + A(D)"""
    return AlphaMatrix(D.n, out_degree_matrix(D).entries + adjacency_matrix(D).entries, label="Q")


def matrix_for(D, kind, alpha=0.0):
    """One of MATRIX_KINDS; alpha is only used for kind='alpha'"""
    if kind == 'alpha':
        return alpha_matrix(D, alpha)
    if kind == 'adjacency':
        return adjacency_matrix(D)
    if kind == 'out_degree':
        return out_degree_matrix(D)
    if kind == 'laplacian':
        return laplacian(D)
    if kind == 'signless_laplacian':
        return signless_laplacian(D)
    raise InputError(f"unknown matrix kind {kind!r}; expected one of {', '.join(MATRIX_KINDS)}")


def b_alpha_matrix(n, alpha):
    """
    Arc increment A_alpha(D) - A_alpha(D - uv) with v labelled 0 and u labelled 1
    Rank one; its singular values are sqrt(2 alpha^2 - 2 alpha + 1) and 0 (n-1 times).
    """
    alpha = validate_alpha(alpha)
    if n < 2:
        raise InputError("the arc increment matrix needs at least two vertices")
    entries = np.zeros((n, n))
    entries[1, 0] = 1.0 - alpha
    entries[1, 1] = alpha
    return AlphaMatrix(n, entries, label="B_alpha")


def _rotate(a, v, p, q, active):
    """Apply one Jacobi rotation in the (p, q) plane to every active matrix of the stack"""
    apq = a[:, p, q]
    rotate = active & (apq != 0.0)
    if not rotate.any():
        return
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        theta = (a[:, q, q] - a[:, p, p]) / (2.0 * apq)
        t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(rotate, t, 0.0)
    c = (1.0 / np.sqrt(t * t + 1.0))[:, None]
    s = t[:, None] * c

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = c * col_p - s * col_q
    a[:, :, q] = s * col_p + c * col_q
    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = c * row_p - s * row_q
    a[:, q, :] = s * row_p + c * row_q
    a[rotate, p, q] = 0.0
    a[rotate, q, p] = 0.0

    if v is not None:
        vec_p = v[:, :, p].copy()
        vec_q = v[:, :, q].copy()
        v[:, :, p] = c * vec_p - s * vec_q
        v[:, :, q] = s * vec_p + c * vec_q


def _jacobi(stack, tol, max_sweeps, with_vectors=False):
    """
    Cyclic Jacobi on a stack of symmetric matrices
    Args:
        stack: (k, n, n) array of symmetric matrices
        tol: Stop once the off-diagonal Frobenius norm < tol * max(1, ||M||_F)
        max_sweeps: Sweeps before raising NumericalError
        with_vectors: Also accumulate the rotations
    Returns:
        tuple: (eigenvalues (k, n) descending, eigenvectors (k, n, n) or None)
    """
    a = np.array(stack, dtype=float)
    k, n, _ = a.shape
    vectors = np.tile(np.eye(n), (k, 1, 1)) if with_vectors else None
    if n == 0 or k == 0:
        return np.zeros((k, n)), vectors

    off_mask = ~np.eye(n, dtype=bool)
    threshold = tol * np.maximum(1.0, np.sqrt(np.einsum('kij,kij->k', a, a)))
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(np.sum(a[:, off_mask] ** 2, axis=1))
        active = off >= threshold
        if not active.any():
            break
        if sweep == max_sweeps:
            raise NumericalError(
                f"Jacobi eigensolver did not converge after {max_sweeps} sweeps "
                f"({int(active.sum())} of {k} matrices still active)")
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, vectors, p, q, active)

    values = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(-values, axis=1, kind='stable')
    values = np.take_along_axis(values, order, axis=1)
    if vectors is not None:
        vectors = np.take_along_axis(vectors, order[:, None, :], axis=2)
    return values, vectors


def _check_symmetric_input(M, tol):
    entries = _as_array(M)
    if tol is None:
        tol = config.EIGEN_TOL
    if not tol > 0:
        raise DomainError(f"eigensolver tolerance must be positive, got {tol}")
    if entries.size and np.max(np.abs(entries - entries.T)) > config.SYMMETRY_TOL:
        raise DomainError("eigensolver input is not symmetric")
    return entries, tol


def symmetric_eigenvalues(M, tol=None):
    """
    Eigenvalues of a symmetric matrix by cyclic Jacobi rotations
    Args:
        M: Symmetric n x n matrix (within config.SYMMETRY_TOL entry-wise)
        tol: Convergence tolerance (config.EIGEN_TOL)
    Returns:
        list: n eigenvalues, descending
    """
    entries, tol = _check_symmetric_input(M, tol)
    values, _ = _jacobi(entries[None, :, :], tol, config.MAX_SWEEPS)
    return [float(x) for x in values[0]]


def symmetric_eigensystem(M, tol=None):
    """
    Eigenvalues (descending) and orthonormal eigenvectors (columns) of a symmetric matrix
    """
    entries, tol = _check_symmetric_input(M, tol)
    values, vectors = _jacobi(entries[None, :, :], tol, config.MAX_SWEEPS, with_vectors=True)
    return values[0], vectors[0]


def singular_value_stack(stack, tol=None):
    """
    Singular values of every matrix in a (k, n, n) stack
    Jacobi diagonalizes the Gram matrix M M^T; each singular value is then taken as ||M^T v||
    for the matching eigenvector v, which keeps zero singular values at rounding level instead
    of the square root of the Gram eigenvalue error.
    Gram eigenvalues in [-PSD_CLAMP * scale, 0) are accepted (scale = ||M||_F^2, or 1);
    anything more negative means the eigensolver went wrong and raises NumericalError.
    Returns:
        np.ndarray: (k, n) singular values, each row descending
    """
    tol = config.EIGEN_TOL if tol is None else tol
    if not tol > 0:
        raise DomainError(f"eigensolver tolerance must be positive, got {tol}")
    stack = np.asarray(stack, dtype=float)
    gram = np.matmul(stack, np.swapaxes(stack, 1, 2))
    gram = 0.5 * (gram + np.swapaxes(gram, 1, 2))
    values, vectors = _jacobi(gram, tol, config.MAX_SWEEPS, with_vectors=True)

    scale = np.einsum('kij,kij->k', stack, stack)
    scale = np.where(scale > 0.0, scale, 1.0)
    floor = -config.PSD_CLAMP * scale[:, None]
    if np.any(values < floor):
        worst = float(np.min(values / scale[:, None]))
        raise NumericalError(f"Gram matrix has a negative eigenvalue ({worst:.3e} relative to scale)")
    sigma = np.linalg.norm(np.matmul(np.swapaxes(stack, 1, 2), vectors), axis=1)
    return -np.sort(-sigma, axis=1)


def singular_values(M, tol=None):
    """
    Singular values of M: square roots of the eigenvalues of M M^T
    Args:
        M: AlphaMatrix or square array
        tol: Eigensolver convergence tolerance
    Returns:
        SingularSpectrum
    """
    entries = _as_array(M)
    values = singular_value_stack(entries[None, :, :], tol)[0]
    values = tuple(float(x) for x in values)
    return SingularSpectrum(values=values, trace_norm=float(sum(values)))


def trace_norm(D, alpha, tol=None):
    """alpha trace norm ||A_alpha(D)||_*"""
    return singular_values(alpha_matrix(D, alpha), tol).trace_norm


def matrix_trace_norm(D, kind, alpha=0.0, tol=None):
    """Trace norm of one of MATRIX_KINDS"""
    return singular_values(matrix_for(D, kind, alpha), tol).trace_norm


def adjacency_stack(n, tails, heads):
    """
    0/1 adjacency matrices from arc index arrays
    Args:
        n: Order
        tails, heads: (k, m) integer arrays, row i holds the arcs of digraph i
    Returns:
        np.ndarray: (k, n, n)
    """
    tails = np.asarray(tails, dtype=int)
    heads = np.asarray(heads, dtype=int)
    k = tails.shape[0]
    adjacency = np.zeros((k, n, n))
    if tails.size:
        rows = np.repeat(np.arange(k), tails.shape[1])
        adjacency[rows, tails.ravel(), heads.ravel()] = 1.0
    return adjacency


def alpha_matrix_stack(adjacency, alpha):
    """A_alpha for every adjacency matrix in a (k, n, n) stack"""
    alpha = validate_alpha(alpha)
    n = adjacency.shape[1]
    stack = (1.0 - alpha) * adjacency
    diag = np.arange(n)
    stack[:, diag, diag] = alpha * adjacency.sum(axis=2)
    return stack


def trace_norm_stack(adjacency, alpha, tol=None):
    """alpha trace norms of a (k, n, n) adjacency stack"""
    return singular_value_stack(alpha_matrix_stack(adjacency, alpha), tol).sum(axis=1)


def trace_norms(digraphs, alpha, tol=None):
    """
    alpha trace norms of many digraphs at once
    Digraphs are grouped by order and evaluated as stacks.
    Returns:
        np.ndarray: one value per digraph, in input order
    """
    digraphs = list(digraphs)
    result = np.zeros(len(digraphs))
    by_order = {}
    for index, D in enumerate(digraphs):
        by_order.setdefault(D.n, []).append(index)
    for n, indices in by_order.items():
        adjacency = np.zeros((len(indices), n, n))
        for row, index in enumerate(indices):
            tails, heads = _arc_index(digraphs[index])
            adjacency[row, tails, heads] = 1.0
        result[indices] = trace_norm_stack(adjacency, alpha, tol)
    return result


def expected_frobenius_squared(D, alpha):
    """||A_alpha(D)||_F^2 = alpha^2 * sum(d+^2) + (1 - alpha)^2 * |arcs|"""
    alpha = validate_alpha(alpha)
    return alpha ** 2 * sum(d * d for d in D._out) + (1.0 - alpha) ** 2 * D.m


def subadditivity_check(M1, M2, tol=None):
    """
    ||M1 + M2||_* <= ||M1||_* + ||M2||_* (+ tol)
    Returns:
        bool
    """
    a = _as_array(M1)
    b = _as_array(M2)
    if a.shape != b.shape:
        raise InputError(f"matrix orders differ: {a.shape[0]} vs {b.shape[0]}")
    tol = config.EQUALITY_TOL if tol is None else tol
    norms = singular_value_stack(np.stack([a + b, a, b])).sum(axis=1)
    return bool(norms[0] <= norms[1] + norms[2] + tol)


def is_symmetric_digraph(D):
    return all((v, u) in D.arcs for u, v in D.arcs)


def graph_energy(D, tol=None):
    """
    Energy sum |lambda_i| of a symmetric digraph's adjacency matrix
    For a symmetric digraph this coincides with the trace norm at alpha = 0.
    """
    if not is_symmetric_digraph(D):
        raise InputError("graph energy needs a symmetric digraph (every arc paired with its reverse)")
    return float(sum(abs(x) for x in symmetric_eigenvalues(adjacency_matrix(D), tol)))

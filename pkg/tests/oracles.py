"""Independent reference constructions used only by the tests.

Nothing here imports the package: the operator is rebuilt from dense ladder
matrices (tensor, Pauli and position forms) and diagonalised with LAPACK.
"""

import numpy as np

J = np.array([[0.0, -1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
SIGMA_Z = np.diag([1.0, -1.0])


def ladder(N):
    a = np.diag(np.sqrt(np.arange(1.0, N)), 1)
    return a, a.T.copy()


def tensor_form(alpha, beta, N):
    """A (N + 1/2) + J (a^2 - a*^2)/2 on C^2 x span(phi_0..phi_{N-1}); index spin*N + n."""
    a, ad = ladder(N)
    one = np.eye(N)
    A = np.diag([alpha, beta])
    return np.kron(A, ad @ a + 0.5 * one) + np.kron(J, (a @ a - ad @ ad) / 2)


def pauli_form(alpha, beta, N):
    """((a+b)/2) (N+1/2) + ((a-b)/2) sigma_z (N+1/2) - i sigma_y (a^2 - a*^2)/2."""
    a, ad = ladder(N)
    h = ad @ a + 0.5 * np.eye(N)
    skew = (a @ a - ad @ ad) / 2
    out = (
        0.5 * (alpha + beta) * np.kron(np.eye(2), h)
        + 0.5 * (alpha - beta) * np.kron(SIGMA_Z, h)
        + np.kron(-1j * SIGMA_Y, skew)
    )
    return out.real


def sector_from_dense(dense, N, parity):
    """Rows/cols of the given parity, reordered to flat k = 2*level + (spin-1)."""
    idx = []
    for n in range(parity, N, 2):
        idx.extend([n, N + n])
    idx = np.array(idx)
    return dense[np.ix_(idx, idx)]


def dense_eigenvalues(alpha, beta, k, N=600):
    return np.linalg.eigvalsh(tensor_form(alpha, beta, N))[:k]


def position_form_eigenvalues(alpha, beta, k, half_width=10.0, h=0.02):
    """Finite differences for A(-d^2/dx^2 + x^2)/2 + J(x d/dx + 1/2).

    Second order in h; only good to about 1e-3 for low levels.
    """
    x = np.arange(-half_width, half_width + h / 2, h)
    n = x.size
    lap = (np.diag(np.full(n - 1, 1.0), -1) - 2 * np.eye(n) + np.diag(np.full(n - 1, 1.0), 1)) / h**2
    D = (np.diag(np.full(n - 1, 1.0), 1) - np.diag(np.full(n - 1, 1.0), -1)) / (2 * h)
    X = np.diag(x)
    h0 = -0.5 * lap + 0.5 * X @ X
    skew = 0.5 * (X @ D + D @ X)  # x d/dx + 1/2, antisymmetrised
    Q = np.kron(np.diag([alpha, beta]), h0) + np.kron(J, skew)
    return np.linalg.eigvalsh(Q)[:k]


def random_band(rng, n, b):
    m = rng.uniform(-1.0, 1.0, (n, n))
    m = np.tril(np.triu(m + m.T, -b), b)
    return m

"""PCA baseline via eigendecomposition of the sample covariance."""

import numpy as np

from ..errors import DegenerateInput


def pca_fit_transform(X, n_components):
    """Project mean-centered X onto its top principal components.

    Returns (projection, components, explained_variance) where components is
    (d, n_components) with orthonormal columns sorted by descending
    eigenvalue. Sign convention: each component's largest-magnitude entry is
    positive.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if n < 2:
        raise DegenerateInput("need at least 2 rows")
    if n_components > min(n, d):
        raise DegenerateInput(f"n_components {n_components} exceeds min(n, d) = {min(n, d)}")
    Xc = X - X.mean(axis=0)
    if np.allclose(Xc, 0.0):
        raise DegenerateInput("all rows identical")

    cov = (Xc.T @ Xc) / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:n_components]
    components = eigvecs[:, order]
    explained_variance = np.maximum(eigvals[order], 0.0)

    # deterministic sign: largest-|entry| coordinate made positive
    for c in range(components.shape[1]):
        col = components[:, c]
        if col[np.argmax(np.abs(col))] < 0:
            components[:, c] = -col

    projection = Xc @ components
    return projection, components, explained_variance

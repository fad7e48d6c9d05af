from .pca import pca_fit_transform
from .umap import (
    FuzzyGraph,
    KnnGraph,
    Projection2D,
    UmapParams,
    fit_ab,
    fuzzy_union,
    knn_graph,
    projection_csv,
    save_projection,
    smooth_knn_calibrate,
    sweep,
    umap_embed,
)

__all__ = [
    "FuzzyGraph",
    "KnnGraph",
    "Projection2D",
    "UmapParams",
    "fit_ab",
    "fuzzy_union",
    "knn_graph",
    "pca_fit_transform",
    "projection_csv",
    "save_projection",
    "smooth_knn_calibrate",
    "sweep",
    "umap_embed",
]

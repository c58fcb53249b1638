"""All functions for hierarchical clustering of driving-style features."""

from .dendrogram import agglomerate
from .dendrogram import cut
from .dendrogram import Dendrogram
from .dendrogram import Merge


from .report import cluster_report
from .report import cluster_stats
from .report import ClusteringResult
from .report import ClusterSettings
from .report import quartiles
from .report import read_clusters
from .report import report_document
from .report import silhouette_table
from .report import write_clusters


from .validation import mean_silhouette_per_cluster
from .validation import negative_silhouette_counts
from .validation import select_k
from .validation import select_k_from_curve
from .validation import silhouette
from .validation import wcss
from .validation import wcss_curve


from .ward import ClusterState
from .ward import Linkage
from .ward import ward_criterion
from .ward import ward_paper
from .ward import ward_standard


__all__ = [
    "ClusterSettings",
    "ClusterState",
    "ClusteringResult",
    "Dendrogram",
    "Linkage",
    "Merge",
    "agglomerate",
    "cluster_report",
    "cluster_stats",
    "cut",
    "mean_silhouette_per_cluster",
    "negative_silhouette_counts",
    "quartiles",
    "read_clusters",
    "report_document",
    "select_k",
    "select_k_from_curve",
    "silhouette",
    "silhouette_table",
    "ward_criterion",
    "ward_paper",
    "ward_standard",
    "wcss",
    "wcss_curve",
    "write_clusters",
]

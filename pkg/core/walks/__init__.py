"""
Path metric and lazy random walk analysis
"""
from .distances import (
    DistanceStats, bfs_distances, distance_stats, eccentricity, weighted_sq_distance,
)
from .mixing import (
    MixingReport, default_t_max, evolve_distribution, export_trajectory_csv,
    lazy_transition_matrix, mixing_time, relaxation_time, start_vertices,
    stationary_distribution, trajectory_frame, tv_distance,
)

__all__ = [
    'DistanceStats', 'bfs_distances', 'distance_stats', 'eccentricity', 'weighted_sq_distance',
    'MixingReport', 'default_t_max', 'evolve_distribution', 'export_trajectory_csv',
    'lazy_transition_matrix', 'mixing_time', 'relaxation_time', 'start_vertices',
    'stationary_distribution', 'trajectory_frame', 'tv_distance',
]

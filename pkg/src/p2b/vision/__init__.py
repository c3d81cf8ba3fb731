"""Image analysis: silhouettes, projection, rectification, grids, color."""

from .camera import CameraParams, camera_frame, focal_px, project_points
from .color import (
    Cluster,
    LabColor,
    facade_color,
    kmeans,
    lab_array_to_rgb,
    lab_to_rgb,
    rgb_array_to_lab,
    rgb_to_lab,
)
from .grid import GridEstimate, WindowBox, detect_window, estimate_grid
from .image import ImageBuffer, decode_image, encode_png, encode_ppm
from .raster import (
    RasterMask,
    boundary_of,
    chamfer_against,
    chamfer_cached,
    distance_transform,
    project_mass,
    project_mass_coverage,
    silhouette_distance,
)
from .rectify import apply_homography, rectify_facade, solve_homography
from .render import render_model
from .silhouette import (
    SilhouettePolyline,
    parse_silhouette,
    rasterize_silhouette,
    trace_boundary,
    write_silhouette,
)

__all__ = [
    "CameraParams", "camera_frame", "focal_px", "project_points",
    "Cluster", "LabColor", "facade_color", "kmeans",
    "lab_array_to_rgb", "lab_to_rgb", "rgb_array_to_lab", "rgb_to_lab",
    "GridEstimate", "WindowBox", "detect_window", "estimate_grid",
    "ImageBuffer", "decode_image", "encode_png", "encode_ppm",
    "RasterMask", "boundary_of", "chamfer_against", "chamfer_cached", "distance_transform",
    "project_mass", "project_mass_coverage", "silhouette_distance",
    "apply_homography", "rectify_facade", "solve_homography",
    "render_model",
    "SilhouettePolyline", "parse_silhouette", "rasterize_silhouette",
    "trace_boundary", "write_silhouette",
]

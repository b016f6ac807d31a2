from .cone import (ConvexCone, cone_contains, cone_contains_many, cone_from_dict,
                   cone_to_dict)
from .hull import ccw_hull_2d, convex_hull, polygon_distance, polygon_hausdorff
from .grid import (GridRegion, chord_cells, is_locally_convex, polygonal_connect,
                   rasterize_convex_polygon, rasterize_points, region_components,
                   segment_in_region)
from .klee import (CONVEX, DISCONNECTED, NOT_LOCALLY_CONVEX, ConvexityCertificate,
                   certificate_from_dict, klee_certify)

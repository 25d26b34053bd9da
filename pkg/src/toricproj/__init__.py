"""Exact basis-canonical projectivization of smooth complete toric fans."""
from .adapt import BlowupLog, BlowupStep, adapt, adapt_all, find_bad, is_adapted, select_bad
from .certificates import (FarkasCertificate, SupportFunction, all_bends, arrangement_h, bend,
                           certify_lp, certify_sandwich, classify_walls, relative_g,
                           verify_ample, verify_farkas)
from .estimator import Projectivizer, check_fan
from .fan import (Fan, Wall, f_vector, refines, star_subdivide, two_cones, validate_fan,
                  wall_relation, walls)
from .fan_io import builtin, oda75_h_table, parse_fan, serialize_fan
from .normals import ordered_normals, wall_normal

__version__ = "0.1.0"

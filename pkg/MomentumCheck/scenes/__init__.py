from .builtin import BUILTIN_SCENES, builtin_scene
from .spaces import circle_height_space, generated_space, square_minus_diamond
from .discretize import DiscretizationParams, discretize_scene, scene_lgp_verdict
from .experiments import (ExperimentReport, WeylOrbitHull, horn_interval_experiment,
                          schur_horn_experiment, toric_polytope_experiment)

from .scene import Scene
from .openness import (DiagnosisParams, OpennessVerdict, ccf_check, diagnose,
                       disconnection_test, prato_properness_check,
                       rasterize_images, sweep)

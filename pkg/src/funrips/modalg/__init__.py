from .grmat import (GradedMatrix, Presentation, pres_dumps, pres_loads,
                    save_presentation, load_presentation)
from .ops import (ker_min_gen, image_presentation, homology_presentation,
                  smoothed_presentation, minimize, betti_numbers,
                  hilbert_function)
from .oracle import pointwise_image_rank
from .backend import active_backend

__all__ = [
    "GradedMatrix", "Presentation", "pres_dumps", "pres_loads",
    "save_presentation", "load_presentation",
    "ker_min_gen", "image_presentation", "homology_presentation",
    "smoothed_presentation", "minimize", "betti_numbers", "hilbert_function",
    "pointwise_image_rank", "active_backend",
]

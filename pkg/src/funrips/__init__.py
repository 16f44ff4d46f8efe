"""funrips: estimating multiparameter persistent homology of a sampled
function via function-Rips multifiltrations.

The pipeline: sample a metric space with function values (`geometry`), build
the graded complex (`filtration`), present the scale-smoothed image module
(`modalg`), and read off barcodes, Betti numbers, and distances
(`invariants`), with statistical scale selection in `scale` and experiment
drivers plus a CLI in `harness`.
"""

from .geometry import (NoiseSpec, SampledSpace, brownian_path,
                       farthest_point_sample, graph_geodesic, hausdorff,
                       perturb, sample_circle)
from .filtration import (BifilteredComplex, boundary_matrices,
                         build_function_cech_euclidean, build_function_rips,
                         dump_complex, load_complex, rescale_horizontal)
from .modalg import (GradedMatrix, Presentation, active_backend, betti_numbers,
                     hilbert_function, homology_presentation, image_presentation,
                     ker_min_gen, minimize, pointwise_image_rank,
                     pres_dumps, pres_loads, smoothed_presentation)
from .invariants import (Line, bottleneck, matching_distance_mc,
                         pointwise_dimension_curve, slice_line, slice_vertical,
                         truncate_barcode, vertical_bottleneck_grades)
from .scale import (ABStandard, delta_hat, delta_k, delta_prime,
                    loglog_regression, s_k)

__version__ = "0.1.0"

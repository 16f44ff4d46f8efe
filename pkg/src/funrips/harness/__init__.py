from .experiments import (ExperimentConfig, run_brownian, run_circle,
                          run_two_circles, sublevel_barcode_1d, two_circle_space)
from .cli import main

__all__ = ["ExperimentConfig", "run_brownian", "run_circle", "run_two_circles",
           "sublevel_barcode_1d", "two_circle_space", "main"]

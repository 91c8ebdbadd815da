"""critline: desk-scale rigorous L-function evaluation in the critical strip.

Subpackages by task:

    specfun    unnormalized Erf/Erfc, incomplete gamma, Gaussian tails
    dirichlet  Dirichlet characters, L-values, functional equation checks
    mellin     coefficient streams, summatory functions, Mellin transforms
    gaussian   Gaussian window probes and detection-bound verification
    quadfield  imaginary quadratic fields, genus characters, Frobenius searches
    cli        report-producing verification suites
"""

__version__ = "0.1.0"

# Numerical engine: dispersion series, self-similar operators, continuum limit, fractality, wave dynamics

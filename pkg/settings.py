# Demo defaults shared by demo.py and smoke_test.py

WINDOW = "bspline:2"

# Random-periodic point set
M = 8
SEED = 1

# Random test signal on [-SIGNAL_L, SIGNAL_L) with NT samples per unit length
SIGNAL_L = 4
NT = 32

# Theorem parameters for the complexity demo (overridden constants)
ALPHA = 1 / 12
BETA = 1 / 4
EPS = 0.1
OVERRIDES = {"K": 1.0, "q": 1 / 3, "C": 10.0}

"""Reference numbers shared by the unit and acceptance tests."""

# (n, K) -> (minimax threshold error %, max P_FA error %, c1, c2, c3)
REFERENCE_FIT = {
    (4, 12): (0.34064, 2.90489, 1.514702363388335, 8.702739376483137, 1.915367688856702),
    (4, 16): (0.14638, 1.69826, 1.245454831927344, 12.252243482999409, 1.337256680537876),
    (4, 20): (0.07513, 1.07276, 1.137593213858974, 15.875828450315428, 1.168722472188503),
    (5, 15): (0.27319, 2.67988, 1.479403713377666, 10.424987325960629, 1.726947663133344),
    (5, 20): (0.10083, 1.29530, 1.224205523025362, 14.809425915487832, 1.280983519608858),
    (5, 25): (0.04777, 0.78369, 1.122972523283579, 19.307882309923791, 1.141253119783500),
}

# floored load gains, rows n = 4, 5, 6 and columns N = 64, 128, 256
REFERENCE_GAINS = {(4, 64): 31, (4, 128): 71, (4, 256): 147,
                   (5, 64): 22, (5, 128): 59, (5, 256): 132,
                   (6, 64): 16, (6, 128): 47, (6, 256): 116}

OPTIMUM_PD = 0.9897

# RODI degradation anchors: (F, RODI bins, P_D)
RODI_ANCHORS = [(14 / 64, (47, 48, 49, 50), 0.7536),
                (13 / 64, (43, 44, 45, 46), 0.8796),
                (13.25 / 64, (43, 44, 45, 46), 0.7916),
                (13.5056 / 64, (47, 48, 49, 50), 0.1268)]

"""Published parameter tables used as test oracles.

Rows are (d, k, lambda, s1, s2, omega, rho, a, existence) with existence one
of "Yes", "No", "?".
"""

QS_TABLE = [
    (6, 3, 2, 2, 1, 16, 3, 6, "Yes"),
    (7, 2, 1, 1, 0, 28, 3, 10, "Yes"),
    (20, 10, 18, 6, 4, 96, 5, 40, "No"),
    (21, 8, 14, 4, 2, 126, 5, 52, "No"),
    (23, 7, 21, 3, 1, 276, 5, 112, "Yes"),
    (42, 21, 60, 12, 9, 288, 7, 126, "?"),
    (43, 18, 51, 9, 6, 344, 7, 150, "No"),
    (72, 36, 140, 20, 16, 640, 9, 288, "?"),
    (73, 32, 124, 16, 12, 730, 9, 328, "?"),
    (110, 55, 270, 30, 25, 1200, 11, 550, "?"),
    (111, 50, 245, 25, 20, 1332, 11, 610, "?"),
    (115, 45, 330, 20, 15, 2300, 11, 1050, "?"),
    (118, 43, 602, 18, 13, 4720, 11, 2150, "?"),
    (156, 78, 462, 42, 36, 2016, 13, 936, "No"),
    (157, 72, 426, 36, 30, 2198, 13, 1020, "No"),
    (163, 64, 672, 28, 22, 4564, 13, 2112, "No"),
    (210, 105, 728, 56, 49, 3136, 15, 1470, "?"),
    (211, 98, 679, 49, 42, 3376, 15, 1582, "No"),
    (272, 136, 1080, 72, 64, 4608, 17, 2176, "?"),
    (273, 128, 1016, 64, 56, 4914, 17, 2320, "?"),
    (342, 171, 1530, 90, 81, 6480, 19, 3078, "?"),
    (343, 162, 1449, 81, 72, 6860, 19, 3258, "?"),
    (357, 141, 4935, 60, 51, 32130, 19, 15228, "?"),
    (420, 210, 2090, 110, 100, 8800, 21, 4200, "No"),
    (421, 200, 1990, 100, 90, 9262, 21, 4420, "No"),
]

# (family, i) -> row
FAMILY_TABLE = {
    (1, 1): (23, 7, 21, 3, 1, 276, 5, 112, "Yes"),
    (1, 2): (118, 43, 602, 18, 13, 4720, 11, 2150, "?"),
    (1, 3): (357, 141, 4935, 60, 51, 32130, 19, 15228, "?"),
    (1, 4): (836, 346, 23874, 150, 136, 140448, 29, 67816, "No"),
    (1, 5): (1675, 715, 85085, 315, 295, 469000, 41, 228800, "?"),
    (1, 6): (3018, 1317, 247596, 588, 561, 1303776, 55, 640062, "?"),
    (1, 7): (5033, 2233, 623007, 1008, 973, 3170790, 71, 1563100, "?"),
    (1, 8): (7912, 3556, 1404620, 1620, 1576, 6962560, 89, 3442208, "?"),
    (1, 9): (11871, 5391, 2905749, 2475, 2421, 14102748, 109, 6986736, "?"),
    (1, 10): (17150, 7855, 5608470, 3630, 3565, 26754000, 131, 13274950, "?"),
    (2, 1): (6, 3, 2, 2, 1, 16, 3, 6, "Yes"),
    (2, 2): (20, 10, 18, 6, 4, 96, 5, 40, "No"),
    (2, 3): (42, 21, 60, 12, 9, 288, 7, 126, "?"),
    (2, 4): (72, 36, 140, 20, 16, 640, 9, 288, "?"),
    (2, 5): (110, 55, 270, 30, 25, 1200, 11, 550, "?"),
    (2, 6): (156, 78, 462, 42, 36, 2016, 13, 936, "No"),
    (2, 7): (210, 105, 728, 56, 49, 3136, 15, 1470, "?"),
    (2, 8): (272, 136, 1080, 72, 64, 4608, 17, 2176, "?"),
    (2, 9): (342, 171, 1530, 90, 81, 6480, 19, 3078, "?"),
    (2, 10): (420, 210, 2090, 110, 100, 8800, 21, 4200, "No"),
    (3, 1): (7, 2, 1, 1, 0, 28, 3, 10, "Yes"),
    (3, 2): (115, 45, 330, 20, 15, 2300, 11, 1050, "?"),
    (3, 3): (517, 220, 4015, 99, 88, 22748, 23, 10890, "?"),
    (3, 4): (1501, 665, 22078, 304, 285, 114076, 39, 55594, "?"),
    (3, 5): (3451, 1566, 81693, 725, 696, 400316, 59, 196794, "?"),
    (3, 6): (6847, 3157, 237226, 1476, 1435, 1122908, 83, 554730, "?"),
    (3, 7): (12265, 5720, 584155, 2695, 2640, 2698300, 111, 1337050, "?"),
    (3, 8): (20377, 9585, 1275870, 4544, 4473, 5787068, 143, 2873370, "?"),
    (3, 9): (31951, 15130, 2543353, 7209, 7120, 11374556, 179, 5655594, "?"),
    (3, 10): (47851, 22781, 4717738, 10900, 10791, 20863036, 219, 10383994, "?"),
}

# integer points on y^2 = x^3 - x^2 - 5x + 6
ELLIPTIC_POINTS = sorted(
    [(-2, 2), (-2, -2), (-1, 3), (-1, -3), (1, 1), (1, -1), (2, 0),
     (3, 3), (3, -3), (5, 9), (5, -9), (29, 153), (29, -153)]
)

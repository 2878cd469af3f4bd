"""Reference tables for the three shipped scenarios.

Components are written in the DSL expression syntax and keyed by 1-based
index tuples in the tensor's slot order (N^i_j -> (i, j), RC^h_ijk ->
(h, i, j, k)). Families are lists of horizontal fields in h1..hn.
"""

_P1 = "(x2^2*y1^4 + y2^4 + y3^4 + y4^4)"
_Q1 = "(4*y2^4 + x2^2*y1^4)"
_S3 = "(y2^3 + y3^3 + y4^3)"
_E2 = "exp(-x1*x3)"

EX1 = {
    "N": {
        (1, 1): "(1/3)*y2/x2",
        (1, 2): "(1/3)*y1/x2",
        (2, 1): "-(1/3)*x2*y1^3/y2^2",
        (2, 2): "(1/6)*x2*y1^4/y2^3",
    },
    "RC": {
        (1, 2, 1, 2): f"-(1/18)*(3*x2^4*y1^8 + 2*x2^2*y1^4*y4^4 + 2*y3^4*x2^2*y1^4"
                      f" + 13*x2^2*y1^4*y2^4 + 4*y2^8 + 8*y3^4*y2^4 + 8*y2^4*y4^4)"
                      f"/(x2^2*{_P1}*y2^4)",
        (2, 1, 1, 2): f"(1/18)*(x2^4*y1^8 + 2*y3^4*x2^2*y1^4 + 2*x2^2*y1^4*y4^4"
                      f" + 7*x2^2*y1^4*y2^4 + 8*y2^4*y4^4 + 8*y3^4*y2^4 + 12*y2^8)*y1^2"
                      f"/(y2^6*{_P1})",
        (1, 1, 1, 2): f"(1/9)*y1^3*{_Q1}/({_P1}*y2^3)",
        (1, 3, 1, 2): f"(1/18)*{_Q1}*y3^3/(x2^2*y2^3*{_P1})",
        (1, 4, 1, 2): f"(1/18)*{_Q1}*y4^3/(x2^2*y2^3*{_P1})",
        (2, 2, 1, 2): f"-(1/9)*y1^3*{_Q1}/({_P1}*y2^3)",
        (2, 3, 1, 2): f"-(1/18)*y1^3*y3^3*{_Q1}/(y2^6*{_P1})",
        (2, 4, 1, 2): f"-(1/18)*y1^3*y4^3*{_Q1}/(y2^6*{_P1})",
        (3, 1, 1, 2): f"(1/18)*{_Q1}*y1^2*y3/({_P1}*y2^3)",
        (3, 2, 1, 2): f"-(1/18)*{_Q1}*y3*y1^3/({_P1}*y2^4)",
        (4, 1, 1, 2): f"(1/18)*{_Q1}*y4*y1^2/({_P1}*y2^3)",
        (4, 2, 1, 2): f"-(1/18)*{_Q1}*y4*y1^3/({_P1}*y2^4)",
    },
}
EX1_NULLITY = ["h3", "h4"]
# kernel generators as printed, and with the x2 coefficient the solver returns
EX1_KERNEL_PRINTED = [
    "(y1/y2)*h1 + h2 + ((x2*y1^4 + y2^4 + 2*y3^4 + 2*y4^4)/(y2*y4^3))*h4",
    "h3 - (y3^3/y4^3)*h4",
]
EX1_KERNEL = [
    "(y1/y2)*h1 + h2 + ((x2^2*y1^4 + y2^4 + 2*y3^4 + 2*y4^4)/(y2*y4^3))*h4",
    "h3 - (y3^3/y4^3)*h4",
]

EX2 = {
    "N": {
        (1, 1): "-(1/2)*(3 + x3)*y1",
        (2, 1): "-(3/4)*y2",
        (2, 2): "-(3/4)*y1",
        (3, 1): f"-(3/4)*y2^3/(y1^2*{_E2})",
        (3, 2): f"(9/4)*y2^2/(y1*{_E2})",
        (3, 3): "-y3*x1",
    },
    "PB": {
        (3, 1, 1, 1): f"-(9/2)*y2^3/(y1^4*{_E2})",
        (3, 1, 1, 2): f"(9/2)*y2^2/(y1^3*{_E2})",
        (3, 1, 2, 2): f"-(9/2)*y2/(y1^2*{_E2})",
        (3, 2, 2, 2): f"(9/2)/(y1*{_E2})",
    },
}
EX2_ZERO = "y2"
EX2_BRANCH_ZERO = ["h1", "h3"]
EX2_BRANCH_GENERIC = ["h1 + (y2/y1)*h2", "h3"]
EX2_WITNESS = ["-(1/2)*y1", "0", "y3"]   # components along dy1, dy2, dy3

EX3 = {
    "N": {
        (2, 2): "-(1/4)*(4*y2^3 + y3^3 + y4^3)/y2^2",
        (2, 3): "(3/4)*y3^2/y2",
        (2, 4): "(3/4)*y4^2/y2",
        (3, 2): "-(3/4)*y3",
        (3, 3): "-(3/4)*y2",
        (4, 2): "-(3/4)*y4",
        (4, 4): "-(3/4)*y2",
    },
    "RG": {
        (2, 2, 3): f"-(3/16)*y3^2*{_S3}/y2^4",
        (3, 2, 3): f"(3/16)*{_S3}/y2^2",
        (2, 2, 4): f"-(3/16)*y4^2*{_S3}/y2^4",
        (4, 2, 4): f"(3/16)*{_S3}/y2^2",
        (3, 3, 4): "(9/16)*y4^2/y2",
        (4, 3, 4): "-(9/16)*y3^2/y2",
    },
    "RB": {
        (2, 2, 2, 3): "(3/16)*(y2^3 + 4*y4^3 + 4*y3^3)*y3^2/y2^5",
        (2, 3, 2, 3): "-(3/16)*(2*y2^3 + 2*y4^3 + 5*y3^3)*y3/y2^4",
        (2, 4, 2, 3): "-(9/16)*y4^2*y3^2/y2^4",
        (3, 2, 2, 3): "(3/16)*(y2^3 - 2*y3^3 - 2*y4^3)/y2^3",
        (3, 3, 2, 3): "(9/16)*y3^2/y2^2",
        (3, 4, 2, 3): "(9/16)*y4^2/y2^2",
        (2, 2, 2, 4): "(3/16)*(y2^3 + 4*y4^3 + 4*y3^3)*y4^2/y2^5",
        (2, 3, 2, 4): "-(9/16)*y4^2*y3^2/y2^4",
        (2, 4, 2, 4): "-(3/16)*(2*y2^3 + 5*y4^3 + 2*y3^3)*y4/y2^4",
        (4, 2, 2, 4): "(3/16)*(y2^3 - 2*y3^3 - 2*y4^3)/y2^3",
        (4, 3, 2, 4): "(9/16)*y3^2/y2^2",
        (4, 4, 2, 4): "(9/16)*y4^2/y2^2",
        (3, 2, 3, 4): "-(9/16)*y4^2/y2^2",
        (3, 4, 3, 4): "(9/8)*y4/y2",
        (4, 2, 3, 4): "(9/16)*y3^2/y2^2",
        (4, 3, 3, 4): "-(9/8)*y3/y2",
    },
}
EX3_ZERO = _S3
EX3_RG_GENERIC = ["h1"]
EX3_RG_ZERO = ["h1", "h2"]
EX3_RB = ["h1"]
# RGZ^{x3}_{x3} coefficients of Z2 and Z4: as printed (bracket around the
# cubic sum missing) and as the contraction gives
EX3_RGZ_33_PRINTED = {2: "-(3*y2^3 + y3^3 + y4^3)/(16*y2^2)", 4: "9*y4^2/(16*y2)"}
EX3_RGZ_33 = {2: f"-(3/16)*{_S3}/y2^2", 4: "(9/16)*y4^2/y2"}

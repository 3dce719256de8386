# src/functions.py
"""
The 18 low-dimensional benchmark functions used to build the
low-effective-dimension test set, each on its native domain with its known
global minimum value and, where one is reliably known, a global minimizer.

Entries are listed alphabetically; the original numbering skips an entry 4,
so there are 18 rows.
"""
from functools import partial
from typing import List

import numpy as np

from src.models.problem import BaseFunction


def beale(x: np.ndarray) -> float:
    x1, x2 = x
    return (1.5 - x1 + x1 * x2) ** 2 + (2.25 - x1 + x1 * x2 ** 2) ** 2 + (2.625 - x1 + x1 * x2 ** 3) ** 2


def branin(x: np.ndarray) -> float:
    x1, x2 = x
    b = 5.1 / (4 * np.pi ** 2)
    c = 5 / np.pi
    t = 1 / (8 * np.pi)
    return (x2 - b * x1 ** 2 + c * x1 - 6) ** 2 + 10 * (1 - t) * np.cos(x1) + 10


def brent(x: np.ndarray) -> float:
    x1, x2 = x
    return (x1 + 10) ** 2 + (x2 + 10) ** 2 + np.exp(-x1 ** 2 - x2 ** 2)


def easom(x: np.ndarray) -> float:
    x1, x2 = x
    return -np.cos(x1) * np.cos(x2) * np.exp(-((x1 - np.pi) ** 2 + (x2 - np.pi) ** 2))


def goldstein_price(x: np.ndarray) -> float:
    x1, x2 = x
    a = 1 + (x1 + x2 + 1) ** 2 * (19 - 14 * x1 + 3 * x1 ** 2 - 14 * x2 + 6 * x1 * x2 + 3 * x2 ** 2)
    b = 30 + (2 * x1 - 3 * x2) ** 2 * (18 - 32 * x1 + 12 * x1 ** 2 + 48 * x2 - 36 * x1 * x2 + 27 * x2 ** 2)
    return a * b


_HARTMANN_C = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN3_A = np.array([[3.0, 10, 30], [0.1, 10, 35], [3.0, 10, 30], [0.1, 10, 35]])
_HARTMANN3_P = 1e-4 * np.array([[3689, 1170, 2673], [4699, 4387, 7470], [1091, 8732, 5547], [381, 5743, 8828]])
_HARTMANN6_A = np.array([
    [10, 3, 17, 3.5, 1.7, 8],
    [0.05, 10, 17, 0.1, 8, 14],
    [3, 3.5, 1.7, 10, 17, 8],
    [17, 8, 0.05, 10, 0.1, 14],
])
_HARTMANN6_P = 1e-4 * np.array([
    [1312, 1696, 5569, 124, 8283, 5886],
    [2329, 4135, 8307, 3736, 1004, 9991],
    [2348, 1451, 3522, 2883, 3047, 6650],
    [4047, 8828, 8732, 5743, 1091, 381],
])


def _hartmann(x: np.ndarray, a: np.ndarray, p: np.ndarray) -> float:
    return -float(_HARTMANN_C @ np.exp(-np.sum(a * (x[None, :] - p) ** 2, axis=1)))


def hartmann3(x: np.ndarray) -> float:
    return _hartmann(x, _HARTMANN3_A, _HARTMANN3_P)


def hartmann6(x: np.ndarray) -> float:
    return _hartmann(x, _HARTMANN6_A, _HARTMANN6_P)


def levy(x: np.ndarray) -> float:
    w = 1 + (x - 1) / 4
    head = np.sin(np.pi * w[0]) ** 2
    body = np.sum((w[:-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * w[:-1] + 1) ** 2))
    tail = (w[-1] - 1) ** 2 * (1 + np.sin(2 * np.pi * w[-1]) ** 2)
    return head + body + tail


def perm(x: np.ndarray, beta: float = 0.5) -> float:
    d = x.shape[0]
    j = np.arange(1, d + 1, dtype=float)
    powers = np.arange(1, d + 1, dtype=float)[:, None]
    inner = np.sum((j[None, :] ** powers + beta) * ((x[None, :] / j[None, :]) ** powers - 1), axis=1)
    return float(np.sum(inner ** 2))


def rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1) ** 2))


_SHEKEL_A = np.array([
    [4, 4, 4, 4],
    [1, 1, 1, 1],
    [8, 8, 8, 8],
    [6, 6, 6, 6],
    [3, 7, 3, 7],
    [2, 9, 2, 9],
    [5, 5, 3, 3],
    [8, 1, 8, 1],
    [6, 2, 6, 2],
    [7, 3.6, 7, 3.6],
], dtype=float)
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def shekel(x: np.ndarray, m: int) -> float:
    diff = x[None, :] - _SHEKEL_A[:m]
    return -float(np.sum(1.0 / (np.sum(diff ** 2, axis=1) + _SHEKEL_C[:m])))


def shubert(x: np.ndarray) -> float:
    i = np.arange(1, 6, dtype=float)
    return float(np.prod([np.sum(i * np.cos((i + 1) * xk + i)) for xk in x]))


def six_hump_camel(x: np.ndarray) -> float:
    x1, x2 = x
    return (4 - 2.1 * x1 ** 2 + x1 ** 4 / 3) * x1 ** 2 + x1 * x2 + (-4 + 4 * x2 ** 2) * x2 ** 2


def styblinski_tang(x: np.ndarray) -> float:
    return float(np.sum(x ** 4 - 16 * x ** 2 + 5 * x) / 2)


def trid(x: np.ndarray) -> float:
    return float(np.sum((x - 1) ** 2) - np.sum(x[1:] * x[:-1]))


def zettl(x: np.ndarray) -> float:
    x1, x2 = x
    return (x1 ** 2 + x2 ** 2 - 2 * x1) ** 2 + 0.25 * x1


def base_functions() -> List[BaseFunction]:
    """The benchmark table, alphabetical"""
    return [
        BaseFunction(name="Beale", dim=2, bounds=[(-4.5, 4.5)] * 2, evaluate=beale,
                     f_star=0.0, minimizers=[[3.0, 0.5]]),
        BaseFunction(name="Branin", dim=2, bounds=[(-5.0, 10.0), (0.0, 15.0)], evaluate=branin,
                     f_star=0.397887357729739,
                     minimizers=[[-np.pi, 12.275], [np.pi, 2.275], [9.42477796076938, 2.475]]),
        BaseFunction(name="Brent", dim=2, bounds=[(-10.0, 10.0)] * 2, evaluate=brent,
                     f_star=0.0, minimizers=[[-10.0, -10.0]]),
        BaseFunction(name="Easom", dim=2, bounds=[(-100.0, 100.0)] * 2, evaluate=easom,
                     f_star=-1.0, minimizers=[[np.pi, np.pi]]),
        BaseFunction(name="Goldstein-Price", dim=2, bounds=[(-2.0, 2.0)] * 2, evaluate=goldstein_price,
                     f_star=3.0, minimizers=[[0.0, -1.0]]),
        BaseFunction(name="Hartmann 3", dim=3, bounds=[(0.0, 1.0)] * 3, evaluate=hartmann3,
                     f_star=-3.86278214782076, minimizers=[[0.114614, 0.555649, 0.852547]]),
        BaseFunction(name="Hartmann 6", dim=6, bounds=[(0.0, 1.0)] * 6, evaluate=hartmann6,
                     f_star=-3.32236801141551,
                     minimizers=[[0.20168952, 0.15001069, 0.47687398, 0.27533243, 0.31165162, 0.65730054]]),
        BaseFunction(name="Levy", dim=6, bounds=[(-10.0, 10.0)] * 6, evaluate=levy,
                     f_star=0.0, minimizers=[[1.0] * 6]),
        BaseFunction(name="Perm 4 0.5", dim=4, bounds=[(-4.0, 4.0)] * 4, evaluate=perm,
                     f_star=0.0, minimizers=[[1.0, 2.0, 3.0, 4.0]]),
        BaseFunction(name="Rosenbrock", dim=7, bounds=[(-5.0, 10.0)] * 7, evaluate=rosenbrock,
                     f_star=0.0, minimizers=[[1.0] * 7]),
        BaseFunction(name="Shekel 5", dim=4, bounds=[(0.0, 10.0)] * 4,
                     evaluate=partial(shekel, m=5), f_star=-10.1532),
        BaseFunction(name="Shekel 7", dim=4, bounds=[(0.0, 10.0)] * 4,
                     evaluate=partial(shekel, m=7), f_star=-10.4029),
        BaseFunction(name="Shekel 10", dim=4, bounds=[(0.0, 10.0)] * 4,
                     evaluate=partial(shekel, m=10), f_star=-10.5364),
        BaseFunction(name="Shubert", dim=2, bounds=[(-10.0, 10.0)] * 2, evaluate=shubert,
                     f_star=-186.7309088310239),
        BaseFunction(name="Six-hump camel", dim=2, bounds=[(-3.0, 3.0), (-2.0, 2.0)], evaluate=six_hump_camel,
                     f_star=-1.031628453489877, minimizers=[[0.08984201368301331, -0.7126564032704135]]),
        BaseFunction(name="Styblinski-Tang", dim=8, bounds=[(-5.0, 5.0)] * 8, evaluate=styblinski_tang,
                     f_star=-39.16616570377142 * 8, minimizers=[[-2.903534018185960] * 8]),
        BaseFunction(name="Trid", dim=5, bounds=[(-25.0, 25.0)] * 5, evaluate=trid,
                     f_star=-30.0, minimizers=[[5.0, 8.0, 9.0, 8.0, 5.0]]),
        BaseFunction(name="Zettl", dim=2, bounds=[(-5.0, 5.0)] * 2, evaluate=zettl,
                     f_star=-0.003791237220468656, minimizers=[[-0.02989597760285287, 0.0]]),
    ]
